use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(shotdepth::cli::run(std::env::args_os()))
}
