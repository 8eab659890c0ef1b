use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(trideal_cli::run(std::env::args_os()))
}
