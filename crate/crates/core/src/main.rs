use std::process::ExitCode;

fn main() -> ExitCode {
    qmaml::cli::main_with(std::env::args_os())
}
