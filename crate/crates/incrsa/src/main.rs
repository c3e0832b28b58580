use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(incrsa::cli::main())
}
