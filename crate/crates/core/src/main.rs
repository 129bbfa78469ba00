use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(catcost::cli::run())
}
