use std::process::ExitCode;

fn main() -> ExitCode {
    talentgraph::cli::run(std::env::args_os())
}
