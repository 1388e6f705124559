use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    hpqe_cli::run_cli(std::env::args_os(), &mut stdout.lock())
}
