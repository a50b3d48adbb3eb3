use std::io::Write;
use std::process::ExitCode;

use superfock_core::cli;

fn main() -> ExitCode {
    if let Err(e) = cli::init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let out = cli::run_args(std::env::args_os());
    let mut stream: Box<dyn Write> = if out.code == 2 {
        Box::new(std::io::stderr())
    } else {
        Box::new(std::io::stdout())
    };
    let _ = stream.write_all(out.output.as_bytes());
    ExitCode::from(out.code as u8)
}
