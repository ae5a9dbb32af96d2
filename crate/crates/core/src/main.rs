use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = qlfd::cli::run_from(std::env::args_os());
    let mut stream: Box<dyn Write> = if out.code == 1 { Box::new(std::io::stderr()) } else { Box::new(std::io::stdout()) };
    let _ = stream.write_all(out.output.as_bytes());
    ExitCode::from(out.code as u8)
}
