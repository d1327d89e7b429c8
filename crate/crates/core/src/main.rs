use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut err = std::io::stderr().lock();
    if let Err(e) = framephase::cli::configure_threads() {
        let _ = writeln!(err, "error: {e}");
        return ExitCode::from(1);
    }
    let mut out = std::io::stdout().lock();
    let code = framephase::cli::run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
