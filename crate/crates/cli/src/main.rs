use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = pcentral_cli::run(std::env::args_os());
    if !outcome.summary.is_empty() {
        eprintln!("{}", outcome.summary.trim_end());
    }
    match &outcome.json_out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.json) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {
            let _ = std::io::stdout().write_all(outcome.json.as_bytes());
        }
    }
    ExitCode::from(outcome.code as u8)
}
