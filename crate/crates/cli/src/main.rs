use clap::Parser;
use ramsey_fit_cli::{run_experiment, ExperimentConfig};
use std::process::ExitCode;

fn main() -> ExitCode {
    let config = match ExperimentConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors.
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let report = run_experiment(&config);
    let text = report.to_json();
    match &config.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write report to {}: {e}", path.display());
                print!("{text}");
                return ExitCode::from(3);
            }
        }
        None => print!("{text}"),
    }
    if let Some(err) = &report.error {
        eprintln!("error: {err}");
    }
    ExitCode::from(report.exit_code as u8)
}
