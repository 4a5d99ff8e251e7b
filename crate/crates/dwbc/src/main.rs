use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dwbc::{run, RunConfig};

fn emit(config: &RunConfig, doc: &serde_json::Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    text.push('\n');
    match &config.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let (doc, code) = match run(&config) {
        Ok(report) => {
            let code = report.exit_code();
            (report.document, code)
        }
        Err(e) => {
            eprintln!("dwbc: {e}");
            (e.to_json(), e.exit_code())
        }
    };
    if let Err(e) = emit(&config, &doc) {
        eprintln!("dwbc: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
