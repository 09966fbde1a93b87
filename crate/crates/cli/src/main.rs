mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use serde_json::{json, Value};

use args::Cli;
use commands::{CliError, Context};

fn with_header(command: &str, doc: Value) -> Value {
    let mut out = json!({ "schema": output::SCHEMA, "command": command });
    match doc {
        Value::Object(map) => {
            for (k, v) in map {
                out[k] = v;
            }
        }
        other => out["result"] = other,
    }
    out
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let parsed = Cli::command()
        .try_get_matches_from(&argv)
        .and_then(|mut m| {
            let name = m.subcommand_name().unwrap_or_default().to_string();
            Cli::from_arg_matches_mut(&mut m).map(|cli| (cli, name))
        });
    let (cli, name) = match parsed {
        Ok(v) => v,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(1);
        }
    }
    let ctx = Context {
        seed: cli.global.seed,
        quiet: cli.global.quiet,
    };
    let stdout = std::io::stdout();
    match commands::run(&cli.command, &ctx) {
        Ok(outcome) => {
            let doc = with_header(&name, outcome.doc);
            let _ = stdout.lock().write_all(output::render(&doc, cli.global.format, outcome.table).as_bytes());
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Failure { message, payload }) => {
            eprintln!("error: {message}");
            let mut doc = with_header(&name, payload.unwrap_or_else(|| json!({})));
            doc["error"] = json!(message);
            let _ = stdout.lock().write_all(output::render(&doc, cli.global.format, None).as_bytes());
            ExitCode::from(2)
        }
    }
}
