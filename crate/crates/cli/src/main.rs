use std::process::ExitCode;

use clap::Parser;
use superdeform_cli::{run, CommandConfig};

fn main() -> ExitCode {
    let config = CommandConfig::parse();
    match run(&config) {
        Ok(outcome) => {
            let json = serde_json::to_string_pretty(&outcome.json).expect("json value serializes");
            match &config.output {
                Some(path) => {
                    println!("{}", outcome.text);
                    if let Err(e) = std::fs::write(path, json + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                // plain values go to stdout as is; reports keep stdout for JSON
                None if outcome.json.get("check").is_none() => println!("{}", outcome.text),
                None => {
                    eprintln!("{}", outcome.text);
                    println!("{json}");
                }
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
