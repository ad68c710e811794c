use std::process::ExitCode;

use clap::Parser;

use hgzeros_cli::report::{error_document, exit_code, EXIT_USAGE};
use hgzeros_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let doc = serde_json::json!({
                "error": { "exit_code": EXIT_USAGE, "kind": "usage", "message": e.to_string().trim() }
            });
            eprintln!("{doc}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            let doc = error_document(&err);
            eprintln!("{doc}");
            let out = &cli.command.common().out;
            if std::fs::create_dir_all(out).is_ok() {
                let _ = std::fs::write(out.join("error.json"), format!("{doc:#}\n"));
            }
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
