use clap::Parser;

use regvar::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for warning in &outcome.warnings {
                eprintln!("warning: {warning}");
            }
            for path in &outcome.artifacts {
                println!("wrote {}", path.display());
            }
        }
        Err(e) => {
            let payload = serde_json::json!({
                "error": { "category": e.category(), "message": e.to_string() }
            });
            eprintln!("{payload}");
            std::process::exit(e.exit_code());
        }
    }
}
