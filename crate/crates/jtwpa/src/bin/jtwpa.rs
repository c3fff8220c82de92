//! Thin binary wrapper: parse arguments, run, and translate any error
//! into a machine-readable JSON line on stderr plus a stable exit code
//! (0 success, 2 validation, 3 numerics, 4 I/O).

use clap::Parser;
use jtwpa::cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        let report = serde_json::json!({
            "kind": e.kind(),
            "message": e.to_string(),
            "exit_code": e.exit_code(),
        });
        eprintln!("{report}");
        std::process::exit(e.exit_code());
    }
}
