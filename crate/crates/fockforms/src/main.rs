use clap::Parser;
use fockforms::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let (code, report) = run(&config);
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &report) {
                eprintln!("error: cannot write {}: {e}", path.display());
                std::process::exit(2);
            }
        }
        None => print!("{report}"),
    }
    std::process::exit(code);
}
