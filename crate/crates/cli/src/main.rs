use clap::Parser;
use ktoeplitz_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
        }
        Err(e) => {
            eprintln!("ktoeplitz {}: {e}", cli.command.name());
            std::process::exit(e.exit_code());
        }
    }
}
