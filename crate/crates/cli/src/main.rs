use clap::Parser;
use polydiff_cli::{run, Cli, SEED_VAR};

fn main() {
    let cli = Cli::parse();
    let seed = std::env::var(SEED_VAR).ok();
    std::process::exit(run(&cli, seed.as_deref()));
}
