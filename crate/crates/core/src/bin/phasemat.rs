use clap::Parser;

use phasemat::cli::{run_and_write, Cli, CommandConfig};

fn main() {
    let config = CommandConfig::from(Cli::parse());
    std::process::exit(run_and_write(&config));
}
