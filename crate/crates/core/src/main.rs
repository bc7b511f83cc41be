use clap::Parser;
use maxlab::harness::cli::Cli;
use maxlab::harness::run_command;

fn main() {
    let cli = Cli::parse();
    std::process::exit(run_command(&cli.command).code());
}
