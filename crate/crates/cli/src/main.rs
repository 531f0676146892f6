use clap::Parser;
use green_cli::commands;

fn main() {
    let cli = commands::Cli::parse();
    std::process::exit(commands::run(cli));
}
