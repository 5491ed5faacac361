use clap::Parser;
use drazinlab_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    std::process::exit(drazinlab_cli::run(&cli));
}
