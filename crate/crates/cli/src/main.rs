use clap::Parser;

fn main() {
    std::process::exit(dunkl_cli::run(dunkl_cli::Cli::parse()));
}
