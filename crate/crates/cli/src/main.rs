use clap::Parser;

fn main() {
    let cli = fibising_cli::Cli::parse();
    std::process::exit(fibising_cli::run(cli));
}
