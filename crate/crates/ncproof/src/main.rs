use clap::Parser;

fn main() {
    let cli = ncproof::cli::Cli::parse();
    std::process::exit(ncproof::cli::run(cli));
}
