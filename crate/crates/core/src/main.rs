use clap::Parser;

fn main() {
    let cli = uncq::cli::Cli::parse();
    std::process::exit(uncq::cli::run(cli));
}
