use clap::Parser;

fn main() {
    let cli = cyclophi_cli::Cli::parse();
    std::process::exit(cyclophi_cli::run(cli));
}
