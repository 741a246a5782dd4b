use clap::Parser;

fn main() {
    std::process::exit(ndlab_service::cli::run(ndlab_service::cli::Cli::parse()));
}
