use clap::Parser;
use vc_reduce::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
