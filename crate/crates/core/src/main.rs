use std::io;

use clap::Parser;
use segre::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let code = run(config, &mut io::stdout().lock(), &mut io::stderr());
    std::process::exit(code);
}
