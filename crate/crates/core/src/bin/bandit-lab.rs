use clap::Parser;

use bandit_lab::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let code = execute(
        cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
