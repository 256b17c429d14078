use clap::Parser;

use gauge_pairs::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let result = run(&cli);
    if result.exit_code() == 0 {
        print!("{}", result.payload);
    } else {
        eprint!("{}", result.payload);
    }
    std::process::exit(result.exit_code());
}
