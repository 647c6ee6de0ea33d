use clap::Parser;
use varuq_cli::cli::Cli;

fn main() {
    let cli = Cli::parse();
    match varuq_cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(varuq_cli::exit_code_for(&e));
        }
    }
}
