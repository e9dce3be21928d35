use clap::Parser;

fn main() {
    let cli = anyonic_cli::Cli::parse();
    if let Err(e) = anyonic_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
