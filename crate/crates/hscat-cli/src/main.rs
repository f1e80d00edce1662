use clap::Parser;

fn main() {
    let cli = hscat_cli::Cli::parse();
    match hscat_cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}
