use clap::Parser;

fn main() {
    let cli = pfmea::cli::Cli::parse();
    let code = pfmea::cli::run(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
