use clap::Parser;

fn main() {
    let cli = linheight::cli::Cli::parse();
    std::process::exit(linheight::cli::execute(cli));
}
