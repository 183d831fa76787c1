use clap::Parser;

fn main() -> std::process::ExitCode {
    grothmodt::cli::run(grothmodt::cli::Cli::parse())
}
