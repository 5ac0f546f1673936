use std::process;

fn main() {
    process::exit(trustlens::cli::run(std::env::args_os()));
}
