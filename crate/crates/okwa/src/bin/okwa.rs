fn main() { std::process::exit(okwa::cli::run_cli(std::env::args().collect())); }
