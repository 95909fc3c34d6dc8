fn main() {
    std::process::exit(ontoreshape::cli::run_cli(std::env::args_os()));
}
