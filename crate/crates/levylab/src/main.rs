fn main() {
    std::process::exit(levylab::cli::run_cli(std::env::args_os()));
}
