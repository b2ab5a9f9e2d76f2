fn main() {
    std::process::exit(siderand::cli::run_cli(std::env::args_os()));
}
