fn main() {
    std::process::exit(vecopt::cli::cli_main(std::env::args_os()));
}
