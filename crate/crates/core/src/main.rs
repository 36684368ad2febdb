fn main() {
    std::process::exit(optrelay::cli::run(std::env::args_os()));
}
