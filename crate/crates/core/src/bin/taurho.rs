fn main() {
    std::process::exit(taurho::cli::run(std::env::args_os()));
}
