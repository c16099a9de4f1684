fn main() {
    std::process::exit(ovaltrack_cli::cli::run(std::env::args_os()));
}
