fn main() {
    std::process::exit(rball_cli::run(std::env::args_os()));
}
