fn main() {
    std::process::exit(palindist::cli::run(std::env::args_os()));
}
