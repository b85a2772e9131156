fn main() {
    std::process::exit(fblab::cli::run(std::env::args_os()));
}
