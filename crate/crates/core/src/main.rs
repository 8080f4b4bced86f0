fn main() {
    std::process::exit(normlab::cli::run(std::env::args_os()));
}
