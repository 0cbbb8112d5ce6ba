fn main() {
    std::process::exit(cohomod::cli::run(std::env::args_os()));
}
