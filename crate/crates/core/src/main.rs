fn main() {
    std::process::exit(conic::cli::run(std::env::args_os()));
}
