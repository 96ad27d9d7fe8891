fn main() {
    std::process::exit(hyperstutter::cli::run(std::env::args_os()));
}
