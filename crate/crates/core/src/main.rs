fn main() {
    std::process::exit(polydual::cli::run(std::env::args_os()));
}
