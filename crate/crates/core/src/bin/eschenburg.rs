fn main() {
    std::process::exit(eschenburg::cli::run(std::env::args_os()));
}
