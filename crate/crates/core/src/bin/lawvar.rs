fn main() {
    std::process::exit(lawvar::cli::run(std::env::args_os()));
}
