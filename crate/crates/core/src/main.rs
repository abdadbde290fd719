fn main() {
    std::process::exit(kicktop::cli::run(std::env::args_os()));
}
