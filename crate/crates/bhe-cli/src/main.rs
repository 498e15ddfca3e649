fn main() {
    std::process::exit(bhe_cli::run(std::env::args_os()));
}
