fn main() {
    std::process::exit(tiledag_cli::run(std::env::args_os()));
}
