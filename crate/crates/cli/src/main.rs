fn main() {
    std::process::exit(socios_cli::run(std::env::args_os()));
}
