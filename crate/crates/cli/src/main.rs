fn main() {
    std::process::exit(resokit_cli::run(std::env::args_os()));
}
