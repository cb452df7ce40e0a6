fn main() {
    std::process::exit(witent_cli::run(std::env::args_os()));
}
