fn main() {
    std::process::exit(relay_arq::cli::run(std::env::args_os()));
}
