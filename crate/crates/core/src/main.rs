fn main() {
    std::process::exit(riembed::cli::run(std::env::args_os()));
}
