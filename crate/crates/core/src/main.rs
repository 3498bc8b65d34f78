fn main() {
    std::process::exit(nsbounds::cli::run(std::env::args_os()));
}
