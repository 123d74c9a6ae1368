fn main() {
    std::process::exit(fdcap::cli::run(std::env::args_os()));
}
