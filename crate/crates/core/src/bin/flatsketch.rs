fn main() {
    std::process::exit(flatsketch::cli::run(std::env::args_os()));
}
