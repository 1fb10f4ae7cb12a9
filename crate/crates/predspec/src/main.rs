fn main() {
    std::process::exit(predspec::cli::run(std::env::args_os()));
}
