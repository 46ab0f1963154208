fn main() {
    std::process::exit(depspec::cli::run(std::env::args_os()));
}
