fn main() {
    std::process::exit(ballfield::cli::main_with_args(std::env::args_os()));
}
