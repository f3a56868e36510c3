fn main() {
    std::process::exit(polypos::cli::main_with_args(std::env::args_os()));
}
