fn main() {
    std::process::exit(irrfib::cli::main_with_args(std::env::args_os()));
}
