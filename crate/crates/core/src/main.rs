fn main() {
    std::process::exit(cospacings::cli::main_with_args(std::env::args_os()));
}
