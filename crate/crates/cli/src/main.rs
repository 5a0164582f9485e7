fn main() {
    std::process::exit(invlab::cli::main_with_args(std::env::args_os()));
}
