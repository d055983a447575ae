fn main() {
    std::process::exit(ringwalk::cli::main_with_args(std::env::args_os()));
}
