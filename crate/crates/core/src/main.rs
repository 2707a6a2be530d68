fn main() {
    std::process::exit(supersingular::cli::main_with_args(std::env::args_os()));
}
