fn main() {
    std::process::exit(noisy_codes::cli::main_with_args(std::env::args_os()));
}
