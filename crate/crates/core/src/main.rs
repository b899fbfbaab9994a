fn main() {
    std::process::exit(inna_lab::cli::main_with_args(std::env::args_os()));
}
