fn main() {
    std::process::exit(gptherm::cli::main_with_args(std::env::args_os()));
}
