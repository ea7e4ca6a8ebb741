fn main() {
    std::process::exit(transverify::cli::main_with_args(std::env::args_os()));
}
