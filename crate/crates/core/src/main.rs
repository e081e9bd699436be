fn main() {
    std::process::exit(mpmab::cli::main_with_args(std::env::args_os()));
}
