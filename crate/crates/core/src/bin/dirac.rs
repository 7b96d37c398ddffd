fn main() {
    std::process::exit(dirac_core::cli::main_with(std::env::args_os()));
}
