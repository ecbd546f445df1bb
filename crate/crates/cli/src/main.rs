fn main() {
    std::process::exit(spectral_instability::main_with_args(std::env::args_os()));
}
