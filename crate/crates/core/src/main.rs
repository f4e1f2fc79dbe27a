fn main() {
    std::process::exit(wzgain::cli::main_with_args(std::env::args_os()));
}
