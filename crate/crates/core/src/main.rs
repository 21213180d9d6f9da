fn main() {
    std::process::exit(impact_probe::cli::main_with_args(std::env::args_os()));
}
