fn main() {
    std::process::exit(perverse_stab::cli::run(std::env::args_os()));
}
