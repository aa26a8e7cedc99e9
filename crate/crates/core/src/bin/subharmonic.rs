fn main() {
    std::process::exit(subharmonic::cli::run_from(std::env::args_os()));
}
