fn main() {
    std::process::exit(bncurve::cli::run(std::env::args_os()));
}
