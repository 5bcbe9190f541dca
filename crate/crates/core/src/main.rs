fn main() {
    std::process::exit(surfspline::harness::cli::run(std::env::args_os()));
}
