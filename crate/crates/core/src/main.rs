fn main() {
    std::process::exit(bspline_core::cli::run_from_env());
}
