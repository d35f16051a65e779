fn main() {
    geodesic_spanner::cli::init_threads();
    std::process::exit(geodesic_spanner::cli::run_from(std::env::args_os()));
}
