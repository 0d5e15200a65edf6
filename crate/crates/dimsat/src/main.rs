fn main() {
    std::process::exit(dimsat::cli::run_from_args());
}
