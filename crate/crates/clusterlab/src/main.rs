fn main() {
    std::process::exit(clusterlab::cli::run(std::env::args().collect()));
}
