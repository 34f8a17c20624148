fn main() {
    std::process::exit(ffgeom::cli::run(std::env::args()));
}
