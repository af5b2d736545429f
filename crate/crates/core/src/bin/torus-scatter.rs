fn main() {
    std::process::exit(torus_scatter::cli::main());
}
