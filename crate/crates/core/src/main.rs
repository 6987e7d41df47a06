fn main() {
    std::process::exit(lattice_fusion::cli_main());
}
