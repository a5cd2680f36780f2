fn main() {
    std::process::exit(beamdecay::cli::main());
}
