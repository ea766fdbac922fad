fn main() {
    std::process::exit(dfa_decomp::cli::main());
}
