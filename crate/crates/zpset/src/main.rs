fn main() {
    std::process::exit(zpset::cli::main());
}
