fn main() {
    std::process::exit(autotar::cli::main());
}
