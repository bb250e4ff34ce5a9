fn main() {
    std::process::exit(powlab::cli::main());
}
