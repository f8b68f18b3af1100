fn main() {
    std::process::exit(varlab::cli::main());
}
