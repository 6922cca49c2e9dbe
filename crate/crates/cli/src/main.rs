fn main() {
    std::process::exit(ccrsim::main_with_std());
}
