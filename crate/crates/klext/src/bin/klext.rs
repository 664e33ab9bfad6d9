fn main() {
    std::process::exit(klext::cli::run());
}
