fn main() {
    std::process::exit(splicesig::cli::run());
}
