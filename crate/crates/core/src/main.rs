fn main() {
    std::process::exit(pottsb::cli::run());
}
