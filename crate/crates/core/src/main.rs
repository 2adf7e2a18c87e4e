fn main() {
    std::process::exit(privcal::cli::run());
}
