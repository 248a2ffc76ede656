fn main() {
    std::process::exit(arrivalkit::cli::run());
}
