fn main() {
    std::process::exit(incidence::cli::run());
}
