fn main() {
    std::process::exit(sac::cli::run());
}
