fn main() {
    std::process::exit(lame3::cli::run());
}
