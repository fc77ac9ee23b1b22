fn main() {
    std::process::exit(pacs_mzi::cli::run())
}
