fn main() {
    std::process::exit(loadshare::cli::main());
}
