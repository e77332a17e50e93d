fn main() {
    std::process::exit(qshuffle::cli::main());
}
