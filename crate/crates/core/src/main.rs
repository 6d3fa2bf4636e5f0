fn main() {
    std::process::exit(seqsem::cli::run(std::env::args_os()));
}
