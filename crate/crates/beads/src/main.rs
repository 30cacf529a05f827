fn main() {
    std::process::exit(beads::cli::run(std::env::args_os()));
}
