fn main() {
    std::process::exit(chordal_forge::cli::run(std::env::args_os()));
}
