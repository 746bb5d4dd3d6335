fn main() {
    std::process::exit(spiral_delone::cli::run(std::env::args_os()));
}
