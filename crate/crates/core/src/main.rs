fn main() {
    std::process::exit(minfact::cli::run(std::env::args_os()));
}
