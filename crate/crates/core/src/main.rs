fn main() {
    std::process::exit(stickysym::cli::run(std::env::args_os()));
}
