fn main() {
    std::process::exit(mzv::cli::run(std::env::args_os()));
}
