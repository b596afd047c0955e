fn main() {
    std::process::exit(lpcentroid::cli::execute(std::env::args_os()));
}
