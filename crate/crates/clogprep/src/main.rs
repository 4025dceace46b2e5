fn main() {
    std::process::exit(clogprep::cli::run(std::env::args_os()));
}
