fn main() {
    std::process::exit(gazecenter::cli::run(std::env::args_os()));
}
