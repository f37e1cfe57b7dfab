fn main() {
    std::process::exit(unirat::cli::run(std::env::args_os()));
}
