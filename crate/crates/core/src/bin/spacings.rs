fn main() {
    std::process::exit(discrete_spacings::cli::run(std::env::args_os()));
}
