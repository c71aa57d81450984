fn main() {
    std::process::exit(staircase_cli::run(std::env::args_os()));
}
