fn main() {
    std::process::exit(percolab_cli::main_with(std::env::args_os()));
}
