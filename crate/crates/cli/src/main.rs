fn main() {
    std::process::exit(scalespace_cli::main_with(std::env::args_os()));
}
