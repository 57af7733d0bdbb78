fn main() {
    std::process::exit(gfd_cli::main_with_args(std::env::args_os()));
}
