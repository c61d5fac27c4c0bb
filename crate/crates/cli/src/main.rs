fn main() {
    std::process::exit(carpetq_cli::run(std::env::args_os()));
}
