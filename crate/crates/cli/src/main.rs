fn main() {
    std::process::exit(memmap_cli::run(std::env::args_os()));
}
