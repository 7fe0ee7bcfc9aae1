fn main() {
    std::process::exit(ic_paths_cli::run(std::env::args_os()));
}
