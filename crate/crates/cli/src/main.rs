fn main() {
    std::process::exit(nusamp_cli::run_cli(std::env::args_os()));
}
