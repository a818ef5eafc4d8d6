fn main() {
    std::process::exit(bfgp_cli::run_cli(std::env::args_os()));
}
