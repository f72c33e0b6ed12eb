fn main() {
    std::process::exit(dp2ep_cli::run(std::env::args().collect()));
}
