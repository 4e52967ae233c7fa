fn main() {
    std::process::exit(nilcone_lab::cli::run(std::env::args_os()));
}
