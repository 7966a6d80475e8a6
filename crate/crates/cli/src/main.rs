fn main() {
    std::process::exit(dfp_cli::run(std::env::args_os()));
}
