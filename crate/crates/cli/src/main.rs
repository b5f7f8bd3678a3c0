fn main() {
    std::process::exit(mqi_cli::run(std::env::args_os()));
}
