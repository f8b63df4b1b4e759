fn main() {
    std::process::exit(heavytail_cs_cli::run(std::env::args_os()));
}
