fn main() {
    std::process::exit(vector_split::harness::run_cli(std::env::args_os()));
}
