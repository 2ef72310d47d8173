fn main() {
    std::process::exit(quantum_flow::cli::run(std::env::args_os()));
}
