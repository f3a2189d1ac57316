fn main() {
    std::process::exit(qsc::cli::main_with(std::env::args_os().collect()));
}
