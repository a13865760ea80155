fn main() {
    std::process::exit(numrange::cli::main_from_env());
}
