fn main() {
    std::process::exit(diffuse_core::cli::main_from_env());
}
