fn main() {
    let code = llab_core::cli::run(std::env::args_os());
    std::process::exit(code);
}
