fn main() {
    std::process::exit(kleinian_tree::cli::run(std::env::args_os()));
}
