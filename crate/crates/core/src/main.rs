fn main() {
    std::process::exit(genestream::cli::main_with_args(std::env::args_os()));
}
