fn main() {
    std::process::exit(spellvar::cli::main_with_args(std::env::args_os()));
}
