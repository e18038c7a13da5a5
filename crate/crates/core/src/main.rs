fn main() {
    std::process::exit(empathy_workbench::cli::main_with_args(std::env::args_os()));
}
