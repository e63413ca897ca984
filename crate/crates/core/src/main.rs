fn main() {
    std::process::exit(qbattery::cli::main_with_args(std::env::args_os()));
}
