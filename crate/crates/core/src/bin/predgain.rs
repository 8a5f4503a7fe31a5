fn main() {
    std::process::exit(predgain::experiment::cli::main_with_args(
        std::env::args_os(),
    ));
}
