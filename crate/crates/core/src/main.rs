fn main() {
    std::process::exit(bayes_pricing::cli::run(std::env::args_os()));
}
