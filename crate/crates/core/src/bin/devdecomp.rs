fn main() {
    std::process::exit(deviatoric::cli::run(std::env::args_os()));
}
