fn main() {
    std::process::exit(bpwl::cli::run(std::env::args_os()));
}
