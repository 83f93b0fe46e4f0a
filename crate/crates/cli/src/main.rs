fn main() {
    std::process::exit(slimebench::run(std::env::args_os()));
}
