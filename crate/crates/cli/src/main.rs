fn main() {
    std::process::exit(ucluster_cli::main_with_args(std::env::args_os()));
}
