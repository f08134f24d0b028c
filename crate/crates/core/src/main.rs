fn main() { std::process::exit(sparse_sunit::reports::run_command(std::env::args_os())); }
