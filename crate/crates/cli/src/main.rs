fn main() {
    std::process::exit(hotstreak_cli::run_command(std::env::args_os()));
}
