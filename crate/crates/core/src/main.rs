fn main() -> std::process::ExitCode {
    spin7_flat::cli::main()
}
