fn main() -> std::process::ExitCode {
    radloc::cli::main()
}
