fn main() -> std::process::ExitCode {
    multicubic::cli::main()
}
