use std::process::ExitCode;

fn main() -> ExitCode {
    spinchannel::cli::main()
}
