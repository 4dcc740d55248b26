use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(expdiff::cli::main_entry() as u8)
}
