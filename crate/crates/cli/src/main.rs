use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let bound = std::env::var(fmkit_cli::COUNT_BOUND_VAR).ok();
    let code = fmkit_cli::run(
        &args,
        bound.as_deref(),
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
