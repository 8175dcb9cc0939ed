use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_db = std::env::var("FLOERHP_DB").ok();
    let out = floerhp_cli::run_with_env(std::env::args_os(), env_db);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code)
}
