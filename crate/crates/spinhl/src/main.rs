use std::io;
use std::process::ExitCode;

use spinhl::config::SEED_VAR;

fn main() -> ExitCode {
    let env_seed = std::env::var(SEED_VAR).ok();
    let code = spinhl::run(std::env::args_os(), env_seed.as_deref(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
