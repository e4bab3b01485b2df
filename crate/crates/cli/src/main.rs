use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HSTARKIT_LOG", "warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    ExitCode::from(hstarkit_cli::run(std::env::args_os(), &mut out))
}
