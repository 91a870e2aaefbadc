use std::process::ExitCode;

fn main() -> ExitCode {
    // NOMGAME_THREADS caps the worker pool used by sweeps and verification.
    if let Ok(n) = std::env::var("NOMGAME_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
    ExitCode::from(nomgame::cli::run(std::env::args()) as u8)
}
