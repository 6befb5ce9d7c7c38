use std::process::ExitCode;

use clap::Parser;
use gkm_cli::{output_destination, run, Cli, Format};

fn main() -> ExitCode {
    // GKMLAB_THREADS caps the worker pool used by the parallel solves
    if let Ok(threads) = std::env::var("GKMLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    let (format, out) = output_destination(&cli);
    match run(&cli) {
        Ok(result) => {
            let rendered = match format {
                Format::Table => result.table,
                Format::Json => {
                    serde_json::to_string_pretty(&result.json).expect("serializable") + "\n"
                }
            };
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{rendered}"),
            }
            ExitCode::from(u8::try_from(result.exit).unwrap_or(2))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
