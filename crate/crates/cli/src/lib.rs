//! Command-line front end for `nrange-core`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid flags,
//! 3 unparsable input file, 4 domain error, 5 I/O failure.

pub mod args;
pub mod compute;
pub mod error;
pub mod files;
pub mod reproduce;
pub mod svg;
pub mod verify;

use args::{Cli, Command};
use error::{exit, CliResult};

/// Runs a parsed command line. Tables and written paths go to stdout,
/// diagnostics to stderr; the returned value is the process exit code.
pub fn execute(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Compute(a) => {
            for p in compute::run(a)? {
                println!("{}", p.display());
            }
            Ok(exit::OK)
        }
        Command::Reproduce(a) => {
            for p in reproduce::run(a)? {
                println!("{}", p.display());
            }
            Ok(exit::OK)
        }
        Command::Verify(a) => {
            let settings = verify::Settings { seed: a.seed, tol: a.tol, perturb: a.perturb };
            let checks = verify::run(a.suite, &settings);
            print!("{}", verify::table(&checks));
            let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
            for c in &failed {
                eprintln!(
                    "FAILED {}: {}: {}",
                    c.suite,
                    c.name,
                    c.instance.as_deref().unwrap_or("(no instance recorded)")
                );
            }
            Ok(if failed.is_empty() { exit::OK } else { exit::VERIFY_FAILED })
        }
    }
}
