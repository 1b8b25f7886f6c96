use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qps_casimir::config::{parse_config, ConfigOverrides, RunConfig};
use qps_casimir::conventions::{ConventionRecord, Pairing, SignPattern};
use qps_casimir::family::CasimirOrder;
use qps_casimir::report::{
    classification_document, combined_document, conventions_document, format_by_name,
    spectrum_document, suite_document, Document,
};
use qps_casimir::suite::run_suite;
use qps_casimir::sweep::resolve_conventions;
use qps_casimir::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qps-casimir",
    version,
    about = "Verify u(1,4) Casimir operators on explicit matrix representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Bosonic occupation cutoff per mode.
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Levels below the cutoff excluded from the safe subspace.
    #[arg(long, global = true)]
    safe_margin: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Numeric tolerance (num_tol) for results that pass through exponentials.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_parser = ["json", "csv", "md"])]
    format: Option<String>,
    /// `key = value` configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Record per-check wall time (makes reports run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[arg(long, global = true)]
    zeta_star: Option<SignArg>,
    #[arg(long, global = true)]
    z_star: Option<SignArg>,
    #[arg(long, global = true)]
    fermionic_c2: Option<PairingArg>,
    #[arg(long, global = true)]
    bosonic_c2: Option<PairingArg>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SignArg {
    PlusEta,
    MinusEta,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum PairingArg {
    Literal,
    Transposed,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Tabulate a Casimir spectrum.
    Spectrum {
        #[arg(long)]
        rep: String,
        #[arg(long, default_value_t = 1)]
        casimir: u8,
        /// Largest total occupation included.
        #[arg(long)]
        max_total: Option<usize>,
    },
    /// Charge table of the 32 fermionic basis states.
    Classify,
    /// Score all sixteen convention combinations.
    Conventions,
    /// Suite results, spectra, classification and sweep in one document.
    Report {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, Error> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                Some(parse_config(&text)?)
            }
            None => None,
        };
        let flags = ConfigOverrides {
            cutoff: self.cutoff,
            safe_margin: self.safe_margin,
            seed: self.seed,
            num_tol: self.tol,
            format: self.format.clone(),
            ..Default::default()
        };
        let mut cfg = RunConfig::resolve(file.as_ref(), &flags)?;
        if self.zeta_star.is_some()
            || self.z_star.is_some()
            || self.fermionic_c2.is_some()
            || self.bosonic_c2.is_some()
        {
            let d = ConventionRecord::default();
            let sign = |a: Option<SignArg>, s: [i8; 5]| match a {
                Some(SignArg::PlusEta) => SignPattern::PlusEta.signs(),
                Some(SignArg::MinusEta) => SignPattern::MinusEta.signs(),
                None => s,
            };
            let pairing = |a: Option<PairingArg>, p: Pairing| match a {
                Some(PairingArg::Literal) => Pairing::Literal,
                Some(PairingArg::Transposed) => Pairing::Transposed,
                None => p,
            };
            cfg.conventions = Some(ConventionRecord {
                zeta_star_sign: sign(self.zeta_star, d.zeta_star_sign),
                z_star_sign: sign(self.z_star, d.z_star_sign),
                fermionic_c2_pairing: pairing(self.fermionic_c2, d.fermionic_c2_pairing),
                bosonic_c2_pairing: pairing(self.bosonic_c2, d.bosonic_c2_pairing),
            });
        }
        Ok(cfg)
    }
}

fn execute(cli: &Cli) -> Result<(String, bool), Error> {
    let cfg = cli.common.resolve()?;
    let timings = cli.common.timings;
    let (doc, ok): (Document, bool) = match &cli.command {
        Command::Verify { suite } => {
            let r = run_suite(&cfg, suite, timings)?;
            (suite_document(&cfg, &r), r.passed)
        }
        Command::Spectrum {
            rep,
            casimir,
            max_total,
        } => {
            let order = CasimirOrder::from_degree(*casimir)?;
            (spectrum_document(&cfg, rep, order, *max_total)?, true)
        }
        Command::Classify => (classification_document(&cfg)?, true),
        Command::Conventions => {
            let r = resolve_conventions(cfg.cutoff, cfg.safe_margin, &cfg.tolerances)?;
            let ok = r.default_is_best();
            (conventions_document(&cfg, &r), ok)
        }
        Command::Report { suite } => {
            let r = run_suite(&cfg, suite, timings)?;
            (combined_document(&cfg, &r)?, r.passed)
        }
    };
    Ok((format_by_name(&cfg.format)?.render(&doc)?, ok))
}

fn exit_for(e: &Error) -> u8 {
    if e.is_usage() {
        EXIT_USAGE
    } else {
        EXIT_INTERNAL
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok((text, ok)) => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_INTERNAL);
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_exit_codes() {
        assert_eq!(exit_for(&Error::Config("line 1: x".into())), EXIT_USAGE);
        assert_eq!(
            exit_for(&Error::ExpNonConvergence("norm".into())),
            EXIT_INTERNAL
        );
    }
}
