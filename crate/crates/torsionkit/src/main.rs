//! Command line driver for the presentation checkers.
//!
//! `check` compares the torsion side of a comparison statement against its
//! determinant side and exits 0 when the verdict is equal, 2 otherwise;
//! `det-form` prints the cohomology determinant of a file's cup form;
//! `fox` prints one free derivative; `selftest` runs the bundled examples.
//! Input problems exit 1, with a line number when the parser can point at
//! one.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use torsionkit::detform::{form_determinant, sign_refine};
use torsionkit::fox::higher_fox_derivative;
use torsionkit::pipeline::{
    check_integral_theorem, check_massey_theorem, check_mod_r_theorem, cup_form_from_expansions,
    import_presentation, parse_presentation, ImportedPresentation, TheoremReport, Verdict,
};
use torsionkit::poly::{monomial_name, MultiPoly};
use torsionkit::{Error, Result};

#[derive(Parser)]
#[command(
    name = "torsionkit",
    version,
    about = "exact torsion and determinant-form checks for group presentations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// torsion numerator vs. cup-form determinant over Z
    Integral,
    /// the same comparison over Z/r for a prime power r
    Modr,
    /// higher-order form extracted from iterated derivatives
    Massey,
}

#[derive(Subcommand)]
enum Command {
    /// Compare the torsion side against the determinant side
    Check {
        /// presentation file
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// modulus for --mode modr, a prime power
        #[arg(long)]
        r: Option<u64>,
        /// form order for --mode massey
        #[arg(long)]
        m: Option<usize>,
        /// 1-based column to strike; must map to an infinite-order class
        #[arg(long, default_value_t = 1)]
        strike: usize,
        /// also write the JSON report to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the cohomology determinant of the file's cup form
    DetForm {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print the free derivative of one relator by one generator
    Fox {
        #[arg(long)]
        input: PathBuf,
        /// 1-based relator index
        #[arg(long)]
        relator: usize,
        /// 1-based generator index; repeat derivatives with a comma list
        #[arg(long, value_delimiter = ',')]
        var: Vec<usize>,
    },
    /// Run the bundled examples end to end
    Selftest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Check { input, mode, r, m, strike, json } => {
            let imported = import_presentation(&input)?;
            let imported = match mode {
                // power rows are part of the mod-r shape; only the other
                // modes want the presentation brought to nice block form
                Mode::Modr => imported,
                _ => normalized(imported)?,
            };
            let report = match mode {
                Mode::Integral => check_integral_theorem(&imported.np, strike)?,
                Mode::Modr => {
                    let r = r.ok_or_else(|| {
                        Error::Invalid("--mode modr needs --r <prime power>".into())
                    })?;
                    check_mod_r_theorem(&imported.np, r, strike)?
                }
                Mode::Massey => {
                    let m = m.ok_or_else(|| {
                        Error::Invalid("--mode massey needs --m <order>".into())
                    })?;
                    check_massey_theorem(&imported.np, m, strike)?
                }
            };
            let text = report.to_json();
            println!("{text}");
            if let Some(path) = json {
                fs::write(path, text + "\n")?;
            }
            Ok(exit_for(&report))
        }
        Command::DetForm { input } => {
            let imported = normalized(import_presentation(&input)?)?;
            let f = cup_form_from_expansions(&imported.np)?;
            let d = sign_refine(&form_determinant(&f)?, 1)?;
            println!("{}", poly_text(&d));
            Ok(ExitCode::SUCCESS)
        }
        Command::Fox { input, relator, var } => {
            let imported = import_presentation(&input)?;
            let p = &imported.np.presentation;
            if relator == 0 || relator > p.relators.len() {
                return Err(Error::Invalid(format!(
                    "relator index {relator} outside 1..{}",
                    p.relators.len()
                )));
            }
            if var.is_empty() {
                return Err(Error::Invalid("--var needs at least one index".into()));
            }
            let mut indices = Vec::new();
            for v in &var {
                if *v == 0 || *v > p.num_generators {
                    return Err(Error::Invalid(format!(
                        "generator index {v} outside 1..{}",
                        p.num_generators
                    )));
                }
                indices.push(v - 1);
            }
            let d = higher_fox_derivative(&p.relators[relator - 1], &indices)?;
            println!("{d}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => selftest(),
    }
}

fn normalized(imported: ImportedPresentation) -> Result<ImportedPresentation> {
    let imported = imported.ensure_nice()?;
    if let Some(sub) = &imported.substitution {
        for (i, w) in sub.iter().enumerate() {
            eprintln!("normalized: x{} = {w}", i + 1);
        }
    }
    Ok(imported)
}

fn exit_for(report: &TheoremReport) -> ExitCode {
    if report.verdict == Verdict::Equal {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

/// Renders a polynomial in the dual variables a1..an, largest monomial
/// first, e.g. "-a1*a3^2 + 2*a2".
fn poly_text(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (exps, c) in p.terms.iter().rev() {
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let name = monomial_name(exps, "a");
        if mag == 1u32.into() && name != "1" {
            out.push_str(&name);
        } else if name == "1" {
            out.push_str(&mag.to_string());
        } else {
            out.push_str(&format!("{mag}*{name}"));
        }
    }
    out
}

fn selftest() -> Result<ExitCode> {
    let mut failures = 0;
    let mut run = |name: &str, verdict: Result<Verdict>| match verdict {
        Ok(Verdict::Equal) => println!("ok   {name}"),
        Ok(v) => {
            failures += 1;
            println!("FAIL {name}: verdict {}", v.as_str());
        }
        Err(e) => {
            failures += 1;
            println!("FAIL {name}: {e}");
        }
    };

    let hopf = parse_presentation(include_str!("../fixtures/hopf.pres"))?.np;
    for strike in 1..=2 {
        run(
            &format!("hopf integral strike {strike}"),
            check_integral_theorem(&hopf, strike).map(|r| r.verdict),
        );
    }
    run("hopf order-1 form", check_massey_theorem(&hopf, 1, 1).map(|r| r.verdict));

    let borromean = parse_presentation(include_str!("../fixtures/borromean.pres"))?.np;
    for strike in 1..=3 {
        run(
            &format!("borromean order-2 strike {strike}"),
            check_massey_theorem(&borromean, 2, strike).map(|r| r.verdict),
        );
    }

    let power_row = "generators 3\nrank 3\nrelator x1 x2 X1 X2\nrelator x3 x3\n\
                     expansion 1: pairs=[(x1, x2)]\nexpansion 2: powers=[x3] exponent=2\n\
                     linking 1 1 1/2\n";
    let modr = parse_presentation(power_row)?.np;
    for strike in 1..=2 {
        run(
            &format!("power row mod 2 strike {strike}"),
            check_mod_r_theorem(&modr, 2, strike).map(|r| r.verdict),
        );
    }

    if failures == 0 {
        println!("all selftests passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{failures} selftest(s) failed");
        Ok(ExitCode::from(2))
    }
}
