use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use divweyl::text::{format_tuple, parse_presentation, render_presentation};
use divweyl::{
    format_operator, level_of, matrix_of, parse_operator, parse_polynomial, present_ideal,
    truncated_syzygy_oracle, verify_presentation, FpConfig, Level, OperatorFile, Side, WeylElement,
};
use serde_json::{json, Value};

/// Differential operators in positive characteristic.
#[derive(Parser, Debug)]
#[command(name = "divweyl", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Characteristic of the base field.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Number of variables.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Operator file; its names may be used in place of expressions.
    #[arg(long, global = true, value_name = "PATH")]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the normal form of each expression.
    Normalize { exprs: Vec<String> },
    /// Multiply the expressions in the order given.
    Mul {
        #[arg(required = true, num_args = 1..)]
        exprs: Vec<String>,
    },
    /// Apply an operator to a polynomial.
    Act {
        operator: String,
        polynomial: String,
    },
    /// Print the filtration level of each expression.
    Level { exprs: Vec<String> },
    /// Print the matrix of an operator over the Frobenius subring.
    Matrix {
        #[arg(long)]
        level: u32,
        expr: String,
    },
    /// Compute generating syzygies of the ideal spanned by the generators.
    Present {
        #[arg(long, default_value = "left")]
        side: Side,
        #[arg(long)]
        level: Option<u32>,
        /// Generators; defaults to every operator in `--file`.
        gens: Vec<String>,
    },
    /// All syzygies with components of degree at most the bound.
    Oracle {
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value = "left")]
        side: Side,
        gens: Vec<String>,
    },
    /// Re-check a presentation file.
    Verify { path: PathBuf },
}

struct Session {
    cfg: FpConfig,
    n: usize,
    file: Option<OperatorFile>,
}

impl Session {
    fn open(g: &Global) -> Result<Self> {
        if let Some(path) = &g.file {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file =
                OperatorFile::parse(&text).with_context(|| format!("in {}", path.display()))?;
            file.check_settings(g.p, g.n)
                .with_context(|| format!("in {}", path.display()))?;
            return Ok(Session {
                cfg: file.cfg.clone(),
                n: file.n,
                file: Some(file),
            });
        }
        let p =
            g.p.ok_or_else(|| anyhow!("--p is required without --file"))?;
        let n =
            g.n.ok_or_else(|| anyhow!("--n is required without --file"))?;
        Ok(Session {
            cfg: FpConfig::new(p)?,
            n,
            file: None,
        })
    }

    fn operator(&self, text: &str) -> Result<WeylElement> {
        if let Some(file) = &self.file {
            if let Some((_, d)) = file.entries.iter().find(|(name, _)| name == text) {
                return Ok(d.clone());
            }
        }
        parse_operator(text, self.n, &self.cfg).with_context(|| format!("parsing `{text}`"))
    }

    fn operators(&self, texts: &[String]) -> Result<Vec<WeylElement>> {
        if texts.is_empty() {
            return match &self.file {
                Some(file) if !file.entries.is_empty() => Ok(file.operators()),
                _ => bail!("no operators given"),
            };
        }
        texts.iter().map(|t| self.operator(t)).collect()
    }
}

struct Output {
    text: String,
    json: Value,
    success: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            success: true,
        }
    }
}

fn strings(ds: &[WeylElement]) -> Vec<String> {
    ds.iter().map(format_operator).collect()
}

fn run(cli: &Cli) -> Result<Output> {
    let s = Session::open(&cli.global)?;
    Ok(match &cli.command {
        Command::Normalize { exprs } => {
            let ds = strings(&s.operators(exprs)?);
            Output::ok(ds.join("\n"), json!({ "operators": ds }))
        }
        Command::Mul { exprs } => {
            let ds = s.operators(exprs)?;
            let mut acc = WeylElement::one(s.n, &s.cfg);
            for d in &ds {
                acc = acc.try_mul(d)?;
            }
            let text = format_operator(&acc);
            Output::ok(text.clone(), json!({ "product": text }))
        }
        Command::Act {
            operator,
            polynomial,
        } => {
            let d = s.operator(operator)?;
            let f = parse_polynomial(polynomial, s.n, &s.cfg)
                .with_context(|| format!("parsing `{polynomial}`"))?;
            let text = d.apply(&f)?.to_string();
            Output::ok(text.clone(), json!({ "result": text }))
        }
        Command::Level { exprs } => {
            let levels: Vec<u32> = s.operators(exprs)?.iter().map(|d| level_of(d).0).collect();
            let text = levels
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join("\n");
            Output::ok(text, json!({ "levels": levels }))
        }
        Command::Matrix { level, expr } => {
            let m = matrix_of(&s.operator(expr)?, Level(*level))?;
            let rows: Vec<Vec<String>> = (0..m.q())
                .map(|i| m.row(i).iter().map(divweyl::chase::matrix_cell).collect())
                .collect();
            Output::ok(
                m.to_string().trim_end().to_string(),
                json!({ "level": level, "q": m.q(), "rows": rows }),
            )
        }
        Command::Present { side, level, gens } => {
            let gens = s.operators(gens)?;
            let pres = present_ideal(*side, &gens, level.map(Level))?;
            let syzygies: Vec<Vec<String>> = pres.syzygies.iter().map(|t| strings(t)).collect();
            Output::ok(
                render_presentation(&pres).trim_end().to_string(),
                json!({
                    "side": pres.side,
                    "level": pres.level,
                    "k": pres.k(),
                    "generators": strings(&pres.generators),
                    "syzygies": syzygies,
                }),
            )
        }
        Command::Oracle { bound, side, gens } => {
            let gens = s.operators(gens)?;
            let kernel = truncated_syzygy_oracle(&gens, *bound, *side)?;
            let mut text = format!("side={side} bound={bound} dim={}", kernel.dim());
            for t in &kernel.basis {
                text.push('\n');
                text.push_str(&format_tuple(t));
            }
            let basis: Vec<Vec<String>> = kernel.basis.iter().map(|t| strings(t)).collect();
            Output::ok(
                text,
                json!({ "side": side, "bound": bound, "dim": kernel.dim(), "basis": basis }),
            )
        }
        Command::Verify { path } => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let pres = parse_presentation(&text, s.n, &s.cfg)
                .with_context(|| format!("in {}", path.display()))?;
            let report = verify_presentation(&pres);
            let mut lines = vec![format!(
                "generators within level {}: {}",
                pres.level,
                if report.level_ok { "ok" } else { "FAIL" }
            )];
            for (i, (t, ok)) in pres.syzygies.iter().zip(&report.checks).enumerate() {
                lines.push(format!(
                    "syzygy {}: {} {}",
                    i + 1,
                    if *ok { "ok" } else { "FAIL" },
                    format_tuple(t)
                ));
            }
            let passed = report.all_passed();
            lines.push(if passed {
                "verified".into()
            } else {
                "verification failed".into()
            });
            Output {
                text: lines.join("\n"),
                json: json!({
                    "side": pres.side,
                    "level": pres.level,
                    "level_ok": report.level_ok,
                    "syzygies": report.checks,
                    "passed": passed,
                }),
                success: passed,
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.global.json {
                println!("{}", out.json);
            } else if !out.text.is_empty() {
                println!("{}", out.text);
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
