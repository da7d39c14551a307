use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use eqknot::catalog::{self, CatalogError, Spec};
use eqknot::module::ModuleElement;
use eqknot::obstruction::{
    amphichiral_obstruction, genus_lower_bound, CertifyOptions, ObstructionError, QuadraticCertificate,
    SliceReport, SliceVerdict,
};
use eqknot::witt::EquivariantTriple;
use eqknot::LaurentPoly;

#[derive(Parser)]
#[command(name = "eqknot", version, about = "Equivariant slice obstructions for strongly invertible knots")]
struct Cli {
    /// Machine-readable output, one JSON object per line.
    #[arg(long, global = true)]
    json: bool,
    /// Print only the headline value.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized Alexander polynomial, invariant factors and generating rank.
    Alexander { spec: String },
    /// Gram matrix of the Blanchfield pairing on the generators.
    Blanchfield { spec: String },
    /// Evaluates Bl(x, y); vectors are comma-separated polynomials.
    Pair {
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Applies the involution to a vector.
    Tau {
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Runs the k = 0 certificate and slice verdict on each spec.
    Obstruct {
        #[arg(required = true)]
        specs: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lower bound on the equivariant 4-genus.
    GenusBound {
        spec: String,
        #[arg(long)]
        k_upper: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Writes the equivariant connected sum of the specs.
    Sum {
        #[arg(required = true, num_args = 2..)]
        specs: Vec<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Obstruction for sums of copies of the twist knot K_a.
    Amphichiral {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        n: u32,
    },
    /// Builtin knot families.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Checks every structural axiom of the triple.
    Verify { spec: String },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Prints a builtin expression in the file format.
    Show { name: String },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        let code = match e {
            CatalogError::Parse { .. }
            | CatalogError::MissingKey(_)
            | CatalogError::UnknownBuiltin(_)
            | CatalogError::InvalidParams { .. }
            | CatalogError::Io(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<ObstructionError> for Failure {
    fn from(e: ObstructionError) -> Self {
        match e {
            ObstructionError::Catalog(c) => c.into(),
            other => Failure::invalid(other.to_string()),
        }
    }
}

struct Out {
    json: bool,
    quiet: bool,
    text: String,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        if !self.quiet {
            self.text.push_str(s.as_ref());
            self.text.push('\n');
        }
    }

    fn headline(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn object<T: Serialize>(&mut self, v: &T) {
        self.text.push_str(&serde_json::to_string(v).expect("reports serialize"));
        self.text.push('\n');
    }
}

fn load_spec(arg: &str) -> Result<Spec, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        Ok(catalog::load(path)?)
    } else {
        Ok(catalog::parse_expr(arg)?)
    }
}

fn load_triple(arg: &str) -> Result<(Spec, EquivariantTriple), Failure> {
    let spec = load_spec(arg)?;
    let t = catalog::assemble(&spec)?;
    Ok((spec, t))
}

fn parse_vector(s: &str, n: usize) -> Result<ModuleElement, Failure> {
    let body = s.trim().trim_start_matches('[').trim_end_matches(']');
    let coeffs: Vec<LaurentPoly> = if body.trim().is_empty() {
        Vec::new()
    } else {
        body.split(',').map(|c| c.trim().parse::<LaurentPoly>().map_err(|e| Failure::usage(format!("'{c}': {e}")))).collect::<Result<_, _>>()?
    };
    if coeffs.len() != n {
        return Err(Failure::usage(format!("expected {n} coefficients, got {}", coeffs.len())));
    }
    Ok(ModuleElement::new(coeffs))
}

fn fmt_vector(v: &ModuleElement) -> String {
    format!("[{}]", v.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

#[derive(Serialize)]
struct Report {
    spec: String,
    verdict: SliceVerdict,
    reason: String,
    grk: usize,
    k_upper: usize,
    bound_rational: String,
    bound_integer: String,
    certificate: QuadraticCertificate,
    seed: u64,
}

fn report(arg: &str, seed: u64, k_upper: Option<usize>) -> Result<Report, Failure> {
    let (spec, t) = load_triple(arg)?;
    let opts = CertifyOptions { seed, ..CertifyOptions::default() };
    let SliceReport { verdict, reason, certificate } = eqknot::obstruction::equivariant_slice_verdict(&t, &opts)?;
    let bound = genus_lower_bound(&t, &certificate, k_upper)?;
    Ok(Report {
        spec: spec.name().to_string(),
        verdict,
        reason,
        grk: bound.grk,
        k_upper: bound.k_upper,
        bound_rational: bound.bound_rational.to_string(),
        bound_integer: bound.bound_integer.to_string(),
        certificate,
        seed,
    })
}

fn print_report(out: &mut Out, r: &Report, headline_bound: bool) {
    if out.json {
        out.object(r);
        return;
    }
    out.line(format!("spec: {}", r.spec));
    if headline_bound {
        out.line(format!("verdict: {}", r.verdict.as_str()));
    } else {
        out.headline(format!("verdict: {}", r.verdict.as_str()));
    }
    out.line(format!("reason: {}", r.reason));
    let c = &r.certificate;
    out.line(format!("certificate: {} (dim {}, digest {})", serde_json::to_value(c.verdict).expect("enum").as_str().unwrap_or(""), c.dim, c.digest));
    for part in &c.parts {
        out.line(format!("  part ({})^{}: {} forms", part.factor, part.exponent, part.forms.len()));
    }
    for (i, s) in c.steps.iter().enumerate() {
        let ws: Vec<String> = s.weights.iter().map(|w| format!("{}*Q[{},{}]", w.weight, w.part, w.form)).collect();
        out.line(format!(
            "  step {}: {} is {} semidefinite of rank {}, leaving dimension {}",
            i + 1,
            ws.join(" + "),
            s.sign,
            s.rank,
            s.remaining.len()
        ));
    }
    if let Some(x) = &c.counterexample {
        out.line(format!("  isotropic x = [{}]", x.element.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")));
    }
    out.line(format!("grk: {}", r.grk));
    out.line(format!("k_upper: {}", r.k_upper));
    if headline_bound {
        out.headline(format!("bound_rational: {}", r.bound_rational));
    } else {
        out.line(format!("bound_rational: {}", r.bound_rational));
    }
    out.line(format!("bound_integer: {}", r.bound_integer));
    out.line(format!("seed: {}", r.seed));
}

fn run(cli: Cli, out: &mut Out) -> Result<u8, Failure> {
    match cli.command {
        Command::Alexander { spec } => {
            let spec = load_spec(&spec)?;
            let t = catalog::assemble_unchecked(&spec)?;
            let m = t.module();
            let alexander = t.order();
            let factors: Vec<LaurentPoly> = m.invariant_factors().to_vec();
            if out.json {
                #[derive(Serialize)]
                struct A<'a> {
                    spec: &'a str,
                    alexander: &'a LaurentPoly,
                    invariant_factors: &'a [LaurentPoly],
                    grk: usize,
                }
                out.object(&A { spec: spec.name(), alexander: &alexander, invariant_factors: &factors, grk: m.generating_rank() });
            } else {
                out.headline(format!("alexander: {alexander}"));
                let f: Vec<String> = factors.iter().map(ToString::to_string).collect();
                out.line(format!("invariant_factors: [{}]", f.join(", ")));
                out.line(format!("grk: {}", m.generating_rank()));
            }
        }
        Command::Blanchfield { spec } => {
            let (spec, t) = load_triple(&spec)?;
            let gram: Vec<Vec<String>> =
                t.pairing().gram().iter().map(|r| r.iter().map(|g| g.representative().to_string()).collect()).collect();
            if out.json {
                #[derive(Serialize)]
                struct B<'a> {
                    spec: &'a str,
                    gram: Vec<Vec<String>>,
                }
                out.object(&B { spec: spec.name(), gram });
            } else {
                for row in gram {
                    out.headline(row.join(" | "));
                }
            }
        }
        Command::Pair { spec, x, y } => {
            let (_, t) = load_triple(&spec)?;
            let n = t.module().generators();
            let (x, y) = (parse_vector(&x, n)?, parse_vector(&y, n)?);
            let v = t.pairing().pair(&x, &y).map_err(|e| Failure::invalid(e.to_string()))?;
            if out.json {
                out.object(&serde_json::json!({ "value": v.representative().to_string() }));
            } else {
                out.headline(v.representative().to_string());
            }
        }
        Command::Tau { spec, x } => {
            let (_, t) = load_triple(&spec)?;
            let x = parse_vector(&x, t.module().generators())?;
            let v = t.involution().apply(&x).map_err(|e| Failure::invalid(e.to_string()))?;
            if out.json {
                out.object(&serde_json::json!({ "value": v.coeffs() }));
            } else {
                out.headline(fmt_vector(&v));
            }
        }
        Command::Obstruct { specs, seed } => {
            let results: Vec<Result<Report, Failure>> = specs.par_iter().map(|s| report(s, seed, None)).collect();
            let mut code = 0;
            for (i, r) in results.into_iter().enumerate() {
                match r {
                    Ok(r) => print_report(out, &r, false),
                    Err(f) => {
                        eprintln!("{}: {}", specs[i], f.message);
                        code = code.max(f.code);
                    }
                }
            }
            return Ok(code);
        }
        Command::GenusBound { spec, k_upper, seed } => {
            let r = report(&spec, seed, k_upper)?;
            print_report(out, &r, true);
        }
        Command::Sum { specs, output } => {
            let mut acc = load_spec(&specs[0])?;
            for s in &specs[1..] {
                acc = acc.sum(&load_spec(s)?)?;
            }
            catalog::assemble(&acc)?;
            catalog::save(&acc, &output)?;
            if out.json {
                out.object(&serde_json::json!({ "output": output.display().to_string(), "name": acc.name() }));
            } else {
                out.line(format!("wrote {} to {}", acc.name(), output.display()));
            }
        }
        Command::Amphichiral { a, n } => {
            let r = amphichiral_obstruction(a, n)?;
            if out.json {
                out.object(&r);
            } else {
                let verdict = serde_json::to_value(r.verdict).expect("enum");
                out.line(format!("polynomial: {}", r.polynomial));
                out.line(format!("witness |p(-1)|: {}", r.witness));
                out.line(format!("discriminant: {}", r.discriminant));
                out.line(format!("branch: {} (n = {})", r.branch, r.n));
                for h in &r.hypotheses {
                    out.line(format!("  {}: {}", h.name, h.holds));
                }
                out.headline(format!("verdict: {}", verdict.as_str().unwrap_or("")));
            }
        }
        Command::Catalog { action: CatalogAction::List } => {
            if out.json {
                let items: Vec<_> = catalog::BUILTINS
                    .iter()
                    .map(|(n, p, d)| serde_json::json!({ "name": n, "params": p, "description": d }))
                    .collect();
                out.object(&items);
            } else {
                for (n, p, d) in catalog::BUILTINS {
                    let sig = if p.is_empty() { n.to_string() } else { format!("{n}({p})") };
                    out.headline(format!("{sig:<28} {d}"));
                }
            }
        }
        Command::Catalog { action: CatalogAction::Show { name } } => {
            let spec = catalog::parse_expr(&name)?;
            let text = catalog::to_text(&spec);
            if out.json {
                out.object(&serde_json::json!({ "name": spec.name(), "text": text }));
            } else {
                out.text.push_str(&text);
            }
        }
        Command::Verify { spec } => {
            let spec = load_spec(&spec)?;
            let t = catalog::assemble_unchecked(&spec)?;
            let r = t.validate();
            if out.json {
                out.object(&r);
            } else {
                for c in &r.checks {
                    out.line(format!("{:<24} {}", c.axiom.name(), if c.passed { "ok" } else { "FAILED" }));
                }
            }
            if !r.all_passed() {
                let names: Vec<&str> = r.failures().iter().map(|a| a.name()).collect();
                eprintln!("validation failed: {}", names.join(", "));
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Out { json: cli.json, quiet: cli.quiet, text: String::new() };
    let code = match run(cli, &mut out) {
        Ok(c) => c,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    print!("{}", out.text);
    ExitCode::from(code)
}
