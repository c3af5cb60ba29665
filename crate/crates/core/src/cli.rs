//! The `mzv` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::combination::{format_rational, ProductTerm, ZetaCombination};
use crate::composition::Composition;
use crate::diagrams::{reduce, Diagram, Strategy};
use crate::error::{Error, Result};
use crate::identities::{catalog, derive, eliminate_zeta1, sweep_instances, Family, Identity, Variant};
use crate::linalg::{assemble_permutation_system, product_name, reduce_system, three_point_relations, word_name};
use crate::numerics::{
    eval_mzv_direct_with, verify_identity_with, MzvOracle, PrecisionValue, WorkingPrecision, DEFAULT_EPS,
    SIGNED_TRUNCATION,
};

#[derive(Parser, Debug)]
#[command(name = "mzv", version, about = "Multiple zeta values: evaluation, identities, rank analysis and diagram reduction")]
struct Cli {
    /// Target absolute error bound for numerical work.
    #[arg(long, global = true, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Working precision in decimal digits (default: $MZV_PRECISION_DIGITS or 40).
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// Machine-readable output with sorted keys.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate ζ(k1,…,km); a leading `-` on a part marks an alternating sign.
    Eval {
        #[arg(allow_hyphen_values = true)]
        composition: String,
        /// Use the truncated nested sum with this many terms.
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// Emit one identity of a family, or list the families.
    Derive {
        family: Option<String>,
        params: Vec<String>,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Check identities read from a JSON file (`-` for stdin).
    Verify { file: PathBuf },
    /// Rank of the permutation relation system of one length.
    Rank {
        #[arg(long)]
        length: usize,
        /// Argument pattern such as `a,b,b`; equal names are equal arguments.
        #[arg(long)]
        degeneracy: Option<String>,
        /// Also add the cyclic three-point relations (length 3 only).
        #[arg(long)]
        three_point: bool,
        /// Report the basis and the expressions of the other unknowns.
        #[arg(long)]
        basis: bool,
        /// Print the coefficient matrix as rows of p/q entries.
        #[arg(long)]
        matrix: bool,
    },
    /// Reduce a diagram read from a JSON file (`-` for stdin).
    Reduce {
        file: PathBuf,
        #[arg(long, default_value = "rightward")]
        strategy: String,
        /// Print one line per rewrite.
        #[arg(long)]
        trace: bool,
        /// Print the diagram in DOT format instead of reducing it.
        #[arg(long)]
        dot: bool,
    },
    /// Verify every family instance up to a weight.
    Sweep {
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
        #[arg(long, hide = true)]
        perturb: bool,
    },
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    json: bool,
    eps: f64,
    precision: WorkingPrecision,
}

impl Ctx<'_> {
    fn emit(&mut self, v: &Value) -> Result<()> {
        let s = serde_json::to_string_pretty(v).map_err(|e| Error::Json(e.to_string()))?;
        self.line(&s)
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").map_err(|e| Error::Io(format!("standard output: {e}")))
    }
}

/// Runs the command line with the given arguments (program name first) and
/// returns the exit code: 0 success, 1 verification failure, 2 usage error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let precision = cli.digits.map(WorkingPrecision::from_digits).unwrap_or_else(WorkingPrecision::from_env);
    let mut ctx = Ctx { out, json: cli.json, eps: cli.eps, precision };
    match dispatch(&mut ctx, cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::Irreducible { partial, .. } = &e {
                let _ = writeln!(err, "partial result: {partial}");
            }
            2
        }
    }
}

fn dispatch(ctx: &mut Ctx, cmd: Command) -> Result<bool> {
    if !(ctx.eps > 0.0 && ctx.eps.is_finite()) {
        return Err(Error::Precondition(format!("--eps must be positive, got {}", ctx.eps)));
    }
    match cmd {
        Command::Eval { composition, trunc } => eval(ctx, &composition, trunc),
        Command::Derive { family, params, variant, list } => derive_cmd(ctx, family, &params, variant, list),
        Command::Verify { file } => verify(ctx, &file),
        Command::Rank { length, degeneracy, three_point, basis, matrix } => {
            rank(ctx, length, degeneracy.as_deref(), three_point, basis, matrix)
        }
        Command::Reduce { file, strategy, trace, dot } => reduce_cmd(ctx, &file, &strategy, trace, dot),
        Command::Sweep { max_weight, perturb } => sweep(ctx, max_weight, perturb),
    }
}

fn read_input(path: &Path) -> Result<Value> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Io(format!("standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    serde_json::from_str(&text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))
}

fn value_json(v: &PrecisionValue) -> (String, f64) {
    (v.value.to_decimal(v.reliable_digits().max(1)), v.bound)
}

fn eval(ctx: &mut Ctx, text: &str, trunc: Option<u64>) -> Result<bool> {
    let c: Composition = text.parse()?;
    let (v, method, n) = match trunc {
        Some(n) => (eval_mzv_direct_with(&c, n, ctx.precision)?, "direct", Some(n)),
        None if c.is_signed() => (eval_mzv_direct_with(&c, SIGNED_TRUNCATION, ctx.precision)?, "direct", Some(SIGNED_TRUNCATION)),
        None => (MzvOracle::new(ctx.precision).eval(&c, ctx.eps)?, "accelerated", None),
    };
    let (value, bound) = value_json(&v);
    if ctx.json {
        let mut j = json!({"composition": c.to_string(), "value": value, "bound": bound, "method": method});
        if let Some(n) = n {
            j["truncation"] = json!(n);
        }
        ctx.emit(&j)?;
    } else {
        ctx.line(&format!("ζ({c}) = {value}"))?;
        ctx.line(&format!("bound {bound:.3e} ({method})"))?;
    }
    Ok(true)
}

fn derive_cmd(ctx: &mut Ctx, family: Option<String>, params: &[String], variant: Option<String>, list: bool) -> Result<bool> {
    if list {
        if ctx.json {
            ctx.emit(&catalog())?;
        } else {
            for f in Family::ALL {
                let kind = if f.is_final() { "final" } else { "may contain ζ(1…)" };
                ctx.line(&format!("{:<24}{:<52}{kind}", f.name(), f.grammar()))?;
            }
        }
        return Ok(true);
    }
    let family: Family = family.ok_or_else(|| Error::Precondition("a family name is required (or --list)".into()))?.parse()?;
    let variant = variant.map(|v| v.parse::<Variant>()).transpose()?;
    let id = derive(family, params, variant)?;
    if ctx.json {
        ctx.emit(&id.to_json_value())?;
    } else {
        ctx.line(&id.to_string())?;
        if id.regularized {
            ctx.line("(regularized: contains ζ(1…) factors)")?;
        }
    }
    Ok(true)
}

fn verify(ctx: &mut Ctx, file: &Path) -> Result<bool> {
    let doc = read_input(file)?;
    let ids: Vec<Identity> = match doc {
        Value::Array(items) => items.into_iter().map(Identity::from_json_value).collect::<Result<_>>()?,
        v => vec![Identity::from_json_value(v)?],
    };
    let mut oracle = MzvOracle::new(ctx.precision);
    let mut reports = Vec::new();
    let mut all = true;
    for id in &ids {
        let r = verify_identity_with(&mut oracle, id, ctx.eps)?;
        all &= r.pass;
        if !ctx.json {
            let verdict = if r.pass { "pass" } else { "FAIL" };
            ctx.line(&format!("{verdict} {}: residual {} (bound {:.3e})", id.label(), r.residual_string(), r.bound))?;
        }
        reports.push(r.to_json_value());
    }
    if ctx.json {
        let v = if reports.len() == 1 { reports.pop().unwrap() } else { Value::Array(reports) };
        ctx.emit(&v)?;
    }
    Ok(all)
}

fn parse_degeneracy(pattern: &str, length: usize) -> Result<Vec<usize>> {
    let mut names: Vec<&str> = Vec::new();
    let symbols: Vec<usize> = pattern
        .split(',')
        .map(|t| {
            let t = t.trim();
            names.iter().position(|n| *n == t).unwrap_or_else(|| {
                names.push(t);
                names.len() - 1
            })
        })
        .collect();
    if symbols.len() != length || names.iter().any(|n| n.is_empty()) {
        return Err(Error::Precondition(format!("degeneracy pattern {pattern:?} must name {length} arguments")));
    }
    Ok(symbols)
}

fn rank(ctx: &mut Ctx, length: usize, degeneracy: Option<&str>, three_point: bool, basis: bool, matrix: bool) -> Result<bool> {
    if length > 6 {
        return Err(Error::Precondition("lengths above 6 are not supported".into()));
    }
    let symbols = match degeneracy {
        Some(p) => parse_degeneracy(p, length)?,
        None => (0..length).collect(),
    };
    let mut sys = assemble_permutation_system(length, &symbols)?;
    if three_point {
        sys = sys.with_relations(three_point_relations(&symbols)?)?;
    }
    let r = sys.rank();
    let report = if basis { Some(reduce_system(&sys)?) } else { None };
    if ctx.json {
        let mut j = json!({
            "length": length,
            "arguments": sys.unknowns[0].iter().map(|p| word_name(&vec![p.clone()])).collect::<Vec<_>>(),
            "unknowns": sys.unknowns.len(),
            "relations": sys.relations.len(),
            "rank": r,
        });
        if let Some(rep) = &report {
            j["basis"] = rep.to_json_value();
        }
        if matrix {
            j["matrix"] = json!(sys.matrix.to_text());
        }
        ctx.emit(&j)?;
        return Ok(true);
    }
    ctx.line(&format!("rank {r}"))?;
    ctx.line(&format!("unknowns {}, relations {}", sys.unknowns.len(), sys.relations.len()))?;
    if let Some(rep) = &report {
        let names: Vec<String> = rep.basis.iter().map(word_name).collect();
        let tag = if rep.canonical { "" } else { " (elimination order, not canonical)" };
        ctx.line(&format!("basis{tag}: {}", names.join(", ")))?;
        for e in &rep.expressions {
            let mut terms: Vec<String> = e.basis_terms.iter().map(|(c, w)| term(c, &word_name(w))).collect();
            terms.extend(e.rhs_terms.iter().map(|(c, p)| term(c, &product_name(p))));
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" ") };
            ctx.line(&format!("{} = {}", word_name(&e.unknown), rhs.trim_start_matches("+ ")))?;
        }
    }
    if matrix {
        let text = sys.matrix.to_text();
        ctx.line(text.trim_end())?;
    }
    Ok(true)
}

fn term(c: &BigRational, name: &str) -> String {
    let sign = if c < &BigRational::from_integer(0.into()) { "-" } else { "+" };
    let a = if c < &BigRational::from_integer(0.into()) { -c } else { c.clone() };
    if a.is_integer() && a.numer() == &1.into() {
        format!("{sign} {name}")
    } else if a.is_integer() {
        format!("{sign} {}·{name}", a.numer())
    } else {
        format!("{sign} ({})·{name}", format_rational(&a))
    }
}

fn reduce_cmd(ctx: &mut Ctx, file: &Path, strategy: &str, trace: bool, dot: bool) -> Result<bool> {
    let d = Diagram::from_json_value(&read_input(file)?)?;
    if dot {
        let text = d.to_dot();
        ctx.line(text.trim_end())?;
        return Ok(true);
    }
    let strategy: Strategy = strategy.parse()?;
    let r = reduce(&d, strategy)?;
    let closed = if r.value.is_regularized() { eliminate_zeta1(&r.value).ok() } else { None };
    if ctx.json {
        let mut j = json!({"strategy": strategy.name(), "value": r.value.to_json_value(), "text": r.value.to_string()});
        if let Some(c) = &closed {
            j["eliminated"] = c.to_json_value();
        }
        if trace {
            j["trace"] = json!(r.trace);
        }
        ctx.emit(&j)?;
    } else {
        if trace {
            for t in &r.trace {
                ctx.line(t)?;
            }
        }
        ctx.line(&r.value.to_string())?;
        if let Some(c) = &closed {
            ctx.line(&format!("without ζ(1…): {c}"))?;
        }
    }
    Ok(true)
}

/// Multiplies the first coefficient by 1001/1000.
fn perturbed(id: &Identity) -> Identity {
    let mut terms = id.combination.terms();
    if let Some(t) = terms.first_mut() {
        *t = ProductTerm::new(&t.coefficient * BigRational::new(1001.into(), 1000.into()), t.factors.factors().to_vec());
    }
    Identity::new(id.family, id.parameters.clone(), ZetaCombination::from_terms(terms), id.derivation.clone())
}

#[derive(Default)]
struct Tally {
    verified: usize,
    failed: usize,
    skipped: usize,
}

fn sweep(ctx: &mut Ctx, max_weight: u32, perturb: bool) -> Result<bool> {
    let mut oracle = MzvOracle::new(ctx.precision);
    let mut tally: BTreeMap<&'static str, Tally> = BTreeMap::new();
    let mut failures: Vec<String> = Vec::new();
    for id in sweep_instances(max_weight)? {
        let id = if perturb { perturbed(&id) } else { id };
        let t = tally.entry(id.family.name()).or_default();
        if id.is_final && id.regularized {
            t.failed += 1;
            failures.push(format!("{} is final but contains ζ(1…)", id.label()));
            continue;
        }
        if id.regularized {
            t.skipped += 1;
            continue;
        }
        let r = verify_identity_with(&mut oracle, &id, ctx.eps)?;
        if r.pass {
            t.verified += 1;
        } else {
            t.failed += 1;
            failures.push(format!("{}: residual {}", id.label(), r.residual_string()));
        }
    }
    let ok = failures.is_empty();
    if ctx.json {
        let families: BTreeMap<&str, Value> = tally
            .iter()
            .map(|(k, t)| (*k, json!({"verified": t.verified, "failed": t.failed, "skipped": t.skipped})))
            .collect();
        ctx.emit(&json!({"max_weight": max_weight, "families": families, "failures": failures, "pass": ok}))?;
    } else {
        for f in Family::ALL {
            if let Some(t) = tally.get(f.name()) {
                ctx.line(&format!("{:<24}{:>6} verified{:>6} failed{:>6} skipped", f.name(), t.verified, t.failed, t.skipped))?;
            }
        }
        for f in &failures {
            ctx.line(&format!("FAIL {f}"))?;
        }
        ctx.line(if ok { "all identities verified" } else { "verification failed" })?;
    }
    Ok(ok)
}
