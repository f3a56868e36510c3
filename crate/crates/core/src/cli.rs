//! Command-line front end.
//!
//! Exit status: 0 when the command ran (a `Violates` verdict included),
//! 1 when `witness-verify` rejects the witness, 2 for unparsable or invalid
//! input, 3 when a produced certificate fails its own re-verification.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::json;

use crate::decide::{decide_bounded, decide_unbounded, Certificate, Cone, Verdict, Witness};
use crate::decision::Decision;
use crate::error::Error;
use crate::hankel::ParamHankel;
use crate::moments::{
    conv_operator_from_measure, conv_operator_mv, hamburger_check, moments_of_atomic, recover_atoms, WeightValue,
};
use crate::multivar::{constant_coeff_decide, falsify_mv, mv_witness, psd_kernel_at, Budget, MvWitness};
use crate::oracle::{falsify_preservation, verify_witness, SampleSpec};
use crate::poly::{MultiPoly, RealPoint};
use crate::rational::{fmt_rational, parse_rational, Rational};
use crate::text::{
    detect_vars, matrix_to_text, multi_weyl_to_text, parse_measure, parse_multi_index, parse_operator, parse_point,
    parse_poly, parse_rational_list, weyl_to_text, ParsedOperator,
};
use crate::weyl::{MultiWeylOp, WeylOp};

/// Environment variable holding the default seed for randomized commands.
pub const SEED_VAR: &str = "POLYPOS_SEED";

#[derive(Debug, Parser)]
#[command(name = "polypos", version, about = "Exact positivity-preservation checks for polynomial operators")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Decide whether an operator preserves a cone.
    Check(CheckArgs),
    /// Print the truncated symbol p_{y,m}(x).
    #[command(allow_negative_numbers = true)]
    Symbol {
        #[arg(long)]
        m: usize,
        /// Evaluate the parameter at this rational.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        file: PathBuf,
    },
    /// Print the Hankel matrix H_{y,m}.
    #[command(allow_negative_numbers = true)]
    Hankel {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        file: PathBuf,
    },
    /// Fischer-Fock pairing of two polynomials.
    Ff {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Check a witness JSON document against an operator.
    WitnessVerify {
        #[arg(long)]
        cone: Option<Cone>,
        operator: PathBuf,
        witness: PathBuf,
    },
    /// Build the convolution operator of an atomic measure.
    ConvBuild {
        measure: PathBuf,
        /// Truncation order: `M`, or `(M1,...,Mn)` for several variables.
        #[arg(long)]
        order: String,
    },
    /// Moment sequence utilities.
    Moments {
        #[command(subcommand)]
        cmd: MomentsCmd,
    },
    /// Recover atoms and weights from moments a_0 a_1 ...
    #[command(allow_negative_numbers = true)]
    Recover {
        #[arg(required = true)]
        values: Vec<String>,
    },
    /// Multivariate Gram-kernel checks.
    MvCheck(MvArgs),
    /// Randomized falsification with exact image checks.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value = "sos")]
    pub cone: Cone,
    /// Degree bound d; omit with --unbounded.
    #[arg(long, required_unless_present = "unbounded")]
    pub degree: Option<usize>,
    /// Decide preservation at every degree.
    #[arg(long, conflicts_with = "degree")]
    pub unbounded: bool,
    pub file: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum MomentsCmd {
    /// Hamburger test: is (a_{i+j}) positive semidefinite?
    #[command(allow_negative_numbers = true)]
    Check {
        #[arg(required = true)]
        values: Vec<String>,
    },
    /// Moments a_0..a_{len-1} of a univariate measure file.
    #[command(allow_negative_numbers = true)]
    Of {
        measure: PathBuf,
        #[arg(long)]
        len: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        at: String,
    },
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MvArgs {
    /// Multi-index bound, e.g. `(1,1)`.
    #[arg(long)]
    pub alpha: String,
    /// Test the kernel at this parameter point only.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Grid radius R for the falsification scan.
    #[arg(long, default_value_t = 2)]
    pub radius: u32,
    /// Grid denominator q.
    #[arg(long, default_value_t = 1)]
    pub denominator: u32,
    /// Random points after the grid.
    #[arg(long, default_value_t = 32)]
    pub budget: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value = "sos")]
    pub cone: Cone,
    #[arg(long)]
    pub degree: usize,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 2)]
    pub squares: usize,
    #[arg(long, default_value_t = 5)]
    pub height: i64,
    #[arg(long)]
    pub seed: Option<u64>,
    pub file: PathBuf,
}

impl clap::ValueEnum for Cone {
    fn value_variants<'a>() -> &'a [Self] {
        &[Cone::Sos, Cone::Pos, Cone::Ell]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            Cone::Sos => "sos",
            Cone::Pos => "pos",
            Cone::Ell => "ell",
        }))
    }
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn read_input(path: &PathBuf) -> std::result::Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| invalid(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path, e: Error) -> Failure {
    invalid(format!("{}: {e}", path.display()))
}

fn read_uni_operator(path: &PathBuf) -> std::result::Result<WeylOp, Failure> {
    match parse_operator(&read_input(path)?).map_err(|e| with_path(path, e))? {
        ParsedOperator::Uni(t) => Ok(t),
        ParsedOperator::Multi(t) if t.arity() == 1 => Ok(WeylOp::new(
            (0..=t.support_bound()[0])
                .map(|i| t.coeff(&[i]).to_uni())
                .collect::<crate::Result<_>>()?,
        )),
        ParsedOperator::Multi(_) => Err(invalid(format!(
            "{}: multivariate operator; use mv-check",
            path.display()
        ))),
    }
}

fn seed_or_default(seed: Option<u64>) -> std::result::Result<u64, Failure> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| invalid(format!("{SEED_VAR}={v} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn point_text(p: &RealPoint) -> String {
    match p {
        RealPoint::Rational(q) => fmt_rational(q),
        RealPoint::Root(r) => {
            let approx = crate::rational::midpoint(&r.lo, &r.hi).to_f64().unwrap_or(f64::NAN);
            format!("~{approx:.12} (root of {} in ({}, {}))", r.factor, fmt_rational(&r.lo), fmt_rational(&r.hi))
        }
    }
}

fn tuple_text(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(", "))
}

fn witness_text(w: &Witness) -> String {
    let mut s = String::new();
    let terms: Vec<String> = w
        .squares
        .iter()
        .zip(&w.weights)
        .map(|(g, c)| {
            if c == &Rational::from_integer(1.into()) {
                format!("({g})^2")
            } else {
                format!("{}*({g})^2", fmt_rational(c))
            }
        })
        .collect();
    let sum = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    s.push_str(&format!("  h = {sum}\n"));
    s.push_str(&format!("    = {}\n", w.h));
    if w.epsilon != Rational::from_integer(0.into()) {
        s.push_str(&format!("  input f = h + {}\n", fmt_rational(&w.epsilon)));
    }
    if w.sign == -1 {
        s.push_str("  operator: -T\n");
    }
    s.push_str(&format!("  at x0 = {}\n", point_text(&w.point)));
    s.push_str(&format!("  value = {}\n", fmt_rational(&w.value)));
    if let Some(y0) = &w.shift {
        s.push_str(&format!("  built at y0 = {}\n", fmt_rational(y0)));
    }
    s
}

fn verdict_text(v: &Verdict) -> String {
    let mut s = format!(
        "cone: {}\ndegree bound: {}\nverdict: {:?}\n",
        v.cone, v.degree_bound, v.result
    );
    if let Some(n) = &v.notice {
        s.push_str(&format!("notice: {n}\n"));
    }
    match &v.certificate {
        Certificate::Minors(ms) => {
            let who = if v.sign == -1 { " of -T" } else { "" };
            s.push_str(&format!("certificate: {} principal minors{who}, each >= 0 on R\n", ms.len()));
            for m in ms {
                s.push_str(&format!("  {:?}: {}\n", m.subset, m.minor.to_text("y")));
            }
        }
        Certificate::Witness(w) => {
            s.push_str("witness:\n");
            s.push_str(&witness_text(w));
        }
    }
    let p = &v.predicate_report;
    s.push_str(&format!(
        "predicates: psd_all_y={} pd_all_y={} det_positive_all_m={} q0_positive={} q0_nonneg={}\n",
        p.psd_all_y, p.pd_all_y, p.det_positive_all_m, p.q0_positive, p.q0_nonneg
    ));
    s.push_str(&format!("truncated: {}\n", v.truncation_flag));
    s
}

fn emit(out: &mut dyn Write, json: bool, value: serde_json::Value, text: String) -> std::result::Result<(), Failure> {
    let r = if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("serializable"))
    } else {
        write!(out, "{text}")
    };
    r.map_err(|e| internal(format!("write failed: {e}")))
}

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn cmd_check(a: &CheckArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let t = read_uni_operator(&a.file)?;
    let v = match (a.unbounded, a.degree) {
        (true, _) => decide_unbounded(&t, a.cone),
        (false, Some(d)) => decide_bounded(&t, d, a.cone),
        (false, None) => return Err(invalid("--degree or --unbounded is required")),
    };
    if !v.verify(&t) {
        return Err(internal("certificate failed re-verification"));
    }
    emit(out, json, to_json(&v), verdict_text(&v))?;
    Ok(0)
}

fn cmd_symbol(m: usize, at: &Option<String>, file: &PathBuf, json: bool, out: &mut dyn Write) -> CmdResult {
    let t = read_uni_operator(file)?;
    let text = match at {
        Some(y) => t.symbol_at(m, &parse_rational(y)?).to_string(),
        None => t.truncated_symbol(m).to_text(&["x".to_string(), "y".to_string()]),
    };
    emit(out, json, json!({ "m": m, "symbol": text }), format!("{text}\n"))?;
    Ok(0)
}

fn cmd_hankel(m: usize, at: &Option<String>, file: &PathBuf, json: bool, out: &mut dyn Write) -> CmdResult {
    let t = read_uni_operator(file)?;
    let h = ParamHankel::build(&t, m);
    let rows: Vec<Vec<String>> = match at {
        Some(y) => h.at(&parse_rational(y)?).iter().map(|r| r.iter().map(fmt_rational).collect()).collect(),
        None => h.matrix().iter().map(|r| r.iter().map(|p| p.to_text("y")).collect()).collect(),
    };
    let text = matrix_to_text(&rows, |s| s.clone());
    emit(out, json, json!({ "m": m, "matrix": rows }), text)?;
    Ok(0)
}

fn cmd_ff(f: &str, g: &str, json: bool, out: &mut dyn Write) -> CmdResult {
    let vars = detect_vars(&[f, g]);
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let pf = parse_poly(f, &names)?;
    let pg = parse_poly(g, &names)?;
    let v = pf.ff_inner(&pg)?;
    emit(out, json, json!({ "pairing": fmt_rational(&v) }), format!("{}\n", fmt_rational(&v)))?;
    Ok(0)
}

fn cmd_witness_verify(cone: Option<Cone>, op: &PathBuf, wpath: &PathBuf, json: bool, out: &mut dyn Write) -> CmdResult {
    let t = read_uni_operator(op)?;
    let raw = read_input(wpath)?;
    let value: serde_json::Value =
        serde_json::from_str(&raw).map_err(|e| invalid(format!("{}: {e}", wpath.display())))?;
    // accept a bare witness or a full `check --json` report
    let wv = value
        .get("certificate")
        .and_then(|c| c.get("witness"))
        .cloned()
        .unwrap_or(value);
    let w: Witness = serde_json::from_value(wv).map_err(|e| invalid(format!("{}: {e}", wpath.display())))?;
    let ok = verify_witness(&t, &w, cone.unwrap_or(w.cone));
    emit(out, json, json!({ "valid": ok }), format!("{ok}\n"))?;
    Ok(if ok { 0 } else { 1 })
}

fn cmd_conv_build(path: &PathBuf, order: &str, json: bool, out: &mut dyn Write) -> CmdResult {
    let m = parse_measure(&read_input(path)?).map_err(|e| with_path(path, e))?;
    let order = parse_multi_index(order)?;
    let order = if order.len() == 1 && m.dim() > 1 {
        vec![order[0]; m.dim()]
    } else {
        order
    };
    let text = if m.dim() == 1 {
        weyl_to_text(&conv_operator_from_measure(&m, order[0] as usize)?)
    } else {
        multi_weyl_to_text(&conv_operator_mv(&m, &order)?)
    };
    emit(out, json, json!({ "operator": text }), text.clone())?;
    Ok(0)
}

fn cmd_moments_check(values: &[String], json: bool, out: &mut dyn Write) -> CmdResult {
    let a = parse_rational_list(&values.join(" "))?;
    match hamburger_check(&a)? {
        Decision::Holds => emit(
            out,
            json,
            json!({ "moment_sequence": true }),
            "moment sequence: the Hankel matrix is positive semidefinite\n".into(),
        )?,
        Decision::Fails(f) => emit(
            out,
            json,
            json!({ "moment_sequence": false, "failure": to_json(&f) }),
            format!(
                "not a moment sequence: principal minor {:?} = {}\n",
                f.subset,
                fmt_rational(&f.minor)
            ),
        )?,
    }
    Ok(0)
}

fn cmd_moments_of(path: &PathBuf, len: usize, at: &str, json: bool, out: &mut dyn Write) -> CmdResult {
    let m = parse_measure(&read_input(path)?).map_err(|e| with_path(path, e))?;
    let a = moments_of_atomic(&m, &parse_rational(at)?, len)?;
    let strs: Vec<String> = a.iter().map(fmt_rational).collect();
    emit(out, json, json!({ "moments": strs }), format!("{}\n", strs.join(" ")))?;
    Ok(0)
}

fn cmd_recover(values: &[String], json: bool, out: &mut dyn Write) -> CmdResult {
    let a = parse_rational_list(&values.join(" "))?;
    let r = match recover_atoms(&a) {
        Ok(r) => r,
        Err(e @ (Error::NotFinitelyAtomic(_) | Error::Precondition(_))) => {
            emit(out, json, json!({ "recovered": false, "reason": e.to_string() }), format!("{e}\n"))?;
            return Ok(0);
        }
        Err(e) => return Err(e.into()),
    };
    let mut text = format!("atom polynomial: {}\n", r.atom_polynomial);
    let mut atoms = Vec::new();
    for (a, w) in r.atoms.iter().zip(&r.weights) {
        let wt = match w {
            WeightValue::Exact(q) => fmt_rational(q),
            WeightValue::Enclosure(lo, hi) => format!(
                "~{:.12} (in [{}, {}])",
                crate::rational::midpoint(lo, hi).to_f64().unwrap_or(f64::NAN),
                fmt_rational(lo),
                fmt_rational(hi)
            ),
        };
        text.push_str(&format!("atom {} weight {wt}\n", point_text(a)));
        atoms.push(json!({ "atom": to_json(a), "weight": to_json(w) }));
    }
    let value = json!({
        "recovered": true,
        "atom_polynomial": r.atom_polynomial.to_string(),
        "atoms": atoms,
    });
    emit(out, json, value, text)?;
    Ok(0)
}

fn read_any_operator(path: &PathBuf) -> std::result::Result<MultiWeylOp, Failure> {
    Ok(match parse_operator(&read_input(path)?).map_err(|e| with_path(path, e))? {
        ParsedOperator::Uni(t) => MultiWeylOp::from_univariate(&t),
        ParsedOperator::Multi(t) => t,
    })
}

fn mv_witness_text(w: &MvWitness) -> String {
    let names = MultiPoly::default_names(w.h.arity());
    format!(
        "witness:\n  h = ({})^2\n  at y0 = {}\n  value = {}\n",
        w.g.to_text(&names),
        tuple_text(&w.point),
        fmt_rational(&w.value)
    )
}

fn cmd_mv_check(a: &MvArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let t = read_any_operator(&a.file)?;
    let alpha = parse_multi_index(&a.alpha)?;
    if alpha.len() != t.arity() {
        return Err(Error::ArityMismatch {
            expected: t.arity(),
            found: alpha.len(),
        }
        .into());
    }
    let checked = |w: &MvWitness| {
        if w.verify(&t) {
            Ok(())
        } else {
            Err(internal("witness failed re-verification"))
        }
    };
    if let Some(at) = &a.at {
        let y0 = parse_point(at)?;
        match psd_kernel_at(&t, &alpha, &y0)? {
            Decision::Holds => emit(
                out,
                json,
                json!({ "mode": "point", "psd": true }),
                format!("kernel PSD at {} (necessary condition only)\n", tuple_text(&y0)),
            )?,
            Decision::Fails(dir) => {
                let w = mv_witness(&t, &alpha, &y0, &dir.direction)?;
                checked(&w)?;
                emit(
                    out,
                    json,
                    json!({ "mode": "point", "psd": false, "witness": to_json(&w) }),
                    format!("kernel not PSD at {}\n{}", tuple_text(&y0), mv_witness_text(&w)),
                )?;
            }
        }
        return Ok(0);
    }
    if t.has_constant_coefficients() {
        let v = constant_coeff_decide(&t, &alpha)?;
        let bound: Vec<String> = alpha.iter().map(u32::to_string).collect();
        let mut text = format!(
            "constant coefficients\nverdict: {:?} (sums of squares of polynomials with exponents <= ({}))\n",
            v.result,
            bound.join(",")
        );
        if let Some(w) = &v.witness {
            checked(w)?;
            text.push_str(&mv_witness_text(w));
        }
        let mut value = to_json(&v);
        value["mode"] = json!("constant");
        emit(out, json, value, text)?;
        return Ok(0);
    }
    let budget = Budget {
        radius: a.radius,
        denominator: a.denominator,
        random: a.budget,
        seed: seed_or_default(a.seed)?,
    };
    match falsify_mv(&t, &alpha, &budget)? {
        None => emit(
            out,
            json,
            json!({ "mode": "search", "found": false, "budget": to_json(&budget) }),
            format!(
                "seed: {}\nno counterexample within budget; kernel PSD at every scanned point (necessary condition only)\n",
                budget.seed
            ),
        )?,
        Some(f) => {
            checked(&f.witness)?;
            let text = format!(
                "seed: {}\ncounterexample after {} points\n{}",
                budget.seed,
                f.points_scanned,
                mv_witness_text(&f.witness)
            );
            let mut value = to_json(&f);
            value["mode"] = json!("search");
            value["found"] = json!(true);
            emit(out, json, value, text)?;
        }
    }
    Ok(0)
}

fn cmd_oracle(a: &OracleArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let t = read_uni_operator(&a.file)?;
    if a.height < 1 || a.squares < 1 {
        return Err(invalid("--height and --squares must be positive"));
    }
    let spec = SampleSpec {
        degree: a.degree,
        squares: a.squares,
        height: a.height,
        trials: a.trials,
        seed: seed_or_default(a.seed)?,
    };
    let r = falsify_preservation(&t, a.cone, &spec);
    let mut text = format!("seed: {}\ntrials: {}\n", r.seed, r.trials_run);
    match &r.witness {
        Some(w) => {
            if !verify_witness(&t, w, a.cone) {
                return Err(internal("oracle witness failed re-verification"));
            }
            text.push_str(&format!("counterexample in trial {}:\n", r.trial.unwrap_or(0)));
            text.push_str(&witness_text(w));
        }
        None => text.push_str("no counterexample found\n"),
    }
    emit(out, json, to_json(&r), text)?;
    Ok(0)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let json = cli.json;
    let result = match &cli.verb {
        Verb::Check(a) => cmd_check(a, json, out),
        Verb::Symbol { m, at, file } => cmd_symbol(*m, at, file, json, out),
        Verb::Hankel { m, at, file } => cmd_hankel(*m, at, file, json, out),
        Verb::Ff { f, g } => cmd_ff(f, g, json, out),
        Verb::WitnessVerify { cone, operator, witness } => cmd_witness_verify(*cone, operator, witness, json, out),
        Verb::ConvBuild { measure, order } => cmd_conv_build(measure, order, json, out),
        Verb::Moments { cmd: MomentsCmd::Check { values } } => cmd_moments_check(values, json, out),
        Verb::Moments {
            cmd: MomentsCmd::Of { measure, len, at },
        } => cmd_moments_of(measure, *len, at, json, out),
        Verb::Recover { values } => cmd_recover(values, json, out),
        Verb::MvCheck(a) => cmd_mv_check(a, json, out),
        Verb::Oracle(a) => cmd_oracle(a, json, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}
