use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use repbasis::coincide::{self, Disagreement};
use repbasis::construct::{self, Phi, Sparsity};
use repbasis::io::{self, int_to_json, SetFile};
use repbasis::repfn::{self, DiracInput, RepKind, Window};
use repbasis::{linforms, modular, oracle, sidon, BigIntSet, EventuallyPeriodicSet, Int};
use serde_json::{json, Value};

use crate::{Check, Command, ComputeArgs, Construct, Generate, OutArgs, ReconstructArgs, SandorArgs, Search, VerifyArgs};

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or malformed input, or a failed precondition.
    Invalid(String),
    /// A guaranteed invariant did not hold.
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Internal(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(m) => write!(f, "{m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<repbasis::Error> for Failure {
    fn from(e: repbasis::Error) -> Self {
        match e {
            repbasis::Error::Internal(m) => Failure::Internal(m),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn window(bounds: &[BigInt]) -> Result<Window<BigInt>> {
    match bounds {
        [lo, hi] => Ok(Window::new(lo.clone(), hi.clone())?),
        _ => Err(Failure::Invalid("window takes two bounds".into())),
    }
}

fn read_set(path: &Path) -> Result<SetFile<BigInt>> {
    Ok(io::parse_set_file(&read(path)?)?)
}

fn read_finite(path: &Path) -> Result<BigIntSet> {
    match read_set(path)? {
        SetFile::Finite(s) => Ok(s),
        SetFile::Periodic(_) => Err(Failure::Invalid(format!("{}: a finite set is required", path.display()))),
    }
}

fn read_periodic(path: &Path) -> Result<EventuallyPeriodicSet<BigInt>> {
    match read_set(path)? {
        SetFile::Periodic(s) => Ok(s),
        SetFile::Finite(_) => Err(Failure::Invalid(format!("{}: a periodic set is required", path.display()))),
    }
}

/// The finite part of `set` that can contribute to `h`-fold sums `<= hi`.
fn material(set: &SetFile<BigInt>, h: usize, hi: &BigInt) -> BigIntSet {
    match set {
        SetFile::Finite(s) => s.clone(),
        SetFile::Periodic(p) => match p.min_element() {
            Some(min) => {
                let top = hi - BigInt::from(h - 1) * &min;
                p.materialize(&min, &top)
            }
            None => BigIntSet::new(),
        },
    }
}

pub fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Compute(a) => compute(a),
        Command::Construct(c) => match c {
            Construct::Urb { steps, phi, out } => construct_urb(steps, phi.as_deref(), &out),
            Construct::Prescribed { order, steps, target, out } => construct_prescribed(order, steps, &target, &out),
            Construct::Linform { u1, u2, steps, out } => construct_linform(u1, u2, steps, &out),
        },
        Command::Check(c) => match c {
            Check::Sidon { set, order, generalized } => check_sidon(&set, order, generalized),
            Check::Coincide { pair, left, right, horizon } => check_coincide(pair, left, right, &horizon),
            Check::Sandor(a) => check_sandor(&a),
        },
        Command::Generate(Generate::Sandor { args, out, complement }) => generate_sandor(&args, out, complement),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Search(Search::Modular { m, order, bound, budget, seed, out }) => {
            search_modular(m, order, bound, budget, seed, out)
        }
        Command::Verify(a) => verify(a),
    }
}

fn compute(a: ComputeArgs) -> Result<()> {
    let kind: RepKind = a.kind.parse()?;
    let w = window(&a.window)?;
    let set = read_set(&a.set)?;
    let table = repfn::rep_table(&material(&set, a.order, w.hi()), a.order, kind, &w)?;
    emit(a.out.as_ref(), &io::write_table(&table, kind, a.order))
}

fn write_outputs(out: &OutArgs, set: &BigIntSet, report: &Value) -> Result<()> {
    emit(out.out.as_ref(), &io::write_set(set))?;
    if let Some(r) = &out.report {
        emit(Some(r), &pretty(report))?;
    }
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "yes"
    } else {
        "no"
    }
}

fn construct_urb(steps: usize, phi: Option<&str>, out: &OutArgs) -> Result<()> {
    let phi = phi.map(Phi::parse).transpose()?;
    let sparsity = phi.as_ref().map(|p| p as &dyn Sparsity<BigInt>);
    let state = construct::urb_build(steps, sparsity)?;
    let v = construct::verify_urb(&state)?;
    let history: Vec<Value> = state
        .history()
        .iter()
        .map(|s| {
            json!({
                "k": s.k,
                "d": int_to_json(&s.d),
                "b": int_to_json(&s.b),
                "c": int_to_json(&s.c),
                "negated": s.negated,
            })
        })
        .collect();
    let mut report = json!({
        "format": io::FORMAT,
        "construction": "urb",
        "steps": steps,
        "size": state.set().len(),
        "d": int_to_json(&state.d()),
        "history": history,
        "verification": {
            "max_count": v.max_count,
            "covered": v.covered,
            "covered_ok": v.covered_ok,
            "fast_path_agrees": v.fast_path_agrees,
            "passed": v.passed(),
        },
    });
    if let Some(p) = &phi {
        let cps = construct::sparsity_checkpoints(&state, p)?;
        let all = cps.iter().all(|c| c.holds());
        report["sparsity"] = json!({
            "checkpoints": cps.len(),
            "all_hold": all,
            "points": cps.iter().map(|c| json!({
                "x": int_to_json(&c.x),
                "count": c.count,
                "phi": int_to_json(&c.phi),
            })).collect::<Vec<_>>(),
        });
    }
    if !v.passed() {
        return Err(Failure::Internal(format!("verification failed: {v:?}")));
    }
    write_outputs(out, state.set(), &report)?;
    eprintln!("verified: {}", verdict(v.passed()));
    Ok(())
}

fn construct_prescribed(order: usize, steps: usize, target: &Path, out: &OutArgs) -> Result<()> {
    let f = io::parse_target::<BigInt>(&read(target)?)?;
    let state = construct::fundrep_build(&f, order, steps)?;
    let v = construct::verify_fundrep(&state, &f)?;
    let history: Vec<Value> = state
        .history()
        .iter()
        .map(|s| match &s.gadget {
            Some((d, c)) => json!({"k": s.k, "u": int_to_json(&s.u), "d": int_to_json(d), "c": int_to_json(c)}),
            None => json!({"k": s.k, "u": int_to_json(&s.u), "satisfied": true}),
        })
        .collect();
    let report = json!({
        "format": io::FORMAT,
        "construction": "prescribed",
        "order": order,
        "steps": steps,
        "size": state.set().len(),
        "target": io::target_to_json(&f),
        "history": history,
        "verification": {
            "upper": v.upper,
            "lower": v.lower,
            "zeros_avoided": v.zeros_avoided,
            "generalized_sidon": v.generalized_sidon,
            "fast_path_agrees": v.fast_path_agrees,
            "passed": v.passed(),
        },
    });
    if !v.passed() {
        return Err(Failure::Internal(format!("verification failed: {v:?}")));
    }
    write_outputs(out, state.set(), &report)?;
    eprintln!("verified: {}", verdict(v.passed()));
    Ok(())
}

fn construct_linform(u1: BigInt, u2: BigInt, steps: usize, out: &OutArgs) -> Result<()> {
    let phi = linforms::BinaryForm::new(u1, u2)?;
    let set = linforms::urb_form(&phi, steps)?;
    let counts = oracle::enum_form(phi.u1(), phi.u2(), &set, &set)?;
    let gap = linforms::form_gap(&phi, &set)?;
    let max = counts.values().copied().max().unwrap_or(0);
    let limit = gap.magnitude().clone();
    let prefix_ok = counts
        .iter()
        .filter(|(n, _)| n.magnitude() < &limit)
        .count()
        == (2 * usize::try_from(&limit).map_err(|_| Failure::Invalid("gap too large".into()))?).saturating_sub(1);
    let passed = max <= 1 && prefix_ok;
    let report = json!({
        "format": io::FORMAT,
        "construction": "linform",
        "u1": int_to_json(phi.u1()),
        "u2": int_to_json(phi.u2()),
        "v1": int_to_json(phi.v1()),
        "v2": int_to_json(phi.v2()),
        "steps": steps,
        "size": set.len(),
        "gap": int_to_json(&gap),
        "verification": {"max_count": max, "prefix_ok": prefix_ok, "passed": passed},
    });
    if !passed {
        return Err(Failure::Internal("verification failed".into()));
    }
    write_outputs(out, &set, &report)?;
    eprintln!("verified: {}", verdict(passed));
    Ok(())
}

fn check_sidon(path: &Path, order: usize, generalized: bool) -> Result<()> {
    let set = read_finite(path)?;
    let col = if generalized {
        sidon::generalized_collision(&set, order)?
    } else {
        sidon::sidon_collision(&set, order)?
    };
    let label = if generalized { "generalized sidon" } else { "sidon" };
    match col {
        None => println!("{label}: yes"),
        Some(c) => {
            let show = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" + ");
            println!("{label}: no ({} = {} = {})", show(&c.left), show(&c.right), c.sum);
        }
    }
    Ok(())
}

fn show_disagreement<T: Int>(d: &Disagreement<T>, name: &str) {
    println!("coincide: no (n = {}, {name}_A = {}, {name}_B = {})", d.n, d.left, d.right);
}

fn check_coincide(
    pair: Option<PathBuf>,
    left: Option<PathBuf>,
    right: Option<PathBuf>,
    horizon: &BigInt,
) -> Result<()> {
    let (a, b) = match (pair, left, right) {
        (Some(p), _, _) => coincide::synthesize_pair(&io::parse_pair::<BigInt>(&read(&p)?)?)?,
        (None, Some(l), Some(r)) => (read_periodic(&l)?, read_periodic(&r)?),
        _ => return Err(Failure::Invalid("give --pair, or both --left and --right".into())),
    };
    match coincide::verify_pair(&a, &b, horizon)? {
        None => println!("coincide: yes"),
        Some(d) => show_disagreement(&d, "R"),
    }
    Ok(())
}

fn head_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '1' => Ok(true),
            '0' => Ok(false),
            _ => Err(Failure::Invalid(format!("head must consist of 0s and 1s, found {c:?}"))),
        })
        .collect()
}

fn check_sandor(a: &SandorArgs) -> Result<()> {
    match coincide::sandor_verify(a.n, &head_bits(&a.head)?, a.horizon)? {
        None => println!("coincide: yes"),
        Some(d) => show_disagreement(&d, "r"),
    }
    Ok(())
}

fn generate_sandor(a: &SandorArgs, out: Option<PathBuf>, complement: Option<PathBuf>) -> Result<()> {
    let (sa, sb) = coincide::sandor_generate::<BigInt>(a.n, &head_bits(&a.head)?, a.horizon)?;
    emit(out.as_ref(), &io::write_set(&sa))?;
    if let Some(p) = complement {
        emit(Some(&p), &io::write_set(&sb))?;
    }
    Ok(())
}

fn reconstruct(a: ReconstructArgs) -> Result<()> {
    let (table, kind, recorded) = io::parse_table::<BigInt>(&read(&a.table)?)?;
    if kind != RepKind::Ordered {
        return Err(Failure::Invalid(format!("table kind is {}, expected ordered", kind.name())));
    }
    let set = repfn::reconstruct_ordered(&table, a.order.unwrap_or(recorded))?;
    emit(a.out.as_ref(), &io::write_set(&set))
}

fn search_modular(m: u64, order: usize, bound: u64, budget: u64, seed: u64, out: Option<PathBuf>) -> Result<()> {
    match modular::search_bounded_basis(m, order, bound, budget, seed)? {
        Some(found) => {
            let counts = modular::rep_mod(&found, order)?;
            eprintln!("max count: {}", counts.iter().max().copied().unwrap_or(0));
            emit(out.as_ref(), &io::write_residues(&found))
        }
        None => {
            println!("none: budget exhausted");
            Ok(())
        }
    }
}

fn verify(a: VerifyArgs) -> Result<()> {
    let w = window(&a.window)?;
    let file = read_set(&a.set)?;
    let set = material(&file, a.order, w.hi());
    let mismatch = oracle::equivalence_suite(&set, a.order, &w)?;
    let gf = repfn::gf_check(&set, a.order, &w)?;
    let dirac_input = match &file {
        SetFile::Finite(s) => DiracInput::Finite(s),
        SetFile::Periodic(p) => DiracInput::Periodic(p),
    };
    let dirac = if a.order == 2 && w.len()? >= 3 {
        let r = repfn::dirac_diagnostic(dirac_input, &w)?;
        json!({"finite": r.finite, "tail_constant": r.tail_constant, "fires": r.fires()})
    } else {
        Value::Null
    };
    let report = json!({
        "format": io::FORMAT,
        "order": a.order,
        "lo": int_to_json(w.lo()),
        "hi": int_to_json(w.hi()),
        "oracle": match &mismatch {
            None => json!({"agrees": true}),
            Some(m) => json!({
                "agrees": false,
                "check": m.check,
                "n": int_to_json(&m.n),
                "expected": m.expected,
                "found": m.found,
            }),
        },
        "generating_function": {
            "ordered": gf.ordered,
            "unordered": gf.unordered,
            "restricted": gf.restricted,
        },
        "dirac": dirac,
    });
    print!("{}", pretty(&report));
    if mismatch.is_some() || !gf.all_pass() {
        return Err(Failure::Internal("fast counts disagree with brute force".into()));
    }
    Ok(())
}
