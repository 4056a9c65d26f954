//! Command-line front end. [`run`] does all the work so that tests can drive
//! it without spawning a process; the binary only forwards its arguments and
//! exit status.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::construction::Construction;
use crate::error::{Error, Result};
use crate::graph::{find_path, Vertex};
use crate::ideals::{self, MaxIdealKey};
use crate::index_seq::IndexSeq;
use crate::monoid::{self, Monomial, ALIGN_BUDGET};
use crate::oracle::{self, IndexBox};
use crate::ordinal::Ordinal;
use crate::parse;
use crate::scheme::WeightScheme;
use crate::sprank::{self, NValue, StageEngine, CERT_GENERATORS, LIMIT_SAMPLES};

/// Reports are also written to `<dir>/<command>.json` when this is set.
pub const OUT_DIR_ENV: &str = "SPRANK_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "sprank",
    version,
    about = "Experiments with an almost Dedekind domain of prescribed SP-rank"
)]
pub struct Cli {
    /// Ordinal alpha (>= 1), e.g. `3`, `w+1`, `w^2`
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// `const:N` (N >= 2) or `height+1`
    #[arg(long, global = true)]
    pub scheme: Option<String>,
    /// Oracle box, e.g. `{1<=4, 2<=4, depth<=3, branch<=6}`
    #[arg(long = "box", global = true)]
    pub bx: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Flat `key = value` file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Paths,
    Product,
    Gcd,
    Asymmetry,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The unique path between two vertices, if any
    Path {
        from: String,
        to: String,
    },
    /// Whether the first monomial divides the second
    Divides {
        divisor: String,
        dividend: String,
    },
    Gcd {
        left: String,
        right: String,
    },
    /// Leaf exponents of a vertex inside the box
    Factor {
        vertex: String,
    },
    /// Membership of a monomial in a maximal ideal
    Member {
        key: String,
        monomial: String,
    },
    /// Valuation of a monomial at a maximal ideal
    Val {
        key: String,
        monomial: String,
    },
    /// Criticality of keys at one stage
    Crit {
        #[arg(long)]
        stage: String,
        keys: Vec<String>,
    },
    /// Ideal function of a finitely generated monomial ideal
    Nu {
        ideal: String,
        #[arg(long, num_args = 1..)]
        keys: Vec<String>,
    },
    SpRank,
    /// n-critical stage chains
    Chain {
        #[arg(long, default_value = "1,2,3")]
        n: String,
    },
    /// The alpha = 3 example: ideal classes, criticality, stages, SP-rank
    ExampleA3,
    /// Run brute-force oracles over the box
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Config {
    pub alpha: Ordinal,
    pub scheme: WeightScheme,
    #[serde(rename = "box")]
    pub bx: IndexBox,
    pub format: Format,
}

impl Config {
    pub fn construction(&self) -> Result<Construction> {
        Construction::new(self.alpha.clone(), self.scheme)
    }
}

/// Parses a flat `key = value` file. Blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim();
        if !matches!(k, "alpha" | "scheme" | "box" | "format") {
            return Err(Error::Config(format!("line {}: unknown key {k:?}", i + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn resolve_config(cli: &Cli) -> Result<Config> {
    let mut file = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            parse_config_file(&text)?
        }
        None => BTreeMap::new(),
    };
    let mut pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.remove(key));
    let alpha: Ordinal = pick(&cli.alpha, "alpha")
        .as_deref()
        .unwrap_or("3")
        .parse()?;
    let scheme: WeightScheme = pick(&cli.scheme, "scheme")
        .as_deref()
        .unwrap_or("const:2")
        .parse()?;
    let bx = match pick(&cli.bx, "box") {
        Some(s) => s.parse()?,
        None => IndexBox::default_for(&alpha),
    };
    let format = match (cli.format, file.remove("format")) {
        (Some(f), _) => f,
        (None, Some(s)) => Format::from_str(&s, true).map_err(Error::Config)?,
        (None, None) => Format::Json,
    };
    Ok(Config {
        alpha,
        scheme,
        bx,
        format,
    })
}

/// Exit status and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if status == 0 {
                Outcome {
                    status,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    status,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok((name, report, format)) => {
            let stdout = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report).expect("serializable");
                    s.push('\n');
                    s
                }
                Format::Table => render_table(&report),
            };
            let mut stderr = String::new();
            if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
                let path = PathBuf::from(dir).join(format!("{name}.json"));
                let body = serde_json::to_string_pretty(&report).expect("serializable");
                if let Err(e) = std::fs::write(&path, body + "\n") {
                    stderr = format!("warning: could not write {}: {e}\n", path.display());
                }
            }
            Outcome {
                status: 0,
                stdout,
                stderr,
            }
        }
        Err(e) => Outcome {
            status: 1,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Path { .. } => "path",
        Command::Divides { .. } => "divides",
        Command::Gcd { .. } => "gcd",
        Command::Factor { .. } => "factor",
        Command::Member { .. } => "member",
        Command::Val { .. } => "val",
        Command::Crit { .. } => "crit",
        Command::Nu { .. } => "nu",
        Command::SpRank => "sp-rank",
        Command::Chain { .. } => "chain",
        Command::ExampleA3 => "example-a3",
        Command::Verify { .. } => "verify",
    }
}

fn execute(cli: &Cli) -> Result<(&'static str, Value, Format)> {
    let mut cfg = resolve_config(cli)?;
    if matches!(cli.command, Command::ExampleA3) {
        let a3 = Construction::example_a3();
        cfg.alpha = a3.alpha().clone();
        cfg.scheme = a3.scheme;
        if cli.bx.is_none() {
            cfg.bx = IndexBox::default_for(&cfg.alpha);
        }
    }
    let c = cfg.construction()?;
    let result = dispatch(&cli.command, &cfg, &c)?;
    let name = command_name(&cli.command);
    let report = json!({
        "command": name,
        "config": cfg,
        "bounds": {
            "box": cfg.bx,
            "certified_generators": CERT_GENERATORS,
            "limit_samples": LIMIT_SAMPLES,
            "gcd_rounds": ALIGN_BUDGET,
        },
        "result": result,
    });
    Ok((name, report, cfg.format))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn vertex(c: &Construction, s: &str) -> Result<Vertex> {
    let v = parse::parse_vertex(s)?;
    c.check_vertex(&v)?;
    Ok(v)
}

fn monomial(c: &Construction, s: &str) -> Result<Monomial> {
    let m = parse::parse_monomial(s)?;
    c.check_monomial(&m)?;
    Ok(m)
}

fn key(c: &Construction, s: &str) -> Result<MaxIdealKey> {
    let k = parse::parse_key(s)?;
    c.check_key(&k)?;
    Ok(k)
}

fn dispatch(cmd: &Command, cfg: &Config, c: &Construction) -> Result<Value> {
    let scheme = &c.scheme;
    Ok(match cmd {
        Command::Path { from, to } => {
            let (a, b) = (vertex(c, from)?, vertex(c, to)?);
            let p = find_path(&a, &b);
            json!({
                "from": a,
                "to": b,
                "length": p.as_ref().map(|p| p.len()),
                "path": p,
            })
        }
        Command::Divides { divisor, dividend } => {
            let (a, b) = (monomial(c, divisor)?, monomial(c, dividend)?);
            let g = monoid::monomial_gcd(&a, &b, scheme)?;
            let divides = g.left_quotient.is_one();
            json!({
                "divisor": a,
                "dividend": b,
                "divides": divides,
                "quotient": divides.then_some(g.right_quotient),
            })
        }
        Command::Gcd { left, right } => {
            let (a, b) = (monomial(c, left)?, monomial(c, right)?);
            let g = monoid::monomial_gcd(&a, &b, scheme)?;
            json!({
                "left": a,
                "right": b,
                "gcd": g.gcd,
                "left_quotient": g.left_quotient,
                "right_quotient": g.right_quotient,
                "verified_in_box": oracle::verify_gcd(&g, &a, &b, &cfg.bx, scheme)?,
            })
        }
        Command::Factor { vertex: v } => {
            let v = vertex(c, v)?;
            let w = oracle::window_exponents(&v.clone().into(), &cfg.bx, scheme)?;
            let mut rows = Vec::new();
            let mut agree = true;
            for (r, e) in &w {
                let p = monoid::root_exponent(&v, r, scheme)?;
                agree &= p == *e;
                rows.push(json!({"leaf": r, "exponent": e, "path_exponent": p}));
            }
            json!({"vertex": v, "leaves": rows, "agree": agree})
        }
        Command::Member {
            key: k,
            monomial: m,
        } => {
            let (k, m) = (key(c, k)?, monomial(c, m)?);
            let w = ideals::membership_witness(&k, &m, scheme)?;
            json!({"key": k, "monomial": m, "member": w.is_some(), "witness": w})
        }
        Command::Val {
            key: k,
            monomial: m,
        } => {
            let (k, m) = (key(c, k)?, monomial(c, m)?);
            json!({"key": k, "monomial": m, "valuation": ideals::valuation(&k, &m, scheme)?})
        }
        Command::Crit { stage, keys } => {
            let stage: Ordinal = stage.parse()?;
            let set = sprank::crit_stage(&stage, c)?;
            let keys: Vec<MaxIdealKey> = if keys.is_empty() {
                sprank::sample_keys(&stage, c.alpha())
            } else {
                keys.iter().map(|s| key(c, s)).collect::<Result<_>>()?
            };
            let mut rows = Vec::new();
            for k in &keys {
                let d = sprank::is_critical(k, &stage, scheme)?;
                rows.push(
                    json!({"key": k, "critical": d.verdict, "justification": d.justification}),
                );
            }
            json!({
                "stage": stage,
                "stage_set": set.to_string(),
                "threshold": set.threshold,
                "decisions": rows,
            })
        }
        Command::Nu { ideal, keys } => {
            let ideal = parse::parse_ideal(ideal)?;
            for g in ideal.generators() {
                c.check_monomial(g)?;
            }
            let keys: Vec<MaxIdealKey> = if keys.is_empty() {
                sprank::sample_keys(&Ordinal::zero(), c.alpha())
            } else {
                keys.iter().map(|s| key(c, s)).collect::<Result<_>>()?
            };
            let mut rows = Vec::new();
            for k in &keys {
                rows.push(
                    json!({"key": k, "valuation": ideals::ideal_function(&ideal, k, scheme)?}),
                );
            }
            json!({"ideal": ideal, "rows": rows})
        }
        Command::SpRank => {
            let mut e = StageEngine::new(c);
            let stages = sprank::default_stages(c.alpha());
            let mut rows = Vec::new();
            for b in &stages {
                let s = e.stage_set(b)?;
                rows.push(json!({"beta": b, "threshold": s.threshold, "set": s.to_string()}));
            }
            json!({"sp_rank": e.least_empty_stage()?, "stages": rows})
        }
        Command::Chain { n } => {
            let ns: Vec<NValue> = n.split(',').map(|s| s.parse()).collect::<Result<_>>()?;
            let r = sprank::crit_chain_report(c, &ns, &sprank::default_stages(c.alpha()))?;
            to_value(&r)
        }
        Command::ExampleA3 => example_a3(c)?,
        Command::Verify { suite } => verify(*suite, cfg, c)?,
    })
}

/// Free positions of keys at height `h`, as a key literal with `_` values.
fn key_family(h: &Ordinal, alpha: &Ordinal) -> String {
    let free: Vec<String> = ["1", "2", "3", "w", "w+1"]
        .iter()
        .map(|s| s.parse::<Ordinal>().expect("literal"))
        .filter(|p| p > h && p < alpha)
        .map(|p| format!("{p}=_"))
        .collect();
    format!("M[{h}; {{{}}}]", free.join(", "))
}

fn example_a3(c: &Construction) -> Result<Value> {
    let scheme = &c.scheme;
    let alpha = c.alpha().clone();
    let heights: Vec<Ordinal> = (0..3).map(Ordinal::from_nat).collect();
    let mut classes = Vec::new();
    for h in &heights {
        let k = MaxIdealKey::new(h.clone(), IndexSeq::zero())?;
        let gens = ideals::generators(&k, 3)?;
        let principal = !sprank::is_critical(&k, &Ordinal::zero(), scheme)?.verdict;
        let unique = h.successor()? >= alpha;
        classes.push(json!({
            "height": h,
            "family": if unique { k.to_string() } else { key_family(h, &alpha) },
            "single_key": unique,
            "generators": gens,
            "principal": principal,
        }));
    }
    let sample: Vec<MaxIdealKey> = ["M[0; {1=1, 2=2}]", "M[1; {}]", "M[1; {2=3}]", "M[2; {}]"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;
    let mut table = Vec::new();
    for stage in &heights {
        for k in sample.iter().filter(|k| k.height() >= stage) {
            let d = sprank::is_critical(k, stage, scheme)?;
            table.push(json!({
                "stage": stage,
                "key": k,
                "critical": d.verdict,
                "justification": d.justification,
            }));
        }
    }
    let mut e = StageEngine::new(c);
    let mut stages = Vec::new();
    for b in 0..=3 {
        let b = Ordinal::from_nat(b);
        let s = e.stage_set(&b)?;
        let members: Vec<String> = heights
            .iter()
            .filter(|h| **h >= s.threshold)
            .map(|h| {
                if h.successor().is_ok_and(|p| p >= alpha) {
                    MaxIdealKey::new(h.clone(), IndexSeq::zero())
                        .expect("valid")
                        .to_string()
                } else {
                    key_family(h, &alpha)
                }
            })
            .collect();
        stages.push(json!({
            "beta": b,
            "threshold": s.threshold,
            "heights": heights.iter().filter(|h| **h >= s.threshold).collect::<Vec<_>>(),
            "members": members,
            "empty": s.is_empty(),
        }));
    }
    Ok(json!({
        "ideal_classes": classes,
        "criticality": table,
        "stages": stages,
        "sp_rank": e.least_empty_stage()?,
    }))
}

/// Heights used by the oracle sweeps: zero, the box positions and the small
/// limits below alpha.
fn sweep_heights(c: &Construction, bx: &IndexBox) -> Vec<Ordinal> {
    let mut hs: Vec<Ordinal> = vec![Ordinal::zero()];
    hs.extend(bx.bounds.keys().cloned());
    hs.extend(
        ["w", "w*2", "w^2"]
            .iter()
            .map(|s| s.parse().expect("literal")),
    );
    hs.retain(|h| h < c.alpha());
    hs.sort();
    hs.dedup();
    hs
}

fn sweep_vertices(c: &Construction, bx: &IndexBox) -> Vec<Vertex> {
    sweep_heights(c, bx)
        .iter()
        .flat_map(|h| bx.vertices_at(h))
        .filter(|v| c.check_vertex(v).is_ok())
        .collect()
}

#[derive(Debug, Default, Serialize)]
struct SuiteResult {
    checked: u64,
    violations: Vec<String>,
}

impl SuiteResult {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.violations.len() < 20 {
            self.violations.push(what());
        }
    }
}

fn verify(suite: Suite, cfg: &Config, c: &Construction) -> Result<Value> {
    let scheme = &c.scheme;
    let bx = &cfg.bx;
    let verts = sweep_vertices(c, bx);
    let leaves: Vec<&Vertex> = verts.iter().filter(|v| v.is_leaf()).collect();
    let mut out = BTreeMap::new();
    let want = |s: Suite| suite == s || suite == Suite::All;
    if want(Suite::Paths) {
        let mut r = SuiteResult::default();
        for v in &verts {
            for t in verts.iter().filter(|t| t.height() <= v.height()) {
                let brute = oracle::brute_paths(v, t, bx);
                let fast = find_path(v, t);
                let ok = brute.len() <= 1
                    && match (brute.first(), &fast) {
                        (Some(b), Some(f)) => b == f,
                        (None, None) => true,
                        (None, Some(f)) => !oracle::path_within(f, bx),
                        (Some(_), None) => false,
                    };
                r.record(ok, || format!("{v} -> {t}"));
            }
        }
        out.insert("paths", r);
    }
    if want(Suite::Product) {
        let mut r = SuiteResult::default();
        for v in &verts {
            let w = oracle::window_exponents(&v.clone().into(), bx, scheme)?;
            for l in &leaves {
                let p = monoid::root_exponent(v, l.index(), scheme)?;
                r.record(w.get(l.index()).copied().unwrap_or(0) == p, || {
                    format!("{v} at {l}")
                });
            }
            if !v.is_leaf() {
                for s in 1..=bx.depth {
                    let peeled = oracle::peel(v, s, scheme)?;
                    let eq = monoid::monomial_equal(&peeled, &v.clone().into(), scheme)?
                        && oracle::window_exponents(&peeled, bx, scheme)? == w;
                    r.record(eq, || format!("peel({v}, {s})"));
                }
            }
        }
        out.insert("product", r);
    }
    if want(Suite::Gcd) {
        let mut r = SuiteResult::default();
        for a in &verts {
            for b in &verts {
                let (x, y): (Monomial, Monomial) = (a.clone().into(), b.clone().into());
                let g = monoid::monomial_gcd(&x, &y, scheme)?;
                let ok = oracle::verify_gcd(&g, &x, &y, bx, scheme)?
                    && monoid::monomial_equal(&g.gcd.mul(&g.left_quotient)?, &x, scheme)?
                    && monoid::monomial_equal(&g.gcd.mul(&g.right_quotient)?, &y, scheme)?
                    && oracle::common_leaf(&g.left_quotient, &g.right_quotient, bx, scheme)?
                        .is_none();
                r.record(ok, || format!("gcd({a}, {b})"));
            }
        }
        out.insert("gcd", r);
    }
    if want(Suite::Asymmetry) {
        let mut r = SuiteResult::default();
        for hi in &verts {
            for lo in verts.iter().filter(|lo| lo.height() < hi.height()) {
                let wh = oracle::window_exponents(&hi.clone().into(), bx, scheme)?;
                let wl = oracle::window_exponents(&lo.clone().into(), bx, scheme)?;
                let window_divides = !wh.is_empty()
                    && wh
                        .iter()
                        .all(|(k, e)| wl.get(k).copied().unwrap_or(0) >= *e);
                let ok = !monoid::vertex_divides(hi, lo, scheme)? && !window_divides;
                r.record(ok, || format!("{hi} | {lo}"));
            }
        }
        out.insert("asymmetry", r);
    }
    let passed = out.values().all(|r| r.violations.is_empty());
    Ok(json!({"vertices": verts.len(), "suites": out, "passed": passed}))
}

/// A plain-text rendering of a JSON report: scalars as `key: value`, arrays
/// one element per line.
pub fn render_table(v: &Value) -> String {
    fn scalar(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            Value::Null => "-".into(),
            other => other.to_string(),
        }
    }
    fn go(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    go(&p, x, out);
                }
            }
            Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
                let items: Vec<String> = a.iter().map(scalar).collect();
                out.push_str(&format!("{prefix}: [{}]\n", items.join(", ")));
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    go(&format!("{prefix}[{i}]"), x, out);
                }
            }
            other => out.push_str(&format!("{prefix}: {}\n", scalar(other))),
        }
    }
    let mut out = String::new();
    go("", v, &mut out);
    out
}
