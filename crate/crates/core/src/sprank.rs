//! Critical maximal ideals, the derived chain `Crit^b`, SP-rank, and the
//! n-critical variants.
//!
//! Stage sets are height thresholds: at every stage the surviving maximal
//! ideals are exactly the keys whose height is at least the threshold, and the
//! vertices below the threshold have become units.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::construction::Construction;
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::ideals::{generators, key_of_vertex, valuation, FgMonomialIdeal, MaxIdealKey};
use crate::index_seq::IndexSeq;
use crate::monoid::{vertex_quotient, Monomial};
use crate::ordinal::Ordinal;
use crate::scheme::WeightScheme;

/// Generators inspected when certifying a verdict.
pub const CERT_GENERATORS: usize = 5;

/// Terms of a fundamental sequence sampled at limit stages.
pub const LIMIT_SAMPLES: u64 = 6;

/// Keys of height at least `threshold` (and below alpha).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageSet {
    pub threshold: Ordinal,
    pub alpha: Ordinal,
    pub sample_keys: Vec<MaxIdealKey>,
}

impl StageSet {
    pub fn new(threshold: Ordinal, alpha: Ordinal) -> Self {
        let sample_keys = sample_keys(&threshold, &alpha);
        StageSet {
            threshold,
            alpha,
            sample_keys,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.threshold >= self.alpha
    }

    pub fn contains(&self, key: &MaxIdealKey) -> bool {
        *key.height() >= self.threshold && *key.height() < self.alpha
    }
}

impl fmt::Display for StageSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("{}")
        } else {
            write!(f, "{{M[h; _] : {} <= h < {}}}", self.threshold, self.alpha)
        }
    }
}

/// A few concrete keys at the lowest heights of `[threshold, alpha)`.
pub fn sample_keys(threshold: &Ordinal, alpha: &Ordinal) -> Vec<MaxIdealKey> {
    let mut heights = vec![threshold.clone()];
    if let Ok(next) = threshold.successor() {
        heights.push(next);
    }
    if let Some(top) = alpha.predecessor() {
        heights.push(top);
    }
    heights.sort();
    heights.dedup();
    let mut out = Vec::new();
    for h in heights.into_iter().filter(|h| h < alpha) {
        out.push(MaxIdealKey::new(h.clone(), IndexSeq::zero()).expect("empty tau"));
        if let Ok(p) = h.successor() {
            if p < *alpha {
                let tau = IndexSeq::from_entries([(p, Ordinal::from_nat(1))]).expect("valid");
                out.push(MaxIdealKey::new(h, tau).expect("tau above height"));
            }
        }
    }
    out
}

/// `n` in "n-critical": a positive natural or omega.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NValue {
    Nat(u64),
    Omega,
}

impl NValue {
    pub fn nat(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        Ok(NValue::Nat(n))
    }
}

impl fmt::Display for NValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NValue::Nat(n) => write!(f, "{n}"),
            NValue::Omega => f.write_str("w"),
        }
    }
}

impl FromStr for NValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "w" | "omega" => Ok(NValue::Omega),
            t => t
                .parse::<u64>()
                .map_err(|_| {
                    Error::parse(0, format!("expected a positive natural or w, got {t:?}"))
                })
                .and_then(NValue::nat),
        }
    }
}

impl Serialize for NValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Supremum of the ideal function of a principal generator ideal over the
/// surviving keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupWeight {
    /// Saturates at `u64::MAX`, which is still larger than every finite `n`
    /// that can be asked about.
    Finite(u64),
    Unbounded,
}

impl SupWeight {
    pub fn exceeds(&self, n: NValue) -> bool {
        match (self, n) {
            (SupWeight::Unbounded, _) => true,
            (SupWeight::Finite(_), NValue::Omega) => false,
            (SupWeight::Finite(w), NValue::Nat(n)) => *w > n,
        }
    }
}

impl fmt::Display for SupWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupWeight::Finite(w) => write!(f, "{w}"),
            SupWeight::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for SupWeight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SupWeight::Finite(w) => serializer.serialize_u64(*w),
            SupWeight::Unbounded => serializer.serialize_str("unbounded"),
        }
    }
}

/// A generator, a child of height at least the stage, and the multiplicity of
/// the child's maximal ideal in the generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareWitness {
    pub generator: Vertex,
    pub child: Vertex,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Justification {
    /// All generators are associated once the lower heights are units.
    PrincipalAtStage {
        generator: Vertex,
        quotients: Vec<Monomial>,
    },
    ChildSquareWitness {
        witnesses: Vec<SquareWitness>,
    },
    /// `sup nu_I <= n` for this ideal.
    WitnessIdeal {
        ideal: FgMonomialIdeal,
        sup: u64,
    },
    /// Every generator ideal has supremum `sup > n`; `key` is a surviving key
    /// reached by a descent from the first generator, with its valuation.
    DescentWeight {
        generator: Vertex,
        sup: SupWeight,
        key: Option<MaxIdealKey>,
        valuation: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CritDecision {
    pub verdict: bool,
    pub justification: Justification,
}

fn check_stage(key: &MaxIdealKey, stage: &Ordinal) -> Result<()> {
    if key.height() < stage {
        return Err(Error::StageMismatch {
            height: key.height().clone(),
            stage: stage.clone(),
        });
    }
    Ok(())
}

/// A child of `g` of height at least `stage` together with the multiplicity
/// of its maximal ideal in `g`. `None` when `g` has no such child.
pub fn square_witness(
    g: &Vertex,
    stage: &Ordinal,
    scheme: &WeightScheme,
) -> Result<Option<SquareWitness>> {
    let h = g.height();
    if h <= stage {
        return Ok(None);
    }
    let child = if h.is_successor() {
        g.successor_child(1)?
    } else {
        let low = if stage.is_successor() {
            stage.clone()
        } else {
            stage.successor()?
        };
        g.limit_child(&std::cmp::max(g.own_component().successor()?, low))
    };
    let key = key_of_vertex(&child);
    let multiplicity = valuation(&key, &Monomial::from_vertex(g.clone()), scheme)?;
    Ok(Some(SquareWitness {
        generator: g.clone(),
        child,
        multiplicity,
    }))
}

/// Whether `M[key]` survives as a critical ideal of the stage-`stage`
/// overring.
pub fn is_critical(
    key: &MaxIdealKey,
    stage: &Ordinal,
    scheme: &WeightScheme,
) -> Result<CritDecision> {
    check_stage(key, stage)?;
    let gens = generators(key, CERT_GENERATORS)?;
    if key.height() == stage {
        let mut quotients = Vec::new();
        for w in gens.windows(2) {
            let q = vertex_quotient(&w[0], &w[1], scheme)?;
            if q.factors().any(|(v, _)| v.height() >= stage) {
                return Err(Error::Config(format!(
                    "{} / {} is not a unit at stage {stage}",
                    w[0], w[1]
                )));
            }
            quotients.push(q);
        }
        return Ok(CritDecision {
            verdict: false,
            justification: Justification::PrincipalAtStage {
                generator: gens[0].clone(),
                quotients,
            },
        });
    }
    let mut witnesses = Vec::new();
    for g in &gens {
        match square_witness(g, stage, scheme)? {
            Some(w) if w.multiplicity >= 2 => witnesses.push(w),
            _ => {
                return Ok(CritDecision {
                    verdict: false,
                    justification: Justification::WitnessIdeal {
                        ideal: FgMonomialIdeal::principal(g.clone().into()),
                        sup: 1,
                    },
                })
            }
        }
    }
    Ok(CritDecision {
        verdict: true,
        justification: Justification::ChildSquareWitness { witnesses },
    })
}

/// Largest valuation of a height-`h` generator over keys of height in
/// `[stage, h]`: the weight product of the longest descent.
pub fn sup_weight(h: &Ordinal, stage: &Ordinal, scheme: &WeightScheme) -> Result<SupWeight> {
    if h < stage {
        return Err(Error::StageMismatch {
            height: h.clone(),
            stage: stage.clone(),
        });
    }
    let (dh, k) = h.split_limit();
    let (ds, m) = stage.split_limit();
    if dh > ds {
        return Ok(SupWeight::Unbounded);
    }
    let mut w: u64 = 1;
    for j in m + 1..=k {
        w = w.saturating_mul(scheme.weight(&dh.add_nat(j)?)?);
    }
    Ok(SupWeight::Finite(w))
}

/// Descends from `g` toward `stage`, stopping once the accumulated weight
/// exceeds `cap`. At a limit height the step goes far enough up the
/// successors that the remaining successor steps carry the missing weight.
fn weighted_descent(
    g: &Vertex,
    stage: &Ordinal,
    cap: u64,
    scheme: &WeightScheme,
) -> Result<Vertex> {
    let mut cur = g.clone();
    let mut acc: u64 = 1;
    while cur.height() > stage && acc <= cap {
        let w = scheme.weight(cur.height())?;
        acc = acc.saturating_mul(w);
        cur = if cur.height().is_successor() {
            cur.successor_child(1)?
        } else {
            let low = if stage.is_successor() {
                stage.clone()
            } else {
                stage.successor()?
            };
            let base = std::cmp::max(cur.own_component().successor()?, low);
            let mut extra = 0;
            let mut reach = acc;
            while reach <= cap {
                reach = reach.saturating_mul(w);
                extra += 1;
            }
            cur.limit_child(&base.add_nat(extra)?)
        };
    }
    Ok(cur)
}

/// Whether `M[key]` is n-critical in the stage-`stage` overring.
///
/// Every finitely generated ideal inside `M` lies in a principal ideal `gD`
/// for a generator `g`, and all generators of one key have the same
/// supremum, so the decision reduces to [`sup_weight`].
pub fn is_n_critical(
    key: &MaxIdealKey,
    stage: &Ordinal,
    n: NValue,
    scheme: &WeightScheme,
) -> Result<CritDecision> {
    check_stage(key, stage)?;
    let g = key.base();
    let sup = sup_weight(key.height(), stage, scheme)?;
    if !sup.exceeds(n) {
        let SupWeight::Finite(s) = sup else {
            unreachable!("unbounded exceeds every n")
        };
        return Ok(CritDecision {
            verdict: false,
            justification: Justification::WitnessIdeal {
                ideal: FgMonomialIdeal::principal(g.into()),
                sup: s,
            },
        });
    }
    let (key, val) = match n {
        NValue::Nat(n) => {
            let end = weighted_descent(&g, stage, n, scheme)?;
            let k = key_of_vertex(&end);
            let v = valuation(&k, &Monomial::from_vertex(g.clone()), scheme).ok();
            (Some(k), v)
        }
        NValue::Omega => (None, None),
    };
    Ok(CritDecision {
        verdict: true,
        justification: Justification::DescentWeight {
            generator: g,
            sup,
            key,
            valuation: val,
        },
    })
}

/// The least limit ordinal above `x`.
fn next_limit(x: &Ordinal) -> Result<Ordinal> {
    x.split_limit().0.add(&Ordinal::omega())
}

/// Memoized threshold recursion for `Crit^b` (or `nCrit^b` when `n` is set).
pub struct StageEngine<'a> {
    construction: &'a Construction,
    n: Option<NValue>,
    memo: HashMap<Ordinal, Ordinal>,
}

impl<'a> StageEngine<'a> {
    pub fn new(construction: &'a Construction) -> Self {
        StageEngine {
            construction,
            n: None,
            memo: HashMap::new(),
        }
    }

    pub fn with_n(construction: &'a Construction, n: NValue) -> Self {
        StageEngine {
            construction,
            n: Some(n),
            memo: HashMap::new(),
        }
    }

    fn alpha(&self) -> &Ordinal {
        self.construction.alpha()
    }

    fn decide(&self, h: &Ordinal, stage: &Ordinal) -> Result<bool> {
        let key = MaxIdealKey::new(h.clone(), IndexSeq::zero())?;
        let scheme = &self.construction.scheme;
        Ok(match self.n {
            None => is_critical(&key, stage, scheme)?.verdict,
            Some(n) => is_n_critical(&key, stage, n, scheme)?.verdict,
        })
    }

    /// The least surviving height that stays critical one stage later.
    /// Verdicts are upward closed in the height up to the next limit, and the
    /// sup weight at least doubles per successor step, so after `SCAN`
    /// heights only the next limit itself remains to be tried.
    fn step(&self, theta: &Ordinal) -> Result<Ordinal> {
        const SCAN: u64 = 70;
        let alpha = self.alpha().clone();
        if *theta >= alpha {
            return Ok(alpha);
        }
        let stop = std::cmp::min(next_limit(theta)?, alpha.clone());
        let mut h = theta.clone();
        for _ in 0..SCAN {
            if h >= stop {
                break;
            }
            if self.decide(&h, theta)? {
                return Ok(h);
            }
            h = h.successor()?;
        }
        if stop == alpha || self.decide(&stop, theta)? {
            return Ok(stop);
        }
        Err(Error::Config(format!(
            "no critical height in [{theta}, {stop}]"
        )))
    }

    /// Threshold of the stage set at `beta`.
    pub fn threshold(&mut self, beta: &Ordinal) -> Result<Ordinal> {
        let alpha = self.alpha().clone();
        if *beta > alpha {
            return Err(Error::Config(format!(
                "stage {beta} exceeds alpha = {alpha}"
            )));
        }
        if let Some(t) = self.memo.get(beta) {
            return Ok(t.clone());
        }
        let (delta, k) = beta.split_limit();
        let mut t = if delta.is_zero() {
            Ordinal::zero()
        } else if let Some(t) = self.memo.get(&delta) {
            t.clone()
        } else {
            let mut best = delta.clone();
            for n in 1..=LIMIT_SAMPLES {
                let b = delta.fundamental(n).expect("limit");
                let tb = self.threshold(&b)?;
                if tb >= alpha {
                    best = alpha.clone();
                    break;
                }
                best = std::cmp::max(best, tb);
            }
            self.memo.insert(delta.clone(), best.clone());
            best
        };
        for i in 1..=k {
            if t >= alpha {
                break;
            }
            t = self.step(&t)?;
            self.memo.insert(delta.add_nat(i)?, t.clone());
        }
        self.memo.insert(beta.clone(), t.clone());
        Ok(t)
    }

    pub fn stage_set(&mut self, beta: &Ordinal) -> Result<StageSet> {
        Ok(StageSet::new(self.threshold(beta)?, self.alpha().clone()))
    }

    /// The least `beta <= alpha` whose stage set is empty.
    pub fn least_empty_stage(&mut self) -> Result<Ordinal> {
        let alpha = self.alpha().clone();
        let mut beta = alpha.clone();
        loop {
            let lower = match beta.predecessor() {
                Some(p) => (self.threshold(&p)? >= alpha).then_some(p),
                None if beta.is_zero() => None,
                None => {
                    let mut found = None;
                    for n in 1..=LIMIT_SAMPLES {
                        let b = beta.fundamental(n).expect("limit");
                        if self.threshold(&b)? >= alpha {
                            found = Some(b);
                            break;
                        }
                    }
                    found
                }
            };
            match lower {
                Some(b) => beta = b,
                None => return Ok(beta),
            }
        }
    }
}

pub fn crit_stage(beta: &Ordinal, construction: &Construction) -> Result<StageSet> {
    StageEngine::new(construction).stage_set(beta)
}

pub fn sp_rank(construction: &Construction) -> Result<Ordinal> {
    StageEngine::new(construction).least_empty_stage()
}

/// Stages shown by default in reports: small naturals, a few small limits
/// and their successors, and alpha itself.
pub fn default_stages(alpha: &Ordinal) -> Vec<Ordinal> {
    let mut out: Vec<Ordinal> = ["0", "1", "2", "3", "w", "w+1", "w*2", "w^2"]
        .iter()
        .map(|s| s.parse::<Ordinal>().expect("literal"))
        .filter(|b| b <= alpha)
        .collect();
    out.push(alpha.clone());
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct StageRow {
    pub beta: Ordinal,
    pub threshold: Ordinal,
    pub sample_keys: Vec<MaxIdealKey>,
    pub n_critical: BTreeMap<String, Ordinal>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimCheck {
    pub n: NValue,
    pub beta: Ordinal,
    pub claim: String,
    pub claimed_threshold: Ordinal,
    pub engine_threshold: Ordinal,
    pub status: &'static str,
    pub witness: Option<CritDecision>,
    pub witness_key: Option<MaxIdealKey>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub alpha: Ordinal,
    pub scheme: WeightScheme,
    pub stages: Vec<StageRow>,
    pub sp_rank: Ordinal,
    pub claims: Vec<ClaimCheck>,
    pub discrepancies: Vec<ClaimCheck>,
}

/// Threshold of `nCrit^beta` that the closed-form identities predict for this
/// weight scheme, together with the identity itself.
fn claimed_threshold(
    scheme: &WeightScheme,
    n: NValue,
    beta: &Ordinal,
    alpha: &Ordinal,
) -> Option<(String, Ordinal)> {
    if beta.is_zero() || beta >= alpha {
        return None;
    }
    match (scheme, n) {
        (WeightScheme::Constant(2), NValue::Nat(n)) if n >= 2 && *beta == Ordinal::from_nat(1) => {
            Some(("nCrit(D) is empty for n >= 2".into(), alpha.clone()))
        }
        (WeightScheme::Constant(w), NValue::Nat(k)) if *w > 2 => {
            if k < *w {
                Some((
                    format!("{k}Crit^b(D) = Crit^b(D) for b < alpha"),
                    beta.clone(),
                ))
            } else {
                Some((
                    format!("{k}Crit^b(D) is empty for b < alpha"),
                    alpha.clone(),
                ))
            }
        }
        (WeightScheme::HeightPlusOne, n) if *beta == Ordinal::from_nat(1) => {
            let t = match n {
                NValue::Nat(n) => std::cmp::min(Ordinal::from_nat(n), alpha.clone()),
                NValue::Omega => alpha.clone(),
            };
            Some(("nCrit(D) = {M[b; t] : b >= n}".into(), t))
        }
        _ => None,
    }
}

/// Stage chains for each `n`, compared against the closed-form identities.
pub fn crit_chain_report(
    construction: &Construction,
    n_values: &[NValue],
    stages: &[Ordinal],
) -> Result<ChainReport> {
    let alpha = construction.alpha().clone();
    let scheme = &construction.scheme;
    let mut base = StageEngine::new(construction);
    let mut engines: Vec<(NValue, StageEngine)> = n_values
        .iter()
        .map(|&n| (n, StageEngine::with_n(construction, n)))
        .collect();
    let mut rows = Vec::new();
    let mut claims = Vec::new();
    for beta in stages {
        let set = base.stage_set(beta)?;
        let mut n_critical = BTreeMap::new();
        for (n, eng) in engines.iter_mut() {
            let t = eng.threshold(beta)?;
            n_critical.insert(n.to_string(), t.clone());
            let Some((claim, claimed)) = claimed_threshold(scheme, *n, beta, &alpha) else {
                continue;
            };
            let agree = claimed == t;
            let (witness, witness_key) = if agree {
                (None, None)
            } else {
                let prev = beta.predecessor().map(|p| eng.threshold(&p)).transpose()?;
                let stage = prev.unwrap_or_else(Ordinal::zero);
                let h = std::cmp::min(t.clone(), claimed.clone());
                let key = MaxIdealKey::new(h, IndexSeq::zero())?;
                let d = if *key.height() < alpha && *key.height() >= stage {
                    Some(is_n_critical(&key, &stage, *n, scheme)?)
                } else {
                    None
                };
                (d, Some(key))
            };
            claims.push(ClaimCheck {
                n: *n,
                beta: beta.clone(),
                claim,
                claimed_threshold: claimed,
                engine_threshold: t,
                status: if agree { "agree" } else { "DISCREPANCY" },
                witness,
                witness_key,
            });
        }
        rows.push(StageRow {
            beta: beta.clone(),
            threshold: set.threshold,
            sample_keys: set.sample_keys,
            n_critical,
        });
    }
    let discrepancies = claims
        .iter()
        .filter(|c| c.status == "DISCREPANCY")
        .cloned()
        .collect();
    Ok(ChainReport {
        alpha,
        scheme: *scheme,
        stages: rows,
        sp_rank: base.least_empty_stage()?,
        claims,
        discrepancies,
    })
}
