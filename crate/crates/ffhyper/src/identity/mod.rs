//! Data-driven identity catalog and the verification engine.
//!
//! Every product formula, transformation and special-value theorem handled
//! by this crate is one [`IdentityDescriptor`]: an admissibility predicate
//! encoding exactly the stated hypotheses, plus independent left/right
//! evaluators. The engine enumerates the raw parameter cube of characters
//! and field elements (exhaustively, or by seeded uniform sampling), skips
//! inadmissible tuples while counting them, and reports residuals. Under the
//! modular backend a pass is an exact residue equality; under the complex
//! backend it is a relative tolerance check.

pub mod catalog;
pub mod report;
pub mod runner;

use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;

use crate::char_sums::SumTable;
use crate::characters::CharIndex;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::value::CycValue;

pub use report::{ParamsRepr, TabulatedValue, VerificationReport};

/// Default scan budget, in approximate series evaluations.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Parameters of one identity instance: characters by dual exponent, field
/// elements by index, plus a variant counter for multi-part statements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub chars: Vec<CharIndex>,
    pub elems: Vec<Elem>,
    pub variant: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityKind {
    /// Transformation / product formula: verified, not tabulated.
    Transformation,
    /// Special value: both verified and tabulated.
    Value,
}

/// Congruence constraint on q.
#[derive(Debug, Clone, Copy)]
pub struct Congruence {
    pub modulus: u32,
    pub residues: &'static [u32],
}

impl Congruence {
    pub fn admits(&self, q: u32) -> bool {
        self.residues.contains(&(q % self.modulus))
    }

    pub fn describe(&self) -> String {
        let rs: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        format!("q = {} (mod {})", rs.join("|"), self.modulus)
    }
}

type PredFn = fn(&SumTable, &Params) -> bool;
type EvalFn = fn(&SumTable, &Params) -> CycValue;
type BranchFn = fn(&SumTable, &Params) -> &'static str;

/// One catalog entry.
pub struct IdentityDescriptor {
    pub id: &'static str,
    pub description: &'static str,
    pub kind: IdentityKind,
    pub n_chars: usize,
    pub n_elems: usize,
    /// Sub-statement count for chained equalities (usually 1).
    pub variants: u32,
    /// Approximate series evaluations per instance, for budgeting.
    pub cost: u32,
    pub congruence: Option<Congruence>,
    pub admissible: PredFn,
    pub lhs: EvalFn,
    pub rhs: EvalFn,
    /// Branch label, present on Value identities.
    pub branch: Option<BranchFn>,
}

impl IdentityDescriptor {
    /// Size of the raw parameter cube over a field with q elements.
    pub fn cube_size(&self, q: u32) -> u64 {
        let mut total = self.variants as u128;
        for _ in 0..self.n_chars {
            total *= (q - 1) as u128;
        }
        for _ in 0..self.n_elems {
            total *= q as u128;
        }
        total.min(u64::MAX as u128) as u64
    }

    pub fn admits_q(&self, q: u32) -> bool {
        self.congruence.map_or(true, |c| c.admits(q))
    }

    fn check_congruence(&self, q: u32) -> Result<()> {
        match self.congruence {
            Some(c) if !c.admits(q) => Err(Error::CongruenceViolated {
                id: self.id.to_string(),
                modulus: c.modulus,
                want: c
                    .residues
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join("|"),
                q,
            }),
            _ => Ok(()),
        }
    }

    /// Instance at position `idx` of the raw cube.
    pub fn decode(&self, q: u32, mut idx: u64) -> Params {
        let variant = if self.variants > 1 {
            let v = (idx % self.variants as u64) as u32;
            idx /= self.variants as u64;
            v
        } else {
            0
        };
        let m = (q - 1) as u64;
        let chars = (0..self.n_chars)
            .map(|_| {
                let k = idx % m;
                idx /= m;
                CharIndex::new(k as i64, q - 1)
            })
            .collect();
        let elems = (0..self.n_elems)
            .map(|_| {
                let e = (idx % q as u64) as Elem;
                idx /= q as u64;
                e
            })
            .collect();
        Params {
            chars,
            elems,
            variant,
        }
    }
}

/// Scan strategy: full enumeration of the raw cube, or seeded uniform
/// sampling that keeps drawing until `n` admissible instances were checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    Random { n: u64, seed: u64 },
}

impl Strategy {
    pub fn describe(&self) -> String {
        match self {
            Strategy::Exhaustive => "exhaustive".to_string(),
            Strategy::Random { n, seed } => format!("random:{n}:{seed}"),
        }
    }
}

/// Stable per-identity stream so different identities draw different tuples
/// from the same user seed.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Looks up a descriptor by id.
pub fn find(id: &str) -> Result<&'static IdentityDescriptor> {
    catalog::catalog()
        .iter()
        .find(|d| d.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Expands `all`, the `LEMMA_PACK` group name, or a single id.
pub fn expand_ids(spec: &str) -> Result<Vec<&'static IdentityDescriptor>> {
    match spec {
        "all" => Ok(catalog::catalog().iter().collect()),
        "LEMMA_PACK" => Ok(catalog::catalog()
            .iter()
            .filter(|d| d.id.starts_with("LEMMA_PACK:"))
            .collect()),
        id => Ok(vec![find(id)?]),
    }
}

/// Verifies one explicit instance. Inadmissible parameters yield a skipped
/// report, not a failure.
pub fn verify_instance(
    desc: &IdentityDescriptor,
    t: &SumTable,
    params: &Params,
) -> Result<VerificationReport> {
    desc.check_congruence(t.q())?;
    t.require_binom_table()?;
    let mut rep = VerificationReport::single(desc, t, params);
    if !(desc.admissible)(t, params) {
        rep.skipped = 1;
        rep.pass = true;
        rep.residual = "skipped".to_string();
        return Ok(rep);
    }
    let b = t.backend();
    let lhs = (desc.lhs)(t, params);
    let rhs = (desc.rhs)(t, params);
    rep.checked = 1;
    rep.pass = b.eq(lhs, rhs);
    rep.passed = rep.pass as u64;
    rep.residual = b.diff_string(lhs, rhs);
    if let Some(branch) = desc.branch {
        rep.branch = Some(branch(t, params).to_string());
    }
    if !rep.pass {
        rep.witnesses.push(ParamsRepr::from_params(params));
    }
    Ok(rep)
}

/// Special values as printable data: both sides, branch taken, residual.
pub fn tabulate_value(
    desc: &IdentityDescriptor,
    t: &SumTable,
    params: &Params,
) -> Result<TabulatedValue> {
    if desc.kind != IdentityKind::Value {
        return Err(Error::NotAValueIdentity(desc.id.to_string()));
    }
    desc.check_congruence(t.q())?;
    t.require_binom_table()?;
    let b = t.backend();
    let admissible = (desc.admissible)(t, params);
    let (lhs, rhs, residual, pass, branch) = if admissible {
        let lhs = (desc.lhs)(t, params);
        let rhs = (desc.rhs)(t, params);
        (
            lhs.to_string(),
            rhs.to_string(),
            b.diff_string(lhs, rhs),
            b.eq(lhs, rhs),
            desc.branch.map(|f| f(t, params).to_string()),
        )
    } else {
        (String::new(), String::new(), "skipped".into(), true, None)
    };
    Ok(TabulatedValue {
        id: desc.id.to_string(),
        q: t.q(),
        backend: t.backend().label(),
        params: ParamsRepr::from_params(params),
        admissible,
        branch,
        lhs,
        rhs,
        residual,
        pass,
    })
}

/// Scans an identity under its own admissibility predicate.
pub fn scan(
    desc: &IdentityDescriptor,
    t: &SumTable,
    strategy: Strategy,
    budget: u64,
) -> Result<VerificationReport> {
    let pred = desc.admissible;
    scan_with(
        desc,
        t,
        strategy,
        budget,
        move |tt: &SumTable, pp: &Params| pred(tt, pp),
    )
}

/// Scans with a replacement admissibility predicate. The hypothesis
/// tightness probes use this to re-scan exactly the parameter slice a
/// dropped hypothesis would admit.
pub fn scan_with<F>(
    desc: &IdentityDescriptor,
    t: &SumTable,
    strategy: Strategy,
    budget: u64,
    filter: F,
) -> Result<VerificationReport>
where
    F: Fn(&SumTable, &Params) -> bool + Sync,
{
    desc.check_congruence(t.q())?;
    t.require_binom_table()?;
    let total = desc.cube_size(t.q());
    // Sampling a cube no larger than the request degenerates to enumeration.
    let strategy = match strategy {
        Strategy::Random { n, .. } if total <= n => Strategy::Exhaustive,
        s => s,
    };
    match strategy {
        Strategy::Exhaustive => {
            let work = total.saturating_mul(desc.cost.max(1) as u64);
            if work > budget {
                return Err(Error::BudgetExceeded {
                    id: desc.id.to_string(),
                    cost: work,
                    budget,
                });
            }
            let accum = (0..total)
                .into_par_iter()
                .fold(Accum::new, |mut acc, idx| {
                    let params = desc.decode(t.q(), idx);
                    if !filter(t, &params) {
                        acc.skipped += 1;
                        return acc;
                    }
                    evaluate_into(desc, t, idx, &params, &mut acc);
                    acc
                })
                .reduce(Accum::new, Accum::merge);
            Ok(finish_report(desc, t, strategy, accum))
        }
        Strategy::Random { n, seed } => {
            let mut rng = Pcg64::seed_from_u64(seed ^ fnv1a(desc.id));
            let mut chosen = Vec::with_capacity(n as usize);
            let mut skipped = 0u64;
            let max_attempts = n.saturating_mul(1000).max(10_000);
            let mut attempts = 0u64;
            while (chosen.len() as u64) < n && attempts < max_attempts {
                attempts += 1;
                let idx = rng.random_range(0..total);
                if filter(t, &desc.decode(t.q(), idx)) {
                    chosen.push(idx);
                } else {
                    skipped += 1;
                }
            }
            let mut accum = chosen
                .par_iter()
                .fold(Accum::new, |mut acc, &idx| {
                    let params = desc.decode(t.q(), idx);
                    evaluate_into(desc, t, idx, &params, &mut acc);
                    acc
                })
                .reduce(Accum::new, Accum::merge);
            accum.skipped += skipped;
            Ok(finish_report(desc, t, strategy, accum))
        }
    }
}

/// Per-worker scan accumulator. The merge is associative and keeps only the
/// ten smallest failing indices, so reports are deterministic regardless of
/// how rayon splits the range.
struct Accum {
    checked: u64,
    passed: u64,
    skipped: u64,
    max_diff: f64,
    fail_idx: Vec<u64>,
}

impl Accum {
    fn new() -> Accum {
        Accum {
            checked: 0,
            passed: 0,
            skipped: 0,
            max_diff: 0.0,
            fail_idx: Vec::new(),
        }
    }

    fn merge(mut self, other: Accum) -> Accum {
        self.checked += other.checked;
        self.passed += other.passed;
        self.skipped += other.skipped;
        self.max_diff = self.max_diff.max(other.max_diff);
        self.fail_idx.extend(other.fail_idx);
        self.fail_idx.sort_unstable();
        self.fail_idx.truncate(10);
        self
    }
}

fn evaluate_into(
    desc: &IdentityDescriptor,
    t: &SumTable,
    idx: u64,
    params: &Params,
    acc: &mut Accum,
) {
    let b = t.backend();
    let lhs = (desc.lhs)(t, params);
    let rhs = (desc.rhs)(t, params);
    acc.checked += 1;
    acc.max_diff = acc.max_diff.max(b.diff_magnitude(lhs, rhs));
    if b.eq(lhs, rhs) {
        acc.passed += 1;
    } else {
        acc.fail_idx.push(idx);
        acc.fail_idx.sort_unstable();
        acc.fail_idx.truncate(10);
    }
}

fn finish_report(
    desc: &IdentityDescriptor,
    t: &SumTable,
    strategy: Strategy,
    accum: Accum,
) -> VerificationReport {
    let b = t.backend();
    let pass = accum.checked == accum.passed;
    let residual = if !accum.fail_idx.is_empty() {
        // re-evaluate the smallest failing witness for an exact residual
        let params = desc.decode(t.q(), accum.fail_idx[0]);
        b.diff_string((desc.lhs)(t, &params), (desc.rhs)(t, &params))
    } else if b.kind() == crate::value::BackendKind::Complex {
        format!("{:.3e}", accum.max_diff)
    } else {
        "0".to_string()
    };
    VerificationReport {
        schema: report::SCHEMA_VERSION,
        id: desc.id.to_string(),
        q: t.q(),
        backend: b.label(),
        strategy: strategy.describe(),
        params: None,
        branch: None,
        residual,
        pass,
        checked: accum.checked,
        passed: accum.passed,
        skipped: accum.skipped,
        witnesses: accum
            .fail_idx
            .iter()
            .map(|&i| ParamsRepr::from_params(&desc.decode(t.q(), i)))
            .collect(),
    }
}

/// One row of the catalog listing.
#[derive(Debug, Clone, serde::Serialize)]
pub struct IdentityInfo {
    pub id: String,
    pub kind: String,
    pub chars: usize,
    pub elems: usize,
    pub variants: u32,
    pub congruence: String,
    pub description: String,
}

/// Deterministic, stably ordered catalog listing.
pub fn list_identities() -> Vec<IdentityInfo> {
    catalog::catalog()
        .iter()
        .map(|d| IdentityInfo {
            id: d.id.to_string(),
            kind: match d.kind {
                IdentityKind::Transformation => "transformation".to_string(),
                IdentityKind::Value => "value".to_string(),
            },
            chars: d.n_chars,
            elems: d.n_elems,
            variants: d.variants,
            congruence: d
                .congruence
                .map(|c| c.describe())
                .unwrap_or_else(|| "none".to_string()),
            description: d.description.to_string(),
        })
        .collect()
}
