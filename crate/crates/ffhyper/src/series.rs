//! The four hypergeometric series families over F_q.
//!
//! All evaluators loop over dual exponents s = 0..q-2 (the character chi =
//! T^s) with O(1) table lookups per term:
//!
//! * Greene's n+1Fn: q/(q-1) * sum_chi (A0 chi | chi)(A1 chi | B1 chi) ...
//!   (An chi | Bn chi) chi(x), built from the binomial table;
//! * the starred n+1Fn: 1/(q-1) * sum_chi prod g(Ai chi)/g(Ai) *
//!   prod g(conj(Bj chi))/g(conj Bj) * g(conj chi) chi(-1)^{n+1} chi(x);
//! * the period-normalized 2P1 and its 2F1 = 2P1 / J(B, conj(B) C);
//! * the Appell F4 analogue, a raw double character sum.

use crate::char_sums::SumTable;
use crate::characters::CharIndex;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::value::CycValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Greene,
    Mccarthy,
    FuselierP,
    FuselierF,
    AppellF4,
}

/// One series evaluation: upper/lower character lists and the argument.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub family: Family,
    pub uppers: Vec<CharIndex>,
    pub lowers: Vec<CharIndex>,
    pub x: Elem,
    /// Second argument, Appell F4 only.
    pub y: Option<Elem>,
}

fn check_arity(family: Family, uppers: &[CharIndex], lowers: &[CharIndex]) -> Result<()> {
    let ok = match family {
        Family::Greene | Family::Mccarthy => !uppers.is_empty() && uppers.len() == lowers.len() + 1,
        Family::FuselierP | Family::FuselierF => uppers.len() == 2 && lowers.len() == 1,
        Family::AppellF4 => uppers.len() == 2 && lowers.len() == 2,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Arity(format!(
            "{family:?} takes n+1 uppers over n lowers (got {}/{})",
            uppers.len(),
            lowers.len()
        )))
    }
}

/// Greene's series; 0 at x = 0 because chi(0) = 0 for every chi.
pub fn greene(
    t: &SumTable,
    uppers: &[CharIndex],
    lowers: &[CharIndex],
    x: Elem,
) -> Result<CycValue> {
    check_arity(Family::Greene, uppers, lowers)?;
    t.require_binom_table()?;
    let b = t.backend();
    if x == 0 {
        return Ok(b.zero());
    }
    let m = t.m() as usize;
    let dx = t.ctx().dlog(x).expect("nonzero") as usize;
    let a0 = uppers[0].k() as usize;
    let rest: Vec<(usize, usize)> = uppers[1..]
        .iter()
        .zip(lowers)
        .map(|(a, c)| (a.k() as usize, c.k() as usize))
        .collect();
    let mut total = b.zero();
    for s in 0..m {
        let mut term = t.binom_at((a0 + s) % m, s);
        for &(a, c) in &rest {
            term = term * t.binom_at((a + s) % m, (c + s) % m);
        }
        total = total + term * b.root_m((s * dx % m) as i64);
    }
    Ok(total * b.ratio(t.q() as i64, t.m() as i64))
}

/// The starred (Gauss-sum normalized) series.
pub fn mccarthy(
    t: &SumTable,
    uppers: &[CharIndex],
    lowers: &[CharIndex],
    x: Elem,
) -> Result<CycValue> {
    check_arity(Family::Mccarthy, uppers, lowers)?;
    let b = t.backend();
    if x == 0 {
        return Ok(b.zero());
    }
    let m = t.m() as usize;
    let dx = t.ctx().dlog(x).expect("nonzero") as usize;
    let ups: Vec<usize> = uppers.iter().map(|a| a.k() as usize).collect();
    let los: Vec<usize> = lowers.iter().map(|c| c.k() as usize).collect();
    // 1 / (prod g(Ai) * prod g(conj Bj)), pulled out of the sum
    let mut denom_inv = b.one();
    for &a in &ups {
        denom_inv = denom_inv * t.g_inv_at(a);
    }
    for &c in &los {
        denom_inv = denom_inv * t.g_inv_at((m - c) % m);
    }
    let sign_on = uppers.len() % 2 == 1; // chi(-1)^{n+1} with n+1 = uppers.len()
    let mut total = b.zero();
    for s in 0..m {
        let mut term = t.g_at((m - s) % m);
        for &a in &ups {
            term = term * t.g_at((a + s) % m);
        }
        for &c in &los {
            term = term * t.g_at((m - (c + s) % m) % m);
        }
        term = term * b.root_m((s * dx % m) as i64);
        if sign_on && s % 2 == 1 {
            term = -term;
        }
        total = total + term;
    }
    Ok(total * denom_inv * b.ratio(1, t.m() as i64))
}

/// The q^2-scaled period sum 2P1[A, B; C | x].
pub fn fuselier_p(
    t: &SumTable,
    a: CharIndex,
    c: CharIndex,
    d: CharIndex,
    x: Elem,
) -> Result<CycValue> {
    t.require_binom_table()?;
    let b = t.backend();
    let m = t.m() as usize;
    let jterm = t.jacobi(c, c.inv() * d);
    if x == 0 {
        return Ok(jterm);
    }
    let dx = t.ctx().dlog(x).expect("nonzero") as usize;
    let (ak, ck, dk) = (a.k() as usize, c.k() as usize, d.k() as usize);
    let mut total = b.zero();
    for s in 0..m {
        let term = t.binom_at((ak + s) % m, s) * t.binom_at((ck + s) % m, (dk + s) % m);
        total = total + term * b.root_m((s * dx % m) as i64);
    }
    let q = t.q() as i64;
    let sign = (c * d).sign_at_minus_one();
    Ok(total * b.ratio(q * q * sign, q - 1))
}

/// 2F1[A, B; C | x] = 2P1 / J(B, conj(B) C).
pub fn fuselier_f(
    t: &SumTable,
    a: CharIndex,
    c: CharIndex,
    d: CharIndex,
    x: Elem,
) -> Result<CycValue> {
    let p = fuselier_p(t, a, c, d, x)?;
    let j = t.jacobi(c, c.inv() * d);
    if t.backend().is_zero(j) {
        return Err(Error::DivisionByZero);
    }
    Ok(p * j.inv())
}

/// The Appell F4 analogue: a raw double character sum, O(q^2).
pub fn appell_f4(
    t: &SumTable,
    a: CharIndex,
    c: CharIndex,
    d: CharIndex,
    dp: CharIndex,
    x: Elem,
    y: Elem,
) -> CycValue {
    let b = t.backend();
    if x == 0 || y == 0 {
        return b.zero();
    }
    let m = t.m() as usize;
    let dx = t.ctx().dlog(x).expect("nonzero") as usize;
    let dy = t.ctx().dlog(y).expect("nonzero") as usize;
    let (ak, ck) = (a.k() as usize, c.k() as usize);
    let (dk, dpk) = (d.k() as usize, dp.k() as usize);
    // row factor over chi = T^s: g(conj(C chi)) g(conj chi) chi(x)
    let row: Vec<CycValue> = (0..m)
        .map(|s| {
            t.g_at((m - (dk + s) % m) % m) * t.g_at((m - s) % m) * b.root_m((s * dx % m) as i64)
        })
        .collect();
    // column factor over lambda = T^u: g(conj(C' lambda)) g(conj lambda) lambda(y)
    let col: Vec<CycValue> = (0..m)
        .map(|u| {
            t.g_at((m - (dpk + u) % m) % m) * t.g_at((m - u) % m) * b.root_m((u * dy % m) as i64)
        })
        .collect();
    let mut total = b.zero();
    for s in 0..m {
        let mut inner = b.zero();
        for (u, cf) in col.iter().enumerate() {
            let su = (s + u) % m;
            inner = inner + t.g_at((ak + su) % m) * t.g_at((ck + su) % m) * *cf;
        }
        total = total + inner * row[s];
    }
    let denom_inv =
        t.g_inv_at(ak) * t.g_inv_at(ck) * t.g_inv_at((m - dk) % m) * t.g_inv_at((m - dpk) % m);
    let qm1 = t.m() as i64;
    total * denom_inv * b.ratio(1, qm1) * b.ratio(1, qm1)
}

/// Dispatcher for CLI-style evaluation requests.
pub fn eval_series(t: &SumTable, spec: &SeriesSpec) -> Result<CycValue> {
    check_arity(spec.family, &spec.uppers, &spec.lowers)?;
    match spec.family {
        Family::Greene => greene(t, &spec.uppers, &spec.lowers, spec.x),
        Family::Mccarthy => mccarthy(t, &spec.uppers, &spec.lowers, spec.x),
        Family::FuselierP => fuselier_p(t, spec.uppers[0], spec.uppers[1], spec.lowers[0], spec.x),
        Family::FuselierF => fuselier_f(t, spec.uppers[0], spec.uppers[1], spec.lowers[0], spec.x),
        Family::AppellF4 => {
            let y = spec
                .y
                .ok_or_else(|| Error::Arity("appell takes two arguments x, y".into()))?;
            Ok(appell_f4(
                t,
                spec.uppers[0],
                spec.uppers[1],
                spec.lowers[0],
                spec.lowers[1],
                spec.x,
                y,
            ))
        }
    }
}

/// Residual of the starred-vs-Greene relation
/// F* = prod_{i>=1} (Ai | Bi)^{-1} * F,
/// admissible when A0 != eps and Ai != Bi for i >= 1.
pub fn greene_mccarthy_residual(
    t: &SumTable,
    uppers: &[CharIndex],
    lowers: &[CharIndex],
    x: Elem,
) -> Result<CycValue> {
    check_arity(Family::Greene, uppers, lowers)?;
    if uppers[0].is_trivial() {
        return Err(Error::Arity("relation needs A0 != eps".into()));
    }
    if uppers[1..].iter().zip(lowers).any(|(a, c)| a == c) {
        return Err(Error::Arity("relation needs Ai != Bi".into()));
    }
    let starred = mccarthy(t, uppers, lowers, x)?;
    let plain = greene(t, uppers, lowers, x)?;
    let mut prefactor = t.backend().one();
    for (a, c) in uppers[1..].iter().zip(lowers) {
        prefactor = prefactor * t.binom(*a, *c).inv();
    }
    Ok(starred - prefactor * plain)
}

/// Residual of the period-series relation
/// 2F1[A,B;C|x] = q BC(-1)/J(B, conj(B) C) * 2F1(A,B;C|x) + delta(x).
pub fn fuselier_greene_residual(
    t: &SumTable,
    a: CharIndex,
    c: CharIndex,
    d: CharIndex,
    x: Elem,
) -> Result<CycValue> {
    let b = t.backend();
    let lhs = fuselier_f(t, a, c, d, x)?;
    let j = t.jacobi(c, c.inv() * d);
    let plain = greene(t, &[a, c], &[d], x)?;
    let scale = b.int(t.q() as i64 * (c * d).sign_at_minus_one()) * j.inv();
    let rhs = scale * plain + t.delta_e(x);
    Ok(lhs - rhs)
}
