//! Gauss sums, Jacobi sums, Greene binomial coefficients, and the per-field
//! caches that make series evaluation table-driven.
//!
//! `SumTable` bundles one field with one backend and holds the Gauss-sum
//! cache g(T^k), its inverses, and the (q-1) x (q-1) binomial table. The
//! table is filled through the Gauss-sum factorization of the binomial
//! coefficient, while the standalone `binom` function evaluates the defining
//! Jacobi sum directly; the two routes stay independent and are checked
//! against each other by the verification suite.

use std::sync::Arc;

use crate::characters::{char_eval, special_char, theta, CharIndex, Special};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::value::{Backend, CycValue};

/// Largest q for which the binomial table is materialized.
pub const BINOM_TABLE_LIMIT: u32 = 2048;

/// Gauss sum by its defining sum over F_q^x.
pub fn gauss_sum_direct(ctx: &FieldCtx, b: &Backend, chi: CharIndex) -> CycValue {
    let m = ctx.m() as u64;
    let k = chi.k() as u64;
    let mut total = b.zero();
    for j in 0..m {
        let x = ctx.g_pow(j as i64);
        total = total + b.root_m((k * j % m) as i64) * theta(ctx, b, x);
    }
    total
}

/// J(A, B) = sum_x A(x) B(1-x); the x = 0 and x = 1 terms vanish by the
/// chi(0) = 0 convention.
pub fn jacobi_sum(ctx: &FieldCtx, b: &Backend, a: CharIndex, c: CharIndex) -> CycValue {
    let mut total = b.zero();
    for x in ctx.nonzero() {
        let y = ctx.one_minus(x);
        if y == 0 {
            continue;
        }
        total = total + char_eval(ctx, b, a, x) * char_eval(ctx, b, c, y);
    }
    total
}

/// Greene binomial coefficient by its definition, B(-1)/q * J(A, conj B).
/// This is the independent route; `SumTable` fills its table from Gauss sums
/// instead.
pub fn binom(ctx: &FieldCtx, b: &Backend, a: CharIndex, c: CharIndex) -> CycValue {
    let j = jacobi_sum(ctx, b, a, c.inv());
    b.ratio(c.sign_at_minus_one(), ctx.q() as i64) * j
}

/// One field plus one backend, with every cache the series evaluators need.
/// Immutable after construction; share freely across scan workers.
pub struct SumTable {
    ctx: Arc<FieldCtx>,
    b: Backend,
    gauss: Vec<CycValue>,
    gauss_inv: Vec<CycValue>,
    binom_tab: Option<Vec<CycValue>>,
    chi3: Option<CharIndex>,
    chi4: Option<CharIndex>,
}

impl SumTable {
    /// Builds the caches with the canonical chi3/chi4 choices.
    pub fn new(ctx: Arc<FieldCtx>, b: Backend) -> SumTable {
        SumTable::with_specials(ctx, b, false)
    }

    /// Same caches, but with chi3 and chi4 replaced by their conjugates.
    /// Used to check that catalog verdicts do not depend on the fixed choice.
    pub fn with_conjugate_specials(ctx: Arc<FieldCtx>, b: Backend) -> SumTable {
        SumTable::with_specials(ctx, b, true)
    }

    fn with_specials(ctx: Arc<FieldCtx>, b: Backend, conjugate: bool) -> SumTable {
        assert_eq!(b.p(), ctx.p() as u64, "backend built for a different p");
        assert_eq!(b.m(), ctx.m() as u64, "backend built for a different q-1");
        let m = ctx.m() as usize;
        let mut gauss = Vec::with_capacity(m);
        for k in 0..m {
            gauss.push(gauss_sum_direct(
                &ctx,
                &b,
                CharIndex::new(k as i64, m as u32),
            ));
        }
        let gauss_inv = gauss.iter().map(|g| g.inv()).collect::<Vec<_>>();
        let flip = |c: CharIndex| if conjugate { c.inv() } else { c };
        let chi3 = special_char(&ctx, Special::Chi3).ok().map(flip);
        let chi4 = special_char(&ctx, Special::Chi4).ok().map(flip);
        let mut t = SumTable {
            ctx,
            b,
            gauss,
            gauss_inv,
            binom_tab: None,
            chi3,
            chi4,
        };
        if t.ctx.q() <= BINOM_TABLE_LIMIT {
            t.binom_tab = Some(t.build_binom_table());
        }
        t
    }

    /// Table entry (T^a choose T^c) from the Gauss-sum factorization:
    /// C(-1) g(A) g(conj C) / (q g(A conj C)) + (q-1)/q delta(A conj C).
    fn build_binom_table(&self) -> Vec<CycValue> {
        let m = self.ctx.m() as usize;
        let q = self.ctx.q() as i64;
        let inv_q = self.b.ratio(1, q);
        let corr = self.b.ratio(q - 1, q);
        let mut tab = Vec::with_capacity(m * m);
        for a in 0..m {
            for c in 0..m {
                let sign = if c % 2 == 1 { -1i64 } else { 1 };
                let diff = (a + m - c) % m;
                let mut v =
                    self.gauss[a] * self.gauss[(m - c) % m] * self.gauss_inv[diff] * inv_q * sign;
                if diff == 0 {
                    v = v + corr;
                }
                tab.push(v);
            }
        }
        tab
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn ctx_arc(&self) -> Arc<FieldCtx> {
        Arc::clone(&self.ctx)
    }

    pub fn backend(&self) -> &Backend {
        &self.b
    }

    pub fn q(&self) -> u32 {
        self.ctx.q()
    }

    pub fn m(&self) -> u32 {
        self.ctx.m()
    }

    /// T^k for this field.
    pub fn chr(&self, k: i64) -> CharIndex {
        CharIndex::new(k, self.ctx.m())
    }

    pub fn eps(&self) -> CharIndex {
        self.chr(0)
    }

    pub fn phi(&self) -> CharIndex {
        self.chr(self.ctx.m() as i64 / 2)
    }

    pub fn chi3(&self) -> Result<CharIndex> {
        self.chi3.ok_or(Error::MissingCharacter("chi3"))
    }

    pub fn chi4(&self) -> Result<CharIndex> {
        self.chi4.ok_or(Error::MissingCharacter("chi4"))
    }

    /// Cached g(T^k).
    #[inline]
    pub fn g(&self, chi: CharIndex) -> CycValue {
        self.gauss[chi.k() as usize]
    }

    #[inline]
    pub fn g_at(&self, k: usize) -> CycValue {
        self.gauss[k]
    }

    /// Cached 1/g(T^k); Gauss sums never vanish in either backend.
    #[inline]
    pub fn g_inv(&self, chi: CharIndex) -> CycValue {
        self.gauss_inv[chi.k() as usize]
    }

    #[inline]
    pub fn g_inv_at(&self, k: usize) -> CycValue {
        self.gauss_inv[k]
    }

    /// Binomial coefficient (T^a choose T^c) from the table.
    #[inline]
    pub fn binom(&self, a: CharIndex, c: CharIndex) -> CycValue {
        self.binom_at(a.k() as usize, c.k() as usize)
    }

    #[inline]
    pub fn binom_at(&self, a: usize, c: usize) -> CycValue {
        let tab = self
            .binom_tab
            .as_ref()
            .expect("binomial table unavailable; check series arity errors first");
        tab[a * self.ctx.m() as usize + c]
    }

    pub fn has_binom_table(&self) -> bool {
        self.binom_tab.is_some()
    }

    pub fn require_binom_table(&self) -> Result<()> {
        if self.binom_tab.is_some() {
            Ok(())
        } else {
            Err(Error::BinomTableTooLarge {
                q: self.ctx.q(),
                limit: BINOM_TABLE_LIMIT,
            })
        }
    }

    /// chi(x) for chi = T^k.
    #[inline]
    pub fn chi_val(&self, chi: CharIndex, x: Elem) -> CycValue {
        char_eval(&self.ctx, &self.b, chi, x)
    }

    /// J(A, B) via Gauss sums and the cache (Jacobi sums are O(1) here).
    pub fn jacobi(&self, a: CharIndex, c: CharIndex) -> CycValue {
        let mut v = self.g(a) * self.g(c) * self.g_inv(a * c);
        if (a * c).is_trivial() {
            v = v + self.b.int((self.q() as i64 - 1) * c.sign_at_minus_one());
        }
        v
    }

    pub fn delta_c(&self, chi: CharIndex) -> CycValue {
        self.b.indicator(chi.is_trivial())
    }

    pub fn delta_e(&self, x: Elem) -> CycValue {
        self.b.indicator(x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(p: u32, r: u32, seed: u64) -> SumTable {
        let ctx = Arc::new(FieldCtx::build(p, r).unwrap());
        let b = Backend::modular(p as u64, ctx.m() as u64, seed).unwrap();
        SumTable::new(ctx, b)
    }

    fn table_c(p: u32, r: u32) -> SumTable {
        let ctx = Arc::new(FieldCtx::build(p, r).unwrap());
        let b = Backend::complex(p as u64, ctx.m() as u64).unwrap();
        SumTable::new(ctx, b)
    }

    #[test]
    fn gauss_of_trivial_is_minus_one() {
        for t in [
            table(5, 1, 1),
            table(3, 2, 2),
            table(13, 1, 3),
            table_c(13, 1),
        ] {
            assert!(t.backend().eq(t.g(t.eps()), t.backend().int(-1)));
        }
    }

    #[test]
    fn gauss_phi_q5_is_sqrt5() {
        let t = table_c(5, 1);
        let g = t.g(t.phi());
        let b = t.backend();
        let diff = b.diff_magnitude(g, b.ratio(2_236_067_977, 1_000_000_000));
        assert!(diff < 1e-6, "g(phi) = {g}");
    }

    #[test]
    fn gauss_norm_is_sqrt_q() {
        for t in [table_c(13, 1), table_c(3, 2), table_c(17, 1)] {
            let b = t.backend();
            let q = t.q() as i64;
            for k in 1..t.m() {
                let chi = t.chr(k as i64);
                let prod = t.g(chi) * t.g(chi.inv());
                // |g|^2 = g * conj(g) = chi(-1) g(chi) g(conj chi)
                let expect = b.int(q * chi.sign_at_minus_one());
                assert!(b.eq(prod, expect));
            }
        }
    }

    #[test]
    fn jacobi_values() {
        for t in [table(5, 1, 5), table_c(5, 1)] {
            let b = t.backend();
            let (ctx, eps, phi) = (t.ctx(), t.eps(), t.phi());
            // J(eps, eps) counts x not in {0, 1}
            assert!(b.eq(jacobi_sum(ctx, b, eps, eps), b.int(t.q() as i64 - 2)));
            // q = 5: J(phi, phi) = -1 by direct summation over 3 terms
            assert!(b.eq(jacobi_sum(ctx, b, phi, phi), b.int(-1)));
        }
    }

    #[test]
    fn jacobi_direct_matches_gauss_route() {
        for t in [table(13, 1, 7), table(3, 2, 8), table_c(13, 1)] {
            for a in 0..t.m() {
                for c in 0..t.m() {
                    let (a, c) = (t.chr(a as i64), t.chr(c as i64));
                    let direct = jacobi_sum(t.ctx(), t.backend(), a, c);
                    assert!(t.backend().eq(direct, t.jacobi(a, c)));
                }
            }
        }
    }

    #[test]
    fn binom_table_matches_defining_sum() {
        for t in [
            table(5, 1, 11),
            table(3, 2, 12),
            table(13, 1, 13),
            table_c(13, 1),
        ] {
            for a in 0..t.m() {
                for c in 0..t.m() {
                    let (ac, cc) = (t.chr(a as i64), t.chr(c as i64));
                    let direct = binom(t.ctx(), t.backend(), ac, cc);
                    assert!(
                        t.backend().eq(direct, t.binom(ac, cc)),
                        "entry ({a},{c}) disagrees"
                    );
                }
            }
        }
    }

    #[test]
    fn binom_special_values() {
        let t = table(5, 1, 21);
        let b = t.backend();
        // (phi choose eps) = -1/q
        assert!(b.eq(t.binom(t.phi(), t.eps()), b.ratio(-1, 5)));
        // (eps choose eps) = (q-2)/q
        assert!(b.eq(t.binom(t.eps(), t.eps()), b.ratio(3, 5)));
        // definition: (phi choose chi4) = chi4(-1)/q * J(phi, conj chi4)
        let chi4 = t.chi4().unwrap();
        let expect = b.ratio(chi4.sign_at_minus_one(), 5) * t.jacobi(t.phi(), chi4.inv());
        assert!(b.eq(t.binom(t.phi(), chi4), expect));
    }

    #[test]
    fn conjugate_specials_flip() {
        let ctx = Arc::new(FieldCtx::build(13, 1).unwrap());
        let b = Backend::modular(13, 12, 4).unwrap();
        let t = SumTable::new(Arc::clone(&ctx), b.clone());
        let tc = SumTable::with_conjugate_specials(ctx, b);
        assert_eq!(t.chi4().unwrap().inv(), tc.chi4().unwrap());
        assert_eq!(t.chi3().unwrap().inv(), tc.chi3().unwrap());
    }
}
