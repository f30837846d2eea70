//! Choice-invariance checks: catalog verdicts must not depend on which
//! fixed cubic/quartic character is chosen, on which square root of a
//! character backs a branch formula, or on the sign of a field square root.

use std::sync::Arc;

use ffhyper::char_sums::SumTable;
use ffhyper::identity::{self, runner::factor_prime_power, Strategy, DEFAULT_BUDGET};
use ffhyper::value::Backend;
use ffhyper::{FieldCtx, Special};

fn pair_of_tables(q: u32, seed: u64) -> (SumTable, SumTable) {
    let (p, r) = factor_prime_power(q).unwrap();
    let ctx = Arc::new(FieldCtx::build(p, r).unwrap());
    let b = Backend::modular(p as u64, ctx.m() as u64, seed).unwrap();
    (
        SumTable::new(Arc::clone(&ctx), b.clone()),
        SumTable::with_conjugate_specials(ctx, b),
    )
}

#[test]
fn conjugate_special_characters_leave_verdicts_unchanged() {
    let affected = [
        "LEMMA_PACK:DH3",
        "LEMMA_PACK:DH4",
        "VALUE41_I",
        "VALUE41_II",
        "V41C1",
        "ONO8",
        "VALUE45",
        "VALUE46",
        "VALUE49",
    ];
    for q in [13u32, 17, 37] {
        let (canonical, conjugate) = pair_of_tables(q, 77);
        for id in affected {
            let desc = identity::find(id).unwrap();
            if !desc.admits_q(q) {
                continue;
            }
            let a = identity::scan(desc, &canonical, Strategy::Exhaustive, DEFAULT_BUDGET).unwrap();
            let b = identity::scan(desc, &conjugate, Strategy::Exhaustive, DEFAULT_BUDGET).unwrap();
            assert_eq!(
                (a.pass, a.checked, a.passed, a.skipped),
                (b.pass, b.checked, b.passed, b.skipped),
                "{id} at q={q} changed verdict under conjugate chi3/chi4"
            );
            assert!(a.pass, "{id} at q={q}");
        }
    }
}

#[test]
fn value45_rhs_invariant_under_other_root() {
    // The branch value 1/q + (z + conj z)/q^2 with z = J(D, phi) J(conj(D) chi4, phi)
    // must not depend on which square root D of C chi4 is used.
    for q in [17u32, 41, 73] {
        let (p, r) = factor_prime_power(q).unwrap();
        let ctx = Arc::new(FieldCtx::build(p, r).unwrap());
        let bk = Backend::modular(p as u64, ctx.m() as u64, 5).unwrap();
        let t = SumTable::new(ctx, bk);
        let b = t.backend();
        let (phi, chi4) = (t.phi(), special_chi4(&t));
        for kc in 0..t.m() {
            let c = t.chr(kc as i64);
            let ord = c.order();
            if ord == 1 || ord == 2 || ord == 4 || !(c * chi4).is_square() {
                continue;
            }
            let d = (c * chi4).sqrt().unwrap();
            let dphi = d * phi;
            let val = |d: ffhyper::CharIndex| {
                t.jacobi(d, phi) * t.jacobi(d.inv() * chi4, phi)
                    + t.jacobi(d.inv(), phi) * t.jacobi(d * chi4.inv(), phi)
            };
            assert!(b.eq(val(d), val(dphi)), "q={q} C=T^{kc}");
        }
    }
}

fn special_chi4(t: &SumTable) -> ffhyper::CharIndex {
    ffhyper::characters::special_char(t.ctx(), Special::Chi4).unwrap()
}

#[test]
fn root_pair_sums_ignore_root_sign() {
    let (p, r) = factor_prime_power(13).unwrap();
    let ctx = Arc::new(FieldCtx::build(p, r).unwrap());
    let bk = Backend::modular(p as u64, ctx.m() as u64, 6).unwrap();
    let t = SumTable::new(Arc::clone(&ctx), bk);
    let b = t.backend();
    for k in 0..t.m() {
        let chi = t.chr(k as i64);
        for x in ctx.nonzero() {
            if let Some(s) = ctx.sqrt_elem(x) {
                let plus = t.chi_val(chi, ctx.add(1, s)) + t.chi_val(chi, ctx.sub(1, s));
                let neg = ctx.neg(s);
                let minus = t.chi_val(chi, ctx.add(1, neg)) + t.chi_val(chi, ctx.sub(1, neg));
                assert!(b.eq(plus, minus));
            }
        }
    }
}

#[test]
fn branch_binomial_sums_ignore_sqrt_char_choice() {
    // (C|A) + (phi C|A) is unchanged when C is replaced by the other square
    // root phi C of C^2.
    let (p, r) = factor_prime_power(13).unwrap();
    let ctx = Arc::new(FieldCtx::build(p, r).unwrap());
    let bk = Backend::modular(p as u64, ctx.m() as u64, 7).unwrap();
    let t = SumTable::new(ctx, bk);
    let b = t.backend();
    let phi = t.phi();
    for ka in 0..t.m() {
        for kc in 0..t.m() {
            let (a, c) = (t.chr(ka as i64), t.chr(kc as i64));
            let one = t.binom(c, a) + t.binom(phi * c, a);
            let other = t.binom(phi * c, a) + t.binom(phi * (phi * c), a);
            assert!(b.eq(one, other));
        }
    }
}
