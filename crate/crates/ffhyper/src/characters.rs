//! Multiplicative characters of F_q^x, the additive character, and the two
//! delta functions.
//!
//! The dual group is cyclic of order q-1; we fix its generator T by
//! T(g) = zeta_{q-1} where g is the canonical field generator, and address
//! every character by its dual exponent k: the character T^k. All character
//! algebra (products, inverses, square roots, orders) is then integer
//! arithmetic mod q-1, and evaluation is a table lookup.
//!
//! Every character is extended to F_q by chi(0) = 0, including the trivial
//! character.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::value::{gcd, Backend, CycValue};

/// A multiplicative character T^k of a fixed F_q, addressed by its dual
/// exponent k mod q-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharIndex {
    k: u32,
    /// Order of the dual group, q - 1.
    m: u32,
}

impl CharIndex {
    pub fn new(k: i64, m: u32) -> CharIndex {
        CharIndex {
            k: k.rem_euclid(m as i64) as u32,
            m,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn group_order(&self) -> u32 {
        self.m
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    /// A character is a square in the dual group iff its exponent is even
    /// (q odd makes q-1 even).
    pub fn is_square(&self) -> bool {
        self.k % 2 == 0
    }

    pub fn order(&self) -> u32 {
        self.m / gcd(self.k as u64, self.m as u64) as u32
    }

    pub fn inv(&self) -> CharIndex {
        CharIndex::new(-(self.k as i64), self.m)
    }

    pub fn pow(&self, e: i64) -> CharIndex {
        CharIndex::new(self.k as i64 * e, self.m)
    }

    /// chi(-1) as a sign: -1 iff k is odd (equivalently, by the classical
    /// criterion, iff the order is even and (q-1)/order is odd).
    pub fn sign_at_minus_one(&self) -> i64 {
        if self.k % 2 == 1 {
            -1
        } else {
            1
        }
    }

    /// Canonical square root T^{k/2} (k even, taken in [0, q-1)).
    pub fn sqrt(&self) -> Result<CharIndex> {
        if self.k % 2 != 0 {
            return Err(Error::NonSquareCharacter { k: self.k });
        }
        Ok(CharIndex::new(self.k as i64 / 2, self.m))
    }
}

impl std::ops::Mul for CharIndex {
    type Output = CharIndex;
    fn mul(self, rhs: CharIndex) -> CharIndex {
        assert_eq!(self.m, rhs.m, "characters of different fields");
        CharIndex::new(self.k as i64 + rhs.k as i64, self.m)
    }
}

/// The distinguished characters: trivial, quadratic, cubic, quartic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Special {
    /// Trivial character.
    Eps,
    /// Quadratic character.
    Phi,
    /// A fixed cubic character (exists iff 3 | q-1).
    Chi3,
    /// A fixed quartic character (exists iff 4 | q-1).
    Chi4,
}

pub fn special_char(ctx: &FieldCtx, which: Special) -> Result<CharIndex> {
    let m = ctx.m();
    match which {
        Special::Eps => Ok(CharIndex::new(0, m)),
        Special::Phi => Ok(CharIndex::new(m as i64 / 2, m)),
        Special::Chi3 => {
            if m % 3 != 0 {
                Err(Error::MissingCharacter("chi3"))
            } else {
                Ok(CharIndex::new(m as i64 / 3, m))
            }
        }
        Special::Chi4 => {
            if m % 4 != 0 {
                Err(Error::MissingCharacter("chi4"))
            } else {
                Ok(CharIndex::new(m as i64 / 4, m))
            }
        }
    }
}

/// T^k(x): zero at x = 0, otherwise zeta_{q-1}^{k dlog x}.
#[inline]
pub fn char_eval(ctx: &FieldCtx, b: &Backend, chi: CharIndex, x: Elem) -> CycValue {
    if x == 0 {
        return b.zero();
    }
    let d = ctx.dlog(x).expect("nonzero element") as u64;
    b.root_m((chi.k as u64 * d % chi.m as u64) as i64)
}

/// The additive character theta(x) = zeta_p^{tr(x)}.
#[inline]
pub fn theta(ctx: &FieldCtx, b: &Backend, x: Elem) -> CycValue {
    b.root_p(ctx.trace(x) as i64)
}

/// delta on characters: 1 iff trivial.
pub fn delta_char(chi: CharIndex) -> u32 {
    chi.is_trivial() as u32
}

/// delta on field elements: 1 iff zero.
pub fn delta_point(x: Elem) -> u32 {
    (x == 0) as u32
}

/// One-stop character summary: order, squareness, canonical root, sign.
#[derive(Debug, Clone, Copy)]
pub struct CharAlgebra {
    pub order: u32,
    pub is_square: bool,
    pub sqrt: Option<CharIndex>,
    pub inverse: CharIndex,
    pub sign_at_minus_one: i64,
}

pub fn char_algebra(chi: CharIndex) -> CharAlgebra {
    CharAlgebra {
        order: chi.order(),
        is_square: chi.is_square(),
        sqrt: chi.sqrt().ok(),
        inverse: chi.inv(),
        sign_at_minus_one: chi.sign_at_minus_one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(p: u32, r: u32) -> (FieldCtx, Backend) {
        let ctx = FieldCtx::build(p, r).unwrap();
        let b = Backend::modular(p as u64, ctx.m() as u64, 17).unwrap();
        (ctx, b)
    }

    #[test]
    fn chi_of_zero_is_zero_even_for_trivial() {
        let (ctx, b) = setup(5, 1);
        for k in 0..ctx.m() {
            let chi = CharIndex::new(k as i64, ctx.m());
            assert!(b.eq(char_eval(&ctx, &b, chi, 0), b.zero()));
            assert!(b.eq(char_eval(&ctx, &b, chi, 1), b.one()));
        }
    }

    #[test]
    fn quadratic_character_of_nonresidue() {
        let (ctx, b) = setup(5, 1);
        let phi = special_char(&ctx, Special::Phi).unwrap();
        // dlog(2) = 1, zeta_4^2 = -1
        assert!(b.eq(char_eval(&ctx, &b, phi, 2), b.int(-1)));
    }

    #[test]
    fn special_characters_q13_and_q7() {
        let ctx = FieldCtx::build(13, 1).unwrap();
        assert_eq!(special_char(&ctx, Special::Chi4).unwrap().k(), 3);
        assert_eq!(special_char(&ctx, Special::Chi3).unwrap().k(), 4);
        let chi4 = special_char(&ctx, Special::Chi4).unwrap();
        let phi = special_char(&ctx, Special::Phi).unwrap();
        assert_eq!(chi4.pow(2), phi);
        assert_eq!(special_char(&ctx, Special::Chi3).unwrap().order(), 3);

        let f7 = FieldCtx::build(7, 1).unwrap();
        assert!(matches!(
            special_char(&f7, Special::Chi4),
            Err(Error::MissingCharacter("chi4"))
        ));
    }

    #[test]
    fn theta_is_additive() {
        for (p, r) in [(5u32, 1u32), (3, 2), (13, 1)] {
            let (ctx, b) = setup(p, r);
            assert!(b.eq(theta(&ctx, &b, 0), b.one()));
            for a in 0..ctx.q() {
                for c in 0..ctx.q() {
                    let lhs = theta(&ctx, &b, ctx.add(a, c));
                    let rhs = theta(&ctx, &b, a) * theta(&ctx, &b, c);
                    assert!(b.eq(lhs, rhs));
                }
            }
            // nontrivial: sum over all of F_q vanishes
            let mut total = theta(&ctx, &b, 0);
            for x in ctx.nonzero() {
                total = total + theta(&ctx, &b, x);
            }
            assert!(b.eq(total, b.zero()));
        }
        // spec example: q = 9, theta(t) = 1 because tr(t) = 0
        let (ctx, b) = setup(3, 2);
        assert!(b.eq(theta(&ctx, &b, 3), b.one()));
        // q = 5: theta(1) = zeta_5
        let (ctx, b) = setup(5, 1);
        assert!(b.eq(theta(&ctx, &b, 1), b.root_p(1)));
    }

    #[test]
    fn multiplicativity_exhaustive_small() {
        for (p, r) in [(5u32, 1u32), (3, 2), (7, 2), (13, 1)] {
            let (ctx, b) = setup(p, r);
            for k in 0..ctx.m() {
                let chi = CharIndex::new(k as i64, ctx.m());
                for x in ctx.nonzero() {
                    for y in ctx.nonzero() {
                        let lhs = char_eval(&ctx, &b, chi, ctx.mul(x, y));
                        let rhs = char_eval(&ctx, &b, chi, x) * char_eval(&ctx, &b, chi, y);
                        assert!(b.eq(lhs, rhs));
                    }
                }
            }
        }
    }

    #[test]
    fn sign_law_exhaustive() {
        for (p, r) in [(5u32, 1u32), (3, 2), (13, 1), (17, 1), (7, 2)] {
            let (ctx, b) = setup(p, r);
            let minus_one = ctx.neg(1);
            for k in 0..ctx.m() {
                let chi = CharIndex::new(k as i64, ctx.m());
                let val = char_eval(&ctx, &b, chi, minus_one);
                let sign = chi.sign_at_minus_one();
                assert!(b.eq(val, b.int(sign)));
                // classical criterion agrees
                let m = chi.order();
                let crit = m % 2 == 0 && (ctx.m() / m) % 2 == 1;
                assert_eq!(sign == -1, crit);
                // non-squares always give -1
                if !chi.is_square() {
                    assert_eq!(sign, -1);
                }
            }
        }
    }

    #[test]
    fn orthogonality() {
        let (ctx, b) = setup(13, 1);
        for x in ctx.nonzero() {
            let mut total = b.zero();
            for k in 0..ctx.m() {
                total = total + char_eval(&ctx, &b, CharIndex::new(k as i64, ctx.m()), x);
            }
            let expect = if x == 1 {
                b.int(ctx.m() as i64)
            } else {
                b.zero()
            };
            assert!(b.eq(total, expect));
        }
    }

    #[test]
    fn delta_functions() {
        let ctx = FieldCtx::build(5, 1).unwrap();
        let eps = special_char(&ctx, Special::Eps).unwrap();
        let phi = special_char(&ctx, Special::Phi).unwrap();
        assert_eq!(delta_char(eps), 1);
        assert_eq!(delta_char(phi), 0);
        assert_eq!(delta_point(0), 1);
        assert_eq!(delta_point(3), 0);
    }

    #[test]
    fn char_algebra_summary() {
        let ctx = FieldCtx::build(13, 1).unwrap();
        let a = CharIndex::new(4, ctx.m());
        let alg = char_algebra(a);
        assert!(alg.is_square);
        assert_eq!(alg.sqrt.unwrap().k(), 2);
        assert_eq!(alg.inverse.k(), 8);
        let eps = CharIndex::new(0, ctx.m());
        assert_eq!(char_algebra(eps).order, 1);
        assert_eq!(char_algebra(eps).sign_at_minus_one, 1);
        let odd = CharIndex::new(1, ctx.m());
        assert!(odd.sqrt().is_err());
        assert_eq!(odd.sign_at_minus_one(), -1);
    }
}
