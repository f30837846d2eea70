//! Finite field construction for q = p^r with fully materialized tables.
//!
//! Elements are stored as indices 0..q encoding coordinate vectors over F_p
//! with respect to the basis 1, t, t^2, ..., t^{r-1}: the element with
//! coordinates (c_0, ..., c_{r-1}) has index c_0 + c_1 p + ... + c_{r-1} p^{r-1}.
//! The canonical ordering used for the modulus and generator searches is
//! lexicographic on (c_0, c_1, ...), comparing the constant coordinate first.
//!
//! After construction everything is table-driven: a discrete-log table makes
//! multiplication, inversion and character evaluation O(1), and a trace table
//! backs the additive character.

use crate::error::{Error, Result};
use crate::value::{is_prime_u64, prime_factors};

/// Field elements are plain indices into the tables of their `FieldCtx`.
pub type Elem = u32;

/// Size budget for q = p^r.
pub const FIELD_SIZE_BUDGET: u64 = 100_000;

#[derive(Debug)]
pub struct FieldCtx {
    p: u32,
    r: u32,
    q: u32,
    /// Monic modulus coefficients c_0..c_r (c_r = 1); empty when r = 1.
    modulus: Vec<u32>,
    generator: Elem,
    /// exp[i] = g^i for i in 0..q-1.
    exp: Vec<u32>,
    /// dlog[x] = i with g^i = x; dlog[0] is a sentinel.
    dlog_tab: Vec<u32>,
    /// trace_tab[x] = x + x^p + ... + x^{p^{r-1}} as an element of F_p.
    trace_tab: Vec<u32>,
    one_minus: Vec<u32>,
    neg_tab: Vec<u32>,
}

const DLOG_OF_ZERO: u32 = u32::MAX;

impl FieldCtx {
    /// Builds F_{p^r} with the canonical modulus and generator.
    pub fn build(p: u32, r: u32) -> Result<FieldCtx> {
        if p < 3 || p % 2 == 0 || !is_prime_u64(p as u64) {
            return Err(Error::NotAnOddPrime(p as u64));
        }
        if r < 1 {
            return Err(Error::FieldTooLarge {
                p: p as u64,
                r,
                q: 0,
                budget: FIELD_SIZE_BUDGET,
            });
        }
        let q128 = (p as u128).pow(r);
        if q128 > FIELD_SIZE_BUDGET as u128 {
            return Err(Error::FieldTooLarge {
                p: p as u64,
                r,
                q: q128.min(u64::MAX as u128) as u64,
                budget: FIELD_SIZE_BUDGET,
            });
        }
        let q = q128 as u32;

        let modulus = if r == 1 {
            Vec::new()
        } else {
            canonical_modulus(p, r)
        };

        let mut ctx = FieldCtx {
            p,
            r,
            q,
            modulus,
            generator: 0,
            exp: Vec::new(),
            dlog_tab: Vec::new(),
            trace_tab: Vec::new(),
            one_minus: Vec::new(),
            neg_tab: Vec::new(),
        };

        ctx.generator = ctx.find_generator();
        ctx.build_log_tables();
        ctx.build_pointwise_tables();
        ctx.build_trace_table();
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Order of the multiplicative group, q - 1.
    pub fn m(&self) -> u32 {
        self.q - 1
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// Monic modulus coefficients c_0..c_r; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Exponent of x with respect to the canonical generator.
    pub fn dlog(&self, x: Elem) -> Result<u32> {
        if x == 0 {
            return Err(Error::ZeroLog);
        }
        Ok(self.dlog_tab[x as usize])
    }

    /// g^e for e taken mod q-1.
    pub fn g_pow(&self, e: i64) -> Elem {
        self.exp[e.rem_euclid(self.m() as i64) as usize]
    }

    pub fn trace(&self, x: Elem) -> u32 {
        self.trace_tab[x as usize]
    }

    /// Canonical square root: g^{dlog(x)/2} when dlog(x) is even, 0 for 0.
    pub fn sqrt_elem(&self, x: Elem) -> Option<Elem> {
        if x == 0 {
            return Some(0);
        }
        let d = self.dlog_tab[x as usize];
        if d % 2 == 0 {
            Some(self.exp[(d / 2) as usize])
        } else {
            None
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.r == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut mult = 1u32;
        for _ in 0..self.r {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * mult;
            a /= self.p;
            b /= self.p;
            mult = mult.wrapping_mul(self.p);
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.neg_tab[a as usize]
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg_tab[b as usize])
    }

    /// 1 - x via a precomputed table (hot in Jacobi sums).
    #[inline]
    pub fn one_minus(&self, x: Elem) -> Elem {
        self.one_minus[x as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = self.dlog_tab[a as usize] as u64 + self.dlog_tab[b as usize] as u64;
        self.exp[(e % self.m() as u64) as usize]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero field element");
        let d = self.dlog_tab[a as usize];
        self.exp[((self.m() - d) % self.m()) as usize]
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    /// a^e with the convention 0^e = 0 for e > 0; negative e requires a != 0.
    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        if a == 0 {
            assert!(e > 0, "0^e undefined for e <= 0");
            return 0;
        }
        let d = self.dlog_tab[a as usize] as i64;
        self.g_pow(d * e)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    /// Nonzero elements in generator-power order: g^0, g^1, ...
    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        self.exp.iter().copied()
    }

    /// Coordinates (c_0, ..., c_{r-1}) of an element.
    pub fn coords(&self, x: Elem) -> Vec<u32> {
        let mut x = x;
        (0..self.r)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    /// Render an element as a polynomial in t (just the integer for r = 1).
    pub fn elem_string(&self, x: Elem) -> String {
        if self.r == 1 {
            return x.to_string();
        }
        poly_string(&self.coords(x))
    }

    pub fn modulus_string(&self) -> String {
        if self.r == 1 {
            "none".to_string()
        } else {
            poly_string(&self.modulus)
        }
    }

    fn find_generator(&self) -> Elem {
        let fac = prime_factors(self.m() as u64);
        for rank in 1..self.q {
            let cand = self.canonical_rank_to_elem(rank);
            if cand == 0 {
                continue;
            }
            let primitive = fac
                .iter()
                .all(|&s| self.pow_raw(cand, (self.m() as u64 / s) as u32) != 1);
            if primitive {
                return cand;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    /// Element at position `rank` in the canonical (c_0-first lexicographic)
    /// ordering: the base-p digit reversal of the rank.
    fn canonical_rank_to_elem(&self, rank: u32) -> Elem {
        if self.r == 1 {
            return rank;
        }
        let mut rank = rank;
        let mut digits = vec![0u32; self.r as usize];
        for j in (0..self.r as usize).rev() {
            digits[j] = rank % self.p;
            rank /= self.p;
        }
        // digits[0] is now c_0 (the most significant digit of the rank)
        let mut out = 0u32;
        for j in (0..self.r as usize).rev() {
            out = out * self.p + digits[j];
        }
        out
    }

    /// Multiplication without tables, used only during construction.
    fn mul_raw(&self, a: Elem, b: Elem) -> Elem {
        if self.r == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let pa = self.coords(a);
        let pb = self.coords(b);
        let r = self.r as usize;
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &ca) in pa.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (j, &cb) in pb.iter().enumerate() {
                prod[i + j] += ca as u64 * cb as u64;
            }
        }
        for c in prod.iter_mut() {
            *c %= self.p as u64;
        }
        // reduce modulo the monic modulus
        for i in (r..prod.len()).rev() {
            let lead = prod[i];
            if lead == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..r {
                let idx = i - r + j;
                let sub = lead * self.modulus[j] as u64 % self.p as u64;
                prod[idx] = (prod[idx] + self.p as u64 - sub) % self.p as u64;
            }
        }
        let mut out = 0u32;
        for j in (0..r).rev() {
            out = out * self.p + prod[j] as u32;
        }
        out
    }

    fn pow_raw(&self, a: Elem, mut e: u32) -> Elem {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_log_tables(&mut self) {
        let m = self.m() as usize;
        self.exp = Vec::with_capacity(m);
        self.dlog_tab = vec![DLOG_OF_ZERO; self.q as usize];
        let mut x = 1u32;
        for i in 0..m {
            debug_assert_eq!(
                self.dlog_tab[x as usize], DLOG_OF_ZERO,
                "generator has small order"
            );
            self.exp.push(x);
            self.dlog_tab[x as usize] = i as u32;
            x = self.mul_raw(x, self.generator);
        }
        debug_assert_eq!(x, 1);
    }

    fn build_pointwise_tables(&mut self) {
        let one = 1u32;
        self.neg_tab = (0..self.q)
            .map(|x| {
                // -x has coordinates p - c_j
                let mut x = x;
                let mut out = 0u32;
                let mut mult = 1u32;
                for _ in 0..self.r {
                    let c = x % self.p;
                    out += if c == 0 { 0 } else { self.p - c } * mult;
                    x /= self.p;
                    mult = mult.wrapping_mul(self.p);
                }
                out
            })
            .collect();
        self.one_minus = (0..self.q)
            .map(|x| self.add(one, self.neg_tab[x as usize]))
            .collect();
    }

    fn build_trace_table(&mut self) {
        let m = self.m() as u64;
        self.trace_tab = vec![0u32; self.q as usize];
        for d in 0..m {
            let x = self.exp[d as usize];
            let mut acc = 0u32;
            let mut e = d;
            for _ in 0..self.r {
                acc = self.add(acc, self.exp[e as usize]);
                e = e * self.p as u64 % m;
            }
            debug_assert!(acc < self.p, "trace landed outside the prime subfield");
            self.trace_tab[x as usize] = acc;
        }
    }
}

/// Lexicographically smallest monic irreducible of degree r over F_p,
/// coefficients compared constant-term first. Found by trial division
/// against all monic polynomials of degree <= r/2.
fn canonical_modulus(p: u32, r: u32) -> Vec<u32> {
    let total = (p as u64).pow(r);
    for rank in 0..total {
        // coefficients (c_0, ..., c_{r-1}), c_0 from the most significant digit
        let mut v = rank;
        let mut coeffs = vec![0u32; r as usize + 1];
        coeffs[r as usize] = 1;
        for j in (0..r as usize).rev() {
            coeffs[j] = (v % p as u64) as u32;
            v /= p as u64;
        }
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p");
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let r = f.len() - 1;
    if f[0] == 0 {
        return false; // divisible by t
    }
    for d in 1..=r / 2 {
        let count = (p as u64).pow(d as u32);
        for rank in 0..count {
            let mut v = rank;
            let mut div = vec![0u32; d + 1];
            div[d] = 1;
            for c in div.iter_mut().take(d) {
                *c = (v % p as u64) as u32;
                v /= p as u64;
            }
            if poly_rem_is_zero(f, &div, p) {
                return false;
            }
        }
    }
    true
}

/// True when the monic divisor divides f over F_p.
fn poly_rem_is_zero(f: &[u32], div: &[u32], p: u32) -> bool {
    let mut rem: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let d = div.len() - 1;
    for i in (d..rem.len()).rev() {
        let lead = rem[i];
        if lead == 0 {
            continue;
        }
        rem[i] = 0;
        for j in 0..d {
            let sub = lead * div[j] as u64 % p as u64;
            rem[i - d + j] = (rem[i - d + j] + p as u64 - sub) % p as u64;
        }
    }
    rem.iter().all(|&c| c == 0)
}

fn poly_string(coeffs: &[u32]) -> String {
    let mut parts = Vec::new();
    for (j, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let part = match (j, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".to_string(),
            (1, c) => format!("{c}t"),
            (j, 1) => format!("t^{j}"),
            (j, c) => format!("{c}t^{j}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            FieldCtx::build(4, 1),
            Err(Error::NotAnOddPrime(4))
        ));
        assert!(matches!(
            FieldCtx::build(2, 3),
            Err(Error::NotAnOddPrime(2))
        ));
        assert!(matches!(
            FieldCtx::build(9, 1),
            Err(Error::NotAnOddPrime(9))
        ));
        assert!(matches!(
            FieldCtx::build(3, 12),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn small_prime_fields() {
        let f5 = FieldCtx::build(5, 1).unwrap();
        assert_eq!(f5.generator(), 2); // smallest primitive root of 5
        assert_eq!(f5.dlog(4).unwrap(), 2); // 2^2 = 4
        assert_eq!(f5.dlog(3).unwrap(), 3); // 2^3 = 8 = 3
        assert_eq!(f5.dlog(1).unwrap(), 0);
        assert!(f5.dlog(0).is_err());

        let f13 = FieldCtx::build(13, 1).unwrap();
        assert_eq!(f13.generator(), 2);
        assert_eq!(f13.trace(7), 7); // r = 1: identity
    }

    #[test]
    fn f9_canonical_modulus_and_generator() {
        let f9 = FieldCtx::build(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]); // t^2 + 1
                                              // t has order 4 only; the canonical generator is 1 + t (index 4)
        assert_eq!(f9.generator(), 4);
        assert_eq!(f9.coords(4), vec![1, 1]);
        // trace(t) = t + t^3 = 0
        let t = 3; // coords (0,1)
        assert_eq!(f9.trace(t), 0);
        assert_eq!(f9.trace(0), 0);
    }

    #[test]
    fn dlog_roundtrip_exhaustive() {
        for (p, r) in [(5u32, 1u32), (3, 2), (13, 1), (3, 4), (7, 2)] {
            let f = FieldCtx::build(p, r).unwrap();
            for m in 0..f.m() {
                let x = f.g_pow(m as i64);
                assert_eq!(f.dlog(x).unwrap(), m);
            }
            for x in 1..f.q() {
                assert_eq!(f.g_pow(f.dlog(x).unwrap() as i64), x);
            }
        }
    }

    #[test]
    fn trace_is_linear() {
        for (p, r) in [(5u32, 1u32), (3, 2), (3, 4), (7, 2), (11, 1)] {
            let f = FieldCtx::build(p, r).unwrap();
            for a in 0..f.q() {
                for b in 0..f.q() {
                    let lhs = f.trace(f.add(a, b));
                    let rhs = (f.trace(a) + f.trace(b)) % p;
                    assert_eq!(lhs, rhs);
                }
                for c in 0..p {
                    let lhs = f.trace(f.mul(c, a));
                    let rhs = (c as u64 * f.trace(a) as u64 % p as u64) as u32;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn sqrt_elem_contract() {
        let f13 = FieldCtx::build(13, 1).unwrap();
        assert_eq!(f13.sqrt_elem(4), Some(2)); // canonical (other root is 11)
        assert_eq!(f13.sqrt_elem(2), None); // 2 is a non-residue mod 13
        assert_eq!(f13.sqrt_elem(0), Some(0));
        for (p, r) in [(13u32, 1u32), (3, 2), (7, 2)] {
            let f = FieldCtx::build(p, r).unwrap();
            for x in 0..f.q() {
                match f.sqrt_elem(x) {
                    Some(s) => {
                        assert_eq!(f.mul(s, s), x);
                        if x != 0 {
                            assert_eq!(f.dlog(x).unwrap() % 2, 0);
                            // canonical tie-break: the smaller exponent of the two roots
                            assert!(f.dlog(s).unwrap() < f.m() / 2);
                        }
                    }
                    None => assert_eq!(f.dlog(x).unwrap() % 2, 1),
                }
            }
        }
    }

    #[test]
    fn field_arithmetic_basics() {
        let f = FieldCtx::build(7, 2).unwrap();
        for x in 1..f.q() {
            assert_eq!(f.mul(x, f.inv(x)), 1);
            assert_eq!(f.add(x, f.neg(x)), 0);
            assert_eq!(f.one_minus(x), f.sub(1, x));
        }
        assert_eq!(f.from_int(-8), (7 - 1) as u32);
        assert_eq!(f.pow(f.from_int(2), 2), f.from_int(4));
    }
}
