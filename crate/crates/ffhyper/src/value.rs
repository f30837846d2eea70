//! Cyclotomic value domain: complex-float and modular-embedding backends.
//!
//! Every character sum in this crate takes values in Q(zeta_{p(q-1)}). Two
//! realizations are provided:
//!
//! * complex floats, where zeta_n is the principal n-th root of unity;
//! * residues modulo an auxiliary prime l = 1 (mod p(q-1)), where
//!   zeta_{p(q-1)} is mapped to an element of that exact multiplicative
//!   order mod l.
//!
//! An identity that holds in Q(zeta_{p(q-1)}) maps to a residue identity mod
//! every such l, so a mismatch mod any single l disproves it. The modular
//! backend gives exact yes/no answers and is authoritative for pass/fail;
//! the complex backend cross-checks within a relative tolerance.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;

use crate::error::{Error, Result};

/// Default relative tolerance of the complex backend.
pub const DEFAULT_COMPLEX_TOL: f64 = 1e-7;

/// Hard stop for the auxiliary-prime search, as log2 of the bound.
const PRIME_SEARCH_BOUND_LOG2: u32 = 44;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    Complex,
    Modular,
}

/// One element of the value domain. Values are only meaningful relative to
/// the backend that produced them; arithmetic panics on a backend mismatch
/// (that is always a programming error, not bad input).
#[derive(Debug, Clone, Copy)]
pub struct CycValue(Repr);

#[derive(Debug, Clone, Copy)]
enum Repr {
    Complex(Complex64),
    Modular { residue: u64, modulus: u64 },
}

/// The arithmetic backend for one (p, q-1) pair. Immutable after
/// construction and cheap to clone; safe to share across scan workers.
#[derive(Debug, Clone)]
pub struct Backend {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    p: u64,
    m: u64,
    kind: Kind,
}

#[derive(Debug)]
enum Kind {
    Complex {
        tol: f64,
        zeta_p: Vec<Complex64>,
        zeta_m: Vec<Complex64>,
    },
    Modular {
        l: u64,
        seed: u64,
        /// Element of exact order p*m mod l; zeta_p = zeta^m, zeta_m = zeta^p.
        #[allow(dead_code)]
        zeta: u64,
        inv_m_mod_p: u64,
        inv_p_mod_m: u64,
        zeta_p: Vec<u64>,
        zeta_m: Vec<u64>,
    },
}

impl Backend {
    /// Complex backend with the default tolerance.
    pub fn complex(p: u64, m: u64) -> Result<Backend> {
        Backend::complex_with_tol(p, m, DEFAULT_COMPLEX_TOL)
    }

    pub fn complex_with_tol(p: u64, m: u64, tol: f64) -> Result<Backend> {
        check_pm(p, m)?;
        let zeta_p = (0..p)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / p as f64))
            .collect();
        let zeta_m = (0..m)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / m as f64))
            .collect();
        Ok(Backend {
            inner: Arc::new(Inner {
                p,
                m,
                kind: Kind::Complex {
                    tol,
                    zeta_p,
                    zeta_m,
                },
            }),
        })
    }

    /// Modular backend: picks l = 1 (mod p*m) as the smallest prime above a
    /// seed-derived offset in [2^31, 2^40], then a residue of exact order
    /// p*m. Deterministic for a fixed seed.
    pub fn modular(p: u64, m: u64, seed: u64) -> Result<Backend> {
        check_pm(p, m)?;
        let pm = p * m;
        let mut rng = Pcg64::seed_from_u64(seed);
        let offset = rng.random_range((1u64 << 31)..(1u64 << 40));
        // First candidate = 1 (mod pm) at or above both the offset and pm+1.
        let base = offset.max(pm + 1);
        let mut l = ((base - 2) / pm + 1) * pm + 1;
        loop {
            if l >= 1u64 << PRIME_SEARCH_BOUND_LOG2 {
                return Err(Error::PrimeSearchExhausted {
                    modulus: pm,
                    bound_log2: PRIME_SEARCH_BOUND_LOG2,
                });
            }
            if is_prime_u64(l) {
                break;
            }
            l += pm;
        }
        let cofactor = (l - 1) / pm;
        let factors = prime_factors(pm);
        let zeta = loop {
            let x = rng.random_range(2..l - 1);
            let z = powmod(x, cofactor, l);
            if z != 1 && factors.iter().all(|&s| powmod(z, pm / s, l) != 1) {
                break z;
            }
        };
        let zp = powmod(zeta, m, l);
        let zm = powmod(zeta, p, l);
        let mut zeta_p = Vec::with_capacity(p as usize);
        let mut acc = 1u64;
        for _ in 0..p {
            zeta_p.push(acc);
            acc = mulmod(acc, zp, l);
        }
        debug_assert_eq!(acc, 1);
        let mut zeta_m = Vec::with_capacity(m as usize);
        acc = 1;
        for _ in 0..m {
            zeta_m.push(acc);
            acc = mulmod(acc, zm, l);
        }
        debug_assert_eq!(acc, 1);
        Ok(Backend {
            inner: Arc::new(Inner {
                p,
                m,
                kind: Kind::Modular {
                    l,
                    seed,
                    zeta,
                    inv_m_mod_p: modinv(m % p, p),
                    inv_p_mod_m: modinv(p % m, m),
                    zeta_p,
                    zeta_m,
                },
            }),
        })
    }

    pub fn kind(&self) -> BackendKind {
        match self.inner.kind {
            Kind::Complex { .. } => BackendKind::Complex,
            Kind::Modular { .. } => BackendKind::Modular,
        }
    }

    /// Stable label used in reports: `complex` or `modular:l=<prime>`.
    pub fn label(&self) -> String {
        match &self.inner.kind {
            Kind::Complex { .. } => "complex".to_string(),
            Kind::Modular { l, .. } => format!("modular:l={l}"),
        }
    }

    /// The auxiliary prime of a modular backend.
    pub fn aux_prime(&self) -> Option<u64> {
        match &self.inner.kind {
            Kind::Complex { .. } => None,
            Kind::Modular { l, .. } => Some(*l),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match &self.inner.kind {
            Kind::Complex { .. } => None,
            Kind::Modular { seed, .. } => Some(*seed),
        }
    }

    pub fn tolerance(&self) -> f64 {
        match &self.inner.kind {
            Kind::Complex { tol, .. } => *tol,
            Kind::Modular { .. } => 0.0,
        }
    }

    pub fn zero(&self) -> CycValue {
        self.int(0)
    }

    pub fn one(&self) -> CycValue {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> CycValue {
        match &self.inner.kind {
            Kind::Complex { .. } => CycValue(Repr::Complex(Complex64::new(n as f64, 0.0))),
            Kind::Modular { l, .. } => CycValue(Repr::Modular {
                residue: reduce_i64(n, *l),
                modulus: *l,
            }),
        }
    }

    /// Exact rational scalar; the denominators arising in the identities are
    /// products of q-powers and small integers, all invertible mod l.
    pub fn ratio(&self, num: i64, den: i64) -> CycValue {
        assert!(den != 0, "rational scalar with zero denominator");
        match &self.inner.kind {
            Kind::Complex { .. } => {
                CycValue(Repr::Complex(Complex64::new(num as f64 / den as f64, 0.0)))
            }
            Kind::Modular { l, .. } => {
                let d = reduce_i64(den, *l);
                assert!(d != 0, "denominator {den} vanishes mod {l}");
                CycValue(Repr::Modular {
                    residue: mulmod(reduce_i64(num, *l), modinv(d, *l), *l),
                    modulus: *l,
                })
            }
        }
    }

    /// 1 or 0 as a domain value.
    pub fn indicator(&self, cond: bool) -> CycValue {
        self.int(cond as i64)
    }

    /// zeta_{q-1}^e, the root backing multiplicative characters.
    #[inline]
    pub fn root_m(&self, e: i64) -> CycValue {
        let idx = e.rem_euclid(self.inner.m as i64) as usize;
        match &self.inner.kind {
            Kind::Complex { zeta_m, .. } => CycValue(Repr::Complex(zeta_m[idx])),
            Kind::Modular { l, zeta_m, .. } => CycValue(Repr::Modular {
                residue: zeta_m[idx],
                modulus: *l,
            }),
        }
    }

    /// zeta_p^e, the root backing the additive character.
    #[inline]
    pub fn root_p(&self, e: i64) -> CycValue {
        let idx = e.rem_euclid(self.inner.p as i64) as usize;
        match &self.inner.kind {
            Kind::Complex { zeta_p, .. } => CycValue(Repr::Complex(zeta_p[idx])),
            Kind::Modular { l, zeta_p, .. } => CycValue(Repr::Modular {
                residue: zeta_p[idx],
                modulus: *l,
            }),
        }
    }

    /// zeta_n^k for any n dividing p*(q-1). Multiplicatively consistent in k,
    /// and consistent with `root_p` / `root_m` at n = p and n = q-1.
    pub fn root_of_unity(&self, n: u64, k: i64) -> Result<CycValue> {
        let pm = self.inner.p * self.inner.m;
        if n == 0 || pm % n != 0 {
            return Err(Error::RootOrder { n, pm });
        }
        let kk = k.rem_euclid(n as i64) as u64;
        match &self.inner.kind {
            Kind::Complex { .. } => Ok(CycValue(Repr::Complex(Complex64::from_polar(
                1.0,
                TAU * kk as f64 / n as f64,
            )))),
            Kind::Modular {
                l,
                inv_m_mod_p,
                inv_p_mod_m,
                zeta_p,
                zeta_m,
                ..
            } => {
                // zeta^e with e = (pm/n)*k, decomposed as zeta_p^a * zeta_m^b.
                let e = ((pm / n) as u128 * kk as u128 % pm as u128) as u64;
                let (p, m) = (self.inner.p, self.inner.m);
                let a = mulmod(e % p, *inv_m_mod_p, p);
                let b = mulmod(e % m, *inv_p_mod_m, m);
                Ok(CycValue(Repr::Modular {
                    residue: mulmod(zeta_p[a as usize], zeta_m[b as usize], *l),
                    modulus: *l,
                }))
            }
        }
    }

    /// Spec'd comparison: exact residues for modular, relative tolerance for
    /// complex. Errors on values from a different backend.
    pub fn values_equal(&self, a: CycValue, c: CycValue, tol: f64) -> Result<bool> {
        match (&self.inner.kind, a.0, c.0) {
            (Kind::Complex { .. }, Repr::Complex(x), Repr::Complex(y)) => {
                let scale = 1.0f64.max(x.norm()).max(y.norm());
                Ok((x - y).norm() <= tol * scale)
            }
            (
                Kind::Modular { l, .. },
                Repr::Modular {
                    residue: x,
                    modulus: lx,
                },
                Repr::Modular {
                    residue: y,
                    modulus: ly,
                },
            ) => {
                if lx != *l || ly != *l {
                    return Err(Error::BackendMismatch);
                }
                Ok(x == y)
            }
            _ => Err(Error::BackendMismatch),
        }
    }

    /// Equality under the backend's own tolerance; panics on mixed backends.
    pub fn eq(&self, a: CycValue, c: CycValue) -> bool {
        self.values_equal(a, c, self.tolerance())
            .expect("compared values from different backends")
    }

    pub fn is_zero(&self, a: CycValue) -> bool {
        self.eq(a, self.zero())
    }

    /// Magnitude of a - c for residual tracking: |a - c| on the complex
    /// backend; 0.0 or 1.0 (equal / different) on the modular one.
    pub fn diff_magnitude(&self, a: CycValue, c: CycValue) -> f64 {
        match (a.0, c.0) {
            (Repr::Complex(x), Repr::Complex(y)) => (x - y).norm(),
            (Repr::Modular { residue: x, .. }, Repr::Modular { residue: y, .. }) => {
                if x == y {
                    0.0
                } else {
                    1.0
                }
            }
            _ => panic!("compared values from different backends"),
        }
    }

    /// Human/machine readable residual of a - c.
    pub fn diff_string(&self, a: CycValue, c: CycValue) -> String {
        match (a.0, c.0) {
            (Repr::Complex(x), Repr::Complex(y)) => format!("{:.3e}", (x - y).norm()),
            (Repr::Modular { .. }, Repr::Modular { .. }) => {
                let d = a - c;
                match d.0 {
                    Repr::Modular { residue, .. } => format!("{residue}"),
                    _ => unreachable!(),
                }
            }
            _ => panic!("compared values from different backends"),
        }
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn m(&self) -> u64 {
        self.inner.m
    }
}

/// Spec-shaped constructor covering both kinds.
pub fn make_backend(kind: BackendKind, p: u64, m: u64, seed: u64) -> Result<Backend> {
    match kind {
        BackendKind::Complex => Backend::complex(p, m),
        BackendKind::Modular => Backend::modular(p, m, seed),
    }
}

fn check_pm(p: u64, m: u64) -> Result<()> {
    if p < 2 || !is_prime_u64(p) {
        return Err(Error::NotAnOddPrime(p));
    }
    if m == 0 || gcd(p, m) != 1 {
        return Err(Error::NotCoprime { p, m });
    }
    Ok(())
}

impl CycValue {
    pub fn inv(self) -> CycValue {
        self.try_inv().expect("inverse of a zero value")
    }

    pub fn try_inv(self) -> Result<CycValue> {
        match self.0 {
            Repr::Complex(x) => {
                if x.norm() == 0.0 {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(CycValue(Repr::Complex(x.inv())))
                }
            }
            Repr::Modular { residue, modulus } => {
                if residue == 0 {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(CycValue(Repr::Modular {
                        residue: modinv(residue, modulus),
                        modulus,
                    }))
                }
            }
        }
    }

    /// Exactly zero: the literal residue 0, or a complex 0.0 (not a
    /// tolerance check; use `Backend::is_zero` for that).
    pub fn is_exact_zero(self) -> bool {
        match self.0 {
            Repr::Complex(x) => x == Complex64::ZERO,
            Repr::Modular { residue, .. } => residue == 0,
        }
    }
}

impl fmt::Display for CycValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::Complex(x) => write!(f, "{:.9e}{:+.9e}i", x.re, x.im),
            Repr::Modular { residue, modulus } => write!(f, "{residue} mod {modulus}"),
        }
    }
}

macro_rules! same_modulus {
    ($la:expr, $lb:expr) => {
        assert_eq!($la, $lb, "mixed modular backends in arithmetic")
    };
}

impl Add for CycValue {
    type Output = CycValue;
    fn add(self, rhs: CycValue) -> CycValue {
        match (self.0, rhs.0) {
            (Repr::Complex(a), Repr::Complex(b)) => CycValue(Repr::Complex(a + b)),
            (
                Repr::Modular {
                    residue: a,
                    modulus: la,
                },
                Repr::Modular {
                    residue: b,
                    modulus: lb,
                },
            ) => {
                same_modulus!(la, lb);
                let mut s = a + b;
                if s >= la {
                    s -= la;
                }
                CycValue(Repr::Modular {
                    residue: s,
                    modulus: la,
                })
            }
            _ => panic!("mixed complex/modular arithmetic"),
        }
    }
}

impl Sub for CycValue {
    type Output = CycValue;
    fn sub(self, rhs: CycValue) -> CycValue {
        match (self.0, rhs.0) {
            (Repr::Complex(a), Repr::Complex(b)) => CycValue(Repr::Complex(a - b)),
            (
                Repr::Modular {
                    residue: a,
                    modulus: la,
                },
                Repr::Modular {
                    residue: b,
                    modulus: lb,
                },
            ) => {
                same_modulus!(la, lb);
                let s = if a >= b { a - b } else { a + la - b };
                CycValue(Repr::Modular {
                    residue: s,
                    modulus: la,
                })
            }
            _ => panic!("mixed complex/modular arithmetic"),
        }
    }
}

impl Mul for CycValue {
    type Output = CycValue;
    #[inline]
    fn mul(self, rhs: CycValue) -> CycValue {
        match (self.0, rhs.0) {
            (Repr::Complex(a), Repr::Complex(b)) => CycValue(Repr::Complex(a * b)),
            (
                Repr::Modular {
                    residue: a,
                    modulus: la,
                },
                Repr::Modular {
                    residue: b,
                    modulus: lb,
                },
            ) => {
                same_modulus!(la, lb);
                CycValue(Repr::Modular {
                    residue: mulmod(a, b, la),
                    modulus: la,
                })
            }
            _ => panic!("mixed complex/modular arithmetic"),
        }
    }
}

impl Div for CycValue {
    type Output = CycValue;
    fn div(self, rhs: CycValue) -> CycValue {
        self * rhs.inv()
    }
}

impl Neg for CycValue {
    type Output = CycValue;
    fn neg(self) -> CycValue {
        match self.0 {
            Repr::Complex(a) => CycValue(Repr::Complex(-a)),
            Repr::Modular { residue, modulus } => CycValue(Repr::Modular {
                residue: if residue == 0 { 0 } else { modulus - residue },
                modulus,
            }),
        }
    }
}

impl Mul<i64> for CycValue {
    type Output = CycValue;
    fn mul(self, rhs: i64) -> CycValue {
        match self.0 {
            Repr::Complex(a) => CycValue(Repr::Complex(a * rhs as f64)),
            Repr::Modular { residue, modulus } => CycValue(Repr::Modular {
                residue: mulmod(residue, reduce_i64(rhs, modulus), modulus),
                modulus,
            }),
        }
    }
}

fn reduce_i64(n: i64, l: u64) -> u64 {
    (n as i128).rem_euclid(l as i128) as u64
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, l: u64) -> u64 {
    (a as u128 * b as u128 % l as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, l: u64) -> u64 {
    let mut acc = 1u64;
    b %= l;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, l);
        }
        b = mulmod(b, b, l);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of a mod n for gcd(a, n) = 1, via extended Euclid.
pub(crate) fn modinv(a: u64, n: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    assert_eq!(old_r, 1, "modinv of non-unit");
    old_s.rem_euclid(n as i128) as u64
}

/// Deterministic Miller–Rabin, valid for all u64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == sp {
            return true;
        }
        if n % sp == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
