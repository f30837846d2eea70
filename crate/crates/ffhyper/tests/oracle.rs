//! Definition-level oracle checks.
//!
//! Everything here is computed straight from the defining sums, using only
//! the field's discrete log and the backend's root tables: no Gauss-sum
//! cache, no binomial table, no shared helpers with the production
//! evaluators. The production paths must match the oracle exactly.

use std::sync::Arc;

use ffhyper::char_sums::SumTable;
use ffhyper::identity::runner::factor_prime_power;
use ffhyper::series;
use ffhyper::value::Backend;
use ffhyper::{CharIndex, CycValue, Elem, FieldCtx};

struct Oracle {
    ctx: Arc<FieldCtx>,
    b: Backend,
}

impl Oracle {
    fn new(q: u32, seed: u64) -> Oracle {
        let (p, r) = factor_prime_power(q).unwrap();
        let ctx = Arc::new(FieldCtx::build(p, r).unwrap());
        let b = Backend::modular(p as u64, ctx.m() as u64, seed).unwrap();
        Oracle { ctx, b }
    }

    fn complex(q: u32) -> Oracle {
        let (p, r) = factor_prime_power(q).unwrap();
        let ctx = Arc::new(FieldCtx::build(p, r).unwrap());
        let b = Backend::complex(p as u64, ctx.m() as u64).unwrap();
        Oracle { ctx, b }
    }

    fn table(&self) -> SumTable {
        SumTable::new(Arc::clone(&self.ctx), self.b.clone())
    }

    fn chi(&self, k: u32, x: Elem) -> CycValue {
        if x == 0 {
            return self.b.zero();
        }
        let m = self.ctx.m() as u64;
        let d = self.ctx.dlog(x).unwrap() as u64;
        self.b.root_m((k as u64 * d % m) as i64)
    }

    fn theta(&self, x: Elem) -> CycValue {
        self.b.root_p(self.ctx.trace(x) as i64)
    }

    fn gauss(&self, k: u32) -> CycValue {
        let mut total = self.b.zero();
        for x in 0..self.ctx.q() {
            total = total + self.chi(k, x) * self.theta(x);
        }
        total
    }

    fn jacobi(&self, a: u32, c: u32) -> CycValue {
        let mut total = self.b.zero();
        for x in 0..self.ctx.q() {
            total = total + self.chi(a, x) * self.chi(c, self.ctx.sub(1, x));
        }
        total
    }

    fn binom(&self, a: u32, c: u32) -> CycValue {
        let m = self.ctx.m();
        let sign = if c % 2 == 1 { -1 } else { 1 };
        self.b.ratio(sign, self.ctx.q() as i64) * self.jacobi(a, (m - c % m) % m)
    }

    fn greene(&self, uppers: &[u32], lowers: &[u32], x: Elem) -> CycValue {
        let m = self.ctx.m();
        let q = self.ctx.q() as i64;
        let mut total = self.b.zero();
        for s in 0..m {
            let mut term = self.binom((uppers[0] + s) % m, s);
            for (a, c) in uppers[1..].iter().zip(lowers) {
                term = term * self.binom((a + s) % m, (c + s) % m);
            }
            total = total + term * self.chi(s, x);
        }
        total * self.b.ratio(q, q - 1)
    }

    fn mccarthy(&self, uppers: &[u32], lowers: &[u32], x: Elem) -> CycValue {
        let m = self.ctx.m();
        let q = self.ctx.q() as i64;
        let minus_one = self.ctx.neg(1);
        let mut total = self.b.zero();
        for s in 0..m {
            let mut term = self.gauss((m - s) % m);
            for &a in uppers {
                term = term * self.gauss((a + s) % m) * self.gauss(a).inv();
            }
            for &c in lowers {
                term = term * self.gauss((m - (c + s) % m) % m) * self.gauss((m - c % m) % m).inv();
            }
            let sign_pow = uppers.len() as u32;
            let mut sign = self.b.one();
            for _ in 0..sign_pow {
                sign = sign * self.chi(s, minus_one);
            }
            total = total + term * sign * self.chi(s, x);
        }
        total * self.b.ratio(1, q - 1)
    }

    fn appell(&self, a: u32, c: u32, d: u32, dp: u32, x: Elem, y: Elem) -> CycValue {
        let m = self.ctx.m();
        let q = self.ctx.q() as i64;
        let denom =
            (self.gauss(a) * self.gauss(c) * self.gauss((m - d) % m) * self.gauss((m - dp) % m))
                .inv();
        let mut total = self.b.zero();
        for s in 0..m {
            for u in 0..m {
                let su = (s + u) % m;
                total = total
                    + self.gauss((a + su) % m)
                        * self.gauss((c + su) % m)
                        * self.gauss((m - (d + s) % m) % m)
                        * self.gauss((m - (dp + u) % m) % m)
                        * self.gauss((m - u) % m)
                        * self.gauss((m - s) % m)
                        * self.chi(s, x)
                        * self.chi(u, y);
            }
        }
        total * denom * self.b.ratio(1, (q - 1) * (q - 1))
    }
}

#[test]
fn gauss_and_jacobi_match_oracle() {
    for q in [5u32, 9, 13] {
        let o = Oracle::new(q, 31);
        let t = o.table();
        let b = t.backend();
        for k in 0..t.m() {
            assert!(b.eq(t.g(t.chr(k as i64)), o.gauss(k)));
        }
        for a in 0..t.m() {
            for c in 0..t.m() {
                let (ac, cc) = (t.chr(a as i64), t.chr(c as i64));
                assert!(b.eq(t.jacobi(ac, cc), o.jacobi(a, c)));
                assert!(b.eq(t.binom(ac, cc), o.binom(a, c)));
            }
        }
    }
}

#[test]
fn greene_series_matches_oracle() {
    for q in [5u32, 9, 13] {
        let o = Oracle::new(q, 32);
        let t = o.table();
        let b = t.backend();
        let m = t.m();
        for x in 0..q {
            for (ups, los) in [
                (vec![1u32, 7 % m], vec![6 % m]),
                (vec![2, 5 % m, 9 % m], vec![3, 11 % m]),
                (vec![0, 1], vec![0]),
            ] {
                let prod = {
                    let u: Vec<CharIndex> = ups.iter().map(|&k| t.chr(k as i64)).collect();
                    let l: Vec<CharIndex> = los.iter().map(|&k| t.chr(k as i64)).collect();
                    series::greene(&t, &u, &l, x).unwrap()
                };
                assert!(b.eq(prod, o.greene(&ups, &los, x)), "q={q} x={x}");
            }
        }
    }
}

#[test]
fn mccarthy_series_matches_oracle() {
    for q in [5u32, 9, 13] {
        let o = Oracle::new(q, 33);
        let t = o.table();
        let b = t.backend();
        let m = t.m();
        for x in 0..q {
            for (ups, los) in [
                (vec![1u32, 2 % m], vec![5 % m]),
                (vec![3 % m, 1, 2], vec![0, 4 % m]),
            ] {
                let u: Vec<CharIndex> = ups.iter().map(|&k| t.chr(k as i64)).collect();
                let l: Vec<CharIndex> = los.iter().map(|&k| t.chr(k as i64)).collect();
                let prod = series::mccarthy(&t, &u, &l, x).unwrap();
                assert!(b.eq(prod, o.mccarthy(&ups, &los, x)), "q={q} x={x}");
            }
        }
    }
}

#[test]
fn appell_matches_oracle() {
    for q in [5u32, 9] {
        let o = Oracle::new(q, 34);
        let t = o.table();
        let b = t.backend();
        for (x, y) in [(1u32, 1u32), (2, 3), (4, 2), (0, 3)] {
            let prod = series::appell_f4(&t, t.chr(1), t.chr(2), t.chr(3), t.chr(1), x, y);
            assert!(b.eq(prod, o.appell(1, 2, 3, 1, x, y)), "q={q} x={x} y={y}");
        }
    }
}

#[test]
fn fuselier_matches_scaled_definition() {
    // 2P1 = q^2/(q-1) BC(-1) sum (A chi|chi)(B chi|C chi) chi(x) + delta(x) J(B, conj(B) C)
    for q in [5u32, 13] {
        let o = Oracle::new(q, 35);
        let t = o.table();
        let b = t.backend();
        let m = t.m();
        let (a, c, d) = (1u32, 2u32, 5 % m);
        for x in 0..q {
            let mut total = b.zero();
            for s in 0..m {
                total = total
                    + o.binom((a + s) % m, s) * o.binom((c + s) % m, (d + s) % m) * o.chi(s, x);
            }
            let qq = q as i64;
            let sign = if (c + d) % 2 == 1 { -1 } else { 1 };
            let jterm = o.jacobi(c, (d + m - c) % m);
            let mut expect = total * b.ratio(qq * qq * sign, qq - 1);
            if x == 0 {
                expect = expect + jterm;
            }
            let prod = series::fuselier_p(&t, t.chr(a as i64), t.chr(c as i64), t.chr(d as i64), x)
                .unwrap();
            assert!(b.eq(prod, expect), "q={q} x={x}");
            let f = series::fuselier_f(&t, t.chr(a as i64), t.chr(c as i64), t.chr(d as i64), x)
                .unwrap();
            assert!(b.eq(f, expect * jterm.inv()));
        }
    }
}

#[test]
fn frozen_values() {
    // g(eps) = -1 on every field; g(phi) = sqrt(5) at q = 5 (principal roots)
    let o = Oracle::complex(5);
    let b = &o.b;
    assert!(b.eq(o.gauss(0), b.int(-1)));
    let sqrt5 = b.ratio(2_236_067_977, 1_000_000_000);
    assert!(b.values_equal(o.gauss(2), sqrt5, 1e-8).unwrap());

    // J(eps, eps) = q - 2, J(phi, phi) = -1 at q = 5
    assert!(b.eq(o.jacobi(0, 0), b.int(3)));
    assert!(b.eq(o.jacobi(2, 2), b.int(-1)));

    // (phi|eps) = -1/5, (eps|eps) = 3/5
    assert!(b.eq(o.binom(2, 0), b.ratio(-1, 5)));
    assert!(b.eq(o.binom(0, 0), b.ratio(3, 5)));

    // the CLI example series: 2F1(T, T^7; T^6 | 3) at q = 13, oracle value
    // frozen to nine digits
    let o13 = Oracle::complex(13);
    let v = o13.greene(&[1, 7], &[6], 3);
    let re = o13.b.ratio(-479_388_524, 1_000_000_000);
    let im = o13.b.ratio(-30_917_215, 1_000_000_000);
    let i = o13.b.root_of_unity(4, 1).unwrap();
    let frozen = re + im * i;
    assert!(o13.b.values_equal(v, frozen, 1e-6).unwrap());

    // Lemma: g(T^k) g(T^-k) = q T^k(-1) for k != 0 (oracle route)
    for k in 1..12u32 {
        let sign = if k % 2 == 1 { -1i64 } else { 1 };
        assert!(o13
            .b
            .values_equal(o13.gauss(k) * o13.gauss(12 - k), o13.b.int(13 * sign), 1e-9)
            .unwrap());
    }
}
