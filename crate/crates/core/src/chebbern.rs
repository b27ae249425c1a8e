//! Chebyshev polynomials of the first kind, the substituted polynomials
//! `P_k(T) = T_{2k}(sqrt(T/4 + 1))`, and exact Bernoulli numbers.

use std::sync::{Mutex, OnceLock};

use crate::exactpoly::{Poly, Rat};

/// `T_m` via `T_0 = 1`, `T_1 = Y`, `T_m = 2Y T_{m-1} - T_{m-2}`.
pub fn chebyshev_t(m: u32) -> Poly {
    let two_y = Poly::monomial(Rat::from_int(2), 1);
    let (mut prev, mut cur) = (Poly::one(), Poly::t());
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let next = &(&two_y * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_k(T) = R_k(T/4 + 1)` where `T_{2k}(Y) = R_k(Y^2)`.
///
/// `T_{2k}` is even, so `R_k` is read off the even-indexed coefficients.
pub fn pk_poly(k: u32) -> Poly {
    let t2k = chebyshev_t(2 * k);
    let even: Vec<Rat> = t2k.coeffs().iter().step_by(2).cloned().collect();
    debug_assert!(t2k.coeffs().iter().skip(1).step_by(2).all(Rat::is_zero));
    Poly::new(even).compose_affine(&Rat::new(1, 4), &Rat::one())
}

fn bernoulli_cache() -> &'static Mutex<Vec<Rat>> {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Akiyama-Tanigawa: returns `B_0..=B_m` with the `B_1 = +1/2` convention.
fn akiyama_tanigawa(m: usize) -> Vec<Rat> {
    let mut row: Vec<Rat> = Vec::with_capacity(m + 1);
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..=m {
        row.push(Rat::new(1, i as i64 + 1));
        for j in (1..=i).rev() {
            row[j - 1] = Rat::from_int(j as i64) * (&row[j - 1] - &row[j]);
        }
        out.push(row[0].clone());
    }
    out
}

/// Exact Bernoulli number `B_m` for even `m >= 2`. Panics otherwise.
///
/// Values are memoized; each index is written once.
pub fn bernoulli(m: u32) -> Rat {
    assert!(m >= 2 && m % 2 == 0, "bernoulli expects an even index >= 2");
    let m = m as usize;
    let mut cache = bernoulli_cache().lock().expect("bernoulli cache poisoned");
    if cache.len() <= m {
        let fresh = akiyama_tanigawa(m);
        let start = cache.len();
        cache.extend_from_slice(&fresh[start..]);
    }
    cache[m].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn binom(n: u64, k: u64) -> BigInt {
        (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
    }

    /// Oracle: `sum_{j=0}^{m} binom(m+1, j) B_j = 0` with `B_1 = -1/2`.
    fn bernoulli_by_recurrence(m: usize) -> Vec<Rat> {
        let mut b = vec![Rat::one()];
        for k in 1..=m {
            let s: Rat = (0..k)
                .map(|j| Rat::from_int(binom(k as u64 + 1, j as u64)) * &b[j])
                .sum();
            b.push(-s / Rat::from_int(k as i64 + 1));
        }
        b
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_t(0), Poly::one());
        assert_eq!(chebyshev_t(1), Poly::t());
        assert_eq!(chebyshev_t(2), Poly::from_ints(&[-1, 0, 2]));
        assert_eq!(chebyshev_t(4), Poly::from_ints(&[1, 0, -8, 0, 8]));
    }

    #[test]
    fn chebyshev_defining_identity_at_rational_cosines() {
        // (theta, cos theta) with cos(m theta) rational for every m.
        let cases: [(f64, Rat); 4] = [
            (0.0, Rat::one()),
            (std::f64::consts::FRAC_PI_3, Rat::new(1, 2)),
            (std::f64::consts::FRAC_PI_2, Rat::zero()),
            (std::f64::consts::PI, -Rat::one()),
        ];
        for m in 0..=24u32 {
            let tm = chebyshev_t(m);
            for (theta, c) in &cases {
                // cos(m theta) for these angles is one of 0, +-1/2, +-1
                let expected_f = (m as f64 * theta).cos();
                let expected = [
                    Rat::zero(),
                    Rat::new(1, 2),
                    Rat::new(-1, 2),
                    Rat::one(),
                    -Rat::one(),
                ]
                .into_iter()
                .find(|r| (r.to_f64() - expected_f).abs() < 1e-9)
                .unwrap();
                assert_eq!(tm.eval(c), expected, "m = {m}, cos = {c}");
            }
        }
    }

    #[test]
    fn pk_examples() {
        assert_eq!(pk_poly(0), Poly::one());
        assert_eq!(pk_poly(1), Poly::new(vec![Rat::one(), Rat::new(1, 2)]));
        assert_eq!(
            pk_poly(2),
            Poly::new(vec![Rat::one(), Rat::from_int(2), Rat::new(1, 2)])
        );
    }

    #[test]
    fn pk_is_odd_under_reflection() {
        for k in 0..=30u32 {
            let p = pk_poly(k);
            let reflected = p.compose_affine(&-Rat::one(), &Rat::from_int(-4));
            let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
            assert_eq!(reflected, p.scale(&sign), "k = {k}");
        }
    }

    #[test]
    fn pk_degree_and_leading() {
        for k in 1..=30u32 {
            let p = pk_poly(k);
            assert_eq!(p.degree(), Some(k as usize));
            assert_eq!(p.leading(), Rat::new(1, 2));
        }
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(2), Rat::new(1, 6));
        assert_eq!(bernoulli(4), Rat::new(-1, 30));
        assert_eq!(bernoulli(8), Rat::new(-1, 30));
        assert_eq!(bernoulli(12), Rat::new(-691, 2730));
    }

    #[test]
    fn bernoulli_matches_recurrence_oracle() {
        let oracle = bernoulli_by_recurrence(40);
        for m in (2..=40u32).step_by(2) {
            assert_eq!(bernoulli(m), oracle[m as usize], "B_{m}");
        }
    }

    #[test]
    fn bernoulli_concurrent_calls_agree() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || bernoulli(2 * (i % 4 + 1) + 20)))
            .collect();
        for (i, h) in handles.into_iter().enumerate() {
            let m = 2 * (i as u32 % 4 + 1) + 20;
            assert_eq!(h.join().unwrap(), bernoulli(m));
        }
    }
}
