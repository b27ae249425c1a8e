//! The monic polynomials `Q_k(T) = sum_{j=0}^k binom(k+j+1, 2j+1) T^j` and
//! decompositions of reflection-symmetric polynomials over them.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{DecompositionError, RootError};
use crate::exactpoly::roots::{isolate_real_roots, refine_root};
use crate::exactpoly::{Poly, Rat};

/// Agreement required between isolated roots and `-4 sin^2(j pi / (2(k+1)))`.
pub const ROOT_TOLERANCE: f64 = 1e-9;

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

pub fn qk_poly(k: u32) -> Poly {
    let k = k as u64;
    Poly::new(
        (0..=k)
            .map(|j| Rat::from_int(binomial(k + j + 1, 2 * j + 1)))
            .collect(),
    )
}

type IntPoly = Vec<BigInt>;

fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_pow(a: &IntPoly, e: u64) -> IntPoly {
    (0..e).fold(vec![BigInt::one()], |acc, _| int_mul(&acc, a))
}

/// Checks `T^k Q_k(T + 1/T - 2) = sum_{j=0}^k T^{2j}` over the integers.
///
/// With `T + 1/T - 2 = (T-1)^2 / T`, the left side is
/// `sum_j binom(k+j+1, 2j+1) (T-1)^{2j} T^{k-j}`.
pub fn qk_laurent_check(k: u32) -> bool {
    let k = k as u64;
    let t_minus_one_sq: IntPoly = vec![BigInt::one(), BigInt::from(-2), BigInt::one()];
    let mut lhs = vec![BigInt::zero(); 2 * k as usize + 1];
    for j in 0..=k {
        let c = binomial(k + j + 1, 2 * j + 1);
        let term = int_pow(&t_minus_one_sq, j);
        let shift = (k - j) as usize;
        for (i, a) in term.iter().enumerate() {
            lhs[i + shift] += &c * a;
        }
    }
    lhs.iter()
        .enumerate()
        .all(|(i, c)| *c == if i % 2 == 0 { BigInt::one() } else { BigInt::zero() })
}

/// The `k` real roots of `Q_k`, ascending, isolated by Sturm sequences and
/// bisection, then checked against the closed form.
pub fn qk_roots(k: u32) -> Result<Vec<f64>, RootError> {
    if k == 0 {
        return Err(RootError::DegreeZero);
    }
    let q = qk_poly(k);
    let tol = Rat::new(1, 1_000_000_000_000i64);
    let roots: Vec<f64> = isolate_real_roots(&q)
        .iter()
        .map(|iv| refine_root(&q, iv, &tol).midpoint().to_f64())
        .collect();
    if roots.len() != k as usize {
        return Err(RootError::RootCount {
            expected: k as usize,
            found: roots.len(),
        });
    }
    let mut expected = qk_closed_form_roots(k);
    expected.sort_by(f64::total_cmp);
    for (index, (&found, &exp)) in roots.iter().zip(&expected).enumerate() {
        if (found - exp).abs() > ROOT_TOLERANCE {
            return Err(RootError::Deviation {
                index,
                found,
                expected: exp,
            });
        }
    }
    Ok(roots)
}

/// `-4 sin^2(j pi / (2(k+1)))` for `j = 1..=k`.
pub fn qk_closed_form_roots(k: u32) -> Vec<f64> {
    (1..=k)
        .map(|j| {
            let s = (j as f64 * std::f64::consts::PI / (2.0 * (k as f64 + 1.0))).sin();
            -4.0 * s * s
        })
        .collect()
}

/// Peel leading coefficients against `basis(d)` for `d = n, n-2, ...`.
fn descending_elimination<F>(p: &Poly, basis: F) -> Result<Vec<Rat>, DecompositionError>
where
    F: Fn(usize) -> Poly,
{
    let n = p.degree().ok_or(DecompositionError::ZeroPolynomial)?;
    let mut residual = p.clone();
    let mut out = Vec::with_capacity(n / 2 + 1);
    for i in 0..=n / 2 {
        let d = n - 2 * i;
        let b = basis(d);
        let c = residual.coeff(d) / b.leading();
        residual = &residual - &b.scale(&c);
        out.push(c);
    }
    if residual.is_zero() {
        Ok(out)
    } else {
        Err(DecompositionError::NotInSpan {
            residual: residual.to_string(),
        })
    }
}

/// Coefficients `b_0..b_{n/2}` with `p = sum_i b_i Q_{n-2i}`.
pub fn decompose_qk(p: &Poly) -> Result<Vec<Rat>, DecompositionError> {
    descending_elimination(p, |d| qk_poly(d as u32))
}

/// Coefficients `c_0..c_{n/2}` with `p = sum_j c_j (T+s)^{n-2j}`.
pub fn decompose_shifted(p: &Poly, s: &Rat) -> Result<Vec<Rat>, DecompositionError> {
    let base = Poly::linear(Rat::one(), s.clone());
    descending_elimination(p, |d| base.pow(d as u32))
}

/// `sum_i b_i Q_{n-2i}`.
pub fn recompose_qk(n: u32, b: &[Rat]) -> Poly {
    b.iter().enumerate().fold(Poly::zero(), |acc, (i, bi)| {
        &acc + &qk_poly(n - 2 * i as u32).scale(bi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn qk_examples() {
        assert_eq!(qk_poly(0), Poly::one());
        assert_eq!(qk_poly(1), Poly::from_ints(&[2, 1]));
        assert_eq!(qk_poly(2), Poly::from_ints(&[3, 4, 1]));
        for k in 1..=12u32 {
            let q = qk_poly(k);
            assert_eq!(q.leading(), Rat::one());
            assert_eq!(q.coeff(k as usize - 1), Rat::from_int(2 * k as i64));
            assert_eq!(q.coeff(0), Rat::from_int(k as i64 + 1));
        }
    }

    #[test]
    fn qk_reflection_symmetry() {
        for k in 0..=50u32 {
            let q = qk_poly(k);
            let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
            assert_eq!(q.compose_affine(&-Rat::one(), &r(-4, 1)), q.scale(&sign));
        }
    }

    #[test]
    fn laurent_identity() {
        assert!(qk_laurent_check(0));
        assert!(qk_laurent_check(1));
        assert!(qk_laurent_check(25));
        for k in 0..=50 {
            assert!(qk_laurent_check(k), "k = {k}");
        }
    }

    #[test]
    fn root_examples() {
        assert_eq!(qk_roots(0), Err(RootError::DegreeZero));
        let r1 = qk_roots(1).unwrap();
        assert!((r1[0] + 2.0).abs() < 1e-9);
        let r2 = qk_roots(2).unwrap();
        assert!((r2[0] + 3.0).abs() < 1e-9 && (r2[1] + 1.0).abs() < 1e-9);
        let r3 = qk_roots(3).unwrap();
        assert_eq!(r3.len(), 3);
        assert!((r3[1] + 2.0).abs() < 1e-9);
    }

    #[test]
    fn decompose_examples() {
        let p = &qk_poly(3) + &qk_poly(1);
        assert_eq!(decompose_qk(&p).unwrap(), vec![Rat::one(), Rat::one()]);
        let k3_2 = Poly::new(vec![r(3, 1), r(25, 8), r(25, 32)]);
        assert_eq!(decompose_qk(&k3_2).unwrap(), vec![r(25, 32), r(21, 32)]);
        let bad = Poly::from_ints(&[0, 1, 0, 1]);
        assert!(matches!(
            decompose_qk(&bad),
            Err(DecompositionError::NotInSpan { .. })
        ));
        assert_eq!(decompose_qk(&Poly::zero()), Err(DecompositionError::ZeroPolynomial));
    }

    #[test]
    fn decompose_shifted_examples() {
        let base = Poly::from_ints(&[5, 1]);
        let p = &base.pow(3) + &base.scale(&r(7, 1));
        assert_eq!(
            decompose_shifted(&p, &r(5, 1)).unwrap(),
            vec![Rat::one(), r(7, 1)]
        );
        assert!(decompose_shifted(&Poly::from_ints(&[0, 0, 0, 1]), &Rat::one()).is_err());
    }

    /// Oracle for the shifted basis: substitute `T = U - s` and read the
    /// coefficients of `U^{n-2j}` directly.
    fn shifted_by_substitution(p: &Poly, s: &Rat) -> Option<Vec<Rat>> {
        let n = p.degree()?;
        let u = p.compose_affine(&Rat::one(), &-s);
        let odd_offsets_vanish = (0..=n).filter(|d| (n - d) % 2 == 1).all(|d| u.coeff(d).is_zero());
        odd_offsets_vanish.then(|| (0..=n / 2).map(|j| u.coeff(n - 2 * j)).collect())
    }

    #[test]
    fn decompose_shifted_split_type_cubic() {
        let p = Poly::binomial(3, &r(1, 2), &r(4, 1));
        let s = r(6, 1);
        let by_elimination = decompose_shifted(&p, &s).unwrap();
        assert_eq!(Some(by_elimination.clone()), shifted_by_substitution(&p, &s));
        // closed form of the linear coefficient for a symmetric cubic with
        // constant term 4: 4/n_X - c_X n_X^2 / 720, c_X = 15
        let closed = r(4, 1) / &s - r(15, 720) * s.pow(2);
        assert_eq!(by_elimination, vec![r(1, 48), closed]);
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (0i64..40, 1i64..10).prop_map(|(n, d)| Rat::new(n, d))
    }

    proptest! {
        #[test]
        fn qk_round_trip(n in 1u32..12, bs in prop::collection::vec(arb_rat(), 7)) {
            let b: Vec<Rat> = bs.into_iter().take(n as usize / 2 + 1).collect();
            prop_assume!(!b[0].is_zero());
            let p = recompose_qk(n, &b);
            prop_assert_eq!(decompose_qk(&p).unwrap(), b);
        }

        #[test]
        fn every_symmetric_polynomial_decomposes(
            n in 1u32..10,
            cs in prop::collection::vec((-30i64..30, 1i64..9), 6),
        ) {
            // Symmetric about -2 means a combination of (T+2)^{n-2j}.
            let base = Poly::from_ints(&[2, 1]);
            let cs: Vec<Rat> = cs.into_iter().map(|(a, b)| Rat::new(a, b)).collect();
            let mut p = base.pow(n).scale(&Rat::one());
            for j in 1..=(n as usize / 2) {
                p = &p + &base.pow(n - 2 * j as u32).scale(&cs[j - 1]);
            }
            prop_assert!(p.symmetry_shift() == Some(Rat::from_int(4)));
            let b = decompose_qk(&p).unwrap();
            prop_assert_eq!(b.len(), n as usize / 2 + 1);
            prop_assert_eq!(recompose_qk(n, &b), p);
        }
    }
}
