//! Real root isolation with exact sign evaluation.
//!
//! Roots are counted with Sturm sequences and refined by bisection between
//! rational endpoints; floats only appear in the final midpoints.

use super::poly::Poly;
use super::rat::Rat;

/// An isolating interval `(lo, hi]` holding exactly one distinct real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RootInterval {
    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_int(2)
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(-r);
    }
    chain
}

fn sign_changes(chain: &[Poly], x: &Rat) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|q| q.eval(x).signum())
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Cauchy bound: every real root lies in `(-B, B)`.
pub fn root_bound(p: &Poly) -> Rat {
    let lead = p.leading().abs();
    let max = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rat::zero);
    max + Rat::one()
}

/// Number of distinct real roots in `(a, b]`. Panics on the zero polynomial.
pub fn count_distinct_roots_in(p: &Poly, a: &Rat, b: &Rat) -> usize {
    assert!(!p.is_zero(), "root count of the zero polynomial");
    let chain = sturm_chain(p);
    sign_changes(&chain, a).saturating_sub(sign_changes(&chain, b))
}

/// Number of distinct real roots.
pub fn count_distinct_real_roots(p: &Poly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let b = root_bound(p);
    count_distinct_roots_in(p, &-&b, &b)
}

/// Number of real roots counted with multiplicity.
///
/// Uses the chain `p, gcd(p, p'), gcd(g, g'), ...`: the `i`-th member has as
/// distinct real roots exactly the real roots of multiplicity `> i`.
pub fn count_real_roots_with_multiplicity(p: &Poly) -> usize {
    let mut total = 0;
    let mut g = p.clone();
    while g.degree().unwrap_or(0) > 0 {
        total += count_distinct_real_roots(&g);
        g = g.gcd(&g.derivative());
    }
    total
}

/// Isolating intervals for every distinct real root, sorted ascending.
pub fn isolate_real_roots(p: &Poly) -> Vec<RootInterval> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let chain = sturm_chain(p);
    let b = root_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-&b, b.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let n = sign_changes(&chain, &lo).saturating_sub(sign_changes(&chain, &hi));
        match n {
            0 => {}
            1 => out.push(RootInterval { lo, hi }),
            _ => {
                let mid = split_point(p, &lo, &hi);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// A point strictly inside `(lo, hi)` that is not a root of `p`, so Sturm
/// counts stay valid on both halves.
fn split_point(p: &Poly, lo: &Rat, hi: &Rat) -> Rat {
    let width = hi - lo;
    (0..)
        .map(|k: i64| lo + &width * Rat::new(k + 1, 2 * k + 2 + (k % 2)))
        .find(|m| !p.eval(m).is_zero())
        .expect("a polynomial has finitely many roots")
}

/// Bisect an isolating interval of a squarefree part down to width `<= tol`.
pub fn refine_root(p: &Poly, interval: &RootInterval, tol: &Rat) -> RootInterval {
    let sq = squarefree_part(p);
    let RootInterval { mut lo, mut hi } = interval.clone();
    if sq.eval(&hi).is_zero() {
        return RootInterval { lo: hi.clone(), hi };
    }
    let hi_sign = sq.eval(&hi).signum();
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / Rat::from_int(2);
        let s = sq.eval(&mid).signum();
        if s == 0 {
            return RootInterval { lo: mid.clone(), hi: mid };
        }
        if s == hi_sign {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RootInterval { lo, hi }
}

/// `p / gcd(p, p')`, which has the same distinct roots with multiplicity one.
pub fn squarefree_part(p: &Poly) -> Poly {
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) == 0 {
        return p.clone();
    }
    p.div_rem(&g).0
}

/// Approximations of every distinct real root to within `tol`.
pub fn real_roots(p: &Poly, tol: &Rat) -> Vec<f64> {
    isolate_real_roots(p)
        .iter()
        .map(|iv| refine_root(p, iv, tol).midpoint().to_f64())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ops::Mul;

    #[test]
    fn counts_and_isolates() {
        // (T+1)(T+3)(T^2+1)
        let p = Poly::from_ints(&[1, 1])
            .mul(Poly::from_ints(&[3, 1]))
            .mul(Poly::from_ints(&[1, 0, 1]));
        assert_eq!(count_distinct_real_roots(&p), 2);
        let roots = real_roots(&p, &Rat::new(1, 1_000_000_000_000i64));
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 3.0).abs() < 1e-10);
        assert!((roots[1] + 1.0).abs() < 1e-10);
    }

    #[test]
    fn multiplicity_count() {
        // (T+2)^2 (T-1) (T^2+T+1)
        let p = Poly::from_ints(&[2, 1])
            .pow(2)
            .mul(Poly::from_ints(&[-1, 1]))
            .mul(Poly::from_ints(&[1, 1, 1]));
        assert_eq!(count_distinct_real_roots(&p), 2);
        assert_eq!(count_real_roots_with_multiplicity(&p), 3);
        let roots = real_roots(&p, &Rat::new(1, 1_000_000_000i64));
        assert!((roots[0] + 2.0).abs() < 1e-9);
        assert!((roots[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn irrational_root() {
        let p = Poly::from_ints(&[-2, 0, 1]);
        let roots = real_roots(&p, &Rat::new(1, 1_000_000_000_000i64));
        assert!((roots[1] - std::f64::consts::SQRT_2).abs() < 1e-11);
    }
}
