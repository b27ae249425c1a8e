use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::rat::{lcm_denominators, Rat};
use super::residue::ResidueSet;
use crate::error::PolyError;

/// Largest modulus `integrality_residues` will enumerate.
pub const MAX_RESIDUE_MODULUS: u64 = 1 << 24;

/// Univariate polynomial with exact rational coefficients, lowest degree first.
///
/// The coefficient vector never carries trailing zeros, so the zero polynomial
/// is the empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "PolyRepr", into = "PolyRepr")]
pub struct Poly {
    coeffs: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    coeffs: Vec<Rat>,
}

impl From<PolyRepr> for Poly {
    fn from(r: PolyRepr) -> Self {
        Poly::new(r.coeffs)
    }
}

impl From<Poly> for PolyRepr {
    fn from(p: Poly) -> Self {
        PolyRepr { coeffs: p.coeffs }
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// The indeterminate `T`.
    pub fn t() -> Self {
        Poly::monomial(Rat::one(), 1)
    }

    pub fn monomial(c: Rat, degree: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    /// `a*T + b`.
    pub fn linear(a: Rat, b: Rat) -> Self {
        Poly::new(vec![b, a])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    /// Coefficient of `T^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `T -> p(a*T + b)`, by Horner's scheme.
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> Poly {
        let lin = Poly::linear(a.clone(), b.clone());
        self.compose(&lin)
    }

    /// `T -> p(q(T))`.
    pub fn compose(&self, q: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * q) + &Poly::constant(c.clone()))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    let idx = top - dd + i;
                    rem[idx] = &rem[idx] - &(&c * d);
                }
            }
            quot[top - dd] = c;
            rem.pop();
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor; zero when both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.recip().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        lcm_denominators(&self.coeffs)
    }

    /// The polynomial `(scale*T + shift)(scale*T + shift - 1)...(scale*T + shift - n + 1) / n!`.
    pub fn binomial(n: u32, scale: &Rat, shift: &Rat) -> Poly {
        let mut acc = Poly::one();
        for i in 0..n {
            let factor = Poly::linear(scale.clone(), shift - Rat::from_int(i as i64));
            acc = &acc * &factor;
        }
        let fact: BigInt = (1..=n).map(BigInt::from).product();
        acc.scale(&Rat::new(1, fact))
    }

    /// The shift `s` with `p(-T-s) = (-1)^n p(T)`, if one exists.
    ///
    /// The top two coefficients pin `s = 2*a_{n-1}/(n*a_n)`; the full identity
    /// is then checked coefficientwise.
    pub fn symmetry_shift(&self) -> Option<Rat> {
        let n = self.degree()?;
        if n == 0 {
            return None;
        }
        let s = Rat::from_int(2) * self.coeff(n - 1) / (Rat::from_int(n as i64) * self.leading());
        let reflected = self.compose_affine(&-Rat::one(), &-&s);
        let expected = if n % 2 == 0 { self.clone() } else { -self };
        (reflected == expected).then_some(s)
    }

    /// Residues `q mod M` (with `M` the lcm of the coefficient denominators)
    /// for which `p(q)` is an integer.
    ///
    /// Integrality of `p(q)` only depends on `q mod M`: every difference
    /// `a_i((q+M)^i - q^i)` is integral.
    pub fn integrality_residues(&self) -> Result<ResidueSet, PolyError> {
        let m = self.denominator_lcm();
        let modulus = m
            .to_u64()
            .filter(|&m| m <= MAX_RESIDUE_MODULUS)
            .ok_or_else(|| PolyError::ModulusTooLarge(m.to_string()))?;
        // p(q) in Z  <=>  (M*p)(q) == 0 mod M, with M*p integral.
        let scaled: Vec<u128> = self
            .coeffs
            .iter()
            .map(|c| {
                let v = (c.numer() * (&m / c.denom())).mod_floor(&m);
                v.to_u128().expect("reduced below modulus")
            })
            .collect();
        let m128 = modulus as u128;
        let allowed = (0..modulus).filter(|&q| {
            let q = q as u128;
            let v = scaled.iter().rev().fold(0u128, |acc, &c| (acc * q + c) % m128);
            v == 0
        });
        Ok(ResidueSet::new(modulus, allowed))
    }

    /// Whether every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(Rat::is_integer)
    }

    /// `p(-T)`.
    pub fn reflect(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn leading_sign(&self) -> i32 {
        self.leading().signum()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let body = match i {
                0 => mag.to_string(),
                _ => {
                    let var = if i == 1 { "T".to_string() } else { format!("T^{i}") };
                    if mag.is_one() {
                        var
                    } else {
                        format!("{mag}*{var}")
                    }
                }
            };
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<'a, 'b> Add<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'b Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a, 'b> Sub<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'b Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a, 'b> Mul<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'b Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn binom_t_half_plus_4_choose_3() -> Poly {
        Poly::binomial(3, &r(1, 2), &r(4, 1))
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Poly::zero().eval(&r(5, 1)), Rat::zero());
        assert_eq!(Poly::from_ints(&[3, 4, 1]).eval(&Rat::zero()), r(3, 1));
        assert_eq!(binom_t_half_plus_4_choose_3().eval(&Rat::zero()), r(4, 1));
    }

    #[test]
    fn compose_affine_examples() {
        let sq = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(sq.compose_affine(&Rat::one(), &Rat::zero()), sq);
        let q1 = Poly::from_ints(&[2, 1]);
        assert_eq!(
            q1.compose_affine(&r(-1, 1), &r(-4, 1)),
            Poly::from_ints(&[-2, -1])
        );
        // binom(T/2+4, 3) at 3T: (1/48)(3T+8)(3T+6)(3T+4)
        let q = binom_t_half_plus_4_choose_3().compose_affine(&r(3, 1), &Rat::zero());
        let expected = Poly::from_ints(&[8, 3])
            .mul(Poly::from_ints(&[6, 3]))
            .mul(Poly::from_ints(&[4, 3]))
            .scale(&r(1, 48));
        assert_eq!(q, expected);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(Poly::binomial(1, &Rat::one(), &Rat::zero()), Poly::t());
        let expected = Poly::from_ints(&[8, 1])
            .mul(Poly::from_ints(&[6, 1]))
            .mul(Poly::from_ints(&[4, 1]))
            .scale(&r(1, 48));
        assert_eq!(binom_t_half_plus_4_choose_3(), expected);
        assert_eq!(
            Poly::binomial(2, &r(1, 2), &r(3, 1)),
            Poly::from_ints(&[24, 10, 1]).scale(&r(1, 8))
        );
    }

    #[test]
    fn symmetry_shift_examples() {
        assert_eq!(Poly::from_ints(&[0, 0, 1]).symmetry_shift(), Some(Rat::zero()));
        assert_eq!(binom_t_half_plus_4_choose_3().symmetry_shift(), Some(r(12, 1)));
        assert_eq!(Poly::from_ints(&[1, 1, 0, 1]).symmetry_shift(), None);
        assert_eq!(Poly::from_ints(&[5]).symmetry_shift(), None);
        assert_eq!(Poly::zero().symmetry_shift(), None);
    }

    #[test]
    fn integrality_residue_examples() {
        let rs = Poly::from_ints(&[3, -2, 7]).integrality_residues().unwrap();
        assert_eq!(rs.modulus(), 1);
        assert_eq!(rs.allowed().collect::<Vec<_>>(), vec![0]);
        let half = Poly::linear(r(1, 2), Rat::zero());
        let rs = half.integrality_residues().unwrap();
        assert_eq!(rs.modulus(), 2);
        assert_eq!(rs.allowed().collect::<Vec<_>>(), vec![0]);
        let tiny = Poly::monomial(Rat::new(1, BigInt::from(10u64).pow(12)), 1);
        assert!(matches!(
            tiny.integrality_residues(),
            Err(PolyError::ModulusTooLarge(_))
        ));
    }

    #[test]
    fn div_rem_and_gcd() {
        let a = Poly::from_ints(&[1, 1]).mul(Poly::from_ints(&[3, 1]));
        let b = Poly::from_ints(&[1, 1]).mul(Poly::from_ints(&[-2, 1]));
        assert_eq!(a.gcd(&b), Poly::from_ints(&[1, 1]));
        let (q, rem) = a.div_rem(&Poly::from_ints(&[1, 1]));
        assert_eq!(q, Poly::from_ints(&[3, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn display_and_json() {
        let p = Poly::new(vec![r(4, 1), r(13, 6), r(1, 8), r(1, 48)]);
        assert_eq!(p.to_string(), "1/48*T^3 + 1/8*T^2 + 13/6*T + 4");
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"{"coeffs":["4","13/6","1/8","1/48"]}"#);
        let back: Poly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&Poly::zero()).unwrap(), r#"{"coeffs":[]}"#);
        assert_eq!((-Poly::t()).to_string(), "-T");
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-50i64..50, 1i64..12).prop_map(|(n, d)| Rat::new(n, d))
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(arb_rat(), 0..6).prop_map(Poly::new)
    }

    proptest! {
        #[test]
        fn eval_is_multiplicative(p in arb_poly(), q in arb_poly(), x in arb_rat()) {
            prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        }

        #[test]
        fn degree_is_additive(p in arb_poly(), q in arb_poly()) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            prop_assert_eq!((&p * &q).degree().unwrap(), p.degree().unwrap() + q.degree().unwrap());
        }

        #[test]
        fn json_round_trip_is_bit_exact(p in arb_poly()) {
            let js = serde_json::to_string(&p).unwrap();
            let back: Poly = serde_json::from_str(&js).unwrap();
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), js);
            prop_assert_eq!(back, p);
        }

        #[test]
        fn symmetry_shift_implies_reflection(
            roots in prop::collection::vec(-20i64..20, 1..5),
            s in -10i64..10,
            even in any::<bool>(),
            c in arb_rat(),
        ) {
            prop_assume!(!c.is_zero());
            // Build a polynomial symmetric about -s/2 from paired roots.
            let s = Rat::from_int(s);
            let mut p = Poly::constant(c);
            for &root in &roots {
                let a = Rat::from_int(root);
                let pair = Poly::linear(Rat::one(), a.clone())
                    .mul(Poly::linear(Rat::one(), &s - &a));
                p = &p * &pair;
            }
            if !even {
                p = &p * &Poly::linear(Rat::from_int(2), s.clone());
            }
            let shift = p.symmetry_shift();
            prop_assert_eq!(shift.clone(), Some(s.clone()));
            let n = p.degree().unwrap();
            let reflected = p.compose_affine(&-Rat::one(), &-&s);
            let sign = if n % 2 == 0 { Rat::one() } else { -Rat::one() };
            prop_assert_eq!(reflected, p.scale(&sign));
        }

        #[test]
        fn integrality_residues_sound_and_complete(
            coeffs in prop::collection::vec((-30i64..30, 1i64..20), 1..5),
            qs in prop::collection::vec(-100_000i64..100_000, 1000),
        ) {
            let p = Poly::new(coeffs.into_iter().map(|(n, d)| Rat::new(n, d)).collect());
            let rs = p.integrality_residues().unwrap();
            for q in qs {
                let direct = p.eval(&Rat::from_int(q)).is_integer();
                prop_assert_eq!(rs.contains(q), direct, "q = {}", q);
            }
        }
    }
}
