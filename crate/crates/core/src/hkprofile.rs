//! Invariants `(c_X, n_X, m_X, A_X)` read off a Riemann-Roch polynomial, the
//! polynomials of the two known families, and the denominator and real-root
//! checks built on them.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cnconst::{cn_value, DEFAULT_MAX_BOUND, DEFAULT_STABILITY};
use crate::error::{CnError, ProfileError};
use crate::exactpoly::roots::count_real_roots_with_multiplicity;
use crate::exactpoly::{Poly, Rat};

/// Betti data tied to the value of `A_X` when `n = 2`.
/// Reference only; nothing here consumes it.
pub mod betti_reference {
    /// `b_2 = 23`, `b_3 = 0` goes with `A_X = 25/32`.
    pub const MAX_B2: u32 = 23;
    pub const A_X_AT_MAX_B2: (i64, i64) = (25, 32);
    /// Otherwise `b_2 <= 8` and `5/6 <= A_X <= 131/144`.
    pub const SMALL_B2_BOUND: u32 = 8;
    pub const A_X_RANGE_SMALL_B2: ((i64, i64), (i64, i64)) = ((5, 6), (131, 144));
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Split,
    Product,
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "split" | "split-type" => Ok(Family::Split),
            "product" | "product-type" => Ok(Family::Product),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HKProfile {
    pub n: u32,
    pub p_rr: Poly,
    pub q_rr: Poly,
    pub c_x: Rat,
    pub n_x: Rat,
    pub m_x: Rat,
    pub a_x: Rat,
    pub n_x_integral: bool,
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

fn double_factorial_odd(n: u32) -> BigInt {
    // (2n-1)!!
    (1..=n as u64).map(|i| BigInt::from(2 * i - 1)).product()
}

/// Split type: `binom(T/2 + 1 + n, n)`. Product type: `(n+1) binom(T/2 + n, n)`.
pub fn known_family_prr(kind: Family, n: u32) -> Poly {
    assert!(n >= 1, "known families need n >= 1");
    let half = Rat::new(1, 2);
    match kind {
        Family::Split => Poly::binomial(n, &half, &Rat::from_int(n as i64 + 1)),
        Family::Product => Poly::binomial(n, &half, &Rat::from_int(n as i64))
            .scale(&Rat::from_int(n as i64 + 1)),
    }
}

pub fn profile_from_prr(n: u32, p: &Poly) -> Result<HKProfile, ProfileError> {
    let deg = p.degree();
    if n == 0 || deg != Some(n as usize) {
        return Err(ProfileError::BadDegree {
            expected: n,
            found: deg,
        });
    }
    let nn = n as usize;
    let lead = p.leading();
    if !lead.is_positive() {
        return Err(ProfileError::NonPositiveLeading(lead.to_string()));
    }
    let constant = p.coeff(0);
    if constant != Rat::from_int(n as i64 + 1) {
        return Err(ProfileError::BadConstantTerm {
            expected: n + 1,
            found: constant.to_string(),
        });
    }
    let n_x = p.coeff(nn - 1) / (Rat::from_int(n as i64) * &lead);
    if p.symmetry_shift() != Some(Rat::from_int(2) * &n_x) {
        return Err(ProfileError::NoSymmetry);
    }
    if n_x.is_zero() {
        return Err(ProfileError::ZeroShift);
    }
    let fact2n = Rat::from_int(factorial(2 * n));
    let c_x = &fact2n * &lead;
    let m_x = &n_x / Rat::from_int(2);
    let a_x = &c_x * m_x.pow(n) / &fact2n;
    if n > 1 && !(a_x.is_positive() && a_x < Rat::one()) {
        return Err(ProfileError::AOutOfRange(a_x.to_string()));
    }
    let q_rr = p.compose_affine(&m_x, &Rat::zero());
    Ok(HKProfile {
        n,
        p_rr: p.clone(),
        q_rr,
        n_x_integral: n_x.is_integer(),
        c_x,
        n_x,
        m_x,
        a_x,
    })
}

/// `c/720 (T+s)^3 + (4/s - c s^2/720)(T+s)`.
pub fn isotropic_prr(c_x: &Rat, n_x: &Rat) -> Result<Poly, ProfileError> {
    let inv = n_x.recip().ok_or(ProfileError::ZeroShift)?;
    let shifted = Poly::linear(Rat::one(), n_x.clone());
    let k = c_x / Rat::from_int(720);
    let linear = Rat::from_int(4) * inv - &k * n_x.pow(2);
    Ok(&shifted.pow(3).scale(&k) + &shifted.scale(&linear))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenominatorReport {
    pub n: u32,
    pub even_form: bool,
    #[serde(with = "crate::cnconst::bigint_string")]
    pub c_n: BigInt,
    /// `a_i 2^i C_n` (even form) or `a_i C_n` integral for every `i`.
    pub coefficients_ok: bool,
    /// `c_X` lies in `(2n)!/(2^n C_n) Z`.
    pub fujiki_ok: bool,
}

impl DenominatorReport {
    pub fn holds(&self) -> bool {
        self.coefficients_ok && self.fujiki_ok
    }
}

pub fn denominator_check(n: u32, p: &Poly, even_form: bool) -> Result<DenominatorReport, CnError> {
    let c_n = cn_value(n, DEFAULT_STABILITY, DEFAULT_MAX_BOUND)?.value;
    Ok(denominator_check_with(n, p, even_form, &c_n))
}

pub fn denominator_check_with(n: u32, p: &Poly, even_form: bool, c_n: &BigInt) -> DenominatorReport {
    let cn = Rat::from_int(c_n.clone());
    let coefficients_ok = (0..=n as usize).all(|i| {
        let scale = if even_form {
            Rat::from_int(BigInt::from(2).pow(i as u32))
        } else {
            Rat::one()
        };
        (p.coeff(i) * scale * &cn).is_integer()
    });
    let c_x = p.coeff(n as usize) * Rat::from_int(factorial(2 * n));
    let step = Rat::from_int(factorial(2 * n)) / (Rat::from_int(BigInt::from(2).pow(n)) * &cn);
    DenominatorReport {
        n,
        even_form,
        c_n: c_n.clone(),
        coefficients_ok,
        fujiki_ok: c_x.is_multiple_of(&step),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenValuesReport {
    pub n: u32,
    /// `p(2t)` integral for `t = 1..=2L`, `L` the lcm of the denominators.
    pub even_values_integral: bool,
    /// `a_n` lies in `1/(n! 2^n) Z`.
    pub leading_ok: bool,
    /// `c_X` lies in `(2n-1)!! Z`.
    pub fujiki_ok: bool,
}

impl EvenValuesReport {
    pub fn holds(&self) -> bool {
        self.even_values_integral && self.leading_ok && self.fujiki_ok
    }
}

/// Integer values on even integers force `a_n in 1/(n! 2^n) Z`, hence
/// `c_X in (2n-1)!! Z`.
pub fn even_values_check(n: u32, p: &Poly) -> EvenValuesReport {
    let l = p.denominator_lcm();
    let mut t = BigInt::one();
    let limit = &l * 2u32;
    let mut even_values_integral = true;
    while t <= limit {
        if !p.eval(&Rat::from_int(&t * 2u32)).is_integer() {
            even_values_integral = false;
            break;
        }
        t += 1u32;
    }
    let a_n = p.coeff(n as usize);
    let leading_ok =
        (&a_n * Rat::from_int(factorial(n) * BigInt::from(2).pow(n))).is_integer();
    let c_x = &a_n * Rat::from_int(factorial(2 * n));
    let fujiki_ok = c_x.is_multiple_of(&Rat::from_int(double_factorial_odd(n)));
    EvenValuesReport {
        n,
        even_values_integral,
        leading_ok,
        fujiki_ok,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootVerdict {
    pub n: u32,
    /// Closed-form discriminant for `n = 2, 3`.
    pub discriminant: Option<Rat>,
    pub real_roots_with_multiplicity: usize,
    pub all_real: bool,
}

/// Decide whether `Q_RR` has only real roots.
///
/// For `n = 2` and `n = 3` the shape `A(T^2+4T) + 3` resp.
/// `(T+2)(A(T^2+4T) + 2)` is verified exactly and the sign of the quadratic
/// discriminant decides. Otherwise roots are counted by Sturm sequences.
pub fn real_root_classifier(profile: &HKProfile) -> Result<RootVerdict, ProfileError> {
    classify_q_rr(profile.n, &profile.a_x, &profile.q_rr)
}

pub fn classify_q_rr(n: u32, a_x: &Rat, q: &Poly) -> Result<RootVerdict, ProfileError> {
    let quad = Poly::new(vec![Rat::zero(), Rat::from_int(4), Rat::one()]).scale(a_x);
    let (expected, discriminant) = match n {
        2 => (
            &quad + &Poly::constant(Rat::from_int(3)),
            Some(Rat::from_int(4) * a_x * (Rat::from_int(4) * a_x - Rat::from_int(3))),
        ),
        3 => (
            &Poly::from_ints(&[2, 1]) * &(&quad + &Poly::constant(Rat::from_int(2))),
            Some(Rat::from_int(8) * a_x * (Rat::from_int(2) * a_x - Rat::one())),
        ),
        _ => (q.clone(), None),
    };
    if &expected != q {
        return Err(ProfileError::FactorizationFailed((q - &expected).to_string()));
    }
    let count = count_real_roots_with_multiplicity(q);
    let all_real = match &discriminant {
        Some(d) => !d.is_negative(),
        None => count == n as usize,
    };
    Ok(RootVerdict {
        n,
        discriminant,
        real_roots_with_multiplicity: count,
        all_real,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn family_examples() {
        let split3 = known_family_prr(Family::Split, 3);
        let expected = (&(&Poly::from_ints(&[8, 1]) * &Poly::from_ints(&[6, 1]))
            * &Poly::from_ints(&[4, 1]))
            .scale(&r(1, 48));
        assert_eq!(split3, expected);
        let prod2 = known_family_prr(Family::Product, 2);
        let expected = (&Poly::from_ints(&[2, 1]) * &Poly::from_ints(&[4, 1])).scale(&r(3, 8));
        assert_eq!(prod2, expected);
        assert_eq!(
            known_family_prr(Family::Split, 1),
            Poly::new(vec![r(2, 1), r(1, 2)])
        );
    }

    #[test]
    fn profile_examples() {
        let p = profile_from_prr(3, &known_family_prr(Family::Split, 3)).unwrap();
        assert_eq!((p.c_x.clone(), p.n_x.clone(), p.m_x.clone()), (r(15, 1), r(6, 1), r(3, 1)));
        assert_eq!(p.a_x, r(9, 16));
        assert!(p.n_x_integral);
        let p = profile_from_prr(2, &known_family_prr(Family::Product, 2)).unwrap();
        assert_eq!((p.c_x, p.n_x, p.a_x), (r(9, 1), r(3, 1), r(27, 32)));
        let p = profile_from_prr(2, &known_family_prr(Family::Split, 2)).unwrap();
        assert_eq!((p.c_x, p.n_x, p.a_x), (r(3, 1), r(5, 1), r(25, 32)));
        let p = profile_from_prr(1, &known_family_prr(Family::Split, 1)).unwrap();
        assert_eq!(p.a_x, Rat::one());
    }

    #[test]
    fn q_rr_is_p_rr_rescaled() {
        let p = profile_from_prr(3, &known_family_prr(Family::Split, 3)).unwrap();
        assert_eq!(p.q_rr.leading(), p.a_x);
        assert_eq!(p.q_rr.symmetry_shift(), Some(r(4, 1)));
        assert_eq!(p.q_rr.eval(&Rat::one()), p.p_rr.eval(&p.m_x));
    }

    #[test]
    fn profile_errors() {
        let good = known_family_prr(Family::Split, 3);
        assert!(matches!(
            profile_from_prr(2, &good),
            Err(ProfileError::BadDegree { .. })
        ));
        let bad_const = &good + &Poly::one();
        assert!(matches!(
            profile_from_prr(3, &bad_const),
            Err(ProfileError::BadConstantTerm { .. })
        ));
        let asym = &good + &Poly::monomial(r(1, 100), 1);
        assert_eq!(profile_from_prr(3, &asym), Err(ProfileError::NoSymmetry));
        let neg = Poly::from_ints(&[4, 0, 0, -1]);
        assert!(matches!(
            profile_from_prr(3, &neg),
            Err(ProfileError::NonPositiveLeading(_))
        ));
        // c_X = 720 and n_X = 6 give A_X = 27.
        let big = isotropic_prr(&r(720, 1), &r(6, 1)).unwrap();
        assert!(matches!(
            profile_from_prr(3, &big),
            Err(ProfileError::AOutOfRange(_))
        ));
    }

    #[test]
    fn isotropic_prr_examples() {
        assert_eq!(
            isotropic_prr(&r(15, 1), &r(6, 1)).unwrap(),
            known_family_prr(Family::Split, 3)
        );
        assert_eq!(
            isotropic_prr(&r(15, 1), &r(2, 1)).unwrap(),
            Poly::new(vec![r(4, 1), r(13, 6), r(1, 8), r(1, 48)])
        );
        assert_eq!(
            isotropic_prr(&r(30, 1), &r(4, 1)).unwrap(),
            Poly::new(vec![r(4, 1), r(7, 3), r(1, 2), r(1, 24)])
        );
        assert_eq!(isotropic_prr(&r(15, 1), &Rat::zero()), Err(ProfileError::ZeroShift));
    }

    #[test]
    fn isotropic_prr_round_trip() {
        for (c, s) in [(15, 6), (15, 2), (30, 4), (30, 1), (45, 3)] {
            let p = isotropic_prr(&r(c, 1), &r(s, 1)).unwrap();
            let prof = profile_from_prr(3, &p);
            if let Ok(prof) = prof {
                assert_eq!((prof.c_x, prof.n_x), (r(c, 1), r(s, 1)));
            }
        }
        let p = isotropic_prr(&r(15, 1), &r(2, 1)).unwrap();
        let prof = profile_from_prr(3, &p).unwrap();
        assert_eq!((prof.c_x, prof.n_x), (r(15, 1), r(2, 1)));
    }

    #[test]
    fn denominator_examples() {
        let c3 = BigInt::from(4320);
        let split3 = known_family_prr(Family::Split, 3);
        assert!(denominator_check_with(3, &split3, true, &c3).holds());
        let tiny = Poly::new(vec![r(4, 1), Rat::zero(), Rat::zero(), r(1, 1_000_000)]);
        assert!(!denominator_check_with(3, &tiny, true, &c3).coefficients_ok);
        let c2 = BigInt::from(12);
        // n = 2: a_2 = c_X/24 with c_X = 1/2 passes, c_X = 1/3 does not
        let half = Poly::new(vec![r(3, 1), Rat::zero(), r(1, 48)]);
        assert!(denominator_check_with(2, &half, true, &c2).fujiki_ok);
        let third = Poly::new(vec![r(3, 1), Rat::zero(), r(1, 72)]);
        assert!(!denominator_check_with(2, &third, true, &c2).fujiki_ok);
    }

    #[test]
    fn even_value_examples() {
        assert!(even_values_check(3, &known_family_prr(Family::Split, 3)).holds());
        assert!(even_values_check(2, &known_family_prr(Family::Product, 2)).holds());
        let fifth = Poly::new(vec![r(3, 1), Rat::zero(), r(1, 5)]);
        let rep = even_values_check(2, &fifth);
        assert!(!rep.even_values_integral && !rep.holds());
    }

    #[test]
    fn classifier_examples() {
        let p = profile_from_prr(2, &known_family_prr(Family::Split, 2)).unwrap();
        let v = real_root_classifier(&p).unwrap();
        assert_eq!(v.discriminant, Some(r(25, 64)));
        assert!(v.all_real);
        let p = profile_from_prr(3, &known_family_prr(Family::Split, 3)).unwrap();
        let v = real_root_classifier(&p).unwrap();
        assert_eq!(v.discriminant, Some(r(9, 16)));
        assert!(v.all_real && v.real_roots_with_multiplicity == 3);
        // A_X = 1/2: (T+2)^3 / 2, double root of the quadratic factor
        let q = Poly::from_ints(&[2, 1]).pow(3).scale(&r(1, 2));
        let v = classify_q_rr(3, &r(1, 2), &q).unwrap();
        assert_eq!(v.discriminant, Some(Rat::zero()));
        assert!(v.all_real);
        // A_X = 1/4: complex pair
        let q = &Poly::from_ints(&[2, 1])
            * &(&Poly::new(vec![Rat::zero(), Rat::one(), r(1, 4)]) + &Poly::constant(r(2, 1)));
        let v = classify_q_rr(3, &r(1, 4), &q).unwrap();
        assert!(!v.all_real && v.real_roots_with_multiplicity == 1);
        assert!(matches!(
            classify_q_rr(3, &r(1, 3), &q),
            Err(ProfileError::FactorizationFailed(_))
        ));
    }

    #[test]
    fn higher_n_uses_sturm_count() {
        for n in 4..=8 {
            let p = profile_from_prr(n, &known_family_prr(Family::Split, n)).unwrap();
            let v = real_root_classifier(&p).unwrap();
            assert!(v.all_real, "n = {n}");
            assert_eq!(v.discriminant, None);
        }
    }

    #[test]
    fn families_up_to_ten() {
        for n in 1..=10u32 {
            let split = profile_from_prr(n, &known_family_prr(Family::Split, n)).unwrap();
            assert_eq!(split.c_x, Rat::from_int(double_factorial_odd(n)));
            assert_eq!(split.n_x, Rat::from_int(n as i64 + 3));
            let prod = profile_from_prr(n, &known_family_prr(Family::Product, n)).unwrap();
            assert!(prod.c_x.is_positive());
            if n > 1 {
                assert!(split.a_x < Rat::one() && prod.a_x < Rat::one());
            }
        }
    }
}
