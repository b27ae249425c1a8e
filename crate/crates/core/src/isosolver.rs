//! Case analysis for a hyper-Kähler manifold carrying an isotropic class `l`
//! and a class `m` with `n! a = int l^n m^n`.
//!
//! The integer `q_lm` (the value of the bilinear form on `l, m`) is bounded by
//! divisibility against `C_n`, `c_X` is then fixed, `m_X` is bounded, and each
//! remaining value of `n_X` is run through a residue sieve on the values `q`
//! represented by the form: `P_RR(q)` must be an integer, squares of
//! represented values are represented, odd classes must survive an
//! exclusion argument on `Z l + Z m + Z alpha`, the gcd of represented values
//! is 1 or 2, and `q(m)` must satisfy the parity coupling with `n_X`.
//!
//! Only `n = 3` with `a` in `{1, 2}` runs the full elimination; other cases
//! stop after the constraint derivation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cnconst::{cn_value, DEFAULT_MAX_BOUND, DEFAULT_STABILITY};
use crate::error::SolverError;
use crate::exactpoly::{Poly, Rat, ResidueSet};
use crate::hkprofile::isotropic_prr;

/// Largest modulus on which the exclusion brute force runs.
const EXCLUSION_MAX_MODULUS: u64 = 64;

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

fn c_n(n: u32) -> Result<BigInt, SolverError> {
    Ok(cn_value(n, DEFAULT_STABILITY, DEFAULT_MAX_BOUND)?.value)
}

/// All `q > 0` with `n! q^n | a C_n` (even form) or `n! 2^n q^n | a C_n`.
pub fn qlm_candidates(n: u32, a: u64, even_form: bool) -> Result<Vec<u64>, SolverError> {
    Ok(qlm_candidates_with(n, a, even_form, &c_n(n)?))
}

pub fn qlm_candidates_with(n: u32, a: u64, even_form: bool, c_n: &BigInt) -> Vec<u64> {
    let target = BigInt::from(a) * c_n;
    let base = if even_form {
        factorial(n)
    } else {
        factorial(n) * BigInt::from(2).pow(n)
    };
    let mut out = Vec::new();
    let mut q = 1u64;
    loop {
        let d = &base * BigInt::from(q).pow(n);
        if d > target {
            break;
        }
        if target.is_multiple_of(&d) {
            out.push(q);
        }
        q += 1;
    }
    out
}

/// `c_X = a (2n-1)!! / q_lm^n`.
pub fn cx_from_case(n: u32, a: u64, q_lm: u64) -> Rat {
    let df: BigInt = (1..=n as u64).map(|i| BigInt::from(2 * i - 1)).product();
    Rat::from_int(df * a) / Rat::from_int(BigInt::from(q_lm).pow(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MxBound {
    /// `N/100` with `N` minimal such that `N/100 >= 2 q_lm (n!/a)^{1/n}`.
    pub bound: Rat,
    /// Same rounding for `2 C_n^{1/n}`.
    pub cn_bound: Rat,
    /// Largest integer `n_X` with `(n_X/2)^n < (2 q_lm)^n n!/a`.
    pub max_n_x: u64,
    /// Largest integer `m_X` with `m_X^n < (2 q_lm)^n n!/a`.
    pub max_m_x: u64,
}

/// Smallest `N` with `N^n * den >= num`.
fn ceil_root(num: &BigInt, den: &BigInt, n: u32) -> BigInt {
    let mut x = (num / den).nth_root(n);
    while x.pow(n) * den < *num {
        x += 1u32;
    }
    x
}

/// Largest `v` with `v^n * den < num`.
fn max_below(num: &BigInt, den: &BigInt, n: u32) -> u64 {
    let mut v = (num / den).nth_root(n) + 1u32;
    while !v.is_zero() && v.pow(n) * den >= *num {
        v -= 1u32;
    }
    v.to_u64().expect("bound fits in u64")
}

pub fn mx_bound(n: u32, a: u64, q_lm: u64) -> Result<MxBound, SolverError> {
    Ok(mx_bound_with(n, a, q_lm, &c_n(n)?))
}

pub fn mx_bound_with(n: u32, a: u64, q_lm: u64, c_n: &BigInt) -> MxBound {
    let a_big = BigInt::from(a);
    let scaled = BigInt::from(200 * q_lm).pow(n) * factorial(n);
    let bound = Rat::new(ceil_root(&scaled, &a_big, n), 100);
    let cn_scaled = BigInt::from(200).pow(n) * c_n;
    let cn_bound = Rat::new(ceil_root(&cn_scaled, &BigInt::one(), n), 100);
    let m_num = BigInt::from(2 * q_lm).pow(n) * factorial(n);
    MxBound {
        bound,
        cn_bound,
        max_n_x: max_below(&(BigInt::from(2).pow(n) * &m_num), &a_big, n),
        max_m_x: max_below(&m_num, &a_big, n),
    }
}

/// Consequences of `a ((q(m) + n_X)/(2 q_lm) - (n-1)/2) in Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingConstraint {
    pub n: u32,
    pub a: u64,
    pub q_lm: u64,
    /// `n_X` lies in `(1/d) Z`.
    pub n_x_denominator: u64,
    pub n_x_integral: bool,
    /// Allowed `(q(m) + n_X) mod 2 q_lm`, when `n_X` is integral.
    pub sum_residues: Option<ResidueSet>,
    /// Whether `m_X = n_X/2` is forced to be an integer once `q(m)` is even.
    pub m_x_integral_if_even: bool,
    /// Allowed `(q(m)/2 + m_X) mod q_lm` under the same hypothesis.
    pub halved_sum_residues: Option<ResidueSet>,
    pub facts: Vec<String>,
}

impl CouplingConstraint {
    /// Whether `q(m) = qm` and `n_X = nx` satisfy the coupling.
    pub fn allows(&self, qm: &BigInt, nx: &Rat) -> bool {
        match (&self.sum_residues, nx.to_integer()) {
            (Some(sums), Some(nx)) => {
                let m = BigInt::from(sums.modulus());
                let r = (qm + nx).mod_floor(&m).to_u64().expect("reduced");
                sums.contains_residue(r)
            }
            (Some(_), None) => false,
            (None, _) => true,
        }
    }
}

pub fn coupling_constraint(n: u32, a: u64, q_lm: u64) -> CouplingConstraint {
    let two_q = 2 * q_lm;
    let d = a / a.gcd(&two_q);
    let mut facts = Vec::new();
    if d == 1 {
        facts.push("n_X ∈ Z".to_string());
    } else {
        facts.push(format!("n_X ∈ (1/{d})Z"));
    }
    let (sum_residues, m_x_integral_if_even, halved) = if d == 1 {
        // a s ≡ a (n-1) q_lm  (mod 2 q_lm)
        let rhs = (a as u128 * (n as u128 - 1) * q_lm as u128 % two_q as u128) as u64;
        let sums = ResidueSet::new(
            two_q,
            (0..two_q).filter(|&s| (a as u128 * s as u128 % two_q as u128) as u64 == rhs),
        );
        if !sums.is_full() {
            facts.push(format!("q(m) + n_X mod {two_q} ∈ {}", residue_list(&sums)));
        }
        let all_even = sums.allowed().all(|s| s % 2 == 0);
        let halved = all_even.then(|| ResidueSet::new(q_lm, sums.allowed().map(|s| s / 2)));
        if all_even {
            facts.push("m_X ∈ Z when q(m) is even".to_string());
            if let Some(h) = &halved {
                if !h.is_full() {
                    facts.push(format!("q(m)/2 + m_X mod {q_lm} ∈ {}", residue_list(h)));
                }
            }
        }
        (Some(sums), all_even, halved)
    } else {
        facts.push("parity coupling not derived for non-integral n_X".to_string());
        (None, false, None)
    };
    CouplingConstraint {
        n,
        a,
        q_lm,
        n_x_denominator: d,
        n_x_integral: d == 1,
        sum_residues,
        m_x_integral_if_even,
        halved_sum_residues: halved,
        facts,
    }
}

fn residue_list(rs: &ResidueSet) -> String {
    let items: Vec<String> = rs.allowed().map(|r| r.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Residues `q mod M` with `isotropic_prr(c_X, n_X)(q)` integral, reduced to
/// the 2-primary modulus when the odd part of `M` imposes no condition.
pub fn divisibility_residues(c_x: &Rat, n_x: &Rat) -> Result<ResidueSet, SolverError> {
    let p = isotropic_prr(c_x, n_x).map_err(|e| SolverError::InvalidInput(e.to_string()))?;
    let rs = p.integrality_residues()?;
    Ok(rs.coarsen_to_two_part().unwrap_or(rs))
}

/// Keep `r` only when every `k^2 r mod M` is allowed.
pub fn square_closure(rs: &ResidueSet) -> ResidueSet {
    let m = rs.modulus() as u128;
    rs.filter(|r| {
        (1..=m).all(|k| rs.contains_residue(((k * k % m) * r as u128 % m) as u64))
    })
}

/// Whether the odd class `r mod M` is excluded when it is the only odd class
/// of represented values.
///
/// With `q(m) = 0`, `q(l, m) = 1`, `x = q(l, alpha)`, `y = q(m, alpha)` the
/// values `q(t l + u m + alpha) = q(alpha) + 2(tu + tx + uy)` are odd, so all
/// of them lie in `r mod M` exactly when `tu + tx + uy ≡ 0 mod M/2`. The class
/// is excluded when every `(x, y)` admits a violating `(t, u)`.
pub fn hyperbolic_exclusion(odd_residue: u64, modulus: u64) -> bool {
    assert!(odd_residue % 2 == 1, "hyperbolic exclusion expects an odd residue");
    assert!(modulus % 2 == 0 && modulus >= 4, "modulus must be even and at least 4");
    let h = modulus / 2;
    (0..h).all(|x| {
        (0..h).all(|y| {
            (0..h).any(|t| (0..h).any(|u| (t * u + t * x + u * y) % h != 0))
        })
    })
}

/// The lattice `Z l + Z m + Z alpha` seen through a rescaled value map.
///
/// Values are `q(v)/scale`; `q(l) = 0`, `q(l, m) = q_lm`, and `q(m)/scale`
/// ranges over `m_values`.
#[derive(Clone, Debug)]
pub struct ExclusionFrame {
    pub scale: u64,
    pub q_lm: u64,
    pub m_values: Vec<u64>,
}

/// Whether no `alpha` with `q(alpha)/scale ≡ r` can exist, given that every
/// represented value lies in `allowed`.
///
/// For all `x = q(l, alpha)`, `y = q(m, alpha)` mod `M` and every admissible
/// `q(m)`, some `t l + u m + s alpha` must have a value outside `allowed`.
pub fn class_excluded(allowed: &ResidueSet, r: u64, frame: &ExclusionFrame) -> bool {
    let m = allowed.modulus();
    if m > EXCLUSION_MAX_MODULUS {
        return false;
    }
    let k = 2 / frame.scale;
    let b = (k * frame.q_lm) % m;
    let value = |t: u64, u: u64, s: u64, x: u64, y: u64, e: u64| {
        (b * t * u + k * s * (t * x + u * y) + u * u * e + s * s * r) % m
    };
    frame.m_values.iter().all(|&e| {
        (0..m).all(|x| {
            (0..m).all(|y| {
                (0..m).any(|s| {
                    (0..m).any(|t| {
                        (0..m).any(|u| !allowed.contains_residue(value(t, u, s, x, y, e)))
                    })
                })
            })
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum GcdVerdict {
    Consistent,
    /// Every allowed integer is divisible by `divisor`, which does not divide
    /// the required gcd.
    Contradiction { divisor: u64 },
}

/// Can integers drawn from `rs` have gcd `required`?
pub fn gcd_constraint(rs: &ResidueSet, required: u64) -> GcdVerdict {
    match rs.content_gcd() {
        Some(g) if required % g == 0 => GcdVerdict::Consistent,
        Some(g) => GcdVerdict::Contradiction { divisor: g },
        None => GcdVerdict::Contradiction { divisor: 0 },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Divisibility,
    Parity,
    Gcd,
    SquareClosure,
    HyperbolicExclusion,
    Coupling,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Divisibility => "divisibility",
            Rule::Parity => "parity",
            Rule::Gcd => "gcd",
            Rule::SquareClosure => "square-closure",
            Rule::HyperbolicExclusion => "hyperbolic-exclusion",
            Rule::Coupling => "coupling",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormParity {
    Even,
    NotEven,
    Either,
    Contradiction,
}

impl fmt::Display for FormParity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FormParity::Even => "even",
            FormParity::NotEven => "not-even",
            FormParity::Either => "either",
            FormParity::Contradiction => "contradiction",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub residues: ResidueSet,
    pub detail: String,
}

/// One sieve run: a value of the branch variable under one parity hypothesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateTrace {
    pub variable: String,
    pub value: u64,
    pub n_x: Rat,
    pub parity: FormParity,
    pub steps: Vec<TraceStep>,
    pub rejected_by: Option<Rule>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    pub n_x: Rat,
    pub parity: FormParity,
    pub p_rr: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QlmBranch {
    pub q_lm: u64,
    pub c_x: Rat,
    /// Values are read as `q/scale`; 2 when the form is forced even and the
    /// branch works with the halved values.
    pub scale: u64,
    pub variable: String,
    pub bound: MxBound,
    pub coupling: CouplingConstraint,
    pub traces: Vec<CandidateTrace>,
    pub survivors: Vec<Survivor>,
    pub parity: FormParity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropicCase {
    pub n: u32,
    pub a: u64,
    #[serde(with = "crate::cnconst::bigint_string")]
    pub c_n: BigInt,
    pub qlm_even: Vec<u64>,
    pub qlm_not_even: Vec<u64>,
    pub branches: Vec<QlmBranch>,
    pub n_x: Vec<Rat>,
    pub parity: FormParity,
}

fn combine_parity(ps: impl IntoIterator<Item = FormParity>) -> FormParity {
    let mut even = false;
    let mut odd = false;
    for p in ps {
        match p {
            FormParity::Even => even = true,
            FormParity::NotEven => odd = true,
            FormParity::Either => {
                even = true;
                odd = true;
            }
            FormParity::Contradiction => {}
        }
    }
    match (even, odd) {
        (true, true) => FormParity::Either,
        (true, false) => FormParity::Even,
        (false, true) => FormParity::NotEven,
        (false, false) => FormParity::Contradiction,
    }
}

struct Sieve<'a> {
    q_lm: u64,
    scale: u64,
    c_frame: Rat,
    coupling: &'a CouplingConstraint,
}

impl Sieve<'_> {
    /// Run the sieve for `v = n_X / scale` under the parity hypothesis.
    /// `required` is the gcd the values `q/scale` must have.
    fn run(&self, v: u64, parity: FormParity, variable: &str) -> CandidateTrace {
        let n_x = Rat::from_int((v * self.scale) as i64);
        let mut steps = Vec::new();
        let required = match (parity, self.scale) {
            (FormParity::Even, 1) => 2,
            _ => 1,
        };
        let trace = |rejected_by: Option<Rule>, steps: Vec<TraceStep>| CandidateTrace {
            variable: variable.to_string(),
            value: v,
            n_x: n_x.clone(),
            parity,
            steps,
            rejected_by,
        };

        let base = match divisibility_residues(&self.c_frame, &Rat::from_int(v as i64)) {
            Ok(rs) => rs,
            Err(e) => {
                steps.push(TraceStep {
                    rule: Rule::Divisibility,
                    residues: ResidueSet::empty(1),
                    detail: e.to_string(),
                });
                return trace(Some(Rule::Divisibility), steps);
            }
        };
        let frame_name = if self.scale == 1 { "q" } else { "q'" };
        steps.push(TraceStep {
            rule: Rule::Divisibility,
            residues: base.clone(),
            detail: if self.scale == 1 {
                "P_RR(q) ∈ Z".to_string()
            } else {
                format!("P_RR({} q') ∈ Z with q' = q/{}", self.scale, self.scale)
            },
        });
        let mut rs = if parity == FormParity::Even && self.scale == 1 {
            let r = base.with_parity(false);
            steps.push(TraceStep {
                rule: Rule::Parity,
                residues: r.clone(),
                detail: "even form: only even values".to_string(),
            });
            r
        } else {
            base
        };

        let gcd_fail = |rs: &ResidueSet| match gcd_constraint(rs, required) {
            GcdVerdict::Consistent => None,
            GcdVerdict::Contradiction { divisor } => Some(format!(
                "every value is divisible by {}, but the gcd of values of the form must be {}",
                divisor * self.scale,
                required * self.scale
            )),
        };
        if let Some(detail) = gcd_fail(&rs) {
            steps.push(TraceStep { rule: Rule::Gcd, residues: rs, detail });
            return trace(Some(Rule::Gcd), steps);
        }

        let closed = square_closure(&rs);
        if closed != rs {
            steps.push(TraceStep {
                rule: Rule::SquareClosure,
                residues: closed.clone(),
                detail: format!("k^2 {frame_name} is represented whenever {frame_name} is"),
            });
            rs = closed;
            if let Some(detail) = gcd_fail(&rs) {
                steps.push(TraceStep { rule: Rule::Gcd, residues: rs, detail });
                return trace(Some(Rule::SquareClosure), steps);
            }
        }

        // Odd classes in the frame: need the lattice argument.
        let lifted = rs
            .refine(rs.modulus().lcm(&(2 * self.q_lm)))
            .expect("lcm is a multiple");
        let m_values: Vec<u64> = lifted
            .allowed()
            .filter(|&e| {
                self.coupling
                    .allows(&BigInt::from(e * self.scale), &n_x)
            })
            .collect();
        let frame = ExclusionFrame {
            scale: self.scale,
            q_lm: self.q_lm,
            m_values,
        };
        let odd: Vec<u64> = lifted.allowed().filter(|r| r % 2 == 1).collect();
        if !odd.is_empty() && (self.scale == 2 || parity == FormParity::NotEven) {
            let excluded: Vec<u64> = odd
                .iter()
                .copied()
                .filter(|&r| class_excluded(&lifted, r, &frame))
                .collect();
            if !excluded.is_empty() {
                let kept = lifted.filter(|r| !excluded.contains(&r));
                let listed: Vec<String> = excluded.iter().map(u64::to_string).collect();
                steps.push(TraceStep {
                    rule: Rule::HyperbolicExclusion,
                    residues: kept.clone(),
                    detail: format!(
                        "no class alpha with {frame_name}(alpha) ≡ {} mod {} on Z l + Z m + Z alpha",
                        listed.join(","),
                        kept.modulus()
                    ),
                });
                rs = kept;
                if let Some(detail) = gcd_fail(&rs) {
                    steps.push(TraceStep { rule: Rule::Gcd, residues: rs, detail });
                    return trace(Some(Rule::HyperbolicExclusion), steps);
                }
            }
        }

        let lifted = rs
            .refine(rs.modulus().lcm(&(2 * self.q_lm)))
            .expect("lcm is a multiple");
        let coupled = lifted.allowed().any(|e| self.coupling.allows(&BigInt::from(e * self.scale), &n_x));
        if !coupled {
            steps.push(TraceStep {
                rule: Rule::Coupling,
                residues: lifted,
                detail: format!(
                    "no represented q(m) satisfies {}",
                    self.coupling.facts.join("; ")
                ),
            });
            return trace(Some(Rule::Coupling), steps);
        }
        trace(None, steps)
    }
}

/// Bounds and the parity coupling for each admissible `q_lm`, without the
/// residue elimination. Available for every `(n, a)`.
pub fn case_constraints(n: u32, a: u64) -> Result<Vec<(u64, Rat, MxBound, CouplingConstraint)>, SolverError> {
    if n == 0 || a == 0 {
        return Err(SolverError::InvalidInput("n and a must be positive".into()));
    }
    let c = c_n(n)?;
    Ok(qlm_candidates_with(n, a, true, &c)
        .into_iter()
        .map(|q| {
            (
                q,
                cx_from_case(n, a, q),
                mx_bound_with(n, a, q, &c),
                coupling_constraint(n, a, q),
            )
        })
        .collect())
}

pub fn solve_case(n: u32, a: u64) -> Result<IsotropicCase, SolverError> {
    solve_case_with_parity(n, a, None)
}

/// `even_form = Some(false)` forces the form to be not even.
pub fn solve_case_with_parity(
    n: u32,
    a: u64,
    even_form: Option<bool>,
) -> Result<IsotropicCase, SolverError> {
    if n != 3 || !(a == 1 || a == 2) {
        return Err(SolverError::UnsupportedCase { n, a });
    }
    let c = c_n(n)?;
    let qlm_even = qlm_candidates_with(n, a, true, &c);
    let qlm_not_even = qlm_candidates_with(n, a, false, &c);
    let candidates: Vec<u64> = match even_form {
        Some(false) => qlm_not_even.clone(),
        _ => qlm_even.clone(),
    };
    let mut branches = Vec::new();
    for q_lm in candidates {
        let c_x = cx_from_case(n, a, q_lm);
        let bound = mx_bound_with(n, a, q_lm, &c);
        let coupling = coupling_constraint(n, a, q_lm);
        let even_forced = !qlm_not_even.contains(&q_lm);
        let parities: Vec<FormParity> = match (even_form, even_forced) {
            (Some(true), _) | (None, true) => vec![FormParity::Even],
            (Some(false), _) => vec![FormParity::NotEven],
            (None, false) => vec![FormParity::NotEven, FormParity::Even],
        };
        let (scale, variable, max_value) = if even_forced && coupling.m_x_integral_if_even {
            (2u64, "m_X", bound.max_m_x)
        } else if coupling.n_x_integral {
            (1u64, "n_X", bound.max_n_x)
        } else {
            return Err(SolverError::UnsupportedCase { n, a });
        };
        let sieve = Sieve {
            q_lm,
            scale,
            c_frame: &c_x * Rat::from_int(BigInt::from(scale).pow(n)),
            coupling: &coupling,
        };
        let mut traces = Vec::new();
        let mut survivors = Vec::new();
        for v in 1..=max_value {
            let mut alive = Vec::new();
            for &parity in &parities {
                let t = sieve.run(v, parity, variable);
                if t.rejected_by.is_none() {
                    alive.push(parity);
                }
                traces.push(t);
            }
            if !alive.is_empty() {
                let n_x = Rat::from_int((v * scale) as i64);
                let p_rr = isotropic_prr(&c_x, &n_x)
                    .map_err(|e| SolverError::InvalidInput(e.to_string()))?;
                survivors.push(Survivor {
                    n_x,
                    parity: combine_parity(alive),
                    p_rr,
                });
            }
        }
        let parity = combine_parity(survivors.iter().map(|s| s.parity));
        branches.push(QlmBranch {
            q_lm,
            c_x,
            scale,
            variable: variable.to_string(),
            bound,
            coupling: coupling,
            traces,
            survivors,
            parity,
        });
    }
    let mut n_x: Vec<Rat> = branches
        .iter()
        .flat_map(|b| b.survivors.iter().map(|s| s.n_x.clone()))
        .collect();
    n_x.sort();
    n_x.dedup();
    let parity = combine_parity(branches.iter().map(|b| b.parity));
    Ok(IsotropicCase {
        n,
        a,
        c_n: c,
        qlm_even,
        qlm_not_even,
        branches,
        n_x,
        parity,
    })
}
