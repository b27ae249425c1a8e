//! The Riemann-Roch polynomial `Q_RR` from Chern-character integrals.
//!
//! `Q_RR(T)` is the integral of `exp(-sum_k B_{2k}/(2k) ch_{2k} P_k(T))`.
//! The exponential is expanded in formal commuting variables `x_k` of weight
//! `k` standing for `ch_{2k}`; only the weight-`n` part survives integration,
//! and each weight-`n` monomial is replaced by the supplied integral.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chebbern::{bernoulli, pk_poly};
use crate::error::ChernDataError;
use crate::exactpoly::{Poly, Rat};

/// A multiset of positive integers, stored sorted ascending.
pub type Partition = Vec<u32>;

/// Integrals of products `ch_{2k_1} ... ch_{2k_r}` keyed by the multiset
/// `{k_1, ..., k_r}`, which must sum to `n`. Missing keys are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ChernDataRepr", into = "ChernDataRepr")]
pub struct ChernData {
    n: u32,
    values: BTreeMap<Partition, Rat>,
}

#[derive(Serialize, Deserialize)]
struct ChernDataRepr {
    n: u32,
    values: Vec<ChernEntry>,
}

#[derive(Serialize, Deserialize)]
struct ChernEntry {
    partition: Vec<u32>,
    value: Rat,
}

impl TryFrom<ChernDataRepr> for ChernData {
    type Error = ChernDataError;

    fn try_from(r: ChernDataRepr) -> Result<Self, Self::Error> {
        let mut data = ChernData::new(r.n)?;
        for e in r.values {
            data.insert(e.partition, e.value)?;
        }
        Ok(data)
    }
}

impl From<ChernData> for ChernDataRepr {
    fn from(d: ChernData) -> Self {
        ChernDataRepr {
            n: d.n,
            values: d
                .values
                .into_iter()
                .map(|(partition, value)| ChernEntry { partition, value })
                .collect(),
        }
    }
}

impl ChernData {
    pub fn new(n: u32) -> Result<Self, ChernDataError> {
        if n == 0 {
            return Err(ChernDataError::ZeroDimension);
        }
        Ok(ChernData {
            n,
            values: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Set the integral for a multiset; the order of `parts` is irrelevant.
    /// Repeated inserts for the same multiset overwrite.
    pub fn insert(&mut self, mut parts: Vec<u32>, value: Rat) -> Result<(), ChernDataError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(ChernDataError::BadPartition(parts));
        }
        if parts.iter().map(|&k| k as u64).sum::<u64>() != self.n as u64 {
            return Err(ChernDataError::WeightMismatch { n: self.n, parts });
        }
        parts.sort_unstable();
        if value.is_zero() {
            self.values.remove(&parts);
        } else {
            self.values.insert(parts, value);
        }
        Ok(())
    }

    pub fn get(&self, parts: &[u32]) -> Rat {
        let mut key = parts.to_vec();
        key.sort_unstable();
        self.values.get(&key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.values.iter()
    }

    /// `a*self + b*other`. Panics if the half-dimensions differ.
    pub fn combine(&self, a: &Rat, other: &ChernData, b: &Rat) -> ChernData {
        assert_eq!(self.n, other.n, "combining Chern data of different n");
        let mut out = ChernData::new(self.n).expect("n > 0");
        for p in partitions(self.n) {
            let v = a * self.get(&p) + b * other.get(&p);
            out.insert(p, v).expect("valid partition");
        }
        out
    }
}

/// All partitions of `n` as ascending multisets, in lexicographic order.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn go(remaining: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for k in min..=remaining {
            cur.push(k);
            go(remaining - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Polynomials in commuting graded variables `x_k` (weight `k`) with
/// coefficients in `Q[T]`, truncated above a fixed weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    cap: u32,
    terms: BTreeMap<Partition, Poly>,
}

impl GradedSeries {
    pub fn zero(cap: u32) -> Self {
        GradedSeries {
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(cap: u32) -> Self {
        let mut s = GradedSeries::zero(cap);
        s.terms.insert(Vec::new(), Poly::one());
        s
    }

    /// `coeff * x_k`, or zero if `k` is above the cap.
    pub fn variable(cap: u32, k: u32, coeff: Poly) -> Self {
        let mut s = GradedSeries::zero(cap);
        if k <= cap && !coeff.is_zero() {
            s.terms.insert(vec![k], coeff);
        }
        s
    }

    fn add_term(&mut self, key: Partition, coeff: Poly) {
        let sum = match self.terms.remove(&key) {
            Some(v) => &v + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &GradedSeries) -> GradedSeries {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> GradedSeries {
        let mut out = GradedSeries::zero(self.cap);
        for (k, v) in &self.terms {
            let s = v.scale(c);
            if !s.is_zero() {
                out.terms.insert(k.clone(), s);
            }
        }
        out
    }

    /// Product with every monomial of weight above the cap discarded.
    pub fn mul(&self, other: &GradedSeries) -> GradedSeries {
        let mut out = GradedSeries::zero(self.cap.min(other.cap));
        for (ka, va) in &self.terms {
            let wa: u32 = ka.iter().sum();
            for (kb, vb) in &other.terms {
                let wb: u32 = kb.iter().sum();
                if wa + wb > out.cap {
                    continue;
                }
                let mut key = ka.clone();
                key.extend_from_slice(kb);
                key.sort_unstable();
                out.add_term(key, va * vb);
            }
        }
        out
    }

    /// `sum_{j=0}^{cap} s^j / j!`, exact because `s` has no weight-0 part.
    pub fn exp(&self) -> GradedSeries {
        assert!(
            !self.terms.contains_key(&Vec::new()),
            "exp needs a series without constant term"
        );
        let mut result = GradedSeries::one(self.cap);
        let mut power = GradedSeries::one(self.cap);
        for j in 1..=self.cap {
            power = power.mul(self).scale(&Rat::new(1, j as i64));
            result = result.add(&power);
        }
        result
    }

    /// Terms of total weight exactly `w`.
    pub fn weight_part(&self, w: u32) -> BTreeMap<Partition, Poly> {
        self.terms
            .iter()
            .filter(|(k, _)| k.iter().sum::<u32>() == w)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

/// The weight-`n` part of `exp(-sum_{k=1}^n B_{2k}/(2k) x_k P_k(T))`, keyed by
/// the multiset of each monomial.
pub fn nw_expansion(n: u32) -> BTreeMap<Partition, Poly> {
    let mut exponent = GradedSeries::zero(n);
    for k in 1..=n {
        let c = -bernoulli(2 * k) / Rat::from_int(2 * k as i64);
        exponent = exponent.add(&GradedSeries::variable(n, k, pk_poly(k).scale(&c)));
    }
    exponent.exp().weight_part(n)
}

/// `Q_RR(T)` for the given Chern-character integrals.
pub fn q_rr_from_chern(data: &ChernData) -> Poly {
    let expansion = nw_expansion(data.n());
    data.entries().fold(Poly::zero(), |acc, (parts, value)| {
        match expansion.get(parts) {
            Some(coeff) => &acc + &coeff.scale(value),
            None => acc,
        }
    })
}
