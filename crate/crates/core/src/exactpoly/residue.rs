use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A modulus `M` together with a subset of `Z/M`.
///
/// An integer `q` belongs to the set when `q mod M` is allowed. Refining to a
/// multiple of `M` keeps this membership unchanged.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueSet {
    modulus: u64,
    allowed: BTreeSet<u64>,
}

impl ResidueSet {
    /// Panics if `modulus` is zero.
    pub fn new<I: IntoIterator<Item = u64>>(modulus: u64, allowed: I) -> Self {
        assert!(modulus > 0, "residue modulus must be positive");
        ResidueSet {
            modulus,
            allowed: allowed.into_iter().map(|r| r % modulus).collect(),
        }
    }

    pub fn full(modulus: u64) -> Self {
        ResidueSet::new(modulus, 0..modulus)
    }

    pub fn empty(modulus: u64) -> Self {
        ResidueSet::new(modulus, std::iter::empty())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn allowed(&self) -> impl Iterator<Item = u64> + '_ {
        self.allowed.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.allowed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.allowed.len() as u64 == self.modulus
    }

    pub fn contains(&self, q: i64) -> bool {
        let r = q.mod_floor(&(self.modulus as i64)) as u64;
        self.allowed.contains(&r)
    }

    pub fn contains_residue(&self, r: u64) -> bool {
        self.allowed.contains(&(r % self.modulus))
    }

    /// The same set over a multiple of the modulus; `None` if `modulus` does
    /// not divide `new_modulus`.
    pub fn refine(&self, new_modulus: u64) -> Option<ResidueSet> {
        if new_modulus == 0 || new_modulus % self.modulus != 0 {
            return None;
        }
        let allowed = (0..new_modulus).filter(|r| self.allowed.contains(&(r % self.modulus)));
        Some(ResidueSet::new(new_modulus, allowed))
    }

    /// The same set over a divisor of the modulus, when membership only
    /// depends on `q mod new_modulus`.
    pub fn coarsen(&self, new_modulus: u64) -> Option<ResidueSet> {
        if new_modulus == 0 || self.modulus % new_modulus != 0 {
            return None;
        }
        let projected = ResidueSet::new(new_modulus, self.allowed.iter().copied());
        (projected.refine(self.modulus).as_ref() == Some(self)).then_some(projected)
    }

    /// Coarsen to the 2-primary part of the modulus if membership allows it.
    pub fn coarsen_to_two_part(&self) -> Option<ResidueSet> {
        let two_part = 1u64 << self.modulus.trailing_zeros();
        self.coarsen(two_part)
    }

    /// The smallest modulus dividing `M` over which the set can be written.
    pub fn minimal(&self) -> ResidueSet {
        let mut best = self.clone();
        let mut d = 1;
        while d <= self.modulus {
            if self.modulus % d == 0 {
                if let Some(c) = self.coarsen(d) {
                    best = c;
                    break;
                }
            }
            d += 1;
        }
        best
    }

    pub fn filter<F: Fn(u64) -> bool>(&self, pred: F) -> ResidueSet {
        ResidueSet {
            modulus: self.modulus,
            allowed: self.allowed.iter().copied().filter(|&r| pred(r)).collect(),
        }
    }

    pub fn intersect(&self, other: &ResidueSet) -> ResidueSet {
        let m = self.modulus.lcm(&other.modulus);
        let a = self.refine(m).expect("lcm is a multiple");
        let b = other.refine(m).expect("lcm is a multiple");
        ResidueSet {
            modulus: m,
            allowed: a.allowed.intersection(&b.allowed).copied().collect(),
        }
    }

    /// Restrict to integers of the given parity (refining to an even modulus
    /// when needed).
    pub fn with_parity(&self, odd: bool) -> ResidueSet {
        let m = self.modulus.lcm(&2);
        let refined = self.refine(m).expect("lcm is a multiple");
        refined.filter(|r| (r % 2 == 1) == odd)
    }

    /// The gcd of all integers lying in the allowed classes, or `None` when
    /// the set is empty.
    pub fn content_gcd(&self) -> Option<u64> {
        if self.allowed.is_empty() {
            return None;
        }
        Some(
            self.allowed
                .iter()
                .fold(self.modulus, |g, &r| g.gcd(&r)),
        )
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.allowed.iter().map(u64::to_string).collect();
        write!(f, "{{{}}} mod {}", items.join(","), self.modulus)
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refine_preserves_membership() {
        let rs = ResidueSet::new(4, [0, 3]);
        let fine = rs.refine(12).unwrap();
        for q in -50..50 {
            assert_eq!(rs.contains(q), fine.contains(q));
        }
        assert!(rs.refine(6).is_none());
    }

    #[test]
    fn coarsen_only_when_union_of_fibers() {
        let rs = ResidueSet::new(48, (0..48).filter(|q| q % 16 == 6));
        assert_eq!(rs.coarsen_to_two_part(), Some(ResidueSet::new(16, [6])));
        let mixed = ResidueSet::new(48, [6]);
        assert_eq!(mixed.coarsen_to_two_part(), None);
        assert_eq!(ResidueSet::new(12, [0, 4, 8]).minimal(), ResidueSet::new(4, [0]));
    }

    #[test]
    fn content_gcd_and_parity() {
        assert_eq!(ResidueSet::new(16, [0, 4, 8, 12]).content_gcd(), Some(4));
        assert_eq!(ResidueSet::new(16, [0, 6]).content_gcd(), Some(2));
        assert_eq!(ResidueSet::full(1).content_gcd(), Some(1));
        assert_eq!(ResidueSet::empty(8).content_gcd(), None);
        let odd = ResidueSet::full(3).with_parity(true);
        assert_eq!(odd.modulus(), 6);
        assert_eq!(odd.allowed().collect::<Vec<_>>(), vec![1, 3, 5]);
    }

    #[test]
    fn intersect_over_lcm() {
        let a = ResidueSet::new(4, [0, 1]);
        let b = ResidueSet::new(6, [0, 3]);
        let c = a.intersect(&b);
        for q in 0..48 {
            assert_eq!(c.contains(q), a.contains(q) && b.contains(q));
        }
    }

    #[test]
    fn display() {
        assert_eq!(ResidueSet::new(16, [15, 0, 6]).to_string(), "{0,6,15} mod 16");
    }
}
