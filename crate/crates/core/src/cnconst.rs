//! The constants `C_n = gcd over integer tuples (r_0..r_n) of prod_{j<k} (r_j^2 - r_k^2)`.
//!
//! Two independent routes are combined into a certificate:
//!
//! * a layered search over sorted tuples `0 <= r_0 < ... < r_n <= B`, reducing
//!   the gcd by tracking prime exponents and pruning subtrees that can no
//!   longer lower any exponent. This only ever gives an upper bound (a
//!   multiple of `C_n`).
//! * for each prime in the support, a greedy `p`-ordering of the set of
//!   squares. The sum of its valuations is the exact exponent of `p` in the
//!   gcd of all tuple products, which bounds every tuple from below.
//!
//! The search stops once it has been stable for the requested number of
//! layers, its prime support is within `p <= 2n - 1`, and the two routes agree.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CnError;

/// Default number of consecutive unchanged layers.
pub const DEFAULT_STABILITY: u32 = 3;

/// Default cap on the search bound `B`.
pub const DEFAULT_MAX_BOUND: u64 = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnCertificate {
    pub n: u32,
    #[serde(with = "bigint_string")]
    pub value: BigInt,
    pub factorization: Vec<(u64, u32)>,
    pub search_bound: u64,
    pub stable_layers: u32,
    pub prime_orderings: Vec<PrimeOrdering>,
}

/// A greedy `p`-ordering `r_0^2, r_1^2, ...` of the squares.
///
/// `valuations[k]` is `v_p(prod_{i<k} (r_k^2 - r_i^2))`, the smallest value
/// any square can reach at step `k`; their sum is the exponent of `p` in
/// `C_n`, and `roots` is a tuple attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeOrdering {
    pub prime: u64,
    pub exponent: u32,
    pub valuations: Vec<u32>,
    pub roots: Vec<u64>,
}

pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `prod_{j<k} (r_j^2 - r_k^2)`.
pub fn tuple_product(rs: &[i64]) -> BigInt {
    let mut acc = BigInt::one();
    for (j, &a) in rs.iter().enumerate() {
        for &b in &rs[j + 1..] {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            acc *= &a * &a - &b * &b;
        }
    }
    acc
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; limit as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= limit as usize {
        if sieve[i] {
            for j in (i * i..=limit as usize).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(i, _)| i as u64)
        .collect()
}

fn valuation(mut x: u128, p: u64) -> u32 {
    debug_assert!(x != 0);
    let p = p as u128;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// A prime `p <= 2n - 1` together with the pigeonhole witness forcing
/// `p | C_n`: there are at most `n` distinct squares modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportWitness {
    pub prime: u64,
    pub distinct_squares: u64,
    pub forced: bool,
}

/// Primes `p <= 2n - 1`, each with its count of squares modulo `p`.
pub fn cn_prime_support(n: u32) -> Vec<SupportWitness> {
    let bound = (2 * n as u64).saturating_sub(1);
    primes_up_to(bound)
        .into_iter()
        .map(|p| {
            let mut seen = vec![false; p as usize];
            for r in 0..p {
                seen[((r * r) % p) as usize] = true;
            }
            let distinct = seen.iter().filter(|&&b| b).count() as u64;
            SupportWitness {
                prime: p,
                distinct_squares: distinct,
                forced: distinct <= n as u64,
            }
        })
        .collect()
}

/// Greedy `p`-ordering of the squares of length `n + 1`.
///
/// At step `k`, candidates `r` range over `[0, p^L)` for growing `L`; the
/// minimum `m` found is exact once `m < L`, since reducing any integer modulo
/// `p^L` preserves every factor valuation below `L`.
pub fn p_ordering(p: u64, n: u32) -> PrimeOrdering {
    let mut roots: Vec<u64> = vec![0];
    let mut valuations = vec![0u32];
    for _ in 1..=n {
        let mut depth = 1u32;
        let (best_r, best_v) = loop {
            let limit = p.checked_pow(depth).expect("p-ordering depth overflow");
            let mut best: Option<(u64, u32)> = None;
            for r in 0..limit {
                let sq = (r as u128) * (r as u128);
                let mut v = 0u32;
                let mut infinite = false;
                for &a in &roots {
                    let a2 = (a as u128) * (a as u128);
                    let d = sq.abs_diff(a2);
                    if d == 0 {
                        infinite = true;
                        break;
                    }
                    v += valuation(d, p);
                }
                if infinite {
                    continue;
                }
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((r, v));
                }
            }
            match best {
                Some((r, v)) if v < depth => break (r, v),
                _ => depth += 1,
            }
        };
        roots.push(best_r);
        valuations.push(best_v);
    }
    PrimeOrdering {
        prime: p,
        exponent: valuations.iter().sum(),
        valuations,
        roots,
    }
}

/// Exponent vectors of `1..=max` over a fixed list of primes.
struct ExponentTable {
    rows: Vec<Vec<u32>>,
}

impl ExponentTable {
    fn new(primes: &[u64], max: u64) -> Self {
        let rows = (0..=max)
            .map(|v| {
                primes
                    .iter()
                    .map(|&p| if v == 0 { 0 } else { valuation(v as u128, p) })
                    .collect()
            })
            .collect();
        ExponentTable { rows }
    }

    fn row(&self, v: u64) -> &[u32] {
        &self.rows[v as usize]
    }
}

struct LayerSearch<'a> {
    n: usize,
    table: &'a ExponentTable,
}

impl LayerSearch<'_> {
    /// Exponent contribution of adding `x` to a tuple holding `chosen`.
    fn add_element(&self, exps: &mut [u32], chosen: &[u64], x: u64) {
        for &y in chosen {
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            for (e, (a, b)) in exps
                .iter_mut()
                .zip(self.table.row(hi - lo).iter().zip(self.table.row(hi + lo)))
            {
                *e += a + b;
            }
        }
    }

    /// Depth-first over descending choices below `upper`, lowering `best`
    /// elementwise.
    fn descend(&self, chosen: &mut Vec<u64>, exps: &[u32], upper: u64, best: &mut [u32]) {
        if exps.iter().zip(best.iter()).all(|(e, b)| e >= b) {
            return;
        }
        if chosen.len() == self.n + 1 {
            for (b, e) in best.iter_mut().zip(exps) {
                *b = (*b).min(*e);
            }
            return;
        }
        let need = (self.n + 1 - chosen.len()) as u64;
        // leave room for the remaining smaller elements
        for x in (need - 1..upper).rev() {
            let mut next = exps.to_vec();
            self.add_element(&mut next, chosen, x);
            chosen.push(x);
            self.descend(chosen, &next, x, best);
            chosen.pop();
        }
    }

    /// Fold every tuple whose largest element is `top` into `best`.
    fn layer(&self, top: u64, best: &[u32]) -> Vec<u32> {
        let width = best.len();
        let n = self.n as u64;
        if n == 0 {
            return best.to_vec();
        }
        (n - 1..top)
            .into_par_iter()
            .map(|second| {
                let mut local = best.to_vec();
                let mut exps = vec![0u32; width];
                self.add_element(&mut exps, &[top], second);
                let mut chosen = vec![top, second];
                self.descend(&mut chosen, &exps, second, &mut local);
                local
            })
            .reduce(
                || best.to_vec(),
                |a, b| a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect(),
            )
    }
}

fn factorization_value(f: &[(u64, u32)]) -> BigInt {
    f.iter()
        .fold(BigInt::one(), |acc, &(p, e)| acc * num_traits::pow(BigInt::from(p), e as usize))
}

/// Compute `C_n` with its certificate.
pub fn cn_value(n: u32, stability: u32, max_bound: u64) -> Result<CnCertificate, CnError> {
    if n == 0 {
        return Err(CnError::ZeroN);
    }
    let stability = stability.max(1);
    let nn = n as u64;
    // Base layer B = n holds the single tuple (0, 1, ..., n); its prime
    // support contains that of the gcd.
    let first: Vec<i64> = (0..=n as i64).collect();
    let candidates = primes_up_to(2 * nn);
    let base_table = ExponentTable::new(&candidates, 2 * nn);
    let mut best = vec![0u32; candidates.len()];
    for (j, &a) in first.iter().enumerate() {
        for &b in &first[j + 1..] {
            let (a, b) = (a as u64, b as u64);
            for (e, (x, y)) in best
                .iter_mut()
                .zip(base_table.row(b - a).iter().zip(base_table.row(a + b)))
            {
                *e += x + y;
            }
        }
    }
    let support: Vec<(u64, u32)> = candidates
        .iter()
        .zip(&best)
        .filter(|(_, &e)| e > 0)
        .map(|(&p, &e)| (p, e))
        .collect();
    let primes: Vec<u64> = support.iter().map(|&(p, _)| p).collect();
    let mut best: Vec<u32> = support.iter().map(|&(_, e)| e).collect();

    let orderings: Vec<PrimeOrdering> = cn_prime_support(n)
        .iter()
        .map(|w| p_ordering(w.prime, n))
        .collect();
    let certified: Vec<(u64, u32)> = orderings
        .iter()
        .filter(|o| o.exponent > 0)
        .map(|o| (o.prime, o.exponent))
        .collect();

    let mut bound = nn;
    let mut stable = 0u32;
    let mut table = ExponentTable::new(&primes, 2 * bound);
    loop {
        let factorization: Vec<(u64, u32)> = primes
            .iter()
            .zip(&best)
            .filter(|(_, &e)| e > 0)
            .map(|(&p, &e)| (p, e))
            .collect();
        let support_ok = factorization.iter().all(|&(p, _)| p < 2 * nn);
        if stable >= stability && support_ok && factorization == certified {
            return Ok(CnCertificate {
                n,
                value: factorization_value(&factorization),
                factorization,
                search_bound: bound,
                stable_layers: stable,
                prime_orderings: orderings,
            });
        }
        if bound >= max_bound {
            return Err(CnError::SearchCapExceeded {
                cap: max_bound,
                last: factorization_value(&factorization).to_string(),
            });
        }
        bound += 1;
        if table.rows.len() <= 2 * bound as usize {
            table = ExponentTable::new(&primes, 4 * bound);
        }
        let search = LayerSearch {
            n: n as usize,
            table: &table,
        };
        let next = search.layer(bound, &best);
        if next == best {
            stable += 1;
        } else {
            stable = 0;
            best = next;
        }
    }
}

/// `C_n` by plain gcd over every sorted tuple with entries `<= bound`.
/// Exponential; meant as a cross-check for small `n`.
pub fn cn_brute_force(n: u32, bound: i64) -> BigInt {
    fn go(n: usize, start: i64, bound: i64, cur: &mut Vec<i64>, g: &mut BigInt) {
        if cur.len() == n + 1 {
            let p = tuple_product(cur);
            *g = num_integer::Integer::gcd(g, &p);
            return;
        }
        for x in start..=bound {
            cur.push(x);
            go(n, x + 1, bound, cur, g);
            cur.pop();
        }
    }
    let mut g = BigInt::zero();
    go(n as usize, 0, bound, &mut Vec::new(), &mut g);
    g
}
