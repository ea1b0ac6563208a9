//! Branch data of rational functions and their permutation witnesses.
//!
//! A rational function of degree `d` with zeros of multiplicities `m_j`,
//! poles of multiplicities `n_j`, and further critical points of local
//! degree `k_j` (each with its own critical value) exists iff there are
//! permutations `s0, sinf, t_1..t_s` of `{1..d}` with cycle types `m`, `n`,
//! `(k_j, 1^(d-k_j))`, product the identity, generating a transitive group.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::decider::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HurwitzError {
    #[error("residue vector has a zero entry")]
    ZeroEntry,
    #[error("residues sum to {0}, not 0")]
    Unbalanced(i64),
    #[error("residues have common factor {0}")]
    NotCoprime(i64),
    #[error("partition sums to {sum}, expected q - 2 = {expected}")]
    PartitionMismatch { sum: u64, expected: i64 },
    #[error("{0} does not partition the degree {1}")]
    BadPartition(String, usize),
    #[error("extra critical multiplicities must be at least 2")]
    SmallExtra,
    #[error("Riemann-Hurwitz count {lhs} differs from 2d - 2 = {rhs}")]
    RiemannHurwitz { lhs: usize, rhs: usize },
    #[error("cannot parse permutation {0:?}")]
    Parse(String),
}

/// A permutation of `{0..d}`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Self((0..d as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Self(images))
    }

    /// Cycles laid out consecutively: `(0 1 .. m1-1)(m1 ..)...`.
    pub fn canonical_of_type(cycle_type: &[usize]) -> Self {
        let d: usize = cycle_type.iter().sum();
        let mut images = vec![0u8; d];
        let mut start = 0;
        for &len in cycle_type {
            for i in 0..len {
                images[start + i] = (start + (i + 1) % len) as u8;
            }
            start += len;
        }
        Self(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Self(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Cycles including fixed points, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths, largest first.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }
}

/// Cycle notation on `{1..d}`, fixed points included: `(1 2)(3)`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            let items: Vec<String> = cycle.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", items.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = HurwitzError;

    /// Reads cycle notation; the degree is the largest point mentioned.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || HurwitzError::Parse(s.to_string());
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(err)?;
            let end = body.find(')').ok_or_else(err)?;
            let cycle = body[..end]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().ok().filter(|&x| x >= 1).map(|x| x - 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(err)?;
            if cycle.is_empty() {
                return Err(err());
            }
            cycles.push(cycle);
            rest = body[end + 1..].trim_start();
        }
        let d = cycles.iter().flatten().max().map_or(0, |m| m + 1);
        if d > u8::MAX as usize {
            return Err(err());
        }
        let mut images: Vec<Option<u8>> = vec![None; d];
        for cycle in &cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                if images[x].replace(next as u8).is_some() {
                    return Err(err());
                }
            }
        }
        let images = images.into_iter().enumerate().map(|(i, x)| x.unwrap_or(i as u8)).collect();
        Permutation::from_images(images).ok_or_else(err)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}

/// Degree, zero and pole multiplicities, and extra critical multiplicities
/// of a rational function; all lists are sorted largest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchData {
    pub degree: usize,
    pub zeros: Vec<usize>,
    pub poles: Vec<usize>,
    pub extras: Vec<usize>,
}

fn sorted_desc(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

impl BranchData {
    /// Validates the two partitions of `degree` and the Riemann–Hurwitz
    /// count `sum (n-1) + sum (m-1) + sum (k-1) = 2d - 2`.
    pub fn new(degree: usize, zeros: Vec<usize>, poles: Vec<usize>, extras: Vec<usize>) -> Result<Self, HurwitzError> {
        for (name, p) in [("zeros", &zeros), ("poles", &poles)] {
            if p.iter().sum::<usize>() != degree || p.contains(&0) {
                return Err(HurwitzError::BadPartition(format!("{name} {p:?}"), degree));
            }
        }
        if extras.iter().any(|&k| k < 2) {
            return Err(HurwitzError::SmallExtra);
        }
        let excess = |v: &[usize]| v.iter().map(|x| x - 1).sum::<usize>();
        let lhs = excess(&zeros) + excess(&poles) + excess(&extras);
        let rhs = 2 * degree - 2;
        if degree == 0 || lhs != rhs {
            return Err(HurwitzError::RiemannHurwitz { lhs, rhs });
        }
        Ok(Self { degree, zeros: sorted_desc(zeros), poles: sorted_desc(poles), extras: sorted_desc(extras) })
    }

    /// Zero and pole multiplicities share no common factor, as they do for
    /// data built from a primitive residue vector.
    pub fn is_primitive(&self) -> bool {
        self.zeros.iter().chain(&self.poles).fold(0usize, |g, x| g.gcd(x)) == 1
    }
}

/// Positive entries become zeros, negative ones poles, and each part `l` of
/// `p` an extra critical point of multiplicity `l + 1`.
pub fn branch_data_from(b: &[i64], p: &Partition) -> Result<BranchData, HurwitzError> {
    if b.contains(&0) {
        return Err(HurwitzError::ZeroEntry);
    }
    let sum: i64 = b.iter().sum();
    if sum != 0 {
        return Err(HurwitzError::Unbalanced(sum));
    }
    let gcd = b.iter().fold(0i64, |g, x| g.gcd(x));
    if gcd != 1 {
        return Err(HurwitzError::NotCoprime(gcd));
    }
    let expected = b.len() as i64 - 2;
    if p.sum() as i64 != expected {
        return Err(HurwitzError::PartitionMismatch { sum: p.sum(), expected });
    }
    let zeros: Vec<usize> = b.iter().filter(|&&x| x > 0).map(|&x| x as usize).collect();
    let poles: Vec<usize> = b.iter().filter(|&&x| x < 0).map(|&x| x.unsigned_abs() as usize).collect();
    let degree = zeros.iter().sum();
    let extras = p.parts().iter().map(|&l| l as usize + 1).collect();
    BranchData::new(degree, zeros, poles, extras)
}

/// Existence criterion: every extra multiplicity is at most the degree.
/// Valid for primitive data; `d = 4`, `2+2`, `2+2`, `{3}` is a
/// non-primitive counterexample.
pub fn song_xu_decide(bd: &BranchData) -> bool {
    bd.extras.iter().all(|&k| k <= bd.degree)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationWitness {
    pub sigma_zero: Permutation,
    pub sigma_infinity: Permutation,
    pub taus: Vec<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Witness(PermutationWitness),
    /// The whole search space was exhausted.
    NoWitness,
    /// Degree above the cap; fall back to [`song_xu_decide`].
    CapExceeded,
}

pub const DEFAULT_CAP: usize = 7;

fn transitive(d: usize, generators: &[&Permutation]) -> bool {
    let mut comps = Components::new(d);
    for g in generators {
        comps.absorb(g);
    }
    comps.count() == 1
}

/// Checks cycle types, the product relation and transitivity directly.
pub fn verify_witness(bd: &BranchData, w: &PermutationWitness) -> bool {
    let d = bd.degree;
    let all: Vec<&Permutation> =
        std::iter::once(&w.sigma_zero).chain(std::iter::once(&w.sigma_infinity)).chain(&w.taus).collect();
    if all.iter().any(|p| p.degree() != d) || w.taus.len() != bd.extras.len() {
        return false;
    }
    if w.sigma_zero.cycle_type() != bd.zeros || w.sigma_infinity.cycle_type() != bd.poles {
        return false;
    }
    for (tau, &k) in w.taus.iter().zip(&bd.extras) {
        if tau.cycle_type() != single_cycle_type(d, k) {
            return false;
        }
    }
    let product = all.iter().fold(Permutation::identity(d), |acc, p| acc.compose(p));
    product.is_identity() && transitive(d, &all)
}

fn single_cycle_type(d: usize, k: usize) -> Vec<usize> {
    std::iter::once(k).chain(std::iter::repeat_n(1, d.saturating_sub(k))).collect()
}

/// Orbits of a growing set of generators, labelled by least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Components(Vec<u8>);

impl Components {
    fn new(d: usize) -> Self {
        Self((0..d as u8).collect())
    }

    fn find(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    fn absorb(&mut self, p: &Permutation) {
        for x in 0..p.degree() {
            let (a, b) = (self.find(x), self.find(p.apply(x)));
            if a != b {
                let (keep, drop) = (a.min(b) as u8, a.max(b) as u8);
                for label in self.0.iter_mut() {
                    if *label == drop {
                        *label = keep;
                    }
                }
            }
        }
    }

    fn count(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &l)| *i == l as usize).count()
    }
}

/// All permutations of `{0..d}` in lexicographic order.
fn all_permutations(d: usize) -> Vec<Permutation> {
    let mut current: Vec<u8> = (0..d as u8).collect();
    let mut out = vec![Permutation(current.clone())];
    while let Some(i) = (1..d).rev().find(|&i| current[i - 1] < current[i]) {
        let j = (i..d).rev().find(|&j| current[j] > current[i - 1]).expect("pivot");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(Permutation(current.clone()));
    }
    out
}

struct Search<'a> {
    d: usize,
    bd: &'a BranchData,
    classes: HashMap<Vec<usize>, Vec<Permutation>>,
    /// `remaining[i]`: total transposition length of `taus[i..]`.
    remaining: Vec<usize>,
    failed: HashSet<(usize, Permutation, Components)>,
}

impl<'a> Search<'a> {
    fn new(bd: &'a BranchData) -> Self {
        let d = bd.degree;
        let mut classes: HashMap<Vec<usize>, Vec<Permutation>> = HashMap::new();
        let wanted: HashSet<Vec<usize>> =
            std::iter::once(bd.poles.clone()).chain(bd.extras.iter().map(|&k| single_cycle_type(d, k))).collect();
        for p in all_permutations(d) {
            let t = p.cycle_type();
            if wanted.contains(&t) {
                classes.entry(t).or_default().push(p);
            }
        }
        let mut remaining = vec![0; bd.extras.len() + 1];
        for i in (0..bd.extras.len()).rev() {
            remaining[i] = remaining[i + 1] + bd.extras[i] - 1;
        }
        Self { d, bd, classes, remaining, failed: HashSet::new() }
    }

    fn class(&self, t: &[usize]) -> &[Permutation] {
        self.classes.get(t).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `product` is `s0 ∘ sinf ∘ t_1 ∘ ... ∘ t_level`; finds `taus[level..]`.
    fn extend(&mut self, level: usize, product: &Permutation, comps: &Components, taus: &mut Vec<Permutation>) -> bool {
        let budget = self.remaining[level];
        let needed = product.inverse();
        let length = self.d - needed.cycle_count();
        if length > budget || (budget - length) % 2 == 1 || comps.count() - 1 > budget {
            return false;
        }
        if level == self.bd.extras.len() {
            return needed.is_identity() && comps.count() == 1;
        }
        let tau_type = single_cycle_type(self.d, self.bd.extras[level]);
        if level + 1 == self.bd.extras.len() {
            // the last factor is forced
            if needed.cycle_type() != tau_type {
                return false;
            }
            let mut merged = comps.clone();
            merged.absorb(&needed);
            if merged.count() != 1 {
                return false;
            }
            taus.push(needed);
            return true;
        }
        let key = (level, product.clone(), comps.clone());
        if self.failed.contains(&key) {
            return false;
        }
        let candidates = self.class(&tau_type).to_vec();
        for tau in candidates {
            let mut next_comps = comps.clone();
            next_comps.absorb(&tau);
            let next = product.compose(&tau);
            taus.push(tau);
            if self.extend(level + 1, &next, &next_comps, taus) {
                return true;
            }
            taus.pop();
        }
        self.failed.insert(key);
        false
    }
}

/// Exhaustive search for a witness: `s0` is fixed to the canonical
/// representative of its class, `sinf` runs over its class in
/// lexicographic order, and the `t_i` are found depth first with pruning on
/// transposition length, parity and orbit count. Deterministic.
pub fn hurwitz_realizable_bruteforce(bd: &BranchData, cap: usize) -> SearchOutcome {
    if bd.degree > cap {
        return SearchOutcome::CapExceeded;
    }
    let d = bd.degree;
    if bd.extras.iter().any(|&k| k > d) {
        // no permutation of {1..d} has a cycle longer than d
        return SearchOutcome::NoWitness;
    }
    let sigma_zero = Permutation::canonical_of_type(&bd.zeros);
    let mut search = Search::new(bd);
    let mut base = Components::new(d);
    base.absorb(&sigma_zero);
    for sigma_infinity in search.class(&bd.poles).to_vec() {
        let mut comps = base.clone();
        comps.absorb(&sigma_infinity);
        let product = sigma_zero.compose(&sigma_infinity);
        let mut taus = Vec::new();
        if search.extend(0, &product, &comps, &mut taus) {
            let witness = PermutationWitness { sigma_zero, sigma_infinity, taus };
            debug_assert!(verify_witness(bd, &witness));
            return SearchOutcome::Witness(witness);
        }
    }
    SearchOutcome::NoWitness
}
