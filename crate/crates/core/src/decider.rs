//! Admissibility of angle multisets and of zero-multiplicity partitions.
//!
//! A multiset is admissible iff it has a reduced arrangement and, when the
//! arrangement's residues are proportional to a coprime integer vector `b`,
//! twice the largest integer angle is at most `sum |b_j|`. The partition
//! test is the same inequality phrased with multiplicities `l_j = alpha_j - 1`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangements::{
    enumerate_general_arrangements, enumerate_reduced_arrangements, reduce_arrangement, residue_vector, AngleMultiset,
    Arrangement, ArrangementError, GeneralArrangement, ResidueVector,
};
use crate::exactreal::Commensurability;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecideError {
    #[error("partition parts must be positive")]
    ZeroPart,
    #[error("partition sums to {sum}, expected q - 2 = {expected}")]
    PartitionMismatch { sum: u64, expected: i64 },
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// Multiset of positive integers, stored largest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self, DecideError> {
        if parts.contains(&0) {
            return Err(DecideError::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Largest part, 0 for the empty partition.
    pub fn max(&self) -> u64 {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl TryFrom<Vec<u64>> for Partition {
    type Error = DecideError;
    fn try_from(parts: Vec<u64>) -> Result<Self, Self::Error> {
        Self::new(parts)
    }
}

impl From<Partition> for Vec<u64> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions_of(n: u64) -> Vec<Partition> {
    fn walk(remaining: u64, cap: u64, current: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: current.clone() });
            return;
        }
        for part in (1..=cap.min(remaining)).rev() {
            current.push(part);
            walk(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    walk(n, n, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    NoArrangement,
    IncommensurableWitness,
    InequalityHolds,
    InequalityFails,
}

/// Both sides of `2 * max_B alpha <= sum |b_j|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityAudit {
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl InequalityAudit {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub arrangement: Arrangement,
    pub residues: ResidueVector,
    pub b: Option<Vec<BigInt>>,
}

/// One non-reduced (or reduced) arrangement examined in exhaustive mode.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralCheck {
    pub arrangement: GeneralArrangement,
    pub b: Option<Vec<BigInt>>,
    pub inequality: Option<InequalityAudit>,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveCheck {
    pub arrangements: Vec<GeneralCheck>,
    /// Some arrangement, reduced or not, passes its own test.
    pub admissible_via_any: bool,
    /// Every arrangement reduces to one of the enumerated reduced ones.
    pub reductions_consistent: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub admissible: bool,
    pub reason: Reason,
    pub witness: Option<Witness>,
    /// `sum |b_j| / 2` when the residues are commensurable.
    pub degree: Option<BigInt>,
    pub inequality: Option<InequalityAudit>,
    pub reduced_arrangements: usize,
    pub exhaustive: Option<ExhaustiveCheck>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DecideOptions {
    /// Also examine non-reduced arrangements and compare verdicts.
    pub exhaustive: bool,
}

fn abs_sum(b: &[BigInt]) -> BigInt {
    b.iter().map(Signed::abs).sum()
}

/// `2 * max_B alpha`, with the maximum over an empty `B` taken as 0.
fn twice_max_integer_angle(b: &[BigInt]) -> BigInt {
    b.iter().max().map(|m| m * 2).unwrap_or_else(BigInt::zero)
}

/// Tests one arrangement's residues: incommensurable passes outright,
/// otherwise the inequality decides.
fn check_residues(c: &ResidueVector, integer_angles: &[BigInt]) -> (Option<Vec<BigInt>>, Option<InequalityAudit>) {
    match c.commensurability() {
        Commensurability::Incommensurable => (None, None),
        Commensurability::Commensurable { b, .. } => {
            let audit = InequalityAudit { lhs: twice_max_integer_angle(integer_angles), rhs: abs_sum(b) };
            // the partition form 2 (1 + max l) must agree with 2 max alpha
            let parts: Vec<BigInt> = integer_angles.iter().map(|a| a - BigInt::from(1)).collect();
            let proh_lhs = parts.iter().max().map(|l| (l + BigInt::from(1)) * 2).unwrap_or_else(BigInt::zero);
            assert_eq!(proh_lhs, audit.lhs, "angle and multiplicity forms of the inequality disagree");
            (Some(b.clone()), Some(audit))
        }
    }
}

pub fn decide_admissible(alpha: &AngleMultiset) -> Verdict {
    decide_admissible_with(alpha, DecideOptions::default())
}

pub fn decide_admissible_with(alpha: &AngleMultiset, options: DecideOptions) -> Verdict {
    let reduced = enumerate_reduced_arrangements(alpha);
    let exhaustive = options.exhaustive.then(|| exhaustive_check(alpha, &reduced));
    let finish = |mut v: Verdict| {
        if let Some(check) = exhaustive {
            let agrees = check.admissible_via_any == v.admissible && check.reductions_consistent;
            v.exhaustive = Some(ExhaustiveCheck { agrees, ..check });
        }
        v
    };

    let Some(first) = reduced.first() else {
        return finish(Verdict {
            admissible: false,
            reason: Reason::NoArrangement,
            witness: None,
            degree: None,
            inequality: None,
            reduced_arrangements: 0,
            exhaustive: None,
        });
    };

    let residues = residue_vector(first).expect("reduced arrangements balance");
    let (b, inequality) = check_residues(&residues, first.b());

    // q and sum |b| do not depend on the choice of reduced arrangement
    for other in &reduced[1..] {
        assert_eq!(other.q(), first.q(), "q differs between reduced arrangements");
        let c = residue_vector(other).expect("reduced arrangements balance");
        let other_b = c.commensurability().integer_vector().map(abs_sum);
        assert_eq!(other_b, b.as_deref().map(abs_sum), "sum |b| differs between reduced arrangements");
    }

    let (admissible, reason) = match &inequality {
        None => (true, Reason::IncommensurableWitness),
        Some(audit) if audit.holds() => (true, Reason::InequalityHolds),
        Some(_) => (false, Reason::InequalityFails),
    };
    let degree = b.as_deref().map(|b| abs_sum(b) / 2);
    finish(Verdict {
        admissible,
        reason,
        witness: Some(Witness { arrangement: first.clone(), residues, b }),
        degree,
        inequality,
        reduced_arrangements: reduced.len(),
        exhaustive: None,
    })
}

fn exhaustive_check(alpha: &AngleMultiset, reduced: &[Arrangement]) -> ExhaustiveCheck {
    let mut arrangements = Vec::new();
    let mut reductions_consistent = true;
    for g in enumerate_general_arrangements(alpha) {
        match reduce_arrangement(&g) {
            Ok(r) if reduced.contains(&r) => {}
            _ => reductions_consistent = false,
        }
        let c = g.residues().expect("general arrangements balance");
        let (b, inequality) = check_residues(&c, &g.b);
        let admissible = inequality.as_ref().is_none_or(InequalityAudit::holds);
        arrangements.push(GeneralCheck { arrangement: g, b, inequality, admissible });
    }
    ExhaustiveCheck {
        admissible_via_any: arrangements.iter().any(|g| g.admissible),
        arrangements,
        reductions_consistent,
        agrees: false,
    }
}

/// Both sides of `2 (1 + max l_j) <= sum |b_j|` for a residue vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionAudit {
    pub admissible: bool,
    pub b: Option<Vec<BigInt>>,
    pub inequality: Option<InequalityAudit>,
}

pub fn audit_partition(c: &ResidueVector, p: &Partition) -> Result<PartitionAudit, DecideError> {
    let expected = c.len() as i64 - 2;
    if p.sum() as i64 != expected {
        return Err(DecideError::PartitionMismatch { sum: p.sum(), expected });
    }
    Ok(match c.commensurability() {
        Commensurability::Incommensurable => PartitionAudit { admissible: true, b: None, inequality: None },
        Commensurability::Commensurable { b, .. } => {
            let inequality = InequalityAudit { lhs: BigInt::from(2 * (1 + p.max())), rhs: abs_sum(b) };
            PartitionAudit { admissible: inequality.holds(), b: Some(b.clone()), inequality: Some(inequality) }
        }
    })
}

/// Whether residues `c` admit zeros of `sum c_j / (z - z_j)` with
/// multiplicities `p`.
pub fn decide_partition_admissible(c: &ResidueVector, p: &Partition) -> Result<bool, DecideError> {
    audit_partition(c, p).map(|a| a.admissible)
}

/// Zero multiplicities `alpha_j - 1` of the integer angles of `arr`.
pub fn angles_to_partition(arr: &Arrangement) -> Result<Partition, DecideError> {
    let parts = arr
        .b()
        .iter()
        .map(|a| (a - BigInt::from(1)).to_u64().ok_or(DecideError::ZeroPart))
        .collect::<Result<Vec<_>, _>>()?;
    let p = Partition::new(parts)?;
    let expected = arr.q() as i64 - 2;
    if p.sum() as i64 != expected {
        return Err(DecideError::PartitionMismatch { sum: p.sum(), expected });
    }
    Ok(p)
}

/// Coprime integer vectors `b` (first entry positive, entries nonzero,
/// summing to zero) of length `q = sum P + 2` that fail the partition
/// inequality. Only `sum |b_j| < 2 (1 + max l)` can fail, so the search is
/// finite.
pub fn exceptional_vectors(p: &Partition) -> Vec<Vec<i64>> {
    let q = p.sum() as usize + 2;
    let bound = 2 * (1 + p.max() as i64);
    fn walk(q: usize, budget: i64, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if current.len() == q {
            let sum: i64 = current.iter().sum();
            let gcd = current.iter().fold(0i64, |g, x| g.gcd(x));
            if sum == 0 && gcd == 1 {
                out.push(current.clone());
            }
            return;
        }
        let slots_left = (q - current.len()) as i64;
        // every remaining entry costs at least 1
        let room = budget - (slots_left - 1);
        for magnitude in 1..=room {
            let signs: &[i64] = if current.is_empty() { &[1] } else { &[1, -1] };
            for &s in signs {
                current.push(s * magnitude);
                walk(q, budget - magnitude, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(q, bound - 1, &mut Vec::new(), &mut out);
    out
}

impl Verdict {
    /// The partition that pairs with the witness residues, if any.
    pub fn partition(&self) -> Option<Partition> {
        self.witness.as_ref().and_then(|w| angles_to_partition(&w.arrangement).ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::{BasisContext, ExactReal};
    use num_rational::BigRational;

    fn ms(v: &[&str]) -> AngleMultiset {
        AngleMultiset::parse(v, BasisContext::default()).unwrap()
    }

    fn rv(v: &[&str]) -> ResidueVector {
        ResidueVector::new(v.iter().map(|s| s.parse::<ExactReal>().unwrap()).collect()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn part(v: &[u64]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn four_equal_angles_rejected() {
        let v = decide_admissible(&ms(&["3/2", "3/2", "3/2", "3/2", "3"]));
        assert!(!v.admissible);
        assert_eq!(v.reason, Reason::InequalityFails);
        assert_eq!(v.witness.unwrap().b.unwrap(), ints(&[1, 1, -1, -1]));
        let audit = v.inequality.unwrap();
        assert_eq!((audit.lhs, audit.rhs), (BigInt::from(6), BigInt::from(4)));
        assert_eq!(v.degree, Some(BigInt::from(2)));
    }

    #[test]
    fn doubled_pair_accepted() {
        let v = decide_admissible(&ms(&["t1", "t1", "2t1", "2t1", "3"]));
        assert!(v.admissible);
        assert_eq!(v.reason, Reason::InequalityHolds);
        assert_eq!(v.witness.as_ref().unwrap().b.as_ref().unwrap(), &ints(&[1, -1, 2, -2]));
        let audit = v.inequality.as_ref().unwrap();
        assert_eq!((audit.lhs.clone(), audit.rhs.clone()), (BigInt::from(6), BigInt::from(6)));
        assert_eq!(v.partition().unwrap(), part(&[2]));
    }

    #[test]
    fn football_is_admissible() {
        let v = decide_admissible(&ms(&["t1", "t1"]));
        assert!(v.admissible);
        assert_eq!(v.reason, Reason::InequalityHolds);
        assert_eq!(v.partition().unwrap(), part(&[]));
        let audit = v.inequality.unwrap();
        assert_eq!((audit.lhs, audit.rhs), (BigInt::zero(), BigInt::from(2)));
    }

    #[test]
    fn shifted_pair_has_no_arrangement() {
        let v = decide_admissible(&ms(&["t1", "1 + t1", "3"]));
        assert!(!v.admissible);
        assert_eq!(v.reason, Reason::NoArrangement);
        assert!(v.witness.is_none());
    }

    #[test]
    fn incommensurable_arrangement_is_admissible() {
        // t1 + t2 - (t1 + t2) = 0 with two integer angles absorbing q - 2 = 1 zero
        let v = decide_admissible(&ms(&["t1", "t2", "t1 + t2", "2"]));
        assert!(v.admissible);
        assert_eq!(v.reason, Reason::IncommensurableWitness);
        assert!(v.degree.is_none());
    }

    #[test]
    fn partition_examples() {
        assert!(!decide_partition_admissible(&rv(&["1", "1", "-1", "-1"]), &part(&[2])).unwrap());
        assert!(decide_partition_admissible(&rv(&["1", "-1", "2", "-2"]), &part(&[2])).unwrap());
        assert!(decide_partition_admissible(&rv(&["1", "t1", "-1-t1"]), &part(&[1])).unwrap());
        let audit = audit_partition(&rv(&["2", "2", "-1", "-3"]), &part(&[2])).unwrap();
        assert!(audit.admissible);
        let ineq = audit.inequality.unwrap();
        assert_eq!((ineq.lhs, ineq.rhs), (BigInt::from(6), BigInt::from(8)));
    }

    #[test]
    fn partition_precondition() {
        assert_eq!(
            decide_partition_admissible(&rv(&["1", "-1", "2", "-2"]), &part(&[1])),
            Err(DecideError::PartitionMismatch { sum: 1, expected: 2 })
        );
        assert_eq!(Partition::new(vec![2, 0]), Err(DecideError::ZeroPart));
    }

    #[test]
    fn angles_to_partition_examples() {
        // B = {3}: k'' = 3 - 1 + 2 = 4, so q = 4
        let arr = Arrangement::new(vec![], vec![], ints(&[3])).unwrap();
        assert_eq!(angles_to_partition(&arr).unwrap(), part(&[2]));

        let v = decide_admissible(&ms(&["3/2", "3/2", "3/2", "3/2", "3"]));
        assert_eq!(angles_to_partition(&v.witness.unwrap().arrangement).unwrap(), part(&[2]));

        let v = decide_admissible(&ms(&["t1", "t1", "t1", "t1", "2", "2"]));
        let w = v.witness.unwrap();
        assert_eq!(w.arrangement.q(), 4);
        assert_eq!(angles_to_partition(&w.arrangement).unwrap(), part(&[1, 1]));
    }

    #[test]
    fn partitions_enumerated() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert!(partitions_of(6).iter().all(|p| p.sum() == 6));
    }

    #[test]
    fn exceptional_set_for_double_zero() {
        let list = exceptional_vectors(&part(&[2]));
        assert_eq!(list, vec![vec![1, 1, -1, -1], vec![1, -1, 1, -1], vec![1, -1, -1, 1]]);
        assert!(exceptional_vectors(&part(&[])).is_empty());
    }

    #[test]
    fn exhaustive_mode_agrees() {
        for angles in [
            vec!["3/2", "3/2", "3/2", "3/2", "3"],
            vec!["5/2", "5/2", "5", "5", "3"],
            vec!["3/2", "3/2", "3", "2"],
            vec!["2", "2", "3"],
        ] {
            let v = decide_admissible_with(&ms(&angles), DecideOptions { exhaustive: true });
            let check = v.exhaustive.as_ref().unwrap();
            assert!(check.agrees, "{angles:?}: {check:?}");
        }
    }

    #[test]
    fn scaling_matches() {
        let c = rv(&["2", "-2", "1", "-1"]);
        for l in [-1i64, 2, 10] {
            let scaled = c.scale(&BigRational::from_integer(l.into())).unwrap();
            assert_eq!(
                decide_partition_admissible(&scaled, &part(&[2])).unwrap(),
                decide_partition_admissible(&c, &part(&[2])).unwrap()
            );
        }
    }
}
