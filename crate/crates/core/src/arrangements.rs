//! Angle multisets, sign arrangements and the Mondello–Panov classifiers.
//!
//! An arrangement splits a multiset into angles `A` that become residues
//! `±alpha` of the logarithmic derivative of the developing map, and integer
//! angles `B` that become its zeros. Reduced arrangements put every
//! non-integer angle, and nothing else, into `A`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactreal::{commensurability_class, BasisContext, Commensurability, ExactError, ExactReal};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArrangementError {
    #[error("angle multiset is empty")]
    Empty,
    #[error("angle #{index} ({angle}) is not positive")]
    NonPositive { index: usize, angle: String },
    #[error("angle #{index} equals 1, which is not a cone point")]
    AngleIsOne { index: usize },
    #[error("invalid arrangement: {0}")]
    Invalid(String),
    #[error("residues sum to {0}, not 0")]
    NonZeroSum(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn apply(self, x: &ExactReal) -> ExactReal {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => -x,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Canonical ordering key: integer part first, then raw coefficients.
fn canonical_cmp(x: &ExactReal, y: &ExactReal, ctx: &BasisContext) -> Ordering {
    let floor = |v: &ExactReal| match v.as_rational() {
        Some(q) => q.floor().to_integer(),
        None => BigInt::from(ctx.evaluate(v).floor() as i64),
    };
    floor(x).cmp(&floor(y)).then_with(|| {
        let len = x.coeffs().len().max(y.coeffs().len());
        (0..len).map(|i| x.coeff(i).cmp(&y.coeff(i))).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    })
}

/// Unordered multiset of cone angles, measured in turns.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleMultiset {
    angles: Vec<ExactReal>,
    ctx: BasisContext,
}

impl AngleMultiset {
    /// Validates `alpha_j > 0`, `alpha_j != 1` and stores the angles in
    /// canonical order.
    pub fn new(angles: Vec<ExactReal>, ctx: BasisContext) -> Result<Self, ArrangementError> {
        if angles.is_empty() {
            return Err(ArrangementError::Empty);
        }
        for (index, a) in angles.iter().enumerate() {
            if a == &ExactReal::one() {
                return Err(ArrangementError::AngleIsOne { index });
            }
            if ctx.signum(a) != Ordering::Greater {
                return Err(ArrangementError::NonPositive { index, angle: a.to_string() });
            }
        }
        let mut angles = angles;
        angles.sort_by(|x, y| canonical_cmp(x, y, &ctx));
        Ok(Self { angles, ctx })
    }

    /// Parses each entry with the exact-real grammar, naming the offending
    /// entry on failure.
    pub fn parse<S: AsRef<str>>(texts: &[S], ctx: BasisContext) -> Result<Self, ArrangementError> {
        let angles = texts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                t.as_ref()
                    .parse::<ExactReal>()
                    .map_err(|e| ArrangementError::Invalid(format!("angle #{i} ({:?}): {e}", t.as_ref())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(angles, ctx)
    }

    pub fn angles(&self) -> &[ExactReal] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn ctx(&self) -> &BasisContext {
        &self.ctx
    }

    /// `(non-integer angles, integer angles)`, both in canonical order.
    pub fn split_integer_noninteger(&self) -> (Vec<ExactReal>, Vec<ExactReal>) {
        self.angles.iter().cloned().partition(|a| !a.is_integer())
    }
}

/// Exact residues of a logarithmic derivative; they sum to zero.
#[derive(Debug, Clone)]
pub struct ResidueVector {
    entries: Vec<ExactReal>,
    class: OnceLock<Commensurability>,
}

impl PartialEq for ResidueVector {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl ResidueVector {
    pub fn new(entries: Vec<ExactReal>) -> Result<Self, ArrangementError> {
        if entries.is_empty() {
            return Err(ArrangementError::Exact(ExactError::Empty));
        }
        if let Some(i) = entries.iter().position(ExactReal::is_zero) {
            return Err(ArrangementError::Exact(ExactError::ZeroEntry(i)));
        }
        let sum: ExactReal = entries.iter().sum();
        if !sum.is_zero() {
            return Err(ArrangementError::NonZeroSum(sum.to_string()));
        }
        Ok(Self { entries, class: OnceLock::new() })
    }

    pub fn entries(&self) -> &[ExactReal] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn commensurability(&self) -> &Commensurability {
        self.class.get_or_init(|| commensurability_class(&self.entries).expect("validated nonempty, nonzero entries"))
    }

    pub fn scale(&self, factor: &BigRational) -> Result<Self, ArrangementError> {
        Self::new(self.entries.iter().map(|c| c.scale(factor)).collect())
    }
}

/// A partition `A ∪ B` with signs on `A`, summarized by `k'` and `k''`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    a: Vec<ExactReal>,
    epsilon: Vec<Sign>,
    b: Vec<BigInt>,
    k_prime: usize,
    k_doubleprime: usize,
}

impl Arrangement {
    /// Builds an arrangement and checks `sum eps_j a_j = k' >= 0` and
    /// `k'' = sum B - n - k' + 2 >= 0`, even.
    pub fn new(a: Vec<ExactReal>, epsilon: Vec<Sign>, b: Vec<BigInt>) -> Result<Self, ArrangementError> {
        if a.len() != epsilon.len() {
            return Err(ArrangementError::Invalid("sign vector length differs from A".into()));
        }
        let signed: ExactReal = a.iter().zip(&epsilon).map(|(x, s)| s.apply(x)).sum();
        let k_prime = signed
            .to_integer()
            .filter(|k| !k.is_negative())
            .ok_or_else(|| ArrangementError::Invalid(format!("signed sum {signed} is not a non-negative integer")))?;
        let n = BigInt::from(a.len() + b.len());
        let k_doubleprime: BigInt = b.iter().sum::<BigInt>() - n - &k_prime + BigInt::from(2);
        if k_doubleprime.is_negative() || k_doubleprime.is_odd() {
            return Err(ArrangementError::Invalid(format!("k'' = {k_doubleprime} is not non-negative and even")));
        }
        let to_count =
            |k: BigInt| k.to_usize().ok_or_else(|| ArrangementError::Invalid(format!("count {k} too large")));
        Ok(Self { a, epsilon, b, k_prime: to_count(k_prime)?, k_doubleprime: to_count(k_doubleprime)? })
    }

    pub fn a(&self) -> &[ExactReal] {
        &self.a
    }

    pub fn epsilon(&self) -> &[Sign] {
        &self.epsilon
    }

    /// Integer angles.
    pub fn b(&self) -> &[BigInt] {
        &self.b
    }

    pub fn k_prime(&self) -> usize {
        self.k_prime
    }

    pub fn k_doubleprime(&self) -> usize {
        self.k_doubleprime
    }

    /// Number of residues, `m + k' + k''`.
    pub fn q(&self) -> usize {
        self.a.len() + self.k_prime + self.k_doubleprime
    }

    pub fn reduced(&self) -> bool {
        self.a.iter().all(|x| !x.is_integer())
    }

    /// Unit residues: `k'` copies of `-1`, then `k''` alternating `+1, -1`.
    pub fn deltas(&self) -> Vec<Sign> {
        std::iter::repeat_n(Sign::Minus, self.k_prime)
            .chain((0..self.k_doubleprime).map(|i| if i % 2 == 0 { Sign::Plus } else { Sign::Minus }))
            .collect()
    }

    pub fn to_general(&self) -> GeneralArrangement {
        GeneralArrangement { a: self.a.clone(), epsilon: self.epsilon.clone(), b: self.b.clone(), delta: self.deltas() }
    }
}

/// An arrangement with explicit unit residues `delta`; `A` may hold integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralArrangement {
    pub a: Vec<ExactReal>,
    pub epsilon: Vec<Sign>,
    pub b: Vec<BigInt>,
    pub delta: Vec<Sign>,
}

impl GeneralArrangement {
    pub fn k(&self) -> usize {
        self.delta.len()
    }

    fn signed_sum(&self) -> ExactReal {
        self.a.iter().zip(&self.epsilon).map(|(x, s)| s.apply(x)).sum()
    }

    /// Residue theorem: signed angles plus unit residues sum to zero.
    pub fn residues_balance(&self) -> bool {
        let units: i64 = self.delta.iter().map(|s| s.as_i64()).sum();
        (&self.signed_sum() + &ExactReal::from_integer(units)).is_zero()
    }

    /// Zero count: `sum_B (alpha - 1) = m + k - 2`.
    pub fn zero_count_matches(&self) -> bool {
        let lhs: BigInt = self.b.iter().map(|x| x - 1).sum();
        lhs == BigInt::from(self.a.len() + self.k()) - 2
    }

    pub fn check(&self) -> Result<(), ArrangementError> {
        if self.a.len() != self.epsilon.len() {
            return Err(ArrangementError::Invalid("sign vector length differs from A".into()));
        }
        if !self.residues_balance() {
            return Err(ArrangementError::Invalid("residues do not sum to zero".into()));
        }
        if !self.zero_count_matches() {
            return Err(ArrangementError::Invalid("integer angles do not account for q - 2 zeros".into()));
        }
        Ok(())
    }

    pub fn residues(&self) -> Result<ResidueVector, ArrangementError> {
        let entries = self
            .a
            .iter()
            .zip(&self.epsilon)
            .map(|(x, s)| s.apply(x))
            .chain(self.delta.iter().map(|s| ExactReal::from_integer(s.as_i64())))
            .collect();
        ResidueVector::new(entries)
    }

    pub fn reduced(&self) -> bool {
        self.a.iter().all(|x| !x.is_integer())
    }
}

/// Moves integer angles from `A` to `B` one at a time. Each removed angle
/// `alpha_m` with sign `eps_m` is replaced by `alpha_m` unit residues equal
/// to `eps_m`, which keeps the residue sum and the zero count intact. A
/// negative remaining signed sum is fixed by flipping every sign.
pub fn reduce_arrangement(g: &GeneralArrangement) -> Result<Arrangement, ArrangementError> {
    g.check()?;
    let mut g = g.clone();
    while let Some(pos) = g.a.iter().rposition(ExactReal::is_integer) {
        let angle = g.a.remove(pos).to_integer().expect("integer");
        let sign = g.epsilon.remove(pos);
        let copies =
            angle.to_usize().ok_or_else(|| ArrangementError::Invalid(format!("angle {angle} too large to expand")))?;
        g.delta.extend(std::iter::repeat_n(sign, copies));
        g.b.push(angle);
        debug_assert!(g.residues_balance() && g.zero_count_matches());
    }
    let mut epsilon = g.epsilon;
    if g.a
        .iter()
        .zip(&epsilon)
        .map(|(x, s)| s.apply(x))
        .sum::<ExactReal>()
        .to_integer()
        .is_some_and(|k| k.is_negative())
    {
        epsilon.iter_mut().for_each(|s| *s = s.flip());
    }
    g.b.sort();
    Arrangement::new(g.a, epsilon, g.b)
}

/// Residues `(eps_1 a_1, ..., eps_m a_m, -1 x k', +1, -1, ... x k'')`.
pub fn residue_vector(arr: &Arrangement) -> Result<ResidueVector, ArrangementError> {
    arr.to_general().residues()
}

/// Groups equal angles: `(angle, multiplicity)`, preserving order.
fn blocks(angles: &[ExactReal]) -> Vec<(ExactReal, usize)> {
    let mut out: Vec<(ExactReal, usize)> = Vec::new();
    for a in angles {
        match out.last_mut() {
            Some((x, t)) if x == a => *t += 1,
            _ => out.push((a.clone(), 1)),
        }
    }
    out
}

/// Contribution of a block with `plus` positive signs out of `t`.
fn block_sum(angle: &ExactReal, t: usize, plus: usize) -> ExactReal {
    let coefficient = BigRational::from_integer(BigInt::from(2 * plus as i64 - t as i64));
    angle.scale(&coefficient)
}

fn expand_signs(blocks: &[(ExactReal, usize)], choice: &[usize]) -> (Vec<ExactReal>, Vec<Sign>) {
    let mut a = Vec::new();
    let mut eps = Vec::new();
    for ((angle, t), &plus) in blocks.iter().zip(choice) {
        for i in 0..*t {
            a.push(angle.clone());
            eps.push(if i < plus { Sign::Plus } else { Sign::Minus });
        }
    }
    (a, eps)
}

/// How signs are searched in [`enumerate_reduced_arrangements_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignSearch {
    /// Direct enumeration unless the number of sign patterns exceeds 2^24.
    Auto,
    Direct,
    MeetInTheMiddle,
}

const DIRECT_LIMIT: u128 = 1 << 24;

pub fn enumerate_reduced_arrangements(alpha: &AngleMultiset) -> Vec<Arrangement> {
    enumerate_reduced_arrangements_with(alpha, SignSearch::Auto)
}

/// All reduced arrangements, one per sign pattern up to permutations of
/// equal angles, in canonical order (more `+` signs in earlier blocks first).
pub fn enumerate_reduced_arrangements_with(alpha: &AngleMultiset, search: SignSearch) -> Vec<Arrangement> {
    let (non_integers, integers) = alpha.split_integer_noninteger();
    let b: Vec<BigInt> = integers.iter().map(|x| x.to_integer().expect("integer")).collect();
    let blocks = blocks(&non_integers);
    let patterns: u128 =
        blocks.iter().map(|(_, t)| *t as u128 + 1).try_fold(1u128, |acc, x| acc.checked_mul(x)).unwrap_or(u128::MAX);
    let use_mitm = match search {
        SignSearch::Auto => patterns > DIRECT_LIMIT,
        SignSearch::Direct => false,
        SignSearch::MeetInTheMiddle => true,
    };
    let choices = if use_mitm { integral_choices_mitm(&blocks) } else { integral_choices_direct(&blocks) };
    choices
        .into_iter()
        .filter_map(|choice| {
            let (a, eps) = expand_signs(&blocks, &choice);
            Arrangement::new(a, eps, b.clone()).ok()
        })
        .collect()
}

/// Sign choices whose signed sum is a non-negative integer.
fn integral_choices_direct(blocks: &[(ExactReal, usize)]) -> Vec<Vec<usize>> {
    fn walk(blocks: &[(ExactReal, usize)], sum: &ExactReal, choice: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(((angle, t), rest)) = blocks.split_first() else {
            if sum.to_integer().is_some_and(|k| !k.is_negative()) {
                out.push(choice.clone());
            }
            return;
        };
        for plus in (0..=*t).rev() {
            choice.push(plus);
            walk(rest, &(sum + &block_sum(angle, *t, plus)), choice, out);
            choice.pop();
        }
    }
    let mut out = Vec::new();
    walk(blocks, &ExactReal::zero(), &mut Vec::new(), &mut out);
    out
}

/// Sums `x` and `y` are integral together iff their transcendental parts
/// cancel and their rational parts have complementary fractional parts.
fn integrality_key(x: &ExactReal) -> (Vec<BigRational>, BigRational) {
    let rational = x.coeff(0);
    let frac = &rational - rational.floor();
    (x.coeffs().iter().skip(1).cloned().collect(), frac)
}

fn integral_choices_mitm(blocks: &[(ExactReal, usize)]) -> Vec<Vec<usize>> {
    fn all_sums(blocks: &[(ExactReal, usize)]) -> Vec<(Vec<usize>, ExactReal)> {
        let mut acc = vec![(Vec::new(), ExactReal::zero())];
        for (angle, t) in blocks {
            let mut next = Vec::with_capacity(acc.len() * (t + 1));
            for (choice, sum) in &acc {
                for plus in (0..=*t).rev() {
                    let mut c = choice.clone();
                    c.push(plus);
                    next.push((c, sum + &block_sum(angle, *t, plus)));
                }
            }
            acc = next;
        }
        acc
    }
    let (left_blocks, right_blocks) = blocks.split_at(blocks.len() / 2);
    let left = all_sums(left_blocks);
    let right = all_sums(right_blocks);
    let mut index: HashMap<(Vec<BigRational>, BigRational), Vec<usize>> = HashMap::new();
    for (i, (_, sum)) in left.iter().enumerate() {
        index.entry(integrality_key(&-sum)).or_default().push(i);
    }
    let mut out = Vec::new();
    for (rc, rs) in &right {
        let Some(matches) = index.get(&integrality_key(rs)) else { continue };
        for &i in matches {
            let (lc, ls) = &left[i];
            if (ls + rs).to_integer().is_some_and(|k| !k.is_negative()) {
                out.push(lc.iter().chain(rc).copied().collect::<Vec<_>>());
            }
        }
    }
    out.sort_by(|x, y| y.cmp(x));
    out
}

/// Every arrangement, reduced or not: integer angles may also sit in `A`.
/// Unit residues are listed as all `-1` first, then all `+1`.
pub fn enumerate_general_arrangements(alpha: &AngleMultiset) -> Vec<GeneralArrangement> {
    struct Slot {
        angle: ExactReal,
        t: usize,
        integer: Option<BigInt>,
    }
    let slots: Vec<Slot> =
        blocks(alpha.angles()).into_iter().map(|(angle, t)| Slot { integer: angle.to_integer(), angle, t }).collect();

    // per slot: (count placed in A, count of + among them)
    fn walk(slots: &[Slot], picked: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((slot, rest)) = slots.split_first() else {
            out.push(picked.clone());
            return;
        };
        let in_a_range: Vec<usize> = if slot.integer.is_some() { (0..=slot.t).rev().collect() } else { vec![slot.t] };
        for in_a in in_a_range {
            for plus in (0..=in_a).rev() {
                picked.push((in_a, plus));
                walk(rest, picked, out);
                picked.pop();
            }
        }
    }
    let mut choices = Vec::new();
    walk(&slots, &mut Vec::new(), &mut choices);

    let mut out = Vec::new();
    for choice in choices {
        let mut a = Vec::new();
        let mut eps = Vec::new();
        let mut b = Vec::new();
        for (slot, &(in_a, plus)) in slots.iter().zip(&choice) {
            for i in 0..in_a {
                a.push(slot.angle.clone());
                eps.push(if i < plus { Sign::Plus } else { Sign::Minus });
            }
            if let Some(value) = &slot.integer {
                b.extend(std::iter::repeat_n(value.clone(), slot.t - in_a));
            }
        }
        let k: BigInt = b.iter().map(|x| x - 1).sum::<BigInt>() - BigInt::from(a.len()) + BigInt::from(2);
        if k.is_negative() {
            continue;
        }
        let signed: ExactReal = a.iter().zip(&eps).map(|(x, s)| s.apply(x)).sum();
        let Some(s) = signed.to_integer() else { continue };
        if s.abs() > k || (&k - &s).is_odd() {
            continue;
        }
        let minus: BigInt = (&k + &s) / BigInt::from(2);
        let plus: BigInt = (&k - &s) / BigInt::from(2);
        let (Some(minus), Some(plus)) = (minus.to_usize(), plus.to_usize()) else {
            continue;
        };
        let delta = std::iter::repeat_n(Sign::Minus, minus).chain(std::iter::repeat_n(Sign::Plus, plus)).collect();
        out.push(GeneralArrangement { a, epsilon: eps, b, delta });
    }
    out
}

/// `sum (alpha_j - 1) + 2`; positivity is the Gauss–Bonnet condition.
pub fn gauss_bonnet(alpha: &AngleMultiset) -> ExactReal {
    let n = ExactReal::from_integer(alpha.len() as i64);
    &(&alpha.angles().iter().sum::<ExactReal>() - &n) + &ExactReal::from_integer(2)
}

/// `l1` distance from `alpha - 1` to the integer vectors with odd
/// coordinate sum.
pub fn odd_lattice_distance(alpha: &AngleMultiset) -> f64 {
    let shifted: Vec<f64> = alpha.angles().iter().map(|a| alpha.ctx().evaluate(a) - 1.0).collect();
    odd_lattice_distance_of(&shifted)
}

pub fn odd_lattice_distance_of(x: &[f64]) -> f64 {
    let mut parity = 0i64;
    let mut base = 0.0;
    let mut switch_cost = f64::INFINITY;
    for &v in x {
        let nearest = v.round();
        let r = (v - nearest).abs();
        parity += nearest as i64;
        base += r;
        switch_cost = switch_cost.min(1.0 - 2.0 * r);
    }
    if parity.rem_euclid(2) == 1 {
        base
    } else {
        base + switch_cost
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MpClass {
    /// Gauss–Bonnet sum is not positive.
    GbFail,
    /// Odd-lattice distance below 1.
    HFail,
    /// Distance above 1: a metric exists by the Mondello–Panov theorem.
    HStrict,
    /// Distance exactly 1: every metric is co-axial.
    HEquality,
}

pub const H_EQUALITY_TOLERANCE: f64 = 1e-9;

pub fn mp_classify(alpha: &AngleMultiset) -> MpClass {
    if alpha.ctx().signum(&gauss_bonnet(alpha)) != Ordering::Greater {
        return MpClass::GbFail;
    }
    let d = odd_lattice_distance(alpha);
    if (d - 1.0).abs() <= H_EQUALITY_TOLERANCE {
        MpClass::HEquality
    } else if d < 1.0 {
        MpClass::HFail
    } else {
        MpClass::HStrict
    }
}

/// Zero multiplicities `alpha - 1` of the integer angles, largest first.
pub fn integer_angle_parts(arr: &Arrangement) -> Vec<BigInt> {
    let mut parts: Vec<BigInt> = arr.b().iter().map(|x| x - 1).collect();
    parts.sort_by(|x, y| y.cmp(x));
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(v: &[&str]) -> AngleMultiset {
        AngleMultiset::parse(v, BasisContext::default()).unwrap()
    }

    fn er(s: &str) -> ExactReal {
        s.parse().unwrap()
    }

    fn signs(s: &str) -> Vec<Sign> {
        s.chars().map(|c| if c == '+' { Sign::Plus } else { Sign::Minus }).collect()
    }

    #[test]
    fn multiset_validation() {
        assert!(AngleMultiset::parse(&["3/2", "3"], BasisContext::default()).is_ok());
        assert_eq!(
            AngleMultiset::parse(&["1"], BasisContext::default()),
            Err(ArrangementError::AngleIsOne { index: 0 })
        );
        assert!(matches!(
            AngleMultiset::parse(&["t1", "-2"], BasisContext::default()),
            Err(ArrangementError::NonPositive { index: 1, .. })
        ));
        assert!(matches!(
            AngleMultiset::parse(&["1 - t1 - t1"], BasisContext::default()),
            Err(ArrangementError::NonPositive { .. })
        ));
        assert_eq!(AngleMultiset::new(vec![], BasisContext::default()), Err(ArrangementError::Empty));
        assert!(matches!(
            AngleMultiset::parse(&["3/2", "q"], BasisContext::default()),
            Err(ArrangementError::Invalid(msg)) if msg.contains("#1")
        ));
    }

    #[test]
    fn split() {
        let (a, b) = ms(&["3/2", "3", "3/2", "3/2", "3/2"]).split_integer_noninteger();
        assert_eq!(a, vec![er("3/2"); 4]);
        assert_eq!(b, vec![er("3")]);

        let (a, b) = ms(&["2", "3"]).split_integer_noninteger();
        assert!(a.is_empty());
        assert_eq!(b.len(), 2);

        let (a, b) = ms(&["3", "2t1", "t1"]).split_integer_noninteger();
        assert_eq!(a, vec![er("t1"), er("2t1")]);
        assert_eq!(b, vec![er("3")]);
    }

    #[test]
    fn four_equal_angles_arrangements() {
        let arrs = enumerate_reduced_arrangements(&ms(&["3/2", "3/2", "3/2", "3/2", "3"]));
        assert_eq!(arrs.len(), 1);
        let arr = &arrs[0];
        assert_eq!(arr.epsilon(), signs("++--").as_slice());
        assert_eq!((arr.k_prime(), arr.k_doubleprime()), (0, 0));
        assert_eq!(arr.q(), 4);
        let c = residue_vector(arr).unwrap();
        assert_eq!(c.entries(), &[er("3/2"), er("3/2"), er("-3/2"), er("-3/2")]);
    }

    #[test]
    fn doubled_pair_arrangements() {
        let arrs = enumerate_reduced_arrangements(&ms(&["t1", "t1", "2t1", "2t1", "3"]));
        assert_eq!(arrs.len(), 1);
        assert_eq!(arrs[0].epsilon(), signs("+-+-").as_slice());
        assert_eq!((arrs[0].k_prime(), arrs[0].k_doubleprime()), (0, 0));
        let c = residue_vector(&arrs[0]).unwrap();
        assert_eq!(c.entries(), &[er("t1"), er("-t1"), er("2t1"), er("-2t1")]);
    }

    #[test]
    fn thirds_have_no_arrangement() {
        // (+,+): k'=1, k''=-1; (+,-),(-,+),(-,-): sum not a non-negative integer
        assert!(enumerate_reduced_arrangements(&ms(&["1/3", "2/3"])).is_empty());
    }

    #[test]
    fn arrangement_needs_balanced_residues() {
        // m = 0 forces k' = 0
        let arr = Arrangement::new(vec![], vec![], vec![BigInt::from(2), BigInt::from(2)]).unwrap();
        assert_eq!((arr.k_prime(), arr.k_doubleprime()), (0, 4));
        let c = residue_vector(&arr).unwrap();
        assert_eq!(c.entries(), &[er("1"), er("-1"), er("1"), er("-1")]);
        assert!(Arrangement::new(vec![er("3/2")], vec![Sign::Plus], vec![BigInt::from(2)]).is_err());
    }

    #[test]
    fn reduce_example() {
        let g = GeneralArrangement {
            a: vec![er("3/2"), er("3/2"), er("3")],
            epsilon: signs("+-+"),
            b: vec![BigInt::from(5)],
            delta: signs("---"),
        };
        g.check().unwrap();
        let r = reduce_arrangement(&g).unwrap();
        assert!(r.reduced());
        assert_eq!(r.a(), &[er("3/2"), er("3/2")]);
        assert_eq!(r.b(), &[BigInt::from(3), BigInt::from(5)]);
        assert_eq!(r.k_prime() + r.k_doubleprime(), 6);
        let general = r.to_general();
        assert!(general.residues_balance() && general.zero_count_matches());
    }

    #[test]
    fn reduce_identity_and_all_integer() {
        let arrs = enumerate_reduced_arrangements(&ms(&["t1", "t1", "2t1", "2t1", "3"]));
        let r = reduce_arrangement(&arrs[0].to_general()).unwrap();
        assert_eq!(r, arrs[0]);

        // {2, 2}: A = {2} with sign +, one unit residue -1... then reduced A is empty
        let g =
            GeneralArrangement { a: vec![er("2")], epsilon: signs("+"), b: vec![BigInt::from(2)], delta: signs("--") };
        g.check().unwrap();
        let r = reduce_arrangement(&g).unwrap();
        assert!(r.a().is_empty());
        assert_eq!(r.b().len(), 2);
    }

    #[test]
    fn gauss_bonnet_values() {
        assert_eq!(gauss_bonnet(&ms(&["1/2", "1/2"])), er("1"));
        assert_eq!(gauss_bonnet(&ms(&["3/2", "3/2", "3/2", "3/2", "3"])), er("6"));
        // (-3/4) + (-3/4) + 2
        assert_eq!(gauss_bonnet(&ms(&["1/4", "1/4"])), er("1/2"));
        assert_eq!(gauss_bonnet(&ms(&["1/4", "1/4", "1/4"])), er("-1/4"));
    }

    #[test]
    fn odd_lattice_examples() {
        assert!((odd_lattice_distance(&ms(&["3/2", "3/2"])) - 1.0).abs() < 1e-12);
        assert!((odd_lattice_distance(&ms(&["2", "2"])) - 1.0).abs() < 1e-12);
        assert!(odd_lattice_distance(&ms(&["2", "3"])).abs() < 1e-12);
        assert!((odd_lattice_distance(&ms(&["3/2", "3/2", "3/2", "3/2", "3"])) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn classification() {
        assert_eq!(mp_classify(&ms(&["3/2", "3/2", "3/2", "3/2", "3"])), MpClass::HStrict);
        assert_eq!(mp_classify(&ms(&["1/4", "1/4", "1/4"])), MpClass::GbFail);
        // equal-angle football
        assert_eq!(mp_classify(&ms(&["1/4", "1/4"])), MpClass::HEquality);
        // Gauss-Bonnet sum is exactly 0 here, even though the distance is 2
        assert_eq!(mp_classify(&ms(&["1/2", "1/2", "1/2", "1/2"])), MpClass::GbFail);
        assert!((odd_lattice_distance(&ms(&["1/2", "1/2", "1/2", "1/2"])) - 2.0).abs() < 1e-12);
        assert_eq!(mp_classify(&ms(&["3/2", "3/2"])), MpClass::HEquality);
        assert_eq!(mp_classify(&ms(&["11/10", "2"])), MpClass::HFail);
    }

    #[test]
    fn mitm_matches_direct() {
        for angles in [
            vec!["1/2", "1/2", "3/2", "5/2", "7/2", "1/3", "2/3", "4/3", "3", "5"],
            vec!["t1", "t1", "2t1", "2t1", "3"],
            vec!["1/2", "1/4", "3/4", "5/4", "1/2", "t1", "t1", "2"],
            vec!["3"],
        ] {
            let alpha = ms(&angles);
            assert_eq!(
                enumerate_reduced_arrangements_with(&alpha, SignSearch::Direct),
                enumerate_reduced_arrangements_with(&alpha, SignSearch::MeetInTheMiddle),
                "{angles:?}"
            );
        }
    }

    #[test]
    fn general_enumeration_contains_reduced() {
        let alpha = ms(&["5/2", "5/2", "5", "5", "3"]);
        let general = enumerate_general_arrangements(&alpha);
        let reduced = enumerate_reduced_arrangements(&alpha);
        for g in &general {
            g.check().unwrap();
            let r = reduce_arrangement(g).unwrap();
            assert!(reduced.contains(&r), "{g:?} reduced to {r:?}");
        }
        assert!(general.iter().any(|g| g.a.len() == 4 && g.delta.is_empty()));
    }
}
