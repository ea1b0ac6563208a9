//! Machine-readable reports.

use coaxial_core::arrangements::{Arrangement, GeneralArrangement};
use coaxial_core::decider::{ExhaustiveCheck, GeneralCheck, InequalityAudit};
use coaxial_core::realizer::{Configuration, DevelopingMap};
use coaxial_core::{BigInt, BranchData, MpClass, Partition, PermutationWitness, Reason, Sign};
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::job::{Command, Options};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Yes,
    No,
    Undecided,
}

impl Decision {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Yes => crate::EXIT_YES,
            Self::No => crate::EXIT_NO,
            Self::Undecided => crate::EXIT_UNDECIDED,
        }
    }

    pub fn from_bool(yes: bool) -> Self {
        if yes {
            Self::Yes
        } else {
            Self::No
        }
    }
}

/// One inequality or identity with both sides evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditEntry {
    pub name: String,
    pub lhs: Value,
    pub relation: String,
    pub rhs: Value,
    pub holds: bool,
}

impl AuditEntry {
    pub fn new(name: &str, lhs: impl Serialize, relation: &str, rhs: impl Serialize, holds: bool) -> Self {
        Self {
            name: name.to_string(),
            lhs: serde_json::to_value(lhs).expect("serializable"),
            relation: relation.to_string(),
            rhs: serde_json::to_value(rhs).expect("serializable"),
            holds,
        }
    }

    pub fn inequality(name: &str, audit: &InequalityAudit) -> Self {
        Self::new(name, Int(audit.lhs.clone()), "<=", Int(audit.rhs.clone()), audit.holds())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: Command,
    pub verdict: Decision,
    pub summary: String,
    /// The payload this report answers, as given.
    pub input: Value,
    pub options: Options,
    pub result: Value,
    pub audit: Vec<AuditEntry>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

/// An integer written as a JSON number when it fits in `i64`, else as a
/// decimal string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => serializer.serialize_i64(v),
            None => serializer.collect_str(&self.0),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match Value::deserialize(deserializer)? {
            Value::Number(n) => {
                n.as_i64().map(|v| Int(BigInt::from(v))).ok_or_else(|| de::Error::custom("not an integer"))
            }
            Value::String(s) => s.parse().map(Int).map_err(de::Error::custom),
            other => Err(de::Error::custom(format!("expected an integer, got {other}"))),
        }
    }
}

pub fn ints(v: &[BigInt]) -> Vec<Int> {
    v.iter().cloned().map(Int).collect()
}

fn texts<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementDto {
    /// Non-integer angles carrying signs.
    pub a: Vec<String>,
    pub epsilon: Vec<Sign>,
    /// Integer angles.
    pub integer_angles: Vec<Int>,
    pub k_prime: usize,
    pub k_doubleprime: usize,
    pub q: usize,
    pub residues: Vec<String>,
    /// Coprime integer vector proportional to the residues, if any.
    pub b: Option<Vec<Int>>,
}

impl ArrangementDto {
    pub fn new(arr: &Arrangement) -> Self {
        let residues = coaxial_core::arrangements::residue_vector(arr).expect("reduced arrangements balance");
        Self {
            a: texts(arr.a()),
            epsilon: arr.epsilon().to_vec(),
            integer_angles: ints(arr.b()),
            k_prime: arr.k_prime(),
            k_doubleprime: arr.k_doubleprime(),
            q: arr.q(),
            residues: texts(residues.entries()),
            b: residues.commensurability().integer_vector().map(ints),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralDto {
    pub a: Vec<String>,
    pub epsilon: Vec<Sign>,
    pub integer_angles: Vec<Int>,
    pub delta: Vec<Sign>,
    pub reduced: bool,
    pub b: Option<Vec<Int>>,
    /// `[2 max_B alpha, sum |b|]`.
    pub inequality: Option<[Int; 2]>,
    pub admissible: bool,
}

impl GeneralDto {
    pub fn new(
        g: &GeneralArrangement,
        b: Option<&[BigInt]>,
        inequality: Option<&InequalityAudit>,
        admissible: bool,
    ) -> Self {
        Self {
            a: texts(&g.a),
            epsilon: g.epsilon.clone(),
            integer_angles: ints(&g.b),
            delta: g.delta.clone(),
            reduced: g.reduced(),
            b: b.map(ints),
            inequality: inequality.map(|i| [Int(i.lhs.clone()), Int(i.rhs.clone())]),
            admissible,
        }
    }

    pub fn from_check(c: &GeneralCheck) -> Self {
        Self::new(&c.arrangement, c.b.as_deref(), c.inequality.as_ref(), c.admissible)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustiveDto {
    pub arrangements: Vec<GeneralDto>,
    pub admissible_via_any: bool,
    pub reductions_consistent: bool,
    pub agrees: bool,
}

impl ExhaustiveDto {
    pub fn new(e: &ExhaustiveCheck) -> Self {
        Self {
            arrangements: e.arrangements.iter().map(GeneralDto::from_check).collect(),
            admissible_via_any: e.admissible_via_any,
            reductions_consistent: e.reductions_consistent,
            agrees: e.agrees,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecideResult {
    /// Angles in canonical order.
    pub angles: Vec<String>,
    pub admissible: bool,
    pub reason: Reason,
    pub b: Option<Vec<Int>>,
    /// `sum |b| / 2`, the degree of the associated rational function.
    pub degree: Option<Int>,
    pub partition: Option<Partition>,
    pub witness: Option<ArrangementDto>,
    pub reduced_arrangements: usize,
    pub exhaustive: Option<ExhaustiveDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementsResult {
    pub angles: Vec<String>,
    pub reduced: Vec<ArrangementDto>,
    pub general: Option<Vec<GeneralDto>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MpClassifyResult {
    pub angles: Vec<String>,
    pub class: MpClass,
    pub gauss_bonnet: String,
    pub gauss_bonnet_value: f64,
    pub odd_lattice_distance: f64,
    /// Present in the equality case, where every metric is co-axial.
    pub decide: Option<DecideResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionResult {
    pub residues: Vec<String>,
    pub partition: Partition,
    pub admissible: bool,
    pub b: Option<Vec<Int>>,
    pub degree: Option<Int>,
    pub branch_data: Option<BranchData>,
    pub song_xu: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchLabel {
    Witness,
    None,
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HurwitzResult {
    pub branch_data: BranchData,
    pub realizable: bool,
    pub song_xu: bool,
    pub search: SearchLabel,
    pub witness: Option<PermutationWitness>,
    pub certified: bool,
    pub basis: String,
    /// The partition inequality, when the data came from residues.
    pub partition_admissible: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizeResult {
    pub residues: Vec<f64>,
    pub partition: Partition,
    pub found: bool,
    pub configuration: Option<Configuration>,
    pub developing_map: Option<DevelopingMap>,
    pub seed: u64,
    pub restarts: usize,
    pub cluster_tol: f64,
    /// The exact partition test on the residues read as decimals.
    pub theory_admissible: Option<bool>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Q4Result {
    pub residues: [f64; 4],
    pub double_zero_exists: bool,
    pub realization: Option<RealizeResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyResult {
    pub command: Command,
    /// Re-running the job gave an identical result and verdict.
    pub reproduced: bool,
    /// Independent check of the report's witness, if it has one.
    pub witness_valid: Option<bool>,
    pub failures: Vec<String>,
}
