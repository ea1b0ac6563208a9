use coaxial_core::arrangements::{
    enumerate_general_arrangements, enumerate_reduced_arrangements, gauss_bonnet, mp_classify, odd_lattice_distance,
    residue_vector,
};
use coaxial_core::decider::{audit_partition, decide_admissible_with, decide_partition_admissible};
use coaxial_core::hurwitz::{branch_data_from, hurwitz_realizable_bruteforce, song_xu_decide, verify_witness};
use coaxial_core::realizer::{developing_map_description, q4_double_zero_exists, realize, verify_details};
use coaxial_core::{
    AngleMultiset, Arrangement, BasisContext, BigInt, BranchData, DecideOptions, ExactReal, MpClass, Partition,
    RealizeConfig, RealizeOutcome, Reason, ResidueVector, SearchOutcome,
};
use num_traits::Signed;
use serde::Serialize;
use serde_json::Value;

use crate::job::{
    payload_as, AnglesPayload, Command, HurwitzPayload, InputError, JobSpec, Options, PartitionPayload, Q4Payload,
    RealizePayload,
};
use crate::report::{
    ints, ArrangementDto, ArrangementsResult, AuditEntry, DecideResult, Decision, ExhaustiveDto, GeneralDto,
    HurwitzResult, Int, MpClassifyResult, PartitionResult, Q4Result, RealizeResult, Report, SearchLabel, VerifyResult,
};

struct Outcome<T> {
    verdict: Decision,
    summary: String,
    result: T,
    audit: Vec<AuditEntry>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Runs one job. The payload is validated before any computation.
pub fn run(job: &JobSpec) -> Result<Report, InputError> {
    macro_rules! finish {
        ($outcome:expr) => {{
            let o = $outcome;
            Report {
                command: job.command,
                verdict: o.verdict,
                summary: o.summary,
                input: job.payload.clone(),
                options: job.options.clone(),
                result: to_value(&o.result),
                audit: o.audit,
            }
        }};
    }
    let opts = &job.options;
    Ok(match job.command {
        Command::Decide => finish!(decide(&payload_as(&job.payload)?, opts)?),
        Command::Arrangements => finish!(arrangements(&payload_as(&job.payload)?, opts)?),
        Command::MpClassify => finish!(classify(&payload_as(&job.payload)?, opts)?),
        Command::Partition => finish!(partition(&payload_as(&job.payload)?)?),
        Command::Hurwitz => finish!(hurwitz(&payload_as(&job.payload)?, opts)?),
        Command::Realize => finish!(realize_job(&payload_as(&job.payload)?, opts)?),
        Command::Q4 => finish!(q4(&payload_as(&job.payload)?, opts)?),
        Command::Verify => finish!(verify(&payload_as(&job.payload)?)?),
    })
}

fn basis(opts: &Options) -> Result<BasisContext, InputError> {
    match &opts.basis {
        None => Ok(BasisContext::default()),
        Some(spec) => BasisContext::parse_assignments(spec).map_err(|e| InputError::new(format!("basis: {e}"))),
    }
}

/// Parses and validates an angle list, naming the offending entry.
pub fn parse_angles<S: AsRef<str>>(texts: &[S], ctx: BasisContext) -> Result<AngleMultiset, InputError> {
    AngleMultiset::parse(texts, ctx).map_err(|e| InputError::new(format!("angles: {e}")))
}

fn angle_multiset(p: &AnglesPayload, opts: &Options) -> Result<AngleMultiset, InputError> {
    let texts: Vec<String> = p.angles.iter().map(|s| s.text()).collect();
    parse_angles(&texts, basis(opts)?)
}

fn partition_of(parts: &[u64]) -> Result<Partition, InputError> {
    Partition::new(parts.to_vec()).map_err(|e| InputError::new(format!("partition: {e}")))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn decide_result(alpha: &AngleMultiset, exhaustive: bool) -> (DecideResult, Vec<AuditEntry>) {
    let v = decide_admissible_with(alpha, DecideOptions { exhaustive });
    let mut audit = Vec::new();
    if let Some(i) = &v.inequality {
        audit.push(AuditEntry::inequality("2 max_B alpha <= sum |b|", i));
    }
    if let Some(e) = &v.exhaustive {
        audit.push(AuditEntry::new(
            "exhaustive agrees with reduced",
            e.admissible_via_any,
            "=",
            v.admissible,
            e.agrees,
        ));
    }
    let result = DecideResult {
        angles: alpha.angles().iter().map(ToString::to_string).collect(),
        admissible: v.admissible,
        reason: v.reason,
        b: v.witness.as_ref().and_then(|w| w.b.as_deref()).map(ints),
        degree: v.degree.clone().map(Int),
        partition: v.partition(),
        witness: v.witness.as_ref().map(|w| ArrangementDto::new(&w.arrangement)),
        reduced_arrangements: v.reduced_arrangements,
        exhaustive: v.exhaustive.as_ref().map(ExhaustiveDto::new),
    };
    (result, audit)
}

fn decide_summary(r: &DecideResult) -> String {
    let verdict = if r.admissible { "admissible" } else { "not admissible" };
    let why = match r.reason {
        Reason::NoArrangement => "no reduced arrangement".to_string(),
        Reason::IncommensurableWitness => "incommensurable residues".to_string(),
        Reason::InequalityHolds | Reason::InequalityFails => {
            let b = r.b.as_deref().unwrap_or_default();
            let lhs = r.witness.as_ref().and_then(|w| w.integer_angles.iter().map(|x| &x.0).max().cloned());
            let lhs = lhs.map_or(BigInt::from(0), |m| m * 2);
            let rhs: BigInt = b.iter().map(|x| x.0.abs()).sum();
            let rel = if r.reason == Reason::InequalityHolds { "<=" } else { ">" };
            format!("b = ({}), {lhs} {rel} {rhs}", join(&b.iter().map(|x| &x.0).collect::<Vec<_>>()))
        }
    };
    format!("{{{}}}: {verdict} ({why})", r.angles.join(", "))
}

fn decide(p: &AnglesPayload, opts: &Options) -> Result<Outcome<DecideResult>, InputError> {
    let alpha = angle_multiset(p, opts)?;
    let (result, audit) = decide_result(&alpha, opts.exhaustive);
    Ok(Outcome { verdict: Decision::from_bool(result.admissible), summary: decide_summary(&result), result, audit })
}

fn arrangements(p: &AnglesPayload, opts: &Options) -> Result<Outcome<ArrangementsResult>, InputError> {
    let alpha = angle_multiset(p, opts)?;
    let reduced: Vec<ArrangementDto> = enumerate_reduced_arrangements(&alpha).iter().map(ArrangementDto::new).collect();
    let general = opts.exhaustive.then(|| {
        enumerate_general_arrangements(&alpha)
            .iter()
            .map(|g| {
                let c = g.residues().expect("general arrangements balance");
                GeneralDto::new(g, c.commensurability().integer_vector(), None, true)
            })
            .collect::<Vec<_>>()
    });
    let summary = format!("{} reduced arrangement(s)", reduced.len());
    let audit = reduced
        .iter()
        .map(|a| AuditEntry::new("q = m + k' + k''", a.q, "=", a.a.len() + a.k_prime + a.k_doubleprime, true))
        .collect();
    let result =
        ArrangementsResult { angles: alpha.angles().iter().map(ToString::to_string).collect(), reduced, general };
    Ok(Outcome { verdict: Decision::from_bool(!result.reduced.is_empty()), summary, result, audit })
}

fn classify(p: &AnglesPayload, opts: &Options) -> Result<Outcome<MpClassifyResult>, InputError> {
    let alpha = angle_multiset(p, opts)?;
    let class = mp_classify(&alpha);
    let gb = gauss_bonnet(&alpha);
    let gb_value = alpha.ctx().evaluate(&gb);
    let distance = odd_lattice_distance(&alpha);
    let mut audit = vec![
        AuditEntry::new("gauss-bonnet sum > 0", gb.to_string(), ">", 0, class != MpClass::GbFail),
        AuditEntry::new("odd lattice distance >= 1", distance, ">=", 1.0, class != MpClass::HFail),
    ];
    let decided = (class == MpClass::HEquality).then(|| decide_result(&alpha, opts.exhaustive));
    let (verdict, summary) = match (&class, &decided) {
        (MpClass::GbFail, _) => (Decision::No, "Gauss-Bonnet fails".to_string()),
        (MpClass::HFail, _) => (Decision::No, format!("odd lattice distance {distance} < 1")),
        (MpClass::HStrict, _) => (Decision::Yes, format!("odd lattice distance {distance} > 1")),
        (MpClass::HEquality, Some((r, _))) => {
            (Decision::from_bool(r.admissible), format!("equality case, co-axial: {}", decide_summary(r)))
        }
        (MpClass::HEquality, None) => unreachable!(),
    };
    let decide = decided.map(|(r, a)| {
        audit.extend(a);
        r
    });
    let result = MpClassifyResult {
        angles: alpha.angles().iter().map(ToString::to_string).collect(),
        class,
        gauss_bonnet: gb.to_string(),
        gauss_bonnet_value: gb_value,
        odd_lattice_distance: distance,
        decide,
    };
    Ok(Outcome { verdict, summary, result, audit })
}

fn residue_vector_of(texts: &[String]) -> Result<ResidueVector, InputError> {
    let entries = texts
        .iter()
        .enumerate()
        .map(|(i, t)| t.parse::<ExactReal>().map_err(|e| InputError::new(format!("residue #{i} ({t:?}): {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    ResidueVector::new(entries).map_err(|e| InputError::new(format!("residues: {e}")))
}

fn small_ints(b: &[BigInt]) -> Option<Vec<i64>> {
    b.iter().map(|x| i64::try_from(x).ok()).collect()
}

fn partition(p: &PartitionPayload) -> Result<Outcome<PartitionResult>, InputError> {
    let texts: Vec<String> = p.residues.iter().map(|s| s.text()).collect();
    let c = residue_vector_of(&texts)?;
    let part = partition_of(&p.partition)?;
    let audit_result = audit_partition(&c, &part).map_err(|e| InputError::new(e.to_string()))?;
    let branch_data = audit_result.b.as_deref().and_then(small_ints).and_then(|b| branch_data_from(&b, &part).ok());
    let song_xu = branch_data.as_ref().map(song_xu_decide);
    let mut audit = Vec::new();
    if let Some(i) = &audit_result.inequality {
        audit.push(AuditEntry::inequality("2 (1 + max l) <= sum |b|", i));
    }
    if let (Some(bd), Some(sx)) = (&branch_data, song_xu) {
        audit.push(AuditEntry::new(
            "max extras <= degree",
            bd.extras.first().copied().unwrap_or(0),
            "<=",
            bd.degree,
            sx,
        ));
    }
    let summary = match (&audit_result.b, &audit_result.inequality) {
        (Some(b), Some(i)) => format!(
            "partition {part}: {} (b = ({}), {} {} {})",
            if audit_result.admissible { "realizable" } else { "not realizable" },
            join(b),
            i.lhs,
            if i.holds() { "<=" } else { ">" },
            i.rhs
        ),
        _ => format!("partition {part}: realizable (incommensurable residues)"),
    };
    let result = PartitionResult {
        residues: texts,
        partition: part,
        admissible: audit_result.admissible,
        degree: audit_result.b.as_ref().map(|b| Int(b.iter().map(|x| x.abs()).sum::<BigInt>() / 2)),
        b: audit_result.b.as_deref().map(ints),
        branch_data,
        song_xu,
    };
    Ok(Outcome { verdict: Decision::from_bool(result.admissible), summary, result, audit })
}

fn branch_data_of(p: &HurwitzPayload) -> Result<(BranchData, Option<bool>), InputError> {
    let err = |e: coaxial_core::HurwitzError| InputError::new(format!("branch data: {e}"));
    match p {
        HurwitzPayload { b: Some(b), partition: Some(parts), degree: None, zeros: None, poles: None, extras: None } => {
            let part = partition_of(parts)?;
            let bd = branch_data_from(b, &part).map_err(err)?;
            let c = ResidueVector::new(b.iter().map(|&x| ExactReal::from(x)).collect())
                .map_err(|e| InputError::new(format!("b: {e}")))?;
            let admissible = decide_partition_admissible(&c, &part).map_err(|e| InputError::new(e.to_string()))?;
            Ok((bd, Some(admissible)))
        }
        HurwitzPayload {
            b: None,
            partition: None,
            degree: Some(d),
            zeros: Some(z),
            poles: Some(q),
            extras: Some(e),
        } => Ok((BranchData::new(*d, z.clone(), q.clone(), e.clone()).map_err(err)?, None)),
        _ => Err(InputError::new("give either `b` and `partition`, or `degree`, `zeros`, `poles` and `extras`")),
    }
}

fn hurwitz(p: &HurwitzPayload, opts: &Options) -> Result<Outcome<HurwitzResult>, InputError> {
    let (bd, partition_admissible) = branch_data_of(p)?;
    let song_xu = song_xu_decide(&bd);
    let outcome = hurwitz_realizable_bruteforce(&bd, opts.hurwitz_cap);
    let (search, witness, verdict, realizable, certified, basis) = match outcome {
        SearchOutcome::Witness(w) => {
            (SearchLabel::Witness, Some(w), Decision::Yes, true, true, "permutation witness".to_string())
        }
        SearchOutcome::NoWitness => {
            (SearchLabel::None, None, Decision::No, false, true, "exhaustive permutation search".to_string())
        }
        SearchOutcome::CapExceeded => (
            SearchLabel::CapExceeded,
            None,
            Decision::Undecided,
            song_xu,
            false,
            "by Song–Xu criterion (uncertified)".to_string(),
        ),
    };
    let max_extra = bd.extras.first().copied().unwrap_or(0);
    let mut audit = vec![
        AuditEntry::new(
            "riemann-hurwitz",
            bd.zeros.iter().chain(&bd.poles).chain(&bd.extras).map(|x| x - 1).sum::<usize>(),
            "=",
            2 * bd.degree - 2,
            true,
        ),
        AuditEntry::new("max extras <= degree", max_extra, "<=", bd.degree, song_xu),
    ];
    if let Some(pa) = partition_admissible {
        audit.push(AuditEntry::new("partition test agrees", pa, "=", realizable, pa == realizable));
    }
    let summary = format!(
        "degree {}, zeros {:?}, poles {:?}, extras {:?}: {} ({basis})",
        bd.degree,
        bd.zeros,
        bd.poles,
        bd.extras,
        if realizable { "realizable" } else { "not realizable" }
    );
    let result =
        HurwitzResult { branch_data: bd, realizable, song_xu, search, witness, certified, basis, partition_admissible };
    Ok(Outcome { verdict, summary, result, audit })
}

fn realize_config(p: &RealizePayload, opts: &Options) -> RealizeConfig {
    let defaults = RealizeConfig::default();
    RealizeConfig {
        restarts: p.restarts.unwrap_or(opts.restarts),
        max_iterations: p.max_iterations.unwrap_or(defaults.max_iterations),
        residual_tol: p.residual_tol.unwrap_or(opts.tol),
        separation: p.separation.unwrap_or(defaults.separation),
        cluster_tol: p.cluster_tol.unwrap_or(defaults.cluster_tol),
        rng_seed: p.seed.unwrap_or(opts.seed),
    }
}

/// The residues read as exact decimals, when they balance exactly.
fn theory(residues: &[f64], part: &Partition) -> Option<bool> {
    let texts: Vec<String> = residues.iter().map(|x| x.to_string()).collect();
    let c = residue_vector_of(&texts).ok()?;
    decide_partition_admissible(&c, part).ok()
}

fn realize_result(p: &RealizePayload, opts: &Options) -> Result<(RealizeResult, Vec<AuditEntry>), InputError> {
    let part = partition_of(&p.partition)?;
    let cfg = realize_config(p, opts);
    let outcome = realize(&p.residues, &part, &cfg).map_err(|e| InputError::new(format!("realize: {e}")))?;
    let mut audit = Vec::new();
    let configuration = match outcome {
        RealizeOutcome::Found(c) => Some(c),
        RealizeOutcome::NotFound { .. } => None,
    };
    if let Some(c) = &configuration {
        audit.push(AuditEntry::new("verified residual < tol", c.residual, "<", cfg.residual_tol, true));
        let v = verify_details(&c.residues, &c.positions, &part, &cfg);
        audit.push(AuditEntry::new("min separation > delta", v.min_separation, ">", cfg.separation, v.passed));
    }
    let result = RealizeResult {
        residues: p.residues.clone(),
        developing_map: configuration.as_ref().map(developing_map_description),
        found: configuration.is_some(),
        configuration,
        partition: part.clone(),
        seed: cfg.rng_seed,
        restarts: cfg.restarts,
        cluster_tol: cfg.cluster_tol,
        theory_admissible: theory(&p.residues, &part),
        note: None,
    };
    let note = (!result.found).then(|| "numerical failure, not a certificate".to_string());
    Ok((RealizeResult { note, ..result }, audit))
}

fn realize_job(p: &RealizePayload, opts: &Options) -> Result<Outcome<RealizeResult>, InputError> {
    let (result, audit) = realize_result(p, opts)?;
    let (verdict, summary) = match &result.configuration {
        Some(c) => (
            Decision::Yes,
            format!(
                "partition {} realized, verified residual {:.3e} (restart {})",
                result.partition,
                c.residual,
                c.restart.unwrap_or(0)
            ),
        ),
        None => (
            Decision::Undecided,
            format!(
                "partition {} not found after {} restarts (numerical failure, not a certificate)",
                result.partition, result.restarts
            ),
        ),
    };
    Ok(Outcome { verdict, summary, result, audit })
}

fn q4_realize_payload(p: &Q4Payload) -> RealizePayload {
    RealizePayload {
        residues: vec![p.a, p.b, -p.c, -p.d],
        partition: vec![2],
        seed: None,
        restarts: None,
        max_iterations: None,
        residual_tol: None,
        separation: None,
        cluster_tol: None,
    }
}

fn q4(p: &Q4Payload, opts: &Options) -> Result<Outcome<Q4Result>, InputError> {
    let exists = q4_double_zero_exists(p.a, p.b, p.c, p.d).map_err(|e| InputError::new(format!("q4: {e}")))?;
    let mut audit = vec![AuditEntry::new("max(a, b) > min(c, d)", p.a.max(p.b), ">", p.c.min(p.d), exists)];
    let realization = if p.realize {
        let (r, a) = realize_result(&q4_realize_payload(p), opts)?;
        audit.extend(a);
        audit.push(AuditEntry::new("numerics agree", r.found, "=", exists, r.found == exists));
        Some(r)
    } else {
        None
    };
    let summary = format!(
        "residues ({}, {}, -{}, -{}): {}",
        p.a,
        p.b,
        p.c,
        p.d,
        if exists { "a double zero exists" } else { "no double zero" }
    );
    let result = Q4Result { residues: [p.a, p.b, p.c, p.d], double_zero_exists: exists, realization };
    Ok(Outcome { verdict: Decision::from_bool(exists), summary, result, audit })
}

fn check_arrangement(w: &ArrangementDto, input: &AnglesPayload, opts: &Options) -> Result<(), String> {
    let a = w.a.iter().map(|t| t.parse::<ExactReal>().map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>()?;
    let b: Vec<BigInt> = w.integer_angles.iter().map(|x| x.0.clone()).collect();
    let arr = Arrangement::new(a.clone(), w.epsilon.clone(), b.clone()).map_err(|e| e.to_string())?;
    let ctx = basis(opts).map_err(|e| e.message)?;
    let all: Vec<ExactReal> = a.into_iter().chain(b.iter().cloned().map(ExactReal::from)).collect();
    let rebuilt = AngleMultiset::new(all, ctx).map_err(|e| e.to_string())?;
    let given = angle_multiset(input, opts).map_err(|e| e.message)?;
    if rebuilt.angles() != given.angles() {
        return Err("arrangement angles differ from the input multiset".into());
    }
    let residues = residue_vector(&arr).map_err(|e| e.to_string())?;
    let b_vec = residues.commensurability().integer_vector().map(ints);
    if b_vec != w.b {
        return Err("integer residue vector does not match".into());
    }
    Ok(())
}

fn witness_check(report: &Report) -> Result<Option<Result<(), String>>, InputError> {
    let bad = |e: serde_json::Error| InputError::new(format!("report result: {e}"));
    Ok(match report.command {
        Command::Decide => {
            let r: DecideResult = serde_json::from_value(report.result.clone()).map_err(bad)?;
            let input: AnglesPayload = payload_as(&report.input)?;
            r.witness.map(|w| check_arrangement(&w, &input, &report.options))
        }
        Command::MpClassify => {
            let r: MpClassifyResult = serde_json::from_value(report.result.clone()).map_err(bad)?;
            let input: AnglesPayload = payload_as(&report.input)?;
            r.decide.and_then(|d| d.witness).map(|w| check_arrangement(&w, &input, &report.options))
        }
        Command::Hurwitz => {
            let r: HurwitzResult = serde_json::from_value(report.result.clone()).map_err(bad)?;
            r.witness.map(|w| {
                verify_witness(&r.branch_data, &w).then_some(()).ok_or_else(|| "permutation witness invalid".into())
            })
        }
        Command::Realize => {
            let r: RealizeResult = serde_json::from_value(report.result.clone()).map_err(bad)?;
            let input: RealizePayload = payload_as(&report.input)?;
            let cfg = realize_config(&input, &report.options);
            r.configuration.map(|c| check_configuration(&c, &r.partition, &cfg))
        }
        Command::Q4 => {
            let r: Q4Result = serde_json::from_value(report.result.clone()).map_err(bad)?;
            let input: Q4Payload = payload_as(&report.input)?;
            let cfg = realize_config(&q4_realize_payload(&input), &report.options);
            r.realization
                .and_then(|re| re.configuration)
                .map(|c| check_configuration(&c, &Partition::new(vec![2]).expect("valid"), &cfg))
        }
        Command::Arrangements | Command::Partition | Command::Verify => None,
    })
}

fn check_configuration(c: &coaxial_core::Configuration, p: &Partition, cfg: &RealizeConfig) -> Result<(), String> {
    let v = verify_details(&c.residues, &c.positions, p, cfg);
    if v.passed {
        Ok(())
    } else {
        Err(format!(
            "configuration fails verification (residual {:e}, separation {:e}, multiplicities match: {})",
            v.residual, v.min_separation, v.multiplicities_match
        ))
    }
}

/// Re-runs the job behind `report`, compares results, and checks any
/// witness independently of the code that produced it.
fn verify(report: &Report) -> Result<Outcome<VerifyResult>, InputError> {
    let job = JobSpec { command: report.command, payload: report.input.clone(), options: report.options.clone() };
    let rerun = run(&job)?;
    let reproduced = rerun.result == report.result && rerun.verdict == report.verdict;
    let mut failures = Vec::new();
    if !reproduced {
        failures.push("re-running the job gave a different result".to_string());
    }
    let witness = witness_check(report)?;
    if let Some(Err(e)) = &witness {
        failures.push(e.clone());
    }
    let witness_valid = witness.map(|w| w.is_ok());
    let audit = vec![
        AuditEntry::new("reproduced", reproduced, "=", true, reproduced),
        AuditEntry::new("witness valid", witness_valid, "=", true, witness_valid != Some(false)),
    ];
    let ok = failures.is_empty();
    let summary = if ok {
        format!("{} report verified", report.command)
    } else {
        format!("{} report failed verification: {}", report.command, failures.join("; "))
    };
    let result = VerifyResult { command: report.command, reproduced, witness_valid, failures };
    Ok(Outcome { verdict: Decision::from_bool(ok), summary, result, audit })
}
