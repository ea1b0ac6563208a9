//! Numerical charge configurations: positions `z_j` for residues `c_j` such
//! that `g(z) = sum c_j / (z - z_j)` has zeros of prescribed multiplicities.
//!
//! The search matches the coefficients of `N(z) = sum_j c_j prod_{i != j} (z - z_i)`
//! against `lead(N) * prod_i (z - w_i)^l_i` by damped Gauss–Newton
//! iterations in complex arithmetic, with the gauge `z_1 = 0`, `z_2 = 1`.
//! Candidates are accepted only after an independent check: roots of `N`
//! from companion-matrix eigenvalues, clustered and compared with the
//! partition.

use nalgebra::{Cholesky, DMatrix, DVector, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decider::Partition;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizerError {
    #[error("need at least two residues, got {0}")]
    TooFew(usize),
    #[error("residue {0} is zero")]
    ZeroResidue(usize),
    #[error("residues sum to {sum}, not 0")]
    Unbalanced { sum: f64 },
    #[error("{residues} residues but {positions} positions")]
    LengthMismatch { residues: usize, positions: usize },
    #[error("positions {0} and {1} coincide")]
    Coincident(usize, usize),
    #[error("partition sums to {sum}, expected q - 2 = {expected}")]
    PartitionMismatch { sum: u64, expected: usize },
    #[error("{0} must be positive and finite")]
    BadTolerance(&'static str),
    #[error("residues must be positive, got {0:?}")]
    NonPositive([f64; 4]),
    #[error("a + b = {0} differs from c + d = {1}")]
    Q4Unbalanced(f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizeConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub residual_tol: f64,
    pub separation: f64,
    pub cluster_tol: f64,
    pub rng_seed: u64,
}

impl Default for RealizeConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iterations: 500,
            residual_tol: 1e-10,
            separation: 1e-6,
            cluster_tol: 1e-6,
            rng_seed: 0,
        }
    }
}

impl RealizeConfig {
    pub fn validate(&self) -> Result<(), RealizerError> {
        for (name, v) in
            [("residual_tol", self.residual_tol), ("separation", self.separation), ("cluster_tol", self.cluster_tol)]
        {
            if !(v > 0.0 && v.is_finite()) {
                return Err(RealizerError::BadTolerance(name));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroSite {
    pub position: Complex64,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub residues: Vec<f64>,
    pub positions: Vec<Complex64>,
    pub zero_sites: Vec<ZeroSite>,
    /// Verified relative residual `|N - lead(N) M| / |N|`.
    pub residual: f64,
    /// Amount subtracted from each residue to make them sum to zero.
    pub projection_shift: f64,
    pub restart: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RealizeOutcome {
    Found(Configuration),
    /// Every restart failed. A numerical failure, not a certificate.
    NotFound {
        restarts: usize,
    },
}

impl RealizeOutcome {
    pub fn configuration(&self) -> Option<&Configuration> {
        match self {
            Self::Found(cfg) => Some(cfg),
            Self::NotFound { .. } => None,
        }
    }
}

type Poly = Vec<Complex64>;

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `prod (z - roots_i)`, ascending coefficients.
fn poly_from_roots<'a>(roots: impl IntoIterator<Item = &'a Complex64>) -> Poly {
    roots.into_iter().fold(vec![Complex64::new(1.0, 0.0)], |acc, r| poly_mul(&acc, &[-r, Complex64::new(1.0, 0.0)]))
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn residue_scale(c: &[f64]) -> f64 {
    c.iter().map(|x| x.abs()).sum()
}

fn check_distinct(z: &[Complex64]) -> Result<(), RealizerError> {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if z[i] == z[j] {
                return Err(RealizerError::Coincident(i, j));
            }
        }
    }
    Ok(())
}

/// `N(z) = sum_j c_j prod_{i != j} (z - z_i)` with its vanishing top
/// coefficient removed: ascending coefficients of degree `0..=q-2`.
pub fn numerator_polynomial(c: &[f64], z: &[Complex64]) -> Result<Poly, RealizerError> {
    if c.len() != z.len() {
        return Err(RealizerError::LengthMismatch { residues: c.len(), positions: z.len() });
    }
    if c.len() < 2 {
        return Err(RealizerError::TooFew(c.len()));
    }
    let sum: f64 = c.iter().sum();
    if sum.abs() >= 1e-9 * residue_scale(c) {
        return Err(RealizerError::Unbalanced { sum });
    }
    check_distinct(z)?;
    Ok(expand_numerator(c, z))
}

fn expand_numerator(c: &[f64], z: &[Complex64]) -> Poly {
    let mut full = vec![Complex64::new(0.0, 0.0); c.len()];
    for (j, &cj) in c.iter().enumerate() {
        let others = z.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, zi)| zi);
        for (k, coef) in poly_from_roots(others).into_iter().enumerate() {
            full[k] += cj * coef;
        }
    }
    full.pop();
    full
}

/// `dN/dz_m = -sum_{j != m} c_j prod_{i not in {j, m}} (z - z_i)`.
fn numerator_derivative(c: &[f64], z: &[Complex64], m: usize) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); c.len() - 1];
    for (j, &cj) in c.iter().enumerate().filter(|&(j, _)| j != m) {
        let others = z.iter().enumerate().filter(|&(i, _)| i != j && i != m).map(|(_, zi)| zi);
        for (k, coef) in poly_from_roots(others).into_iter().enumerate() {
            out[k] -= cj * coef;
        }
    }
    out
}

fn zero_polynomial(w: &[Complex64], ells: &[u64]) -> Poly {
    let roots: Vec<Complex64> = w.iter().zip(ells).flat_map(|(wi, &l)| std::iter::repeat_n(*wi, l as usize)).collect();
    poly_from_roots(&roots)
}

/// Unknowns `x = (z_3, .., z_q, w_1, .., w_s)`; residuals
/// `N_k - N_{q-2} M_k` for `k < q - 2`.
struct System<'a> {
    c: &'a [f64],
    ells: &'a [u64],
}

impl System<'_> {
    fn q(&self) -> usize {
        self.c.len()
    }

    fn unknowns(&self) -> usize {
        self.q() - 2 + self.ells.len()
    }

    fn split(&self, x: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut z = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        z.extend_from_slice(&x[..self.q() - 2]);
        (z, x[self.q() - 2..].to_vec())
    }

    fn residual(&self, x: &[Complex64]) -> DVector<Complex64> {
        let (z, w) = self.split(x);
        let n = expand_numerator(self.c, &z);
        let m = zero_polynomial(&w, self.ells);
        let lead = n[self.q() - 2];
        DVector::from_iterator(self.q() - 2, (0..self.q() - 2).map(|k| n[k] - lead * m[k]))
    }

    fn jacobian(&self, x: &[Complex64]) -> DMatrix<Complex64> {
        let (z, w) = self.split(x);
        let rows = self.q() - 2;
        let n = expand_numerator(self.c, &z);
        let lead = n[rows];
        let m = zero_polynomial(&w, self.ells);
        let mut jac = DMatrix::zeros(rows, self.unknowns());
        for col in 0..rows {
            let dn = numerator_derivative(self.c, &z, col + 2);
            for k in 0..rows {
                jac[(k, col)] = dn[k] - dn[rows] * m[k];
            }
        }
        for (i, &l) in self.ells.iter().enumerate() {
            // dM/dw_i = -l (z - w_i)^(l-1) prod_{h != i} (z - w_h)^l_h
            let mut ells = self.ells.to_vec();
            ells[i] -= 1;
            let dm = zero_polynomial(&w, &ells);
            for k in 0..rows {
                jac[(k, rows + i)] = lead * (l as f64) * dm.get(k).copied().unwrap_or_default();
            }
        }
        jac
    }
}

fn cost(r: &DVector<Complex64>) -> f64 {
    r.iter().map(|x| x.norm_sqr()).sum()
}

/// Damped Gauss–Newton: `(J^H J + mu I) step = -J^H r`.
fn levenberg_marquardt(sys: &System, mut x: Vec<Complex64>, max_iterations: usize) -> Vec<Complex64> {
    let mut r = sys.residual(&x);
    let mut f = cost(&r);
    let mut mu = 1e-3;
    for _ in 0..max_iterations {
        if f == 0.0 {
            break;
        }
        let jac = sys.jacobian(&x);
        let jh = jac.adjoint();
        let mut a = &jh * &jac;
        let g = -(&jh * &r);
        let diag_max = (0..a.nrows()).map(|i| a[(i, i)].re).fold(0.0, f64::max).max(1e-300);
        for i in 0..a.nrows() {
            a[(i, i)] += mu * diag_max;
        }
        let Some(step) = Cholesky::new(a).map(|ch| ch.solve(&g)) else {
            mu *= 10.0;
            continue;
        };
        let candidate: Vec<Complex64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        let r_new = sys.residual(&candidate);
        let f_new = cost(&r_new);
        if f_new.is_finite() && f_new < f {
            let step_size = norm(step.as_slice());
            x = candidate;
            r = r_new;
            f = f_new;
            mu = (mu / 3.0).max(1e-15);
            if step_size <= 1e-15 * (1.0 + norm(&x)) {
                break;
            }
        } else {
            mu *= 4.0;
            if mu > 1e16 {
                break;
            }
        }
        if x.iter().any(|v| v.norm() > 1e6) {
            break;
        }
    }
    x
}

fn draw_point(rng: &mut ChaCha8Rng, taken: &[Complex64], separation: f64) -> Complex64 {
    loop {
        let radius = 3.0 * rng.random::<f64>().sqrt();
        let angle = std::f64::consts::TAU * rng.random::<f64>();
        let p = Complex64::new(0.5, 0.0) + Complex64::from_polar(radius, angle);
        if taken.iter().all(|t| (t - p).norm() > separation) {
            return p;
        }
    }
}

fn project(c: &[f64]) -> (Vec<f64>, f64) {
    let shift = c.iter().sum::<f64>() / c.len() as f64;
    (c.iter().map(|x| x - shift).collect(), shift)
}

fn check_residues(c: &[f64], p: &Partition) -> Result<(), RealizerError> {
    if c.len() < 2 {
        return Err(RealizerError::TooFew(c.len()));
    }
    if let Some(i) = c.iter().position(|&x| x == 0.0 || !x.is_finite()) {
        return Err(RealizerError::ZeroResidue(i));
    }
    let sum: f64 = c.iter().sum();
    if sum.abs() >= 1e-9 * residue_scale(c) {
        return Err(RealizerError::Unbalanced { sum });
    }
    if p.sum() != c.len() as u64 - 2 {
        return Err(RealizerError::PartitionMismatch { sum: p.sum(), expected: c.len() - 2 });
    }
    Ok(())
}

/// Searches for a configuration realizing partition `p` for residues `c`.
///
/// Restarts run in parallel; the successful restart with the least index
/// is returned, so the result depends only on the inputs and the seed.
pub fn realize(c: &[f64], p: &Partition, cfg: &RealizeConfig) -> Result<RealizeOutcome, RealizerError> {
    cfg.validate()?;
    check_residues(c, p)?;
    let (projected, shift) = project(c);
    let max = projected.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let normalized: Vec<f64> = projected.iter().map(|x| x / (max * projected[0].signum())).collect();
    let ells = p.parts().to_vec();
    let sys = System { c: &normalized, ells: &ells };

    let attempt = |restart: usize| -> Option<Configuration> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(restart as u64);
        let mut taken = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        for _ in 2..c.len() {
            let z = draw_point(&mut rng, &taken, cfg.separation);
            taken.push(z);
        }
        let mut sites = Vec::new();
        for _ in &ells {
            let w = draw_point(&mut rng, &sites, cfg.separation);
            sites.push(w);
        }
        let x0: Vec<Complex64> = taken[2..].iter().chain(&sites).copied().collect();
        let x = levenberg_marquardt(&sys, x0, cfg.max_iterations);
        let (positions, _) = sys.split(&x);
        let check = verify_details(&projected, &positions, p, cfg);
        check.passed.then(|| Configuration {
            residues: projected.clone(),
            positions,
            zero_sites: check.clusters,
            residual: check.residual,
            projection_shift: shift,
            restart: Some(restart),
        })
    };

    Ok(match (0..cfg.restarts).into_par_iter().find_map_first(attempt) {
        Some(found) => RealizeOutcome::Found(found),
        None => RealizeOutcome::NotFound { restarts: cfg.restarts },
    })
}

/// Outcome of checking a configuration from scratch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub roots: Vec<Complex64>,
    pub clusters: Vec<ZeroSite>,
    pub min_separation: f64,
    pub residual: f64,
    pub multiplicities_match: bool,
    pub passed: bool,
}

/// Roots of a polynomial (ascending coefficients, nonzero leading term)
/// as eigenvalues of its companion matrix.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let degree = coeffs.len().checked_sub(1)?;
    let lead = coeffs[degree];
    if lead.norm() == 0.0 || !lead.is_finite() {
        return None;
    }
    if degree == 0 {
        return Some(Vec::new());
    }
    let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -coeffs[i] / lead;
    }
    let schur = Schur::try_new(companion, f64::EPSILON, 10_000)?;
    schur.eigenvalues().map(|v| v.iter().copied().collect())
}

/// Single-linkage clusters of points closer than `radius`, as
/// (centroid, size), largest first.
fn cluster(points: &[Complex64], radius: f64) -> Vec<ZeroSite> {
    let mut label: Vec<usize> = (0..points.len()).collect();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm() <= radius && label[i] != label[j] {
                let (keep, drop) = (label[i].min(label[j]), label[i].max(label[j]));
                label.iter_mut().filter(|l| **l == drop).for_each(|l| *l = keep);
            }
        }
    }
    let mut out: Vec<ZeroSite> = Vec::new();
    for root in 0..points.len() {
        let members: Vec<Complex64> = (0..points.len()).filter(|&i| label[i] == root).map(|i| points[i]).collect();
        if !members.is_empty() {
            let centroid = members.iter().sum::<Complex64>() / members.len() as f64;
            out.push(ZeroSite { position: centroid, multiplicity: members.len() as u64 });
        }
    }
    out.sort_by_key(|s| std::cmp::Reverse(s.multiplicity));
    out
}

fn min_separation(z: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            best = best.min((z[i] - z[j]).norm());
        }
    }
    best
}

/// Recomputes everything from the residues and positions alone.
///
/// A root of multiplicity `l` of a polynomial with rounded coefficients
/// splits by about `eps^(1/l)`, so the linkage radius is never below
/// `(64 eps)^(1/l_max)` relative to the root scale.
pub fn verify_details(c: &[f64], positions: &[Complex64], p: &Partition, cfg: &RealizeConfig) -> Verification {
    let failed = |min_separation: f64| Verification {
        roots: Vec::new(),
        clusters: Vec::new(),
        min_separation,
        residual: f64::INFINITY,
        multiplicities_match: false,
        passed: false,
    };
    let sep = min_separation(positions);
    let Ok(n) = numerator_polynomial(c, positions) else { return failed(sep) };
    if p.sum() as usize + 1 != n.len() {
        return failed(sep);
    }
    let Some(roots) = polynomial_roots(&n) else { return failed(sep) };
    let scale = 1.0 + roots.iter().fold(0.0f64, |m, r| m.max(r.norm()));
    let floor = (64.0 * f64::EPSILON).powf(1.0 / p.max().max(1) as f64) * scale;
    let clusters = cluster(&roots, cfg.cluster_tol.max(floor));
    let sizes: Vec<u64> = clusters.iter().map(|s| s.multiplicity).collect();
    let multiplicities_match = sizes == p.parts();
    let lead = n[n.len() - 1];
    let m = zero_polynomial(
        &clusters.iter().map(|s| s.position).collect::<Vec<_>>(),
        &clusters.iter().map(|s| s.multiplicity).collect::<Vec<_>>(),
    );
    let diff: Vec<Complex64> = n.iter().zip(&m).map(|(a, b)| a - lead * b).collect();
    let residual = norm(&diff) / norm(&n);
    let passed = sep > cfg.separation && multiplicities_match && residual < cfg.residual_tol;
    Verification { roots, clusters, min_separation: sep, residual, multiplicities_match, passed }
}

/// Checks a configuration against `p` with default residual and separation
/// tolerances.
pub fn verify_realization(cfg: &Configuration, p: &Partition, cluster_tol: f64) -> bool {
    let tolerances = RealizeConfig { cluster_tol, ..RealizeConfig::default() };
    verify_details(&cfg.residues, &cfg.positions, p, &tolerances).passed
}

/// Residues `(a, b, -c, -d)` admit one double zero iff some labelling has
/// `a > d` and `c > b`. With `a + b = c + d` both inequalities say
/// `max(a, b) > min(c, d)`, which fails only when all four are equal.
pub fn q4_double_zero_exists(a: f64, b: f64, c: f64, d: f64) -> Result<bool, RealizerError> {
    if [a, b, c, d].iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(RealizerError::NonPositive([a, b, c, d]));
    }
    if ((a + b) - (c + d)).abs() > 1e-9 {
        return Err(RealizerError::Q4Unbalanced(a + b, c + d));
    }
    Ok(a.max(b) > c.min(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DevelopingFactor {
    pub position: Complex64,
    pub exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSite {
    pub position: Complex64,
    pub angle: u64,
}

/// `f(z) = prod (z - z_j)^c_j`, with cone angle `l + 1` at each zero of
/// multiplicity `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DevelopingMap {
    pub factors: Vec<DevelopingFactor>,
    pub zero_sites: Vec<ConeSite>,
}

pub fn developing_map_description(cfg: &Configuration) -> DevelopingMap {
    DevelopingMap {
        factors: cfg
            .positions
            .iter()
            .zip(&cfg.residues)
            .map(|(&position, &exponent)| DevelopingFactor { position, exponent })
            .collect(),
        zero_sites: cfg
            .zero_sites
            .iter()
            .map(|s| ConeSite { position: s.position, angle: s.multiplicity + 1 })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn part(v: &[u64]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn doubled_pair_configuration() -> Configuration {
        Configuration {
            residues: vec![2.0, -2.0, 1.0, -1.0],
            positions: vec![cx(1.0), cx(-1.0), cx(-0.5), cx(0.5)],
            zero_sites: vec![ZeroSite { position: cx(0.0), multiplicity: 2 }],
            residual: 0.0,
            projection_shift: 0.0,
            restart: None,
        }
    }

    #[test]
    fn doubled_pair_numerator_is_three_z_squared() {
        let n = numerator_polynomial(&doubled_pair_configuration().residues, &doubled_pair_configuration().positions)
            .unwrap();
        let expected = [0.0, 0.0, 3.0];
        let err: f64 = n.iter().zip(expected).map(|(a, b)| (a - cx(b)).norm_sqr()).sum::<f64>().sqrt();
        assert!(err / 3.0 < 1e-12, "{n:?}");

        // integer expansion of 8 * each cubic product, ascending
        let products: [[i64; 4]; 4] = [
            [-2, -2, 8, 8], // 8 (z+1)(z+1/2)(z-1/2)
            [2, -2, -8, 8], // 8 (z-1)(z+1/2)(z-1/2)
            [4, -8, -4, 8], // 8 (z-1)(z+1)(z-1/2)
            [-4, -8, 4, 8], // 8 (z-1)(z+1)(z+1/2)
        ];
        let weights = [2, -2, 1, -1];
        let mut total = [0i64; 4];
        for (w, prod) in weights.iter().zip(products) {
            for k in 0..4 {
                total[k] += w * prod[k];
            }
        }
        assert_eq!(total, [0, 0, 24, 0]);
    }

    #[test]
    fn numerator_small_cases() {
        let n = numerator_polynomial(&[1.0, -1.0], &[cx(0.0), cx(1.0)]).unwrap();
        assert_eq!(n, vec![cx(-1.0)]);
        let c = [2.0, -2.0, 1.0, -1.0];
        let z = [cx(0.3), Complex64::new(0.1, 2.0), cx(-4.0), Complex64::new(1.0, -1.0)];
        let n1 = numerator_polynomial(&c, &z).unwrap();
        let n2 = numerator_polynomial(&c.map(|x| 2.0 * x), &z).unwrap();
        for (a, b) in n1.iter().zip(&n2) {
            assert!((2.0 * a - b).norm() < 1e-12);
        }
        assert_eq!(n1.len(), 3);
        assert!(n1[2].norm() > 1e-3);
        assert!(matches!(
            numerator_polynomial(&[1.0, -1.0], &[cx(2.0), cx(2.0)]),
            Err(RealizerError::Coincident(0, 1))
        ));
        assert!(matches!(
            numerator_polynomial(&[1.0, 1.0], &[cx(0.0), cx(1.0)]),
            Err(RealizerError::Unbalanced { .. })
        ));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let c = [1.3, -0.4, 2.0, -1.1, -1.8];
        let ells = [2, 1];
        let sys = System { c: &c, ells: &ells };
        let x = vec![
            Complex64::new(0.2, 0.7),
            Complex64::new(-1.1, 0.3),
            Complex64::new(1.5, -0.8),
            Complex64::new(0.4, 0.4),
            Complex64::new(-0.6, -1.2),
        ];
        let jac = sys.jacobian(&x);
        let h = 1e-6;
        for col in 0..x.len() {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[col] += h;
            minus[col] -= h;
            let fd = (sys.residual(&plus) - sys.residual(&minus)) / cx(2.0 * h);
            for row in 0..fd.len() {
                assert!((fd[row] - jac[(row, col)]).norm() < 1e-6, "row {row} col {col}");
            }
        }
    }

    #[test]
    fn verify_examples() {
        let cfg = doubled_pair_configuration();
        assert!(verify_realization(&cfg, &part(&[2]), 1e-6));
        assert!(!verify_realization(&cfg, &part(&[1, 1]), 1e-6));
        let generic = Configuration {
            residues: vec![1.0, 2.0, -0.5, -2.5, 0.25, -0.25],
            positions: vec![cx(0.0), cx(1.0), Complex64::new(0.3, 1.4), cx(-2.0), Complex64::new(-0.7, -0.9), cx(2.2)],
            ..doubled_pair_configuration()
        };
        assert!(verify_realization(&generic, &part(&[1, 1, 1, 1]), 1e-6));
    }

    #[test]
    fn realize_doubled_pair_configuration() {
        let c = [2.0, -2.0, 1.0, -1.0];
        let out = realize(&c, &part(&[2]), &RealizeConfig { rng_seed: 1, ..RealizeConfig::default() }).unwrap();
        let RealizeOutcome::Found(cfg) = out else { panic!("not found") };
        assert!(cfg.residual < 1e-10);
        assert_eq!(cfg.positions[0], cx(0.0));
        assert_eq!(cfg.positions[1], cx(1.0));
        assert!(verify_realization(&cfg, &part(&[2]), 1e-6));
        let dev = developing_map_description(&cfg);
        assert_eq!(dev.zero_sites.len(), 1);
        assert_eq!(dev.zero_sites[0].angle, 3);
        assert!(dev.factors.iter().map(|f| f.exponent).sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn realize_equal_quadruple_not_found() {
        let cfg = RealizeConfig { restarts: 16, ..RealizeConfig::default() };
        let out = realize(&[1.0, 1.0, -1.0, -1.0], &part(&[2]), &cfg).unwrap();
        assert_eq!(out, RealizeOutcome::NotFound { restarts: 16 });
    }

    #[test]
    fn realize_is_deterministic_and_scale_free() {
        let c = [3.0, 1.0, -2.5, -1.5];
        let cfg = RealizeConfig { rng_seed: 7, ..RealizeConfig::default() };
        let a = realize(&c, &part(&[2]), &cfg).unwrap();
        let b = realize(&c, &part(&[2]), &cfg).unwrap();
        assert_eq!(a, b);
        for lambda in [-1.0, 2.0, 10.0] {
            let scaled: Vec<f64> = c.iter().map(|x| lambda * x).collect();
            let s = realize(&scaled, &part(&[2]), &cfg).unwrap();
            assert_eq!(s.configuration().is_some(), a.configuration().is_some());
        }
    }

    #[test]
    fn higher_multiplicity() {
        let c = [3.0, -1.0, 2.0, -2.5, -1.5];
        let out = realize(&c, &part(&[3]), &RealizeConfig::default()).unwrap();
        let cfg = out.configuration().expect("triple zero");
        assert!(verify_realization(cfg, &part(&[3]), 1e-6));
    }

    #[test]
    fn football_has_no_zeros() {
        let out = realize(&[0.7, -0.7], &part(&[]), &RealizeConfig::default()).unwrap();
        let cfg = out.configuration().unwrap();
        let dev = developing_map_description(cfg);
        assert_eq!(dev.factors.len(), 2);
        assert!(dev.zero_sites.is_empty());
    }

    #[test]
    fn gauge_invariance() {
        let cfg = doubled_pair_configuration();
        let (lambda, mu) = (Complex64::new(0.6, -1.3), Complex64::new(2.0, 0.5));
        let moved = Configuration { positions: cfg.positions.iter().map(|z| lambda * z + mu).collect(), ..cfg };
        assert!(verify_realization(&moved, &part(&[2]), 1e-6));
    }

    #[test]
    fn q4_examples() {
        assert!(q4_double_zero_exists(2.0, 1.0, 2.0, 1.0).unwrap());
        assert!(!q4_double_zero_exists(1.0, 1.0, 1.0, 1.0).unwrap());
        // (3, 1, -2, -2): 2 * (1 + 2) <= 8, so a double zero exists
        assert!(q4_double_zero_exists(3.0, 1.0, 2.0, 2.0).unwrap());
        assert!(realize(&[3.0, 1.0, -2.0, -2.0], &part(&[2]), &RealizeConfig::default())
            .unwrap()
            .configuration()
            .is_some());
        assert!(q4_double_zero_exists(1.5, 1.5, 2.0, 1.0).unwrap());
        assert!(q4_double_zero_exists(3.0, 1.0, 2.0, 1.0).is_err());
        assert!(q4_double_zero_exists(-1.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn precondition_errors() {
        let cfg = RealizeConfig::default();
        assert!(matches!(realize(&[1.0, 0.0, -1.0], &part(&[1]), &cfg), Err(RealizerError::ZeroResidue(1))));
        assert!(matches!(
            realize(&[1.0, -1.0, 1.0, -1.0], &part(&[1]), &cfg),
            Err(RealizerError::PartitionMismatch { .. })
        ));
        let bad = RealizeConfig { cluster_tol: 0.0, ..cfg };
        assert!(matches!(realize(&[1.0, -1.0], &part(&[]), &bad), Err(RealizerError::BadTolerance("cluster_tol"))));
    }
}
