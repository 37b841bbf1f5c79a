//! Shot sampling, Pauli-expectation estimation, single-qubit reconstruction
//! and Uhlmann fidelity.
//!
//! Sampling uses `ChaCha8Rng::seed_from_u64(seed)` with
//! `set_stream(3 * run + basis)`, where `basis` is 0, 1, 2 for Z, X, Y.

mod fixture;

pub use fixture::{ExpectationSource, FixtureEstimate, FixtureRow, RowKind, TomographyFixture};

use crate::error::{Error, Result};
use crate::hilbert::{basis_label, Register, WalkState};
use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::par::Exec;
use crate::walk::{apply_register_op_in_place, CoinOperator};
use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Tolerance on `ρ − ρ†` accepted by [`fidelity`].
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues below this fraction of the largest one are rounding noise
/// and are zeroed before taking square roots.
const EIGEN_FLOOR: f64 = 1e-14;

fn floored_roots(vals: [f64; 2]) -> [f64; 2] {
    let scale = vals[0].abs().max(vals[1].abs());
    vals.map(|v| if v <= EIGEN_FLOOR * scale { 0.0 } else { v.sqrt() })
}

/// Measurement basis; `+1` outcomes are `|0⟩`, `|+⟩` and `(|0⟩ + i|1⟩)/√2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Basis {
    Z,
    X,
    Y,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Z, Basis::X, Basis::Y];

    pub fn index(self) -> u64 {
        match self {
            Basis::Z => 0,
            Basis::X => 1,
            Basis::Y => 2,
        }
    }

    /// Unitary applied before a computational-basis readout.
    pub fn pre_rotation(self) -> Option<CMatrix> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Basis::Z => None,
            Basis::X => Some(CMatrix::from_real_rows(&[vec![h, h], vec![h, -h]])),
            // H · S†
            Basis::Y => Some(CMatrix::from_rows(&[
                vec![C64::new(h, 0.0), C64::new(0.0, -h)],
                vec![C64::new(h, 0.0), C64::new(0.0, h)],
            ])),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "Z",
            Basis::X => "X",
            Basis::Y => "Y",
        })
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "Z" => Ok(Basis::Z),
            "X" => Ok(Basis::X),
            "Y" => Ok(Basis::Y),
            _ => Err(Error::Measurement(format!("unknown basis '{s}'"))),
        }
    }
}

/// Outcome counts of one sampled experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShotHistogram {
    pub basis: Basis,
    /// Every outcome label of the register, including those never observed.
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub seed: u64,
    pub stream: u64,
}

impl ShotHistogram {
    pub fn count(&self, label: &str) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn frequency(&self, label: &str) -> f64 {
        self.count(label) as f64 / self.shots as f64
    }
}

/// Born probabilities of `reg` after the basis pre-rotation.
pub fn probabilities(state: &WalkState, reg: Register, basis: Basis) -> Result<Vec<f64>> {
    let d = state.layout().dim(reg);
    match basis.pre_rotation() {
        None => Ok(state.marginal_distribution(reg)),
        Some(_) if d != 2 => Err(Error::Measurement(format!(
            "{basis} basis needs a single-qubit register, {} has dimension {d}",
            reg.name()
        ))),
        Some(m) => {
            let mut rotated = state.clone();
            apply_register_op_in_place(&mut rotated, reg, &CoinOperator::Matrix(m))?;
            Ok(rotated.marginal_distribution(reg))
        }
    }
}

/// `p(+1) − p(−1)` computed from Born probabilities.
pub fn exact_expectation(state: &WalkState, reg: Register, basis: Basis) -> Result<f64> {
    let p = probabilities(state, reg, basis)?;
    if p.len() != 2 {
        return Err(Error::Measurement("expectation needs a single-qubit register".into()));
    }
    Ok(p[0] - p[1])
}

/// Draws `shots` i.i.d. outcomes from `probs` on generator stream `stream`.
pub fn sample_distribution(probs: &[f64], basis: Basis, shots: u64, seed: u64, stream: u64) -> Result<ShotHistogram> {
    if shots == 0 {
        return Err(Error::Measurement("shots must be at least 1".into()));
    }
    let dist = WeightedIndex::new(probs.iter().map(|p| p.max(0.0)))
        .map_err(|e| Error::Measurement(format!("invalid distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut tally = vec![0u64; probs.len()];
    for _ in 0..shots {
        tally[dist.sample(&mut rng)] += 1;
    }
    let counts = tally
        .into_iter()
        .enumerate()
        .map(|(k, c)| (basis_label(k, probs.len()), c))
        .collect();
    Ok(ShotHistogram {
        basis,
        counts,
        shots,
        seed,
        stream,
    })
}

/// Samples `reg` in `basis` on stream 0 of `seed`.
pub fn sample_measurement(state: &WalkState, reg: Register, basis: Basis, shots: u64, seed: u64) -> Result<ShotHistogram> {
    sample_measurement_stream(state, reg, basis, shots, seed, 0)
}

pub fn sample_measurement_stream(
    state: &WalkState,
    reg: Register,
    basis: Basis,
    shots: u64,
    seed: u64,
    stream: u64,
) -> Result<ShotHistogram> {
    sample_distribution(&probabilities(state, reg, basis)?, basis, shots, seed, stream)
}

/// `(n₀ − n₁) / shots` for a single-qubit histogram.
pub fn expectation(hist: &ShotHistogram) -> Result<f64> {
    if hist.shots == 0 {
        return Err(Error::Measurement("empty histogram".into()));
    }
    if hist.counts.keys().any(|k| k != "0" && k != "1") {
        return Err(Error::Measurement("expectation needs single-qubit outcomes".into()));
    }
    Ok((hist.count("0") as f64 - hist.count("1") as f64) / hist.shots as f64)
}

/// A 2×2 density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix1Q {
    m: [[C64; 2]; 2],
}

impl DensityMatrix1Q {
    pub fn from_entries(m: [[C64; 2]; 2]) -> Self {
        DensityMatrix1Q { m }
    }

    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: m.dim(),
            });
        }
        Ok(DensityMatrix1Q {
            m: [[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]],
        })
    }

    /// `|ψ⟩⟨ψ|` for `|ψ⟩ = α|0⟩ + β|1⟩`.
    pub fn pure(alpha: C64, beta: C64) -> Self {
        let v = [alpha, beta];
        let mut m = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = v[i] * v[j].conj();
            }
        }
        DensityMatrix1Q { m }
    }

    /// Real symmetric matrix `[[a, b], [b, d]]`.
    pub fn real_symmetric(a: f64, b: f64, d: f64) -> Self {
        let r = |x| C64::new(x, 0.0);
        DensityMatrix1Q {
            m: [[r(a), r(b)], [r(b), r(d)]],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[i][j]
    }

    pub fn entries(&self) -> [[C64; 2]; 2] {
        self.m
    }

    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_rows(&[self.m[0].to_vec(), self.m[1].to_vec()])
    }

    pub fn trace(&self) -> f64 {
        (self.m[0][0] + self.m[1][1]).re
    }

    pub fn determinant(&self) -> f64 {
        (self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]).re
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut e = 0f64;
        for i in 0..2 {
            for j in 0..2 {
                e = e.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        e
    }

    /// Entrywise complex conjugate (the transpose, for Hermitian input).
    pub fn conj(&self) -> Self {
        let c = |z: C64| z.conj();
        DensityMatrix1Q {
            m: [[c(self.m[0][0]), c(self.m[0][1])], [c(self.m[1][0]), c(self.m[1][1])]],
        }
    }

    /// `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)`.
    pub fn bloch(&self) -> [f64; 3] {
        let b = self.m[0][1];
        [2.0 * b.re, -2.0 * b.im, (self.m[0][0] - self.m[1][1]).re]
    }

    pub fn bloch_norm(&self) -> f64 {
        self.bloch().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Entries rounded to `decimals` places, real and imaginary parts separately.
    pub fn rounded(&self, decimals: u32) -> Self {
        let s = 10f64.powi(decimals as i32);
        let r = |z: C64| C64::new((z.re * s).round() / s, (z.im * s).round() / s);
        DensityMatrix1Q {
            m: [[r(self.m[0][0]), r(self.m[0][1])], [r(self.m[1][0]), r(self.m[1][1])]],
        }
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix1Q) -> f64 {
        let mut e = 0f64;
        for i in 0..2 {
            for j in 0..2 {
                e = e.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        e
    }

    /// Eigenvalues (ascending) and unit eigenvectors of the Hermitian part.
    pub fn eigen(&self) -> ([f64; 2], [[C64; 2]; 2]) {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = (self.m[0][1] + self.m[1][0].conj()) * 0.5;
        let mean = (a + d) / 2.0;
        let r = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
        let vals = [mean - r, mean + r];
        if b.norm() < 1e-300 {
            let (lo, hi) = if a <= d {
                ([ONE, ZERO], [ZERO, ONE])
            } else {
                ([ZERO, ONE], [ONE, ZERO])
            };
            return (vals, [lo, hi]);
        }
        let vec = |lam: f64| {
            // rows of (ρ − λ) give two candidate null vectors; keep the larger
            let v1 = [b, C64::new(lam - a, 0.0)];
            let v2 = [C64::new(lam - d, 0.0), b.conj()];
            let n1 = (v1[0].norm_sqr() + v1[1].norm_sqr()).sqrt();
            let n2 = (v2[0].norm_sqr() + v2[1].norm_sqr()).sqrt();
            if n1 >= n2 {
                [v1[0] / n1, v1[1] / n1]
            } else {
                [v2[0] / n2, v2[1] / n2]
            }
        };
        (vals, [vec(vals[0]), vec(vals[1])])
    }

    fn from_spectrum(vals: [f64; 2], vecs: [[C64; 2]; 2]) -> Self {
        let mut m = [[ZERO; 2]; 2];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] += vecs[k][i] * vecs[k][j].conj() * vals[k];
                }
            }
        }
        DensityMatrix1Q { m }
    }

    /// PSD square root via the eigendecomposition (negative eigenvalues as 0).
    pub fn sqrt(&self) -> Self {
        let (vals, vecs) = self.eigen();
        Self::from_spectrum(floored_roots(vals), vecs)
    }

    fn mul(&self, o: &DensityMatrix1Q) -> Self {
        let mut m = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j];
            }
        }
        DensityMatrix1Q { m }
    }

    /// Clips negative eigenvalues to zero and rescales to unit trace.
    /// Returns the adjusted matrix and the total clipped weight.
    pub fn clip_to_state(&self) -> (Self, f64) {
        let (vals, vecs) = self.eigen();
        let clipped: f64 = vals.iter().filter(|v| **v < 0.0).map(|v| -v).sum();
        let pos = vals.map(|v| v.max(0.0));
        let tr = pos[0] + pos[1];
        if clipped == 0.0 && (tr - 1.0).abs() < 1e-15 {
            return (*self, 0.0);
        }
        (Self::from_spectrum(pos.map(|v| v / tr), vecs), clipped)
    }
}

impl fmt::Display for DensityMatrix1Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(4);
        let z = |c: C64| {
            if c.im == 0.0 {
                format!("{:.p$}", c.re)
            } else {
                format!("{:.p$}{:+.p$}i", c.re, c.im)
            }
        };
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            z(self.m[0][0]),
            z(self.m[0][1]),
            z(self.m[1][0]),
            z(self.m[1][1])
        )
    }
}

impl Serialize for DensityMatrix1Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let re: Vec<[f64; 2]> = self.m.iter().map(|r| [r[0].re, r[1].re]).collect();
        let im: Vec<[f64; 2]> = self.m.iter().map(|r| [r[0].im, r[1].im]).collect();
        let mut st = s.serialize_struct("DensityMatrix1Q", 2)?;
        st.serialize_field("re", &re)?;
        st.serialize_field("im", &im)?;
        st.end()
    }
}

/// `½(I + xX + yY + zZ)`: diagonal `((1+z)/2, (1−z)/2)`, entry (0,1) `(x − iy)/2`.
pub fn reconstruct(x: f64, y: f64, z: f64) -> DensityMatrix1Q {
    let off = C64::new(x, -y) * 0.5;
    DensityMatrix1Q {
        m: [
            [C64::new((1.0 + z) / 2.0, 0.0), off],
            [off.conj(), C64::new((1.0 - z) / 2.0, 0.0)],
        ],
    }
}

/// The opposite off-diagonal sign: entry (0,1) `(x + iy)/2`.
pub fn reconstruct_conjugate(x: f64, y: f64, z: f64) -> DensityMatrix1Q {
    reconstruct(x, y, z).conj()
}

/// Eigenvalue clipping applied before a fidelity evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct FidelityAdjustment {
    pub clipped_target: f64,
    pub clipped_estimate: f64,
}

impl FidelityAdjustment {
    pub fn is_none(&self) -> bool {
        self.clipped_target == 0.0 && self.clipped_estimate == 0.0
    }
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`.
pub fn fidelity(rho: &DensityMatrix1Q, sigma: &DensityMatrix1Q) -> Result<f64> {
    fidelity_with_adjustment(rho, sigma).map(|(f, _)| f)
}

/// [`fidelity`] plus the eigenvalue clipping it needed. Inputs with
/// negative eigenvalues are clipped and renormalized first.
pub fn fidelity_with_adjustment(
    rho: &DensityMatrix1Q,
    sigma: &DensityMatrix1Q,
) -> Result<(f64, FidelityAdjustment)> {
    for m in [rho, sigma] {
        let e = m.hermiticity_error();
        if e > HERMITIAN_TOL {
            return Err(Error::NotHermitian(e));
        }
    }
    let (r, clipped_target) = rho.clip_to_state();
    let (s, clipped_estimate) = sigma.clip_to_state();
    let root = r.sqrt();
    let inner = root.mul(&s).mul(&root);
    let (mu, _) = inner.eigen();
    let t: f64 = floored_roots(mu).iter().sum();
    Ok((
        (t * t).min(1.0),
        FidelityAdjustment {
            clipped_target,
            clipped_estimate,
        },
    ))
}

/// How expectations are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ShotMode {
    /// Born probabilities directly.
    Exact,
    Finite { shots: u64, runs: usize, seed: u64 },
}

/// Expectations of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunEstimate {
    pub run: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub histograms: Vec<ShotHistogram>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TomographyReport {
    pub register: Register,
    pub mode: ShotMode,
    pub runs: Vec<RunEstimate>,
    /// Run-averaged `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)`.
    pub expectations: [f64; 3],
    pub bloch_norm: f64,
    pub target: DensityMatrix1Q,
    pub estimate: DensityMatrix1Q,
    pub estimate_conjugate: DensityMatrix1Q,
    pub fidelity: f64,
    pub fidelity_conjugate: f64,
    pub adjustment: FidelityAdjustment,
}

/// Runs tomography on a single-qubit register of `state` and compares the
/// reconstruction with `target` (default: the register's reduced state).
pub fn tomography_pipeline(
    state: &WalkState,
    reg: Register,
    mode: ShotMode,
    target: Option<DensityMatrix1Q>,
    exec: Exec,
) -> Result<TomographyReport> {
    if state.layout().dim(reg) != 2 {
        return Err(Error::Measurement(format!(
            "tomography needs a single-qubit register, {} has dimension {}",
            reg.name(),
            state.layout().dim(reg)
        )));
    }
    let target = match target {
        Some(t) => t,
        None => DensityMatrix1Q::from_matrix(&state.reduced_density(reg))?,
    };
    let probs: Vec<Vec<f64>> = Basis::ALL
        .iter()
        .map(|&b| probabilities(state, reg, b))
        .collect::<Result<_>>()?;
    let runs = match mode {
        ShotMode::Exact => {
            let e = |p: &Vec<f64>| p[0] - p[1];
            vec![RunEstimate {
                run: 0,
                z: e(&probs[0]),
                x: e(&probs[1]),
                y: e(&probs[2]),
                histograms: vec![],
            }]
        }
        ShotMode::Finite { shots, runs, seed } => {
            if runs == 0 {
                return Err(Error::Measurement("runs must be at least 1".into()));
            }
            exec.map_range(0..runs, |run| -> Result<RunEstimate> {
                let mut hs = Vec::with_capacity(3);
                for b in Basis::ALL {
                    let stream = 3 * run as u64 + b.index();
                    hs.push(sample_distribution(&probs[b.index() as usize], b, shots, seed, stream)?);
                }
                Ok(RunEstimate {
                    run,
                    z: expectation(&hs[0])?,
                    x: expectation(&hs[1])?,
                    y: expectation(&hs[2])?,
                    histograms: hs,
                })
            })
            .into_iter()
            .collect::<Result<_>>()?
        }
    };
    let k = runs.len() as f64;
    let x = runs.iter().map(|r| r.x).sum::<f64>() / k;
    let y = runs.iter().map(|r| r.y).sum::<f64>() / k;
    let z = runs.iter().map(|r| r.z).sum::<f64>() / k;
    let estimate = reconstruct(x, y, z);
    let estimate_conjugate = reconstruct_conjugate(x, y, z);
    let (fid, adjustment) = fidelity_with_adjustment(&target, &estimate)?;
    let fidelity_conjugate = fidelity(&target, &estimate_conjugate)?;
    Ok(TomographyReport {
        register: reg,
        mode,
        runs,
        expectations: [x, y, z],
        bloch_norm: estimate.bloch_norm(),
        target,
        estimate,
        estimate_conjugate,
        fidelity: fid,
        fidelity_conjugate,
        adjustment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{CoinStateSpec, HilbertLayout};
    use proptest::prelude::*;

    fn coin1_state(alpha: C64, beta: C64) -> WalkState {
        let payload = CoinStateSpec::qubit(alpha, beta).unwrap();
        WalkState::make_product_state(HilbertLayout::cycle(4).unwrap(), 0, &payload, 0).unwrap()
    }

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn eigenstates_give_deterministic_outcomes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = coin1_state(r(h), r(h));
        let hist = sample_measurement(&plus, Register::Coin1, Basis::X, 500, 9).unwrap();
        assert_eq!(hist.count("0"), 500);
        let cross = coin1_state(r(h), C64::new(0.0, h));
        let hist = sample_measurement(&cross, Register::Coin1, Basis::Y, 500, 9).unwrap();
        assert_eq!(hist.count("0"), 500);
        assert_eq!(expectation(&hist).unwrap(), 1.0);
    }

    #[test]
    fn sampling_is_reproducible() {
        let s = coin1_state(r(0.5), r(3f64.sqrt() / 2.0));
        let a = sample_measurement(&s, Register::Coin1, Basis::Z, 1000, 42).unwrap();
        let b = sample_measurement(&s, Register::Coin1, Basis::Z, 1000, 42).unwrap();
        let c = sample_measurement(&s, Register::Coin1, Basis::Z, 1000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.counts, c.counts);
        assert_eq!(a.counts.values().sum::<u64>(), 1000);
    }

    #[test]
    fn multi_qubit_register_rejects_x_basis() {
        let s = WalkState::basis(HilbertLayout::complete(4).unwrap(), 0, 0, 0).unwrap();
        assert!(sample_measurement(&s, Register::Coin1, Basis::X, 10, 1).is_err());
        let h = sample_measurement(&s, Register::Coin1, Basis::Z, 10, 1).unwrap();
        assert_eq!(h.count("00"), 10);
        assert!(expectation(&h).is_err());
    }

    #[test]
    fn expectation_of_mean_rows() {
        let hist = |p0: f64, p1: f64| ShotHistogram {
            basis: Basis::Z,
            counts: [("0".to_string(), (p0 * 1e6) as u64), ("1".to_string(), (p1 * 1e6) as u64)].into(),
            shots: 1_000_000,
            seed: 0,
            stream: 0,
        };
        assert!((expectation(&hist(0.247851, 0.752149)).unwrap() + 0.504298).abs() < 1e-9);
        assert_eq!(expectation(&hist(0.5, 0.5)).unwrap(), 0.0);
    }

    #[test]
    fn reconstruct_poles_and_device_values() {
        assert_eq!(reconstruct(0.0, 0.0, 1.0), DensityMatrix1Q::pure(ONE, ZERO));
        let rho = reconstruct(0.8647, -0.0060, -0.5043);
        assert!((rho.get(0, 0).re - 0.24785).abs() < 1e-9);
        assert!((rho.get(0, 1).norm() - 0.43236).abs() < 1e-5);
        assert_eq!(rho.get(0, 1).im, 0.003);
        assert_eq!(reconstruct_conjugate(0.8647, -0.0060, -0.5043).get(0, 1).im, -0.003);
    }

    #[test]
    fn fidelity_of_rounded_target_with_itself() {
        let t = DensityMatrix1Q::pure(r(0.5), r(3f64.sqrt() / 2.0));
        assert!((fidelity(&t, &t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_pipeline_recovers_target() {
        let s = coin1_state(r(0.5), r(3f64.sqrt() / 2.0));
        let rep = tomography_pipeline(&s, Register::Coin1, ShotMode::Exact, None, Exec::Sequential).unwrap();
        assert!(rep.estimate.max_abs_diff(&rep.target) < 1e-12);
        assert!((rep.target.get(0, 1).re - 0.4330127).abs() < 1e-6);
        assert!((rep.fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn finite_pipeline_is_deterministic_across_exec() {
        let s = coin1_state(r(0.5), r(3f64.sqrt() / 2.0));
        let mode = ShotMode::Finite {
            shots: 2048,
            runs: 4,
            seed: 5,
        };
        let a = tomography_pipeline(&s, Register::Coin1, mode, None, Exec::Sequential).unwrap();
        let b = tomography_pipeline(&s, Register::Coin1, mode, None, Exec::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.fidelity > 0.99);
        assert_eq!(a.runs[1].histograms[2].stream, 5);
    }

    #[test]
    fn clipping_non_psd_estimate() {
        let rho = reconstruct(1.0, 0.5, 0.0);
        assert!(rho.bloch_norm() > 1.0);
        let (f, adj) = fidelity_with_adjustment(&DensityMatrix1Q::pure(ONE, ZERO), &rho).unwrap();
        assert!(adj.clipped_estimate > 0.0 && adj.clipped_target == 0.0);
        assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = reconstruct(0.0, 0.0, 0.0).entries();
        m[0][1] = C64::new(0.3, 0.0);
        let bad = DensityMatrix1Q::from_entries(m);
        assert!(matches!(fidelity(&bad, &bad), Err(Error::NotHermitian(_))));
    }

    fn closed_form(a: &DensityMatrix1Q, b: &DensityMatrix1Q) -> f64 {
        let tr = a.mul(b).trace();
        tr + 2.0 * (a.determinant().max(0.0) * b.determinant().max(0.0)).sqrt()
    }

    fn random_mixed(x: f64, y: f64, z: f64, shrink: f64) -> DensityMatrix1Q {
        let n = (x * x + y * y + z * z).sqrt().max(1e-12);
        reconstruct(shrink * x / n, shrink * y / n, shrink * z / n)
    }

    proptest! {
        #[test]
        fn fidelity_matches_closed_form(
            a in prop::array::uniform3(-1.0f64..1.0), sa in 0.0f64..1.0,
            b in prop::array::uniform3(-1.0f64..1.0), sb in 0.0f64..1.0,
        ) {
            let p = random_mixed(a[0], a[1], a[2], sa);
            let q = random_mixed(b[0], b[1], b[2], sb);
            let f = fidelity(&p, &q).unwrap();
            prop_assert!((f - closed_form(&p, &q)).abs() < 1e-9);
            prop_assert!((f - fidelity(&q, &p).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn pure_target_fidelity_is_overlap(
            t in 0.0f64..std::f64::consts::PI, ph in -3.2f64..3.2,
            b in prop::array::uniform3(-1.0f64..1.0), sb in 0.0f64..1.0,
        ) {
            let alpha = r((t / 2.0).cos());
            let beta = C64::from_polar((t / 2.0).sin(), ph);
            let target = DensityMatrix1Q::pure(alpha, beta);
            let rho = random_mixed(b[0], b[1], b[2], sb);
            let v = [alpha, beta];
            let overlap: C64 = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| v[i].conj() * rho.get(i, j) * v[j])
                .sum();
            prop_assert!((fidelity(&target, &rho).unwrap() - overlap.re).abs() < 1e-10);
        }

        #[test]
        fn expectation_is_bounded(n0 in 0u64..10_000, n1 in 0u64..10_000) {
            prop_assume!(n0 + n1 > 0);
            let h = ShotHistogram {
                basis: Basis::X,
                counts: [("0".to_string(), n0), ("1".to_string(), n1)].into(),
                shots: n0 + n1,
                seed: 0,
                stream: 0,
            };
            let e = expectation(&h).unwrap();
            prop_assert!((-1.0..=1.0).contains(&e));
        }
    }
}
