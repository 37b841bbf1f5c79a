//! Composite position ⊗ coin₁ ⊗ coin₂ space and the state vectors living in it.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ZERO};
use rand::Rng;
use std::fmt;

/// Tolerance on ‖ψ‖² − 1 accepted for a state or a payload.
pub const NORM_TOL: f64 = 1e-10;

/// One of the three tensor factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Register {
    Position,
    Coin1,
    Coin2,
}

impl Register {
    pub const ALL: [Register; 3] = [Register::Position, Register::Coin1, Register::Coin2];

    pub fn name(self) -> &'static str {
        match self {
            Register::Position => "position",
            Register::Coin1 => "coin1",
            Register::Coin2 => "coin2",
        }
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Register {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "position" | "pos" => Ok(Register::Position),
            "coin1" | "c1" => Ok(Register::Coin1),
            "coin2" | "c2" => Ok(Register::Coin2),
            other => Err(Error::InvalidLayout(format!("unknown register '{other}'"))),
        }
    }
}

/// Dimensions of the three registers. Basis states are flattened
/// position-major with coin₂ fastest:
/// `index(v, c1, c2) = (v·coin1_dim + c1)·coin2_dim + c2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HilbertLayout {
    position_dim: usize,
    coin1_dim: usize,
    coin2_dim: usize,
}

impl HilbertLayout {
    pub fn new(position_dim: usize, coin1_dim: usize, coin2_dim: usize) -> Result<Self> {
        for (name, d) in [
            ("position", position_dim),
            ("coin1", coin1_dim),
            ("coin2", coin2_dim),
        ] {
            if d < 2 {
                return Err(Error::InvalidLayout(format!(
                    "{name} dimension must be at least 2, got {d}"
                )));
            }
        }
        position_dim
            .checked_mul(coin1_dim)
            .and_then(|x| x.checked_mul(coin2_dim))
            .ok_or_else(|| Error::InvalidLayout("total dimension overflows".into()))?;
        Ok(HilbertLayout {
            position_dim,
            coin1_dim,
            coin2_dim,
        })
    }

    /// Layout of an `l`-cycle walk with two qubit coins.
    pub fn cycle(l: usize) -> Result<Self> {
        Self::new(l, 2, 2)
    }

    /// Layout of an `n`-complete-graph walk; both coins are `n`-dimensional.
    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, n, n)
    }

    pub fn position_dim(&self) -> usize {
        self.position_dim
    }

    pub fn coin1_dim(&self) -> usize {
        self.coin1_dim
    }

    pub fn coin2_dim(&self) -> usize {
        self.coin2_dim
    }

    pub fn dim(&self, reg: Register) -> usize {
        match reg {
            Register::Position => self.position_dim,
            Register::Coin1 => self.coin1_dim,
            Register::Coin2 => self.coin2_dim,
        }
    }

    /// Distance in the flat index between consecutive values of `reg`.
    pub fn stride(&self, reg: Register) -> usize {
        match reg {
            Register::Position => self.coin1_dim * self.coin2_dim,
            Register::Coin1 => self.coin2_dim,
            Register::Coin2 => 1,
        }
    }

    pub fn total_dim(&self) -> usize {
        self.position_dim * self.coin1_dim * self.coin2_dim
    }

    #[inline]
    pub fn index(&self, v: usize, c1: usize, c2: usize) -> usize {
        debug_assert!(v < self.position_dim && c1 < self.coin1_dim && c2 < self.coin2_dim);
        (v * self.coin1_dim + c1) * self.coin2_dim + c2
    }

    #[inline]
    pub fn unindex(&self, k: usize) -> (usize, usize, usize) {
        let c2 = k % self.coin2_dim;
        let rest = k / self.coin2_dim;
        (rest / self.coin1_dim, rest % self.coin1_dim, c2)
    }

    /// Value held by `reg` in flat basis index `k`.
    #[inline]
    pub fn register_value(&self, k: usize, reg: Register) -> usize {
        (k / self.stride(reg)) % self.dim(reg)
    }
}

/// Renders a register value the way the protocols are usually written:
/// an MSB-first bit string when the register is a power of two wide,
/// plain decimal otherwise.
pub fn basis_label(value: usize, dim: usize) -> String {
    if dim.is_power_of_two() {
        let width = dim.trailing_zeros() as usize;
        format!("{value:0width$b}")
    } else {
        value.to_string()
    }
}

/// Coefficients `c_k` of a coin-register state, e.g. the payload to transfer.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinStateSpec {
    coefficients: Vec<C64>,
}

impl CoinStateSpec {
    pub fn new(coefficients: Vec<C64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidLayout(
                "coin state needs at least two coefficients".into(),
            ));
        }
        let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(CoinStateSpec { coefficients })
    }

    /// Scales `coefficients` to unit norm. Also returns the original ‖c‖².
    pub fn normalized(coefficients: Vec<C64>) -> Result<(Self, f64)> {
        let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        let scale = 1.0 / norm.sqrt();
        let spec = Self::new(coefficients.into_iter().map(|c| c * scale).collect())?;
        Ok((spec, norm))
    }

    pub fn from_real(coefficients: &[f64]) -> Result<Self> {
        Self::new(coefficients.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::OutOfRange {
                what: "basis index",
                value: k,
                bound: dim,
            });
        }
        let mut c = vec![ZERO; dim];
        c[k] = C64::new(1.0, 0.0);
        Self::new(c)
    }

    /// `α|0⟩ + β|1⟩`.
    pub fn qubit(alpha: C64, beta: C64) -> Result<Self> {
        Self::new(vec![alpha, beta])
    }

    /// `(|00⟩ + |11⟩)/√2` on a four-dimensional coin.
    pub fn bell() -> Self {
        Self::sparse(4, &[0, 3])
    }

    /// `(|000⟩ + |111⟩)/√2` on an eight-dimensional coin.
    pub fn ghz() -> Self {
        Self::sparse(8, &[0, 7])
    }

    /// `(|001⟩ + |010⟩ + |100⟩)/√3` on an eight-dimensional coin.
    pub fn w() -> Self {
        Self::sparse(8, &[1, 2, 4])
    }

    fn sparse(dim: usize, support: &[usize]) -> Self {
        let a = 1.0 / (support.len() as f64).sqrt();
        let mut c = vec![ZERO; dim];
        for &k in support {
            c[k] = C64::new(a, 0.0);
        }
        CoinStateSpec { coefficients: c }
    }

    /// Haar-ish random state: normalized complex Gaussian vector.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        loop {
            let c: Vec<C64> = (0..dim)
                .map(|_| C64::new(gaussian(rng), gaussian(rng)))
                .collect();
            if let Ok((spec, _)) = Self::normalized(c) {
                return spec;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    /// `|φ⟩⟨φ|`.
    pub fn density(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, self.coefficients[i] * self.coefficients[j].conj());
            }
        }
        m
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box–Muller
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Pure state of the walker: one amplitude per basis triple.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    layout: HilbertLayout,
    amplitudes: Vec<C64>,
}

impl WalkState {
    /// `|position⟩ ⊗ (Σ c_k|k⟩) ⊗ |coin2⟩`.
    pub fn make_product_state(
        layout: HilbertLayout,
        position: usize,
        coin1: &CoinStateSpec,
        coin2: usize,
    ) -> Result<Self> {
        if position >= layout.position_dim {
            return Err(Error::OutOfRange {
                what: "position",
                value: position,
                bound: layout.position_dim,
            });
        }
        if coin2 >= layout.coin2_dim {
            return Err(Error::OutOfRange {
                what: "coin2 basis index",
                value: coin2,
                bound: layout.coin2_dim,
            });
        }
        if coin1.dim() != layout.coin1_dim {
            return Err(Error::DimensionMismatch {
                expected: layout.coin1_dim,
                found: coin1.dim(),
            });
        }
        let mut amplitudes = vec![ZERO; layout.total_dim()];
        for (c1, &a) in coin1.coefficients().iter().enumerate() {
            amplitudes[layout.index(position, c1, coin2)] = a;
        }
        Ok(WalkState { layout, amplitudes })
    }

    pub fn basis(layout: HilbertLayout, v: usize, c1: usize, c2: usize) -> Result<Self> {
        let coin = CoinStateSpec::basis(layout.coin1_dim, c1)?;
        Self::make_product_state(layout, v, &coin, c2)
    }

    pub fn from_amplitudes(layout: HilbertLayout, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: amplitudes.len(),
            });
        }
        let state = WalkState { layout, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub(crate) fn from_raw(layout: HilbertLayout, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), layout.total_dim());
        WalkState { layout, amplitudes }
    }

    pub fn layout(&self) -> HilbertLayout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn amplitude(&self, v: usize, c1: usize, c2: usize) -> C64 {
        self.amplitudes[self.layout.index(v, c1, c2)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Born probabilities of a Z-basis measurement of one register.
    pub fn marginal_distribution(&self, reg: Register) -> Vec<f64> {
        let mut p = vec![0.0; self.layout.dim(reg)];
        for (k, a) in self.amplitudes.iter().enumerate() {
            p[self.layout.register_value(k, reg)] += a.norm_sqr();
        }
        p
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &WalkState) -> Result<C64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Reduced density matrix of `reg`, tracing out the other two registers.
    pub fn reduced_density(&self, reg: Register) -> CMatrix {
        self.reduced_density_where(reg, |_| true)
    }

    /// Unnormalized reduced density of a coin register restricted to basis
    /// states with the walker at `position`. Its trace is the probability of
    /// finding the walker there.
    pub fn conditional_coin_density(&self, reg: Register, position: usize) -> CMatrix {
        let layout = self.layout;
        self.reduced_density_where(reg, |k| {
            layout.register_value(k, Register::Position) == position
        })
    }

    fn reduced_density_where(&self, reg: Register, keep: impl Fn(usize) -> bool) -> CMatrix {
        let d = self.layout.dim(reg);
        let stride = self.layout.stride(reg);
        let mut rho = CMatrix::zeros(d);
        // iterate over basis states with reg = 0, pairing all values of reg
        for base in 0..self.amplitudes.len() {
            if self.layout.register_value(base, reg) != 0 || !keep(base) {
                continue;
            }
            for i in 0..d {
                let ai = self.amplitudes[base + i * stride];
                if ai == ZERO {
                    continue;
                }
                for j in 0..d {
                    let aj = self.amplitudes[base + j * stride];
                    rho.add_to(i, j, ai * aj.conj());
                }
            }
        }
        rho
    }

    /// Ket notation, MSB-first labels, amplitudes below `1e-12` omitted.
    pub fn to_ket_string(&self) -> String {
        let l = self.layout;
        let terms: Vec<String> = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 1e-12)
            .map(|(k, a)| {
                let (v, c1, c2) = l.unindex(k);
                format!(
                    "({:.6}{:+.6}i)|{}⟩|{}⟩|{}⟩",
                    a.re,
                    a.im,
                    basis_label(v, l.position_dim),
                    basis_label(c1, l.coin1_dim),
                    basis_label(c2, l.coin2_dim)
                )
            })
            .collect();
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn half_payload() -> CoinStateSpec {
        CoinStateSpec::from_real(&[0.5, 3f64.sqrt() / 2.0]).unwrap()
    }

    #[test]
    fn rejects_tiny_registers() {
        assert!(HilbertLayout::new(1, 2, 2).is_err());
        assert!(HilbertLayout::new(2, 2, 1).is_err());
    }

    #[test]
    fn index_roundtrip_small_layouts() {
        for (p, a, b) in [(2, 2, 2), (8, 2, 2), (3, 5, 7), (4, 4, 4)] {
            let l = HilbertLayout::new(p, a, b).unwrap();
            let mut seen = vec![false; l.total_dim()];
            for v in 0..p {
                for c1 in 0..a {
                    for c2 in 0..b {
                        let k = l.index(v, c1, c2);
                        assert!(!seen[k]);
                        seen[k] = true;
                        assert_eq!(l.unindex(k), (v, c1, c2));
                    }
                }
            }
            assert!(seen.into_iter().all(|s| s));
        }
    }

    #[test]
    fn product_state_of_half_payload() {
        let l = HilbertLayout::cycle(8).unwrap();
        let s = WalkState::make_product_state(l, 0, &half_payload(), 0).unwrap();
        assert_eq!(s.amplitude(0, 0, 0), r(0.5));
        assert_eq!(s.amplitude(0, 1, 0), r(3f64.sqrt() / 2.0));
        assert!((s.norm_sqr() - 1.0).abs() < NORM_TOL);
        assert!((s.marginal_distribution(Register::Position)[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_state_basis() {
        let l = HilbertLayout::new(2, 2, 2).unwrap();
        let s = WalkState::make_product_state(l, 0, &CoinStateSpec::from_real(&[1.0, 0.0]).unwrap(), 0)
            .unwrap();
        assert_eq!(s.amplitudes()[0], r(1.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == ZERO));
    }

    #[test]
    fn product_state_bell_on_four_complete() {
        let l = HilbertLayout::complete(4).unwrap();
        let s = WalkState::make_product_state(l, 0, &CoinStateSpec::bell(), 0).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((s.amplitude(0, 0, 0) - r(h)).norm() < 1e-15);
        assert!((s.amplitude(0, 3, 0) - r(h)).norm() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn product_state_errors() {
        let l = HilbertLayout::cycle(8).unwrap();
        assert!(matches!(
            WalkState::make_product_state(l, 0, &CoinStateSpec::bell(), 0),
            Err(Error::DimensionMismatch { expected: 2, found: 4 })
        ));
        assert!(WalkState::make_product_state(l, 8, &half_payload(), 0).is_err());
        assert!(WalkState::make_product_state(l, 0, &half_payload(), 2).is_err());
        assert!(CoinStateSpec::from_real(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn marginals_of_cycle8_final_state() {
        // |101⟩(½|1⟩ + (√3/2)|0⟩)|1⟩
        let l = HilbertLayout::cycle(8).unwrap();
        let coin = CoinStateSpec::from_real(&[3f64.sqrt() / 2.0, 0.5]).unwrap();
        let s = WalkState::make_product_state(l, 5, &coin, 1).unwrap();
        let pos = s.marginal_distribution(Register::Position);
        for (v, p) in pos.iter().enumerate() {
            assert!((p - if v == 5 { 1.0 } else { 0.0 }).abs() < 1e-15);
        }
        let c1 = s.marginal_distribution(Register::Coin1);
        assert!((c1[0] - 0.75).abs() < 1e-12 && (c1[1] - 0.25).abs() < 1e-12);
        let c2 = s.marginal_distribution(Register::Coin2);
        assert!(c2[0] == 0.0 && (c2[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn overlaps() {
        let l = HilbertLayout::complete(2).unwrap();
        let a = WalkState::make_product_state(l, 1, &half_payload(), 1).unwrap();
        assert!((a.overlap(&a).unwrap() - r(1.0)).norm() < 1e-15);
        let b0 = WalkState::basis(l, 0, 0, 0).unwrap();
        let b1 = WalkState::basis(l, 1, 0, 0).unwrap();
        assert_eq!(b0.overlap(&b1).unwrap(), ZERO);
        let other = WalkState::basis(HilbertLayout::cycle(2).unwrap(), 0, 0, 0).unwrap();
        assert_eq!(other.layout(), l); // (2,2,2) both ways
        let l3 = HilbertLayout::cycle(3).unwrap();
        assert_eq!(
            WalkState::basis(l3, 0, 0, 0).unwrap().overlap(&b0),
            Err(Error::LayoutMismatch)
        );
    }

    #[test]
    fn reduced_density_of_product_is_pure() {
        let l = HilbertLayout::cycle(4).unwrap();
        let payload = half_payload();
        let s = WalkState::make_product_state(l, 2, &payload, 1).unwrap();
        let rho = s.reduced_density(Register::Coin1);
        assert!(rho.max_abs_diff(&payload.density()) < 1e-15);
        let cond = s.conditional_coin_density(Register::Coin1, 2);
        assert!(cond.max_abs_diff(&payload.density()) < 1e-15);
        assert_eq!(s.conditional_coin_density(Register::Coin1, 1).trace(), ZERO);
    }

    #[test]
    fn labels_are_msb_first() {
        assert_eq!(basis_label(5, 8), "101");
        assert_eq!(basis_label(1, 4), "01");
        assert_eq!(basis_label(4, 6), "4");
    }

    proptest! {
        #[test]
        fn random_index_roundtrip(p in 2usize..10, a in 2usize..10, b in 2usize..10, seed in any::<u64>()) {
            let l = HilbertLayout::new(p, a, b).unwrap();
            let k = (seed as usize) % l.total_dim();
            let (v, c1, c2) = l.unindex(k);
            prop_assert_eq!(l.index(v, c1, c2), k);
        }

        #[test]
        fn product_states_and_marginals_normalized(dim in 2usize..9, pos in 0usize..8, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let l = HilbertLayout::new(8, dim, 3).unwrap();
            let payload = CoinStateSpec::random(dim, &mut rng);
            let s = WalkState::make_product_state(l, pos, &payload, 2).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < NORM_TOL);
            for reg in Register::ALL {
                let m = s.marginal_distribution(reg);
                prop_assert!(m.iter().all(|&p| p >= 0.0));
                prop_assert!((m.iter().sum::<f64>() - 1.0).abs() < NORM_TOL);
            }
        }

        #[test]
        fn marginals_of_random_states(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let l = HilbertLayout::new(3, 4, 2).unwrap();
            let amps = CoinStateSpec::random(l.total_dim(), &mut rng).coefficients().to_vec();
            let s = WalkState::from_amplitudes(l, amps).unwrap();
            for reg in Register::ALL {
                let m = s.marginal_distribution(reg);
                prop_assert!(m.iter().all(|&p| p >= 0.0));
                prop_assert!((m.iter().sum::<f64>() - 1.0).abs() < NORM_TOL);
            }
        }
    }
}
