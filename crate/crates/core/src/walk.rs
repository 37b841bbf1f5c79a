//! Coin operators, conditional shifts and the alternating two-coin evolution.
//!
//! Shifts are applied as exact index permutations. Dense operators are only
//! assembled by [`unitary_of`] and friends, which serve as the brute-force
//! oracle for the permutation path.

use crate::error::{Error, Result};
use crate::hilbert::{HilbertLayout, Register, WalkState};
use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::protocols::Schedule;
use std::fmt;

/// Largest total dimension for which dense operators are assembled.
pub const DENSE_GUARD: usize = 4096;

/// Which of the two coins a step flips.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coin {
    First,
    Second,
}

impl Coin {
    pub fn register(self) -> Register {
        match self {
            Coin::First => Register::Coin1,
            Coin::Second => Register::Coin2,
        }
    }

    /// Coin used by the 1-based step `t`: odd steps flip coin 1, even steps coin 2.
    pub fn for_step(t: usize) -> Coin {
        if t % 2 == 1 {
            Coin::First
        } else {
            Coin::Second
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Coin::First => 1,
            Coin::Second => 2,
        }
    }
}

/// Conditional shift family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShiftKind {
    /// `|v⟩|0⟩ → |v+1 mod l⟩|0⟩`, `|v⟩|1⟩ → |v−1 mod l⟩|1⟩`.
    Cycle,
    /// `|v⟩|j⟩ → |v+j mod n⟩|j⟩`.
    Complete,
}

impl ShiftKind {
    fn target(self, v: usize, j: usize, n: usize) -> usize {
        match self {
            ShiftKind::Cycle => {
                if j == 0 {
                    (v + 1) % n
                } else {
                    (v + n - 1) % n
                }
            }
            ShiftKind::Complete => (v + j) % n,
        }
    }

    fn check(self, layout: &HilbertLayout, coin: Coin) -> Result<()> {
        let d = layout.dim(coin.register());
        match self {
            ShiftKind::Cycle if d != 2 => Err(Error::DimensionMismatch {
                expected: 2,
                found: d,
            }),
            ShiftKind::Complete if d != layout.position_dim() => Err(Error::DimensionMismatch {
                expected: layout.position_dim(),
                found: d,
            }),
            _ => Ok(()),
        }
    }
}

/// Unitary acting on one coin register.
#[derive(Clone, Debug, PartialEq)]
pub enum CoinOperator {
    Identity(usize),
    PauliX,
    /// Cyclic increment `|k⟩ → |k+1 mod n⟩`.
    GeneralizedX(usize),
    /// `[[cos θ/2, −e^{iλ} sin θ/2], [e^{iφ} sin θ/2, e^{i(λ+φ)} cos θ/2]]`.
    U3 {
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    Matrix(CMatrix),
}

/// The U3 matrix as a row-major 2×2 array.
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> [[C64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), -C64::from_polar(s, lambda)],
        [C64::from_polar(s, phi), C64::from_polar(c, lambda + phi)],
    ]
}

impl CoinOperator {
    /// Wraps an explicit matrix after checking `U†U = I` within `1e-10`.
    pub fn unitary(matrix: CMatrix) -> Result<Self> {
        let err = matrix.unitarity_error();
        if err > 1e-10 {
            return Err(Error::InvalidGate(format!(
                "coin matrix is not unitary (error {err:e})"
            )));
        }
        Ok(CoinOperator::Matrix(matrix))
    }

    pub fn dim(&self) -> usize {
        match self {
            CoinOperator::Identity(d) | CoinOperator::GeneralizedX(d) => *d,
            CoinOperator::PauliX | CoinOperator::U3 { .. } => 2,
            CoinOperator::Matrix(m) => m.dim(),
        }
    }

    pub fn matrix(&self) -> CMatrix {
        match self {
            CoinOperator::Identity(d) => CMatrix::identity(*d),
            CoinOperator::PauliX => CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]),
            CoinOperator::GeneralizedX(n) => {
                let mut m = CMatrix::zeros(*n);
                for k in 0..*n {
                    m.set((k + 1) % n, k, ONE);
                }
                m
            }
            CoinOperator::U3 { theta, phi, lambda } => {
                let u = u3_matrix(*theta, *phi, *lambda);
                CMatrix::from_rows(&[u[0].to_vec(), u[1].to_vec()])
            }
            CoinOperator::Matrix(m) => m.clone(),
        }
    }

    /// Exact identity test on the matrix entries.
    pub fn is_identity(&self) -> bool {
        match self {
            CoinOperator::Identity(_) => true,
            other => other.matrix() == CMatrix::identity(other.dim()),
        }
    }

    /// Cyclic-shift amount if this operator is a basis increment.
    fn increment(&self) -> Option<usize> {
        match self {
            CoinOperator::PauliX | CoinOperator::GeneralizedX(_) => Some(1),
            CoinOperator::Identity(_) => Some(0),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            CoinOperator::Identity(_) => "I".into(),
            CoinOperator::PauliX => "X".into(),
            CoinOperator::GeneralizedX(n) => format!("X{n}"),
            CoinOperator::U3 { theta, phi, lambda } => format!("U3({theta},{phi},{lambda})"),
            CoinOperator::Matrix(m) => format!("M{}", m.dim()),
        }
    }
}

impl fmt::Display for CoinOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn check_coin_dim(layout: &HilbertLayout, reg: Register, op: &CoinOperator) -> Result<()> {
    let d = layout.dim(reg);
    if op.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: op.dim(),
        });
    }
    Ok(())
}

/// Applies `op` to a coin register in place.
pub fn apply_register_op_in_place(state: &mut WalkState, reg: Register, op: &CoinOperator) -> Result<()> {
    let layout = state.layout();
    check_coin_dim(&layout, reg, op)?;
    let d = layout.dim(reg);
    let stride = layout.stride(reg);
    let total = layout.total_dim();
    let amps = state.amplitudes_mut();
    let mut buf = vec![ZERO; d];
    match op.increment() {
        Some(0) => {}
        Some(shift) => {
            for base in (0..total).filter(|&k| layout.register_value(k, reg) == 0) {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = amps[base + i * stride];
                }
                for (i, b) in buf.iter().enumerate() {
                    amps[base + ((i + shift) % d) * stride] = *b;
                }
            }
        }
        None => {
            let m = op.matrix();
            for base in (0..total).filter(|&k| layout.register_value(k, reg) == 0) {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = amps[base + i * stride];
                }
                for i in 0..d {
                    amps[base + i * stride] = (0..d).map(|j| m.get(i, j) * buf[j]).sum();
                }
            }
        }
    }
    Ok(())
}

/// `(I ⊗ C ⊗ I)|ψ⟩` on the selected coin.
pub fn apply_coin(state: &WalkState, coin: Coin, op: &CoinOperator) -> Result<WalkState> {
    let mut out = state.clone();
    apply_register_op_in_place(&mut out, coin.register(), op)?;
    Ok(out)
}

/// Conditional shift controlled by the selected coin.
pub fn apply_shift(state: &WalkState, coin: Coin, kind: ShiftKind) -> Result<WalkState> {
    let layout = state.layout();
    kind.check(&layout, coin)?;
    let n = layout.position_dim();
    let reg = coin.register();
    let mut out = vec![ZERO; layout.total_dim()];
    for (k, &a) in state.amplitudes().iter().enumerate() {
        if a == ZERO {
            continue;
        }
        let (v, c1, c2) = layout.unindex(k);
        let j = layout.register_value(k, reg);
        out[layout.index(kind.target(v, j, n), c1, c2)] = a;
    }
    Ok(WalkState::from_raw(layout, out))
}

/// One walk step: coin operator, then the shift it controls.
pub fn step(state: &WalkState, coin: Coin, op: &CoinOperator, kind: ShiftKind) -> Result<WalkState> {
    kind.check(&state.layout(), coin)?;
    let flipped = apply_coin(state, coin, op)?;
    apply_shift(&flipped, coin, kind)
}

/// Runs every step of `schedule`, then its recovery operators.
pub fn evolve(state: &WalkState, schedule: &Schedule) -> Result<WalkState> {
    evolve_with(state, schedule, |_, _| {})
}

/// Like [`evolve`], calling `observe(t, state)` after each step `t` (1-based).
pub fn evolve_with(
    state: &WalkState,
    schedule: &Schedule,
    mut observe: impl FnMut(usize, &WalkState),
) -> Result<WalkState> {
    if state.layout() != schedule.layout() {
        return Err(Error::LayoutMismatch);
    }
    let mut current = state.clone();
    for (t, s) in schedule.steps().iter().enumerate() {
        current = step(&current, s.coin, &s.operator, schedule.shift())?;
        observe(t + 1, &current);
    }
    for r in schedule.recovery() {
        apply_register_op_in_place(&mut current, r.coin.register(), &r.operator)?;
    }
    Ok(current)
}

fn guard(layout: &HilbertLayout) -> Result<()> {
    if layout.total_dim() > DENSE_GUARD {
        return Err(Error::DimensionGuard {
            dim: layout.total_dim(),
            limit: DENSE_GUARD,
        });
    }
    Ok(())
}

/// `I_P ⊗ C ⊗ I` or `I_P ⊗ I ⊗ C` as a dense matrix.
pub fn coin_matrix(layout: &HilbertLayout, coin: Coin, op: &CoinOperator) -> Result<CMatrix> {
    guard(layout)?;
    check_coin_dim(layout, coin.register(), op)?;
    let p = CMatrix::identity(layout.position_dim());
    Ok(match coin {
        Coin::First => p
            .kron(&op.matrix())
            .kron(&CMatrix::identity(layout.coin2_dim())),
        Coin::Second => p
            .kron(&CMatrix::identity(layout.coin1_dim()))
            .kron(&op.matrix()),
    })
}

/// The shift operator assembled term by term from its outer-product sum.
pub fn shift_matrix(layout: &HilbertLayout, coin: Coin, kind: ShiftKind) -> Result<CMatrix> {
    guard(layout)?;
    kind.check(layout, coin)?;
    let n = layout.position_dim();
    let (d_sel, d_other) = match coin {
        Coin::First => (layout.coin1_dim(), layout.coin2_dim()),
        Coin::Second => (layout.coin2_dim(), layout.coin1_dim()),
    };
    let mut m = CMatrix::zeros(layout.total_dim());
    for i in 0..n {
        for j in 0..d_sel {
            let to = kind.target(i, j, n);
            for o in 0..d_other {
                let (row, col) = match coin {
                    Coin::First => (layout.index(to, j, o), layout.index(i, j, o)),
                    Coin::Second => (layout.index(to, o, j), layout.index(i, o, j)),
                };
                m.add_to(row, col, ONE);
            }
        }
    }
    Ok(m)
}

/// `U = S · (I ⊗ C)` for one step.
pub fn step_matrix(layout: &HilbertLayout, coin: Coin, op: &CoinOperator, kind: ShiftKind) -> Result<CMatrix> {
    Ok(shift_matrix(layout, coin, kind)?.mul(&coin_matrix(layout, coin, op)?))
}

/// Dense unitary of the whole schedule, recovery included.
pub fn unitary_of(schedule: &Schedule) -> Result<CMatrix> {
    let layout = schedule.layout();
    guard(&layout)?;
    let mut u = CMatrix::identity(layout.total_dim());
    for s in schedule.steps() {
        u = step_matrix(&layout, s.coin, &s.operator, schedule.shift())?.mul(&u);
    }
    for r in schedule.recovery() {
        u = coin_matrix(&layout, r.coin, &r.operator)?.mul(&u);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::CoinStateSpec;
    use crate::protocols::{Schedule, ScheduleStep};

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn half_state() -> WalkState {
        let payload = CoinStateSpec::from_real(&[0.5, 3f64.sqrt() / 2.0]).unwrap();
        WalkState::make_product_state(HilbertLayout::cycle(8).unwrap(), 0, &payload, 0).unwrap()
    }

    #[test]
    fn identity_coin_leaves_state() {
        let s = half_state();
        assert_eq!(apply_coin(&s, Coin::First, &CoinOperator::Identity(2)).unwrap(), s);
    }

    #[test]
    fn pauli_x_swaps_payload_amplitudes() {
        let s = apply_coin(&half_state(), Coin::First, &CoinOperator::PauliX).unwrap();
        assert_eq!(s.amplitude(0, 1, 0), r(0.5));
        assert_eq!(s.amplitude(0, 0, 0), r(3f64.sqrt() / 2.0));
    }

    #[test]
    fn generalized_x_twice_on_coin2() {
        let l = HilbertLayout::complete(4).unwrap();
        let s = WalkState::basis(l, 1, 3, 2).unwrap();
        let x4 = CoinOperator::GeneralizedX(4);
        let s = apply_coin(&apply_coin(&s, Coin::Second, &x4).unwrap(), Coin::Second, &x4).unwrap();
        assert_eq!(s.amplitude(1, 3, 0), r(1.0));
    }

    #[test]
    fn coin_dimension_errors() {
        let s = half_state();
        assert!(matches!(
            apply_coin(&s, Coin::First, &CoinOperator::GeneralizedX(4)),
            Err(Error::DimensionMismatch { .. })
        ));
        let l = HilbertLayout::new(4, 2, 2).unwrap();
        let s = WalkState::basis(l, 0, 0, 0).unwrap();
        assert!(apply_shift(&s, Coin::First, ShiftKind::Complete).is_err());
        let l = HilbertLayout::new(4, 4, 4).unwrap();
        let s = WalkState::basis(l, 0, 0, 0).unwrap();
        assert!(apply_shift(&s, Coin::First, ShiftKind::Cycle).is_err());
    }

    #[test]
    fn complete_shift_adds_coin_value() {
        let l = HilbertLayout::complete(4).unwrap();
        let s = WalkState::basis(l, 2, 3, 0).unwrap();
        let out = apply_shift(&s, Coin::First, ShiftKind::Complete).unwrap();
        assert_eq!(out.amplitude(1, 3, 0), r(1.0));
    }

    #[test]
    fn cycle_shift_coin_one_moves_left() {
        let s = WalkState::basis(HilbertLayout::cycle(8).unwrap(), 0, 1, 0).unwrap();
        let out = apply_shift(&s, Coin::First, ShiftKind::Cycle).unwrap();
        assert_eq!(out.amplitude(7, 1, 0), r(1.0));
    }

    #[test]
    fn two_complete_first_shift_closed_form() {
        let payload = CoinStateSpec::from_real(&[0.5, 3f64.sqrt() / 2.0]).unwrap();
        let l = HilbertLayout::complete(2).unwrap();
        let s = WalkState::make_product_state(l, 0, &payload, 0).unwrap();
        let out = apply_shift(&s, Coin::First, ShiftKind::Complete).unwrap();
        assert_eq!(out.amplitude(0, 0, 0), r(0.5));
        assert_eq!(out.amplitude(1, 1, 0), r(3f64.sqrt() / 2.0));
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_step_with_coin2_zero_is_noop() {
        let l = HilbertLayout::complete(2).unwrap();
        let payload = CoinStateSpec::from_real(&[0.6, 0.8]).unwrap();
        let s = WalkState::make_product_state(l, 1, &payload, 0).unwrap();
        let out = step(&s, Coin::Second, &CoinOperator::Identity(2), ShiftKind::Complete).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn first_cycle8_step_against_dense_oracle() {
        let s = half_state();
        let out = step(&s, Coin::First, &CoinOperator::PauliX, ShiftKind::Cycle).unwrap();
        // ½|7⟩|1⟩|0⟩ + (√3/2)|1⟩|0⟩|0⟩
        assert_eq!(out.amplitude(7, 1, 0), r(0.5));
        assert_eq!(out.amplitude(1, 0, 0), r(3f64.sqrt() / 2.0));
        let m = step_matrix(&s.layout(), Coin::First, &CoinOperator::PauliX, ShiftKind::Cycle).unwrap();
        let dense = m.mul_vec(s.amplitudes());
        for (a, b) in dense.iter().zip(out.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn four_complete_identity_step_closed_form() {
        let l = HilbertLayout::complete(4).unwrap();
        let s = WalkState::make_product_state(l, 0, &CoinStateSpec::bell(), 0).unwrap();
        let out = step(&s, Coin::First, &CoinOperator::Identity(4), ShiftKind::Complete).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((out.amplitude(0, 0, 0) - r(h)).norm() < 1e-15);
        assert!((out.amplitude(3, 3, 0) - r(h)).norm() < 1e-15);
    }

    #[test]
    fn empty_schedule_is_identity() {
        let l = HilbertLayout::complete(2).unwrap();
        let sched = Schedule::new("empty", l, ShiftKind::Complete, vec![], vec![], 0, 0).unwrap();
        let s = WalkState::basis(l, 1, 1, 0).unwrap();
        assert_eq!(evolve(&s, &sched).unwrap(), s);
        assert_eq!(unitary_of(&sched).unwrap(), CMatrix::identity(8));
    }

    #[test]
    fn single_shift_matrix_is_permutation() {
        let l = HilbertLayout::complete(2).unwrap();
        let m = shift_matrix(&l, Coin::First, ShiftKind::Complete).unwrap();
        assert_eq!(m.dim(), 8);
        assert!(m.is_permutation());
    }

    #[test]
    fn dense_guard() {
        let l = HilbertLayout::new(17, 16, 16).unwrap();
        assert!(matches!(
            shift_matrix(&l, Coin::First, ShiftKind::Complete),
            Err(Error::DimensionGuard { .. })
        ));
    }

    #[test]
    fn generalized_x_has_order_n() {
        for n in 2..=8 {
            let x = CoinOperator::GeneralizedX(n).matrix();
            let mut p = CMatrix::identity(n);
            for k in 1..=n {
                p = x.mul(&p);
                assert!(p.is_permutation());
                assert_eq!(p == CMatrix::identity(n), k == n);
            }
        }
    }

    #[test]
    fn u3_is_unitary_and_prepares_payload() {
        let u = CoinOperator::U3 {
            theta: 2.0 * std::f64::consts::PI / 3.0,
            phi: 0.0,
            lambda: std::f64::consts::FRAC_PI_2,
        }
        .matrix();
        assert!(u.is_unitary(1e-12));
        assert!((u.get(0, 0) - r(0.5)).norm() < 1e-15);
        assert!((u.get(1, 0) - r(3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn explicit_matrix_must_be_unitary() {
        let bad = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
        assert!(CoinOperator::unitary(bad).is_err());
        let h = 1.0 / 2f64.sqrt();
        let good = CMatrix::from_real_rows(&[vec![h, h], vec![h, -h]]);
        assert!(CoinOperator::unitary(good).is_ok());
    }

    #[test]
    fn cycle_shifts_with_opposite_coins_cancel() {
        for l in 2..=9 {
            let layout = HilbertLayout::cycle(l).unwrap();
            for v in 0..l {
                // coin1 in |0⟩ moves +1, then coin2 in |1⟩ moves −1
                let s = WalkState::basis(layout, v, 0, 1).unwrap();
                let a = apply_shift(&s, Coin::First, ShiftKind::Cycle).unwrap();
                let b = apply_shift(&a, Coin::Second, ShiftKind::Cycle).unwrap();
                assert_eq!(b, s);
            }
        }
    }

    #[test]
    fn recovery_is_applied_after_steps() {
        let l = HilbertLayout::cycle(4).unwrap();
        let sched = Schedule::new(
            "x-then-recover",
            l,
            ShiftKind::Cycle,
            vec![ScheduleStep::new(Coin::First, CoinOperator::PauliX)],
            vec![ScheduleStep::new(Coin::First, CoinOperator::PauliX)],
            0,
            3,
        )
        .unwrap();
        let s = WalkState::basis(l, 0, 0, 0).unwrap();
        let out = evolve(&s, &sched).unwrap();
        // X flips to |1⟩, moves to 3, recovery flips back
        assert_eq!(out.amplitude(3, 0, 0), r(1.0));
        let u = unitary_of(&sched).unwrap();
        assert!((u.mul_vec(s.amplitudes())[l.index(3, 0, 0)] - r(1.0)).norm() < 1e-15);
    }
}
