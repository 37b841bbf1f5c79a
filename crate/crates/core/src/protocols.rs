//! Perfect-state-transfer schedules: the 8-cycle instance, the 2n-step
//! complete-graph scheme, schedule simplification, transfer verification and
//! exhaustive search for cycle schedules.

use crate::error::{Error, Result};
use crate::hilbert::{CoinStateSpec, HilbertLayout, Register, WalkState};
use crate::linalg::CMatrix;
use crate::par::Exec;
use crate::walk::{self, Coin, CoinOperator, ShiftKind};

/// Tolerance used when deciding that a composed prefix is the identity.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Largest cycle accepted by [`search_cycle_schedules`].
pub const SEARCH_MAX_CYCLE: usize = 12;
/// Largest step count accepted by [`search_cycle_schedules`].
pub const SEARCH_MAX_STEPS: usize = 12;

/// A coin operator bound to the coin it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleStep {
    pub coin: Coin,
    pub operator: CoinOperator,
}

impl ScheduleStep {
    pub fn new(coin: Coin, operator: CoinOperator) -> Self {
        ScheduleStep { coin, operator }
    }
}

/// A transfer protocol: walk steps, recovery operators, source and target.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    name: String,
    layout: HilbertLayout,
    shift: ShiftKind,
    steps: Vec<ScheduleStep>,
    recovery: Vec<ScheduleStep>,
    source: usize,
    target: usize,
    simplified: bool,
}

impl Schedule {
    /// Builds an alternating schedule: step `t` must use coin 1 when `t` is
    /// odd and coin 2 when `t` is even.
    pub fn new(
        name: impl Into<String>,
        layout: HilbertLayout,
        shift: ShiftKind,
        steps: Vec<ScheduleStep>,
        recovery: Vec<ScheduleStep>,
        source: usize,
        target: usize,
    ) -> Result<Self> {
        for (i, s) in steps.iter().enumerate() {
            let expected = Coin::for_step(i + 1);
            if s.coin != expected {
                return Err(Error::InvalidSchedule(format!(
                    "step {} uses coin {} but alternation requires coin {}",
                    i + 1,
                    s.coin.number(),
                    expected.number()
                )));
            }
        }
        Self::build(name.into(), layout, shift, steps, recovery, source, target, false)
    }

    /// Builds a schedule whose steps need not alternate.
    pub fn new_simplified(
        name: impl Into<String>,
        layout: HilbertLayout,
        shift: ShiftKind,
        steps: Vec<ScheduleStep>,
        recovery: Vec<ScheduleStep>,
        source: usize,
        target: usize,
    ) -> Result<Self> {
        Self::build(name.into(), layout, shift, steps, recovery, source, target, true)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        name: String,
        layout: HilbertLayout,
        shift: ShiftKind,
        steps: Vec<ScheduleStep>,
        recovery: Vec<ScheduleStep>,
        source: usize,
        target: usize,
        simplified: bool,
    ) -> Result<Self> {
        let n = layout.position_dim();
        for (what, v) in [("source", source), ("target", target)] {
            if v >= n {
                return Err(Error::OutOfRange {
                    what,
                    value: v,
                    bound: n,
                });
            }
        }
        for s in steps.iter().chain(&recovery) {
            let d = layout.dim(s.coin.register());
            if s.operator.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: s.operator.dim(),
                });
            }
        }
        let needed = match shift {
            ShiftKind::Cycle => 2,
            ShiftKind::Complete => n,
        };
        for coin in [Coin::First, Coin::Second] {
            if steps.iter().any(|s| s.coin == coin) && layout.dim(coin.register()) != needed {
                return Err(Error::DimensionMismatch {
                    expected: needed,
                    found: layout.dim(coin.register()),
                });
            }
        }
        Ok(Schedule {
            name,
            layout,
            shift,
            steps,
            recovery,
            source,
            target,
            simplified,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn layout(&self) -> HilbertLayout {
        self.layout
    }

    pub fn shift(&self) -> ShiftKind {
        self.shift
    }

    pub fn steps(&self) -> &[ScheduleStep] {
        &self.steps
    }

    pub fn recovery(&self) -> &[ScheduleStep] {
        &self.recovery
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn is_simplified(&self) -> bool {
        self.simplified
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// Compact text form, e.g. `c1:X c2:I … | rec c1:X`.
    pub fn describe(&self) -> String {
        let mut out: Vec<String> = self
            .steps
            .iter()
            .map(|s| format!("c{}:{}", s.coin.number(), s.operator))
            .collect();
        if !self.recovery.is_empty() {
            out.push("|".into());
            out.push("rec".into());
            out.extend(
                self.recovery
                    .iter()
                    .map(|s| format!("c{}:{}", s.coin.number(), s.operator)),
            );
        }
        out.join(" ")
    }
}

/// Qubit transfer on the 8-cycle from vertex 0 to vertex 5: seven steps with
/// `X` on coin 1 at step 1 and on coin 2 at step 6, then `X` on coin 1 as
/// recovery.
pub fn cycle8_schedule() -> Schedule {
    let flips = [true, false, false, false, false, true, false];
    cycle_schedule(8, 0, 5, &flips, true).expect("static 8-cycle schedule is valid")
}

/// Alternating cycle schedule where `flips[t-1]` selects `X` (else `I`) at
/// step `t`, with an optional `X` recovery on coin 1.
pub fn cycle_schedule(
    l: usize,
    source: usize,
    target: usize,
    flips: &[bool],
    recover_x: bool,
) -> Result<Schedule> {
    let layout = HilbertLayout::cycle(l)?;
    let steps = flips
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let op = if x {
                CoinOperator::PauliX
            } else {
                CoinOperator::Identity(2)
            };
            ScheduleStep::new(Coin::for_step(i + 1), op)
        })
        .collect();
    let recovery = if recover_x {
        vec![ScheduleStep::new(Coin::First, CoinOperator::PauliX)]
    } else {
        vec![]
    };
    Schedule::new(
        format!("cycle{l} {source}->{target}"),
        layout,
        ShiftKind::Cycle,
        steps,
        recovery,
        source,
        target,
    )
}

/// 2n-step transfer from vertex 0 to `y` on the n-complete graph. Every coin
/// is the identity except `X_n` on coin 2 at step `2n − 2y + 2`; for `y = 0`
/// that index lies past the walk and the schedule is all identity.
pub fn complete_pst_schedule(n: usize, y: usize) -> Result<Schedule> {
    let layout = HilbertLayout::complete(n)?;
    if y >= n {
        return Err(Error::OutOfRange {
            what: "target vertex",
            value: y,
            bound: n,
        });
    }
    let flip_at = 2 * n + 2 - 2 * y;
    let steps = (1..=2 * n)
        .map(|t| {
            let op = if t == flip_at {
                CoinOperator::GeneralizedX(n)
            } else {
                CoinOperator::Identity(n)
            };
            ScheduleStep::new(Coin::for_step(t), op)
        })
        .collect();
    Schedule::new(
        format!("complete{n} 0->{y}"),
        layout,
        ShiftKind::Complete,
        steps,
        vec![],
        0,
        y,
    )
}

fn product_of(layout: &HilbertLayout, shift: ShiftKind, steps: &[ScheduleStep]) -> Result<Vec<CMatrix>> {
    // running products P_k = U_k ⋯ U_1, k = 1..len
    let mut acc = CMatrix::identity(layout.total_dim());
    let mut out = Vec::with_capacity(steps.len());
    for s in steps {
        acc = walk::step_matrix(layout, s.coin, &s.operator, shift)?.mul(&acc);
        out.push(acc.clone());
    }
    Ok(out)
}

/// Drops steps that cannot change an input whose second coin starts in `|0⟩`:
///
/// * on complete graphs, identity steps on coin 2 before coin 2 is first
///   flipped (the shift adds 0);
/// * then the longest prefix whose composed unitary is the identity.
pub fn simplify(schedule: &Schedule) -> Result<Schedule> {
    let layout = schedule.layout();
    if layout.total_dim() > walk::DENSE_GUARD {
        return Err(Error::DimensionGuard {
            dim: layout.total_dim(),
            limit: walk::DENSE_GUARD,
        });
    }
    let mut steps: Vec<ScheduleStep> = schedule.steps().to_vec();
    if schedule.shift() == ShiftKind::Complete {
        let first_flip = steps
            .iter()
            .position(|s| s.coin == Coin::Second && !s.operator.is_identity())
            .unwrap_or(steps.len());
        let mut i = 0;
        steps.retain(|s| {
            let keep = i >= first_flip || s.coin == Coin::First || !s.operator.is_identity();
            i += 1;
            keep
        });
    }
    let identity = CMatrix::identity(layout.total_dim());
    let prefix = product_of(&layout, schedule.shift(), &steps)?
        .iter()
        .rposition(|p| p.max_abs_diff(&identity) <= IDENTITY_TOL)
        .map_or(0, |k| k + 1);
    steps.drain(..prefix);

    if steps.len() == schedule.step_count() {
        return Ok(schedule.clone());
    }
    Schedule::new_simplified(
        format!("{} (simplified)", schedule.name()),
        layout,
        schedule.shift(),
        steps,
        schedule.recovery().to_vec(),
        schedule.source(),
        schedule.target(),
    )
}

/// Outcome of running a schedule on a payload.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferReport {
    pub schedule: String,
    pub steps: usize,
    pub source: usize,
    pub target: usize,
    pub position_distribution: Vec<f64>,
    pub coin1_distribution: Vec<f64>,
    pub coin2_distribution: Vec<f64>,
    /// Probability of finding the walker at the target.
    pub success_probability: f64,
    /// `⟨payload|ρ₁|payload⟩`, with `ρ₁` the coin-1 state conditioned on the
    /// walker sitting at the target (after recovery).
    pub fidelity: f64,
    pub final_state: WalkState,
}

/// Starts from `|source⟩ ⊗ payload ⊗ |0⟩`, evolves and scores the result.
pub fn verify_transfer(schedule: &Schedule, payload: &CoinStateSpec) -> Result<TransferReport> {
    let initial = WalkState::make_product_state(schedule.layout(), schedule.source(), payload, 0)?;
    let final_state = walk::evolve(&initial, schedule)?;
    let rho = final_state.conditional_coin_density(Register::Coin1, schedule.target());
    let success = rho.trace().re;
    let fidelity = if success > 1e-15 {
        let c = payload.coefficients();
        let mut f = 0.0;
        for i in 0..c.len() {
            for j in 0..c.len() {
                f += (c[i].conj() * rho.get(i, j) * c[j]).re;
            }
        }
        (f / success).max(0.0)
    } else {
        0.0
    };
    Ok(TransferReport {
        schedule: schedule.name().to_string(),
        steps: schedule.step_count(),
        source: schedule.source(),
        target: schedule.target(),
        position_distribution: final_state.marginal_distribution(Register::Position),
        coin1_distribution: final_state.marginal_distribution(Register::Coin1),
        coin2_distribution: final_state.marginal_distribution(Register::Coin2),
        success_probability: success,
        fidelity,
        final_state,
    })
}

/// [`verify_transfer`] over many payloads; order of results follows `payloads`.
pub fn verify_batch(schedule: &Schedule, payloads: &[CoinStateSpec], exec: Exec) -> Result<Vec<TransferReport>> {
    exec.map(payloads, |p| verify_transfer(schedule, p))
        .into_iter()
        .collect()
}

/// True when `U|source⟩|c⟩|0⟩ = |target⟩|c⟩|χ⟩` for both coin-1 basis
/// states with one shared `χ`, which makes the transfer exact for every
/// payload by linearity.
fn transfers_every_payload(schedule: &Schedule) -> Result<bool> {
    const TOL: f64 = 1e-9;
    let layout = schedule.layout();
    let mut chis = Vec::with_capacity(2);
    for c in 0..2 {
        let out = walk::evolve(&WalkState::basis(layout, schedule.source(), c, 0)?, schedule)?;
        for (k, a) in out.amplitudes().iter().enumerate() {
            let (v, c1, _) = layout.unindex(k);
            if (v != schedule.target() || c1 != c) && a.norm() > TOL {
                return Ok(false);
            }
        }
        let chi: Vec<_> = (0..layout.coin2_dim())
            .map(|c2| out.amplitude(schedule.target(), c, c2))
            .collect();
        chis.push(chi);
    }
    Ok(chis[0].iter().zip(&chis[1]).all(|(a, b)| (a - b).norm() <= TOL))
}

/// Every alternating `{I, X}` coin assignment with at most `max_steps` steps,
/// paired with recovery `I` or `X` on coin 1, that transfers any payload from
/// `source` to `target` on the `l`-cycle. Sorted by step count, then by the
/// flip pattern read as a binary number (step 1 least significant), then
/// recovery `I` before `X`.
pub fn search_cycle_schedules(l: usize, source: usize, target: usize, max_steps: usize) -> Result<Vec<Schedule>> {
    search_cycle_schedules_with(l, source, target, max_steps, Exec::default())
}

pub fn search_cycle_schedules_with(
    l: usize,
    source: usize,
    target: usize,
    max_steps: usize,
    exec: Exec,
) -> Result<Vec<Schedule>> {
    if l > SEARCH_MAX_CYCLE || max_steps > SEARCH_MAX_STEPS {
        return Err(Error::SearchGuard(format!(
            "l = {l}, max_steps = {max_steps} (limits {SEARCH_MAX_CYCLE}, {SEARCH_MAX_STEPS})"
        )));
    }
    let layout = HilbertLayout::cycle(l)?;
    for (what, v) in [("source", source), ("target", target)] {
        if v >= l {
            return Err(Error::OutOfRange {
                what,
                value: v,
                bound: layout.position_dim(),
            });
        }
    }
    // candidate c ↦ (steps t, mask, recovery) in sorted order
    let mut offsets = Vec::with_capacity(max_steps + 2);
    let mut total = 0usize;
    for t in 0..=max_steps {
        offsets.push(total);
        total += 2usize << t;
    }
    offsets.push(total);
    let decode = |c: usize| {
        let t = offsets.partition_point(|&o| o <= c) - 1;
        let local = c - offsets[t];
        (t, local >> 1, local & 1 == 1)
    };
    let found: Vec<Result<Option<Schedule>>> = exec.map_range(0..total, |c| {
        let (t, mask, recover) = decode(c);
        let flips: Vec<bool> = (0..t).map(|i| mask >> i & 1 == 1).collect();
        let sched = cycle_schedule(l, source, target, &flips, recover)?;
        Ok(transfers_every_payload(&sched)?.then_some(sched))
    });
    found
        .into_iter()
        .filter_map(|r| r.transpose())
        .collect()
}
