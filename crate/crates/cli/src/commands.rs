use crate::args::{
    Command, Common, CompileArgs, Graph, Preset, ProtocolArgs, RegisterArg, SampleArgs, SearchArgs,
    TomographyArgs, TransferArgs,
};
use crate::payload::{default_payload, parse_payload};
use crate::{CliError, Outcome, Report, Table, TOOL};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;
use twocoin::circuit::{
    check_protocol_equivalence, compile_protocol, decompose_toffoli, export_qasm, route, Circuit,
    CouplingMap, MAX_UNITARY_QUBITS,
};
use twocoin::hilbert::basis_label;
use twocoin::protocols::{
    complete_pst_schedule, cycle8_schedule, cycle_schedule, search_cycle_schedules, simplify,
    verify_transfer,
};
use twocoin::tomography::{
    fidelity, fidelity_with_adjustment, reconstruct_conjugate, sample_distribution,
    tomography_pipeline, Basis, DensityMatrix1Q, FidelityAdjustment, FixtureEstimate, RunEstimate,
    ShotMode, TomographyFixture,
};
use twocoin::{CoinStateSpec, Exec, Register, Schedule, ShiftKind, WalkState};

/// Tolerance of the circuit/oracle comparison.
pub const EQUIVALENCE_TOL: f64 = 1e-9;

fn report(config: Command, result: impl Serialize, warnings: Vec<String>) -> Result<Report, CliError> {
    Ok(Report {
        tool: TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config,
        result: serde_json::to_value(result).map_err(|e| CliError::other(e.to_string()))?,
        warnings,
    })
}

fn seed(common: &mut Common) -> u64 {
    *common.seed.get_or_insert_with(rand::random)
}

fn num(x: f64) -> String {
    x.to_string()
}

/// Builds the schedule selected by the protocol flags.
pub fn schedule_for(p: &ProtocolArgs) -> Result<Schedule, CliError> {
    let schedule = match p.graph {
        Graph::Cycle => {
            if p.n.is_some() {
                return Err(CliError::usage("--n applies to --graph complete; use --l for cycles"));
            }
            match (p.preset, p.l, &p.flips) {
                (_, None, None) => {
                    if p.recover_x {
                        return Err(CliError::usage("--recover-x needs a custom schedule (--l and --flips)"));
                    }
                    let s = match p.preset.unwrap_or(Preset::Cycle8) {
                        Preset::Cycle8 => cycle8_schedule(),
                    };
                    if p.source.is_some_and(|v| v != s.source()) || p.target.is_some_and(|v| v != s.target()) {
                        return Err(CliError::usage(format!(
                            "the cycle8 preset transfers {} -> {}; give --l and --flips for other endpoints",
                            s.source(),
                            s.target()
                        )));
                    }
                    s
                }
                (Some(_), _, _) => {
                    return Err(CliError::usage("--preset cannot be combined with --l or --flips"));
                }
                (None, Some(l), Some(flips)) => {
                    let target = p
                        .target
                        .ok_or_else(|| CliError::usage("a custom cycle schedule needs --target"))?;
                    let flips = flips
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(CliError::usage(format!("--flips takes 0/1 characters, got {c:?}"))),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    cycle_schedule(l, p.source.unwrap_or(0), target, &flips, p.recover_x)?
                }
                _ => return Err(CliError::usage("a custom cycle schedule needs both --l and --flips")),
            }
        }
        Graph::Complete => {
            if p.preset.is_some() || p.l.is_some() || p.flips.is_some() || p.recover_x {
                return Err(CliError::usage(
                    "--preset, --l, --flips and --recover-x apply to --graph cycle",
                ));
            }
            let n = p.n.ok_or_else(|| CliError::usage("--graph complete needs --n"))?;
            let target = p.target.ok_or_else(|| CliError::usage("--graph complete needs --target"))?;
            if p.source.is_some_and(|v| v != 0) {
                return Err(CliError::usage("complete-graph protocols start at vertex 0"));
            }
            if target >= n {
                return Err(CliError::usage(format!("--target {target} is not a vertex of the {n}-complete graph")));
            }
            complete_pst_schedule(n, target)?
        }
    };
    Ok(if p.simplify { simplify(&schedule)? } else { schedule })
}

fn resolve_payload(
    slot: &mut Option<String>,
    dim: usize,
    warnings: &mut Vec<String>,
) -> Result<CoinStateSpec, CliError> {
    let text = slot.get_or_insert_with(|| default_payload(dim)).clone();
    let (spec, warning) = parse_payload(&text).map_err(CliError::usage)?;
    warnings.extend(warning);
    if spec.dim() != dim {
        return Err(CliError::usage(format!(
            "payload has dimension {} but coin 1 has dimension {dim}",
            spec.dim()
        )));
    }
    Ok(spec)
}

#[derive(Serialize)]
struct Prob {
    value: usize,
    label: String,
    probability: f64,
}

fn probs(dist: &[f64]) -> Vec<Prob> {
    dist.iter()
        .enumerate()
        .map(|(value, &probability)| Prob {
            value,
            label: basis_label(value, dist.len()),
            probability,
        })
        .collect()
}

fn amplitudes(spec: &CoinStateSpec) -> Vec<[f64; 2]> {
    spec.coefficients().iter().map(|c| [c.re, c.im]).collect()
}

fn shift_name(s: &Schedule) -> &'static str {
    match s.shift() {
        ShiftKind::Cycle => "cycle",
        ShiftKind::Complete => "complete",
    }
}

#[derive(Serialize)]
struct SampleOutcome {
    value: usize,
    label: String,
    theory: f64,
    count: u64,
    empirical: f64,
}

#[derive(Serialize)]
struct RegisterSample {
    register: Register,
    shots: u64,
    seed: u64,
    stream: u64,
    outcomes: Vec<SampleOutcome>,
    /// Largest `|empirical − theory|`, times 100.
    max_deviation_x100: f64,
    /// Three binomial standard errors of the widest outcome, times 100.
    three_sigma_x100: f64,
    within_three_sigma: bool,
}

/// Samples the marginal of `reg`; each register has its own generator
/// stream so adding a register leaves the others unchanged.
fn sample_register(state: &WalkState, reg: Register, shots: u64, seed: u64) -> Result<RegisterSample, CliError> {
    let theory = state.marginal_distribution(reg);
    let stream = Register::ALL.iter().position(|&r| r == reg).unwrap_or(0) as u64;
    let hist = sample_distribution(&theory, Basis::Z, shots, seed, stream)?;
    let outcomes: Vec<SampleOutcome> = theory
        .iter()
        .enumerate()
        .map(|(value, &p)| {
            let label = basis_label(value, theory.len());
            let count = hist.count(&label);
            SampleOutcome {
                value,
                label,
                theory: p,
                count,
                empirical: count as f64 / shots as f64,
            }
        })
        .collect();
    let max_dev = outcomes
        .iter()
        .map(|o| (o.empirical - o.theory).abs())
        .fold(0.0, f64::max);
    let sigma = theory
        .iter()
        .map(|&p| (p.clamp(0.0, 1.0) * (1.0 - p.clamp(0.0, 1.0)) / shots as f64).sqrt())
        .fold(0.0, f64::max);
    Ok(RegisterSample {
        register: reg,
        shots,
        seed,
        stream,
        outcomes,
        max_deviation_x100: 100.0 * max_dev,
        three_sigma_x100: 300.0 * sigma,
        within_three_sigma: max_dev <= 3.0 * sigma + 1e-12,
    })
}

fn sample_rows(samples: &[RegisterSample]) -> Vec<Vec<String>> {
    samples
        .iter()
        .flat_map(|s| {
            s.outcomes.iter().map(move |o| {
                vec![
                    s.register.name().to_string(),
                    o.label.clone(),
                    num(o.theory),
                    o.count.to_string(),
                    num(o.empirical),
                ]
            })
        })
        .collect()
}

#[derive(Serialize)]
struct TransferResult {
    schedule: String,
    description: String,
    graph: &'static str,
    steps: usize,
    source: usize,
    target: usize,
    payload: Vec<[f64; 2]>,
    success_probability: f64,
    fidelity: f64,
    position: Vec<Prob>,
    coin1: Vec<Prob>,
    coin2: Vec<Prob>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<RegisterSample>>,
}

pub fn cmd_transfer(mut args: TransferArgs) -> Result<Outcome, CliError> {
    let schedule = schedule_for(&args.protocol)?;
    let mut warnings = vec![];
    let payload = resolve_payload(&mut args.payload, schedule.layout().coin1_dim(), &mut warnings)?;
    let t = verify_transfer(&schedule, &payload)?;
    let samples = match args.shots {
        Some(shots) => {
            let seed = seed(&mut args.common);
            Some(
                Register::ALL
                    .iter()
                    .map(|&r| sample_register(&t.final_state, r, shots, seed))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
        None => None,
    };
    let result = TransferResult {
        schedule: t.schedule.clone(),
        description: schedule.describe(),
        graph: shift_name(&schedule),
        steps: t.steps,
        source: t.source,
        target: t.target,
        payload: amplitudes(&payload),
        success_probability: t.success_probability,
        fidelity: t.fidelity,
        position: probs(&t.position_distribution),
        coin1: probs(&t.coin1_distribution),
        coin2: probs(&t.coin2_distribution),
        samples,
    };
    let mut table = Table {
        notes: vec![
            ("schedule".into(), format!("{} ({} steps)", result.schedule, result.steps)),
            ("coins".into(), result.description.clone()),
            ("success probability".into(), num(result.success_probability)),
            ("fidelity".into(), num(result.fidelity)),
        ],
        ..Table::default()
    };
    match &result.samples {
        Some(s) => {
            table.header = ["register", "outcome", "theory", "count", "empirical"].map(String::from).to_vec();
            table.rows = sample_rows(s);
        }
        None => {
            table.header = ["register", "outcome", "probability"].map(String::from).to_vec();
            for (name, dist) in [("position", &result.position), ("coin1", &result.coin1), ("coin2", &result.coin2)] {
                table
                    .rows
                    .extend(dist.iter().map(|p| vec![name.to_string(), p.label.clone(), num(p.probability)]));
            }
        }
    }
    let report = report(Command::Transfer(args), &result, warnings)?;
    Ok(Outcome {
        report,
        table,
        failed: false,
    })
}

#[derive(Serialize)]
struct SampleResult {
    schedule: String,
    shots: u64,
    seed: u64,
    registers: Vec<RegisterSample>,
}

pub fn cmd_sample(mut args: SampleArgs) -> Result<Outcome, CliError> {
    let schedule = schedule_for(&args.protocol)?;
    let mut warnings = vec![];
    let payload = resolve_payload(&mut args.payload, schedule.layout().coin1_dim(), &mut warnings)?;
    let state = verify_transfer(&schedule, &payload)?.final_state;
    if args.registers.is_empty() {
        args.registers = vec![RegisterArg::Position, RegisterArg::Coin1];
    }
    let seed = seed(&mut args.common);
    let registers = args
        .registers
        .iter()
        .map(|&r| sample_register(&state, r.into(), args.shots, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let mut notes = vec![
        ("schedule".into(), schedule.name().to_string()),
        ("shots".into(), args.shots.to_string()),
        ("seed".into(), seed.to_string()),
    ];
    for r in &registers {
        notes.push((
            format!("{} deviation x100", r.register.name()),
            format!("{} (3 sigma: {})", num(r.max_deviation_x100), num(r.three_sigma_x100)),
        ));
    }
    let table = Table {
        header: ["register", "outcome", "theory", "count", "empirical"].map(String::from).to_vec(),
        rows: sample_rows(&registers),
        notes,
    };
    let result = SampleResult {
        schedule: schedule.name().to_string(),
        shots: args.shots,
        seed,
        registers,
    };
    let report = report(Command::Sample(args), &result, warnings)?;
    Ok(Outcome {
        report,
        table,
        failed: false,
    })
}

#[derive(Serialize)]
struct Expectations {
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Serialize)]
struct TomographyResult {
    /// `fixture`, `exact` or `finite`.
    mode: &'static str,
    register: Register,
    expectations: Expectations,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixture_estimates: Option<Vec<FixtureEstimate>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shot_mode: Option<ShotMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    runs: Option<Vec<RunEstimate>>,
    /// The payload as a density matrix.
    target: DensityMatrix1Q,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_decimals: Option<u32>,
    /// The matrix the headline fidelity is taken against: `target`, rounded
    /// when `target_decimals` is set.
    target_used: DensityMatrix1Q,
    estimate: DensityMatrix1Q,
    estimate_conjugate: DensityMatrix1Q,
    bloch_norm: f64,
    fidelity: f64,
    fidelity_exact_target: f64,
    fidelity_conjugate: f64,
    adjustment: FidelityAdjustment,
}

fn load_fixtures(paths: &[std::path::PathBuf]) -> Result<TomographyFixture, CliError> {
    let parts = paths
        .iter()
        .map(|p| TomographyFixture::load(p).map_err(|e| CliError::other(format!("{}: {e}", p.display()))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TomographyFixture::merge(parts))
}

pub fn cmd_tomography(mut args: TomographyArgs) -> Result<Outcome, CliError> {
    let mut warnings = vec![];
    let schedule = schedule_for(&args.protocol)?;
    if schedule.layout().coin1_dim() != 2 {
        return Err(CliError::usage("tomography needs a protocol with a single-qubit coin 1"));
    }
    let payload = resolve_payload(&mut args.payload, 2, &mut warnings)?;
    let c = payload.coefficients();
    let target = DensityMatrix1Q::pure(c[0], c[1]);

    let result = if !args.fixture.is_empty() {
        let fixture = load_fixtures(&args.fixture)?;
        warnings.extend(fixture.warnings());
        let decimals = *args.target_decimals.get_or_insert(4);
        let estimates = fixture.estimates()?;
        let [z, x, y] = estimates.each_ref().map(|e| e.value);
        let estimate = fixture.reconstruct()?;
        let estimate_conjugate = reconstruct_conjugate(x, y, z);
        let target_used = target.rounded(decimals);
        let (f, adjustment) = fidelity_with_adjustment(&target_used, &estimate)?;
        TomographyResult {
            mode: "fixture",
            register: Register::Coin1,
            expectations: Expectations { x, y, z },
            fixture_estimates: Some(estimates.to_vec()),
            shot_mode: None,
            runs: None,
            target,
            target_decimals: Some(decimals),
            target_used,
            bloch_norm: estimate.bloch_norm(),
            fidelity: f,
            fidelity_exact_target: fidelity(&target, &estimate)?,
            fidelity_conjugate: fidelity(&target_used, &estimate_conjugate)?,
            adjustment,
            estimate,
            estimate_conjugate,
        }
    } else {
        let state = verify_transfer(&schedule, &payload)?.final_state;
        let mode = if args.exact {
            ShotMode::Exact
        } else {
            ShotMode::Finite {
                shots: args.shots,
                runs: args.runs as usize,
                seed: seed(&mut args.common),
            }
        };
        let target_used = args.target_decimals.map_or(target, |d| target.rounded(d));
        let r = tomography_pipeline(&state, Register::Coin1, mode, Some(target_used), Exec::default())?;
        let [x, y, z] = r.expectations;
        TomographyResult {
            mode: if args.exact { "exact" } else { "finite" },
            register: r.register,
            expectations: Expectations { x, y, z },
            fixture_estimates: None,
            shot_mode: Some(mode),
            runs: (!args.exact).then_some(r.runs),
            target,
            target_decimals: args.target_decimals,
            target_used,
            bloch_norm: r.bloch_norm,
            fidelity: r.fidelity,
            fidelity_exact_target: fidelity(&target, &r.estimate)?,
            fidelity_conjugate: r.fidelity_conjugate,
            adjustment: r.adjustment,
            estimate: r.estimate,
            estimate_conjugate: r.estimate_conjugate,
        }
    };

    let mut notes = vec![("mode".to_string(), result.mode.to_string())];
    if let Some(d) = result.target_decimals {
        notes.push(("target decimals".into(), d.to_string()));
    }
    notes.push(("rho_T".into(), result.target.to_string()));
    notes.push(("rho_E".into(), result.estimate.to_string()));
    notes.push(("fidelity".into(), num(result.fidelity)));
    let mut rows = vec![
        vec!["<X>".to_string(), num(result.expectations.x)],
        vec!["<Y>".to_string(), num(result.expectations.y)],
        vec!["<Z>".to_string(), num(result.expectations.z)],
        vec!["bloch_norm".to_string(), num(result.bloch_norm)],
    ];
    for (name, m) in [("rho_T", &result.target_used), ("rho_E", &result.estimate)] {
        for (i, row) in m.entries().iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                rows.push(vec![format!("{name}[{i}{j}]"), v.to_string()]);
            }
        }
    }
    rows.push(vec!["fidelity".into(), num(result.fidelity)]);
    rows.push(vec!["fidelity_exact_target".into(), num(result.fidelity_exact_target)]);
    rows.push(vec!["fidelity_conjugate".into(), num(result.fidelity_conjugate)]);
    let table = Table {
        header: vec!["quantity".into(), "value".into()],
        rows,
        notes,
    };
    let report = report(Command::Tomography(args), &result, warnings)?;
    Ok(Outcome {
        report,
        table,
        failed: false,
    })
}

/// `line:N` (edges i → i+1), `biline:N` (both directions), `star:N`
/// (0 → i) or a JSON file.
pub fn coupling_map(spec: &str) -> Result<CouplingMap, CliError> {
    let preset = |prefix: &str| -> Result<Option<usize>, CliError> {
        match spec.strip_prefix(prefix) {
            Some(n) => n
                .parse()
                .map(Some)
                .map_err(|_| CliError::usage(format!("bad qubit count in --coupling {spec}"))),
            None => Ok(None),
        }
    };
    if let Some(n) = preset("line:")? {
        return Ok(CouplingMap::line(n));
    }
    if let Some(n) = preset("biline:")? {
        return Ok(CouplingMap::line_bidirectional(n));
    }
    if let Some(n) = preset("star:")? {
        return Ok(CouplingMap::star(n));
    }
    CouplingMap::load(Path::new(spec)).map_err(|e| CliError::other(format!("{spec}: {e}")))
}

#[derive(Serialize)]
struct CircuitStats {
    qubits: usize,
    touched_qubits: usize,
    gates: usize,
    cnots: usize,
    toffolis: usize,
    depth: usize,
    gate_counts: BTreeMap<&'static str, usize>,
}

fn stats(c: &Circuit) -> CircuitStats {
    CircuitStats {
        qubits: c.qubit_count(),
        touched_qubits: c.touched_width(),
        gates: c.gates().len(),
        cnots: c.cnot_count(),
        toffolis: c.toffoli_count(),
        depth: c.depth(),
        gate_counts: c.gate_counts(),
    }
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Serialize)]
struct Verdict {
    status: Status,
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ancilla_leakage: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    notice: Option<String>,
}

#[derive(Serialize)]
struct CompileResult {
    schedule: String,
    description: String,
    registers: Vec<(String, usize, usize)>,
    compiled: CircuitStats,
    decomposed: CircuitStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    routed: Option<CircuitStats>,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    qasm_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    qasm: Option<String>,
}

pub fn cmd_compile(args: CompileArgs) -> Result<Outcome, CliError> {
    let schedule = schedule_for(&args.protocol)?;
    let compiled = compile_protocol(&schedule)?;
    let decomposed = decompose_toffoli(&compiled);
    let routed = match &args.coupling {
        Some(spec) => Some(route(&decomposed, &coupling_map(spec)?)?),
        None => None,
    };
    let last = routed.as_ref().unwrap_or(&decomposed);
    let width = last.touched_width();
    let verdict = if width <= MAX_UNITARY_QUBITS {
        let eq = check_protocol_equivalence(last, &schedule)?;
        Verdict {
            status: if eq.passes(EQUIVALENCE_TOL) { Status::Pass } else { Status::Fail },
            tolerance: EQUIVALENCE_TOL,
            phase_distance: Some(eq.phase_distance),
            ancilla_leakage: Some(eq.ancilla_leakage),
            notice: None,
        }
    } else {
        Verdict {
            status: Status::Skipped,
            tolerance: EQUIVALENCE_TOL,
            phase_distance: None,
            ancilla_leakage: None,
            notice: Some(format!(
                "circuit acts on {width} qubits; the oracle comparison covers at most {MAX_UNITARY_QUBITS}"
            )),
        }
    };
    let qasm = export_qasm(last);
    let qasm_path = match &args.qasm {
        Some(path) => {
            std::fs::write(path, &qasm).map_err(|e| CliError::other(format!("{}: {e}", path.display())))?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let result = CompileResult {
        schedule: schedule.name().to_string(),
        description: schedule.describe(),
        registers: compiled
            .registers()
            .iter()
            .map(|r| (r.name.clone(), r.start, r.len))
            .collect(),
        compiled: stats(&compiled),
        decomposed: stats(&decomposed),
        routed: routed.as_ref().map(stats),
        verdict,
        qasm: qasm_path.is_none().then_some(qasm),
        qasm_path,
    };
    let failed = result.verdict.status == Status::Fail;
    let status = match result.verdict.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIPPED",
    };
    let mut notes = vec![
        ("schedule".to_string(), result.schedule.clone()),
        ("verdict".to_string(), status.to_string()),
    ];
    notes.extend(result.verdict.notice.clone().map(|n| ("notice".to_string(), n)));
    notes.extend(result.qasm_path.clone().map(|p| ("qasm".to_string(), p)));
    let mut rows = vec![];
    for (stage, s) in [("compiled", Some(&result.compiled)), ("decomposed", Some(&result.decomposed)), ("routed", result.routed.as_ref())] {
        if let Some(s) = s {
            rows.push(vec![
                stage.to_string(),
                s.qubits.to_string(),
                s.gates.to_string(),
                s.cnots.to_string(),
                s.toffolis.to_string(),
                s.depth.to_string(),
            ]);
        }
    }
    let table = Table {
        header: ["stage", "qubits", "gates", "cx", "ccx", "depth"].map(String::from).to_vec(),
        rows,
        notes,
    };
    let report = report(Command::Compile(args), &result, vec![])?;
    Ok(Outcome { report, table, failed })
}

#[derive(Serialize)]
struct Found {
    name: String,
    steps: usize,
    /// Coin per step, step 1 first: 1 = X, 0 = I.
    flips: String,
    recovery: &'static str,
    description: String,
}

#[derive(Serialize)]
struct SearchResult {
    l: usize,
    source: usize,
    target: usize,
    max_steps: usize,
    count: usize,
    schedules: Vec<Found>,
}

pub fn cmd_search(args: SearchArgs) -> Result<Outcome, CliError> {
    let found = search_cycle_schedules(args.l, args.source, args.target, args.max_steps)?;
    let schedules: Vec<Found> = found
        .iter()
        .map(|s| Found {
            name: s.name().to_string(),
            steps: s.step_count(),
            flips: s
                .steps()
                .iter()
                .map(|st| if st.operator.is_identity() { '0' } else { '1' })
                .collect(),
            recovery: if s.recovery().is_empty() { "I" } else { "X" },
            description: s.describe(),
        })
        .collect();
    let table = Table {
        header: ["steps", "flips", "recovery"].map(String::from).to_vec(),
        rows: schedules
            .iter()
            .map(|f| vec![f.steps.to_string(), f.flips.clone(), f.recovery.to_string()])
            .collect(),
        notes: vec![(
            "found".into(),
            format!("{} schedules for {} -> {} on the {}-cycle", schedules.len(), args.source, args.target, args.l),
        )],
    };
    let result = SearchResult {
        l: args.l,
        source: args.source,
        target: args.target,
        max_steps: args.max_steps,
        count: schedules.len(),
        schedules,
    };
    let report = report(Command::Search(args), &result, vec![])?;
    Ok(Outcome {
        report,
        table,
        failed: false,
    })
}
