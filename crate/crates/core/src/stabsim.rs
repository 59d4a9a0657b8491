//! Stabilizer-tableau simulation of CNOT circuits, Pauli measurements and
//! the sandwiched merge protocol.
//!
//! A Pauli string is stored as `i^phase · X^x Z^z`. The tableau keeps `n`
//! stabilizers and `n` paired destabilizers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codemap::{synthesize_circuit, CnotCircuit, CodeMap, Direction, Gate};
use crate::csscode::{CssCode, Kind};
use crate::f2linalg::{BitVec, F2Matrix};
use crate::surgery::{basis_starting_with, SandwichPlan};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("postselected outcome has probability zero")]
    ZeroProbability,
    #[error("operator is not Hermitian")]
    NotHermitian,
    #[error("code must carry a logical basis")]
    NotBased,
    #[error("invalid circuit: {0}")]
    Circuit(String),
    #[error("invalid plan: {0}")]
    Plan(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub x: BitVec,
    pub z: BitVec,
    /// Power of `i` in front of `X^x Z^z`.
    pub phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString { x: BitVec::zeros(n), z: BitVec::zeros(n), phase: 0 }
    }

    /// The Hermitian operator `sign · ⊗ σ` with `σ ∈ {I, X, Y, Z}` read off
    /// the bits (`Y` when both are set).
    pub fn from_xz(x: BitVec, z: BitVec, negative: bool) -> Self {
        assert_eq!(x.len(), z.len());
        let y = x.and(&z).weight();
        PauliString { x, z, phase: ((y + if negative { 2 } else { 0 }) % 4) as u8 }
    }

    pub fn z_string(z: &BitVec) -> Self {
        PauliString { x: BitVec::zeros(z.len()), z: z.clone(), phase: 0 }
    }

    pub fn x_string(x: &BitVec) -> Self {
        PauliString { x: x.clone(), z: BitVec::zeros(x.len()), phase: 0 }
    }

    pub fn single(n: usize, q: usize, kind: Kind) -> Self {
        match kind {
            Kind::Z => Self::z_string(&BitVec::unit(n, q)),
            Kind::X => Self::x_string(&BitVec::unit(n, q)),
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn negated(&self) -> Self {
        PauliString { phase: (self.phase + 2) % 4, ..self.clone() }
    }

    /// `±1` for Hermitian strings.
    pub fn sign(&self) -> Option<i8> {
        let y = (self.x.and(&self.z).weight() % 4) as u8;
        match (self.phase + 4 - y) % 4 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// `self · other`.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let mut p = self.clone();
        p.mul_assign(other);
        p
    }

    pub fn mul_assign(&mut self, other: &PauliString) {
        let swap = if self.z.dot(&other.x) { 2 } else { 0 };
        self.phase = (self.phase + other.phase + swap) % 4;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &PauliString) -> PauliString {
        PauliString { x: self.x.concat(&other.x), z: self.z.concat(&other.z), phase: (self.phase + other.phase) % 4 }
    }

    fn insert_identity(&mut self, pos: usize) {
        self.x.insert(pos, false);
        self.z.insert(pos, false);
    }

    fn remove_qubit(&mut self, pos: usize) {
        self.x.remove(pos);
        self.z.remove(pos);
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.sign() {
            Some(1) => f.write_str("+")?,
            Some(_) => f.write_str("-")?,
            None => write!(f, "i^{}", self.phase)?,
        }
        for q in 0..self.len() {
            f.write_str(match (self.x.get(q), self.z.get(q)) {
                (false, false) => "I",
                (true, false) => "X",
                (false, true) => "Z",
                (true, true) => "Y",
            })?;
        }
        Ok(())
    }
}

/// A measurement result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    /// `+1` or `−1`.
    pub value: i8,
    pub deterministic: bool,
}

/// How `ProjZero` gates treat their Z measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionMode {
    /// Sample random outcomes; the qubit is dropped whatever the result.
    Measure,
    /// Keep only the `+1` branch, failing if it has probability zero.
    Postselect,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    stabilizers: Vec<PauliString>,
    destabilizers: Vec<PauliString>,
}

impl StabilizerTableau {
    /// `|0…0⟩`.
    pub fn zero_state(n: usize) -> Self {
        StabilizerTableau {
            stabilizers: (0..n).map(|q| PauliString::single(n, q, Kind::Z)).collect(),
            destabilizers: (0..n).map(|q| PauliString::single(n, q, Kind::X)).collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.stabilizers.len()
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.destabilizers
    }

    /// Commutation relations: stabilizers commute, and `D_i` anticommutes
    /// with `S_j` exactly when `i = j`. Also checks that stabilizers are
    /// Hermitian.
    pub fn is_valid(&self) -> bool {
        let n = self.num_qubits();
        for i in 0..n {
            if self.stabilizers[i].sign().is_none() {
                return false;
            }
            for j in 0..n {
                if !self.stabilizers[i].commutes_with(&self.stabilizers[j]) {
                    return false;
                }
                if self.destabilizers[i].commutes_with(&self.stabilizers[j]) == (i == j) {
                    return false;
                }
            }
        }
        true
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        for p in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            if p.x.get(control) {
                p.x.flip(target);
            }
            if p.z.get(target) {
                p.z.flip(control);
            }
        }
    }

    pub fn h(&mut self, q: usize) {
        for p in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            let (x, z) = (p.x.get(q), p.z.get(q));
            if x && z {
                p.phase = (p.phase + 2) % 4;
            }
            p.x.set(q, z);
            p.z.set(q, x);
        }
    }

    pub fn s(&mut self, q: usize) {
        for p in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            if p.x.get(q) {
                p.phase = (p.phase + 1) % 4;
                p.z.flip(q);
            }
        }
    }

    /// Conjugation by a Pauli operator: flips the sign of every row that
    /// anticommutes with it.
    pub fn apply_pauli(&mut self, g: &PauliString) {
        for p in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            if !p.commutes_with(g) {
                p.phase = (p.phase + 2) % 4;
            }
        }
    }

    fn check_len(&self, p: &PauliString) {
        assert_eq!(p.len(), self.num_qubits(), "Pauli string length must equal the qubit count");
    }

    /// `±1` if `±p` is in the stabilizer group, `None` otherwise.
    pub fn expectation(&self, p: &PauliString) -> Option<i8> {
        self.check_len(p);
        if self.stabilizers.iter().any(|s| !s.commutes_with(p)) {
            return None;
        }
        let mut acc = PauliString::identity(p.len());
        for (s, d) in self.stabilizers.iter().zip(&self.destabilizers) {
            if !d.commutes_with(p) {
                acc.mul_assign(s);
            }
        }
        debug_assert!(acc.x == p.x && acc.z == p.z);
        match (acc.phase + 4 - p.phase) % 4 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn is_stabilized_by(&self, p: &PauliString) -> bool {
        self.expectation(p) == Some(1)
    }

    /// Measures a Hermitian Pauli; `forced` fixes the outcome of a random
    /// measurement (postselection).
    fn measure_inner(&mut self, p: &PauliString, forced: Option<i8>, rng: &mut impl Rng) -> Result<Outcome, SimError> {
        self.check_len(p);
        if p.sign().is_none() {
            return Err(SimError::NotHermitian);
        }
        let Some(k) = self.stabilizers.iter().position(|s| !s.commutes_with(p)) else {
            let value = self.expectation(p).expect("commuting Pauli has a definite value");
            if forced.is_some_and(|f| f != value) {
                return Err(SimError::ZeroProbability);
            }
            return Ok(Outcome { value, deterministic: true });
        };
        let sk = self.stabilizers[k].clone();
        for i in 0..self.num_qubits() {
            if i != k && !self.stabilizers[i].commutes_with(p) {
                self.stabilizers[i].mul_assign(&sk);
            }
            if i != k && !self.destabilizers[i].commutes_with(p) {
                self.destabilizers[i].mul_assign(&sk);
            }
        }
        let value = forced.unwrap_or_else(|| if rng.random::<bool>() { 1 } else { -1 });
        self.destabilizers[k] = sk;
        self.stabilizers[k] = if value == 1 { p.clone() } else { p.negated() };
        Ok(Outcome { value, deterministic: false })
    }

    pub fn measure(&mut self, p: &PauliString, rng: &mut impl Rng) -> Result<Outcome, SimError> {
        self.measure_inner(p, None, rng)
    }

    /// Projects onto the `value` eigenspace of `p`.
    pub fn postselect(&mut self, p: &PauliString, value: i8) -> Result<Outcome, SimError> {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        self.measure_inner(p, Some(value), &mut rng)
    }

    /// Inserts a `|+⟩` qubit at position `pos`.
    pub fn insert_plus(&mut self, pos: usize) {
        let n = self.num_qubits() + 1;
        for p in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            p.insert_identity(pos);
        }
        self.stabilizers.push(PauliString::single(n, pos, Kind::X));
        self.destabilizers.push(PauliString::single(n, pos, Kind::Z));
    }

    /// Measures `Z_q` (or postselects `+1`) and removes the qubit.
    pub fn project_zero(&mut self, q: usize, mode: ProjectionMode, rng: &mut impl Rng) -> Result<Outcome, SimError> {
        let zq = PauliString::single(self.num_qubits(), q, Kind::Z);
        let outcome = match mode {
            ProjectionMode::Measure => self.measure(&zq, rng)?,
            ProjectionMode::Postselect => self.postselect(&zq, 1)?,
        };
        // Make one stabilizer exactly ±Z_q, keeping the pairing intact.
        let k = match self.stabilizers.iter().position(|s| s.x == zq.x && s.z == zq.z) {
            Some(k) => k,
            None => {
                let rows: Vec<usize> = (0..self.num_qubits()).filter(|&i| self.destabilizers[i].x.get(q)).collect();
                let k = rows[0];
                for &i in &rows[1..] {
                    let si = self.stabilizers[i].clone();
                    self.stabilizers[k].mul_assign(&si);
                    let dk = self.destabilizers[k].clone();
                    self.destabilizers[i].mul_assign(&dk);
                }
                k
            }
        };
        let sk = self.stabilizers[k].clone();
        for i in 0..self.num_qubits() {
            if i == k {
                continue;
            }
            if self.stabilizers[i].z.get(q) {
                self.stabilizers[i].mul_assign(&sk);
                let di = self.destabilizers[i].clone();
                self.destabilizers[k].mul_assign(&di);
            }
            if self.destabilizers[i].z.get(q) {
                self.destabilizers[i].mul_assign(&sk);
            }
        }
        self.stabilizers.remove(k);
        self.destabilizers.remove(k);
        for p in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            p.remove_qubit(q);
        }
        Ok(outcome)
    }

    /// Reorders the first `map.len()` qubits: qubit `i` moves to `map[i]`.
    pub fn permute(&mut self, map: &[usize]) {
        for p in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            let (x, z) = (p.x.clone(), p.z.clone());
            for (i, &j) in map.iter().enumerate() {
                p.x.set(j, x.get(i));
                p.z.set(j, z.get(i));
            }
        }
    }

    /// Runs a circuit on the first `c.n_in` qubits; later qubits are
    /// spectators. Returns the `ProjZero` outcomes in order.
    pub fn apply_circuit(
        &mut self,
        c: &CnotCircuit,
        mode: ProjectionMode,
        rng: &mut impl Rng,
    ) -> Result<Vec<Outcome>, SimError> {
        c.validate().map_err(|e| SimError::Circuit(e.to_string()))?;
        if c.n_in > self.num_qubits() {
            return Err(SimError::Arity(format!("circuit takes {} qubits, state has {}", c.n_in, self.num_qubits())));
        }
        let mut outcomes = Vec::new();
        for op in &c.ops {
            match op {
                Gate::Cnot { control, target } => self.cnot(*control, *target),
                Gate::PrepPlus(q) => self.insert_plus(*q),
                Gate::ProjZero(q) => outcomes.push(self.project_zero(*q, mode, rng)?),
                Gate::Permute(map) => self.permute(map),
            }
        }
        Ok(outcomes)
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &StabilizerTableau) -> StabilizerTableau {
        let (a, b) = (self.num_qubits(), other.num_qubits());
        let left = |p: &PauliString| p.tensor(&PauliString::identity(b));
        let right = |p: &PauliString| PauliString::identity(a).tensor(p);
        StabilizerTableau {
            stabilizers: self.stabilizers.iter().map(left).chain(other.stabilizers.iter().map(right)).collect(),
            destabilizers: self.destabilizers.iter().map(left).chain(other.destabilizers.iter().map(right)).collect(),
        }
    }
}

/// Measures `p` with outcome randomness drawn from `seed`.
pub fn measure_pauli(t: &StabilizerTableau, p: &PauliString, seed: u64) -> Result<(Outcome, StabilizerTableau), SimError> {
    let mut t = t.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let o = t.measure(p, &mut rng)?;
    Ok((o, t))
}

/// Runs a circuit with random projection outcomes drawn from `seed`.
pub fn apply_circuit(
    t: &StabilizerTableau,
    c: &CnotCircuit,
    seed: u64,
) -> Result<(StabilizerTableau, Vec<Outcome>), SimError> {
    let mut t = t.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let o = t.apply_circuit(c, ProjectionMode::Measure, &mut rng)?;
    Ok((t, o))
}

/// Single-qubit logical states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogicalState {
    Zero,
    One,
    Plus,
    Minus,
}

impl std::str::FromStr for LogicalState {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" => Ok(LogicalState::Zero),
            "1" => Ok(LogicalState::One),
            "+" => Ok(LogicalState::Plus),
            "-" => Ok(LogicalState::Minus),
            other => Err(format!("unknown logical state {other:?}; expected 0, 1, + or -")),
        }
    }
}

/// A code state with each logical qubit in the given state, relative to
/// the code's logical basis.
pub fn prepare_logical_state(code: &CssCode, logical: &[LogicalState]) -> Result<StabilizerTableau, SimError> {
    let basis = code.logical_basis().ok_or(SimError::NotBased)?;
    if logical.len() != basis.z_reps.len() {
        return Err(SimError::Arity(format!("{} logical states for k = {}", logical.len(), basis.z_reps.len())));
    }
    let mut t = StabilizerTableau::zero_state(code.n());
    for row in code.p_x().rows() {
        t.postselect(&PauliString::x_string(row), 1)?;
    }
    for (i, s) in logical.iter().enumerate() {
        let xbar = PauliString::x_string(&basis.x_reps[i]);
        match s {
            LogicalState::Zero => {}
            LogicalState::One => t.apply_pauli(&xbar),
            LogicalState::Plus => {
                t.postselect(&xbar, 1)?;
            }
            LogicalState::Minus => {
                t.postselect(&xbar, -1)?;
            }
        }
    }
    Ok(t)
}

/// A code state with logical `Z̄_i` eigenvalues `(−1)^{bits[i]}`.
pub fn prepare_code_state(code: &CssCode, bits: &[bool]) -> Result<StabilizerTableau, SimError> {
    let states: Vec<LogicalState> = bits.iter().map(|&b| if b { LogicalState::One } else { LogicalState::Zero }).collect();
    prepare_logical_state(code, &states)
}

/// The generators of a code: X checks then Z checks.
pub fn code_generators(code: &CssCode) -> Vec<PauliString> {
    code.p_x()
        .rows()
        .iter()
        .map(PauliString::x_string)
        .chain(code.p_z().rows().iter().map(PauliString::z_string))
        .collect()
}

/// Logical input of a plan on `C ⊕ D`: the states of C's logicals, then
/// D's, each code based with its glued operator first.
pub fn prepare_plan_input(plan: &SandwichPlan, logical: &[LogicalState]) -> Result<StabilizerTableau, SimError> {
    let kc = plan.code_c.k();
    if logical.len() != kc + plan.code_d.k() {
        return Err(SimError::Arity(format!(
            "{} logical states for k_C + k_D = {}",
            logical.len(),
            kc + plan.code_d.k()
        )));
    }
    let based = |code, v| basis_starting_with(code, v).map_err(|e| SimError::Plan(e.to_string()));
    let c = prepare_logical_state(&based(&plan.code_c, &plan.op_c)?, &logical[..kc])?;
    let d = prepare_logical_state(&based(&plan.code_d, &plan.op_d)?, &logical[kc..])?;
    Ok(c.tensor(&d))
}

/// Preparation of one fresh qubit of the merge protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreshState {
    Plus,
    Minus,
    Zero,
    One,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProtocolOptions {
    pub seed: u64,
    /// Preparation of each fresh qubit; missing entries default to `|+⟩`.
    pub fresh: Vec<FreshState>,
    /// Track the gauge fix as a Pauli frame instead of applying it.
    pub frame_only: bool,
}

#[derive(Clone, Debug)]
pub struct ProtocolOutcome {
    /// Product of the new Z check outcomes.
    pub c_l: i8,
    /// Outcomes of the new Z checks.
    pub per_check: Vec<i8>,
    /// Outcomes of the X checks of `T`, then of its old Z checks.
    pub other_checks: Vec<i8>,
    pub final_state: StabilizerTableau,
    /// Gauge fix left unapplied when running in frame mode.
    pub frame: PauliString,
    /// Generators of `T` that do not read `+1` after the frame is accounted for.
    pub unsatisfied: Vec<usize>,
}

impl ProtocolOutcome {
    pub fn verified(&self) -> bool {
        self.unsatisfied.is_empty()
    }
}

/// Appends the fresh qubits, measures every generator of `T` (X checks,
/// old Z checks, then the new Z checks), multiplies the new outcomes into
/// `c_L` and applies the gauge fix for every new check that read `−1`.
pub fn run_merge_protocol(
    plan: &SandwichPlan,
    initial: &StabilizerTableau,
    opts: &ProtocolOptions,
) -> Result<ProtocolOutcome, SimError> {
    let t_code = &plan.sandwiched;
    let base = plan.fresh_offset();
    if initial.num_qubits() != base {
        return Err(SimError::Arity(format!("state has {} qubits, plan expects {base}", initial.num_qubits())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut state = initial.clone();
    for i in 0..plan.fresh_qubits {
        let q = base + i;
        state.insert_plus(q);
        match opts.fresh.get(i).copied().unwrap_or(FreshState::Plus) {
            FreshState::Plus => {}
            FreshState::Minus => state.apply_pauli(&PauliString::single(q + 1, q, Kind::Z)),
            FreshState::Zero | FreshState::One => {
                let n = state.num_qubits();
                state.h(q);
                if opts.fresh[i] == FreshState::One {
                    state.apply_pauli(&PauliString::single(n, q, Kind::X));
                }
            }
        }
    }
    let (px, pz) = (t_code.p_x(), t_code.p_z());
    let new_from = plan.new_check_offset();
    let mut other_checks = Vec::new();
    for row in px.rows() {
        other_checks.push(state.measure(&PauliString::x_string(row), &mut rng)?.value);
    }
    for row in &pz.rows()[..new_from] {
        other_checks.push(state.measure(&PauliString::z_string(row), &mut rng)?.value);
    }
    let mut per_check = Vec::with_capacity(plan.new_z_checks);
    for row in &pz.rows()[new_from..] {
        per_check.push(state.measure(&PauliString::z_string(row), &mut rng)?.value);
    }
    let c_l = per_check.iter().product();
    let mut frame = PauliString::identity(state.num_qubits());
    for (lambda, &c) in per_check.iter().enumerate() {
        if c == -1 {
            frame.mul_assign(&PauliString::x_string(&plan.gauge_fix_operators[lambda]));
        }
    }
    if !opts.frame_only {
        state.apply_pauli(&frame);
        frame = PauliString::identity(state.num_qubits());
    }
    let unsatisfied = code_generators(t_code)
        .iter()
        .enumerate()
        .filter(|(_, g)| {
            let expected = if g.commutes_with(&frame) { 1 } else { -1 };
            state.expectation(g) != Some(expected)
        })
        .map(|(i, _)| i)
        .collect();
    Ok(ProtocolOutcome { c_l, per_check, other_checks, final_state: state, frame, unsatisfied })
}

/// The physical matrix of a code map and the Pauli type it transports
/// directly: `f_0` on Z strings for Z̄-preserving maps, `f_0ᵀ` on X strings
/// for X̄-preserving ones.
pub fn physical_action(map: &CodeMap) -> (F2Matrix, Kind) {
    match map.direction {
        Direction::ZPreserving => (map.f0(), Kind::Z),
        Direction::XPreserving => (map.f0().transpose(), Kind::X),
    }
}

/// Checks `M U = U' M` for the circuit `M` synthesized from the map. The
/// circuit is applied to half of a maximally entangled state; the result
/// must be stabilized by `P^{A u}_out ⊗ P^u_ref` for the transported type
/// `P` and by `Q^w_out ⊗ Q^{Aᵀ w}_ref` for the other type, for every basis
/// vector and for `trials` random vectors.
pub fn pauli_transport_check(map: &CodeMap, trials: usize, seed: u64) -> Result<bool, SimError> {
    let (a, kind) = physical_action(map);
    let circuit = synthesize_circuit(&a);
    let (n_in, n_out) = (a.ncols(), a.nrows());
    let mut t = StabilizerTableau::zero_state(2 * n_in);
    for i in 0..n_in {
        t.h(i);
        t.cnot(i, n_in + i);
    }
    let swap = kind == Kind::X;
    if swap {
        for i in 0..n_in {
            t.h(i);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    t.apply_circuit(&circuit, ProjectionMode::Postselect, &mut rng)?;
    if swap {
        for i in 0..n_out {
            t.h(i);
        }
    }
    let (direct, other) = if swap { (Kind::X, Kind::Z) } else { (Kind::Z, Kind::X) };
    let string = |k: Kind, v: &BitVec| match k {
        Kind::Z => PauliString::z_string(v),
        Kind::X => PauliString::x_string(v),
    };
    let mut inputs: Vec<BitVec> = (0..n_in).map(|i| BitVec::unit(n_in, i)).collect();
    let mut outputs: Vec<BitVec> = (0..n_out).map(|i| BitVec::unit(n_out, i)).collect();
    for _ in 0..trials {
        inputs.push(BitVec::from_bools(&(0..n_in).map(|_| rng.random()).collect::<Vec<_>>()));
        outputs.push(BitVec::from_bools(&(0..n_out).map(|_| rng.random()).collect::<Vec<_>>()));
    }
    let at = a.transpose();
    for u in &inputs {
        let p = string(direct, &a.mul_vec(u)).tensor(&string(direct, u));
        if !t.is_stabilized_by(&p) {
            return Ok(false);
        }
    }
    for w in &outputs {
        let p = string(other, w).tensor(&string(other, &at.mul_vec(w)));
        if !t.is_stabilized_by(&p) {
            return Ok(false);
        }
    }
    Ok(true)
}
