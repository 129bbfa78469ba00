//! Dense statevector simulation with mid-circuit measurement and
//! exhaustive branch enumeration.
//!
//! Conventions, fixed once and used everywhere:
//!
//! * Qubit ordering is big-endian: qubit 0 is the most significant bit of
//!   the amplitude index, so on two qubits `CNOT(0 -> 1)` maps `|10>` to
//!   `|11>` (index 2 to index 3).
//! * `Rz(theta) = diag(exp(-i theta/2), exp(+i theta/2))` and
//!   `|T> = T|+> = (|0> + exp(i pi/4)|1>)/sqrt(2)`.
//!
//! Circuits are plain op lists. Measurements record their outcome in order
//! of execution; a classically controlled gate fires when the parity of a
//! chosen subset of earlier records is odd. `run_all_branches` walks every
//! measurement outcome depth-first (outcome 0 before outcome 1) and returns
//! each branch with its Born probability and renormalized final state.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

/// Hard ceiling on register width; the largest gadget needs 16 lines.
pub const MAX_QUBITS: usize = 20;

/// Tolerance for the unit-norm invariant.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Branches below this probability may be dropped (always reported).
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Default cap on the number of enumerated branches.
pub const DEFAULT_BRANCH_CAP: usize = 1 << 16;

// ---------------------------------------------------------------------------
// QuantumState
// ---------------------------------------------------------------------------

/// A pure state of `num_qubits` qubits as a dense amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_width(num_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Computational basis state `|index>`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_width(num_qubits)?;
        if index >= (1 << num_qubits) {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Build from raw amplitudes; the length must be a power of two and the
    /// vector must be normalized within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude vector length {} is not a power of two",
                amps.len()
            )));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        check_width(num_qubits)?;
        let state = Self { num_qubits, amps };
        state.check_normalized()?;
        Ok(state)
    }

    /// Single-qubit `|+>`.
    pub fn plus() -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self { num_qubits: 1, amps: vec![a, a] }
    }

    /// Rotation resource state `|R_z(theta)> = R_z(theta)|+>`.
    pub fn rz_resource(theta: f64) -> Self {
        let half = theta / 2.0;
        Self {
            num_qubits: 1,
            amps: vec![
                Complex64::from_polar(FRAC_1_SQRT_2, -half),
                Complex64::from_polar(FRAC_1_SQRT_2, half),
            ],
        }
    }

    /// The magic state `|T> = (|0> + exp(i pi/4)|1>)/sqrt(2)`.
    pub fn t_state() -> Self {
        Self {
            num_qubits: 1,
            amps: vec![
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::from_polar(FRAC_1_SQRT_2, std::f64::consts::FRAC_PI_4),
            ],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm, tolerance: NORM_TOLERANCE });
        }
        Ok(())
    }

    /// Tensor product; `self`'s qubits keep the most significant positions.
    pub fn tensor(&self, other: &QuantumState) -> Result<QuantumState> {
        let num_qubits = self.num_qubits + other.num_qubits;
        check_width(num_qubits)?;
        let mut amps = Vec::with_capacity(1 << num_qubits);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(QuantumState { num_qubits, amps })
    }
}

/// `|<a|b>|`; insensitive to global phase.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::QubitCountMismatch { left: a.num_qubits, right: b.num_qubits });
    }
    let inner: Complex64 = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(inner.norm())
}

/// Norm of the projection of `state` onto `target` living on the listed
/// qubits, i.e. `|(<target| (x) I_rest) |state>|`. Equals 1 exactly when the
/// listed qubits hold `target` unentangled with the rest.
pub fn subsystem_fidelity(
    state: &QuantumState,
    qubits: &[usize],
    target: &QuantumState,
) -> Result<f64> {
    if qubits.len() != target.num_qubits {
        return Err(Error::QubitCountMismatch {
            left: qubits.len(),
            right: target.num_qubits,
        });
    }
    for &q in qubits {
        if q >= state.num_qubits {
            return Err(Error::QubitOutOfRange { index: q, num_qubits: state.num_qubits });
        }
    }
    let n = state.num_qubits;
    let rest: Vec<usize> = (0..n).filter(|q| !qubits.contains(q)).collect();
    let mut residual = vec![Complex64::new(0.0, 0.0); 1 << rest.len()];
    for (idx, amp) in state.amps.iter().enumerate() {
        let mut sub = 0usize;
        for &q in qubits {
            sub = (sub << 1) | bit(idx, q, n);
        }
        let mut rest_idx = 0usize;
        for &q in &rest {
            rest_idx = (rest_idx << 1) | bit(idx, q, n);
        }
        residual[rest_idx] += target.amps[sub].conj() * amp;
    }
    Ok(residual.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt())
}

fn check_width(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits { requested: num_qubits, limit: MAX_QUBITS });
    }
    Ok(())
}

/// Bit of `index` belonging to `qubit` under the big-endian convention.
#[inline]
fn bit(index: usize, qubit: usize, num_qubits: usize) -> usize {
    (index >> (num_qubits - 1 - qubit)) & 1
}

#[inline]
fn qubit_mask(qubit: usize, num_qubits: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

// ---------------------------------------------------------------------------
// Gates and circuits
// ---------------------------------------------------------------------------

/// A unitary circuit operation.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(usize),
    Z(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Rz { qubit: usize, angle: f64 },
    Cnot { control: usize, target: usize },
    /// One control fanning out onto several targets.
    MultiCnot { control: usize, targets: Vec<usize> },
    Cz(usize, usize),
    Ccz(usize, usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X(q) | Gate::Z(q) | Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q)
            | Gate::Tdg(q) => vec![*q],
            Gate::Rz { qubit, .. } => vec![*qubit],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::MultiCnot { control, targets } => {
                let mut qs = vec![*control];
                qs.extend_from_slice(targets);
                qs
            }
            Gate::Cz(a, b) => vec![*a, *b],
            Gate::Ccz(a, b, c) => vec![*a, *b, *c],
        }
    }

    /// The inverse gate.
    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::S(q) => Gate::Sdg(*q),
            Gate::Sdg(q) => Gate::S(*q),
            Gate::T(q) => Gate::Tdg(*q),
            Gate::Tdg(q) => Gate::T(*q),
            Gate::Rz { qubit, angle } => Gate::Rz { qubit: *qubit, angle: -angle },
            other => other.clone(),
        }
    }
}

/// A circuit operation: a gate, a measurement, or a classically
/// controlled gate conditioned on the parity of earlier outcomes.
#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Gate(Gate),
    MeasureZ(usize),
    MeasureX(usize),
    Conditioned { parity_of: Vec<usize>, gate: Gate },
}

/// An ordered list of operations on a fixed-width register.
#[derive(Debug, Clone)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<Op>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, ops: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn push(&mut self, op: Op) {
        self.ops.push(op);
    }

    pub fn x(&mut self, q: usize) {
        self.push(Op::Gate(Gate::X(q)));
    }

    pub fn z(&mut self, q: usize) {
        self.push(Op::Gate(Gate::Z(q)));
    }

    pub fn h(&mut self, q: usize) {
        self.push(Op::Gate(Gate::H(q)));
    }

    pub fn s(&mut self, q: usize) {
        self.push(Op::Gate(Gate::S(q)));
    }

    pub fn sdg(&mut self, q: usize) {
        self.push(Op::Gate(Gate::Sdg(q)));
    }

    pub fn t(&mut self, q: usize) {
        self.push(Op::Gate(Gate::T(q)));
    }

    pub fn tdg(&mut self, q: usize) {
        self.push(Op::Gate(Gate::Tdg(q)));
    }

    pub fn rz(&mut self, qubit: usize, angle: f64) {
        self.push(Op::Gate(Gate::Rz { qubit, angle }));
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        self.push(Op::Gate(Gate::Cnot { control, target }));
    }

    pub fn multi_cnot(&mut self, control: usize, targets: &[usize]) {
        self.push(Op::Gate(Gate::MultiCnot { control, targets: targets.to_vec() }));
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        self.push(Op::Gate(Gate::Cz(a, b)));
    }

    pub fn ccz(&mut self, a: usize, b: usize, c: usize) {
        self.push(Op::Gate(Gate::Ccz(a, b, c)));
    }

    /// Appends a Z measurement and returns its record index.
    pub fn measure_z(&mut self, q: usize) -> usize {
        let record = self.num_measurements();
        self.push(Op::MeasureZ(q));
        record
    }

    /// Appends an X measurement and returns its record index.
    pub fn measure_x(&mut self, q: usize) -> usize {
        let record = self.num_measurements();
        self.push(Op::MeasureX(q));
        record
    }

    /// Applies `gate` when the parity of the listed outcome records is odd.
    pub fn when_odd(&mut self, parity_of: &[usize], gate: Gate) {
        self.push(Op::Conditioned { parity_of: parity_of.to_vec(), gate });
    }

    pub fn num_measurements(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, Op::MeasureZ(_) | Op::MeasureX(_)))
            .count()
    }

    /// T states consumed: every T or T-dagger application costs one.
    pub fn t_state_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| {
                matches!(
                    op,
                    Op::Gate(Gate::T(_) | Gate::Tdg(_))
                        | Op::Conditioned { gate: Gate::T(_) | Gate::Tdg(_), .. }
                )
            })
            .count()
    }

    /// Number of explicit `Rz` gates (tower seed rotations).
    pub fn rz_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| {
                matches!(
                    op,
                    Op::Gate(Gate::Rz { .. }) | Op::Conditioned { gate: Gate::Rz { .. }, .. }
                )
            })
            .count()
    }

    /// Checks the structural invariants: indices in range, multi-qubit gates
    /// on distinct qubits, conditions referencing only earlier measurements.
    pub fn validate(&self) -> Result<()> {
        let mut records = 0usize;
        for op in &self.ops {
            match op {
                Op::Gate(gate) => self.validate_gate(gate)?,
                Op::MeasureZ(q) | Op::MeasureX(q) => {
                    self.validate_qubit(*q)?;
                    records += 1;
                }
                Op::Conditioned { parity_of, gate } => {
                    self.validate_gate(gate)?;
                    for &r in parity_of {
                        if r >= records {
                            return Err(Error::BadMeasurementReference {
                                record: r,
                                available: records,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange { index: q, num_qubits: self.num_qubits });
        }
        Ok(())
    }

    fn validate_gate(&self, gate: &Gate) -> Result<()> {
        let qubits = gate.qubits();
        for &q in &qubits {
            self.validate_qubit(q)?;
        }
        for (i, &q) in qubits.iter().enumerate() {
            if qubits[i + 1..].contains(&q) {
                return Err(Error::DuplicateQubit { index: q });
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Gate application
// ---------------------------------------------------------------------------

/// Applies a unitary gate, returning the new state. The input must be
/// normalized; norm is preserved to machine precision.
pub fn apply_gate(state: &QuantumState, gate: &Gate) -> Result<QuantumState> {
    for &q in &gate.qubits() {
        if q >= state.num_qubits {
            return Err(Error::QubitOutOfRange { index: q, num_qubits: state.num_qubits });
        }
    }
    state.check_normalized()?;
    let mut out = state.clone();
    apply_gate_in_place(&mut out, gate);
    Ok(out)
}

fn apply_gate_in_place(state: &mut QuantumState, gate: &Gate) {
    let n = state.num_qubits;
    let amps = &mut state.amps;
    match gate {
        Gate::X(q) => {
            let mask = qubit_mask(*q, n);
            for i in 0..amps.len() {
                if i & mask == 0 {
                    amps.swap(i, i | mask);
                }
            }
        }
        Gate::Z(q) => phase_if(amps, n, &[*q], Complex64::new(-1.0, 0.0)),
        Gate::S(q) => phase_if(amps, n, &[*q], Complex64::new(0.0, 1.0)),
        Gate::Sdg(q) => phase_if(amps, n, &[*q], Complex64::new(0.0, -1.0)),
        Gate::T(q) => phase_if(
            amps,
            n,
            &[*q],
            Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
        ),
        Gate::Tdg(q) => phase_if(
            amps,
            n,
            &[*q],
            Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
        ),
        Gate::Rz { qubit, angle } => {
            let mask = qubit_mask(*qubit, n);
            let lo = Complex64::from_polar(1.0, -angle / 2.0);
            let hi = Complex64::from_polar(1.0, angle / 2.0);
            for (i, amp) in amps.iter_mut().enumerate() {
                *amp *= if i & mask == 0 { lo } else { hi };
            }
        }
        Gate::H(q) => {
            let mask = qubit_mask(*q, n);
            let r = FRAC_1_SQRT_2;
            for i in 0..amps.len() {
                if i & mask == 0 {
                    let j = i | mask;
                    let (a, b) = (amps[i], amps[j]);
                    amps[i] = r * (a + b);
                    amps[j] = r * (a - b);
                }
            }
        }
        Gate::Cnot { control, target } => {
            let cm = qubit_mask(*control, n);
            let tm = qubit_mask(*target, n);
            for i in 0..amps.len() {
                if i & cm != 0 && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        Gate::MultiCnot { control, targets } => {
            let cm = qubit_mask(*control, n);
            let flip: usize = targets.iter().map(|&t| qubit_mask(t, n)).sum();
            for i in 0..amps.len() {
                let j = i ^ flip;
                if i & cm != 0 && i < j {
                    amps.swap(i, j);
                }
            }
        }
        Gate::Cz(a, b) => phase_if(amps, n, &[*a, *b], Complex64::new(-1.0, 0.0)),
        Gate::Ccz(a, b, c) => phase_if(amps, n, &[*a, *b, *c], Complex64::new(-1.0, 0.0)),
    }
}

/// Multiplies `phase` into every amplitude whose listed qubits are all 1.
fn phase_if(amps: &mut [Complex64], n: usize, qubits: &[usize], phase: Complex64) {
    let mask: usize = qubits.iter().map(|&q| qubit_mask(q, n)).sum();
    for (i, amp) in amps.iter_mut().enumerate() {
        if i & mask == mask {
            *amp *= phase;
        }
    }
}

// ---------------------------------------------------------------------------
// Branch enumeration
// ---------------------------------------------------------------------------

/// One measurement-outcome branch of a simulation.
#[derive(Debug, Clone)]
pub struct BranchResult {
    /// Outcomes in execution order (0/1; X measurements record `-` as 1).
    pub outcome_bits: Vec<u8>,
    /// Born probability of observing this outcome string.
    pub probability: f64,
    /// Renormalized state after all gates and conditioned corrections.
    pub final_state: QuantumState,
}

/// All branches of one simulation plus a pruning report.
#[derive(Debug, Clone)]
pub struct BranchSet {
    pub branches: Vec<BranchResult>,
    pub pruned_branches: usize,
    pub pruned_probability: f64,
}

impl BranchSet {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BranchOptions {
    pub prune_threshold: f64,
    pub max_branches: usize,
}

impl Default for BranchOptions {
    fn default() -> Self {
        Self { prune_threshold: PRUNE_THRESHOLD, max_branches: DEFAULT_BRANCH_CAP }
    }
}

/// Runs `circuit` on `input`, enumerating every measurement branch.
pub fn run_all_branches(circuit: &Circuit, input: &QuantumState) -> Result<BranchSet> {
    run_all_branches_with(circuit, input, BranchOptions::default())
}

pub fn run_all_branches_with(
    circuit: &Circuit,
    input: &QuantumState,
    options: BranchOptions,
) -> Result<BranchSet> {
    circuit.validate()?;
    if input.num_qubits != circuit.num_qubits {
        return Err(Error::QubitCountMismatch {
            left: input.num_qubits,
            right: circuit.num_qubits,
        });
    }
    input.check_normalized()?;

    let mut set = BranchSet { branches: Vec::new(), pruned_branches: 0, pruned_probability: 0.0 };
    let mut walker = Walker { circuit, options, set: &mut set };
    walker.walk(0, input.clone(), 1.0, Vec::new())?;
    Ok(set)
}

struct Walker<'a> {
    circuit: &'a Circuit,
    options: BranchOptions,
    set: &'a mut BranchSet,
}

impl Walker<'_> {
    fn walk(
        &mut self,
        from_op: usize,
        mut state: QuantumState,
        probability: f64,
        outcomes: Vec<u8>,
    ) -> Result<()> {
        for (pos, op) in self.circuit.ops.iter().enumerate().skip(from_op) {
            match op {
                Op::Gate(gate) => apply_gate_in_place(&mut state, gate),
                Op::Conditioned { parity_of, gate } => {
                    let parity = parity_of.iter().fold(0u8, |acc, &r| acc ^ outcomes[r]);
                    if parity == 1 {
                        apply_gate_in_place(&mut state, gate);
                    }
                }
                Op::MeasureZ(q) | Op::MeasureX(q) => {
                    let x_basis = matches!(op, Op::MeasureX(_));
                    let (p0, s0, p1, s1) = measure_split(&state, *q, x_basis);
                    for (outcome, p, s) in [(0u8, p0, s0), (1u8, p1, s1)] {
                        let branch_prob = probability * p;
                        if branch_prob < self.options.prune_threshold {
                            self.set.pruned_branches += 1;
                            self.set.pruned_probability += branch_prob;
                            continue;
                        }
                        let mut bits = outcomes.clone();
                        bits.push(outcome);
                        self.walk(pos + 1, s, branch_prob, bits)?;
                    }
                    return Ok(());
                }
            }
        }
        if self.set.branches.len() >= self.options.max_branches {
            return Err(Error::BranchCapExceeded { cap: self.options.max_branches });
        }
        self.set.branches.push(BranchResult {
            outcome_bits: outcomes,
            probability,
            final_state: state,
        });
        Ok(())
    }
}

/// Projects `state` onto both outcomes of a single-qubit measurement,
/// returning `(p0, state0, p1, state1)` with renormalized states. For the
/// zero-probability outcome the projected state is returned unnormalized
/// (it is dropped by the caller's pruning).
fn measure_split(state: &QuantumState, qubit: usize, x_basis: bool) -> (f64, QuantumState, f64, QuantumState) {
    let n = state.num_qubits;
    let mask = qubit_mask(qubit, n);
    let dim = state.amps.len();
    let mut a0 = vec![Complex64::new(0.0, 0.0); dim];
    let mut a1 = vec![Complex64::new(0.0, 0.0); dim];
    if x_basis {
        // Projectors (I +/- X)/2; outcome 0 is +, outcome 1 is -.
        for i in 0..dim {
            let j = i ^ mask;
            a0[i] = 0.5 * (state.amps[i] + state.amps[j]);
            a1[i] = 0.5 * (state.amps[i] - state.amps[j]);
        }
    } else {
        for i in 0..dim {
            if i & mask == 0 {
                a0[i] = state.amps[i];
            } else {
                a1[i] = state.amps[i];
            }
        }
    }
    let p0: f64 = a0.iter().map(|a| a.norm_sqr()).sum();
    let p1: f64 = a1.iter().map(|a| a.norm_sqr()).sum();
    for (amps, p) in [(&mut a0, p0), (&mut a1, p1)] {
        if p > 0.0 {
            let scale = 1.0 / p.sqrt();
            for a in amps.iter_mut() {
                *a *= scale;
            }
        }
    }
    (
        p0,
        QuantumState { num_qubits: n, amps: a0 },
        p1,
        QuantumState { num_qubits: n, amps: a1 },
    )
}

/// Haar-ish random state for verification inputs (normalized Gaussian
/// amplitudes); deterministic given the generator.
pub fn random_state<R: rand::Rng>(num_qubits: usize, rng: &mut R) -> Result<QuantumState> {
    check_width(num_qubits)?;
    let mut amps: Vec<Complex64> = (0..1usize << num_qubits)
        .map(|_| {
            // Box-Muller pairs; exact distribution is irrelevant here.
            let u: f64 = rng.gen_range(1e-12..1.0);
            let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (-2.0 * u.ln()).sqrt();
            Complex64::new(r * v.cos(), r * v.sin())
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    Ok(QuantumState { num_qubits, amps })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn hadamard_on_zero_gives_plus() {
        let state = QuantumState::zero(1).unwrap();
        let out = apply_gate(&state, &Gate::H(0)).unwrap();
        assert!(fidelity(&out, &QuantumState::plus()).unwrap() > 1.0 - 1e-12);
        assert_close(out.amplitudes()[0].re, FRAC_1_SQRT_2, 1e-12);
        assert_close(out.amplitudes()[1].re, FRAC_1_SQRT_2, 1e-12);
    }

    #[test]
    fn rz_on_plus_matches_phase_convention() {
        let theta = 0.7391;
        let out = apply_gate(&QuantumState::plus(), &Gate::Rz { qubit: 0, angle: theta }).unwrap();
        let expected0 = Complex64::from_polar(FRAC_1_SQRT_2, -theta / 2.0);
        assert!((out.amplitudes()[0] - expected0).norm() < 1e-12);
        assert!(fidelity(&out, &QuantumState::rz_resource(theta)).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn cnot_is_big_endian() {
        // Qubit 0 (control) is the most significant bit: |10> -> |11>.
        let state = QuantumState::basis(2, 0b10).unwrap();
        let out = apply_gate(&state, &Gate::Cnot { control: 0, target: 1 }).unwrap();
        let expected = QuantumState::basis(2, 0b11).unwrap();
        assert!(fidelity(&out, &expected).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn t_state_is_t_on_plus() {
        let out = apply_gate(&QuantumState::plus(), &Gate::T(0)).unwrap();
        assert!(fidelity(&out, &QuantumState::t_state()).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn fidelity_basics() {
        let zero = QuantumState::zero(1).unwrap();
        let one = QuantumState::basis(1, 1).unwrap();
        let plus = QuantumState::plus();
        assert_close(fidelity(&zero, &zero).unwrap(), 1.0, 1e-12);
        assert_close(fidelity(&zero, &one).unwrap(), 0.0, 1e-12);
        assert_close(fidelity(&plus, &zero).unwrap(), FRAC_1_SQRT_2, 1e-12);
    }

    #[test]
    fn fidelity_rejects_dimension_mismatch() {
        let a = QuantumState::zero(1).unwrap();
        let b = QuantumState::zero(2).unwrap();
        assert!(matches!(fidelity(&a, &b), Err(Error::QubitCountMismatch { .. })));
    }

    #[test]
    fn apply_gate_rejects_bad_index_and_bad_norm() {
        let state = QuantumState::zero(2).unwrap();
        assert!(matches!(
            apply_gate(&state, &Gate::X(2)),
            Err(Error::QubitOutOfRange { .. })
        ));
        let bad = QuantumState {
            num_qubits: 1,
            amps: vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)],
        };
        assert!(matches!(apply_gate(&bad, &Gate::X(0)), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn no_measurement_gives_single_branch() {
        let mut circuit = Circuit::new(2);
        circuit.h(0);
        circuit.cnot(0, 1);
        let set = run_all_branches(&circuit, &QuantumState::zero(2).unwrap()).unwrap();
        assert_eq!(set.branches.len(), 1);
        assert_close(set.branches[0].probability, 1.0, 1e-12);
        assert_eq!(set.pruned_branches, 0);
    }

    #[test]
    fn z_measure_on_plus_splits_evenly() {
        let mut circuit = Circuit::new(1);
        circuit.h(0);
        circuit.measure_z(0);
        let set = run_all_branches(&circuit, &QuantumState::zero(1).unwrap()).unwrap();
        assert_eq!(set.branches.len(), 2);
        assert_eq!(set.branches[0].outcome_bits, vec![0]);
        assert_eq!(set.branches[1].outcome_bits, vec![1]);
        for b in &set.branches {
            assert_close(b.probability, 0.5, 1e-12);
        }
        assert_close(set.total_probability(), 1.0, 1e-12);
    }

    #[test]
    fn x_measure_projects_onto_plus_minus() {
        let mut circuit = Circuit::new(1);
        circuit.measure_x(0);
        let set = run_all_branches(&circuit, &QuantumState::zero(1).unwrap()).unwrap();
        assert_eq!(set.branches.len(), 2);
        let plus = QuantumState::plus();
        assert!(fidelity(&set.branches[0].final_state, &plus).unwrap() > 1.0 - 1e-12);
        // Deterministic X measurement leaves a single branch.
        let mut circuit = Circuit::new(1);
        circuit.h(0);
        circuit.measure_x(0);
        let set = run_all_branches(&circuit, &QuantumState::zero(1).unwrap()).unwrap();
        assert_eq!(set.branches.len(), 1);
        assert_eq!(set.pruned_branches, 1);
        assert!(set.pruned_probability < 1e-14);
    }

    #[test]
    fn conditioned_gate_uses_outcome_parity() {
        // Measure |1>, then flip it back conditioned on the outcome.
        let mut circuit = Circuit::new(1);
        circuit.x(0);
        let record = circuit.measure_z(0);
        circuit.when_odd(&[record], Gate::X(0));
        let set = run_all_branches(&circuit, &QuantumState::zero(1).unwrap()).unwrap();
        assert_eq!(set.branches.len(), 1);
        assert_eq!(set.branches[0].outcome_bits, vec![1]);
        let zero = QuantumState::zero(1).unwrap();
        assert!(fidelity(&set.branches[0].final_state, &zero).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn conditioned_gate_must_reference_earlier_records() {
        let mut circuit = Circuit::new(1);
        circuit.when_odd(&[0], Gate::X(0));
        circuit.measure_z(0);
        assert!(matches!(
            run_all_branches(&circuit, &QuantumState::zero(1).unwrap()),
            Err(Error::BadMeasurementReference { .. })
        ));
    }

    #[test]
    fn branch_cap_is_an_explicit_error() {
        let mut circuit = Circuit::new(3);
        for q in 0..3 {
            circuit.h(q);
            circuit.measure_z(q);
        }
        let options = BranchOptions { max_branches: 4, ..BranchOptions::default() };
        assert!(matches!(
            run_all_branches_with(&circuit, &QuantumState::zero(3).unwrap(), options),
            Err(Error::BranchCapExceeded { cap: 4 })
        ));
    }

    #[test]
    fn gate_then_adjoint_restores_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let state = random_state(3, &mut rng).unwrap();
        let gates = [
            Gate::X(0),
            Gate::Z(1),
            Gate::H(2),
            Gate::S(0),
            Gate::Sdg(1),
            Gate::T(2),
            Gate::Tdg(0),
            Gate::Rz { qubit: 1, angle: 1.234 },
            Gate::Cnot { control: 0, target: 2 },
            Gate::MultiCnot { control: 1, targets: vec![0, 2] },
            Gate::Cz(0, 1),
            Gate::Ccz(0, 1, 2),
        ];
        for gate in gates {
            let forward = apply_gate(&state, &gate).unwrap();
            let back = apply_gate(&forward, &gate.adjoint()).unwrap();
            assert!(
                fidelity(&back, &state).unwrap() > 1.0 - 1e-12,
                "gate {gate:?} not undone by adjoint"
            );
        }
    }

    #[test]
    fn random_circuits_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=6);
            let mut state = random_state(n, &mut rng).unwrap();
            for _ in 0..rng.gen_range(0..=20usize) {
                let gate = random_gate(n, &mut rng);
                state = apply_gate(&state, &gate).unwrap();
            }
            assert!((state.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn branch_probabilities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let n = rng.gen_range(2..=5);
            let mut circuit = Circuit::new(n);
            for _ in 0..12 {
                circuit.push(Op::Gate(random_gate(n, &mut rng)));
            }
            for _ in 0..rng.gen_range(1..=8usize) {
                let q = rng.gen_range(0..n);
                if rng.gen_bool(0.5) {
                    circuit.measure_z(q);
                } else {
                    circuit.measure_x(q);
                }
                circuit.push(Op::Gate(random_gate(n, &mut rng)));
            }
            let input = random_state(n, &mut rng).unwrap();
            let set = run_all_branches(&circuit, &input).unwrap();
            assert!((set.total_probability() + set.pruned_probability - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn subsystem_fidelity_detects_product_factors() {
        // |psi> = |+> (x) |R_z(0.4)> (x) |0>
        let state = QuantumState::plus()
            .tensor(&QuantumState::rz_resource(0.4))
            .unwrap()
            .tensor(&QuantumState::zero(1).unwrap())
            .unwrap();
        let f = subsystem_fidelity(&state, &[1], &QuantumState::rz_resource(0.4)).unwrap();
        assert_close(f, 1.0, 1e-12);
        let f = subsystem_fidelity(&state, &[1], &QuantumState::rz_resource(1.9)).unwrap();
        assert!(f < 1.0 - 1e-3);
        // Joint projection across two subsystems.
        let joint = QuantumState::plus().tensor(&QuantumState::rz_resource(0.4)).unwrap();
        let f = subsystem_fidelity(&state, &[0, 1], &joint).unwrap();
        assert_close(f, 1.0, 1e-12);
    }

    fn random_gate<R: rand::Rng>(n: usize, rng: &mut R) -> Gate {
        let q = rng.gen_range(0..n);
        match rng.gen_range(0..12) {
            0 => Gate::X(q),
            1 => Gate::Z(q),
            2 => Gate::H(q),
            3 => Gate::S(q),
            4 => Gate::Sdg(q),
            5 => Gate::T(q),
            6 => Gate::Tdg(q),
            7 => Gate::Rz { qubit: q, angle: rng.gen_range(0.0..std::f64::consts::TAU) },
            8 if n >= 2 => {
                let t = (q + rng.gen_range(1..n)) % n;
                Gate::Cnot { control: q, target: t }
            }
            9 if n >= 2 => {
                let t = (q + rng.gen_range(1..n)) % n;
                Gate::Cz(q, t)
            }
            10 if n >= 3 => {
                let b = (q + 1) % n;
                let c = (q + 2) % n;
                Gate::Ccz(q, b, c)
            }
            _ => Gate::H(q),
        }
    }
}
