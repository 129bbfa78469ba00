//! Catalyst circuit gadgets and their exact-simulation verification.
//!
//! Builders construct the circuits (logical-AND pair, catalyst towers,
//! repeat-until-success teleportation, GHZ fan-out/fan-in, multi-controlled
//! Toffoli); [`verify`] checks each against its advertised semantics with
//! the dense simulator and reports the result as a [`GadgetReport`].

mod towers;
pub mod verify;

pub use towers::{
    build_in_circuit_tower, build_independent_tower, TowerCircuit, TowerKind, TowerSpec,
    TowerWires,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::statevec::{
    apply_gate, run_all_branches, BranchResult, Circuit, Gate, QuantumState, MAX_QUBITS,
};

/// Outcome of verifying one gadget.
#[derive(Debug, Clone, Serialize)]
pub struct GadgetReport {
    pub gadget: String,
    /// Worst fidelity against the target state over all tested inputs,
    /// angles and measurement branches.
    pub worst_target_fidelity: f64,
    /// Worst fidelity of the recovered catalyst states (1 for gadgets
    /// without catalysts).
    pub worst_catalyst_fidelity: f64,
    /// T states consumed by one run of the circuit.
    pub t_states: usize,
    /// Synthesized seed rotations (costed as `R_T` in the cost model).
    pub seed_rotations: usize,
    pub measurements: usize,
    pub trials: usize,
    pub passed: bool,
}

// ---------------------------------------------------------------------------
// Logical-AND pair
// ---------------------------------------------------------------------------

/// Three-qubit logical-AND compute: inputs on qubits 0 and 1, ancilla on
/// qubit 2 starting in `|0>`. Internally prepares `|T>` and leaves the
/// ancilla holding `x AND y` exactly; consumes four T states.
pub fn build_logical_and_compute() -> Circuit {
    let mut circuit = Circuit::new(3);
    towers::and_compute(&mut circuit, 0, 1, 2);
    circuit
}

/// Three-qubit logical-AND uncompute: H and Z-measurement on the ancilla
/// with a classically controlled CZ on the inputs. Consumes no T states;
/// the measured ancilla is left in its outcome state.
pub fn build_logical_and_uncompute() -> Circuit {
    let mut circuit = Circuit::new(3);
    towers::and_uncompute(&mut circuit, 0, 1, 2, false);
    circuit
}

// ---------------------------------------------------------------------------
// Repeat-until-success rotation teleportation
// ---------------------------------------------------------------------------

/// Enumerates the RUS teleportation chain for `R_z(theta)` on a single-qubit
/// `target` state. Round `j` (1-indexed) consumes the resource state
/// `|R_z(2^(j-1) theta)>`; a zero outcome teleports successfully, a one
/// outcome doubles the angle owed. Returns one branch per success round plus
/// the residual all-fail branch; `final_state` is the data qubit alone.
pub fn rus_teleport_enumerate(
    target: &QuantumState,
    theta: f64,
    max_rounds: u32,
) -> Result<Vec<BranchResult>> {
    if target.num_qubits() != 1 {
        return Err(Error::invalid("RUS target must be a single qubit"));
    }
    if max_rounds == 0 {
        return Err(Error::invalid("max_rounds must be at least 1"));
    }
    let mut branches = Vec::with_capacity(max_rounds as usize + 1);
    let mut carry = target.clone();
    let mut fail_probability = 1.0;
    let mut fail_bits: Vec<u8> = Vec::new();
    for round in 0..max_rounds {
        let angle = (1u64 << round) as f64 * theta;
        let joint = carry.tensor(&QuantumState::rz_resource(angle))?;
        let mut circuit = Circuit::new(2);
        circuit.cnot(0, 1);
        circuit.measure_z(1);
        let set = run_all_branches(&circuit, &joint)?;
        let mut next_carry = None;
        for branch in set.branches {
            let data = extract_data_qubit(&branch.final_state, branch.outcome_bits[0]);
            if branch.outcome_bits[0] == 0 {
                let mut bits = fail_bits.clone();
                bits.push(0);
                branches.push(BranchResult {
                    outcome_bits: bits,
                    probability: fail_probability * branch.probability,
                    final_state: data,
                });
            } else {
                fail_probability *= branch.probability;
                next_carry = Some(data);
            }
        }
        fail_bits.push(1);
        carry = next_carry.expect("teleportation failure branch always has weight 1/2");
    }
    branches.push(BranchResult {
        outcome_bits: fail_bits,
        probability: fail_probability,
        final_state: carry,
    });
    Ok(branches)
}

/// Pulls the data qubit out of the two-qubit post-measurement state; the
/// resource qubit is in the basis state `outcome`.
fn extract_data_qubit(joint: &QuantumState, outcome: u8) -> QuantumState {
    let amps = joint.amplitudes();
    let m = outcome as usize;
    QuantumState::from_amplitudes(vec![amps[m], amps[2 | m]])
        .expect("post-measurement state is normalized")
}

// ---------------------------------------------------------------------------
// GHZ fan-out / fan-in
// ---------------------------------------------------------------------------

/// Fan-out circuit: data on qubit 0, a `copies`-qubit GHZ state built on
/// qubits `1..=copies`, a CNOT from the data into the undistributed leg
/// (qubit 1), a Z measurement of that leg and an X correction on the rest.
/// After the measurement the data qubit plus the remaining `copies - 1`
/// legs hold the fanned-out state.
pub fn build_ghz_fanout(copies: u32) -> Result<Circuit> {
    if copies < 2 {
        return Err(Error::invalid("fan-out needs at least 2 copies"));
    }
    let n = copies as usize + 1;
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { requested: n, limit: MAX_QUBITS });
    }
    let mut circuit = Circuit::new(n);
    circuit.h(1);
    for leg in 2..n {
        circuit.cnot(1, leg);
    }
    circuit.cnot(0, 1);
    let record = circuit.measure_z(1);
    for leg in 2..n {
        circuit.when_odd(&[record], Gate::X(leg));
    }
    Ok(circuit)
}

/// Fan-in circuit on `copies` qubits: data on qubit 0 and `copies - 1`
/// clones on the rest. X measurements on the clones, a Z correction on the
/// data when the outcome parity is odd, and each clone is returned to `|0>`.
pub fn build_ghz_fanin(copies: u32) -> Result<Circuit> {
    if copies < 2 {
        return Err(Error::invalid("fan-in needs at least 2 copies"));
    }
    let n = copies as usize;
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { requested: n, limit: MAX_QUBITS });
    }
    let mut circuit = Circuit::new(n);
    let mut records = Vec::with_capacity(n - 1);
    for clone in 1..n {
        records.push(circuit.measure_x(clone));
    }
    circuit.when_odd(&records, Gate::Z(0));
    for (clone, &record) in (1..n).zip(&records) {
        circuit.when_odd(&[record], Gate::Z(clone));
        circuit.h(clone);
    }
    Ok(circuit)
}

// ---------------------------------------------------------------------------
// Multi-controlled Toffoli
// ---------------------------------------------------------------------------

/// A multi-controlled Toffoli built from conventional Toffolis and
/// measurement-uncomputed AND ancillae.
#[derive(Debug, Clone)]
pub struct MctCircuit {
    pub circuit: Circuit,
    pub controls: Vec<usize>,
    pub target: usize,
    pub ancillas: Vec<usize>,
    pub toffoli_count: usize,
}

/// Builds an `l`-controlled Toffoli for `2 <= l <= 6` from `l - 1`
/// conventional Toffoli gates and at most `l - 1` ancillae. For `l = 2`
/// this is the plain three-qubit Toffoli; otherwise an AND chain is
/// computed onto ancillae, copied onto the target, and uncomputed by
/// X-basis measurements, returning every ancilla to `|0>`.
pub fn build_mct(controls: u32) -> Result<MctCircuit> {
    if !(2..=6).contains(&controls) {
        return Err(Error::invalid(format!(
            "control count {controls} outside the supported range 2..=6"
        )));
    }
    let l = controls as usize;
    let control_qubits: Vec<usize> = (0..l).collect();
    let target = l;
    if l == 2 {
        let mut circuit = Circuit::new(3);
        toffoli(&mut circuit, 0, 1, 2);
        return Ok(MctCircuit {
            circuit,
            controls: control_qubits,
            target,
            ancillas: Vec::new(),
            toffoli_count: 1,
        });
    }
    let ancillas: Vec<usize> = (l + 1..2 * l).collect();
    let mut circuit = Circuit::new(2 * l);
    // AND chain: anc[0] = c0 AND c1, anc[i] = anc[i-1] AND c(i+1).
    toffoli(&mut circuit, 0, 1, ancillas[0]);
    for i in 1..l - 1 {
        toffoli(&mut circuit, ancillas[i - 1], i + 1, ancillas[i]);
    }
    circuit.cnot(ancillas[l - 2], target);
    // Uncompute in reverse; the AND inputs are still intact at each step.
    for i in (1..l - 1).rev() {
        and_measure_uncompute(&mut circuit, ancillas[i - 1], i + 1, ancillas[i]);
    }
    and_measure_uncompute(&mut circuit, 0, 1, ancillas[0]);
    Ok(MctCircuit {
        circuit,
        controls: control_qubits,
        target,
        ancillas,
        toffoli_count: l - 1,
    })
}

/// Conventional Toffoli via CCZ conjugated by Hadamards on the target.
fn toffoli(circuit: &mut Circuit, c0: usize, c1: usize, target: usize) {
    circuit.h(target);
    circuit.ccz(c0, c1, target);
    circuit.h(target);
}

/// X-basis measurement uncompute of an AND-valued ancilla, mirroring the
/// logical-AND uncompute: H then Z-measure equals an X measurement of the
/// pre-H state; the CZ correction repairs the phase and the ancilla is
/// reset to `|0>`.
fn and_measure_uncompute(circuit: &mut Circuit, x: usize, y: usize, anc: usize) {
    towers::and_uncompute(circuit, x, y, anc, true);
}

// ---------------------------------------------------------------------------
// Shared helpers for expected states
// ---------------------------------------------------------------------------

/// Assembles a product state over `num_qubits` wires from per-wire factors
/// (default `|0>`). Factors are single-qubit states keyed by wire index.
pub(crate) fn product_state(
    num_qubits: usize,
    factors: &[(usize, QuantumState)],
) -> Result<QuantumState> {
    let mut parts: Vec<QuantumState> = vec![QuantumState::zero(1)?; num_qubits];
    for (wire, factor) in factors {
        parts[*wire] = factor.clone();
    }
    let mut state = parts[0].clone();
    for part in &parts[1..] {
        state = state.tensor(part)?;
    }
    Ok(state)
}

/// Applies `R_z(angle)` to a single-qubit state (used to build expected
/// outputs through a path independent of the tower circuits).
pub(crate) fn rotated(state: &QuantumState, angle: f64) -> QuantumState {
    apply_gate(state, &Gate::Rz { qubit: 0, angle }).expect("single-qubit rotation")
}
