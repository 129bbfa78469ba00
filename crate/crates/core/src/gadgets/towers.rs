//! Catalyst tower circuit constructions.
//!
//! The building block is the phase-catalysis sub-circuit ("CT block"). One
//! block at angle `phi` takes two lines `a`, `b` and a catalyst
//! `|R_z(phi)>`, and routes a single `R_z(2 phi)` applied on its connection
//! wire into `R_z(phi)` on *both* `a` and `b`, restoring the catalyst. The
//! connection wire is created by a logical-AND (one `|T>` ancilla plus
//! three T-type gates, so four T states per block) and removed again by the
//! measurement-based uncompute.
//!
//! Stacking blocks so that each block's connection wire becomes a line of
//! the next level's block yields the towers: the in-circuit tower applies
//! the rotations `{R_z(2^i theta)}` directly to data lines, while the
//! independent towers start every data line in `|+>` and act as factories
//! for rotation resource states. A single synthesized "seed" rotation at
//! the top drives the whole stack.

use crate::error::{Error, Result};
use crate::statevec::{Circuit, Gate, MAX_QUBITS};

/// Which tower family to construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerKind {
    /// Rotations applied in place on computational qubits.
    InCircuit,
    /// Resource-state factory with the layout of the 3-layer figure:
    /// two level-0 outputs, three at the top level.
    Independent,
    /// Factory variant with a side chain of extra blocks: four level-0
    /// outputs and two at each level `1..layers-1`.
    IndependentModified,
}

/// Parameters of one tower: `layers` stacked levels rotating by
/// `2^(base_exponent + i) * base_angle` at level `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TowerSpec {
    pub kind: TowerKind,
    pub layers: u32,
    pub base_angle: f64,
    pub base_exponent: u32,
}

impl TowerSpec {
    /// Rotation angle applied at tower level `level`.
    pub fn level_angle(&self, level: u32) -> f64 {
        (1u64 << (self.base_exponent + level)) as f64 * self.base_angle
    }

    /// Angle of the synthesized seed rotation at the top of the tower.
    pub fn seed_angle(&self) -> f64 {
        self.level_angle(self.layers)
    }
}

/// Role of each wire in a built tower circuit.
#[derive(Debug, Clone)]
pub struct TowerWires {
    /// `(qubit, level)`: lines that receive `R_z(2^(k+level) theta)`.
    pub data: Vec<(usize, u32)>,
    /// `(qubit, level)`: catalyst lines, expected in `|R_z(2^(k+level) theta)>`
    /// on input and restored on output.
    pub catalysts: Vec<(usize, u32)>,
    /// Connection/AND wires; start in `|0>` and are returned to `|0>`.
    pub connections: Vec<usize>,
}

/// A tower circuit together with its wire map.
#[derive(Debug, Clone)]
pub struct TowerCircuit {
    pub spec: TowerSpec,
    pub circuit: Circuit,
    pub wires: TowerWires,
}

impl TowerCircuit {
    pub fn num_qubits(&self) -> usize {
        self.circuit.num_qubits()
    }

    /// Yield per level: how many data lines receive each level's rotation.
    pub fn yield_per_level(&self) -> Vec<u32> {
        let mut yields = vec![0u32; self.spec.layers as usize];
        for &(_, level) in &self.wires.data {
            yields[level as usize] += 1;
        }
        while yields.last() == Some(&0) {
            yields.pop();
        }
        yields
    }
}

/// One CT block's wiring: `a` is the fan-out control line, `b` the second
/// line, `cat` the catalyst, `conn` the connection wire to the next level.
#[derive(Debug, Clone, Copy)]
struct CtBlock {
    a: usize,
    b: usize,
    cat: usize,
    conn: usize,
}

/// Logical-AND compute onto `anc` (must be `|0>`): prepares `|T>` and leaves
/// `anc = x AND y`. Consumes four T states (the `|T>` plus two T-dagger and
/// one T).
pub(crate) fn and_compute(c: &mut Circuit, x: usize, y: usize, anc: usize) {
    c.h(anc);
    c.t(anc);
    c.cnot(x, anc);
    c.cnot(y, anc);
    c.multi_cnot(anc, &[x, y]);
    c.tdg(x);
    c.tdg(y);
    c.t(anc);
    c.multi_cnot(anc, &[x, y]);
    c.h(anc);
    c.s(anc);
}

/// Measurement-based logical-AND uncompute: H, Z-measure, conditional CZ on
/// the inputs; consumes no T states. When `reset` is set the ancilla is
/// flipped back to `|0>` so the wire can be reused.
pub(crate) fn and_uncompute(c: &mut Circuit, x: usize, y: usize, anc: usize, reset: bool) {
    c.h(anc);
    let record = c.measure_z(anc);
    c.when_odd(&[record], Gate::Cz(x, y));
    if reset {
        c.when_odd(&[record], Gate::X(anc));
    }
}

/// Forward half of the CT block, up to the point where the connection wire
/// is handed to the next level.
fn ct_open(c: &mut Circuit, blk: CtBlock) {
    c.x(blk.cat);
    c.multi_cnot(blk.a, &[blk.b, blk.cat]);
    and_compute(c, blk.b, blk.cat, blk.conn);
    c.cnot(blk.a, blk.conn);
}

/// Mirror half of the CT block, run after the connection wire has received
/// its doubled rotation.
fn ct_close(c: &mut Circuit, blk: CtBlock) {
    c.cnot(blk.a, blk.conn);
    and_uncompute(c, blk.b, blk.cat, blk.conn, true);
    c.cnot(blk.b, blk.cat);
    c.multi_cnot(blk.a, &[blk.b, blk.cat]);
    c.x(blk.cat);
}

fn check_ceiling(wires: usize) -> Result<()> {
    if wires > MAX_QUBITS {
        return Err(Error::TooManyQubits { requested: wires, limit: MAX_QUBITS });
    }
    Ok(())
}

/// Builds an in-circuit tower of `spec.layers` blocks. Level 0 rotates two
/// data lines, every higher level one more; the two-layer case reproduces
/// the reference circuit gate for gate.
pub fn build_in_circuit_tower(spec: &TowerSpec) -> Result<TowerCircuit> {
    if spec.kind != TowerKind::InCircuit {
        return Err(Error::invalid("spec kind must be in_circuit"));
    }
    let m = spec.layers as usize;
    if m == 0 {
        return Err(Error::invalid("tower needs at least one layer"));
    }
    let num_qubits = 3 * m + 1;
    check_ceiling(num_qubits)?;

    let mut circuit = Circuit::new(num_qubits);
    let mut wires = TowerWires { data: vec![(0, 0), (1, 0)], catalysts: vec![(2, 0)], connections: vec![3] };
    let mut blocks = vec![CtBlock { a: 0, b: 1, cat: 2, conn: 3 }];
    for i in 1..m {
        let base = 4 + 3 * (i - 1);
        let (data, cat, conn) = (base, base + 1, base + 2);
        wires.data.push((data, i as u32));
        wires.catalysts.push((cat, i as u32));
        wires.connections.push(conn);
        blocks.push(CtBlock { a: blocks[i - 1].conn, b: data, cat, conn });
    }

    for blk in &blocks {
        ct_open(&mut circuit, *blk);
    }
    circuit.rz(blocks[m - 1].conn, spec.seed_angle());
    for blk in blocks.iter().rev() {
        ct_close(&mut circuit, *blk);
    }

    Ok(TowerCircuit { spec: *spec, circuit, wires })
}

/// Builds an independent tower (either factory variant). All data lines are
/// meant to start in `|+>` so that the outputs are rotation resource states.
pub fn build_independent_tower(spec: &TowerSpec) -> Result<TowerCircuit> {
    match spec.kind {
        TowerKind::Independent => build_independent_base(spec),
        TowerKind::IndependentModified => build_independent_modified(spec),
        TowerKind::InCircuit => Err(Error::invalid("spec kind must be an independent variant")),
    }
}

/// Base layout: a chain of blocks plus one side block feeding the top, so
/// two levels run in parallel. Three layers give the figure's yield of two
/// level-0 and three level-1 states on 13 lines.
fn build_independent_base(spec: &TowerSpec) -> Result<TowerCircuit> {
    let layers = spec.layers as usize;
    if layers == 0 {
        return Err(Error::invalid("tower needs at least one layer"));
    }
    if layers == 1 {
        return build_single_block(spec);
    }
    let num_qubits = 3 * layers + 4;
    check_ceiling(num_qubits)?;

    let mut circuit = Circuit::new(num_qubits);
    let mut wires = TowerWires { data: vec![(0, 0), (1, 0)], catalysts: vec![(2, 0)], connections: vec![3] };
    let mut chain = vec![CtBlock { a: 0, b: 1, cat: 2, conn: 3 }];
    let mut next = 4;
    for i in 1..=layers - 2 {
        let (data, cat, conn) = (next, next + 1, next + 2);
        next += 3;
        wires.data.push((data, i as u32));
        wires.catalysts.push((cat, i as u32));
        wires.connections.push(conn);
        chain.push(CtBlock { a: chain[i - 1].conn, b: data, cat, conn });
    }
    // Side block at level layers-2; its connection wire is the second input
    // of the top block, which is how two levels operate in parallel.
    let side = CtBlock { a: next, b: next + 1, cat: next + 2, conn: next + 3 };
    let side_level = (layers - 2) as u32;
    wires.data.push((side.a, side_level));
    wires.data.push((side.b, side_level));
    wires.catalysts.push((side.cat, side_level));
    wires.connections.push(side.conn);
    next += 4;
    let top = CtBlock { a: chain[layers - 2].conn, b: side.conn, cat: next, conn: next + 1 };
    wires.catalysts.push((top.cat, (layers - 1) as u32));
    wires.connections.push(top.conn);
    chain.push(top);

    for blk in &chain[..layers - 1] {
        ct_open(&mut circuit, *blk);
    }
    ct_open(&mut circuit, side);
    ct_open(&mut circuit, top);
    circuit.rz(top.conn, spec.seed_angle());
    ct_close(&mut circuit, top);
    ct_close(&mut circuit, side);
    for blk in chain[..layers - 1].iter().rev() {
        ct_close(&mut circuit, *blk);
    }

    Ok(TowerCircuit { spec: *spec, circuit, wires })
}

/// Modified layout: a full side chain mirrors the main chain, with each
/// side block's connection wire consuming one output line of the level
/// above. An `L`-layer tower has `2L-1` blocks on `6L-2` lines and yields
/// four level-0 states plus two at each level `1..=L-2`.
fn build_independent_modified(spec: &TowerSpec) -> Result<TowerCircuit> {
    let layers = spec.layers as usize;
    if layers == 0 {
        return Err(Error::invalid("tower needs at least one layer"));
    }
    if layers == 1 {
        return build_single_block(spec);
    }
    let num_qubits = 6 * layers - 2;
    check_ceiling(num_qubits)?;

    let mut circuit = Circuit::new(num_qubits);
    let mut wires = TowerWires { data: vec![(0, 0), (1, 0)], catalysts: vec![(2, 0)], connections: vec![3] };
    let mut chain = vec![CtBlock { a: 0, b: 1, cat: 2, conn: 3 }];
    let mut next = 4;
    for i in 1..=layers - 2 {
        let (data, cat, conn) = (next, next + 1, next + 2);
        next += 3;
        wires.data.push((data, i as u32));
        wires.catalysts.push((cat, i as u32));
        wires.connections.push(conn);
        chain.push(CtBlock { a: chain[i - 1].conn, b: data, cat, conn });
    }

    // Side chain S_0 .. S_(layers-2); S_j sits at level j and its connection
    // wire replaces one data line of the block at level j+1.
    let s0 = CtBlock { a: next, b: next + 1, cat: next + 2, conn: next + 3 };
    next += 4;
    wires.data.push((s0.a, 0));
    wires.data.push((s0.b, 0));
    wires.catalysts.push((s0.cat, 0));
    wires.connections.push(s0.conn);
    let mut side = vec![s0];
    for j in 1..=layers - 2 {
        let (data, cat, conn) = (next, next + 1, next + 2);
        next += 3;
        wires.data.push((data, j as u32));
        wires.catalysts.push((cat, j as u32));
        wires.connections.push(conn);
        side.push(CtBlock { a: data, b: side[j - 1].conn, cat, conn });
    }

    let top = CtBlock {
        a: chain[layers - 2].conn,
        b: side[layers - 2].conn,
        cat: next,
        conn: next + 1,
    };
    wires.catalysts.push((top.cat, (layers - 1) as u32));
    wires.connections.push(top.conn);
    chain.push(top);
    debug_assert_eq!(next + 2, num_qubits);

    for blk in &chain[..layers - 1] {
        ct_open(&mut circuit, *blk);
    }
    for blk in &side {
        ct_open(&mut circuit, *blk);
    }
    ct_open(&mut circuit, top);
    circuit.rz(top.conn, spec.seed_angle());
    ct_close(&mut circuit, top);
    for blk in side.iter().rev() {
        ct_close(&mut circuit, *blk);
    }
    for blk in chain[..layers - 1].iter().rev() {
        ct_close(&mut circuit, *blk);
    }

    Ok(TowerCircuit { spec: *spec, circuit, wires })
}

/// One-layer tower: a single CT block whose connection wire receives the
/// seed rotation directly. Serves both independent variants.
fn build_single_block(spec: &TowerSpec) -> Result<TowerCircuit> {
    let mut circuit = Circuit::new(4);
    let blk = CtBlock { a: 0, b: 1, cat: 2, conn: 3 };
    ct_open(&mut circuit, blk);
    circuit.rz(blk.conn, spec.seed_angle());
    ct_close(&mut circuit, blk);
    Ok(TowerCircuit {
        spec: *spec,
        circuit,
        wires: TowerWires {
            data: vec![(0, 0), (1, 0)],
            catalysts: vec![(2, 0)],
            connections: vec![3],
        },
    })
}
