//! Closed-form surface-code cost formulas: logical error rate, minimum code
//! distance, logical-qubit counts for the phase-oracle methods, distillation
//! factory footprint, total physical qubits, spacetime volume, and the
//! amortized tower T-count model.
//!
//! Expected T-counts (`R_T` and everything derived from it) stay fractional
//! through all arithmetic; only final reported counts are rounded.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical error rate and code distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeParams {
    /// Physical error rate, in (0, 1).
    pub p: f64,
    /// Code distance; odd, at least 3.
    pub d: u32,
}

impl CodeParams {
    pub fn new(p: f64, d: u32) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid(format!("physical error rate {p} outside (0, 1)")));
        }
        if d < 3 || d % 2 == 0 {
            return Err(Error::invalid(format!("code distance {d} must be odd and >= 3")));
        }
        Ok(Self { p, d })
    }

    /// True when `100 p >= 1`, where the logical error rate no longer decays
    /// with distance. Callers should warn, not fail.
    pub fn above_threshold(&self) -> bool {
        100.0 * self.p >= 1.0
    }
}

/// Black-box magic state distillation factory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorySpec {
    pub name: String,
    /// Physical qubits occupied by one factory.
    pub phys_qubits: u32,
    /// Code cycles per distilled output state.
    pub cycles: u32,
    /// Output error rate per distilled state.
    pub output_error: f64,
}

impl FactorySpec {
    /// The (15-to-1) protocol with distances (11, 5, 5): 2070 physical
    /// qubits for 30 code cycles, output error below 1e-10.
    pub fn default_15_to_1() -> Self {
        Self {
            name: "15-to-1_11-5-5".to_owned(),
            phys_qubits: 2070,
            cycles: 30,
            output_error: 1e-10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.phys_qubits == 0 || self.cycles == 0 {
            return Err(Error::invalid("factory qubits and cycles must be positive"));
        }
        if !(self.output_error > 0.0) {
            return Err(Error::invalid("factory output error must be positive"));
        }
        Ok(())
    }

    /// Loads a factory from key-value text (TOML: `name`, `phys_qubits`,
    /// `cycles`, `output_error`).
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: FactorySpec =
            toml::from_str(text).map_err(|e| Error::Config(format!("factory spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Spacetime volume of one distilled state, in qubit-cycles.
    pub fn volume_per_state(&self) -> f64 {
        f64::from(self.phys_qubits) * f64::from(self.cycles)
    }
}

/// Full cost summary for one (method, distance) point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub logical_qubits: u64,
    pub factory_phys: u64,
    pub total_phys: u64,
    /// Spacetime volume in qubit-cycles.
    pub volume: u64,
    /// Subroutine depth in time steps (each step is d code cycles).
    pub t_steps: f64,
    /// T states consumed per repetition.
    pub tcount: f64,
}

/// Logical error rate per logical qubit per code cycle:
/// `0.1 * (100 p)^((d + 1) / 2)`.
pub fn logical_error_rate(params: CodeParams) -> f64 {
    0.1 * (100.0 * params.p).powi(((params.d + 1) / 2) as i32)
}

/// Smallest odd code distance `d >= 3` with
/// `n_logical * depth_cycles * p_L(d) < target_failure`.
pub fn min_code_distance(
    n_logical: f64,
    depth_cycles: f64,
    p: f64,
    target_failure: f64,
) -> Result<u32> {
    if !(n_logical > 0.0 && depth_cycles > 0.0 && target_failure > 0.0 && target_failure < 1.0) {
        return Err(Error::invalid(
            "min_code_distance needs positive qubit count, depth and target in (0, 1)",
        ));
    }
    if 100.0 * p >= 1.0 {
        return Err(Error::UnreachableTarget { p });
    }
    let mut d = 3;
    loop {
        let params = CodeParams::new(p, d)?;
        if n_logical * depth_cycles * logical_error_rate(params) < target_failure {
            return Ok(d);
        }
        d += 2;
        if d > 999 {
            return Err(Error::UnreachableTarget { p });
        }
    }
}

/// Expected T-count of synthesizing one rotation to accuracy `epsilon` with
/// the fallback protocol: `1.03 log2(1/epsilon) + 5.75`, unrounded.
pub fn rt_fallback(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid(format!("synthesis accuracy {epsilon} outside (0, 1]")));
    }
    Ok(1.03 * (1.0 / epsilon).log2() + 5.75)
}

/// Rotation strategies for the phase oracle circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PocMethod {
    Synthesis,
    InCircuit,
    Independent,
}

/// Logical-qubit count of the phase oracle circuit with `pieces` = S and
/// `register_qubits` = n, routing included:
///
/// * in-circuit: `7 S (2n + l + 2) + 7 (2n + 3)` with `l = ceil(log2 S)`;
/// * independent: `5 (S+1)(2n+2) + 4 (6n+1)(S+1) + 16 S`;
/// * synthesis: the first (data-and-ancilla) term only.
pub fn poc_logical_qubits(method: PocMethod, pieces: u32, register_qubits: u32) -> Result<u64> {
    if pieces == 0 || register_qubits == 0 {
        return Err(Error::invalid("pieces and register qubits must be positive"));
    }
    let s = u64::from(pieces);
    let n = u64::from(register_qubits);
    let l = ceil_log2(s);
    Ok(match method {
        PocMethod::InCircuit => 7 * s * (2 * n + l + 2) + 7 * (2 * n + 3),
        PocMethod::Independent => {
            5 * (s + 1) * (2 * n + 2) + 4 * (6 * n + 1) * (s + 1) + 16 * s
        }
        PocMethod::Synthesis => 5 * (s + 1) * (2 * n + 2),
    })
}

fn ceil_log2(x: u64) -> u64 {
    u64::from(x.next_power_of_two().trailing_zeros())
}

/// Physical qubits running distillation factories for a subroutine that
/// consumes `tcount` T states over `t_steps * d` code cycles, assuming a
/// constant consumption rate: `ceil(N_T N_fac t_fac / (t d))`.
pub fn factory_phys_qubits(tcount: f64, factory: &FactorySpec, t_steps: f64, d: u32) -> u64 {
    if tcount <= 0.0 {
        return 0;
    }
    (tcount * factory.volume_per_state() / (t_steps * f64::from(d))).ceil() as u64
}

/// Factory qubits plus `N_L * 2 d^2` data-patch qubits.
pub fn total_phys_qubits(
    tcount: f64,
    factory: &FactorySpec,
    t_steps: f64,
    d: u32,
    logical_qubits: u64,
) -> u64 {
    factory_phys_qubits(tcount, factory, t_steps, d)
        + logical_qubits * 2 * u64::from(d) * u64::from(d)
}

/// Spacetime volume in qubit-cycles: `N_T N_fac t_fac + 2 N_L t d^3`.
pub fn spacetime_volume(
    tcount: f64,
    factory: &FactorySpec,
    t_steps: f64,
    d: u32,
    logical_qubits: u64,
) -> f64 {
    tcount * factory.volume_per_state()
        + 2.0 * logical_qubits as f64 * t_steps * f64::from(d).powi(3)
}

/// Total T states consumed by a `layers`-layer independent tower over `r`
/// runs: `2 L R_T + 4 (2L - 1) + (r - 1) [R_T + 4 (2L - 1)]`. The first run
/// pays synthesis of the `2L - 1` catalysts plus the seed; later runs pay
/// one seed plus four T states per block.
pub fn tower_tcount_total(layers: u32, rt: f64, repetitions: u32) -> Result<f64> {
    if layers == 0 || repetitions == 0 {
        return Err(Error::invalid("layers and repetitions must be at least 1"));
    }
    let l = f64::from(layers);
    let blocks = 2.0 * l - 1.0;
    Ok(2.0 * l * rt + 4.0 * blocks + f64::from(repetitions - 1) * (rt + 4.0 * blocks))
}

/// Measurement depth of a `layers`-layer independent tower: `R_T + 2 L`.
pub fn tower_measurement_depth(layers: u32, rt: f64) -> Result<f64> {
    if layers == 0 {
        return Err(Error::invalid("layers must be at least 1"));
    }
    Ok(rt + 2.0 * f64::from(layers))
}

/// Extra measurement depth of an n-layer in-circuit tower over canonical
/// gate synthesis: `2 n`.
pub fn in_circuit_depth_overhead(layers: u32) -> f64 {
    2.0 * f64::from(layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn logical_error_rate_reference_points() {
        assert_eq!(logical_error_rate(CodeParams::new(1e-4, 3).unwrap()), 1e-5);
        assert!(close(logical_error_rate(CodeParams::new(1e-2, 7).unwrap()), 0.1, 1e-15));
        assert!(close(
            logical_error_rate(CodeParams::new(1e-4, 11).unwrap()),
            1e-13,
            1e-26
        ));
    }

    #[test]
    fn logical_error_rate_decreases_below_threshold() {
        for &p in &[1e-3, 1e-4, 5e-4] {
            let mut last = f64::INFINITY;
            for d in (3..=25).step_by(2) {
                let rate = logical_error_rate(CodeParams::new(p, d).unwrap());
                assert!(rate < last, "p={p} d={d}");
                last = rate;
            }
        }
        assert!(CodeParams::new(1e-2, 3).unwrap().above_threshold());
        assert!(!CodeParams::new(9e-3, 3).unwrap().above_threshold());
    }

    #[test]
    fn code_params_validation() {
        assert!(CodeParams::new(1e-4, 4).is_err());
        assert!(CodeParams::new(1e-4, 1).is_err());
        assert!(CodeParams::new(0.0, 3).is_err());
    }

    #[test]
    fn min_code_distance_reference_points() {
        assert_eq!(min_code_distance(100.0, 1e4, 1e-4, 1e-2).unwrap(), 7);
        assert_eq!(min_code_distance(1.0, 1.0, 1e-4, 0.5).unwrap(), 3);
        assert_eq!(min_code_distance(1e6, 1e9, 1e-4, 1e-2).unwrap(), 17);
    }

    #[test]
    fn min_code_distance_above_threshold_errors() {
        assert!(matches!(
            min_code_distance(10.0, 10.0, 1e-2, 1e-3),
            Err(Error::UnreachableTarget { .. })
        ));
    }

    #[test]
    fn min_code_distance_is_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let n = 10f64.powf(rng.gen_range(0.0..7.0));
            let depth = 10f64.powf(rng.gen_range(0.0..10.0));
            let p = 10f64.powf(rng.gen_range(-5.0..-2.1));
            let target = 10f64.powf(rng.gen_range(-4.0..-0.1));
            let d = min_code_distance(n, depth, p, target).unwrap();
            let rate = logical_error_rate(CodeParams::new(p, d).unwrap());
            assert!(n * depth * rate < target);
            if d > 3 {
                let rate_below = logical_error_rate(CodeParams::new(p, d - 2).unwrap());
                assert!(n * depth * rate_below >= target, "d={d} not tight");
            }
        }
    }

    #[test]
    fn rt_fallback_reference_points() {
        let rt = rt_fallback(2e-6).unwrap();
        assert!(close(rt, 25.2495, 5e-5), "{rt}");
        assert!(close(rt_fallback(0.5).unwrap(), 6.78, 1e-12));
        assert!(close(rt_fallback(1.0).unwrap(), 5.75, 1e-12));
        assert!(rt_fallback(0.0).is_err());
        assert!(rt_fallback(1.5).is_err());
    }

    #[test]
    fn poc_logical_qubit_reference_points() {
        assert_eq!(poc_logical_qubits(PocMethod::InCircuit, 36, 15).unwrap(), 9807);
        assert_eq!(poc_logical_qubits(PocMethod::Independent, 36, 15).unwrap(), 19964);
        assert_eq!(poc_logical_qubits(PocMethod::Synthesis, 36, 15).unwrap(), 5920);
    }

    #[test]
    fn factory_qubits_reference_points() {
        let factory = FactorySpec::default_15_to_1();
        assert_eq!(factory_phys_qubits(53024.0, &factory, 1000.0, 9), 365_866);
        assert_eq!(factory_phys_qubits(0.0, &factory, 10.0, 9), 0);
        // One factory exactly saturated: t * d = 62100 code cycles.
        assert_eq!(factory_phys_qubits(1.0, &factory, 6900.0, 9), 1);
    }

    #[test]
    fn total_phys_decomposes() {
        let factory = FactorySpec::default_15_to_1();
        assert_eq!(total_phys_qubits(0.0, &factory, 1.0, 11, 1), 242);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let tcount = rng.gen_range(0.0..1e5);
            let t_steps = rng.gen_range(1.0..2000.0);
            let d = 2 * rng.gen_range(1..15) + 1;
            let n_l = rng.gen_range(1..20000u64);
            let total = total_phys_qubits(tcount, &factory, t_steps, d, n_l);
            let parts = factory_phys_qubits(tcount, &factory, t_steps, d)
                + n_l * 2 * u64::from(d) * u64::from(d);
            assert_eq!(total, parts);
        }
    }

    #[test]
    fn volume_reference_and_monotonicity() {
        let factory = FactorySpec::default_15_to_1();
        assert_eq!(spacetime_volume(0.0, &factory, 1.0, 3, 1), 54.0);
        let mut last = 0.0;
        for d in (3..=31).step_by(2) {
            let v = spacetime_volume(1e4, &factory, 100.0, d, 500);
            assert!(v > last);
            last = v;
            // Factory term is independent of d.
            let factory_term = v - 2.0 * 500.0 * 100.0 * f64::from(d).powi(3);
            assert!(close(factory_term, 1e4 * 62100.0, 1e-3));
        }
    }

    #[test]
    fn tower_tcount_reference_points() {
        let rt = 25.2495;
        let total = tower_tcount_total(3, rt, 1).unwrap();
        assert!(close(total, 6.0 * rt + 20.0, 1e-9), "{total}");
        assert!(close(tower_tcount_total(1, 0.0, 5).unwrap(), 20.0, 1e-12));
        assert!(tower_tcount_total(0, rt, 1).is_err());
    }

    #[test]
    fn amortization_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10_000 {
            let layers = rng.gen_range(1..=12u32);
            let rt = rng.gen_range(0.0..60.0);
            let r = rng.gen_range(1..=5000u32);
            let total = tower_tcount_total(layers, rt, r).unwrap();
            let steady = rt + 4.0 * (2.0 * f64::from(layers) - 1.0);
            let deviation = total / f64::from(r) - steady;
            let expected = (2.0 * f64::from(layers) - 1.0) * rt / f64::from(r);
            assert!(
                close(deviation, expected, 1e-9 * (1.0 + expected.abs())),
                "layers={layers} rt={rt} r={r}: {deviation} vs {expected}"
            );
        }
    }

    #[test]
    fn measurement_depth_reference_points() {
        assert!(close(tower_measurement_depth(8, 25.2495).unwrap(), 41.2495, 1e-12));
        assert!(tower_measurement_depth(0, 25.0).is_err());
        assert_eq!(in_circuit_depth_overhead(15), 30.0);
    }

    #[test]
    fn factory_spec_from_toml() {
        let text = r#"
            name = "test-factory"
            phys_qubits = 1000
            cycles = 20
            output_error = 1e-9
        "#;
        let spec = FactorySpec::from_toml_str(text).unwrap();
        assert_eq!(spec.phys_qubits, 1000);
        assert_eq!(spec.cycles, 20);
        assert!(FactorySpec::from_toml_str("name = \"broken\"").is_err());
    }
}
