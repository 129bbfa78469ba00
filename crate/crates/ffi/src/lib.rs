//! C ABI for the catcost toolkit.
//!
//! Every function returns a [`CatcostStatus`] and writes results through
//! out-pointers. Plans and scenarios are opaque handles created by the
//! `*_new` constructors and released by the matching `*_free`; strings
//! returned through `char**` out-parameters belong to the caller and must
//! be released with `catcost_string_free`. The header `include/catcost.h`
//! is generated by cbindgen at build time.

use std::ffi::{c_char, CStr, CString};

use catcost::costmodel::{self, FactorySpec};
use catcost::error::Error;
use catcost::gadgets::verify::verify_all;
use catcost::planner::{self, TowerPlan};
use catcost::rusdepth;
use catcost::scenarios::{self, CrossoverMetric, ScenarioConfig};

/// Result codes shared by every `catcost_*` call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatcostStatus {
    Ok = 0,
    /// A parameter was out of range or otherwise invalid.
    InvalidArgument = 1,
    /// A required pointer argument was null.
    NullPointer = 2,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 3,
    /// The requested failure target cannot be reached at this error rate.
    UnreachableTarget = 4,
    /// Gadget verification ran but at least one gadget failed.
    VerificationFailed = 5,
}

fn status_of(error: &Error) -> CatcostStatus {
    match error {
        Error::UnreachableTarget { .. } => CatcostStatus::UnreachableTarget,
        _ => CatcostStatus::InvalidArgument,
    }
}

/// Opaque tower plan handle.
pub struct CatcostPlan {
    inner: TowerPlan,
    heights: Vec<(u32, u32)>,
}

/// Opaque scenario handle.
pub struct CatcostScenario {
    inner: ScenarioConfig,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatcostScheme {
    Control = 0,
    Excess = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatcostMetric {
    Phys = 0,
    Volume = 1,
}

macro_rules! write_out {
    ($ptr:expr, $value:expr) => {{
        if $ptr.is_null() {
            return CatcostStatus::NullPointer;
        }
        unsafe { *$ptr = $value };
    }};
}

macro_rules! try_ffi {
    ($expr:expr) => {
        match $expr {
            Ok(value) => value,
            Err(err) => return status_of(&err),
        }
    };
}

unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, CatcostStatus> {
    if ptr.is_null() {
        return Err(CatcostStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| CatcostStatus::InvalidUtf8)
}

// ---------------------------------------------------------------------------
// Closed-form cost functions
// ---------------------------------------------------------------------------

/// Logical error rate per logical qubit per code cycle.
#[no_mangle]
pub extern "C" fn catcost_logical_error_rate(p: f64, d: u32, out: *mut f64) -> CatcostStatus {
    let params = try_ffi!(costmodel::CodeParams::new(p, d));
    write_out!(out, costmodel::logical_error_rate(params));
    CatcostStatus::Ok
}

/// Smallest odd code distance meeting the target failure probability.
#[no_mangle]
pub extern "C" fn catcost_min_code_distance(
    n_logical: f64,
    depth_cycles: f64,
    p: f64,
    target_failure: f64,
    out: *mut u32,
) -> CatcostStatus {
    let d = try_ffi!(costmodel::min_code_distance(n_logical, depth_cycles, p, target_failure));
    write_out!(out, d);
    CatcostStatus::Ok
}

/// Expected fallback-synthesis T-count per rotation (fractional).
#[no_mangle]
pub extern "C" fn catcost_rt_fallback(epsilon: f64, out: *mut f64) -> CatcostStatus {
    let rt = try_ffi!(costmodel::rt_fallback(epsilon));
    write_out!(out, rt);
    CatcostStatus::Ok
}

/// Total T states of one tower over `repetitions` runs.
#[no_mangle]
pub extern "C" fn catcost_tower_tcount_total(
    layers: u32,
    rt: f64,
    repetitions: u32,
    out: *mut f64,
) -> CatcostStatus {
    let total = try_ffi!(costmodel::tower_tcount_total(layers, rt, repetitions));
    write_out!(out, total);
    CatcostStatus::Ok
}

/// Measurement depth of an independent tower, `R_T + 2L` time steps.
#[no_mangle]
pub extern "C" fn catcost_tower_measurement_depth(
    layers: u32,
    rt: f64,
    out: *mut f64,
) -> CatcostStatus {
    let depth = try_ffi!(costmodel::tower_measurement_depth(layers, rt));
    write_out!(out, depth);
    CatcostStatus::Ok
}

/// Physical qubits running factories for `tcount` T states consumed over
/// `t_steps * d` code cycles on a factory of `factory_qubits` physical
/// qubits and `factory_cycles` cycles per state.
#[no_mangle]
pub extern "C" fn catcost_factory_phys_qubits(
    tcount: f64,
    factory_qubits: u32,
    factory_cycles: u32,
    t_steps: f64,
    d: u32,
    out: *mut u64,
) -> CatcostStatus {
    if factory_qubits == 0 || factory_cycles == 0 || t_steps <= 0.0 || d == 0 {
        return CatcostStatus::InvalidArgument;
    }
    let factory = factory_spec(factory_qubits, factory_cycles);
    write_out!(out, costmodel::factory_phys_qubits(tcount, &factory, t_steps, d));
    CatcostStatus::Ok
}

/// Factory plus data-patch physical qubits.
#[no_mangle]
pub extern "C" fn catcost_total_phys_qubits(
    tcount: f64,
    factory_qubits: u32,
    factory_cycles: u32,
    t_steps: f64,
    d: u32,
    logical_qubits: u64,
    out: *mut u64,
) -> CatcostStatus {
    if factory_qubits == 0 || factory_cycles == 0 || t_steps <= 0.0 || d == 0 {
        return CatcostStatus::InvalidArgument;
    }
    let factory = factory_spec(factory_qubits, factory_cycles);
    write_out!(out, costmodel::total_phys_qubits(tcount, &factory, t_steps, d, logical_qubits));
    CatcostStatus::Ok
}

/// Spacetime volume in qubit-cycles.
#[no_mangle]
pub extern "C" fn catcost_spacetime_volume(
    tcount: f64,
    factory_qubits: u32,
    factory_cycles: u32,
    t_steps: f64,
    d: u32,
    logical_qubits: u64,
    out: *mut f64,
) -> CatcostStatus {
    if factory_qubits == 0 || factory_cycles == 0 || t_steps <= 0.0 || d == 0 {
        return CatcostStatus::InvalidArgument;
    }
    let factory = factory_spec(factory_qubits, factory_cycles);
    write_out!(out, costmodel::spacetime_volume(tcount, &factory, t_steps, d, logical_qubits));
    CatcostStatus::Ok
}

fn factory_spec(qubits: u32, cycles: u32) -> FactorySpec {
    FactorySpec {
        name: "ffi".to_owned(),
        phys_qubits: qubits,
        cycles,
        output_error: 1e-10,
    }
}

// ---------------------------------------------------------------------------
// RUS depth
// ---------------------------------------------------------------------------

/// Exact expected depth of the parallel RUS model via the convolution
/// oracle.
#[no_mangle]
pub extern "C" fn catcost_exact_expected_max(
    parallel: u32,
    stages: u32,
    copies: u32,
    out: *mut f64,
) -> CatcostStatus {
    let value = try_ffi!(rusdepth::exact_expected_max(parallel, stages, copies));
    write_out!(out, value);
    CatcostStatus::Ok
}

/// Seeded Monte Carlo estimate with standard error.
#[no_mangle]
pub extern "C" fn catcost_mc_expected_max(
    parallel: u32,
    stages: u32,
    copies: u32,
    samples: u64,
    seed: u64,
    out_estimate: *mut f64,
    out_stderr: *mut f64,
) -> CatcostStatus {
    let estimate = try_ffi!(rusdepth::mc_expected_max(parallel, stages, copies, samples, seed));
    write_out!(out_estimate, estimate.estimate);
    write_out!(out_stderr, estimate.stderr);
    CatcostStatus::Ok
}

// ---------------------------------------------------------------------------
// Tower plans
// ---------------------------------------------------------------------------

/// Plans towers for `copies` identical rotations; the handle must be
/// released with `catcost_plan_free`.
#[no_mangle]
pub extern "C" fn catcost_plan_new(
    copies: u32,
    scheme: CatcostScheme,
    out: *mut *mut CatcostPlan,
) -> CatcostStatus {
    let scheme = match scheme {
        CatcostScheme::Control => planner::Scheme::Control,
        CatcostScheme::Excess => planner::Scheme::Excess,
    };
    let plan = try_ffi!(planner::plan_towers(copies, scheme));
    let heights = plan.towers.iter().map(|(&l, &c)| (l, c)).collect();
    let handle = Box::new(CatcostPlan { inner: plan, heights });
    write_out!(out, Box::into_raw(handle));
    CatcostStatus::Ok
}

/// Releases a plan handle; null is ignored.
#[no_mangle]
pub extern "C" fn catcost_plan_free(plan: *mut CatcostPlan) {
    if !plan.is_null() {
        drop(unsafe { Box::from_raw(plan) });
    }
}

/// Number of distinct tower heights in the plan.
#[no_mangle]
pub extern "C" fn catcost_plan_num_heights(
    plan: *const CatcostPlan,
    out: *mut usize,
) -> CatcostStatus {
    let Some(plan) = (unsafe { plan.as_ref() }) else {
        return CatcostStatus::NullPointer;
    };
    write_out!(out, plan.heights.len());
    CatcostStatus::Ok
}

/// Height and count of the `index`-th entry (ascending by height).
#[no_mangle]
pub extern "C" fn catcost_plan_height_at(
    plan: *const CatcostPlan,
    index: usize,
    out_layers: *mut u32,
    out_count: *mut u32,
) -> CatcostStatus {
    let Some(plan) = (unsafe { plan.as_ref() }) else {
        return CatcostStatus::NullPointer;
    };
    let Some(&(layers, count)) = plan.heights.get(index) else {
        return CatcostStatus::InvalidArgument;
    };
    write_out!(out_layers, layers);
    write_out!(out_count, count);
    CatcostStatus::Ok
}

/// Total surplus resource states of the plan.
#[no_mangle]
pub extern "C" fn catcost_plan_excess(
    plan: *const CatcostPlan,
    out: *mut u64,
) -> CatcostStatus {
    let Some(plan) = (unsafe { plan.as_ref() }) else {
        return CatcostStatus::NullPointer;
    };
    write_out!(out, plan.inner.excess);
    CatcostStatus::Ok
}

/// Amortized expected T states per repetition for `angles` rotation
/// families, rounded.
#[no_mangle]
pub extern "C" fn catcost_plan_tcount_per_repetition(
    plan: *const CatcostPlan,
    rt: f64,
    repetitions: u32,
    angles: u32,
    out: *mut u64,
) -> CatcostStatus {
    let Some(plan) = (unsafe { plan.as_ref() }) else {
        return CatcostStatus::NullPointer;
    };
    let value =
        try_ffi!(planner::expected_tcount_per_repetition(&plan.inner, rt, repetitions, angles));
    write_out!(out, value);
    CatcostStatus::Ok
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

/// Creates a scenario from its name (`"poc"` or `"gaussian"`); release
/// with `catcost_scenario_free`.
#[no_mangle]
pub extern "C" fn catcost_scenario_new(
    name: *const c_char,
    out: *mut *mut CatcostScenario,
) -> CatcostStatus {
    let name = match unsafe { utf8_arg(name) } {
        Ok(name) => name,
        Err(status) => return status,
    };
    let scenario_name = match name.parse() {
        Ok(parsed) => parsed,
        Err(err) => return status_of(&err),
    };
    let config = try_ffi!(ScenarioConfig::defaults(scenario_name));
    write_out!(out, Box::into_raw(Box::new(CatcostScenario { inner: config })));
    CatcostStatus::Ok
}

/// Applies a TOML override (same schema as the CLI `--config` file).
#[no_mangle]
pub extern "C" fn catcost_scenario_apply_toml(
    scenario: *mut CatcostScenario,
    toml_text: *const c_char,
) -> CatcostStatus {
    let Some(scenario) = (unsafe { scenario.as_mut() }) else {
        return CatcostStatus::NullPointer;
    };
    let text = match unsafe { utf8_arg(toml_text) } {
        Ok(text) => text,
        Err(status) => return status,
    };
    try_ffi!(scenario.inner.apply_overrides(text));
    CatcostStatus::Ok
}

/// Releases a scenario handle; null is ignored.
#[no_mangle]
pub extern "C" fn catcost_scenario_free(scenario: *mut CatcostScenario) {
    if !scenario.is_null() {
        drop(unsafe { Box::from_raw(scenario) });
    }
}

/// Runs a distance sweep and returns the CSV text (caller frees with
/// `catcost_string_free`).
#[no_mangle]
pub extern "C" fn catcost_scenario_sweep_csv(
    scenario: *const CatcostScenario,
    d_min: u32,
    d_max: u32,
    out: *mut *mut c_char,
) -> CatcostStatus {
    let Some(scenario) = (unsafe { scenario.as_ref() }) else {
        return CatcostStatus::NullPointer;
    };
    let rows = try_ffi!(scenarios::sweep(&scenario.inner, d_min, d_max));
    let csv = scenarios::rows_to_csv(&rows);
    let Ok(cstring) = CString::new(csv) else {
        return CatcostStatus::InvalidUtf8;
    };
    write_out!(out, cstring.into_raw());
    CatcostStatus::Ok
}

/// First odd distance where method `a` stops being cheaper than `b`;
/// writes -1 when there is no crossover in the scanned range.
#[no_mangle]
pub extern "C" fn catcost_scenario_crossover(
    scenario: *const CatcostScenario,
    method_a: *const c_char,
    method_b: *const c_char,
    metric: CatcostMetric,
    d_min: u32,
    d_max: u32,
    out: *mut i64,
) -> CatcostStatus {
    let Some(scenario) = (unsafe { scenario.as_ref() }) else {
        return CatcostStatus::NullPointer;
    };
    let a = match unsafe { utf8_arg(method_a) } {
        Ok(a) => a,
        Err(status) => return status,
    };
    let b = match unsafe { utf8_arg(method_b) } {
        Ok(b) => b,
        Err(status) => return status,
    };
    let metric = match metric {
        CatcostMetric::Phys => CrossoverMetric::Phys,
        CatcostMetric::Volume => CrossoverMetric::Volume,
    };
    let result = try_ffi!(scenarios::crossover(&scenario.inner, a, b, metric, d_min, d_max));
    write_out!(out, result.crossover_d.map_or(-1, i64::from));
    CatcostStatus::Ok
}

// ---------------------------------------------------------------------------
// Gadget verification
// ---------------------------------------------------------------------------

/// Runs every gadget verification and returns the JSON report through
/// `out_json` (caller frees with `catcost_string_free`). Returns
/// `VerificationFailed` when any gadget misses its fidelity target; the
/// report is still written in that case.
#[no_mangle]
pub extern "C" fn catcost_verify_gadgets(
    trials: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> CatcostStatus {
    let reports = try_ffi!(verify_all(trials, seed));
    let all_passed = reports.iter().all(|r| r.passed);
    let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
    let Ok(cstring) = CString::new(json) else {
        return CatcostStatus::InvalidUtf8;
    };
    write_out!(out_json, cstring.into_raw());
    if all_passed {
        CatcostStatus::Ok
    } else {
        CatcostStatus::VerificationFailed
    }
}

/// Releases a string returned by this library; null is ignored.
#[no_mangle]
pub extern "C" fn catcost_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}
