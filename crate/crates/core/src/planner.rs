//! Tower planning: chooses families of independent towers whose yields
//! cover the resource-state demand of `N` identical RUS rotations, and
//! computes the amortized expected T-count per repetition.
//!
//! Demand: level `i` needs `ceil(N / 2^i)` states `|R_z(2^i theta)>`, up to
//! a single state at level `ceil(log2 N)`. A planned tower is the modified
//! factory variant, yielding 4 states at level 0 and 2 at each level
//! `1..=L-2`; towers can only produce even batches, so plans usually carry
//! a small excess.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::costmodel::tower_tcount_total;
use crate::error::{Error, Result};

/// Planning scheme: `Control` covers demand with minimal T-count using
/// several tower heights; `Excess` uses one tall tower design run many
/// times, spending more T states but fewer distinct towers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Control,
    Excess,
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "control" => Ok(Scheme::Control),
            "excess" => Ok(Scheme::Excess),
            other => Err(Error::invalid(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Per-level resource-state requirements for `N` identical rotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandVector {
    pub copies: u32,
    /// `levels[i] = ceil(N / 2^i)` for `i = 0..=ceil(log2 N)`.
    pub levels: Vec<u64>,
}

/// Demand of `N` identical rotations under the RUS doubling chain.
pub fn demand(copies: u32) -> Result<DemandVector> {
    if copies == 0 {
        return Err(Error::invalid("demand needs at least one rotation"));
    }
    let n = u64::from(copies);
    let top = ceil_log2(n);
    let levels = (0..=top).map(|i| div_ceil(n, 1 << i)).collect();
    Ok(DemandVector { copies, levels })
}

fn ceil_log2(x: u64) -> u32 {
    x.next_power_of_two().trailing_zeros()
}

fn div_ceil(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Yield of one modified `layers`-layer tower at `level`: 4 at level 0 and
/// 2 at each level `1..=layers-2`. A 1-layer tower is a single block and
/// yields only 2 level-0 states; planned towers are always 2 layers or more.
pub fn tower_yield(layers: u32, level: u32) -> u64 {
    if level == 0 {
        if layers == 1 {
            2
        } else {
            4
        }
    } else if layers >= 2 && level <= layers - 2 {
        2
    } else {
        0
    }
}

/// A multiset of towers covering a demand vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerPlan {
    pub scheme: Scheme,
    pub demand: DemandVector,
    /// Tower height -> count.
    pub towers: BTreeMap<u32, u32>,
    /// Produced states per level.
    pub yields: Vec<u64>,
    /// Total surplus states over all levels.
    pub excess: u64,
}

impl TowerPlan {
    pub fn num_towers(&self) -> u32 {
        self.towers.values().sum()
    }

    /// Towers physically instantiated at once. The control scheme keeps
    /// every tower of the plan running; the excess scheme constructs one
    /// tower per design and reruns it, trading T states for footprint.
    pub fn instantiated_towers(&self) -> BTreeMap<u32, u32> {
        match self.scheme {
            Scheme::Control => self.towers.clone(),
            Scheme::Excess => self.towers.keys().map(|&layers| (layers, 1)).collect(),
        }
    }

    /// Amortized expected T-count of one repetition for a single rotation
    /// family: each tower instance pays its startup once over `repetitions`
    /// oracle repetitions. Unrounded.
    pub fn tcount_per_repetition(&self, rt: f64, repetitions: u32) -> Result<f64> {
        let mut total = 0.0;
        for (&layers, &count) in &self.towers {
            total += f64::from(count) * tower_tcount_total(layers, rt, repetitions)?
                / f64::from(repetitions);
        }
        Ok(total)
    }

    fn from_towers(
        scheme: Scheme,
        demand_vec: DemandVector,
        towers: BTreeMap<u32, u32>,
    ) -> Result<Self> {
        let mut yields = vec![0u64; demand_vec.levels.len()];
        for (&layers, &count) in &towers {
            for (level, y) in yields.iter_mut().enumerate() {
                *y += u64::from(count) * tower_yield(layers, level as u32);
            }
        }
        let mut excess = 0u64;
        for (level, (&have, &need)) in yields.iter().zip(&demand_vec.levels).enumerate() {
            if have < need {
                return Err(Error::invalid(format!(
                    "plan under-covers level {level}: {have} < {need}"
                )));
            }
            excess += have - need;
        }
        Ok(Self { scheme, demand: demand_vec, towers, yields, excess })
    }
}

/// Plans towers for `copies` identical rotations.
///
/// The control scheme covers demand from the highest level downward: one
/// tower of height `top + 2` serves the top two levels (demands 1 and 2)
/// exactly, then each lower level adds the smallest towers whose top
/// coverage reaches it. The excess scheme instead uses `ceil(N/4)` towers
/// of height `ceil(log2 N) + 2`.
pub fn plan_towers(copies: u32, scheme: Scheme) -> Result<TowerPlan> {
    let demand_vec = demand(copies)?;
    let top = (demand_vec.levels.len() - 1) as u32;
    let mut towers: BTreeMap<u32, u32> = BTreeMap::new();
    match scheme {
        Scheme::Excess => {
            let count = div_ceil(u64::from(copies), 4) as u32;
            towers.insert(top + 2, count);
        }
        Scheme::Control => {
            towers.insert(top + 2, 1);
            let mut covered = vec![0u64; demand_vec.levels.len()];
            add_coverage(&mut covered, top + 2, 1);
            for level in (1..=top).rev() {
                let need = demand_vec.levels[level as usize];
                if covered[level as usize] >= need {
                    continue;
                }
                let missing = need - covered[level as usize];
                let count = div_ceil(missing, 2) as u32;
                *towers.entry(level + 2).or_insert(0) += count;
                add_coverage(&mut covered, level + 2, count);
            }
            if covered[0] < demand_vec.levels[0] {
                let missing = demand_vec.levels[0] - covered[0];
                let count = div_ceil(missing, 4) as u32;
                *towers.entry(2).or_insert(0) += count;
                add_coverage(&mut covered, 2, count);
            }
        }
    }
    TowerPlan::from_towers(scheme, demand_vec, towers)
}

fn add_coverage(covered: &mut [u64], layers: u32, count: u32) {
    for (level, c) in covered.iter_mut().enumerate() {
        *c += u64::from(count) * tower_yield(layers, level as u32);
    }
}

/// Amortized expected T states per repetition for `angles` independent
/// rotation families, each served by `plan`: rounded at the very end.
pub fn expected_tcount_per_repetition(
    plan: &TowerPlan,
    rt: f64,
    repetitions: u32,
    angles: u32,
) -> Result<u64> {
    if repetitions == 0 {
        return Err(Error::invalid("repetitions must be at least 1"));
    }
    let raw = f64::from(angles) * plan.tcount_per_repetition(rt, repetitions)?;
    Ok(raw.round() as u64)
}

/// Baseline T states per repetition for direct gate synthesis of
/// `angles * copies` rotations, rounded.
pub fn synthesis_baseline(angles: u32, copies: u32, rt: f64) -> u64 {
    (f64::from(angles) * f64::from(copies) * rt).round() as u64
}

/// Footprint context: the repeated-rotation scenario counts a modified
/// tower as `4 (6L - 2)` logical qubits (routing included); the phase
/// oracle's towers occupy `4 (6n + 1)` for an n-qubit register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FootprintContext {
    Gaussian,
    Poc { register_qubits: u32 },
}

/// Logical-qubit footprint of instantiating `plan` for every one of
/// `angles` rotation families (towers only; storage buffers are separate).
/// Counts [`TowerPlan::instantiated_towers`], so the excess scheme pays for
/// a single tower per design.
pub fn tower_logical_footprint(plan: &TowerPlan, angles: u32, context: FootprintContext) -> u64 {
    let per_plan: u64 = plan
        .instantiated_towers()
        .iter()
        .map(|(&layers, &count)| {
            let per_tower = match context {
                FootprintContext::Gaussian => 4 * (6 * u64::from(layers) - 2),
                FootprintContext::Poc { register_qubits } => {
                    4 * (6 * u64::from(register_qubits) + 1)
                }
            };
            u64::from(count) * per_tower
        })
        .sum();
    u64::from(angles) * per_plan
}

/// Logical qubits buffering teleportation resource states: two stored
/// states per rotation to absorb the 1/2 RUS success rate.
pub fn rus_buffer_qubits(angles: u32, copies: u32) -> u64 {
    2 * u64::from(angles) * u64::from(copies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costmodel::rt_fallback;

    #[test]
    fn demand_reference_points() {
        assert_eq!(demand(60).unwrap().levels, vec![60, 30, 15, 8, 4, 2, 1]);
        assert_eq!(demand(1).unwrap().levels, vec![1]);
        assert_eq!(demand(4).unwrap().levels, vec![4, 2, 1]);
        assert!(demand(0).is_err());
    }

    #[test]
    fn control_plan_for_sixty_matches_reference() {
        let plan = plan_towers(60, Scheme::Control).unwrap();
        let expected: BTreeMap<u32, u32> =
            [(3, 7), (4, 4), (5, 2), (6, 1), (8, 1)].into_iter().collect();
        assert_eq!(plan.towers, expected);
        assert_eq!(plan.excess, 2);
        assert_eq!(plan.num_towers(), 15);
    }

    #[test]
    fn excess_plan_for_sixty_is_fifteen_eight_layer_towers() {
        let plan = plan_towers(60, Scheme::Excess).unwrap();
        let expected: BTreeMap<u32, u32> = [(8, 15)].into_iter().collect();
        assert_eq!(plan.towers, expected);
    }

    #[test]
    fn small_plans_cover_demand() {
        // A 3-layer tower yields (4, 2) and cannot reach level 2, so N = 4
        // needs a 4-layer tower.
        let plan = plan_towers(4, Scheme::Control).unwrap();
        let expected: BTreeMap<u32, u32> = [(4, 1)].into_iter().collect();
        assert_eq!(plan.towers, expected);
        for (have, need) in plan.yields.iter().zip(&plan.demand.levels) {
            assert!(have >= need);
        }
    }

    #[test]
    fn yields_dominate_demand_for_all_small_sizes() {
        for n in 1..=512u32 {
            for scheme in [Scheme::Control, Scheme::Excess] {
                let plan = plan_towers(n, scheme).unwrap();
                for (level, (have, need)) in
                    plan.yields.iter().zip(&plan.demand.levels).enumerate()
                {
                    assert!(have >= need, "N={n} {scheme:?} level {level}: {have} < {need}");
                }
            }
        }
    }

    #[test]
    fn control_excess_never_exceeds_excess_scheme() {
        for n in 1..=512u32 {
            let control = plan_towers(n, Scheme::Control).unwrap();
            let excess = plan_towers(n, Scheme::Excess).unwrap();
            assert!(control.excess <= excess.excess, "N={n}");
        }
    }

    #[test]
    fn paper_tcounts_reproduced() {
        let rt = rt_fallback(2e-6).unwrap();
        let control = plan_towers(60, Scheme::Control).unwrap();
        assert_eq!(expected_tcount_per_repetition(&control, rt, 200, 35).unwrap(), 28709);
        let excess = plan_towers(60, Scheme::Excess).unwrap();
        assert_eq!(expected_tcount_per_repetition(&excess, rt, 200, 35).unwrap(), 45750);
        assert_eq!(synthesis_baseline(35, 60, rt), 53024);
    }

    #[test]
    fn ordering_control_below_excess_below_synthesis() {
        let rt = rt_fallback(2e-6).unwrap();
        let control = plan_towers(60, Scheme::Control).unwrap();
        let excess = plan_towers(60, Scheme::Excess).unwrap();
        let c = expected_tcount_per_repetition(&control, rt, 200, 35).unwrap();
        let e = expected_tcount_per_repetition(&excess, rt, 200, 35).unwrap();
        let s = synthesis_baseline(35, 60, rt);
        assert!(c < e && e < s, "{c} {e} {s}");
    }

    #[test]
    fn tcount_per_repetition_is_monotone_in_r() {
        let rt = rt_fallback(2e-6).unwrap();
        let plan = plan_towers(60, Scheme::Control).unwrap();
        let mut last = f64::INFINITY;
        for r in [1u32, 2, 5, 10, 50, 200, 1000, 5000] {
            let value = plan.tcount_per_repetition(rt, r).unwrap();
            assert!(value <= last + 1e-9);
            last = value;
        }
    }

    #[test]
    fn footprint_reference_points() {
        let excess = plan_towers(60, Scheme::Excess).unwrap();
        assert_eq!(
            tower_logical_footprint(&excess, 35, FootprintContext::Gaussian),
            6440
        );
        let single = TowerPlan::from_towers(
            Scheme::Control,
            demand(1).unwrap(),
            [(1, 1)].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(
            tower_logical_footprint(&single, 1, FootprintContext::Gaussian),
            16
        );
        assert_eq!(
            tower_logical_footprint(&single, 1, FootprintContext::Poc { register_qubits: 15 }),
            364
        );
        assert_eq!(rus_buffer_qubits(35, 60), 4200);
    }

    #[test]
    fn control_footprint_for_sixty() {
        let control = plan_towers(60, Scheme::Control).unwrap();
        // 7*4(16) + 4*4(22) + 2*4(28) + 4(34) + 4(46) = 1344 per family.
        assert_eq!(
            tower_logical_footprint(&control, 1, FootprintContext::Gaussian),
            1344
        );
        assert_eq!(
            tower_logical_footprint(&control, 35, FootprintContext::Gaussian),
            47040
        );
    }

    /// Independent oracle: exhaustive search over tower multisets (bounded
    /// per-height counts, cost-pruned) minimizing the amortized T-count.
    fn brute_force_min_cost(n: u32, rt: f64, repetitions: u32) -> f64 {
        let needs = demand(n).unwrap();
        let top = (needs.levels.len() - 1) as u32;
        let heights: Vec<u32> = (2..=top + 2).collect();
        let caps: Vec<u32> = heights
            .iter()
            .map(|&h| {
                let level = h - 2;
                let need = needs.levels.get(level as usize).copied().unwrap_or(1);
                (div_ceil(need, 2) + 2) as u32
            })
            .collect();
        let cost_of =
            |h: u32| tower_tcount_total(h, rt, repetitions).unwrap() / f64::from(repetitions);
        let mut best = f64::INFINITY;
        let mut counts = vec![0u32; heights.len()];
        search(&heights, &caps, &needs.levels, &cost_of, &mut counts, 0, 0.0, &mut best);
        best
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        heights: &[u32],
        caps: &[u32],
        needs: &[u64],
        cost_of: &impl Fn(u32) -> f64,
        counts: &mut Vec<u32>,
        index: usize,
        cost_so_far: f64,
        best: &mut f64,
    ) {
        if cost_so_far >= *best {
            return;
        }
        if index == heights.len() {
            let mut covered = vec![0u64; needs.len()];
            for (i, &count) in counts.iter().enumerate() {
                add_coverage(&mut covered, heights[i], count);
            }
            if covered.iter().zip(needs).all(|(have, need)| have >= need) {
                *best = cost_so_far;
            }
            return;
        }
        for count in 0..=caps[index] {
            counts[index] = count;
            let cost = cost_so_far + f64::from(count) * cost_of(heights[index]);
            search(heights, caps, needs, cost_of, counts, index + 1, cost, best);
        }
        counts[index] = 0;
    }

    #[test]
    fn control_plan_matches_brute_force_minimum() {
        let rt = rt_fallback(2e-6).unwrap();
        for n in 1..=64u32 {
            let plan = plan_towers(n, Scheme::Control).unwrap();
            let greedy_cost = plan.tcount_per_repetition(rt, 200).unwrap();
            let optimal = brute_force_min_cost(n, rt, 200);
            assert!(
                (greedy_cost - optimal).abs() < 1e-6 * optimal.max(1.0),
                "N={n}: greedy {greedy_cost} vs optimal {optimal}"
            );
        }
    }
}
