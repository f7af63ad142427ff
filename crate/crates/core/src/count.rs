//! Gate tallies and elementary-cost estimates.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gate::{Circuit, Gate};

/// Estimates how many single-qubit and controlled-NOT gates a gate lowers to.
///
/// Gates with at most one control cost 1 and a swap costs 3 (three
/// controlled-NOTs). A multi-controlled X with `c ≥ 2` controls costs
/// `alpha · (c + 1)`, linear in the number of qubits the gate touches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub alpha: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel { alpha: 16.0 }
    }
}

impl CostModel {
    pub fn new(alpha: f64) -> CostModel {
        CostModel { alpha }
    }

    /// Cost of a multi-controlled X with `controls` controls.
    pub fn multi_controlled(&self, controls: usize) -> f64 {
        if controls <= 1 {
            1.0
        } else {
            self.alpha * (controls + 1) as f64
        }
    }

    pub fn gate_cost(&self, gate: &Gate) -> f64 {
        match gate {
            Gate::Single { .. } | Gate::Controlled { .. } => 1.0,
            Gate::MultiControlledX(p) => self.multi_controlled(p.control_count()),
            Gate::Swap { .. } => 3.0,
        }
    }
}

/// Per-kind gate counts of a circuit plus its elementary-cost estimate.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GateCountReport {
    pub single: usize,
    pub controlled: usize,
    pub multi_controlled_x: usize,
    pub swap: usize,
    /// Multi-controlled X gates keyed by their number of controls.
    pub multi_controlled_by_controls: BTreeMap<usize, usize>,
    /// Number of labelled blocks (e.g. two-point swaps inside a translation).
    pub blocks: usize,
    pub elementary_cost: f64,
}

impl GateCountReport {
    pub fn total(&self) -> usize {
        self.single + self.controlled + self.multi_controlled_x + self.swap
    }

    /// Adds another report's counts to this one.
    pub fn accumulate(&mut self, other: &GateCountReport) {
        self.single += other.single;
        self.controlled += other.controlled;
        self.multi_controlled_x += other.multi_controlled_x;
        self.swap += other.swap;
        for (c, k) in &other.multi_controlled_by_controls {
            *self.multi_controlled_by_controls.entry(*c).or_default() += k;
        }
        self.blocks += other.blocks;
        self.elementary_cost += other.elementary_cost;
    }
}

impl fmt::Display for GateCountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} gates: {} single, {} controlled, {} multi-controlled X, {} swap",
            self.total(),
            self.single,
            self.controlled,
            self.multi_controlled_x,
            self.swap
        )?;
        if !self.multi_controlled_by_controls.is_empty() {
            f.write_str(" (controls:")?;
            for (c, k) in &self.multi_controlled_by_controls {
                write!(f, " {c}x{k}")?;
            }
            f.write_str(")")?;
        }
        if self.blocks > 0 {
            write!(f, "; {} blocks", self.blocks)?;
        }
        write!(f, "; elementary cost {}", self.elementary_cost)
    }
}

pub fn count_gates(circuit: &Circuit, model: &CostModel) -> GateCountReport {
    let mut r = GateCountReport { blocks: circuit.blocks().len(), ..Default::default() };
    for g in circuit.gates() {
        match g {
            Gate::Single { .. } => r.single += 1,
            Gate::Controlled { .. } => r.controlled += 1,
            Gate::MultiControlledX(p) => {
                r.multi_controlled_x += 1;
                *r.multi_controlled_by_controls.entry(p.control_count()).or_default() += 1;
            }
            Gate::Swap { .. } => r.swap += 1,
        }
        r.elementary_cost += model.gate_cost(g);
    }
    r
}
