//! Circuit-versus-oracle verification reports.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::count::{count_gates, CostModel, GateCountReport};
use crate::error::Result;
use crate::gate::{Circuit, Polarity};
use crate::geometry::ImageGeometry;
use crate::oracle::{oracle_map, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::sim::basis_image;
use crate::transform::{LocalFlipSpec, RotationAngle, TransformSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Widths up to this are checked on every basis state.
    pub exhaustive_limit: usize,
    /// Number of random basis states checked above the limit.
    pub samples: usize,
    pub seed: u64,
    pub cost: CostModel,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            samples: 10_000,
            seed: 0,
            cost: CostModel::default(),
        }
    }
}

/// One expected gate count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountCheck {
    pub law: String,
    pub expected: usize,
    pub actual: usize,
}

impl CountCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

/// First basis state where circuit and oracle disagree. `circuit` is `None`
/// when the circuit does not send that state to a single basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: usize,
    pub oracle: usize,
    pub circuit: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub spec: String,
    pub geometry: ImageGeometry,
    pub mode: CheckMode,
    pub checked: usize,
    pub mismatch: Option<Mismatch>,
    pub counts: Vec<CountCheck>,
    pub gates: GateCountReport,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none() && self.counts.iter().all(CountCheck::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mode = match self.mode {
            CheckMode::Exhaustive => "exhaustive",
            CheckMode::Sampled => "sampled",
        };
        writeln!(f, "{verdict} {} on {}", self.spec, self.geometry)?;
        match self.mismatch {
            None => writeln!(f, "  permutation: matches oracle on {} basis states ({mode})", self.checked)?,
            Some(m) => {
                let got = m.circuit.map_or("a non-basis state".to_string(), |c| c.to_string());
                writeln!(
                    f,
                    "  permutation: first mismatch at basis index {}: oracle {} circuit {got}",
                    m.index, m.oracle
                )?
            }
        }
        for c in &self.counts {
            let mark = if c.passed() { "ok" } else { "MISMATCH" };
            writeln!(f, "  {}: expected {} got {} {mark}", c.law, c.expected, c.actual)?;
        }
        write!(f, "  gates: {}", self.gates)
    }
}

/// Gate-count laws for the circuit `spec` builds.
pub fn count_laws(geometry: &ImageGeometry, spec: &TransformSpec, report: &GateCountReport) -> Result<Vec<CountCheck>> {
    spec.validate(geometry)?;
    let n = geometry.qubits();
    let check = |law: &str, expected, actual| CountCheck { law: law.to_string(), expected, actual };
    Ok(match spec {
        TransformSpec::Swap { s, t } => {
            let d = (geometry.index_of(s)? ^ geometry.index_of(t)?).count_ones() as usize;
            vec![
                check("multi-controlled X = 2d-1", 2 * d - 1, report.multi_controlled_x),
                check("total gates = 2d-1", 2 * d - 1, report.total()),
            ]
        }
        TransformSpec::Flip { fixed } => {
            let expect = n - geometry.width(*fixed)?;
            vec![check("X gates = n-m_j", expect, report.single), check("total gates = n-m_j", expect, report.total())]
        }
        TransformSpec::LocalFlip(lf) => {
            let expect = n - 1 - geometry.width(lf.preserved)?;
            vec![
                check("controlled gates = n-1-m_x", expect, report.controlled),
                check("total gates = n-1-m_x", expect, report.total()),
            ]
        }
        TransformSpec::Rotation { x, angle, .. } => {
            let m = geometry.width(*x)?;
            match angle {
                RotationAngle::Half => vec![
                    check("X gates = 2m_x", 2 * m, report.single),
                    check("swap gates = 0", 0, report.swap),
                    check("total gates = 2m_x", 2 * m, report.total()),
                ],
                _ => vec![
                    check("swap gates = m_x", m, report.swap),
                    check("X gates = m_x", m, report.single),
                    check("total gates = 2m_x", 2 * m, report.total()),
                ],
            }
        }
        TransformSpec::Translation { axis } => {
            let m = geometry.width(*axis)?;
            vec![check("two-point swap blocks = 2^m_x-1", (1 << m) - 1, report.blocks)]
        }
    })
}

fn compare(geometry: &ImageGeometry, spec: &TransformSpec, circuit: &Circuit, i: usize) -> Result<Option<Mismatch>> {
    let oracle = oracle_map(geometry, spec, i)?;
    let got = basis_image(circuit, i).ok();
    Ok((got != Some(oracle)).then_some(Mismatch { index: i, oracle, circuit: got }))
}

/// Compares `circuit` against the oracle for `spec` and checks the gate-count
/// laws. Exhaustive up to the configured width, sampled above it.
pub fn verify_circuit(
    geometry: &ImageGeometry,
    spec: &TransformSpec,
    circuit: &Circuit,
    options: &VerifyOptions,
) -> Result<VerifyReport> {
    spec.validate(geometry)?;
    let gates = count_gates(circuit, &options.cost);
    let counts = count_laws(geometry, spec, &gates)?;
    let n = geometry.qubits();
    let mut mismatch = None;
    let (mode, checked) = if circuit.width() != n {
        mismatch = Some(Mismatch { index: 0, oracle: oracle_map(geometry, spec, 0)?, circuit: None });
        (CheckMode::Exhaustive, 0)
    } else if n <= options.exhaustive_limit {
        for i in 0..geometry.len() {
            if let Some(m) = compare(geometry, spec, circuit, i)? {
                mismatch = Some(m);
                break;
            }
        }
        (CheckMode::Exhaustive, geometry.len())
    } else {
        let mut rng = StdRng::seed_from_u64(options.seed);
        let top = geometry.len() - 1;
        let mut picks = vec![0, top];
        if let TransformSpec::Swap { s, t } = spec {
            picks.extend([geometry.index_of(s)?, geometry.index_of(t)?]);
        }
        picks.extend((0..options.samples).map(|_| rng.random_range(0..=top)));
        for &i in &picks {
            if let Some(m) = compare(geometry, spec, circuit, i)? {
                mismatch = Some(m);
                break;
            }
        }
        (CheckMode::Sampled, picks.len())
    };
    Ok(VerifyReport { spec: spec.to_string(), geometry: geometry.clone(), mode, checked, mismatch, counts, gates })
}

pub fn verify_spec(geometry: &ImageGeometry, spec: &TransformSpec, options: &VerifyOptions) -> Result<VerifyReport> {
    let circuit = spec.build(geometry)?;
    verify_circuit(geometry, spec, &circuit, options)
}

/// Every flip, local flip, rotation and translation valid on `geometry`,
/// plus the swap of the two extreme corners.
pub fn builtin_specs(geometry: &ImageGeometry) -> Vec<TransformSpec> {
    let k = geometry.axis_count();
    let widths = geometry.widths();
    let mut specs = Vec::new();
    for j in 1..=k {
        specs.push(TransformSpec::Flip { fixed: j });
    }
    for preserved in 1..=k {
        for control_axis in (1..=k).filter(|&j| j != preserved) {
            for bit in 1..=widths[control_axis - 1] {
                for polarity in [Polarity::Zero, Polarity::One] {
                    specs.push(TransformSpec::LocalFlip(LocalFlipSpec { preserved, control_axis, bit, polarity }));
                }
            }
        }
    }
    for x in 1..=k {
        for y in (1..=k).filter(|&y| y != x && widths[y - 1] == widths[x - 1]) {
            for angle in RotationAngle::ALL {
                specs.push(TransformSpec::Rotation { x, y, angle });
            }
        }
    }
    for axis in 1..=k {
        specs.push(TransformSpec::Translation { axis });
    }
    let far: Vec<usize> = (1..=k).map(|j| geometry.axis_size(j).expect("axis") - 1).collect();
    specs.push(TransformSpec::Swap { s: vec![0; k], t: far });
    specs
}
