//! JSON documents for matrices, machines, distributions, state vectors and
//! circuits, plus the line-oriented sample format.
//!
//! Floats are written in shortest round-trip form and parsed exactly, so every
//! finite `f64` survives a write/read cycle bit for bit.

use qbm_core::boltzmann::{BoltzmannMachine, ProbabilityDistribution, SpinConfig};
use qbm_core::kernel::{ComplexMatrix, C64};
use qbm_core::prep::{Gate, GateSequence, PrepCircuit};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Parses a JSON document, attributing failures to `source` and the line
/// serde reports.
pub fn parse_json<T: DeserializeOwned>(source: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        origin: source.to_string(),
        line: Some(e.line()),
        message: e.to_string(),
    })
}

fn invalid(source: &str, message: impl Into<String>) -> CliError {
    CliError::Parse { origin: source.to_string(), line: None, message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixDoc {
    pub fn dense(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let part = |f: fn(&C64) -> f64| (0..n).map(|i| m.row(i).iter().map(f).collect()).collect();
        Self { dim: n, diagonal: None, re: Some(part(|z| z.re)), im: Some(part(|z| z.im)) }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self { dim: values.len(), diagonal: Some(values.to_vec()), re: None, im: None }
    }

    pub fn to_matrix(&self, source: &str) -> Result<ComplexMatrix, CliError> {
        let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == self.dim && rows.iter().all(|r| r.len() == self.dim);
        let matrix = match (&self.diagonal, &self.re, &self.im) {
            (Some(d), None, None) => {
                if d.len() != self.dim {
                    return Err(invalid(source, format!("diagonal has {} entries, dim is {}", d.len(), self.dim)));
                }
                ComplexMatrix::from_diagonal(d)
            }
            (None, Some(re), im) => {
                let zeros = vec![vec![0.0; self.dim]; self.dim];
                let im = im.as_ref().unwrap_or(&zeros);
                if !rows_ok(re) || !rows_ok(im) {
                    return Err(invalid(source, format!("re and im must be {0}x{0} arrays", self.dim)));
                }
                ComplexMatrix::from_parts(re, im).map_err(|e| invalid(source, e.to_string()))?
            }
            _ => return Err(invalid(source, "expected either `diagonal` or `re` (with optional `im`)")),
        };
        if self.dim == 0 || matrix.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid(source, "matrix must be non-empty with finite entries"));
        }
        Ok(matrix)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineDoc {
    pub n_spins: usize,
    pub beta: f64,
    pub layers: Vec<Vec<usize>>,
    #[serde(default)]
    pub weights: Vec<(usize, usize, f64)>,
    pub biases: Vec<f64>,
}

impl MachineDoc {
    pub fn from_machine(m: &BoltzmannMachine) -> Self {
        Self {
            n_spins: m.n_spins(),
            beta: m.beta(),
            layers: m.layers().to_vec(),
            weights: m.couplings(),
            biases: m.biases().to_vec(),
        }
    }

    pub fn to_machine(&self, source: &str) -> Result<BoltzmannMachine, CliError> {
        if self.biases.len() != self.n_spins {
            return Err(invalid(
                source,
                format!("n_spins is {} but {} biases were given", self.n_spins, self.biases.len()),
            ));
        }
        BoltzmannMachine::new(self.beta, self.layers.clone(), &self.weights, self.biases.clone())
            .map_err(|e| CliError::invalid_input(source, e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionDoc {
    pub probs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub dims: (usize, usize),
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl StateDoc {
    pub fn from_state(psi: &[C64], dims: (usize, usize)) -> Self {
        Self { dims, re: psi.iter().map(|z| z.re).collect(), im: psi.iter().map(|z| z.im).collect() }
    }

    pub fn to_state(&self, source: &str) -> Result<Vec<C64>, CliError> {
        let len = self.dims.0 * self.dims.1;
        if self.re.len() != len || self.im.len() != len {
            return Err(invalid(source, format!("state must have {len} amplitudes for dims {:?}", self.dims)));
        }
        Ok(self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateDoc {
    pub kind: String,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDoc {
    pub m: usize,
    pub levels: usize,
    pub permutation: Vec<usize>,
    pub gates: Vec<GateDoc>,
}

impl CircuitDoc {
    pub fn from_circuit(c: &PrepCircuit) -> Self {
        let gates = c
            .sequence
            .gates
            .iter()
            .map(|g| match *g {
                Gate::FlipX { qubit } => GateDoc { kind: "flip_x".into(), targets: vec![qubit], angle: None },
                Gate::TwoLevelRy { level_a, level_b, angle } => {
                    GateDoc { kind: "two_level_ry".into(), targets: vec![level_a, level_b], angle: Some(angle) }
                }
                Gate::Phase { level, angle } => {
                    GateDoc { kind: "phase".into(), targets: vec![level], angle: Some(angle) }
                }
            })
            .collect();
        Self { m: c.sequence.m, levels: c.levels, permutation: c.permutation.clone(), gates }
    }

    pub fn to_circuit(&self, source: &str) -> Result<PrepCircuit, CliError> {
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(k, g)| match (g.kind.as_str(), g.targets.as_slice(), g.angle) {
                ("flip_x", &[qubit], None) => Ok(Gate::FlipX { qubit }),
                ("two_level_ry", &[level_a, level_b], Some(angle)) => Ok(Gate::TwoLevelRy { level_a, level_b, angle }),
                ("phase", &[level], Some(angle)) => Ok(Gate::Phase { level, angle }),
                _ => Err(invalid(source, format!("gate {k}: malformed `{}` record", g.kind))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PrepCircuit {
            sequence: GateSequence { m: self.m, gates },
            permutation: self.permutation.clone(),
            levels: self.levels,
        })
    }
}

/// Renders configurations one per line, `+` for spin up and `-` for spin down.
pub fn format_samples(samples: &[SpinConfig]) -> String {
    let mut out = String::with_capacity(samples.iter().map(|s| s.len() + 1).sum());
    for s in samples {
        out.extend(s.spins().iter().map(|&x| if x > 0 { '+' } else { '-' }));
        out.push('\n');
    }
    out
}

/// Parses a sample file of `width`-character lines. Blank lines are skipped.
pub fn parse_samples(source: &str, text: &str, width: usize) -> Result<Vec<SpinConfig>, CliError> {
    let mut samples = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let at = |message: String| CliError::Parse { origin: source.to_string(), line: Some(index + 1), message };
        let spins = line
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(at(format!("unexpected character {other:?}; expected '+' or '-'"))),
            })
            .collect::<Result<Vec<i8>, _>>()?;
        if spins.len() != width {
            return Err(at(format!("expected {width} spins, found {}", spins.len())));
        }
        samples.push(SpinConfig::new(spins).expect("spins are +-1"));
    }
    if samples.is_empty() {
        return Err(invalid(source, "sample file contains no configurations"));
    }
    Ok(samples)
}

/// Empirical distribution of sample labels over `2^width` states.
pub fn empirical_distribution(samples: &[SpinConfig], width: usize) -> ProbabilityDistribution {
    let mut counts = vec![0.0; 1 << width];
    for s in samples {
        counts[s.label()] += 1.0;
    }
    ProbabilityDistribution::from_weights(&counts).expect("at least one sample")
}
