//! Engineering and planning scenarios, each in a single-objective ratio form
//! and a multi-objective form.
//!
//! Quantities whose formulas are not pinned down use smooth surrogates with
//! the constants written out below. Every objective is minimized; maximized
//! quantities are negated. Denominators are floored so objectives stay
//! finite over the whole box.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::problem::{Bounds, Problem};
use crate::{Error, Result};

const STEEL_DENSITY: f64 = 7850.0;
const TINY: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioId {
    Truss,
    MlTuning,
    SupplyChain,
    Traffic,
    City,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Single,
    Multi,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 5] = [
        ScenarioId::Truss,
        ScenarioId::MlTuning,
        ScenarioId::SupplyChain,
        ScenarioId::Traffic,
        ScenarioId::City,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::Truss => "truss",
            ScenarioId::MlTuning => "ml_tuning",
            ScenarioId::SupplyChain => "supply_chain",
            ScenarioId::Traffic => "traffic",
            ScenarioId::City => "city",
        }
    }

    pub fn n_objectives(self, variant: Variant) -> usize {
        match (self, variant) {
            (_, Variant::Single) => 1,
            (ScenarioId::Truss, _) => 3,
            (ScenarioId::MlTuning, _) => 6,
            (ScenarioId::SupplyChain, _) => 7,
            (ScenarioId::Traffic, _) => 3,
            (ScenarioId::City, _) => 10,
        }
    }

    pub fn bounds(self, variant: Variant) -> Vec<Bounds> {
        let b = |lower: f64, upper: f64| Bounds { lower, upper };
        match (self, variant) {
            (ScenarioId::Truss, Variant::Single) => vec![b(0.0, 5.0), b(0.0, 0.1)],
            // main length, main thickness, two support lengths
            (ScenarioId::Truss, Variant::Multi) => vec![b(0.0, 5.0), b(0.0, 0.5), b(0.0, 3.0), b(0.0, 3.0)],
            (ScenarioId::MlTuning, _) => vec![b(1e-5, 1e-3), b(1.0, 10.0), b(10.0, 100.0)],
            (ScenarioId::SupplyChain, _) => vec![b(0.0, 1000.0); 5],
            (ScenarioId::Traffic, _) => vec![b(0.0, 60.0); 4],
            (ScenarioId::City, _) => vec![b(0.0, 100.0), b(0.0, 30.0), b(0.0, 50.0)],
        }
    }
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Single => "single",
            Variant::Multi => "multi",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::Unknown {
                kind: "scenario",
                id: s.to_string(),
            })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "single" => Ok(Variant::Single),
            "multi" => Ok(Variant::Multi),
            _ => Err(Error::Unknown {
                kind: "scenario variant",
                id: s.to_string(),
            }),
        }
    }
}

fn truss_single(x: &[f64]) -> f64 {
    let (length, thickness) = (x[0], x[1]);
    let weight = STEEL_DENSITY * length * thickness;
    let cost = 5.0 * weight + 1000.0;
    let strength = (1000.0 * length * thickness).max(TINY);
    cost / strength
}

// Supports are 0.02 m braces that carry load more efficiently than the
// main beam.
fn truss_multi(x: &[f64]) -> Vec<f64> {
    let (length, thickness) = (x[0], x[1]);
    let supports = &x[2..];
    let brace = 0.02;
    let main = length * thickness;
    let strength = 1000.0 * main + supports.iter().map(|s| 2000.0 * s * brace).sum::<f64>();
    let weight = STEEL_DENSITY * main + supports.iter().map(|s| STEEL_DENSITY * s * brace).sum::<f64>();
    let material = 5.0 * weight;
    let manufacturing = 1000.0 + 50.0 * supports.iter().sum::<f64>();
    vec![
        -strength / (weight + TINY),
        material + manufacturing,
        -length.min(thickness),
    ]
}

fn ml_accuracy(lr: f64, complexity: f64) -> f64 {
    1.0 - (-lr * complexity).exp()
}

fn ml_single(x: &[f64]) -> f64 {
    let (lr, layers, neurons) = (x[0], x[1], x[2]);
    let complexity = layers * neurons;
    let time = complexity * (1.0 / lr).ln();
    time / ml_accuracy(lr, complexity).max(TINY)
}

fn ml_multi(x: &[f64]) -> Vec<f64> {
    let (lr, layers, neurons) = (x[0], x[1], x[2]);
    let complexity = layers * neurons;
    let accuracy = ml_accuracy(lr, complexity);
    let time = complexity * (1.0 / lr).ln();
    let memory = 0.004 * complexity + 0.5 * layers;
    let inference = 0.01 * layers + 1e-4 * complexity;
    let gap = 0.1 * accuracy * complexity / 1000.0;
    vec![-accuracy, complexity, time, memory, inference, gap]
}

fn service_level(q: &[f64]) -> f64 {
    let mean = q.iter().sum::<f64>() / q.len() as f64;
    1.0 - (-mean / 500.0).exp()
}

// holding 1.0 per unit, ordering 100 per product, transport 500 + 0.5 per unit
fn supply_single(q: &[f64]) -> f64 {
    let total: f64 = q.iter().sum();
    let cost = total + 100.0 * q.len() as f64 + 500.0 + 0.5 * total;
    cost / service_level(q).max(TINY)
}

fn supply_multi(q: &[f64]) -> Vec<f64> {
    let total: f64 = q.iter().sum();
    let mean = total / q.len() as f64;
    let inventory = total;
    let ordering: f64 = q.iter().map(|v| 100.0 * (1.0 - (-v / 50.0).exp())).sum();
    let transport = 500.0 + 0.5 * total;
    let quality = 0.02 * total + 200.0 * (-mean / 500.0).exp();
    let carbon = 0.3 * total + 2e-4 * q.iter().map(|v| v * v).sum::<f64>();
    let smallest = q.iter().copied().fold(f64::INFINITY, f64::min);
    vec![
        inventory,
        ordering,
        transport,
        quality,
        carbon,
        -service_level(q),
        -smallest / 1000.0,
    ]
}

fn cycle_time(g: &[f64]) -> f64 {
    g.iter().sum::<f64>().max(1.0)
}

fn traffic_single(g: &[f64]) -> f64 {
    let cycle = cycle_time(g);
    (cycle / 2.0) / (1000.0 / cycle)
}

fn traffic_multi(g: &[f64]) -> Vec<f64> {
    let cycle = cycle_time(g);
    let max_red = g.iter().map(|gi| cycle - gi).fold(0.0, f64::max);
    vec![cycle / 2.0, max_red, -1000.0 / cycle]
}

fn city_single(x: &[f64]) -> f64 {
    let total: f64 = x.iter().sum();
    if total <= 0.0 {
        // limit of the ratio as the inputs go to zero
        return 3000.0;
    }
    (1000.0 * total) / (total / 3.0)
}

// Linear responses in energy efficiency e (%), green space g (%) and
// public transport share p (%).
fn city_multi(x: &[f64]) -> Vec<f64> {
    let (e, g, p) = (x[0], x[1], x[2]);
    vec![
        1000.0 - 6.0 * e + 2.0 * p,
        -g,
        80.0 - 1.0 * p - 0.5 * g,
        60.0 - 0.3 * e - 0.8 * g - 0.4 * p,
        500.0 - 1.5 * e + 4.0 * g,
        -p,
        300.0 - 1.0 * e - 0.5 * p + 0.3 * g,
        -(60.0 + 0.2 * e - 0.1 * g + 0.1 * p),
        1000.0 + 3.0 * e + 5.0 * g + 2.0 * p,
        -(50.0 + 0.2 * e + 0.6 * g + 0.3 * p),
    ]
}

/// Scenario `id` in the requested variant.
pub fn scenario(id: ScenarioId, variant: Variant) -> Problem {
    let name = format!("{}_{}", id.name(), variant.name());
    let bounds = id.bounds(variant);
    let m = id.n_objectives(variant);
    match (id, variant) {
        (ScenarioId::Truss, Variant::Single) => Problem::new(name, bounds, m, |x| vec![truss_single(x)]),
        (ScenarioId::Truss, Variant::Multi) => Problem::new(name, bounds, m, truss_multi),
        (ScenarioId::MlTuning, Variant::Single) => Problem::new(name, bounds, m, |x| vec![ml_single(x)]),
        (ScenarioId::MlTuning, Variant::Multi) => Problem::new(name, bounds, m, ml_multi),
        (ScenarioId::SupplyChain, Variant::Single) => Problem::new(name, bounds, m, |x| vec![supply_single(x)]),
        (ScenarioId::SupplyChain, Variant::Multi) => Problem::new(name, bounds, m, supply_multi),
        (ScenarioId::Traffic, Variant::Single) => Problem::new(name, bounds, m, |x| vec![traffic_single(x)]),
        (ScenarioId::Traffic, Variant::Multi) => Problem::new(name, bounds, m, traffic_multi),
        (ScenarioId::City, Variant::Single) => Problem::new(name, bounds, m, |x| vec![city_single(x)]),
        (ScenarioId::City, Variant::Multi) => Problem::new(name, bounds, m, city_multi),
    }
}

/// All ten scenario problems, single variants first.
pub fn scenario_suite() -> Vec<(ScenarioId, Variant, Problem)> {
    [Variant::Single, Variant::Multi]
        .into_iter()
        .flat_map(|v| ScenarioId::ALL.into_iter().map(move |id| (id, v, scenario(id, v))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn single_variant_reference_points() {
        let truss = scenario(ScenarioId::Truss, Variant::Single);
        assert_relative_eq!(truss.evaluate_genotype(&[1.0, 1.0]).unwrap()[0], 41.25, epsilon = 1e-9);
        let traffic = scenario(ScenarioId::Traffic, Variant::Single);
        assert_relative_eq!(traffic.evaluate(&[30.0; 4]).unwrap()[0], 7.2, epsilon = 1e-9);
        let ml = scenario(ScenarioId::MlTuning, Variant::Single);
        let v = ml.evaluate(&[1e-3, 10.0, 100.0]).unwrap()[0];
        let expected = 1000.0 * 1000f64.ln() / (1.0 - (-1f64).exp());
        assert!((v - expected).abs() <= 1e-9, "{v}");
        assert!((v - 6907.76 / 0.63212).abs() <= 0.5, "{v}");
        let city = scenario(ScenarioId::City, Variant::Single);
        assert_relative_eq!(city.evaluate(&[50.0, 10.0, 20.0]).unwrap()[0], 3000.0, epsilon = 1e-9);
    }

    #[test]
    fn arities_and_finiteness() {
        let mut rng = stream(9);
        for (id, variant, p) in scenario_suite() {
            assert_eq!(p.n_objectives(), id.n_objectives(variant));
            let corners = [vec![0.0; p.n_variables()], vec![1.0; p.n_variables()]];
            for g in corners.into_iter().chain((0..200).map(|_| {
                (0..p.n_variables()).map(|_| rng.random::<f64>()).collect::<Vec<_>>()
            })) {
                p.evaluate_genotype(&g).unwrap();
            }
        }
    }

    #[test]
    fn monotone_directions() {
        // more green time lengthens every wait
        let t = scenario(ScenarioId::Traffic, Variant::Multi);
        let a = t.evaluate(&[20.0; 4]).unwrap();
        let b = t.evaluate(&[40.0; 4]).unwrap();
        assert!(b[0] > a[0] && b[1] > a[1] && b[2] > a[2]);
        // larger orders raise holding cost and service level
        let s = scenario(ScenarioId::SupplyChain, Variant::Multi);
        let a = s.evaluate(&[100.0; 5]).unwrap();
        let b = s.evaluate(&[500.0; 5]).unwrap();
        assert!(b[0] > a[0] && b[5] < a[5]);
        // a faster learning rate raises accuracy
        let m = scenario(ScenarioId::MlTuning, Variant::Multi);
        let a = m.evaluate(&[1e-4, 5.0, 50.0]).unwrap();
        let b = m.evaluate(&[1e-3, 5.0, 50.0]).unwrap();
        assert!(b[0] < a[0] && b[2] < a[2]);
    }
}
