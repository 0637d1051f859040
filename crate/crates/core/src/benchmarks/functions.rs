//! Closed-form test functions on their standard published domains.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::problem::{Bounds, Problem};
use crate::{Error, Result};

/// Perm 0,d,β parameters: the two-dimensional instance with β = 10.
const PERM_D: usize = 2;
const PERM_BETA: f64 = 10.0;

const SCHWEFEL_CONSTANT: f64 = 418.982_887_272_433_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchmarkId {
    Ackley,
    Beale,
    BentCigar,
    Booth,
    Branin,
    /// Bukin N.4.
    Bukin,
    BukinN6,
    CosineMixture,
    CrossInTray,
    /// De Jong F4 (weighted quartic, no noise term).
    DeJong,
    DixonPrice,
    DropWave,
    Eggholder,
    Griewank,
    Himmelblau,
    Levy,
    Matyas,
    /// Perm 0,d,β with d = 2, β = 10.
    Perm,
    Rastrigin,
    Rosenbrock,
    Salomon,
    SchafferN2,
    SchafferN4,
    Schwefel,
    SixHumpCamel,
    Sphere,
    Step,
    ThreeHumpCamel,
    Trid,
    Zakharov,
}

/// Where and what the published global minimum is.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnownOptimum {
    pub value: f64,
    pub location: Vec<f64>,
}

impl BenchmarkId {
    pub const ALL: [BenchmarkId; 30] = [
        BenchmarkId::Ackley,
        BenchmarkId::Beale,
        BenchmarkId::BentCigar,
        BenchmarkId::Booth,
        BenchmarkId::Branin,
        BenchmarkId::Bukin,
        BenchmarkId::BukinN6,
        BenchmarkId::CosineMixture,
        BenchmarkId::CrossInTray,
        BenchmarkId::DeJong,
        BenchmarkId::DixonPrice,
        BenchmarkId::DropWave,
        BenchmarkId::Eggholder,
        BenchmarkId::Griewank,
        BenchmarkId::Himmelblau,
        BenchmarkId::Levy,
        BenchmarkId::Matyas,
        BenchmarkId::Perm,
        BenchmarkId::Rastrigin,
        BenchmarkId::Rosenbrock,
        BenchmarkId::Salomon,
        BenchmarkId::SchafferN2,
        BenchmarkId::SchafferN4,
        BenchmarkId::Schwefel,
        BenchmarkId::SixHumpCamel,
        BenchmarkId::Sphere,
        BenchmarkId::Step,
        BenchmarkId::ThreeHumpCamel,
        BenchmarkId::Trid,
        BenchmarkId::Zakharov,
    ];

    pub fn name(self) -> &'static str {
        use BenchmarkId::*;
        match self {
            Ackley => "ackley",
            Beale => "beale",
            BentCigar => "bent_cigar",
            Booth => "booth",
            Branin => "branin",
            Bukin => "bukin",
            BukinN6 => "bukin_n6",
            CosineMixture => "cosine_mixture",
            CrossInTray => "cross_in_tray",
            DeJong => "dejong",
            DixonPrice => "dixon_price",
            DropWave => "drop_wave",
            Eggholder => "eggholder",
            Griewank => "griewank",
            Himmelblau => "himmelblau",
            Levy => "levy",
            Matyas => "matyas",
            Perm => "perm",
            Rastrigin => "rastrigin",
            Rosenbrock => "rosenbrock",
            Salomon => "salomon",
            SchafferN2 => "schaffer_n2",
            SchafferN4 => "schaffer_n4",
            Schwefel => "schwefel",
            SixHumpCamel => "six_hump_camel",
            Sphere => "sphere",
            Step => "step",
            ThreeHumpCamel => "three_hump_camel",
            Trid => "trid",
            Zakharov => "zakharov",
        }
    }

    /// Number of variables the function is defined for; `None` for any.
    pub fn fixed_dimension(self) -> Option<usize> {
        use BenchmarkId::*;
        match self {
            Beale | Booth | Branin | Bukin | BukinN6 | CrossInTray | DropWave | Eggholder
            | Himmelblau | Matyas | SchafferN2 | SchafferN4 | SixHumpCamel | ThreeHumpCamel => Some(2),
            Perm => Some(PERM_D),
            _ => None,
        }
    }

    /// Standard domain for an `n`-variable instance.
    pub fn bounds(self, n: usize) -> Vec<Bounds> {
        use BenchmarkId::*;
        let sym = |h: f64| vec![Bounds::symmetric(h); n];
        let range = |lo: f64, hi: f64| vec![Bounds { lower: lo, upper: hi }; n];
        match self {
            Ackley => sym(32.768),
            Beale => sym(4.5),
            BentCigar | SchafferN2 | SchafferN4 | Salomon | Step => sym(100.0),
            Booth | DixonPrice | Levy | Matyas | CrossInTray => sym(10.0),
            Branin => vec![Bounds { lower: -5.0, upper: 10.0 }, Bounds { lower: 0.0, upper: 15.0 }],
            Bukin | BukinN6 => vec![Bounds { lower: -15.0, upper: -5.0 }, Bounds { lower: -3.0, upper: 3.0 }],
            CosineMixture => sym(1.0),
            DeJong => sym(1.28),
            DropWave | Rastrigin | Sphere => sym(5.12),
            Eggholder => sym(512.0),
            Griewank => sym(600.0),
            Himmelblau | ThreeHumpCamel => sym(5.0),
            Perm => sym(PERM_D as f64),
            Rosenbrock | Zakharov => range(-5.0, 10.0),
            Schwefel => sym(500.0),
            SixHumpCamel => vec![Bounds::symmetric(3.0), Bounds::symmetric(2.0)],
            Trid => sym((n * n) as f64),
        }
    }

    /// Published global minimum for an `n`-variable instance, where known
    /// in closed form.
    pub fn known_optimum(self, n: usize) -> Option<KnownOptimum> {
        use BenchmarkId::*;
        let at = |value: f64, location: Vec<f64>| Some(KnownOptimum { value, location });
        let zeros = vec![0.0; n];
        match self {
            Ackley | BentCigar | DeJong | DropWave | Griewank | Matyas | Rastrigin | Salomon
            | SchafferN2 | Sphere | Step | ThreeHumpCamel | Zakharov => {
                let value = if self == DropWave { -1.0 } else { 0.0 };
                at(value, zeros)
            }
            CosineMixture => at(-0.1 * n as f64, zeros),
            Beale => at(0.0, vec![3.0, 0.5]),
            Booth => at(0.0, vec![1.0, 3.0]),
            Branin => at(0.397_887_357_729_738_1, vec![PI, 2.275]),
            Bukin => at(0.0, vec![-10.0, 0.0]),
            BukinN6 => at(0.0, vec![-10.0, 1.0]),
            CrossInTray => at(-2.062_611_870_822_739, vec![1.349_406_608_602_084; 2]),
            DixonPrice => at(
                0.0,
                (1..=n)
                    .map(|i| 2f64.powf(-((1u64 << i) as f64 - 2.0) / (1u64 << i) as f64))
                    .collect(),
            ),
            Eggholder => at(-959.640_662_720_851, vec![512.0, 404.231_805_123_817_6]),
            Himmelblau => at(0.0, vec![3.0, 2.0]),
            Levy | Rosenbrock => at(0.0, vec![1.0; n]),
            Perm => at(0.0, (1..=PERM_D).map(|j| 1.0 / j as f64).collect()),
            SchafferN4 => at(0.292_578_632_035_98, vec![0.0, 1.253_131_828_792_882]),
            Schwefel => at(0.0, vec![420.968_746_359_982; n]),
            SixHumpCamel => at(-1.031_628_453_489_877, vec![0.089_842_008_935_272_52, -0.712_656_403_020_720_3]),
            Trid => at(
                -((n * (n + 4) * (n - 1)) as f64) / 6.0,
                (1..=n).map(|i| (i * (n + 1 - i)) as f64).collect(),
            ),
        }
    }

    /// Closed-form value without domain checks; the formula extends past the
    /// standard box where it is defined.
    pub fn value(self, x: &[f64]) -> f64 {
        use BenchmarkId::*;
        let n = x.len() as f64;
        let sum_sq: f64 = x.iter().map(|v| v * v).sum();
        match self {
            Ackley => {
                let a = -20.0 * (-0.2 * (sum_sq / n).sqrt()).exp();
                let b = -(x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n).exp();
                a + b + 20.0 + E
            }
            Beale => {
                let (a, b) = (x[0], x[1]);
                (1.5 - a + a * b).powi(2) + (2.25 - a + a * b * b).powi(2) + (2.625 - a + a * b.powi(3)).powi(2)
            }
            BentCigar => x[0] * x[0] + 1e6 * x[1..].iter().map(|v| v * v).sum::<f64>(),
            Booth => (x[0] + 2.0 * x[1] - 7.0).powi(2) + (2.0 * x[0] + x[1] - 5.0).powi(2),
            Branin => {
                let b = 5.1 / (4.0 * PI * PI);
                let c = 5.0 / PI;
                let t = 1.0 / (8.0 * PI);
                (x[1] - b * x[0] * x[0] + c * x[0] - 6.0).powi(2) + 10.0 * (1.0 - t) * x[0].cos() + 10.0
            }
            Bukin => 100.0 * x[1] * x[1] + 0.01 * (x[0] + 10.0).abs(),
            BukinN6 => 100.0 * (x[1] - 0.01 * x[0] * x[0]).abs().sqrt() + 0.01 * (x[0] + 10.0).abs(),
            CosineMixture => sum_sq - 0.1 * x.iter().map(|v| (5.0 * PI * v).cos()).sum::<f64>(),
            CrossInTray => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                let e = (100.0 - r / PI).abs().exp();
                -1e-4 * ((x[0].sin() * x[1].sin() * e).abs() + 1.0).powf(0.1)
            }
            DeJong => x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v.powi(4)).sum(),
            DixonPrice => {
                (x[0] - 1.0).powi(2)
                    + (1..x.len())
                        .map(|i| (i + 1) as f64 * (2.0 * x[i] * x[i] - x[i - 1]).powi(2))
                        .sum::<f64>()
            }
            DropWave => -(1.0 + (12.0 * sum_sq.sqrt()).cos()) / (0.5 * sum_sq + 2.0),
            Eggholder => {
                let (a, b) = (x[0], x[1]);
                -(b + 47.0) * (b + a / 2.0 + 47.0).abs().sqrt().sin() - a * (a - (b + 47.0)).abs().sqrt().sin()
            }
            Griewank => {
                let p: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum_sq / 4000.0 - p + 1.0
            }
            Himmelblau => (x[0] * x[0] + x[1] - 11.0).powi(2) + (x[0] + x[1] * x[1] - 7.0).powi(2),
            Levy => {
                let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
                let last = w[w.len() - 1];
                let mid: f64 = w[..w.len() - 1]
                    .iter()
                    .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
                    .sum();
                (PI * w[0]).sin().powi(2) + mid + (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2))
            }
            Matyas => 0.26 * (x[0] * x[0] + x[1] * x[1]) - 0.48 * x[0] * x[1],
            Perm => (1..=x.len())
                .map(|i| {
                    x.iter()
                        .enumerate()
                        .map(|(j, v)| {
                            let j = (j + 1) as f64;
                            (j + PERM_BETA) * (v.powi(i as i32) - j.powi(-(i as i32)))
                        })
                        .sum::<f64>()
                        .powi(2)
                })
                .sum(),
            Rastrigin => 10.0 * n + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>(),
            Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            Salomon => {
                let r = sum_sq.sqrt();
                1.0 - (2.0 * PI * r).cos() + 0.1 * r
            }
            SchafferN2 => {
                let (a, b) = (x[0] * x[0], x[1] * x[1]);
                0.5 + ((a - b).sin().powi(2) - 0.5) / (1.0 + 0.001 * (a + b)).powi(2)
            }
            SchafferN4 => {
                let (a, b) = (x[0] * x[0], x[1] * x[1]);
                0.5 + ((a - b).abs().sin().cos().powi(2) - 0.5) / (1.0 + 0.001 * (a + b)).powi(2)
            }
            Schwefel => SCHWEFEL_CONSTANT * n - x.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>(),
            SixHumpCamel => {
                let (a, b) = (x[0], x[1]);
                (4.0 - 2.1 * a * a + a.powi(4) / 3.0) * a * a + a * b + (-4.0 + 4.0 * b * b) * b * b
            }
            Sphere => sum_sq,
            Step => x.iter().map(|v| (v + 0.5).floor().powi(2)).sum(),
            ThreeHumpCamel => {
                let (a, b) = (x[0], x[1]);
                2.0 * a * a - 1.05 * a.powi(4) + a.powi(6) / 6.0 + a * b + b * b
            }
            Trid => {
                x.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>() - x.windows(2).map(|w| w[0] * w[1]).sum::<f64>()
            }
            Zakharov => {
                let s: f64 = x.iter().enumerate().map(|(i, v)| 0.5 * (i + 1) as f64 * v).sum();
                sum_sq + s * s + s.powi(4)
            }
        }
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        BenchmarkId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::Unknown {
                kind: "benchmark",
                id: s.to_string(),
            })
    }
}

/// Checked evaluation: arity and domain are validated first.
pub fn evaluate_benchmark(id: BenchmarkId, x: &[f64]) -> Result<f64> {
    if let Some(d) = id.fixed_dimension() {
        if x.len() != d {
            return Err(Error::Dimension {
                expected: d,
                actual: x.len(),
            });
        }
    }
    if x.is_empty() {
        return Err(Error::Dimension { expected: 1, actual: 0 });
    }
    for (index, (v, b)) in x.iter().zip(id.bounds(x.len())).enumerate() {
        if !b.contains(*v) {
            return Err(Error::Domain {
                function: id.name().to_string(),
                index,
                value: *v,
                lower: b.lower,
                upper: b.upper,
            });
        }
    }
    Ok(id.value(x))
}

/// The function as a `dims`-variable problem on its standard domain.
pub fn benchmark_problem(id: BenchmarkId, dims: usize) -> Result<Problem> {
    if let Some(d) = id.fixed_dimension() {
        if dims != d {
            return Err(Error::Argument(format!("{id} is only defined for {d} variables")));
        }
    }
    if dims == 0 {
        return Err(Error::Argument("dims must be positive".into()));
    }
    let mut p = Problem::new(id.name(), id.bounds(dims), 1, move |x| vec![id.value(x)]);
    if let Some(opt) = id.known_optimum(dims) {
        p = p.with_known_optimum(vec![opt.value]);
    }
    Ok(p)
}

/// The two-variable instance used by the single-objective suite.
pub fn single_objective_problem(id: BenchmarkId) -> Problem {
    benchmark_problem(id, 2).expect("every suite function has a 2-D form")
}

/// All thirty functions at two variables.
pub fn single_objective_suite() -> Vec<Problem> {
    BenchmarkId::ALL.iter().map(|&id| single_objective_problem(id)).collect()
}
