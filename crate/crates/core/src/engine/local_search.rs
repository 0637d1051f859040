//! Downhill-simplex refinement.

use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Offset added to each coordinate of the start point to build the
    /// initial simplex.
    pub initial_edge: f64,
    /// Stop once both the simplex diameter and the spread of its values
    /// fall below these.
    pub xatol: f64,
    pub fatol: f64,
    pub max_evaluations: Option<usize>,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_iterations: 100,
            initial_edge: 0.05,
            xatol: 1e-14,
            fatol: 1e-14,
            max_evaluations: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

struct Counted<F> {
    f: F,
    used: usize,
    cap: usize,
}

impl<F: FnMut(&[f64]) -> Result<f64>> Counted<F> {
    fn call(&mut self, x: &[f64]) -> Result<Option<f64>> {
        if self.used >= self.cap {
            return Ok(None);
        }
        self.used += 1;
        let v = (self.f)(x)?;
        Ok(Some(if v.is_nan() { f64::INFINITY } else { v }))
    }
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Minimizes `f` from `x0` with reflection 1, expansion 2, contraction 0.5
/// and shrink 0.5.
///
/// The result is never worse than `x0`. A non-finite `f(x0)` returns `x0`
/// after one evaluation; the evaluation cap returns the best vertex so far.
pub fn nelder_mead<F>(f: F, x0: &[f64], options: &NelderMeadOptions) -> Result<NelderMeadResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut f = Counted {
        f,
        used: 0,
        cap: options.max_evaluations.unwrap_or(usize::MAX),
    };
    let n = x0.len();
    let f0 = match f.call(x0)? {
        Some(v) => v,
        None => {
            return Ok(NelderMeadResult {
                x: x0.to_vec(),
                fx: f64::INFINITY,
                iterations: 0,
                evaluations: 0,
            })
        }
    };
    let finish = |simplex: Vec<(Vec<f64>, f64)>, iterations: usize, used: usize| {
        let (x, fx) = simplex
            .into_iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty simplex");
        NelderMeadResult {
            x,
            fx,
            iterations,
            evaluations: used,
        }
    };
    if !f0.is_finite() || n == 0 {
        return Ok(finish(vec![(x0.to_vec(), f0)], 0, f.used));
    }

    let mut simplex = vec![(x0.to_vec(), f0)];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += options.initial_edge;
        match f.call(&v)? {
            Some(fv) => simplex.push((v, fv)),
            None => return Ok(finish(simplex, 0, f.used)),
        }
    }

    let mut iterations = 0;
    while iterations < options.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0];
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&best.0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let spread = simplex[1..]
            .iter()
            .map(|(_, fv)| (fv - best.1).abs())
            .fold(0.0, f64::max);
        if diameter <= options.xatol && spread <= options.fatol {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflected = lerp(&centroid, &worst.0, -1.0);
        let Some(fr) = f.call(&reflected)? else { break };

        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst.0, -2.0);
            let Some(fe) = f.call(&expanded)? else {
                simplex[n] = (reflected, fr);
                break;
            };
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let outside = fr < worst.1;
            let contracted = if outside {
                lerp(&centroid, &reflected, 0.5)
            } else {
                lerp(&centroid, &worst.0, 0.5)
            };
            let Some(fc) = f.call(&contracted)? else {
                if outside {
                    simplex[n] = (reflected, fr);
                }
                break;
            };
            if fc < if outside { fr } else { worst.1 } {
                simplex[n] = (contracted, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for k in 1..=n {
                    let v = lerp(&anchor, &simplex[k].0, 0.5);
                    let Some(fv) = f.call(&v)? else {
                        return Ok(finish(simplex, iterations, f.used));
                    };
                    simplex[k] = (v, fv);
                }
            }
        }
    }
    Ok(finish(simplex, iterations, f.used))
}
