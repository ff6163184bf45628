//! Potentials `q(x)` on the two halves of `[-π, π]`.
//!
//! A [`PotentialSpec`] is the declarative description (what a config file
//! holds); [`Potential`] is the compiled, evaluable form with spline moments
//! precomputed. Each half may use a different form, so `q` can jump at the
//! interface.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// One half of the interval: `[-π, 0]` or `[0, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn domain(self) -> (f64, f64) {
        match self {
            Side::Left => (-PI, 0.0),
            Side::Right => (0.0, PI),
        }
    }

    /// The side a span `[a, b]` (either order) belongs to. Spans touching the
    /// left half only are `Left`; everything else is `Right`.
    pub fn of_span(a: f64, b: f64) -> Side {
        if a.max(b) <= 0.0 {
            Side::Left
        } else {
            Side::Right
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interpolation {
    Linear,
    #[default]
    Cubic,
}

/// Closed-form or tabulated description of `q` on one half.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PotentialForm {
    Zero,
    Constant {
        value: f64,
    },
    /// `amplitude * cos(frequency * x)`
    Cosine {
        amplitude: f64,
        frequency: f64,
    },
    /// `sum_k coefficients[k] * x^k`
    Polynomial {
        coefficients: Vec<f64>,
    },
    Table {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        #[serde(default)]
        interpolation: Interpolation,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub left: PotentialForm,
    pub right: PotentialForm,
}

impl PotentialSpec {
    pub fn zero() -> Self {
        Self::uniform(PotentialForm::Zero)
    }

    /// Same form on both halves.
    pub fn uniform(form: PotentialForm) -> Self {
        Self {
            left: form.clone(),
            right: form,
        }
    }

    pub fn form(&self, side: Side) -> &PotentialForm {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn compile(&self) -> Result<Potential, PotentialIssue> {
        Ok(Potential {
            left: PotentialPiece::new(&self.left, Side::Left)?,
            right: PotentialPiece::new(&self.right, Side::Right)?,
        })
    }
}

/// Why a potential could not be compiled or is not bounded on its half.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialIssue {
    pub side: Side,
    pub detail: String,
}

impl std::fmt::Display for PotentialIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} potential: {}", self.side, self.detail)
    }
}

#[derive(Clone, Debug)]
enum Evaluator {
    Zero,
    Constant(f64),
    Cosine {
        amplitude: f64,
        frequency: f64,
    },
    Polynomial(Vec<f64>),
    Linear {
        xs: Vec<f64>,
        ys: Vec<f64>,
    },
    Spline {
        xs: Vec<f64>,
        ys: Vec<f64>,
        moments: Vec<f64>,
    },
}

/// Evaluable potential on one half.
#[derive(Clone, Debug)]
pub struct PotentialPiece {
    side: Side,
    eval: Evaluator,
    sup_abs: f64,
    mean: f64,
}

const SAMPLES: usize = 4097;

impl PotentialPiece {
    pub fn new(form: &PotentialForm, side: Side) -> Result<Self, PotentialIssue> {
        let issue = |detail: String| PotentialIssue { side, detail };
        let eval = match form {
            PotentialForm::Zero => Evaluator::Zero,
            PotentialForm::Constant { value } => Evaluator::Constant(*value),
            PotentialForm::Cosine {
                amplitude,
                frequency,
            } => Evaluator::Cosine {
                amplitude: *amplitude,
                frequency: *frequency,
            },
            PotentialForm::Polynomial { coefficients } => {
                Evaluator::Polynomial(coefficients.clone())
            }
            PotentialForm::Table {
                breakpoints,
                values,
                interpolation,
            } => {
                if breakpoints.len() != values.len() {
                    return Err(issue(format!(
                        "{} breakpoints but {} values",
                        breakpoints.len(),
                        values.len()
                    )));
                }
                if breakpoints.len() < 2 {
                    return Err(issue("table needs at least two breakpoints".into()));
                }
                if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(issue("breakpoints must be strictly increasing".into()));
                }
                let (lo, hi) = side.domain();
                let eps = 1e-12;
                if breakpoints[0] > lo + eps || breakpoints[breakpoints.len() - 1] < hi - eps {
                    return Err(issue(format!(
                        "breakpoints [{}, {}] do not cover [{lo}, {hi}]",
                        breakpoints[0],
                        breakpoints[breakpoints.len() - 1]
                    )));
                }
                match interpolation {
                    Interpolation::Linear => Evaluator::Linear {
                        xs: breakpoints.clone(),
                        ys: values.clone(),
                    },
                    Interpolation::Cubic => Evaluator::Spline {
                        moments: clamped_moments(breakpoints, values),
                        xs: breakpoints.clone(),
                        ys: values.clone(),
                    },
                }
            }
        };

        let mut piece = Self {
            side,
            eval,
            sup_abs: 0.0,
            mean: 0.0,
        };
        let (lo, hi) = side.domain();
        let h = (hi - lo) / (SAMPLES - 1) as f64;
        let samples: Vec<f64> = (0..SAMPLES)
            .map(|i| piece.eval(lo + h * i as f64))
            .collect();
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(issue(format!("not finite at x = {}", lo + h * i as f64)));
        }
        let mut sup = samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for &b in piece.breakpoints() {
            sup = sup.max(piece.eval(b).abs());
        }
        piece.sup_abs = sup;
        piece.mean = crate::quadrature::simpson(h, &samples) / (hi - lo);
        Ok(piece)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match &self.eval {
            Evaluator::Zero => 0.0,
            Evaluator::Constant(c) => *c,
            Evaluator::Cosine {
                amplitude,
                frequency,
            } => amplitude * (frequency * x).cos(),
            Evaluator::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            Evaluator::Linear { xs, ys } => {
                let i = interval_index(xs, x);
                let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                ys[i] + t * (ys[i + 1] - ys[i])
            }
            Evaluator::Spline { xs, ys, moments } => {
                let i = interval_index(xs, x);
                let h = xs[i + 1] - xs[i];
                let a = xs[i + 1] - x;
                let b = x - xs[i];
                moments[i] * a.powi(3) / (6.0 * h)
                    + moments[i + 1] * b.powi(3) / (6.0 * h)
                    + (ys[i] / h - moments[i] * h / 6.0) * a
                    + (ys[i + 1] / h - moments[i + 1] * h / 6.0) * b
            }
        }
    }

    /// `Some(c)` when `q` is the constant `c` on this half.
    pub fn as_constant(&self) -> Option<f64> {
        match &self.eval {
            Evaluator::Zero => Some(0.0),
            Evaluator::Constant(c) => Some(*c),
            Evaluator::Cosine { amplitude, .. } if *amplitude == 0.0 => Some(0.0),
            Evaluator::Polynomial(c) if c.iter().skip(1).all(|&v| v == 0.0) => {
                Some(c.first().copied().unwrap_or(0.0))
            }
            _ => None,
        }
    }

    /// Interior points where the tabulated `q` loses smoothness; integration
    /// steps stop at these.
    pub fn breakpoints(&self) -> &[f64] {
        match &self.eval {
            Evaluator::Linear { xs, .. } | Evaluator::Spline { xs, .. } => xs,
            _ => &[],
        }
    }

    /// Sampled `sup |q|` over the half.
    pub fn sup_abs(&self) -> f64 {
        self.sup_abs
    }

    /// Average of `q` over the half.
    pub fn mean(&self) -> f64 {
        self.mean
    }
}

/// Compiled potential for both halves.
#[derive(Clone, Debug)]
pub struct Potential {
    left: PotentialPiece,
    right: PotentialPiece,
}

impl Potential {
    pub fn piece(&self, side: Side) -> &PotentialPiece {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn sup_abs(&self) -> f64 {
        self.left.sup_abs.max(self.right.sup_abs)
    }

    pub fn mean(&self) -> f64 {
        0.5 * (self.left.mean + self.right.mean)
    }
}

fn interval_index(xs: &[f64], x: f64) -> usize {
    let i = xs.partition_point(|&b| b <= x);
    i.saturating_sub(1).min(xs.len() - 2)
}

/// Second-derivative moments of the cubic spline whose end slopes are clamped
/// to the secant slopes of the first and last intervals.
fn clamped_moments(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    if n == 2 {
        return vec![0.0; 2];
    }
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    diag[0] = 2.0 * h[0];
    sup[0] = h[0];
    // rhs[0] = 6 (slope[0] - slope[0]) = 0
    for i in 1..n - 1 {
        sub[i] = h[i - 1];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        sup[i] = h[i];
        rhs[i] = 6.0 * (slope[i] - slope[i - 1]);
    }
    sub[n - 1] = h[n - 2];
    diag[n - 1] = 2.0 * h[n - 2];

    // Thomas sweep
    for i in 1..n {
        let m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    let mut moments = vec![0.0; n];
    moments[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        moments[i] = (rhs[i] - sup[i] * moments[i + 1]) / diag[i];
    }
    moments
}
