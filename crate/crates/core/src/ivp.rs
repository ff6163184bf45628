//! Initial value problems for `y'' = (q(x) − λ) y` on one half of the interval.
//!
//! Two steppers are available: classical fixed-step RK4 and an adaptive
//! Dormand–Prince 5(4) pair. Paths are recorded on a uniform reporting mesh
//! that the stepper hits exactly; between mesh nodes [`SolutionPath::state_at`]
//! interpolates with quintic Hermite polynomials built from `y`, `y'` and
//! `y'' = (q − λ) y`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{PotentialPiece, Side};

/// Position together with the solution value and derivative there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatePair {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
}

impl StatePair {
    pub fn new(x: f64, y: f64, dy: f64) -> Self {
        Self { x, y, dy }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.dy.is_finite()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Method {
    /// Classical RK4; each mesh interval is cut into equal steps no longer
    /// than `max_step`.
    Rk4 { max_step: f64 },
    /// Dormand–Prince 5(4) with mixed absolute/relative error control.
    DormandPrince { atol: f64, rtol: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Reporting mesh size per path, endpoints included.
    pub mesh_points: usize,
    pub min_step: f64,
    pub max_steps: usize,
}

pub const MIN_MESH_POINTS: usize = 64;

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::DormandPrince {
                atol: 1e-10,
                rtol: 1e-10,
            },
            mesh_points: 513,
            min_step: 1e-12,
            max_steps: 2_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_mesh_points(mut self, mesh_points: usize) -> Self {
        self.mesh_points = mesh_points;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.method = Method::DormandPrince {
            atol: tol,
            rtol: tol,
        };
        self
    }

    /// The larger of the two error tolerances (zero for fixed-step RK4).
    pub fn tolerance(&self) -> f64 {
        match self.method {
            Method::DormandPrince { atol, rtol } => atol.max(rtol),
            Method::Rk4 { .. } => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.method {
            Method::Rk4 { max_step } => max_step > 0.0 && max_step.is_finite(),
            Method::DormandPrince { atol, rtol } => atol > 0.0 && rtol > 0.0,
        };
        if !ok {
            return Err(Error::InvalidInput(
                "integrator step and tolerances must be positive".into(),
            ));
        }
        if self.mesh_points < MIN_MESH_POINTS {
            return Err(Error::InvalidInput(format!(
                "mesh_points = {} is below the minimum of {MIN_MESH_POINTS}",
                self.mesh_points
            )));
        }
        Ok(())
    }
}

/// Dense solution of one piece, ordered in the direction of integration.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionPath {
    side: Side,
    lambda: f64,
    states: Vec<StatePair>,
    curvature: Vec<f64>,
}

impl SolutionPath {
    pub(crate) fn from_parts(
        side: Side,
        lambda: f64,
        states: Vec<StatePair>,
        curvature: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(states.len(), curvature.len());
        Self {
            side,
            lambda,
            states,
            curvature,
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn states(&self) -> &[StatePair] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> StatePair {
        self.states[0]
    }

    /// The same path multiplied by `c`.
    pub fn scaled(&self, c: f64) -> SolutionPath {
        Self {
            side: self.side,
            lambda: self.lambda,
            states: self
                .states
                .iter()
                .map(|s| StatePair::new(s.x, c * s.y, c * s.dy))
                .collect(),
            curvature: self.curvature.iter().map(|k| c * k).collect(),
        }
    }

    pub fn last(&self) -> StatePair {
        self.states[self.states.len() - 1]
    }

    pub fn mesh(&self) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(|s| s.x)
    }

    pub fn is_ascending(&self) -> bool {
        self.states.len() < 2 || self.states[1].x > self.states[0].x
    }

    /// States sorted by increasing `x`.
    pub fn ascending(&self) -> Vec<StatePair> {
        let mut s = self.states.clone();
        if !self.is_ascending() {
            s.reverse();
        }
        s
    }

    /// State at the mesh node equal to `x`, if there is one.
    pub fn node(&self, x: f64) -> Option<StatePair> {
        let idx = self.bracket(x)?;
        [idx, idx + 1]
            .into_iter()
            .filter_map(|i| self.states.get(i))
            .find(|s| s.x == x)
            .copied()
    }

    fn bracket(&self, x: f64) -> Option<usize> {
        let n = self.states.len();
        if n < 2 {
            return None;
        }
        let (lo, hi) = {
            let (a, b) = (self.states[0].x, self.states[n - 1].x);
            (a.min(b), a.max(b))
        };
        if !(x >= lo && x <= hi) {
            return None;
        }
        let i = if self.is_ascending() {
            self.states.partition_point(|s| s.x <= x)
        } else {
            self.states.partition_point(|s| s.x >= x)
        };
        Some(i.saturating_sub(1).min(n - 2))
    }

    /// Quintic Hermite interpolation of `(y, y')` at `x`; `None` outside the
    /// path's span.
    pub fn state_at(&self, x: f64) -> Option<StatePair> {
        let i = self.bracket(x)?;
        let (a, b) = (self.states[i], self.states[i + 1]);
        if x == a.x {
            return Some(a);
        }
        if x == b.x {
            return Some(b);
        }
        let (ca, cb) = (self.curvature[i], self.curvature[i + 1]);
        let h = b.x - a.x;
        let t = (x - a.x) / h;
        let (t2, t3) = (t * t, t * t * t);
        let (t4, t5) = (t3 * t, t3 * t2);

        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        let h3 = 0.5 * t3 - t4 + 0.5 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;

        let d0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
        let d1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
        let d2 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
        let d3 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
        let d4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
        let d5 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;

        let y =
            h0 * a.y + h * h1 * a.dy + h * h * h2 * ca + h5 * b.y + h * h4 * b.dy + h * h * h3 * cb;
        let dy = (d0 * a.y
            + h * d1 * a.dy
            + h * h * d2 * ca
            + d5 * b.y
            + h * d4 * b.dy
            + h * h * d3 * cb)
            / h;
        Some(StatePair::new(x, y, dy))
    }
}

/// Uniform mesh from `from` to `to` with `n` points. The node set depends only
/// on the span, not on the direction, so forward and backward paths over the
/// same half share their nodes bit for bit.
pub fn uniform_mesh(from: f64, to: f64, n: usize) -> Vec<f64> {
    let (lo, hi) = (from.min(to), from.max(to));
    let mut xs: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / (n - 1) as f64)
            }
        })
        .collect();
    if from > to {
        xs.reverse();
    }
    xs
}

struct Rhs<'a> {
    q: &'a PotentialPiece,
    lambda: f64,
}

impl Rhs<'_> {
    #[inline]
    fn eval(&self, x: f64, u: [f64; 2]) -> [f64; 2] {
        [u[1], (self.q.eval(x) - self.lambda) * u[0]]
    }
}

#[inline]
fn axpy(u: [f64; 2], h: f64, terms: &[(f64, [f64; 2])]) -> [f64; 2] {
    let mut out = u;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b*, the embedded error weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Stateful stepper that carries its step size from one mesh interval to the
/// next.
struct Stepper<'a> {
    rhs: Rhs<'a>,
    cfg: IntegratorConfig,
    h: f64,
    steps: usize,
}

impl<'a> Stepper<'a> {
    fn new(q: &'a PotentialPiece, lambda: f64, cfg: IntegratorConfig) -> Self {
        let scale = (1.0 + lambda.abs() + q.sup_abs()).sqrt();
        Self {
            rhs: Rhs { q, lambda },
            cfg,
            h: 0.05 / scale,
            steps: 0,
        }
    }

    fn rk4(&self, x: f64, u: [f64; 2], h: f64) -> [f64; 2] {
        let r = &self.rhs;
        let k1 = r.eval(x, u);
        let k2 = r.eval(x + 0.5 * h, axpy(u, h, &[(0.5, k1)]));
        let k3 = r.eval(x + 0.5 * h, axpy(u, h, &[(0.5, k2)]));
        let k4 = r.eval(x + h, axpy(u, h, &[(1.0, k3)]));
        axpy(
            u,
            h,
            &[
                (1.0 / 6.0, k1),
                (1.0 / 3.0, k2),
                (1.0 / 3.0, k3),
                (1.0 / 6.0, k4),
            ],
        )
    }

    /// One Dormand–Prince step; returns the 5th-order update and the error
    /// estimate.
    fn dopri(&self, x: f64, u: [f64; 2], h: f64) -> ([f64; 2], [f64; 2]) {
        let r = &self.rhs;
        let k1 = r.eval(x, u);
        let k2 = r.eval(x + C2 * h, axpy(u, h, &[(A21, k1)]));
        let k3 = r.eval(x + C3 * h, axpy(u, h, &[(A31, k1), (A32, k2)]));
        let k4 = r.eval(x + C4 * h, axpy(u, h, &[(A41, k1), (A42, k2), (A43, k3)]));
        let k5 = r.eval(
            x + C5 * h,
            axpy(u, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]),
        );
        let k6 = r.eval(
            x + h,
            axpy(
                u,
                h,
                &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
            ),
        );
        let next = axpy(u, h, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
        let k7 = r.eval(x + h, next);
        let err = axpy(
            [0.0, 0.0],
            h,
            &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
        );
        (next, err)
    }

    /// Advances `u` from `x0` to exactly `x1`, stopping at any potential
    /// breakpoint in between.
    fn advance(&mut self, x0: f64, x1: f64, u: [f64; 2]) -> Result<[f64; 2]> {
        let dir = (x1 - x0).signum();
        let (lo, hi) = (x0.min(x1), x0.max(x1));
        let mut stops: Vec<f64> = self
            .rhs
            .q
            .breakpoints()
            .iter()
            .copied()
            .filter(|&b| b > lo && b < hi)
            .collect();
        if dir < 0.0 {
            stops.reverse();
        }
        stops.push(x1);

        let mut x = x0;
        let mut u = u;
        for stop in stops {
            u = self.advance_smooth(x, stop, u)?;
            x = stop;
        }
        Ok(u)
    }

    fn advance_smooth(&mut self, x0: f64, x1: f64, mut u: [f64; 2]) -> Result<[f64; 2]> {
        let span = x1 - x0;
        if span == 0.0 {
            return Ok(u);
        }
        let dir = span.signum();
        match self.cfg.method {
            Method::Rk4 { max_step } => {
                let n = (span.abs() / max_step).ceil().max(1.0) as usize;
                let h = span / n as f64;
                for i in 0..n {
                    let x = x0 + h * i as f64;
                    u = self.rk4(x, u, h);
                    self.steps += 1;
                    if !(u[0].is_finite() && u[1].is_finite()) {
                        return Err(Error::NonFiniteState { x: x + h });
                    }
                }
                Ok(u)
            }
            Method::DormandPrince { atol, rtol } => {
                let mut x = x0;
                loop {
                    let remaining = x1 - x;
                    if remaining.abs() <= 1e-14 * (1.0 + x1.abs()) {
                        return Ok(u);
                    }
                    let mut h = self.h.min(remaining.abs()) * dir;
                    let last = h.abs() >= remaining.abs();
                    if last {
                        h = remaining;
                    }
                    let (next, err) = self.dopri(x, u, h);
                    self.steps += 1;
                    if self.steps > self.cfg.max_steps {
                        return Err(Error::StepFailure { x, step: h });
                    }
                    if !(next[0].is_finite() && next[1].is_finite()) {
                        if h.abs() <= self.cfg.min_step {
                            return Err(Error::NonFiniteState { x: x + h });
                        }
                        self.h = 0.25 * h.abs();
                        continue;
                    }
                    let norm = (0..2)
                        .map(|i| {
                            let sc = atol + rtol * u[i].abs().max(next[i].abs());
                            (err[i] / sc).abs()
                        })
                        .fold(0.0_f64, f64::max);
                    let factor = if norm == 0.0 {
                        5.0
                    } else {
                        (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    if norm <= 1.0 {
                        x = if last { x1 } else { x + h };
                        u = next;
                        // a clipped final step says nothing about the natural step
                        if !last || factor < 1.0 {
                            self.h = h.abs() * factor;
                        }
                    } else {
                        let shrunk = h.abs() * factor.min(0.9);
                        if shrunk < self.cfg.min_step {
                            return Err(Error::StepFailure { x, step: shrunk });
                        }
                        self.h = shrunk;
                    }
                }
            }
        }
    }
}

/// Integrates `y'' = (q − λ) y` from `from` to `to` starting at `init`
/// (whose `x` must equal `from`) and records the path on a uniform mesh of
/// `cfg.mesh_points` nodes.
pub fn integrate_ivp(
    q: &PotentialPiece,
    lambda: f64,
    from: f64,
    to: f64,
    init: StatePair,
    cfg: &IntegratorConfig,
) -> Result<SolutionPath> {
    cfg.validate()?;
    check_span(from, to, init, lambda)?;
    let xs = uniform_mesh(from, to, cfg.mesh_points);
    let mut stepper = Stepper::new(q, lambda, *cfg);
    let mut states = Vec::with_capacity(xs.len());
    let mut curvature = Vec::with_capacity(xs.len());
    let mut u = [init.y, init.dy];
    states.push(StatePair::new(from, u[0], u[1]));
    curvature.push((q.eval(from) - lambda) * u[0]);
    for w in xs.windows(2) {
        u = stepper.advance(w[0], w[1], u)?;
        states.push(StatePair::new(w[1], u[0], u[1]));
        curvature.push((q.eval(w[1]) - lambda) * u[0]);
    }
    Ok(SolutionPath::from_parts(
        Side::of_span(from, to),
        lambda,
        states,
        curvature,
    ))
}

/// Terminal state only; the stepper runs freely without reporting stops.
pub fn shoot(
    q: &PotentialPiece,
    lambda: f64,
    from: f64,
    to: f64,
    init: StatePair,
    cfg: &IntegratorConfig,
) -> Result<StatePair> {
    cfg.validate()?;
    check_span(from, to, init, lambda)?;
    let mut stepper = Stepper::new(q, lambda, *cfg);
    let u = match cfg.method {
        // keep the fixed-step discretisation identical to the dense path
        Method::Rk4 { .. } => {
            let xs = uniform_mesh(from, to, cfg.mesh_points);
            let mut u = [init.y, init.dy];
            for w in xs.windows(2) {
                u = stepper.advance(w[0], w[1], u)?;
            }
            u
        }
        Method::DormandPrince { .. } => stepper.advance(from, to, [init.y, init.dy])?,
    };
    Ok(StatePair::new(to, u[0], u[1]))
}

fn check_span(from: f64, to: f64, init: StatePair, lambda: f64) -> Result<()> {
    if !(from.is_finite() && to.is_finite() && lambda.is_finite()) || from == to {
        return Err(Error::InvalidInput(format!(
            "integration span [{from}, {to}] at lambda = {lambda}"
        )));
    }
    if init.x != from || !init.is_finite() {
        return Err(Error::InvalidInput(format!(
            "initial state {init:?} is not a finite state at x = {from}"
        )));
    }
    Ok(())
}

/// Exact solution of `y'' = (q0 − λ) y` through `init`, evaluated at `at`.
pub fn constant_q_closed_form(q0: f64, lambda: f64, init: StatePair, at: f64) -> StatePair {
    let d = at - init.x;
    let k = q0 - lambda;
    let (y, dy) = if k < 0.0 {
        let s = (-k).sqrt();
        let (sn, cs) = (s * d).sin_cos();
        (
            init.y * cs + init.dy * sn / s,
            -init.y * s * sn + init.dy * cs,
        )
    } else if k > 0.0 {
        let s = k.sqrt();
        let (sh, ch) = ((s * d).sinh(), (s * d).cosh());
        (
            init.y * ch + init.dy * sh / s,
            init.y * s * sh + init.dy * ch,
        )
    } else {
        (init.y + init.dy * d, init.dy)
    };
    StatePair::new(at, y, dy)
}
