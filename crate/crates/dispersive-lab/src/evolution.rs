//! The dispersive propagator `e^{itp(D)}`, the Duhamel operator
//! `Gf(t) = ∫₀^t e^{i(t-s)p(D)} f(s) ds`, and the smoothing-estimate ratios.
//!
//! Duhamel integrals are computed in frequency space through the
//! factorization `e^{i(t-s)p} = e^{itp} e^{-isp}`, which reduces the family
//! of integrals to one cumulative quadrature per frequency.  The cumulative
//! trapezoid rule carries an endpoint derivative correction (Euler-Maclaurin
//! term) so the discrete equation residual decays at fourth order in the
//! time step.

use num_complex::Complex64;
use std::sync::Arc;

use crate::error::{LabError, Result};
use crate::grid::{
    forward_ft, inverse_ft, weighted_norm, Field, GridSpec, Space, WeightKind, TWO_PI,
};
use crate::multiplier::{apply_multiplier, multiply_symbol, MultiplierKind};
use crate::symbol::SymbolSpec;

/// Uniform symmetric time lattice t_k = -T + k·(2T/M), k = 0..=M.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    half_span: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(half_span: f64, steps: usize) -> Result<Self> {
        if half_span <= 0.0 {
            return Err(LabError::usage("time half_span must be positive"));
        }
        if steps < 2 || steps % 2 != 0 {
            return Err(LabError::usage("time steps must be even and >= 2"));
        }
        Ok(TimeGrid { half_span, steps })
    }

    pub fn half_span(&self) -> f64 {
        self.half_span
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of samples, steps + 1.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.half_span / self.steps as f64
    }

    pub fn t_coord(&self, k: usize) -> f64 {
        -self.half_span + k as f64 * self.dt()
    }

    /// Index of t = 0 (steps is even).
    pub fn zero_index(&self) -> usize {
        self.steps / 2
    }

    pub fn samples(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.t_coord(k)).collect()
    }

    /// Trapezoid weight of sample k; weights sum to 2T.
    pub fn trap_weight(&self, k: usize) -> f64 {
        if k == 0 || k == self.steps {
            self.dt() / 2.0
        } else {
            self.dt()
        }
    }
}

/// A time-indexed sequence of Fields on a common grid.
#[derive(Clone, Debug)]
pub struct SpaceTimeField {
    time: TimeGrid,
    frames: Vec<Field>,
}

impl SpaceTimeField {
    pub fn new(time: TimeGrid, frames: Vec<Field>) -> Result<Self> {
        if frames.len() != time.len() {
            return Err(LabError::usage(format!(
                "expected {} frames, got {}",
                time.len(),
                frames.len()
            )));
        }
        let grid = *frames[0].grid();
        let space = frames[0].space();
        for f in &frames {
            if *f.grid() != grid || f.space() != space {
                return Err(LabError::usage("frames differ in grid or space tag"));
            }
        }
        Ok(SpaceTimeField { time, frames })
    }

    /// Samples f(t, x) on the space-time lattice.
    pub fn from_fn(
        time: TimeGrid,
        grid: GridSpec,
        space: Space,
        f: impl Fn(f64, &[f64]) -> Complex64,
    ) -> Self {
        let frames = time
            .samples()
            .into_iter()
            .map(|t| Field::from_fn(grid, space, |x| f(t, x)))
            .collect();
        SpaceTimeField { time, frames }
    }

    pub fn time(&self) -> &TimeGrid {
        &self.time
    }

    pub fn frames(&self) -> &[Field] {
        &self.frames
    }

    pub fn grid(&self) -> &GridSpec {
        self.frames[0].grid()
    }

    /// Space-time L² norm with trapezoid time weights.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self
            .frames
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let n = f.l2_norm();
                self.time.trap_weight(k) * n * n
            })
            .sum();
        sum.sqrt()
    }

    /// Trapezoid-weighted time transform `(2π)^{-1/2} ∫ e^{-itτ} F(t) dt`
    /// at one temporal frequency.
    pub fn time_transform(&self, tau: f64) -> Field {
        let grid = *self.grid();
        let space = self.frames[0].space();
        let mut out = Field::zeros(grid, space);
        for (k, frame) in self.frames.iter().enumerate() {
            let phase = Complex64::from_polar(
                self.time.trap_weight(k) / TWO_PI.sqrt(),
                -self.time.t_coord(k) * tau,
            );
            for (o, v) in out.values_mut().iter_mut().zip(frame.values()) {
                *o += phase * v;
            }
        }
        out
    }
}

/// The propagator multiplier `e^{itp(ξ)}`.
pub fn propagator_kind(spec: &SymbolSpec, t: f64) -> MultiplierKind {
    let spec = spec.clone();
    MultiplierKind::ScalarFunction(Arc::new(move |xi: &[f64]| {
        Complex64::from_polar(1.0, t * spec.eval_p(xi))
    }))
}

/// `e^{itp(D)} φ`.
pub fn propagate(phi: &Field, spec: &SymbolSpec, t: f64) -> Result<Field> {
    apply_multiplier(phi, &propagator_kind(spec, t))
}

/// Applies the propagator to every time sample: frame k becomes
/// `e^{i t_k p(D)} φ`.
pub fn propagate_frames(phi: &Field, spec: &SymbolSpec, time: TimeGrid) -> Result<SpaceTimeField> {
    let fhat = forward_ft(phi)?;
    let frames = time
        .samples()
        .into_iter()
        .map(|t| {
            let ghat = multiply_symbol(&fhat, &propagator_kind(spec, t))?;
            inverse_ft(&ghat)
        })
        .collect::<Result<Vec<_>>>()?;
    SpaceTimeField::new(time, frames)
}

/// `Gf(t_k) = ∫₀^{t_k} e^{i(t_k-s)p(D)} f(s) ds` on the shared time lattice.
pub fn duhamel(f: &SpaceTimeField, spec: &SymbolSpec) -> Result<SpaceTimeField> {
    if f.frames()[0].space() != Space::Physical {
        return Err(LabError::usage("duhamel expects physical-space frames"));
    }
    let time = *f.time();
    let grid = *f.grid();
    let len = time.len();
    let size = grid.len();
    let h = time.dt();
    let k0 = time.zero_index();

    // p(ξ) on the frequency lattice
    let mut p = vec![0.0f64; size];
    grid.for_each_point(Space::Frequency, |flat, xi| {
        p[flat] = spec.eval_p(xi);
    });

    // g_k(ξ) = e^{-i t_k p(ξ)} f̂(t_k, ξ)
    let mut g: Vec<Vec<Complex64>> = Vec::with_capacity(len);
    for (k, frame) in f.frames().iter().enumerate() {
        let fhat = forward_ft(frame)?;
        let t = time.t_coord(k);
        let vals: Vec<Complex64> = fhat
            .values()
            .iter()
            .zip(&p)
            .map(|(v, &pv)| v * Complex64::from_polar(1.0, -t * pv))
            .collect();
        g.push(vals);
    }

    // second-order finite-difference s-derivative of g, for the
    // Euler-Maclaurin endpoint correction
    let deriv = |k: usize, flat: usize| -> Complex64 {
        if k == 0 {
            (-3.0 * g[0][flat] + 4.0 * g[1][flat] - g[2][flat]) / (2.0 * h)
        } else if k == len - 1 {
            (3.0 * g[len - 1][flat] - 4.0 * g[len - 2][flat] + g[len - 3][flat]) / (2.0 * h)
        } else {
            (g[k + 1][flat] - g[k - 1][flat]) / (2.0 * h)
        }
    };

    // signed cumulative trapezoid from t = 0, then the endpoint correction
    // v_k = T_k - (h²/12)(g'_k - g'_0)
    let mut cumulative: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); size]; len];
    for k in (k0 + 1)..len {
        for flat in 0..size {
            cumulative[k][flat] =
                cumulative[k - 1][flat] + (g[k - 1][flat] + g[k][flat]) * (h / 2.0);
        }
    }
    for k in (0..k0).rev() {
        for flat in 0..size {
            cumulative[k][flat] =
                cumulative[k + 1][flat] - (g[k][flat] + g[k + 1][flat]) * (h / 2.0);
        }
    }
    let correction = h * h / 12.0;
    let frames = (0..len)
        .map(|k| {
            let t = time.t_coord(k);
            let mut vals = vec![Complex64::new(0.0, 0.0); size];
            for (flat, slot) in vals.iter_mut().enumerate() {
                let v = if k == k0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    cumulative[k][flat] - correction * (deriv(k, flat) - deriv(k0, flat))
                };
                *slot = v * Complex64::from_polar(1.0, t * p[flat]);
            }
            let freq = Field::new(grid, Space::Frequency, vals)?;
            inverse_ft(&freq)
        })
        .collect::<Result<Vec<_>>>()?;
    SpaceTimeField::new(time, frames)
}

/// Which of the four smoothing-estimate ratios to measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmoothingEstimate {
    IHomog,
    IDuhamel,
    IIHomog,
    IIDuhamel,
}

impl SmoothingEstimate {
    pub fn is_homogeneous(&self) -> bool {
        matches!(self, SmoothingEstimate::IHomog | SmoothingEstimate::IIHomog)
    }
}

/// Input data for a smoothing ratio: initial data for the homogeneous
/// estimates, a forcing for the Duhamel estimates.
pub enum SmoothingInput<'a> {
    Data { phi: &'a Field, time: TimeGrid },
    Forcing(&'a SpaceTimeField),
}

/// One measured estimate ratio.
#[derive(Clone, Copy, Debug)]
pub struct SmoothingResult {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// Share of the squared space-time norm carried by the window's outermost
    /// frame; large values mean the time window truncates the estimate.
    pub tail_indicator: f64,
}

fn check_smoothing_hypotheses(
    estimate: SmoothingEstimate,
    spec: &SymbolSpec,
    delta: f64,
) -> Result<()> {
    let m = spec.order();
    let n = spec.dimension() as f64;
    match estimate {
        SmoothingEstimate::IHomog | SmoothingEstimate::IDuhamel => {
            if delta <= 0.5 {
                return Err(LabError::usage(format!(
                    "TYPE-I smoothing requires delta > 1/2, got delta = {delta}"
                )));
            }
        }
        SmoothingEstimate::IIHomog | SmoothingEstimate::IIDuhamel => {
            if !(m > 1.0 && m < n) {
                return Err(LabError::usage(format!(
                    "TYPE-II smoothing requires 1 < m < n, got m = {m}, n = {n}"
                )));
            }
        }
    }
    Ok(())
}

/// Weighted space-time norm of `⟨x⟩^w_exp σ(D) u` over the time window,
/// together with the outermost-frame share of the squared norm.
fn weighted_spacetime_norm(
    u: &SpaceTimeField,
    deriv: &MultiplierKind,
    weight_exp: f64,
) -> Result<(f64, f64)> {
    let time = u.time();
    let mut total = 0.0f64;
    let mut edge = 0.0f64;
    for (k, frame) in u.frames().iter().enumerate() {
        let d = apply_multiplier(frame, deriv)?;
        let nk = weighted_norm(&d, weight_exp, WeightKind::JapaneseBracket);
        let contrib = time.trap_weight(k) * nk * nk;
        total += contrib;
        if k == 0 || k == time.len() - 1 {
            edge = edge.max(contrib);
        }
    }
    if total == 0.0 {
        return Ok((0.0, 0.0));
    }
    Ok((total.sqrt(), edge / total))
}

/// LHS, RHS and ratio of one of the four smoothing estimates.
pub fn smoothing_ratio(
    input: SmoothingInput,
    spec: &SymbolSpec,
    estimate: SmoothingEstimate,
    delta: f64,
) -> Result<SmoothingResult> {
    check_smoothing_hypotheses(estimate, spec, delta)?;
    let m = spec.order();
    let (deriv, weight_exp): (MultiplierKind, f64) = match estimate {
        SmoothingEstimate::IHomog => (MultiplierKind::HomogeneousPower((m - 1.0) / 2.0), -delta),
        SmoothingEstimate::IDuhamel => (MultiplierKind::HomogeneousPower(m - 1.0), -delta),
        SmoothingEstimate::IIHomog => (MultiplierKind::BracketPower((m - 1.0) / 2.0), -m / 2.0),
        SmoothingEstimate::IIDuhamel => (MultiplierKind::BracketPower(m - 1.0), -m / 2.0),
    };
    match (estimate.is_homogeneous(), input) {
        (true, SmoothingInput::Data { phi, time }) => {
            let rhs = phi.l2_norm();
            if rhs == 0.0 {
                return Err(LabError::usage("smoothing_ratio requires nonzero data"));
            }
            let u = propagate_frames(phi, spec, time)?;
            let (lhs, tail) = weighted_spacetime_norm(&u, &deriv, weight_exp)?;
            Ok(SmoothingResult {
                lhs,
                rhs,
                ratio: lhs / rhs,
                tail_indicator: tail,
            })
        }
        (false, SmoothingInput::Forcing(f)) => {
            let rhs_exp = match estimate {
                SmoothingEstimate::IDuhamel => delta,
                _ => m / 2.0,
            };
            let rhs_sq: f64 = f
                .frames()
                .iter()
                .enumerate()
                .map(|(k, frame)| {
                    let nk = weighted_norm(frame, rhs_exp, WeightKind::JapaneseBracket);
                    f.time().trap_weight(k) * nk * nk
                })
                .sum();
            let rhs = rhs_sq.sqrt();
            if rhs == 0.0 {
                return Err(LabError::usage("smoothing_ratio requires nonzero forcing"));
            }
            let gf = duhamel(f, spec)?;
            let (lhs, tail) = weighted_spacetime_norm(&gf, &deriv, weight_exp)?;
            Ok(SmoothingResult {
                lhs,
                rhs,
                ratio: lhs / rhs,
                tail_indicator: tail,
            })
        }
        (true, _) => Err(LabError::usage(
            "homogeneous estimates take initial data, not a forcing",
        )),
        (false, _) => Err(LabError::usage(
            "Duhamel estimates take a forcing, not initial data",
        )),
    }
}

/// Relative L² size of the discrete equation residual `D_t u - p(D)u - f`
/// for `u = e^{itp}φ + iGf`, with D_t realized by fourth-order central
/// differences on interior frames.
pub fn equation_residual(
    phi: &Field,
    f: &SpaceTimeField,
    spec: &SymbolSpec,
) -> Result<f64> {
    let time = *f.time();
    let free = propagate_frames(phi, spec, time)?;
    let gf = duhamel(f, spec)?;
    let i = Complex64::new(0.0, 1.0);
    let u: Vec<Field> = free
        .frames()
        .iter()
        .zip(gf.frames())
        .map(|(a, b)| a.add(&b.scaled(i)).unwrap())
        .collect();
    let h = time.dt();
    let mut resid_sq = 0.0f64;
    let mut ref_sq = 0.0f64;
    for k in 2..time.len() - 2 {
        // D_t = -i ∂_t, fourth-order stencil
        let mut dtu = Field::zeros(*f.grid(), Space::Physical);
        for (c, off) in [(1.0, -2i64), (-8.0, -1), (8.0, 1), (-1.0, 2)] {
            let frame = &u[(k as i64 + off) as usize];
            for (o, v) in dtu.values_mut().iter_mut().zip(frame.values()) {
                *o += v * (c / (12.0 * h));
            }
        }
        let dtu = dtu.scaled(Complex64::new(0.0, -1.0));
        let pu = apply_multiplier(
            &u[k],
            &MultiplierKind::ScalarFunction({
                let spec = spec.clone();
                Arc::new(move |xi: &[f64]| Complex64::new(spec.eval_p(xi), 0.0))
            }),
        )?;
        let resid = dtu.sub(&pu)?.sub(&f.frames()[k])?;
        let r = resid.l2_norm();
        resid_sq += time.trap_weight(k) * r * r;
        let un = u[k].l2_norm();
        ref_sq += time.trap_weight(k) * un * un;
    }
    if ref_sq == 0.0 {
        return Err(LabError::usage("equation_residual requires nonzero solution"));
    }
    Ok((resid_sq / ref_sq).sqrt())
}
