//! Restriction of the Fourier transform to level sets Σ(τ) = {a(ξ) = τ}:
//! surface quadrature, trace norms, Hölder modulus, low-frequency scaling,
//! and the co-area identity.
//!
//! Ellipticity makes Σ(1) a radial graph over the unit sphere, so one global
//! spherical parameterization ξ(ω) = τ ω / a(ω) replaces local charts.  For
//! n = 2 the rule is the periodic trapezoid in angle; for n = 3 it is
//! product Gauss-Legendre in colatitude times trapezoid in longitude.

use std::io::Write;

use crate::error::{LabError, Result};
use crate::grid::{nuft_eval, weighted_norm, Field, GridSpec, Space, WeightKind};
use crate::symbol::SymbolSpec;

/// Quadrature nodes and surface-measure weights on Σ(τ).
#[derive(Clone, Debug)]
pub struct LevelSetQuad {
    spec: SymbolSpec,
    tau: f64,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl LevelSetQuad {
    pub fn spec(&self) -> &SymbolSpec {
        &self.spec
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Σ w_q, the quadrature's surface area of Σ(τ).
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Σ w_q F(ξ_q).
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(xi, w)| w * f(xi))
            .sum()
    }

    /// Writes `node coordinates..., weight` rows for external audit.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        let dim = self.spec.dimension();
        let header: Vec<String> = (0..dim)
            .map(|i| format!("xi{i}"))
            .chain(["weight".to_string()])
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for (xi, wt) in self.nodes.iter().zip(&self.weights) {
            let row: Vec<String> = xi
                .iter()
                .map(|v| format!("{v:.17e}"))
                .chain([format!("{wt:.17e}")])
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Legendre polynomial and derivative at x
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // recompute p0 (P_{n-1}) at the converged node for the weight
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Builds the surface quadrature on Σ(τ) = {a = τ}.
pub fn build_quad(spec: &SymbolSpec, tau: f64, resolution: usize) -> Result<LevelSetQuad> {
    if tau <= 0.0 {
        return Err(LabError::usage(
            "level set requires tau > 0 (Sigma(0) is the origin)",
        ));
    }
    if resolution < 8 {
        return Err(LabError::usage("resolution must be at least 8"));
    }
    match spec.dimension() {
        2 => build_quad_2d(spec, tau, resolution),
        3 => build_quad_3d(spec, tau, resolution),
        d => Err(LabError::usage(format!(
            "level-set quadrature supports n = 2 or 3, got n = {d}"
        ))),
    }
}

fn build_quad_2d(spec: &SymbolSpec, tau: f64, resolution: usize) -> Result<LevelSetQuad> {
    let mut nodes = Vec::with_capacity(resolution);
    let mut weights = Vec::with_capacity(resolution);
    let dtheta = std::f64::consts::TAU / resolution as f64;
    for q in 0..resolution {
        let theta = q as f64 * dtheta;
        let omega = [theta.cos(), theta.sin()];
        let omega_t = [-theta.sin(), theta.cos()];
        let a = spec.eval_a(&omega);
        let grad = spec.eval_grad_a(&omega)?;
        // ξ(θ) = τ ω / a(ω);  ξ' = τ (ω'/a - ω a'/a²), a' = ∇a·ω'
        let da = grad[0] * omega_t[0] + grad[1] * omega_t[1];
        let mut speed_sq = 0.0;
        for i in 0..2 {
            let v = tau * (omega_t[i] / a - omega[i] * da / (a * a));
            speed_sq += v * v;
        }
        nodes.push(vec![tau * omega[0] / a, tau * omega[1] / a]);
        weights.push(speed_sq.sqrt() * dtheta);
    }
    Ok(LevelSetQuad {
        spec: spec.clone(),
        tau,
        nodes,
        weights,
    })
}

fn build_quad_3d(spec: &SymbolSpec, tau: f64, resolution: usize) -> Result<LevelSetQuad> {
    let n_theta = resolution;
    let n_phi = 2 * resolution;
    let (gl_nodes, gl_weights) = gauss_legendre(n_theta);
    let dphi = std::f64::consts::TAU / n_phi as f64;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (x, wt) in gl_nodes.iter().zip(&gl_weights) {
        // θ = π(x+1)/2, Jacobian π/2
        let theta = half_pi * (x + 1.0);
        let (st, ct) = theta.sin_cos();
        for q in 0..n_phi {
            let phi = q as f64 * dphi;
            let (sp, cp) = phi.sin_cos();
            let omega = [st * cp, st * sp, ct];
            let omega_theta = [ct * cp, ct * sp, -st];
            let omega_phi = [-st * sp, st * cp, 0.0];
            let a = spec.eval_a(&omega);
            let grad = spec.eval_grad_a(&omega)?;
            let r = tau / a;
            let da_t: f64 = (0..3).map(|i| grad[i] * omega_theta[i]).sum();
            let da_p: f64 = (0..3).map(|i| grad[i] * omega_phi[i]).sum();
            let dr_t = -tau * da_t / (a * a);
            let dr_p = -tau * da_p / (a * a);
            let xi_t: Vec<f64> = (0..3).map(|i| dr_t * omega[i] + r * omega_theta[i]).collect();
            let xi_p: Vec<f64> = (0..3).map(|i| dr_p * omega[i] + r * omega_phi[i]).collect();
            let cross = [
                xi_t[1] * xi_p[2] - xi_t[2] * xi_p[1],
                xi_t[2] * xi_p[0] - xi_t[0] * xi_p[2],
                xi_t[0] * xi_p[1] - xi_t[1] * xi_p[0],
            ];
            let element = cross.iter().map(|c| c * c).sum::<f64>().sqrt();
            nodes.push(omega.iter().map(|o| r * o).collect());
            weights.push(element * wt * half_pi * dphi);
        }
    }
    Ok(LevelSetQuad {
        spec: spec.clone(),
        tau,
        nodes,
        weights,
    })
}

/// ‖f̂‖_{L²(Σ(τ))} via nonuniform transform evaluation at the quad nodes.
pub fn trace_norm(f: &Field, quad: &LevelSetQuad) -> Result<f64> {
    if f.grid().dimension() != quad.spec.dimension() {
        return Err(LabError::usage("field and quadrature dimensions differ"));
    }
    let values = nuft_eval(f, &quad.nodes)?;
    let sum: f64 = values
        .iter()
        .zip(&quad.weights)
        .map(|(v, w)| w * v.norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

/// Hölder-continuity ratio of the scaled restrictions on Σ(1).
pub fn hoelder_ratio(
    f: &Field,
    spec: &SymbolSpec,
    tau: f64,
    lam: f64,
    theta: f64,
    resolution: usize,
) -> Result<f64> {
    let n = spec.dimension();
    let theta_ok = if n >= 3 {
        theta > 0.0 && theta < 1.0
    } else {
        theta > 0.0 && theta <= 0.5
    };
    if !theta_ok {
        let range = if n >= 3 {
            "0 < theta < 1"
        } else {
            "0 < theta <= 1/2"
        };
        return Err(LabError::usage(format!(
            "Hoelder continuity requires {range} for n = {n}, got theta = {theta}"
        )));
    }
    if tau <= 0.0 || lam <= 0.0 {
        return Err(LabError::usage("Hoelder continuity requires tau, lambda > 0"));
    }
    if tau == lam {
        return Err(LabError::usage(
            "Hoelder continuity requires tau != lambda",
        ));
    }
    let quad = build_quad(spec, 1.0, resolution)?;
    let rho = (n as f64 - 1.0) / 2.0;
    let scaled = |s: f64| -> Vec<Vec<f64>> {
        quad.nodes
            .iter()
            .map(|xi| xi.iter().map(|v| s * v).collect())
            .collect()
    };
    let at_tau = nuft_eval(f, &scaled(tau))?;
    let at_lam = nuft_eval(f, &scaled(lam))?;
    let diff_sq: f64 = quad
        .weights
        .iter()
        .zip(at_tau.iter().zip(&at_lam))
        .map(|(w, (vt, vl))| w * (tau.powf(rho) * vt - lam.powf(rho) * vl).norm_sqr())
        .sum();
    let rhs = (tau - lam).abs().powf(theta)
        * weighted_norm(f, 0.5 + theta, WeightKind::JapaneseBracket);
    if rhs == 0.0 {
        return Err(LabError::numeric("Hoelder denominator vanished"));
    }
    Ok(diff_sq.sqrt() / rhs)
}

/// Least-squares slope of log trace norm against log τ, plus the
/// ratios trace_norm/(τ^θ · ‖⟨x⟩^{1/2+θ}f‖).
pub fn lowfreq_slope(
    f: &Field,
    spec: &SymbolSpec,
    tau_list: &[f64],
    theta: f64,
    resolution: usize,
) -> Result<(f64, Vec<f64>)> {
    let n = spec.dimension() as f64;
    if !(theta > 0.0 && theta < (n - 1.0) / 2.0) {
        return Err(LabError::usage(format!(
            "low frequency trace requires 0 < theta < (n-1)/2, got theta = {theta}, n = {n}"
        )));
    }
    if tau_list.len() < 2 {
        return Err(LabError::usage("need at least two tau values"));
    }
    for pair in tau_list.windows(2) {
        if pair[1] >= pair[0] {
            return Err(LabError::usage("tau_list must be strictly decreasing"));
        }
    }
    if tau_list[0] > 1.0 || *tau_list.last().unwrap() <= 0.0 {
        return Err(LabError::usage("tau_list must lie in (0, 1]"));
    }
    let rhs = weighted_norm(f, 0.5 + theta, WeightKind::JapaneseBracket);
    if rhs == 0.0 {
        return Err(LabError::usage("lowfreq_slope requires nonzero f"));
    }
    let mut logs = Vec::new();
    let mut ratios = Vec::new();
    for &tau in tau_list {
        let quad = build_quad(spec, tau, resolution)?;
        let t = trace_norm(f, &quad)?;
        logs.push((tau.ln(), t.ln()));
        ratios.push(t / (tau.powf(theta) * rhs));
    }
    // least-squares slope
    let k = logs.len() as f64;
    let sx: f64 = logs.iter().map(|(x, _)| x).sum();
    let sy: f64 = logs.iter().map(|(_, y)| y).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = logs.iter().map(|(x, y)| x * y).sum();
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    Ok((slope, ratios))
}

/// Relative residual of the co-area identity
/// `∫F dξ = ∫₀^∞ ∫_{p=τ} F/|p'| dσ dτ`.
///
/// The lattice sum realizes the left side; the right side substitutes
/// s = τ^{1/m}, which turns the iterated integral into
/// `∫₀^∞ ds ∫_{Σ_a(s)} F/|a'| dσ`, evaluated with the level-set quadrature
/// and trapezoid in s.
pub fn coarea_residual(
    f: impl Fn(&[f64]) -> f64,
    grid: GridSpec,
    spec: &SymbolSpec,
    tau_quad: usize,
    sphere_res: usize,
) -> Result<f64> {
    if grid.dimension() != spec.dimension() {
        return Err(LabError::usage("grid and symbol dimensions differ"));
    }
    // lattice side
    let mut lattice = 0.0f64;
    grid.for_each_point(Space::Frequency, |_, xi| {
        lattice += f(xi);
    });
    lattice *= grid.cell_measure(Space::Frequency);
    if lattice == 0.0 {
        return Ok(0.0);
    }
    // a-range covering the lattice: max a over the corner directions times
    // the Nyquist radius
    let mut s_max = 0.0f64;
    grid.for_each_point(Space::Frequency, |_, xi| {
        s_max = s_max.max(spec.eval_a(xi));
    });
    // iterated side: trapezoid in s, level-set quadrature in the surface
    let ds = s_max / tau_quad as f64;
    let mut iterated = 0.0f64;
    for j in 1..=tau_quad {
        let s = j as f64 * ds;
        let quad = build_quad(spec, s, sphere_res)?;
        let shell: f64 = quad
            .nodes
            .iter()
            .zip(quad.weights())
            .map(|(xi, w)| {
                let grad = spec.eval_grad_a(xi).expect("nonzero node");
                let gn: f64 = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
                w * f(xi) / gn
            })
            .sum();
        let trap = if j == tau_quad { 0.5 } else { 1.0 };
        iterated += trap * shell * ds;
    }
    Ok((lattice - iterated).abs() / lattice.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::gaussian_field;
    use num_complex::Complex64;

    fn std_gaussian(grid: GridSpec) -> Field {
        Field::from_fn(grid, Space::Physical, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Complex64::new((-r2 / 2.0).exp(), 0.0)
        })
    }

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(8);
        // integrates polynomials up to degree 15 exactly
        for deg in [0usize, 2, 8, 14] {
            let quad: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((quad - exact).abs() <= 1e-13, "degree {deg}: {quad} vs {exact}");
        }
        let odd: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(7)).sum();
        assert!(odd.abs() <= 1e-14);
    }

    #[test]
    fn circle_circumference() {
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let q1 = build_quad(&spec, 1.0, 64).unwrap();
        assert!((q1.total_weight() - std::f64::consts::TAU).abs() <= 1e-12);
        let q3 = build_quad(&spec, 3.0, 64).unwrap();
        assert!((q3.total_weight() - 3.0 * std::f64::consts::TAU).abs() <= 1e-11);
    }

    #[test]
    fn sphere_area() {
        let spec = SymbolSpec::euclid(3, 2.0).unwrap();
        let q = build_quad(&spec, 1.0, 24).unwrap();
        let expect = 4.0 * std::f64::consts::PI;
        assert!((q.total_weight() - expect).abs() <= 1e-10, "{}", q.total_weight());
    }

    #[test]
    fn lp4_arclength_refinement_oracle() {
        let spec = SymbolSpec::lp4(2, 2.0).unwrap();
        let coarse = build_quad(&spec, 1.0, 256).unwrap();
        let fine = build_quad(&spec, 1.0, 2560).unwrap();
        let rel = (coarse.total_weight() - fine.total_weight()).abs() / fine.total_weight();
        assert!(rel <= 1e-8, "arclength refinement residual {rel}");
    }

    #[test]
    fn nodes_lie_on_level_set() {
        for spec in [
            SymbolSpec::lp4(2, 1.5).unwrap(),
            SymbolSpec::bump(2, 2.0, 0.4).unwrap(),
            SymbolSpec::lp4(3, 2.0).unwrap(),
        ] {
            let tau = 1.7;
            let res = if spec.dimension() == 2 { 64 } else { 16 };
            let q = build_quad(&spec, tau, res).unwrap();
            for xi in q.nodes() {
                assert!((spec.eval_a(xi) - tau).abs() <= 1e-12 * tau);
            }
        }
    }

    #[test]
    fn degenerate_level_rejected() {
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        assert!(build_quad(&spec, 0.0, 64).is_err());
        assert!(build_quad(&spec, -1.0, 64).is_err());
    }

    #[test]
    fn trace_norm_gaussian_closed_form() {
        // |f̂|² = e^{-τ²} on the circle |ξ| = τ, so the squared trace norm is
        // 2πτ e^{-τ²}
        let grid = GridSpec::new(2, 16.0, 128).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let f = std_gaussian(grid);
        for tau in [0.5, 1.0, 2.0] {
            let quad = build_quad(&spec, tau, 128).unwrap();
            let t = trace_norm(&f, &quad).unwrap();
            let expect = (std::f64::consts::TAU * tau * (-tau * tau).exp()).sqrt();
            assert!((t - expect).abs() <= 1e-6, "tau {tau}: {t} vs {expect}");
        }
    }

    #[test]
    fn trace_norm_of_zero() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let quad = build_quad(&spec, 1.0, 64).unwrap();
        let zero = Field::zeros(grid, Space::Physical);
        assert_eq!(trace_norm(&zero, &quad).unwrap(), 0.0);
    }

    #[test]
    fn dilation_covariance() {
        // ‖f̂‖_{L²(Σ(τ))} = ‖τ^ρ f̂(τ·)‖_{L²(Σ(1))}
        let grid = GridSpec::new(2, 16.0, 128).unwrap();
        let spec = SymbolSpec::bump(2, 2.0, 0.3).unwrap();
        let f = std_gaussian(grid);
        let tau = 1.6f64;
        let direct = trace_norm(&f, &build_quad(&spec, tau, 128).unwrap()).unwrap();
        let unit = build_quad(&spec, 1.0, 128).unwrap();
        let scaled_nodes: Vec<Vec<f64>> = unit
            .nodes()
            .iter()
            .map(|xi| xi.iter().map(|v| tau * v).collect())
            .collect();
        let vals = nuft_eval(&f, &scaled_nodes).unwrap();
        let rho = 0.5;
        let scaled: f64 = unit
            .weights()
            .iter()
            .zip(&vals)
            .map(|(w, v)| w * (tau.powf(rho) * v).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!((direct - scaled).abs() <= 1e-10, "{direct} vs {scaled}");
    }

    #[test]
    fn node_doubling_stability() {
        let grid = GridSpec::new(2, 16.0, 128).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let f = std_gaussian(grid);
        let a = trace_norm(&f, &build_quad(&spec, 1.0, 64).unwrap()).unwrap();
        let b = trace_norm(&f, &build_quad(&spec, 1.0, 128).unwrap()).unwrap();
        assert!((a - b).abs() <= 1e-8);
    }

    #[test]
    fn hoelder_radial_reduction_oracle() {
        // for radial f and the euclid symbol, the integrand is constant on
        // the circle, so the ratio reduces to a scalar expression
        let grid = GridSpec::new(2, 16.0, 128).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let f = std_gaussian(grid);
        let (tau, lam, theta) = (1.5f64, 0.8f64, 0.5f64);
        let r = hoelder_ratio(&f, &spec, tau, lam, theta, 128).unwrap();
        // f̂(ξ) = e^{-|ξ|²/2}
        let rho = 0.5;
        let scalar = (tau.powf(rho) * (-tau * tau / 2.0).exp()
            - lam.powf(rho) * (-lam * lam / 2.0).exp())
        .abs()
            * std::f64::consts::TAU.sqrt()
            / ((tau - lam).abs().powf(theta)
                * weighted_norm(&f, 0.5 + theta, WeightKind::JapaneseBracket));
        assert!((r - scalar).abs() <= 1e-8 * scalar.max(1.0), "{r} vs {scalar}");
    }

    #[test]
    fn hoelder_hypothesis_gating() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let f = std_gaussian(grid);
        assert!(hoelder_ratio(&f, &spec, 1.0, 1.0, 0.5, 64).is_err());
        let err = hoelder_ratio(&f, &spec, 1.0, 2.0, 0.7, 64).unwrap_err();
        assert!(err.to_string().contains("0 < theta <= 1/2"), "{err}");
    }

    #[test]
    fn lowfreq_slope_matches_surface_scaling() {
        let grid = GridSpec::new(2, 16.0, 128).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let f = std_gaussian(grid);
        let taus = [0.2, 0.1, 0.05, 0.025];
        let (slope, ratios) = lowfreq_slope(&f, &spec, &taus, 0.25, 128).unwrap();
        assert!((slope - 0.5).abs() <= 0.05, "slope {slope}");
        for r in &ratios {
            assert!(r.is_finite() && *r > 0.0);
        }
    }

    #[test]
    fn lowfreq_hypothesis_gating() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let f = std_gaussian(grid);
        let err = lowfreq_slope(&f, &spec, &[0.2, 0.1], 0.5, 64).unwrap_err();
        assert!(err.to_string().contains("0 < theta < (n-1)/2"), "{err}");
    }

    #[test]
    fn coarea_gaussian_euclid() {
        // both sides equal π
        let grid = GridSpec::new(2, 16.0, 128).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let f = |xi: &[f64]| (-(xi[0] * xi[0] + xi[1] * xi[1])).exp();
        let r = coarea_residual(f, grid, &spec, 16384, 64).unwrap();
        assert!(r <= 1e-6, "co-area residual {r}");
        // cross-check the lattice side against the analytic value
        let mut lattice = 0.0;
        grid.for_each_point(Space::Frequency, |_, xi| lattice += f(xi));
        lattice *= grid.cell_measure(Space::Frequency);
        assert!((lattice - std::f64::consts::PI).abs() <= 1e-10);
    }

    #[test]
    fn coarea_lp4_refinement() {
        let grid = GridSpec::new(2, 16.0, 128).unwrap();
        let spec = SymbolSpec::lp4(2, 2.0).unwrap();
        let f = |xi: &[f64]| (-(xi[0] * xi[0] + xi[1] * xi[1])).exp();
        let coarse = coarea_residual(f, grid, &spec, 1024, 64).unwrap();
        let fine = coarea_residual(f, grid, &spec, 4096, 128).unwrap();
        assert!(fine <= 1e-4, "co-area residual {fine}");
        assert!(fine <= coarse + 1e-12, "no improvement: {coarse} -> {fine}");
    }

    #[test]
    fn coarea_zero_function() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let r = coarea_residual(|_| 0.0, grid, &spec, 64, 16).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn quad_csv_export() {
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let q = build_quad(&spec, 1.0, 8).unwrap();
        let mut buf = Vec::new();
        q.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "xi0,xi1,weight");
        assert_eq!(lines.len(), 9);
    }

    #[test]
    fn uniform_trace_ratio_bounded() {
        let grid = GridSpec::new(2, 16.0, 64).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let theta = 0.1;
        let mut sup = 0.0f64;
        for lam in [0.5, 1.0, 2.0] {
            let f = gaussian_field(grid, lam, &[0.0, 0.0], &[0.0, 0.0]);
            let rhs = weighted_norm(&f, 0.5 + theta, WeightKind::JapaneseBracket);
            for tau in [0.1, 1.0, 10.0] {
                let quad = build_quad(&spec, tau, 64).unwrap();
                let ratio = trace_norm(&f, &quad).unwrap() / rhs;
                assert!(ratio.is_finite());
                sup = sup.max(ratio);
            }
        }
        assert!(sup < 1e2, "family sup {sup}");
    }
}
