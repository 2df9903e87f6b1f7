//! Elliptic, positively homogeneous degree-one symbols `a(ξ)` and the
//! dispersive symbol `p(ξ) = a(ξ)^m`.
//!
//! A symbol is described by its profile `g` on the unit sphere through
//! `a(ξ) = |ξ| g(ξ/|ξ|)`; ellipticity means `g > 0` everywhere on the
//! sphere.  Built-in profiles have closed-form gradients; custom profiles
//! fall back to central differences on the sphere.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LabError, Result};

/// Step for the finite-difference gradient of custom profiles.
const FD_STEP: f64 = 1e-5;

pub type ProfileFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Which degree-one symbol to use.
#[derive(Clone)]
pub enum SymbolKind {
    /// `a(ξ) = |ξ|`, the Schrödinger case when `m = 2`.
    Euclid,
    /// `a(ξ) = (Σ ξ_i^4)^{1/4}`; its level set has curvature-vanishing points.
    Lp4,
    /// `a(ξ) = |ξ| (1 + ε (ξ_1/|ξ|)^2)`.
    Bump(f64),
    /// User-supplied profile on the unit sphere, optional closed-form gradient.
    Custom {
        profile: ProfileFn,
        gradient: Option<GradientFn>,
    },
}

impl fmt::Debug for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolKind::Euclid => write!(f, "Euclid"),
            SymbolKind::Lp4 => write!(f, "Lp4"),
            SymbolKind::Bump(eps) => write!(f, "Bump({eps})"),
            SymbolKind::Custom { .. } => write!(f, "Custom"),
        }
    }
}

/// An elliptic degree-one symbol together with the order `m > 1` of
/// `p(ξ) = a(ξ)^m`.
#[derive(Clone, Debug)]
pub struct SymbolSpec {
    dimension: usize,
    order: f64,
    kind: SymbolKind,
}

impl SymbolSpec {
    pub fn new(dimension: usize, order: f64, kind: SymbolKind) -> Result<Self> {
        if dimension == 0 {
            return Err(LabError::usage("dimension must be at least 1"));
        }
        if order <= 1.0 {
            return Err(LabError::usage(format!(
                "order m must satisfy m > 1, got {order}"
            )));
        }
        Ok(SymbolSpec {
            dimension,
            order,
            kind,
        })
    }

    pub fn euclid(dimension: usize, order: f64) -> Result<Self> {
        Self::new(dimension, order, SymbolKind::Euclid)
    }

    pub fn lp4(dimension: usize, order: f64) -> Result<Self> {
        Self::new(dimension, order, SymbolKind::Lp4)
    }

    pub fn bump(dimension: usize, order: f64, eps: f64) -> Result<Self> {
        Self::new(dimension, order, SymbolKind::Bump(eps))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    /// `a(ξ)`; continuous, with `a(0) = 0`.
    pub fn eval_a(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.dimension);
        let r = norm(xi);
        if r == 0.0 {
            return 0.0;
        }
        match &self.kind {
            SymbolKind::Euclid => r,
            SymbolKind::Lp4 => xi.iter().map(|x| x * x * x * x).sum::<f64>().powf(0.25),
            SymbolKind::Bump(eps) => {
                let w = xi[0] / r;
                r * (1.0 + eps * w * w)
            }
            SymbolKind::Custom { profile, .. } => {
                let omega: Vec<f64> = xi.iter().map(|x| x / r).collect();
                r * profile(&omega)
            }
        }
    }

    /// `a'(ξ)` for `ξ ≠ 0`; homogeneous of degree zero.
    pub fn eval_grad_a(&self, xi: &[f64]) -> Result<Vec<f64>> {
        debug_assert_eq!(xi.len(), self.dimension);
        let r = norm(xi);
        if r == 0.0 {
            return Err(LabError::usage("gradient of a is undefined at xi = 0"));
        }
        match &self.kind {
            SymbolKind::Euclid => Ok(xi.iter().map(|x| x / r).collect()),
            SymbolKind::Lp4 => {
                let s: f64 = xi.iter().map(|x| x * x * x * x).sum();
                let d = s.powf(0.75);
                Ok(xi.iter().map(|x| x * x * x / d).collect())
            }
            SymbolKind::Bump(eps) => {
                let r3 = r * r * r;
                let x1 = xi[0];
                Ok((0..self.dimension)
                    .map(|i| {
                        let mut g = xi[i] / r - eps * x1 * x1 * xi[i] / r3;
                        if i == 0 {
                            g += 2.0 * eps * x1 / r;
                        }
                        g
                    })
                    .collect())
            }
            SymbolKind::Custom { gradient, .. } => {
                let omega: Vec<f64> = xi.iter().map(|x| x / r).collect();
                match gradient {
                    Some(_) => self.custom_grad_closed(&omega),
                    None => Ok(self.custom_grad_fd(&omega)),
                }
            }
        }
    }

    /// Closed-form custom gradient: `a' = g ω + (I - ωω^T) ∇_S g`.
    fn custom_grad_closed(&self, omega: &[f64]) -> Result<Vec<f64>> {
        let (profile, gradient) = match &self.kind {
            SymbolKind::Custom {
                profile,
                gradient: Some(g),
            } => (profile, g),
            _ => unreachable!(),
        };
        let g = profile(omega);
        let gs = gradient(omega);
        if gs.len() != self.dimension {
            return Err(LabError::usage(
                "custom profile gradient has wrong dimension",
            ));
        }
        // Project the supplied gradient onto the tangent space, then add the
        // radial part g·ω.
        let dot: f64 = omega.iter().zip(&gs).map(|(o, v)| o * v).sum();
        Ok((0..self.dimension)
            .map(|i| g * omega[i] + gs[i] - dot * omega[i])
            .collect())
    }

    /// Finite-difference gradient of `a` evaluated at the unit vector;
    /// degree-zero homogeneity extends it everywhere.
    fn custom_grad_fd(&self, omega: &[f64]) -> Vec<f64> {
        let h = FD_STEP;
        (0..self.dimension)
            .map(|i| {
                let mut plus = omega.to_vec();
                let mut minus = omega.to_vec();
                plus[i] += h;
                minus[i] -= h;
                (self.eval_a(&plus) - self.eval_a(&minus)) / (2.0 * h)
            })
            .collect()
    }

    /// `p(ξ) = a(ξ)^m`.
    pub fn eval_p(&self, xi: &[f64]) -> f64 {
        self.eval_a(xi).powf(self.order)
    }

    /// `p'(ξ) = m a(ξ)^{m-1} a'(ξ)` for `ξ ≠ 0`.
    pub fn eval_grad_p(&self, xi: &[f64]) -> Result<Vec<f64>> {
        let a = self.eval_a(xi);
        if a == 0.0 {
            return Err(LabError::usage("gradient of p is undefined at xi = 0"));
        }
        let scale = self.order * a.powf(self.order - 1.0);
        Ok(self.eval_grad_a(xi)?.into_iter().map(|g| scale * g).collect())
    }

    /// `|p'(ξ)|`.
    pub fn grad_p_norm(&self, xi: &[f64]) -> Result<f64> {
        Ok(norm(&self.eval_grad_p(xi)?))
    }

    /// Validates homogeneity and the Euler identity on random samples.
    pub fn homogeneity_residual(&self, sample_count: usize, seed: u64) -> Result<HomogeneityReport> {
        if sample_count == 0 {
            return Err(LabError::usage("sample_count must be at least 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut homog: f64 = 0.0;
        let mut euler: f64 = 0.0;
        for _ in 0..sample_count {
            let xi: Vec<f64> = (0..self.dimension)
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            if norm(&xi) < 1e-3 {
                continue;
            }
            for t in [0.5, 2.0, 7.0] {
                let scaled: Vec<f64> = xi.iter().map(|x| t * x).collect();
                let lhs = self.eval_a(&scaled);
                homog = homog.max((lhs - t * self.eval_a(&xi)).abs() / lhs);
            }
            let a = self.eval_a(&xi);
            let grad = self.eval_grad_a(&xi)?;
            let dot: f64 = grad.iter().zip(&xi).map(|(g, x)| g * x).sum();
            euler = euler.max((a - dot).abs() / a);
        }
        Ok(HomogeneityReport {
            homogeneity: homog,
            euler,
        })
    }

    /// Minimum of `|a'(ω)|` over a sphere sample (ellipticity of the gradient).
    pub fn min_grad_norm(&self, sample_count: usize, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut min = f64::INFINITY;
        let mut taken = 0usize;
        while taken < sample_count {
            let xi: Vec<f64> = (0..self.dimension)
                .map(|_| rng.gen_range(-1.0f64..1.0))
                .collect();
            let r = norm(&xi);
            if r < 1e-3 {
                continue;
            }
            let omega: Vec<f64> = xi.iter().map(|x| x / r).collect();
            min = min.min(norm(&self.eval_grad_a(&omega)?));
            taken += 1;
        }
        Ok(min)
    }
}

/// Result of the hypothesis-validation sweep on a symbol.
#[derive(Clone, Copy, Debug)]
pub struct HomogeneityReport {
    /// max relative residual of `a(tξ) = t a(ξ)`.
    pub homogeneity: f64,
    /// max relative residual of the Euler identity `a(ξ) = a'(ξ)·ξ`.
    pub euler: f64,
}

impl HomogeneityReport {
    pub fn max(&self) -> f64 {
        self.homogeneity.max(self.euler)
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclid_values() {
        let s = SymbolSpec::euclid(2, 2.0).unwrap();
        assert_eq!(s.eval_a(&[3.0, 4.0]), 5.0);
        assert_eq!(s.eval_a(&[0.0, 0.0]), 0.0);
        let g = s.eval_grad_a(&[3.0, 4.0]).unwrap();
        assert!((g[0] - 0.6).abs() < 1e-15);
        assert!((g[1] - 0.8).abs() < 1e-15);
        // degree-zero homogeneity of the gradient
        let g2 = s.eval_grad_a(&[6.0, 8.0]).unwrap();
        assert!((g[0] - g2[0]).abs() < 1e-15 && (g[1] - g2[1]).abs() < 1e-15);
    }

    #[test]
    fn lp4_values() {
        let s = SymbolSpec::lp4(2, 2.0).unwrap();
        assert!((s.eval_a(&[1.0, 1.0]) - 2f64.powf(0.25)).abs() < 1e-15);
        // gradient oracle: ξ_i^3 / (Σ ξ_j^4)^{3/4}
        let g = s.eval_grad_a(&[1.0, 1.0]).unwrap();
        let expect = 2f64.powf(-0.75);
        assert!((g[0] - expect).abs() < 1e-15);
        assert!((g[1] - expect).abs() < 1e-15);
    }

    #[test]
    fn bump_on_axis() {
        let s = SymbolSpec::bump(2, 2.0, 0.5).unwrap();
        assert!((s.eval_a(&[2.0, 0.0]) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn bump_gradient_matches_finite_differences() {
        let s = SymbolSpec::bump(3, 2.0, 0.3).unwrap();
        let xi = [0.7, -1.2, 0.4];
        let g = s.eval_grad_a(&xi).unwrap();
        let h = 1e-6;
        for i in 0..3 {
            let mut p = xi;
            let mut m = xi;
            p[i] += h;
            m[i] -= h;
            let fd = (s.eval_a(&p) - s.eval_a(&m)) / (2.0 * h);
            assert!((g[i] - fd).abs() < 1e-8, "component {i}: {} vs {}", g[i], fd);
        }
    }

    #[test]
    fn eval_p_schrodinger() {
        let s = SymbolSpec::euclid(2, 2.0).unwrap();
        assert_eq!(s.eval_p(&[3.0, 4.0]), 25.0);
        let gp = s.eval_grad_p(&[3.0, 4.0]).unwrap();
        assert!((gp[0] - 6.0).abs() < 1e-12);
        assert!((gp[1] - 8.0).abs() < 1e-12);
    }

    #[test]
    fn eval_p_fractional_order() {
        let s = SymbolSpec::euclid(2, 1.5).unwrap();
        assert!((s.eval_p(&[0.0, 1.0]) - 1.0).abs() < 1e-15);
        let gp = s.eval_grad_p(&[0.0, 1.0]).unwrap();
        assert!(gp[0].abs() < 1e-15);
        assert!((gp[1] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn gradient_at_origin_is_error() {
        let s = SymbolSpec::euclid(2, 2.0).unwrap();
        assert!(s.eval_grad_a(&[0.0, 0.0]).is_err());
        assert!(s.eval_grad_p(&[0.0, 0.0]).is_err());
        assert_eq!(s.eval_p(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn homogeneity_of_builtins() {
        for spec in [
            SymbolSpec::euclid(2, 2.0).unwrap(),
            SymbolSpec::lp4(2, 1.5).unwrap(),
            SymbolSpec::bump(2, 2.0, 0.5).unwrap(),
            SymbolSpec::euclid(3, 2.0).unwrap(),
            SymbolSpec::lp4(3, 2.0).unwrap(),
        ] {
            let report = spec.homogeneity_residual(1000, 7).unwrap();
            assert!(report.homogeneity <= 1e-12, "{:?}", spec);
            assert!(report.euler <= 1e-8, "{:?}", spec);
        }
    }

    #[test]
    fn custom_profile_finite_difference_gradient() {
        // same bump symbol, supplied as a custom profile without a gradient
        let eps = 0.5;
        let profile: ProfileFn = Arc::new(move |omega: &[f64]| 1.0 + eps * omega[0] * omega[0]);
        let s = SymbolSpec::new(
            2,
            2.0,
            SymbolKind::Custom {
                profile,
                gradient: None,
            },
        )
        .unwrap();
        let report = s.homogeneity_residual(200, 3).unwrap();
        assert!(report.max() <= 1e-6, "residual {}", report.max());
        let reference = SymbolSpec::bump(2, 2.0, eps).unwrap();
        let xi = [0.8, -0.5];
        let g = s.eval_grad_a(&xi).unwrap();
        let gr = reference.eval_grad_a(&xi).unwrap();
        for i in 0..2 {
            assert!((g[i] - gr[i]).abs() < 1e-7);
        }
    }

    #[test]
    fn grad_never_vanishes_on_sphere() {
        for spec in [
            SymbolSpec::euclid(2, 2.0).unwrap(),
            SymbolSpec::lp4(2, 2.0).unwrap(),
            SymbolSpec::bump(2, 2.0, 0.5).unwrap(),
        ] {
            assert!(spec.min_grad_norm(10_000, 11).unwrap() > 0.0);
        }
    }

    #[test]
    fn invalid_order_rejected() {
        assert!(SymbolSpec::euclid(2, 1.0).is_err());
        assert!(SymbolSpec::euclid(2, 0.5).is_err());
    }
}
