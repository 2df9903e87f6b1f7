//! Fourier multiplier operators, spatial weights, and the two commutator
//! constructions with their estimate ratios.
//!
//! Multipliers act by forward transform, pointwise multiplication by σ(ξ),
//! inverse transform.  Symbols with a singularity at ξ = 0 (negative powers,
//! degree-zero kinds) annihilate the zero mode and record that fact on the
//! output field.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::grid::{apply_weight, forward_ft, inverse_ft, Field, GridSpec, Space, WeightKind};
use crate::symbol::SymbolSpec;

pub type RealSymbolFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type ComplexSymbolFn = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// A frequency multiplier σ(ξ).
#[derive(Clone)]
pub enum MultiplierKind {
    /// σ(ξ) = |ξ|^s.
    HomogeneousPower(f64),
    /// σ(ξ) = ⟨ξ⟩^s = (1+|ξ|²)^{s/2}.
    BracketPower(f64),
    /// σ(ξ) = a(ξ)^s for a symbol spec.
    SymbolPower(SymbolSpec, f64),
    /// q smooth on ℝⁿ∖{0}, homogeneous of degree zero.
    DegreeZero(RealSymbolFn),
    /// Arbitrary bounded σ(ξ).
    ScalarFunction(ComplexSymbolFn),
}

impl fmt::Debug for MultiplierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiplierKind::HomogeneousPower(s) => write!(f, "HomogeneousPower({s})"),
            MultiplierKind::BracketPower(s) => write!(f, "BracketPower({s})"),
            MultiplierKind::SymbolPower(spec, s) => write!(f, "SymbolPower({spec:?}, {s})"),
            MultiplierKind::DegreeZero(_) => write!(f, "DegreeZero"),
            MultiplierKind::ScalarFunction(_) => write!(f, "ScalarFunction"),
        }
    }
}

impl MultiplierKind {
    /// True when σ is singular (or merely defined by continuity extension
    /// failure) at ξ = 0, so the zero mode must be annihilated.
    pub fn singular_at_origin(&self) -> bool {
        match self {
            MultiplierKind::HomogeneousPower(s) => *s < 0.0,
            MultiplierKind::SymbolPower(_, s) => *s < 0.0,
            MultiplierKind::DegreeZero(_) => true,
            _ => false,
        }
    }

    /// σ(ξ) at a nonzero lattice point.
    fn eval_nonzero(&self, xi: &[f64]) -> Complex64 {
        match self {
            MultiplierKind::HomogeneousPower(s) => {
                let r: f64 = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
                Complex64::new(r.powf(*s), 0.0)
            }
            MultiplierKind::BracketPower(s) => {
                let r2: f64 = xi.iter().map(|x| x * x).sum();
                Complex64::new((1.0 + r2).powf(s / 2.0), 0.0)
            }
            MultiplierKind::SymbolPower(spec, s) => {
                Complex64::new(spec.eval_a(xi).powf(*s), 0.0)
            }
            MultiplierKind::DegreeZero(q) => Complex64::new(q(xi), 0.0),
            MultiplierKind::ScalarFunction(sigma) => sigma(xi),
        }
    }

    /// σ at ξ = 0 for the nonsingular kinds (0^0 taken as 1).
    fn eval_origin(&self) -> Complex64 {
        match self {
            MultiplierKind::HomogeneousPower(s) | MultiplierKind::SymbolPower(_, s) => {
                if *s == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            MultiplierKind::BracketPower(s) => Complex64::new(1.0f64.powf(*s), 0.0),
            MultiplierKind::DegreeZero(_) => Complex64::new(0.0, 0.0),
            // multiply_symbol evaluates scalar functions with the real origin
            // coordinates directly
            MultiplierKind::ScalarFunction(_) => unreachable!(),
        }
    }
}

/// Evaluates σ on the whole frequency lattice with the zero-mode convention.
/// Returns the values together with the zero-mode annihilation flag.
pub fn symbol_values(kind: &MultiplierKind, grid: &GridSpec) -> Result<(Vec<Complex64>, bool)> {
    let origin = grid.origin_index();
    let singular = kind.singular_at_origin();
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut bad: Option<String> = None;
    grid.for_each_point(Space::Frequency, |flat, xi| {
        let sigma = if flat == origin {
            if singular {
                Complex64::new(0.0, 0.0)
            } else {
                match kind {
                    MultiplierKind::ScalarFunction(f) => f(xi),
                    _ => kind.eval_origin(),
                }
            }
        } else {
            kind.eval_nonzero(xi)
        };
        if !sigma.re.is_finite() || !sigma.im.is_finite() {
            if flat != origin && bad.is_none() {
                bad = Some(format!("multiplier not finite at xi = {xi:?}"));
            }
        } else {
            out[flat] = sigma;
        }
    });
    if let Some(msg) = bad {
        return Err(LabError::numeric(msg));
    }
    Ok((out, singular))
}

/// Multiplies a frequency field pointwise by σ(ξ), honoring the zero-mode
/// convention.  Returns the field together with the annihilation flag set.
pub fn multiply_symbol(fhat: &Field, kind: &MultiplierKind) -> Result<Field> {
    if fhat.space() != Space::Frequency {
        return Err(LabError::usage("multiply_symbol expects a frequency field"));
    }
    let grid = *fhat.grid();
    let (sigma, singular) = symbol_values(kind, &grid)?;
    let mut out = fhat.clone();
    for (v, s) in out.values_mut().iter_mut().zip(&sigma) {
        *v *= s;
    }
    if singular {
        out.set_zero_mode_dropped(true);
    }
    Ok(out)
}

/// σ(D)f: transform, multiply, transform back.  Physical input gives physical
/// output; frequency input is multiplied in place.
pub fn apply_multiplier(f: &Field, kind: &MultiplierKind) -> Result<Field> {
    match f.space() {
        Space::Frequency => multiply_symbol(f, kind),
        Space::Physical => {
            let fhat = forward_ft(f)?;
            let ghat = multiply_symbol(&fhat, kind)?;
            let flag = ghat.zero_mode_dropped();
            let mut g = inverse_ft(&ghat)?;
            g.set_zero_mode_dropped(flag);
            Ok(g)
        }
    }
}

/// L² norm of `a(ξ)^s v` on the frequency lattice.  The origin follows the
/// multiplier conventions: weight 0 for s > 0, 1 for s = 0, and the cell is
/// skipped for s < 0.
pub fn symbol_weighted_l2(v: &Field, spec: &SymbolSpec, s: f64) -> Result<f64> {
    if v.space() != Space::Frequency {
        return Err(LabError::usage(
            "symbol_weighted_l2 expects a frequency field",
        ));
    }
    let grid = *v.grid();
    let origin = grid.origin_index();
    let w = grid.cell_measure(Space::Frequency);
    let mut sum = 0.0f64;
    grid.for_each_point(Space::Frequency, |flat, xi| {
        let weight = if flat == origin {
            if s == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            spec.eval_a(xi).powf(s)
        };
        sum += weight * weight * v.values()[flat].norm_sqr();
    });
    Ok((sum * w).sqrt())
}

/// Stein–Weiss ratio ‖a^{−β}·\widehat{|x|^{−α}f}‖₂ / ‖a^{γ}f̂‖₂ with the
/// D_ξ-duality realization |D_ξ|^{−α}f̂ = \widehat{|x|^{−α}f}.
pub fn stein_weiss_ratio(
    f: &Field,
    spec: &SymbolSpec,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<f64> {
    let n = spec.dimension() as f64;
    if alpha < 0.0 || alpha >= n {
        return Err(LabError::usage(format!(
            "Stein-Weiss requires 0 <= alpha < n, got alpha = {alpha}, n = {n}"
        )));
    }
    if beta >= n / 2.0 {
        return Err(LabError::usage(format!(
            "Stein-Weiss requires beta < n/2, got beta = {beta}"
        )));
    }
    if gamma >= n / 2.0 {
        return Err(LabError::usage(format!(
            "Stein-Weiss requires gamma < n/2, got gamma = {gamma}"
        )));
    }
    if (alpha - beta - gamma).abs() > 1e-12 {
        return Err(LabError::usage(
            "Stein-Weiss requires alpha = beta + gamma",
        ));
    }
    if f.space() != Space::Physical {
        return Err(LabError::usage("stein_weiss_ratio expects a physical field"));
    }
    let fnorm = f.l2_norm();
    if fnorm == 0.0 {
        return Err(LabError::usage("stein_weiss_ratio requires nonzero f"));
    }
    let weighted = apply_weight(f, -alpha, WeightKind::PurePower);
    let num_field = forward_ft(&weighted)?;
    let lhs = symbol_weighted_l2(&num_field, spec, -beta)?;
    let fhat = forward_ft(f)?;
    let rhs = symbol_weighted_l2(&fhat, spec, gamma)?;
    if rhs == 0.0 {
        return Err(LabError::numeric("Stein-Weiss denominator vanished"));
    }
    Ok(lhs / rhs)
}

/// `|x|^δ q(D)f − q(D)(|x|^δ f)` on the lattice.
pub fn weight_commutator_apply(f: &Field, delta: f64, q: &MultiplierKind) -> Result<Field> {
    let n = f.grid().dimension();
    if n >= 3 {
        if delta <= 0.0 || delta > 1.0 {
            return Err(LabError::usage(format!(
                "weight commutator requires 0 < delta <= 1 for n >= 3, got delta = {delta}"
            )));
        }
    } else if delta <= 0.0 || delta >= 1.0 {
        return Err(LabError::usage(format!(
            "weight commutator requires 0 < delta < 1 for n = {n}, got delta = {delta}"
        )));
    }
    let qf = apply_multiplier(f, q)?;
    let term1 = apply_weight(&qf, delta, WeightKind::PurePower);
    let wf = apply_weight(f, delta, WeightKind::PurePower);
    let term2 = apply_multiplier(&wf, q)?;
    term1.sub(&term2)
}

/// `r_κ(D_ξ) ĝ = −\widehat{|x|^{κ-1} x g}` componentwise; the frequency-side
/// derivative multiplier is multiplication by −x on the physical side.
fn r_kappa_apply(g: &Field, kappa: f64) -> Result<Vec<Field>> {
    if g.space() != Space::Physical {
        return Err(LabError::usage("r_kappa_apply expects a physical field"));
    }
    let dim = g.grid().dimension();
    (0..dim)
        .map(|i| {
            let weighted = g.map_with_coords(|x, v| {
                let r: f64 = x.iter().map(|t| t * t).sum::<f64>().sqrt();
                if r == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    v * (-r.powf(kappa - 1.0) * x[i])
                }
            });
            forward_ft(&weighted)
        })
        .collect()
}

fn check_kappa(n: usize, kappa: f64) -> Result<()> {
    let ok = if n >= 3 {
        kappa > 0.0 && kappa < 1.5
    } else {
        kappa > 0.0 && kappa < 1.0
    };
    if !ok {
        let range = if n >= 3 { "0 < kappa < 3/2" } else { "0 < kappa < 1" };
        return Err(LabError::usage(format!(
            "frequency commutator requires {range} for n = {n}, got kappa = {kappa}"
        )));
    }
    Ok(())
}

/// Ratio ‖a^{−ρ} r_κ(D_ξ) a^ρ f̂‖₂ / ‖|x|^κ f‖₂ with ρ = (n−1)/2.
pub fn freq_commutator_ratio(f: &Field, spec: &SymbolSpec, kappa: f64) -> Result<f64> {
    let n = spec.dimension();
    check_kappa(n, kappa)?;
    if f.space() != Space::Physical {
        return Err(LabError::usage(
            "freq_commutator_ratio expects a physical field",
        ));
    }
    if f.l2_norm() == 0.0 {
        return Err(LabError::usage("freq_commutator_ratio requires nonzero f"));
    }
    let rho = (n as f64 - 1.0) / 2.0;
    let fhat = forward_ft(f)?;
    let sandwiched = multiply_symbol(&fhat, &MultiplierKind::SymbolPower(spec.clone(), rho))?;
    let g = inverse_ft(&sandwiched)?;
    let components = r_kappa_apply(&g, kappa)?;
    let mut num_sq = 0.0f64;
    for w in &components {
        let u = symbol_weighted_l2(w, spec, -rho)?;
        num_sq += u * u;
    }
    let denom = crate::grid::weighted_norm(f, kappa, WeightKind::PurePower);
    if denom == 0.0 {
        return Err(LabError::numeric("frequency commutator denominator vanished"));
    }
    Ok(num_sq.sqrt() / denom)
}

/// Relative residual of the κ = 1 commutator identity
/// `{a^{−ρ} D_ξ a^ρ − D_ξ} f̂ = −iρ (a'(ξ)/a(ξ)) f̂`.
///
/// Both sides are vector valued; the residual is the L² norm of the
/// difference over all components, relative to ‖f̂‖.
pub fn case3_commutator_residual(f: &Field, spec: &SymbolSpec) -> Result<f64> {
    let n = spec.dimension();
    if f.space() != Space::Physical {
        return Err(LabError::usage(
            "case3_commutator_residual expects a physical field",
        ));
    }
    let rho = (n as f64 - 1.0) / 2.0;
    let fhat = forward_ft(f)?;
    let fnorm = fhat.l2_norm();
    if fnorm == 0.0 {
        return Err(LabError::usage("case3_commutator_residual requires nonzero f"));
    }
    let sandwiched = multiply_symbol(&fhat, &MultiplierKind::SymbolPower(spec.clone(), rho))?;
    let g = inverse_ft(&sandwiched)?;
    let inner = r_kappa_apply(&g, 1.0)?;
    let outer = r_kappa_apply(f, 1.0)?;
    let grid = *f.grid();
    let origin = grid.origin_index();
    let mut resid_sq = 0.0f64;
    for i in 0..n {
        // a^{−ρ}·(inner component) − (outer component), against −iρ(∂_i a/a)f̂
        let scaled = multiply_symbol(&inner[i], &MultiplierKind::SymbolPower(spec.clone(), -rho))?;
        let comm = scaled.sub(&outer[i])?;
        let mut sum = 0.0f64;
        grid.for_each_point(Space::Frequency, |flat, xi| {
            if flat == origin {
                return;
            }
            let a = spec.eval_a(xi);
            let grad = spec.eval_grad_a(xi).expect("nonzero lattice point");
            let expected = Complex64::new(0.0, -rho * grad[i] / a) * fhat.values()[flat];
            sum += (comm.values()[flat] - expected).norm_sqr();
        });
        resid_sq += sum * grid.cell_measure(Space::Frequency);
    }
    Ok(resid_sq.sqrt() / fnorm)
}

// ---- low/high frequency splitting symbols ------------------------------

/// Smooth cutoff: 1 for r ≤ 1, 0 for r ≥ 2, `exp(1 − 1/(1−(r−1)²))` between.
pub fn chi_cutoff(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let u = r - 1.0;
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

/// b₁(ξ) = ⟨ξ⟩^{m−1} χ(|ξ|).
pub fn b1_kind(m: f64) -> MultiplierKind {
    MultiplierKind::ScalarFunction(Arc::new(move |xi: &[f64]| {
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let v = (1.0 + r2).powf((m - 1.0) / 2.0) * chi_cutoff(r2.sqrt());
        Complex64::new(v, 0.0)
    }))
}

/// b₂(ξ) = ⟨ξ⟩^{m−1}(1 − χ(|ξ|))/|ξ|^{m−1}; zero where χ = 1.
pub fn b2_kind(m: f64) -> MultiplierKind {
    MultiplierKind::ScalarFunction(Arc::new(move |xi: &[f64]| {
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let r = r2.sqrt();
        let c = 1.0 - chi_cutoff(r);
        let v = if c == 0.0 {
            0.0
        } else {
            (1.0 + r2).powf((m - 1.0) / 2.0) * c / r.powf(m - 1.0)
        };
        Complex64::new(v, 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{gaussian_field, weighted_norm, GridSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: GridSpec, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Field::new(grid, Space::Physical, values).unwrap()
    }

    fn std_gaussian(grid: GridSpec) -> Field {
        Field::from_fn(grid, Space::Physical, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Complex64::new((-r2 / 2.0).exp(), 0.0)
        })
    }

    fn riesz_q() -> MultiplierKind {
        MultiplierKind::DegreeZero(Arc::new(|xi: &[f64]| {
            xi[0] / xi.iter().map(|x| x * x).sum::<f64>().sqrt()
        }))
    }

    #[test]
    fn power_zero_is_identity() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let f = random_field(grid, 1);
        let g = apply_multiplier(&f, &MultiplierKind::HomogeneousPower(0.0)).unwrap();
        let diff: f64 = f
            .values()
            .iter()
            .zip(g.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-13);
        assert!(!g.zero_mode_dropped());
    }

    #[test]
    fn bracket_power_two_gaussian_oracle() {
        // ⟨D⟩² e^{−|x|²/2} = (1 + n − |x|²) e^{−|x|²/2}
        let grid = GridSpec::new(2, 16.0, 128).unwrap();
        let f = std_gaussian(grid);
        let g = apply_multiplier(&f, &MultiplierKind::BracketPower(2.0)).unwrap();
        let mut max_err = 0.0f64;
        grid.for_each_point(Space::Physical, |flat, x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let expect = (1.0 + 2.0 - r2) * (-r2 / 2.0).exp();
            max_err = max_err.max((g.values()[flat].re - expect).abs());
            max_err = max_err.max(g.values()[flat].im.abs());
        });
        assert!(max_err <= 1e-8, "max error {max_err}");
    }

    #[test]
    fn degree_zero_is_contraction() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let f = random_field(grid, 2);
        let g = apply_multiplier(&f, &riesz_q()).unwrap();
        assert!(g.zero_mode_dropped());
        assert!(g.l2_norm() <= f.l2_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn negative_power_drops_zero_mode() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let f = std_gaussian(grid);
        let g = apply_multiplier(&f, &MultiplierKind::HomogeneousPower(-0.5)).unwrap();
        assert!(g.zero_mode_dropped());
    }

    #[test]
    fn composition_law() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let f = std_gaussian(grid);
        let (s, t) = (0.7, 1.3);
        let two_step = apply_multiplier(
            &apply_multiplier(&f, &MultiplierKind::HomogeneousPower(s)).unwrap(),
            &MultiplierKind::HomogeneousPower(t),
        )
        .unwrap();
        let one_step = apply_multiplier(&f, &MultiplierKind::HomogeneousPower(s + t)).unwrap();
        let diff = two_step.sub(&one_step).unwrap().l2_norm() / one_step.l2_norm();
        assert!(diff <= 1e-11, "composition residual {diff}");
    }

    #[test]
    fn self_adjoint_for_real_symbol() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let f = random_field(grid, 3);
        let g = random_field(grid, 4);
        for kind in [
            MultiplierKind::BracketPower(0.5),
            MultiplierKind::HomogeneousPower(1.0),
        ] {
            let lhs = apply_multiplier(&f, &kind).unwrap().inner(&g).unwrap();
            let rhs = f.inner(&apply_multiplier(&g, &kind).unwrap()).unwrap();
            assert!((lhs - rhs).norm() / lhs.norm() <= 1e-12);
        }
    }

    #[test]
    fn splitting_identity_exact() {
        // b₁(ξ) + |ξ|^{m−1} b₂(ξ) = ⟨ξ⟩^{m−1} at every lattice point
        let grid = GridSpec::new(2, 8.0, 64).unwrap();
        let m = 1.5;
        let (b1, b2) = (b1_kind(m), b2_kind(m));
        let mut max_err = 0.0f64;
        grid.for_each_point(Space::Frequency, |_, xi| {
            let r2: f64 = xi.iter().map(|x| x * x).sum();
            let lhs = match (&b1, &b2) {
                (MultiplierKind::ScalarFunction(f1), MultiplierKind::ScalarFunction(f2)) => {
                    f1(xi).re + r2.sqrt().powf(m - 1.0) * f2(xi).re
                }
                _ => unreachable!(),
            };
            let rhs = (1.0 + r2).powf((m - 1.0) / 2.0);
            max_err = max_err.max((lhs - rhs).abs());
        });
        assert!(max_err == 0.0 || max_err <= 1e-15, "splitting residual {max_err}");
    }

    #[test]
    fn stein_weiss_identity_case() {
        let grid = GridSpec::new(2, 12.0, 64).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let f = std_gaussian(grid);
        let r = stein_weiss_ratio(&f, &spec, 0.0, 0.0, 0.0).unwrap();
        assert!((r - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn stein_weiss_special_case_bounded() {
        // pure output-weight case: beta in [0, n/2), alpha = beta, gamma = 0
        let grid = GridSpec::new(2, 16.0, 128).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let mut sup = 0.0f64;
        for lam in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let f = gaussian_field(grid, lam, &[0.0, 0.0], &[0.0, 0.0]);
            let r = stein_weiss_ratio(&f, &spec, 0.75, 0.75, 0.0).unwrap();
            assert!(r.is_finite());
            sup = sup.max(r);
        }
        assert!(sup < 1e3, "family sup {sup}");
    }

    #[test]
    fn stein_weiss_refinement_stable() {
        // a translated Gaussian keeps the |x|^{-1} singularity away from the
        // bulk of f, so the lattice ratio settles quickly
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let mut vals = Vec::new();
        for n in [64usize, 128] {
            let grid = GridSpec::new(2, 10.0, n).unwrap();
            let f = gaussian_field(grid, 1.0, &[2.5, 0.0], &[0.0, 0.0]);
            vals.push(stein_weiss_ratio(&f, &spec, 1.0, 0.5, 0.5).unwrap());
        }
        let delta = (vals[1] - vals[0]).abs() / vals[1];
        assert!(delta <= 0.05, "refinement delta {delta} ({vals:?})");
    }

    #[test]
    fn stein_weiss_hypothesis_gating() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let f = std_gaussian(grid);
        assert!(stein_weiss_ratio(&f, &spec, 2.0, 1.0, 1.0).is_err());
        assert!(stein_weiss_ratio(&f, &spec, 1.0, 1.5, -0.5).is_err());
        assert!(stein_weiss_ratio(&f, &spec, 1.0, 0.4, 0.4).is_err());
        let zero = Field::zeros(grid, Space::Physical);
        assert!(stein_weiss_ratio(&zero, &spec, 0.5, 0.25, 0.25).is_err());
    }

    #[test]
    fn commutator_with_constant_symbol_vanishes() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let f = std_gaussian(grid);
        let one = MultiplierKind::ScalarFunction(Arc::new(|_: &[f64]| Complex64::new(1.0, 0.0)));
        let c = weight_commutator_apply(&f, 0.6, &one).unwrap();
        assert!(c.l2_norm() <= 1e-13);
    }

    #[test]
    fn weight_commutator_bounded_over_family() {
        let grid = GridSpec::new(2, 16.0, 128).unwrap();
        let mut sup = 0.0f64;
        for lam in [0.5, 1.0, 2.0] {
            let f = gaussian_field(grid, lam, &[0.0, 0.0], &[0.0, 0.0]);
            let c = weight_commutator_apply(&f, 0.6, &riesz_q()).unwrap();
            let denom = weighted_norm(&f, 0.6, WeightKind::PurePower);
            let ratio = c.l2_norm() / denom;
            assert!(ratio.is_finite());
            sup = sup.max(ratio);
        }
        assert!(sup < 1e2, "family sup {sup}");
    }

    #[test]
    fn weight_commutator_matches_direct_summation() {
        // independent O(N²) realization of q(D) at small N
        let grid = GridSpec::new(1, 6.0, 16).unwrap();
        let f = random_field(grid, 6);
        let q = MultiplierKind::DegreeZero(Arc::new(|xi: &[f64]| xi[0].signum()));
        let fast = weight_commutator_apply(&f, 0.5, &q).unwrap();
        // dense path: q(D)g via explicit double sum over the lattice
        let n = grid.points_per_axis();
        let apply_dense = |g: &Field| -> Vec<Complex64> {
            let mut ghat = vec![Complex64::new(0.0, 0.0); n];
            for (k, gh) in ghat.iter_mut().enumerate() {
                let xi = grid.xi_coord(k);
                for j in 0..n {
                    let x = grid.x_coord(j);
                    *gh += g.values()[j] * Complex64::from_polar(1.0, -x * xi);
                }
                *gh *= grid.dx() / (crate::grid::TWO_PI).sqrt();
                if xi == 0.0 {
                    *gh = Complex64::new(0.0, 0.0);
                } else {
                    *gh *= xi.signum();
                }
            }
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (j, o) in out.iter_mut().enumerate() {
                let x = grid.x_coord(j);
                for (k, gh) in ghat.iter().enumerate() {
                    let xi = grid.xi_coord(k);
                    *o += gh * Complex64::from_polar(1.0, x * xi);
                }
                *o *= grid.dxi() / (crate::grid::TWO_PI).sqrt();
            }
            out
        };
        let qf = apply_dense(&f);
        let wf = apply_weight(&f, 0.5, WeightKind::PurePower);
        let qwf = apply_dense(&wf);
        let mut max_err = 0.0f64;
        for j in 0..n {
            let x = grid.x_coord(j).abs();
            let dense = x.sqrt() * qf[j] - qwf[j];
            max_err = max_err.max((fast.values()[j] - dense).norm());
        }
        assert!(max_err <= 1e-10, "dense oracle mismatch {max_err}");
    }

    #[test]
    fn weight_commutator_hypothesis_gating() {
        let grid2 = GridSpec::new(2, 8.0, 32).unwrap();
        let f2 = std_gaussian(grid2);
        let err = weight_commutator_apply(&f2, 1.0, &riesz_q()).unwrap_err();
        assert!(err.to_string().contains("0 < delta < 1"));
        let grid3 = GridSpec::new(3, 6.0, 16).unwrap();
        let f3 = std_gaussian(grid3);
        assert!(weight_commutator_apply(&f3, 1.0, &riesz_q()).is_ok());
        let err3 = weight_commutator_apply(&f3, 1.5, &riesz_q()).unwrap_err();
        assert!(err3.to_string().contains("0 < delta <= 1"));
    }

    #[test]
    fn freq_commutator_bounded_over_family() {
        let grid = GridSpec::new(2, 16.0, 128).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let mut sup = 0.0f64;
        for lam in [0.5, 1.0, 2.0] {
            let f = gaussian_field(grid, lam, &[0.0, 0.0], &[0.0, 0.0]);
            let r = freq_commutator_ratio(&f, &spec, 0.5).unwrap();
            assert!(r.is_finite());
            sup = sup.max(r);
        }
        assert!(sup < 1e2, "family sup {sup}");
    }

    #[test]
    fn freq_commutator_hypothesis_gating() {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let spec = SymbolSpec::euclid(2, 2.0).unwrap();
        let f = std_gaussian(grid);
        let err = freq_commutator_ratio(&f, &spec, 1.2).unwrap_err();
        assert!(err.to_string().contains("0 < kappa < 1"));
        let zero = Field::zeros(grid, Space::Physical);
        assert!(freq_commutator_ratio(&zero, &spec, 0.5).is_err());
    }

    #[test]
    fn chi_cutoff_support() {
        assert_eq!(chi_cutoff(0.5), 1.0);
        assert_eq!(chi_cutoff(1.0), 1.0);
        assert_eq!(chi_cutoff(2.0), 0.0);
        assert_eq!(chi_cutoff(3.0), 0.0);
        let mid = chi_cutoff(1.5);
        assert!(mid > 0.0 && mid < 1.0);
    }
}
