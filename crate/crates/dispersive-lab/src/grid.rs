//! Truncated uniform discretization of ℝⁿ and the discrete realization of
//! the unitary Fourier transform with the `(2π)^{-n/2}` convention.
//!
//! The physical box is `[-L, L)ⁿ` with `N` points per axis,
//! `x_j = -L + j·(2L/N)`.  The dual lattice is `ξ_k = k·π/L` for
//! `k ∈ {-N/2, …, N/2-1}`, stored in the same row-major order.  With these
//! conventions the forward and inverse transforms are exact inverses on the
//! lattice and Plancherel holds to rounding error.

use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{LabError, Result};

pub const TWO_PI: f64 = std::f64::consts::TAU;

/// Physical or frequency side of a `Field`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Physical,
    Frequency,
}

/// Uniform lattice on `[-L, L)ⁿ` with its dual frequency lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    dimension: usize,
    half_width: f64,
    points_per_axis: usize,
}

impl GridSpec {
    pub fn new(dimension: usize, half_width: f64, points_per_axis: usize) -> Result<Self> {
        if !(1..=3).contains(&dimension) {
            return Err(LabError::usage("dimension must be 1, 2 or 3"));
        }
        if half_width <= 0.0 {
            return Err(LabError::usage("half_width must be positive"));
        }
        if points_per_axis < 2 || points_per_axis % 2 != 0 {
            return Err(LabError::usage("points_per_axis must be even and >= 2"));
        }
        Ok(GridSpec {
            dimension,
            half_width,
            points_per_axis,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Δx = 2L/N.
    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    /// Δξ = π/L.
    pub fn dxi(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    /// Largest representable frequency πN/(2L) per axis.
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI * self.points_per_axis as f64 / (2.0 * self.half_width)
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dimension as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical coordinate along one axis.
    pub fn x_coord(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    /// Frequency coordinate along one axis (lattice order).
    pub fn xi_coord(&self, i: usize) -> f64 {
        (i as f64 - self.points_per_axis as f64 / 2.0) * self.dxi()
    }

    pub fn x_axis(&self) -> Vec<f64> {
        (0..self.points_per_axis).map(|j| self.x_coord(j)).collect()
    }

    pub fn xi_axis(&self) -> Vec<f64> {
        (0..self.points_per_axis).map(|i| self.xi_coord(i)).collect()
    }

    /// Row-major flat index -> per-axis indices.
    pub fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        let n = self.points_per_axis;
        for d in (0..self.dimension).rev() {
            out[d] = flat % n;
            flat /= n;
        }
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        let n = self.points_per_axis;
        idx.iter().fold(0usize, |acc, &i| acc * n + i)
    }

    /// Visits every lattice point with its coordinates (physical or frequency).
    pub fn for_each_point<F: FnMut(usize, &[f64])>(&self, space: Space, mut f: F) {
        let axis = match space {
            Space::Physical => self.x_axis(),
            Space::Frequency => self.xi_axis(),
        };
        let mut idx = [0usize; 3];
        let mut coords = [0f64; 3];
        for flat in 0..self.len() {
            self.unravel(flat, &mut idx[..self.dimension]);
            for d in 0..self.dimension {
                coords[d] = axis[idx[d]];
            }
            f(flat, &coords[..self.dimension]);
        }
    }

    /// Quadrature weight of a single lattice cell on the given side.
    pub fn cell_measure(&self, space: Space) -> f64 {
        match space {
            Space::Physical => self.dx().powi(self.dimension as i32),
            Space::Frequency => self.dxi().powi(self.dimension as i32),
        }
    }

    /// Flat index of the origin (x = 0 or ξ = 0; N even puts it on the lattice).
    pub fn origin_index(&self) -> usize {
        let half = self.points_per_axis / 2;
        let mut idx = [0usize; 3];
        for d in 0..self.dimension {
            idx[d] = half;
        }
        self.ravel(&idx[..self.dimension])
    }
}

/// Complex samples on a grid, tagged physical or frequency.
#[derive(Clone, Debug)]
pub struct Field {
    grid: GridSpec,
    space: Space,
    values: Vec<Complex64>,
    /// Set when a singular multiplier annihilated the zero mode.
    zero_mode_dropped: bool,
}

impl Field {
    pub fn new(grid: GridSpec, space: Space, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::usage(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Field {
            grid,
            space,
            values,
            zero_mode_dropped: false,
        })
    }

    pub fn zeros(grid: GridSpec, space: Space) -> Self {
        Field {
            grid,
            space,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            zero_mode_dropped: false,
        }
    }

    /// Samples a scalar function on the lattice.
    pub fn from_fn(grid: GridSpec, space: Space, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        grid.for_each_point(space, |flat, coords| {
            values[flat] = f(coords);
        });
        Field {
            grid,
            space,
            values,
            zero_mode_dropped: false,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn zero_mode_dropped(&self) -> bool {
        self.zero_mode_dropped
    }

    pub(crate) fn set_zero_mode_dropped(&mut self, flag: bool) {
        self.zero_mode_dropped = flag;
    }

    /// Lattice-weighted L² norm.
    pub fn l2_norm(&self) -> f64 {
        let w = self.grid.cell_measure(self.space);
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * w).sqrt()
    }

    /// Lattice inner product `(f, g) = Σ f ḡ · w`, linear in `f`.
    pub fn inner(&self, other: &Field) -> Result<Complex64> {
        self.check_compatible(other)?;
        let w = self.grid.cell_measure(self.space);
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            * w)
    }

    pub fn scaled(&self, c: Complex64) -> Field {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            *a -= b;
        }
        Ok(out)
    }

    /// Pointwise multiplication by a function of the lattice coordinates.
    pub fn map_with_coords(&self, f: impl Fn(&[f64], Complex64) -> Complex64) -> Field {
        let mut out = self.clone();
        self.grid.for_each_point(self.space, |flat, coords| {
            out.values[flat] = f(coords, self.values[flat]);
        });
        out
    }

    /// Largest |value| on the boundary faces of the box (tail indicator).
    pub fn boundary_max(&self) -> f64 {
        let n = self.grid.points_per_axis;
        let mut idx = [0usize; 3];
        let mut max = 0.0f64;
        for flat in 0..self.grid.len() {
            self.grid.unravel(flat, &mut idx[..self.grid.dimension]);
            let on_boundary = idx[..self.grid.dimension]
                .iter()
                .any(|&i| i == 0 || i == n - 1);
            if on_boundary {
                max = max.max(self.values[flat].norm());
            }
        }
        max
    }

    fn check_compatible(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid || self.space != other.space {
            return Err(LabError::usage("fields live on different grids or spaces"));
        }
        Ok(())
    }

    // ---- binary container ----------------------------------------------

    /// Writes the flat binary container: header (n, L, N, space tag; 8 bytes
    /// each, little-endian) followed by interleaved re/im f64 in row-major
    /// lattice order.
    pub fn write_binary<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(&(self.grid.dimension as u64).to_le_bytes())?;
        w.write_all(&self.grid.half_width.to_le_bytes())?;
        w.write_all(&(self.grid.points_per_axis as u64).to_le_bytes())?;
        let tag: u64 = match self.space {
            Space::Physical => 0,
            Space::Frequency => 1,
        };
        w.write_all(&tag.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(r: &mut R) -> Result<Field> {
        let mut buf = [0u8; 8];
        r.read_exact(&mut buf)?;
        let dim = u64::from_le_bytes(buf) as usize;
        r.read_exact(&mut buf)?;
        let half_width = f64::from_le_bytes(buf);
        r.read_exact(&mut buf)?;
        let n = u64::from_le_bytes(buf) as usize;
        r.read_exact(&mut buf)?;
        let space = match u64::from_le_bytes(buf) {
            0 => Space::Physical,
            1 => Space::Frequency,
            t => return Err(LabError::usage(format!("unknown space tag {t}"))),
        };
        let grid = GridSpec::new(dim, half_width, n)?;
        let mut values = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            r.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf);
            r.read_exact(&mut buf)?;
            let im = f64::from_le_bytes(buf);
            values.push(Complex64::new(re, im));
        }
        Field::new(grid, space, values)
    }
}

// ---- discrete Fourier transform ----------------------------------------

/// Applies an FFT of the given direction along every axis of a row-major
/// n-dimensional array.
fn fft_all_axes(values: &mut [Complex64], dim: usize, n: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let total = values.len();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..dim {
        // stride between consecutive elements along `axis`
        let stride = n.pow((dim - 1 - axis) as u32);
        let lines = total / n;
        for l in 0..lines {
            // base index of line `l`: split the non-axis indices around the axis
            let block = stride * n;
            let outer = l / stride;
            let inner = l % stride;
            let base = outer * block + inner;
            for (t, slot) in line.iter_mut().enumerate() {
                *slot = values[base + t * stride];
            }
            fft.process(&mut line);
            for (t, slot) in line.iter().enumerate() {
                values[base + t * stride] = *slot;
            }
        }
    }
}

/// Parity of the sum of per-axis indices (used for the ±L offset phases).
fn parity_sign(grid: &GridSpec, flat: usize) -> f64 {
    let n = grid.points_per_axis();
    let mut rest = flat;
    let mut sum = 0usize;
    for _ in 0..grid.dimension() {
        sum += rest % n;
        rest /= n;
    }
    if sum % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Discrete realization of `f̂(ξ) = (2π)^{-n/2} ∫ e^{-ix·ξ} f(x) dx`.
pub fn forward_ft(f: &Field) -> Result<Field> {
    if f.space() != Space::Physical {
        return Err(LabError::usage("forward_ft expects a physical-space field"));
    }
    let grid = *f.grid();
    let n = grid.points_per_axis();
    let dim = grid.dimension();
    let mut values = f.values().to_vec();
    for (flat, v) in values.iter_mut().enumerate() {
        *v *= parity_sign(&grid, flat);
    }
    fft_all_axes(&mut values, dim, n, false);
    let scale = grid.dx().powi(dim as i32) / TWO_PI.powf(dim as f64 / 2.0);
    // post phase (-1)^{Σ(i - N/2)} = (-1)^{Σi} · (-1)^{dim·N/2}
    let base = if (dim * (n / 2)) % 2 == 0 { 1.0 } else { -1.0 };
    for (flat, v) in values.iter_mut().enumerate() {
        *v *= scale * base * parity_sign(&grid, flat);
    }
    Field::new(grid, Space::Frequency, values)
}

/// Inverse of `forward_ft`; exact on the lattice.
pub fn inverse_ft(f: &Field) -> Result<Field> {
    if f.space() != Space::Frequency {
        return Err(LabError::usage(
            "inverse_ft expects a frequency-space field",
        ));
    }
    let grid = *f.grid();
    let n = grid.points_per_axis();
    let dim = grid.dimension();
    let mut values = f.values().to_vec();
    let base = if (dim * (n / 2)) % 2 == 0 { 1.0 } else { -1.0 };
    for (flat, v) in values.iter_mut().enumerate() {
        *v *= base * parity_sign(&grid, flat);
    }
    fft_all_axes(&mut values, dim, n, true);
    let scale = grid.dxi().powi(dim as i32) / TWO_PI.powf(dim as f64 / 2.0);
    for (flat, v) in values.iter_mut().enumerate() {
        *v *= scale * parity_sign(&grid, flat);
    }
    Field::new(grid, Space::Physical, values)
}

// ---- nonuniform transform ----------------------------------------------

/// Direct-summation quadrature of the continuum transform at arbitrary
/// frequency targets: `(Δx)ⁿ (2π)^{-n/2} Σ_j e^{-i x_j·ξ} f(x_j)`.
pub fn nuft_eval(f: &Field, targets: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    if f.space() != Space::Physical {
        return Err(LabError::usage("nuft_eval expects a physical-space field"));
    }
    let grid = *f.grid();
    let dim = grid.dimension();
    for t in targets {
        if t.len() != dim {
            return Err(LabError::usage("nuft target has wrong dimension"));
        }
    }
    let axis = grid.x_axis();
    let scale = grid.dx().powi(dim as i32) / TWO_PI.powf(dim as f64 / 2.0);
    let values = f.values();
    let n = grid.points_per_axis();
    let out: Vec<Complex64> = targets
        .par_iter()
        .map(|xi| {
            // per-axis phase vectors e^{-i x_j ξ_d}
            let phases: Vec<Vec<Complex64>> = (0..dim)
                .map(|d| {
                    axis.iter()
                        .map(|&x| Complex64::from_polar(1.0, -x * xi[d]))
                        .collect()
                })
                .collect();
            let mut sum = Complex64::new(0.0, 0.0);
            match dim {
                1 => {
                    for j in 0..n {
                        sum += phases[0][j] * values[j];
                    }
                }
                2 => {
                    for j0 in 0..n {
                        let mut inner = Complex64::new(0.0, 0.0);
                        let row = &values[j0 * n..(j0 + 1) * n];
                        for (j1, v) in row.iter().enumerate() {
                            inner += phases[1][j1] * v;
                        }
                        sum += phases[0][j0] * inner;
                    }
                }
                3 => {
                    for j0 in 0..n {
                        let mut mid = Complex64::new(0.0, 0.0);
                        for j1 in 0..n {
                            let mut inner = Complex64::new(0.0, 0.0);
                            let row = &values[(j0 * n + j1) * n..(j0 * n + j1 + 1) * n];
                            for (j2, v) in row.iter().enumerate() {
                                inner += phases[2][j2] * v;
                            }
                            mid += phases[1][j1] * inner;
                        }
                        sum += phases[0][j0] * mid;
                    }
                }
                _ => unreachable!(),
            }
            sum * scale
        })
        .collect();
    Ok(out)
}

// ---- spatial weights ----------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// ⟨x⟩^s = (1+|x|²)^{s/2}
    JapaneseBracket,
    /// |x|^s; for s < 0 the origin cell is excluded from quadrature.
    PurePower,
}

/// Lattice quadrature of `‖⟨x⟩^s f‖₂` or `‖|x|^s f‖₂`.
pub fn weighted_norm(f: &Field, s: f64, kind: WeightKind) -> f64 {
    let w = f.grid().cell_measure(f.space());
    let mut sum = 0.0f64;
    f.grid().for_each_point(f.space(), |flat, coords| {
        let r2: f64 = coords.iter().map(|x| x * x).sum();
        let weight = match kind {
            WeightKind::JapaneseBracket => (1.0 + r2).powf(s / 2.0),
            WeightKind::PurePower => {
                if r2 == 0.0 {
                    if s > 0.0 {
                        0.0
                    } else if s == 0.0 {
                        1.0
                    } else {
                        // origin cell excluded for negative powers
                        0.0
                    }
                } else {
                    r2.powf(s / 2.0)
                }
            }
        };
        sum += weight * weight * f.values()[flat].norm_sqr();
    });
    (sum * w).sqrt()
}

/// Multiplies a physical field by ⟨x⟩^s or |x|^s pointwise.
pub fn apply_weight(f: &Field, s: f64, kind: WeightKind) -> Field {
    f.map_with_coords(|coords, v| {
        let r2: f64 = coords.iter().map(|x| x * x).sum();
        let weight = match kind {
            WeightKind::JapaneseBracket => (1.0 + r2).powf(s / 2.0),
            WeightKind::PurePower => {
                if r2 == 0.0 {
                    if s == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    r2.powf(s / 2.0)
                }
            }
        };
        v * weight
    })
}

/// Unit-L²-norm Gaussian `c·e^{-|λ(x-x₀)|²/2} e^{i ξ₀·x}` sampler used all
/// over the test-function families.
pub fn gaussian_field(
    grid: GridSpec,
    dilation: f64,
    center: &[f64],
    modulation: &[f64],
) -> Field {
    let dim = grid.dimension();
    let norm_const = dilation.powf(dim as f64 / 2.0) / std::f64::consts::PI.powf(dim as f64 / 4.0);
    Field::from_fn(grid, Space::Physical, |x| {
        let mut q = 0.0;
        let mut phase = 0.0;
        for d in 0..dim {
            let y = dilation * (x[d] - center.get(d).copied().unwrap_or(0.0));
            q += y * y;
            phase += modulation.get(d).copied().unwrap_or(0.0) * x[d];
        }
        Complex64::from_polar(norm_const * (-q / 2.0).exp(), phase)
    })
}
