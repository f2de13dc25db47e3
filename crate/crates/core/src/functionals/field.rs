use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{fft_inplace, ifft_inplace, is_nyquist, mode};

/// Real grid function X(y, φ) on [0, L) × [0, 2π)^k.
///
/// Samples are stored with y outermost and φ components in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacroField {
    pub ny: usize,
    pub length: f64,
    pub phase_dims: usize,
    pub nphi: usize,
    pub values: Vec<f64>,
    pub companion: Option<Vec<f64>>,
}

/// Shift (δ, θ) of the discrete difference operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftSpec {
    pub delta: f64,
    pub theta: Vec<f64>,
}

impl ShiftSpec {
    pub fn new(delta: f64, theta: Vec<f64>) -> Self {
        ShiftSpec { delta, theta }
    }

    pub fn space(delta: f64) -> Self {
        ShiftSpec { delta, theta: Vec::new() }
    }
}

/// Forward, backward or central-second difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftKind {
    Fwd,
    Bwd,
    Laplace,
}

impl MacroField {
    pub fn new(ny: usize, length: f64, phase_dims: usize, nphi: usize, values: Vec<f64>) -> Result<Self> {
        let f = MacroField { ny, length, phase_dims, nphi, values, companion: None };
        f.validate()?;
        Ok(f)
    }

    pub fn zeros(ny: usize, length: f64, phase_dims: usize, nphi: usize) -> Result<Self> {
        let n = ny * nphi.pow(phase_dims as u32);
        Self::new(ny, length, phase_dims, nphi, vec![0.0; n])
    }

    /// Builds a field from a function of (y, φ).
    pub fn from_fn<F: Fn(f64, &[f64]) -> f64>(
        ny: usize,
        length: f64,
        phase_dims: usize,
        nphi: usize,
        f: F,
    ) -> Result<Self> {
        let mut out = Self::zeros(ny, length, phase_dims, nphi)?;
        let np = out.phase_points();
        let mut phi = vec![0.0; phase_dims];
        for iy in 0..ny {
            let y = length * iy as f64 / ny as f64;
            for ip in 0..np {
                let mut r = ip;
                for d in (0..phase_dims).rev() {
                    phi[d] = TAU * (r % nphi) as f64 / nphi as f64;
                    r /= nphi;
                }
                out.values[iy * np + ip] = f(y, &phi);
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.ny.is_power_of_two() || (self.phase_dims > 0 && !self.nphi.is_power_of_two()) {
            return Err(Error::InvalidParameter(format!(
                "grid sizes must be powers of two (ny = {}, nphi = {})",
                self.ny, self.nphi
            )));
        }
        if self.phase_dims > 2 {
            return Err(Error::InvalidParameter(format!("phase_dims = {} > 2", self.phase_dims)));
        }
        if !(self.length > 0.0) {
            return Err(Error::InvalidParameter(format!("box length {} must be positive", self.length)));
        }
        if self.values.len() != self.len() {
            return Err(Error::ShapeMismatch(format!("expected {} samples, got {}", self.len(), self.values.len())));
        }
        if let Some(c) = &self.companion {
            if c.len() != self.len() {
                return Err(Error::ShapeMismatch("companion differs in shape".into()));
            }
        }
        Ok(())
    }

    pub fn phase_points(&self) -> usize {
        self.nphi.pow(self.phase_dims as u32)
    }

    pub fn len(&self) -> usize {
        self.ny * self.phase_points()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn shape(&self) -> Vec<usize> {
        let mut s = vec![self.ny];
        s.extend(std::iter::repeat(self.nphi).take(self.phase_dims));
        s
    }

    pub fn same_shape(&self, other: &MacroField) -> bool {
        self.ny == other.ny && self.phase_dims == other.phase_dims && (self.phase_dims == 0 || self.nphi == other.nphi)
    }

    pub fn check_same_shape(&self, other: &MacroField) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape(), other.shape())))
        }
    }

    pub fn with_values(&self, values: Vec<f64>) -> MacroField {
        MacroField { values, companion: None, ..self.clone() }
    }

    /// Volume element of the rectangle rule.
    pub fn cell_volume(&self) -> f64 {
        let dphi = TAU / self.nphi as f64;
        self.length / self.ny as f64 * dphi.powi(self.phase_dims as i32)
    }

    pub fn integrate_values(&self, v: &[f64]) -> f64 {
        v.iter().sum::<f64>() * self.cell_volume()
    }

    pub fn integral(&self) -> f64 {
        self.integrate_values(&self.values)
    }

    pub fn inner(&self, other: &MacroField) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>() * self.cell_volume()
    }

    pub fn scale(&self, s: f64) -> MacroField {
        self.with_values(self.values.iter().map(|v| v * s).collect())
    }

    pub fn add(&self, other: &MacroField) -> MacroField {
        self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &MacroField) -> MacroField {
        self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect())
    }

    pub fn axpy(&self, s: f64, other: &MacroField) -> MacroField {
        self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a + s * b).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Applies the Fourier multiplier `sym(k_y, m)` and keeps the real part;
    /// `m` holds the integer phase wavenumbers, `nyq` flags Nyquist modes.
    pub fn apply_symbol<F>(&self, sym: F) -> MacroField
    where
        F: Fn(f64, &[i64], bool) -> Complex64,
    {
        let shape = self.shape();
        let mut data: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fftn(&mut data, &shape, false);
        let np = self.phase_points();
        let mut m = vec![0i64; self.phase_dims];
        for iy in 0..self.ny {
            let ky = TAU * mode(iy, self.ny) as f64 / self.length;
            for ip in 0..np {
                let mut r = ip;
                let mut nyq = is_nyquist(iy, self.ny);
                for d in (0..self.phase_dims).rev() {
                    let i = r % self.nphi;
                    m[d] = mode(i, self.nphi);
                    nyq |= is_nyquist(i, self.nphi);
                    r /= self.nphi;
                }
                data[iy * np + ip] *= sym(ky, &m, nyq);
            }
        }
        fftn(&mut data, &shape, true);
        self.with_values(data.into_iter().map(|z| z.re).collect())
    }

    /// ∂_y, spectrally.
    pub fn dy(&self) -> MacroField {
        self.apply_symbol(|k, _, nyq| if nyq { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, k) })
    }

    /// ∂_y^n, spectrally.
    pub fn dy_n(&self, n: u32) -> MacroField {
        self.apply_symbol(move |k, _, nyq| {
            if nyq && n % 2 == 1 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, k).powu(n)
            }
        })
    }

    /// Directional phase derivative w·∂_φ.
    pub fn dphi_dir(&self, w: &[f64]) -> MacroField {
        self.apply_symbol(|_, m, nyq| {
            if nyq {
                return Complex64::new(0.0, 0.0);
            }
            let s: f64 = m.iter().zip(w).map(|(&mi, wi)| mi as f64 * wi).sum();
            Complex64::new(0.0, s)
        })
    }

    /// X(y + δ, φ + θ).
    pub fn shifted(&self, s: &ShiftSpec) -> MacroField {
        self.apply_symbol(|k, m, _| {
            let ph: f64 = k * s.delta + m.iter().zip(&s.theta).map(|(&mi, t)| mi as f64 * t).sum::<f64>();
            Complex64::from_polar(1.0, ph)
        })
    }

    /// Keeps modes with |m_y| ≤ ny/3 and |m_φ| ≤ nphi/3.
    pub fn dealiased(&self) -> MacroField {
        let (ny, nphi) = (self.ny, self.nphi);
        let ycut = (ny / 3) as f64 * TAU / self.length * (1.0 + 1e-12);
        let pcut = (nphi / 3) as i64;
        self.apply_symbol(move |k, m, _| {
            if k.abs() > ycut || m.iter().any(|&mi| mi.abs() > pcut) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
    }

    /// Trigonometric resampling to a finer or coarser grid.
    pub fn resampled(&self, ny: usize, nphi: usize) -> Result<MacroField> {
        let mut data: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let shape = self.shape();
        fftn(&mut data, &shape, false);
        let mut out = MacroField::zeros(ny, self.length, self.phase_dims, nphi)?;
        let new_shape = out.shape();
        let mut odata = vec![Complex64::new(0.0, 0.0); out.len()];
        for (flat, z) in data.iter().enumerate() {
            let mut idx = vec![0usize; shape.len()];
            let mut r = flat;
            for d in (0..shape.len()).rev() {
                idx[d] = r % shape[d];
                r /= shape[d];
            }
            let mut target = 0usize;
            let mut keep = true;
            for d in 0..shape.len() {
                let m = mode(idx[d], shape[d]);
                let lim = shape[d].min(new_shape[d]) as i64;
                if 2 * m.abs() >= lim {
                    keep = false;
                    break;
                }
                target = target * new_shape[d] + m.rem_euclid(new_shape[d] as i64) as usize;
            }
            if keep {
                odata[target] = *z;
            }
        }
        let s = out.len() as f64 / self.len() as f64;
        for z in odata.iter_mut() {
            *z *= s;
        }
        fftn(&mut odata, &new_shape, true);
        out.values = odata.into_iter().map(|z| z.re).collect();
        Ok(out)
    }
}

/// Discrete differences ∇⁺, ∇⁻ and △ = ∇⁺ − ∇⁻, realised spectrally.
pub fn shift_op(f: &MacroField, s: &ShiftSpec, which: ShiftKind) -> Result<MacroField> {
    if s.theta.len() != f.phase_dims {
        return Err(Error::ShapeMismatch(format!(
            "shift has {} phase components, field has {}",
            s.theta.len(),
            f.phase_dims
        )));
    }
    Ok(f.apply_symbol(|k, m, _| {
        let ph: f64 = k * s.delta + m.iter().zip(&s.theta).map(|(&mi, t)| mi as f64 * t).sum::<f64>();
        let e = Complex64::from_polar(1.0, ph);
        match which {
            ShiftKind::Fwd => e - 1.0,
            ShiftKind::Bwd => 1.0 - e.conj(),
            ShiftKind::Laplace => e + e.conj() - 2.0,
        }
    }))
}

/// In-place n-dimensional FFT (inverse normalised).
pub fn fftn(data: &mut [Complex64], shape: &[usize], inverse: bool) {
    let total: usize = shape.iter().product();
    debug_assert_eq!(total, data.len());
    let mut stride = total;
    for &len in shape {
        stride /= len;
        if len <= 1 {
            continue;
        }
        let block = len * stride;
        let mut line = vec![Complex64::new(0.0, 0.0); len];
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (i, z) in line.iter_mut().enumerate() {
                    *z = data[base + i * stride];
                }
                if inverse {
                    ifft_inplace(&mut line);
                } else {
                    fft_inplace(&mut line);
                }
                for (i, z) in line.iter().enumerate() {
                    data[base + i * stride] = *z;
                }
            }
        }
    }
}
