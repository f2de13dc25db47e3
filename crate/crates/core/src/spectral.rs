//! FFT helpers for periodic grids.

use std::cell::RefCell;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalised forward transform, in place.
pub fn fft_inplace(buf: &mut [Complex64]) {
    if buf.len() <= 1 {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// Inverse transform normalised by 1/n, in place.
pub fn ifft_inplace(buf: &mut [Complex64]) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n));
    plan.process(buf);
    let s = 1.0 / n as f64;
    for z in buf.iter_mut() {
        *z *= s;
    }
}

pub fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

pub fn fft_real(x: &[f64]) -> Vec<Complex64> {
    let mut c = to_complex(x);
    fft_inplace(&mut c);
    c
}

pub fn fft(x: &[Complex64]) -> Vec<Complex64> {
    let mut c = x.to_vec();
    fft_inplace(&mut c);
    c
}

pub fn ifft(x: &[Complex64]) -> Vec<Complex64> {
    let mut c = x.to_vec();
    ifft_inplace(&mut c);
    c
}

pub fn ifft_real(mut c: Vec<Complex64>) -> Vec<f64> {
    ifft_inplace(&mut c);
    c.into_iter().map(|z| z.re).collect()
}

/// Signed mode number of FFT index `i` on `n` points (Nyquist is positive).
pub fn mode(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

pub fn is_nyquist(i: usize, n: usize) -> bool {
    n % 2 == 0 && i == n / 2
}

/// Angular wavenumbers 2πm/L in FFT order.
pub fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    (0..n).map(|i| TAU * mode(i, n) as f64 / length).collect()
}

/// Applies a Fourier multiplier to a complex periodic signal.
pub fn apply_multiplier<F: Fn(usize, f64) -> Complex64>(x: &[Complex64], length: f64, m: F) -> Vec<Complex64> {
    let n = x.len();
    let k = wavenumbers(n, length);
    let mut c = fft(x);
    for (i, z) in c.iter_mut().enumerate() {
        *z *= m(i, k[i]);
    }
    ifft_inplace(&mut c);
    c
}

/// Applies a Fourier multiplier to a real periodic signal and keeps the real part.
pub fn apply_multiplier_real<F: Fn(usize, f64) -> Complex64>(x: &[f64], length: f64, m: F) -> Vec<f64> {
    let n = x.len();
    let k = wavenumbers(n, length);
    let mut c = fft_real(x);
    for (i, z) in c.iter_mut().enumerate() {
        *z *= m(i, k[i]);
    }
    ifft_real(c)
}

fn deriv_symbol(i: usize, n: usize, k: f64, order: u32) -> Complex64 {
    if order % 2 == 1 && is_nyquist(i, n) {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, k).powu(order)
}

/// Spectral derivative of order `order` of a real signal.
pub fn derivative(x: &[f64], length: f64, order: u32) -> Vec<f64> {
    let n = x.len();
    apply_multiplier_real(x, length, |i, k| deriv_symbol(i, n, k, order))
}

/// Spectral derivative of a complex signal.
pub fn derivative_complex(x: &[Complex64], length: f64, order: u32) -> Vec<Complex64> {
    let n = x.len();
    apply_multiplier(x, length, |i, k| deriv_symbol(i, n, k, order))
}

/// f(y + delta) for a real signal.
pub fn shift(x: &[f64], length: f64, delta: f64) -> Vec<f64> {
    apply_multiplier_real(x, length, |_, k| Complex64::from_polar(1.0, k * delta))
}

/// f(y + delta) for a complex signal; the Nyquist mode uses cos(kδ).
pub fn shift_complex(x: &[Complex64], length: f64, delta: f64) -> Vec<Complex64> {
    let n = x.len();
    apply_multiplier(x, length, |i, k| {
        if is_nyquist(i, n) {
            Complex64::new((k * delta).cos(), 0.0)
        } else {
            Complex64::from_polar(1.0, k * delta)
        }
    })
}

/// Mean-zero antiderivative; the mean of `x` is discarded.
pub fn antiderivative(x: &[f64], length: f64) -> Vec<f64> {
    let n = x.len();
    apply_multiplier_real(x, length, |i, k| {
        if i == 0 || is_nyquist(i, n) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -1.0 / k)
        }
    })
}

/// Zeroes every mode with |m| > m_max.
pub fn lowpass_complex(x: &[Complex64], m_max: i64) -> Vec<Complex64> {
    let n = x.len();
    let mut c = fft(x);
    for (i, z) in c.iter_mut().enumerate() {
        if mode(i, n).abs() > m_max {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    ifft_inplace(&mut c);
    c
}

/// 2/3-rule filter for a real signal: keeps |m| ≤ n/3.
pub fn dealias(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let m_max = (n / 3) as i64;
    let mut c = fft_real(x);
    for (i, z) in c.iter_mut().enumerate() {
        if mode(i, n).abs() > m_max {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    ifft_real(c)
}

/// Trigonometric resampling of a complex signal to `n_new` points.
///
/// Modes with |m| < min(n, n_new)/2 are carried over; a Nyquist mode of the
/// shorter grid is split or merged symmetrically.
pub fn resample_complex(x: &[Complex64], n_new: usize) -> Vec<Complex64> {
    let n = x.len();
    if n == n_new {
        return x.to_vec();
    }
    let c = fft(x);
    let mut out = vec![Complex64::new(0.0, 0.0); n_new];
    let n_min = n.min(n_new);
    let half = n_min / 2;
    let idx = |m: i64, len: usize| -> usize { m.rem_euclid(len as i64) as usize };
    for m in -(half as i64)..=(half as i64) {
        let nyq = n_min % 2 == 0 && m.unsigned_abs() as usize == half;
        if nyq {
            continue;
        }
        out[idx(m, n_new)] = c[idx(m, n)];
    }
    if n_min % 2 == 0 {
        let m = half as i64;
        if n < n_new {
            let v = c[idx(m, n)] * 0.5;
            out[idx(m, n_new)] += v;
            out[idx(-m, n_new)] += v;
        } else {
            out[idx(m, n_new)] = c[idx(m, n)] + c[idx(-m, n)];
        }
    }
    let s = n_new as f64 / n as f64;
    for z in out.iter_mut() {
        *z *= s;
    }
    ifft_inplace(&mut out);
    out
}

pub fn resample(x: &[f64], n_new: usize) -> Vec<f64> {
    resample_complex(&to_complex(x), n_new).into_iter().map(|z| z.re).collect()
}

/// Evaluates the trigonometric interpolant of `x` (period `length`) at the
/// points `offset + j·length/n_new`, j = 0..n_new.
pub fn interpolate_shifted_complex(x: &[Complex64], length: f64, offset: f64, n_new: usize) -> Vec<Complex64> {
    resample_complex(&shift_complex(x, length, offset), n_new)
}

pub fn interpolate_shifted(x: &[f64], length: f64, offset: f64, n_new: usize) -> Vec<f64> {
    resample(&shift(x, length, offset), n_new)
}

/// Ratio of the largest modulus among |m| > m_cut to the overall peak modulus.
pub fn tail_ratio(x: &[Complex64], m_cut: i64) -> f64 {
    let n = x.len();
    let c = fft(x);
    let peak = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let tail = c
        .iter()
        .enumerate()
        .filter(|(i, _)| mode(*i, n).abs() > m_cut)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    tail / peak
}

/// Rectangle-rule integral of a periodic real signal.
pub fn integrate(x: &[f64], length: f64) -> f64 {
    x.iter().sum::<f64>() * length / x.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trig(n: usize, length: f64) -> Vec<f64> {
        (0..n)
            .map(|j| {
                let y = length * j as f64 / n as f64;
                (TAU * y / length).sin() + 0.3 * (3.0 * TAU * y / length).cos()
            })
            .collect()
    }

    #[test]
    fn derivative_of_trig() {
        let (n, l) = (32, 5.0);
        let x = trig(n, l);
        let d = derivative(&x, l, 1);
        for (j, v) in d.iter().enumerate() {
            let y = l * j as f64 / n as f64;
            let k = TAU / l;
            let exact = k * (k * y).cos() - 0.9 * k * (3.0 * k * y).sin();
            assert!((v - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_and_antiderivative() {
        let (n, l) = (32, 5.0);
        let x = trig(n, l);
        let s = shift(&x, l, l / n as f64 * 3.0);
        for j in 0..n {
            assert!((s[j] - x[(j + 3) % n]).abs() < 1e-12);
        }
        let a = antiderivative(&derivative(&x, l, 1), l);
        for j in 0..n {
            assert!((a[j] - x[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_roundtrip() {
        let x = trig(32, 1.0);
        let up = resample(&x, 64);
        for j in 0..32 {
            assert!((up[2 * j] - x[j]).abs() < 1e-12);
        }
        let down = resample(&up, 32);
        for j in 0..32 {
            assert!((down[j] - x[j]).abs() < 1e-12);
        }
        let odd = resample(&x, 50);
        let back = resample(&odd, 32);
        for j in 0..32 {
            assert!((back[j] - x[j]).abs() < 1e-12);
        }
    }
}
