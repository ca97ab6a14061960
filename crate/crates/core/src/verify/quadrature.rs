//! Globally adaptive 15-point Gauss–Kronrod quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_47,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

pub const DEFAULT_ABS_TOL: f64 = 1e-12;
const MAX_PANELS: usize = 20_000;

/// Values an integrand may return.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Integral<T> {
    pub value: T,
    pub error: f64,
    pub panels: usize,
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> Panel<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    let mut abs_sum = fc.magnitude() * WGK[7];
    let mut values = [(T::zero(), T::zero()); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        values[j] = (f1, f2);
        kron = kron + (f1 + f2) * WGK[j];
        abs_sum += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut asc = WGK[7] * (fc - mean).magnitude();
    for j in 0..7 {
        asc += WGK[j] * ((values[j].0 - mean).magnitude() + (values[j].1 - mean).magnitude());
    }
    let asc = asc * half.abs();
    let res_abs = abs_sum * half.abs();
    let mut err = ((kron - gauss) * half).magnitude();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value: kron * half, error: err }
}

/// ∫ f over `[breaks[0], breaks[last]]`, starting from the panels the
/// break points define and bisecting the worst panel until the summed
/// error estimate is below `abs_tol`.
pub fn integrate_with_breaks<T: QuadValue>(f: impl Fn(f64) -> T, breaks: &[f64], abs_tol: f64) -> Result<Integral<T>> {
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] > w[0])) || breaks.iter().any(|b| !b.is_finite()) {
        return Err(Error::usage("quadrature break points must be finite and strictly increasing"));
    }
    let mut heap: BinaryHeap<Panel<T>> = breaks.windows(2).map(|w| kronrod(&f, w[0], w[1])).collect();
    loop {
        let (value, error) = heap.iter().fold((T::zero(), 0.0), |(v, e), p| (v + p.value, e + p.error));
        // rounding floor: the sum cannot be known better than this
        let floor = 100.0 * f64::EPSILON * value.magnitude();
        if error <= abs_tol.max(floor) {
            return Ok(Integral { value, error, panels: heap.len() });
        }
        if heap.len() >= MAX_PANELS {
            return Err(Error::Accuracy(format!(
                "quadrature did not reach {abs_tol:e} (estimate {error:e} after {} panels)",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Accuracy("quadrature panel width reached machine resolution".into()));
        }
        heap.push(kronrod(&f, worst.a, mid));
        heap.push(kronrod(&f, mid, worst.b));
    }
}

pub fn integrate<T: QuadValue>(f: impl Fn(f64) -> T, a: f64, b: f64, abs_tol: f64) -> Result<Integral<T>> {
    integrate_with_breaks(f, &[a, b], abs_tol)
}

/// ⟨f, g⟩ = ∫ conj(f)·g on the given break points, absolute tolerance 1e-12.
pub fn inner_product(f: impl Fn(f64) -> Complex64, g: impl Fn(f64) -> Complex64, breaks: &[f64]) -> Result<Complex64> {
    Ok(integrate_with_breaks(|x| f(x).conj() * g(x), breaks, DEFAULT_ABS_TOL)?.value)
}

/// Real-valued ⟨f, g⟩.
pub fn inner_product_real(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, breaks: &[f64]) -> Result<f64> {
    Ok(integrate_with_breaks(|x| f(x) * g(x), breaks, DEFAULT_ABS_TOL)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact_in_one_panel() {
        let r = integrate(|x: f64| 3.0 * x * x - x + 2.0, -1.0, 2.0, 1e-14).unwrap();
        assert!((r.value - (8.0 + 1.0 - 1.5 + 6.0)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_and_endpoint_singularity() {
        let r = integrate(|x: f64| (-x * x).exp(), 0.0, 12.0, 1e-13).unwrap();
        assert!((r.value - 0.5 * PI.sqrt()).abs() < 1e-13);
        // integrable power singularity at the left edge
        let r = integrate(|x: f64| x.powf(-0.4), 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value - 1.0 / 0.6).abs() < 1e-9);
    }

    #[test]
    fn complex_integrand() {
        let r = integrate(|x: f64| Complex64::new(x.cos(), x.sin()), 0.0, PI, 1e-13).unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn bad_breaks_rejected() {
        assert!(integrate(|x: f64| x, 1.0, 1.0, 1e-12).is_err());
        assert!(integrate_with_breaks(|x: f64| x, &[0.0, 2.0, 1.0], 1e-12).is_err());
    }

    #[test]
    fn oscillatory_integrand_needs_subdivision() {
        let r = integrate(|x: f64| (40.0 * x).sin() * x, 0.0, PI, 1e-12).unwrap();
        assert!((r.value + PI / 40.0).abs() < 1e-12);
        assert!(r.panels > 1);
    }
}
