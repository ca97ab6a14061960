//! Special functions needed by the closed-form eigenfunctions and
//! coherent-state prefactors: Γ, generalized Laguerre polynomials,
//! confluent hypergeometric ₁F₁, modified Bessel I_ν and odd Hermite
//! polynomials.
//!
//! Everything here is double precision, stateless and reentrant.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const SERIES_RTOL: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 20_000;

/// Largest |x| for which the non-terminating ₁F₁ series is trusted.
pub const KUMMER_SERIES_LIMIT: f64 = 30.0;
/// Largest argument for which the I_ν power series is trusted.
pub const BESSEL_SERIES_LIMIT: f64 = 60.0;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn lanczos_sum(z: f64) -> f64 {
    // z = x - 1
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Γ(x) for real x that is not a non-positive integer.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() || is_nonpositive_integer(x) {
        return Err(Error::domain(format!("gamma has a pole at x = {x}")));
    }
    if x < 0.5 {
        let inner = gamma(1.0 - x)?;
        return Ok(PI / ((PI * x).sin() * inner));
    }
    if x == x.floor() && x <= 171.0 {
        return Ok((2..x as usize).fold(1.0, |acc, k| acc * k as f64));
    }
    let z = x - 1.0;
    let w = z + LANCZOS_G + 0.5;
    // split the power so Γ stays finite up to x ≈ 171
    let half = w.powf(0.5 * (z + 0.5));
    Ok((2.0 * PI).sqrt() * half * (-w).exp() * half * lanczos_sum(z))
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || is_nonpositive_integer(x) {
        return Err(Error::domain(format!("ln_gamma has a pole at x = {x}")));
    }
    if x < 0.5 {
        let inner = ln_gamma(1.0 - x)?;
        return Ok((PI / (PI * x).sin().abs()).ln() - inner);
    }
    let z = x - 1.0;
    let w = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * w.ln() - w + lanczos_sum(z).ln())
}

/// Rising factorial (a)_n.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// Generalized Laguerre polynomial L_n^{(γ)}(x) by the three-term recurrence.
pub fn laguerre(n: usize, gamma: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + gamma - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + gamma - x) * cur - (kf + gamma) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Confluent hypergeometric function ₁F₁(a; c; x).
///
/// A non-positive integer `a` gives a terminating polynomial, evaluated
/// exactly in nested (Horner) form. Otherwise the power series is summed,
/// which is only accepted for |x| ≤ [`KUMMER_SERIES_LIMIT`]; negative
/// arguments go through Kummer's transformation first.
pub fn kummer_1f1(a: f64, c: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::DegenerateParameter(format!("1F1 lower parameter c = {c} is a non-positive integer")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) {
        let n = (-a) as usize;
        let mut acc = 1.0;
        for j in (0..n).rev() {
            let jf = j as f64;
            acc = 1.0 + (a + jf) * x / ((c + jf) * (jf + 1.0)) * acc;
        }
        return Ok(acc);
    }
    if x.abs() > KUMMER_SERIES_LIMIT {
        return Err(Error::Accuracy(format!(
            "1F1({a}, {c}, {x}) is outside the series regime |x| <= {KUMMER_SERIES_LIMIT}"
        )));
    }
    if x < 0.0 {
        return Ok(x.exp() * kummer_series(c - a, c, -x)?);
    }
    kummer_series(a, c, x)
}

fn kummer_series(a: f64, c: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) * x / ((c + kf) * (kf + 1.0));
        term *= ratio;
        sum += term;
        if ratio.abs() < 0.5 && term.abs() <= SERIES_RTOL * sum.abs() {
            return Ok(sum);
        }
        if term == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy(format!("1F1({a}, {c}, {x}) series did not converge")))
}

/// Modified Bessel function of the first kind I_ν(x) by its power series.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if nu <= -1.0 || x < 0.0 || x.is_nan() || nu.is_nan() {
        return Err(Error::domain(format!("bessel_i requires nu > -1, x >= 0 (got nu = {nu}, x = {x})")));
    }
    if x > BESSEL_SERIES_LIMIT {
        return Err(Error::Accuracy(format!(
            "bessel_i argument {x} is outside the series regime x <= {BESSEL_SERIES_LIMIT}"
        )));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    let half = 0.5 * x;
    let q = half * half;
    let mut term =
        if nu + 1.0 < 170.0 { half.powf(nu) / gamma(nu + 1.0)? } else { (nu * half.ln() - ln_gamma(nu + 1.0)?).exp() };
    let mut sum = term;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let ratio = q / ((kf + 1.0) * (kf + nu + 1.0));
        term *= ratio;
        sum += term;
        if ratio < 0.5 && term <= SERIES_RTOL * sum {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy(format!("bessel_i({nu}, {x}) series did not converge")))
}

/// Physicists' Hermite polynomial H_k(x).
pub fn hermite(k: usize, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for j in 1..k {
        let next = 2.0 * x * cur - 2.0 * j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Odd Hermite polynomial H_{2n+1}(x), physicists' convention.
pub fn hermite_odd(n: usize, x: f64) -> f64 {
    hermite(2 * n + 1, x)
}
