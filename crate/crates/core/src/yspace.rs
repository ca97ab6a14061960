//! The constant-mass singular oscillator h = -d²/dy² + y² + g₀/(2y²) on
//! y > 0, together with the linear oscillator it reduces to at g₀ = 0.
//!
//! Energies are in units of ħω₀/2. Eigenfunctions, ladder actions and the
//! Casimir are exact closed forms; the grid operators at the end of the
//! module exist to check those closed forms independently.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{kummer_1f1, ln_gamma};
use crate::verify::grid::{derivative, relative_l2, sup_norm, Grid, GridFunction, EXCLUDED_EDGE_ROWS};

/// Coupling g₀ with the derived labels α (upper root of α² − α − g₀/2 = 0)
/// and κ = (1/2 + α)/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularParams {
    g0: f64,
    alpha: f64,
    kappa: f64,
}

impl SingularParams {
    /// Errors unless g₀ > -1/2, below which there is no infinite point spectrum.
    pub fn new(g0: f64) -> Result<Self> {
        if !(g0 > -0.5) || !g0.is_finite() {
            return Err(Error::domain(format!("g0 = {g0}: no infinite point spectrum unless g0 > -1/2")));
        }
        let alpha = 0.5 + (0.25 + 0.5 * g0).sqrt();
        Ok(Self { g0, alpha, kappa: 0.5 * (0.5 + alpha) })
    }

    pub fn g0(&self) -> f64 {
        self.g0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The second root 1 - α, used only by the Kummer cross-check.
    pub fn alpha_minus(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Laguerre index α - 1/2.
    fn laguerre_index(&self) -> f64 {
        self.alpha - 0.5
    }

    /// E_n = 4n + 2 + √(1 + 2g₀).
    pub fn energy(&self, n: usize) -> f64 {
        4.0 * n as f64 + 2.0 + (1.0 + 2.0 * self.g0).sqrt()
    }

    /// y² + g₀/(2y²).
    pub fn potential(&self, y: f64) -> f64 {
        y * y + self.g0 / (2.0 * y * y)
    }

    /// C = 3/16 - g₀/8.
    pub fn casimir_value(&self) -> f64 {
        3.0 / 16.0 - self.g0 / 8.0
    }

    /// κ(1 - κ), which must equal [`Self::casimir_value`].
    pub fn casimir_from_kappa(&self) -> f64 {
        self.kappa * (1.0 - self.kappa)
    }

    /// c₊φ_n = γ₊(n)φ_{n+1}, γ₊(n) = 4√((n+1)(n+2κ)).
    pub fn gamma_plus(&self, n: usize) -> f64 {
        let n = n as f64;
        4.0 * ((n + 1.0) * (n + 2.0 * self.kappa)).sqrt()
    }

    /// c₋φ_n = γ₋(n)φ_{n-1}, γ₋(n) = 4√(n(n-1+2κ)).
    pub fn gamma_minus(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let n = n as f64;
        4.0 * (n * (n - 1.0 + 2.0 * self.kappa)).sqrt()
    }

    /// At g₀ = 0 the eigenfunctions are the odd linear-oscillator states.
    pub fn is_odd_hermite_branch(&self) -> bool {
        self.g0 == 0.0
    }

    /// Normalized eigenfunction φ_n(y), y > 0.
    pub fn phi_n(&self, n: usize, y: f64) -> Result<f64> {
        Ok(self.phi_all(n, y)?[n])
    }

    /// φ_0(y), ..., φ_nmax(y) in one recurrence pass.
    pub fn phi_all(&self, nmax: usize, y: f64) -> Result<Vec<f64>> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::domain(format!("phi_n needs y > 0, got {y}")));
        }
        if self.is_odd_hermite_branch() {
            let lin = linear_phi_all(2 * nmax + 1, y);
            return Ok((0..=nmax).map(|n| ladder_phase(n) * std::f64::consts::SQRT_2 * lin[2 * n + 1]).collect());
        }
        // √2·y^α e^{-y²/2} times the orthonormal Laguerre polynomial
        // L̃_k = L_k^{(γ)}(y²)·√(k!/Γ(k+γ+1)).
        let g = self.laguerre_index();
        let t = y * y;
        let envelope = (std::f64::consts::LN_2 * 0.5 + self.alpha * y.ln() - 0.5 * t - 0.5 * ln_gamma(g + 1.0)?).exp();
        let mut out = Vec::with_capacity(nmax + 1);
        let mut prev = 0.0;
        let mut cur = 1.0;
        out.push(cur * envelope);
        for k in 0..nmax {
            let kf = k as f64;
            let next =
                ((2.0 * kf + 1.0 + g - t) * cur - (kf * (kf + g)).sqrt() * prev) / ((kf + 1.0) * (kf + g + 1.0)).sqrt();
            prev = cur;
            cur = next;
            out.push(cur * envelope);
        }
        Ok(out)
    }

    /// Fock basis state |n⟩ = (-1)^n φ_n(y), the phase in which
    /// c±|n⟩ = γ±(n)|n±1⟩ with γ± ≥ 0.
    pub fn basis_all(&self, nmax: usize, y: f64) -> Result<Vec<f64>> {
        let mut v = self.phi_all(nmax, y)?;
        for (n, x) in v.iter_mut().enumerate() {
            *x *= ladder_phase(n);
        }
        Ok(v)
    }

    /// λ⁽¹⁾ for which the first Kummer solution at E_n equals φ_n:
    /// (2·n!/Γ(n+α+1/2))^{1/2}·(α+1/2)_n/n!.
    pub fn kummer_normalization(&self, n: usize) -> Result<f64> {
        let g = self.laguerre_index();
        let nf = n as f64;
        Ok((0.5 * std::f64::consts::LN_2 + 0.5 * ln_gamma(nf + g + 1.0)?
            - 0.5 * ln_gamma(nf + 1.0)?
            - ln_gamma(g + 1.0)?)
        .exp())
    }

    /// General solution λ⁽¹⁾y^α e^{-y²/2}₁F₁(a, c, y²) + λ⁽²⁾y^{1-α}e^{-y²/2}₁F₁(ã, c̃, y²)
    /// with 4a = 2α+1-E, 2c = 2α+1, 4ã = 3-2α-E, 2c̃ = 3-2α.
    /// The second branch is only evaluated (and only needs a regular c̃)
    /// when λ⁽²⁾ ≠ 0.
    pub fn kummer_phi(&self, energy: f64, lambda1: f64, lambda2: f64, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::domain(format!("kummer_phi needs y > 0, got {y}")));
        }
        let al = self.alpha;
        let t = y * y;
        let gauss = (-0.5 * t).exp();
        let mut value = 0.0;
        let c = al + 0.5;
        let a = snap_to_nonpositive_integer(0.25 * (2.0 * al + 1.0 - energy));
        let first = kummer_1f1(a, c, t)?;
        if lambda1 != 0.0 {
            value += lambda1 * y.powf(al) * gauss * first;
        }
        if lambda2 != 0.0 {
            let c2 = 1.5 - al;
            let a2 = snap_to_nonpositive_integer(0.25 * (3.0 - 2.0 * al - energy));
            value += lambda2 * y.powf(1.0 - al) * gauss * kummer_1f1(a2, c2, t)?;
        }
        Ok(value)
    }

    /// Smallest Y on a 0.01 lattice beyond the last turning point where
    /// every |φ_n|, n ≤ nmax, has dropped below `threshold`.
    pub fn decay_radius(&self, nmax: usize, threshold: f64) -> Result<f64> {
        let mut y = self.energy(nmax).sqrt().ceil();
        loop {
            let phis = self.phi_all(nmax, y)?;
            if phis.iter().all(|p| p.abs() < threshold) {
                return Ok(y);
            }
            y += 0.01;
            if y > 1e3 {
                return Err(Error::Accuracy("eigenfunctions do not decay below threshold".into()));
            }
        }
    }
}

/// (-1)^n.
pub fn ladder_phase(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Parameters for coupling g₀.
pub fn params_from_g0(g0: f64) -> Result<SingularParams> {
    SingularParams::new(g0)
}

fn snap_to_nonpositive_integer(a: f64) -> f64 {
    let r = a.round();
    if r <= 0.0 && (a - r).abs() <= 1e-12 * (1.0 + r.abs()) {
        r
    } else {
        a
    }
}

/// Linear-oscillator eigenfunction ψ_k(y) of -d²/dy² + y², energy 2k + 1.
pub fn linear_phi(k: usize, y: f64) -> f64 {
    linear_phi_all(k, y)[k]
}

/// ψ_0(y), ..., ψ_kmax(y) by the normalized Hermite-function recurrence.
pub fn linear_phi_all(kmax: usize, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-0.5 * y * y).exp();
    out.push(cur);
    for k in 0..kmax {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Smallest Y on a 0.01 lattice beyond the last turning point where every
/// |ψ_k|, k ≤ kmax, has dropped below `threshold` (for |y| ≥ Y by parity).
pub fn linear_decay_radius(kmax: usize, threshold: f64) -> f64 {
    let mut y = (2.0 * kmax as f64 + 1.0).sqrt().ceil();
    while linear_phi_all(kmax, y).iter().any(|p| p.abs() >= threshold) {
        y += 0.01;
    }
    y
}

/// a₋ψ_k = √(2k)ψ_{k-1}.
pub fn linear_lower_coefficient(k: usize) -> f64 {
    (2.0 * k as f64).sqrt()
}

/// a₊ψ_k = √(2(k+1))ψ_{k+1}.
pub fn linear_raise_coefficient(k: usize) -> f64 {
    (2.0 * (k as f64 + 1.0)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Basis {
    /// Singular-oscillator eigenfunctions φ_n for the given coupling.
    Singular(SingularParams),
    /// Linear-oscillator eigenfunctions ψ_k.
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Raise,
    Lower,
}

/// Finite expansion Σ c_n|n⟩ over an orthonormal eigenbasis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    basis: Basis,
    coeffs: Vec<Complex64>,
}

impl FockVector {
    pub fn new(basis: Basis, coeffs: Vec<Complex64>) -> Self {
        Self { basis, coeffs }
    }

    /// The basis state |n⟩.
    pub fn unit(basis: Basis, n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { basis, coeffs }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self, other⟩, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(Error::usage("inner product between vectors in different bases"));
        }
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum())
    }

    /// self - other, padding the shorter vector with zeros.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::usage("difference between vectors in different bases"));
        }
        let len = self.len().max(other.len());
        let coeffs = (0..len).map(|n| self.coeff(n) - other.coeff(n)).collect();
        Ok(Self { basis: self.basis, coeffs })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { basis: self.basis, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    fn diagonal(&self, f: impl Fn(usize) -> f64) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(n, c)| c * f(n)).collect();
        Self { basis: self.basis, coeffs }
    }

    /// Eigenvalue action of the oscillator Hamiltonian.
    pub fn apply_h(&self) -> Self {
        match self.basis {
            Basis::Singular(p) => self.diagonal(|n| p.energy(n)),
            Basis::Linear => self.diagonal(|k| 2.0 * k as f64 + 1.0),
        }
    }

    /// (1/16)[½{c₋, c₊} - h²] on the singular basis.
    pub fn apply_casimir(&self) -> Result<Self> {
        if !matches!(self.basis, Basis::Singular(_)) {
            return Err(Error::usage("the Casimir operator acts on the singular basis"));
        }
        let lr = apply_ladder(&apply_ladder(self, Direction::Raise), Direction::Lower);
        let rl = apply_ladder(&apply_ladder(self, Direction::Lower), Direction::Raise);
        let hh = self.apply_h().apply_h();
        let coeffs = (0..self.len()).map(|n| (0.5 * (lr.coeff(n) + rl.coeff(n)) - hh.coeff(n)) / 16.0).collect();
        Ok(Self { basis: self.basis, coeffs })
    }
}

/// Exact ladder action in coefficient space: c± on the singular basis,
/// a± on the linear one.
pub fn apply_ladder(v: &FockVector, direction: Direction) -> FockVector {
    let zero = Complex64::new(0.0, 0.0);
    let up = |n: usize| match v.basis {
        Basis::Singular(p) => p.gamma_plus(n),
        Basis::Linear => linear_raise_coefficient(n),
    };
    let down = |n: usize| match v.basis {
        Basis::Singular(p) => p.gamma_minus(n),
        Basis::Linear => linear_lower_coefficient(n),
    };
    let coeffs = match direction {
        Direction::Raise => {
            let mut out = vec![zero; v.len() + 1];
            for (n, c) in v.coeffs.iter().enumerate() {
                out[n + 1] = c * up(n);
            }
            out
        }
        Direction::Lower => {
            let mut out = vec![zero; v.len().saturating_sub(1).max(1)];
            for (n, c) in v.coeffs.iter().enumerate().skip(1) {
                out[n - 1] = c * down(n);
            }
            out
        }
    };
    FockVector { basis: v.basis, coeffs }
}

/// max_n |Casimir eigenvalue on |n⟩ - (3/16 - g₀/8)| for n ≤ nmax.
pub fn casimir_residual(params: &SingularParams, nmax: usize) -> Result<f64> {
    let mut worst = (params.casimir_value() - params.casimir_from_kappa()).abs();
    for n in 0..=nmax {
        let e = FockVector::unit(Basis::Singular(*params), n);
        let c = e.apply_casimir()?.coeff(n);
        worst = worst.max((c - params.casimir_value()).norm());
    }
    Ok(worst)
}

// Grid operators. Every one is built from nested first derivatives so the
// position-dependent-mass operators reduce to them exactly at constant mass.

fn require_positive(f: &GridFunction) -> Result<()> {
    if !(f.grid().min() > 0.0) {
        return Err(Error::domain("y-space operators need a grid with y > 0"));
    }
    Ok(())
}

/// a₋f = f' + y f.
pub fn grid_a_minus(f: &GridFunction) -> Result<GridFunction> {
    let d = derivative(f, 1)?;
    d.zip_with(f, |y, df, v| df + y * v)
}

/// a₊f = -f' + y f.
pub fn grid_a_plus(f: &GridFunction) -> Result<GridFunction> {
    let d = derivative(f, 1)?;
    d.zip_with(f, |y, df, v| -df + y * v)
}

/// h f = -(f')' + (y² + g₀/(2y²)) f.
pub fn apply_h(params: &SingularParams, f: &GridFunction) -> Result<GridFunction> {
    require_positive(f)?;
    let d2 = derivative(&derivative(f, 1)?, 1)?;
    d2.zip_with(f, |y, t, v| -t + params.potential(y) * v)
}

/// c± f = a±² f - g₀/(2y²) f.
pub fn apply_c(params: &SingularParams, f: &GridFunction, direction: Direction) -> Result<GridFunction> {
    require_positive(f)?;
    let step = match direction {
        Direction::Raise => grid_a_plus,
        Direction::Lower => grid_a_minus,
    };
    let aa = step(&step(f)?)?;
    let g0 = params.g0;
    aa.zip_with(f, |y, w, v| w - g0 / (2.0 * y * y) * v)
}

/// Log-clustered grid on [1e-3, Y] with Y the decay radius of φ_0..φ_nmax.
pub fn residual_grid(params: &SingularParams, nmax: usize, points: usize) -> Result<Grid> {
    let y_max = params.decay_radius(nmax, 1e-12)?;
    Grid::log(0.0, 1e-3, y_max, points)
}

pub fn sample_phi(params: &SingularParams, n: usize, grid: Grid) -> Result<GridFunction> {
    GridFunction::try_sample(grid, |y| params.phi_n(n, y))
}

/// ‖hφ_n - E_nφ_n‖₂/‖φ_n‖₂ over interior rows.
pub fn eigen_residual(params: &SingularParams, n: usize, grid: Grid) -> Result<f64> {
    let phi = sample_phi(params, n, grid)?;
    let e = params.energy(n);
    let r = apply_h(params, &phi)?.zip_with(&phi, |_, hv, v| hv - e * v)?;
    Ok(relative_l2(&r, &phi, EXCLUDED_EDGE_ROWS))
}

/// sup|c±|n⟩ - γ±(n)|n±1⟩| / (γ₊(n)·sup|φ_n|) over interior rows, where
/// |n⟩ = (-1)^n φ_n.
pub fn ladder_residual(params: &SingularParams, n: usize, direction: Direction, grid: Grid) -> Result<f64> {
    let phi = sample_phi(params, n, grid)?.scale(ladder_phase(n));
    let applied = apply_c(params, &phi, direction)?;
    let (m, coeff) = match direction {
        Direction::Raise => (n + 1, params.gamma_plus(n)),
        Direction::Lower => (n.saturating_sub(1), params.gamma_minus(n)),
    };
    let target = sample_phi(params, m, grid)?.scale(coeff * ladder_phase(m));
    let r = applied.sub(&target)?;
    let scale = sup_norm(&phi, EXCLUDED_EDGE_ROWS) * params.gamma_plus(n);
    Ok(sup_norm(&r, EXCLUDED_EDGE_ROWS) / scale)
}

/// ‖([c₋, c₊] - 8h)f‖₂ / ‖8hf‖₂ by nested finite differences.
pub fn commutator_residual(params: &SingularParams, f: &GridFunction) -> Result<f64> {
    let lr = apply_c(params, &apply_c(params, f, Direction::Raise)?, Direction::Lower)?;
    let rl = apply_c(params, &apply_c(params, f, Direction::Lower)?, Direction::Raise)?;
    let h8 = apply_h(params, f)?.scale(8.0);
    let r = lr.sub(&rl)?.sub(&h8)?;
    // four nested stencils contaminate 4·2 rows at each edge
    Ok(relative_l2(&r, &h8, 4 * EXCLUDED_EDGE_ROWS))
}

/// Smooth bump supported on (center - width, center + width).
pub fn bump(center: f64, width: f64, y: f64) -> f64 {
    let u = (y - center) / width;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{gamma, hermite_odd, laguerre};
    use crate::verify::quadrature::integrate_with_breaks;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn params_examples() {
        let p = SingularParams::new(0.0).unwrap();
        assert_eq!((p.alpha(), p.kappa()), (1.0, 0.75));
        let p = SingularParams::new(2.0).unwrap();
        // mpmath: (1+√5)/2 and (1/2 + φ)/2
        assert!(close(p.alpha(), 1.618_033_988_749_895, 1e-15));
        assert!(close(p.kappa(), 1.059_016_994_374_947_5, 1e-15));
        let p = SingularParams::new(1.5).unwrap();
        assert_eq!((p.alpha(), p.kappa()), (1.5, 1.0));
        assert!(SingularParams::new(-0.5).is_err());
        assert!(SingularParams::new(f64::NAN).is_err());
    }

    #[test]
    fn energies() {
        let p = SingularParams::new(0.0).unwrap();
        for n in 0..50 {
            assert_eq!(p.energy(n), 4.0 * n as f64 + 3.0);
        }
        let p = SingularParams::new(2.0).unwrap();
        assert!(close(p.energy(0), 4.236_067_977_499_79, 1e-12));
        for n in 1..30 {
            assert!(close(p.energy(n) - p.energy(n - 1), 4.0, 1e-12));
            assert!(close(p.energy(n), 4.0 * (p.kappa() + n as f64), 1e-12));
        }
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(SingularParams::new(0.0).unwrap().casimir_value(), 3.0 / 16.0);
        let p = SingularParams::new(1.5).unwrap();
        assert_eq!((p.casimir_value(), p.casimir_from_kappa()), (0.0, 0.0));
        let p = SingularParams::new(2.0).unwrap();
        assert_eq!(p.casimir_value(), -0.0625);
        assert!(close(p.casimir_from_kappa(), -0.0625, 1e-12));
        for g0 in [-0.3, 0.0, 0.5, 2.0, 3.5, 10.0] {
            let p = SingularParams::new(g0).unwrap();
            assert!(casimir_residual(&p, 40).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn gamma_coefficients() {
        let p = SingularParams::new(2.0).unwrap();
        assert_eq!(p.gamma_minus(0), 0.0);
        // 4√(2κ), mpmath
        assert!(close(p.gamma_plus(0), 5.821_386_760_901_419, 1e-12));
        for g0 in [0.0, 0.5, 2.0] {
            let p = SingularParams::new(g0).unwrap();
            for n in 0..=20 {
                let e = p.energy(n);
                let rhs = e * e + 4.0 * e + 3.0 - 2.0 * g0;
                let lhs = p.gamma_plus(n) * p.gamma_minus(n + 1);
                assert!((lhs - rhs).abs() <= 1e-10 * rhs, "n={n}: {lhs} vs {rhs}");
                let alt = (p.energy(n + 1) * e + 3.0 - 2.0 * g0).sqrt();
                assert!((p.gamma_plus(n) - alt).abs() <= 1e-12 * alt);
            }
        }
    }

    #[test]
    fn ladder_in_coefficient_space() {
        let p = SingularParams::new(2.0).unwrap();
        let b = Basis::Singular(p);
        let e0 = FockVector::unit(b, 0);
        assert_eq!(apply_ladder(&e0, Direction::Lower).norm(), 0.0);
        let up = apply_ladder(&e0, Direction::Raise);
        assert_eq!(up.coeff(1).re, p.gamma_plus(0));
        assert_eq!(up.coeff(0).norm(), 0.0);
        let e2 = FockVector::unit(b, 2);
        let v = apply_ladder(&apply_ladder(&e2, Direction::Raise), Direction::Lower);
        assert_eq!(v.coeff(2).re, p.gamma_plus(2) * p.gamma_minus(3));
        assert_eq!(v.norm(), v.coeff(2).norm());
    }

    #[test]
    fn linear_ladder_examples() {
        let e0 = FockVector::unit(Basis::Linear, 0);
        assert_eq!(apply_ladder(&e0, Direction::Lower).norm(), 0.0);
        let e1 = FockVector::unit(Basis::Linear, 1);
        let v = apply_ladder(&apply_ladder(&e1, Direction::Lower), Direction::Raise);
        assert!(close(v.coeff(1).re, 2.0, 1e-15));
        assert!(FockVector::unit(Basis::Linear, 0).inner(&e0.clone()).is_ok());
        assert!(e0.inner(&FockVector::unit(Basis::Singular(SingularParams::new(1.0).unwrap()), 0)).is_err());
    }

    #[test]
    fn linear_functions_match_hermite_polynomials() {
        for k in 0..12 {
            for y in [-2.3, -0.4, 0.0, 0.9, 3.1] {
                let hk = crate::specfun::hermite(k, y);
                let norm = (2f64.powi(k as i32) * gamma(k as f64 + 1.0).unwrap() * std::f64::consts::PI.sqrt()).sqrt();
                let expect = hk * (-0.5 * y * y).exp() / norm;
                assert!(close(linear_phi(k, y), expect, 1e-13 * (1.0 + expect.abs())), "k={k} y={y}");
            }
        }
    }

    #[test]
    fn linear_orthonormality_by_quadrature() {
        let breaks: Vec<f64> = (0..=16).map(|i| -10.0 + 1.25 * i as f64).collect();
        for k in 0..=8 {
            for j in 0..=k {
                let v = integrate_with_breaks(|y| linear_phi(k, y) * linear_phi(j, y), &breaks, 1e-13).unwrap().value;
                let target = if j == k { 1.0 } else { 0.0 };
                assert!((v - target).abs() < 1e-10, "({k},{j}) {v}");
            }
        }
    }

    #[test]
    fn phi_matches_closed_form_laguerre() {
        let p = SingularParams::new(2.0).unwrap();
        let g = p.alpha() - 0.5;
        for n in 0..8 {
            for y in [0.05f64, 0.6, 1.3, 2.2, 4.0] {
                let nf = n as f64;
                let norm = (2.0 * gamma(nf + 1.0).unwrap() / gamma(p.alpha() + nf + 0.5).unwrap()).sqrt();
                let expect = norm * y.powf(p.alpha()) * (-0.5 * y * y).exp() * laguerre(n, g, y * y);
                let got = p.phi_n(n, y).unwrap();
                assert!(close(got, expect, 1e-12 * (1.0 + expect.abs())), "n={n} y={y}: {got} vs {expect}");
            }
        }
        assert!(p.phi_n(0, 0.0).is_err());
        assert!(p.phi_n(0, -1.0).is_err());
    }

    #[test]
    fn phi_near_origin_scales_like_power() {
        for g0 in [0.5, 2.0] {
            let p = SingularParams::new(g0).unwrap();
            for n in 0..4 {
                let r = p.phi_n(n, 2e-4).unwrap() / p.phi_n(n, 1e-4).unwrap();
                assert!(close(r, 2f64.powf(p.alpha()), 1e-6));
            }
        }
    }

    #[test]
    fn odd_hermite_branch() {
        let p = SingularParams::new(0.0).unwrap();
        for n in 0..6 {
            for y in [0.1, 0.8, 1.9, 3.3] {
                // independent form: polynomial H_{2n+1} with its analytic constant
                let nf = n as f64;
                let c = (4f64.powf(nf) * gamma(2.0 * nf + 2.0).unwrap() * std::f64::consts::PI.sqrt()).sqrt();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let expect = sign * hermite_odd(n, y) * (-0.5 * y * y).exp() / c;
                assert!(close(p.phi_n(n, y).unwrap(), expect, 1e-12), "n={n} y={y}");
            }
        }
        // node of φ_1 at the root of L_1^{(1/2)}(y²) = 3/2 - y²
        let y0 = 1.5f64.sqrt();
        assert!(p.phi_n(1, y0).unwrap().abs() < 1e-14);
        assert!(p.phi_n(1, y0 - 1e-3).unwrap() * p.phi_n(1, y0 + 1e-3).unwrap() < 0.0);
    }

    #[test]
    fn small_coupling_limit() {
        let p0 = SingularParams::new(0.0).unwrap();
        let p = SingularParams::new(1e-8).unwrap();
        for n in 0..=3 {
            let mut worst = 0.0f64;
            for i in 1..=800 {
                let y = i as f64 * 0.01;
                worst = worst.max((p.phi_n(n, y).unwrap() - p0.phi_n(n, y).unwrap()).abs());
            }
            assert!(worst <= 1e-3, "n={n}: {worst}");
        }
    }

    fn gram_defect(p: &SingularParams, nmax: usize) -> f64 {
        let y_max = p.decay_radius(nmax, 1e-12).unwrap();
        let breaks: Vec<f64> = (0..=12).map(|i| y_max * i as f64 / 12.0).collect();
        let mut worst = 0.0f64;
        for n in 0..=nmax {
            for m in 0..=n {
                let v = integrate_with_breaks(
                    |y| {
                        if y > 0.0 {
                            p.phi_n(n, y).unwrap() * p.phi_n(m, y).unwrap()
                        } else {
                            0.0
                        }
                    },
                    &breaks,
                    1e-12,
                )
                .unwrap()
                .value;
                worst = worst.max((v - if n == m { 1.0 } else { 0.0 }).abs());
            }
        }
        worst
    }

    #[test]
    fn orthonormality_by_quadrature() {
        for g0 in [0.0, 0.5, 2.0] {
            let p = SingularParams::new(g0).unwrap();
            let d = gram_defect(&p, 8);
            assert!(d <= 1e-8, "g0={g0}: {d}");
        }
    }

    #[test]
    fn kummer_route_reproduces_phi() {
        for g0 in [0.5, 2.0, 3.5] {
            let p = SingularParams::new(g0).unwrap();
            for n in 0..6 {
                let l1 = p.kummer_normalization(n).unwrap();
                for i in 0..50 {
                    let y = 0.1 + 4.9 * i as f64 / 49.0;
                    let k = p.kummer_phi(p.energy(n), l1, 0.0, y).unwrap();
                    let f = p.phi_n(n, y).unwrap();
                    assert!((k - f).abs() <= 1e-9 * f.abs().max(1e-3), "g0={g0} n={n} y={y}: {k} vs {f}");
                }
            }
        }
        let p = SingularParams::new(2.0).unwrap();
        assert_eq!(p.kummer_phi(7.0, 0.0, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn second_kummer_branch_gives_the_same_physics() {
        // with α₋ = 1 - α the second solution at E_n is again φ_n up to a constant
        let p = SingularParams::new(0.5).unwrap();
        let e = p.energy(2);
        let r1 = p.kummer_phi(e, 0.0, 1.0, 0.7).unwrap() / p.kummer_phi(e, 0.0, 1.0, 1.9).unwrap();
        let r2 = p.phi_n(2, 0.7).unwrap() / p.phi_n(2, 1.9).unwrap();
        assert!(r1.is_finite() && r2.is_finite());
        // c̃ = 0 at g0 = 3/2 is degenerate only for the second branch
        let q = SingularParams::new(1.5).unwrap();
        assert!(matches!(q.kummer_phi(5.0, 0.0, 1.0, 1.0), Err(Error::DegenerateParameter(_))));
        assert!(q.kummer_phi(q.energy(1), q.kummer_normalization(1).unwrap(), 0.0, 1.0).is_ok());
    }

    #[test]
    fn off_spectrum_solution_grows() {
        let p = SingularParams::new(2.0).unwrap();
        let e = p.energy(1) + 1.3;
        let ratio = p.kummer_phi(e, 1.0, 0.0, 4.0).unwrap() / p.kummer_phi(e, 1.0, 0.0, 3.0).unwrap();
        let asymptotic = (3.5f64).exp() * (4.0f64 / 3.0).powf(-(e + 1.0) / 2.0);
        assert!(ratio > 1.0);
        assert!((ratio / asymptotic - 1.0).abs() < 0.3, "{ratio} vs {asymptotic}");
        let bound = p.phi_n(1, 4.0).unwrap() / p.phi_n(1, 3.0).unwrap();
        assert!(bound.abs() < 0.1);
    }

    #[test]
    fn grid_eigen_residuals() {
        for g0 in [0.5, 2.0, 3.5] {
            let p = SingularParams::new(g0).unwrap();
            let grid = residual_grid(&p, 5, 4000).unwrap();
            for n in 0..=5 {
                let r = eigen_residual(&p, n, grid).unwrap();
                assert!(r <= 1e-4, "g0={g0} n={n}: {r}");
            }
        }
    }

    #[test]
    fn grid_ladder_residuals() {
        let p = SingularParams::new(2.0).unwrap();
        let grid = residual_grid(&p, 6, 4000).unwrap();
        for n in 0..=5 {
            for d in [Direction::Raise, Direction::Lower] {
                let r = ladder_residual(&p, n, d, grid).unwrap();
                assert!(r <= 1e-4, "n={n} {d:?}: {r}");
            }
        }
    }

    #[test]
    fn commutator_closes_on_bumps() {
        let p = SingularParams::new(2.0).unwrap();
        let grid = Grid::uniform(0.5, 8.0, 4001).unwrap();
        for (c, w) in [(2.0, 1.2), (3.0, 1.5), (4.0, 2.0), (5.0, 1.0), (3.5, 2.5)] {
            let f = GridFunction::sample(grid, |y| bump(c, w, y));
            let r = commutator_residual(&p, &f).unwrap();
            assert!(r <= 1e-3, "bump({c},{w}): {r}");
        }
    }

    #[test]
    fn fock_vector_algebra() {
        let b = Basis::Linear;
        let v = FockVector::new(b, vec![Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0)]);
        assert!(close(v.norm(), 6f64.sqrt(), 1e-15));
        let w = v.sub(&FockVector::unit(b, 2)).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.coeff(2), Complex64::new(-1.0, 0.0));
        assert_eq!(v.inner(&v).unwrap(), Complex64::new(6.0, 0.0));
        assert_eq!(v.apply_h().coeff(1), Complex64::new(0.0, -3.0));
    }

    proptest! {
        #[test]
        fn casimir_is_constant_on_random_vectors(g0 in -0.45f64..6.0, re in proptest::collection::vec(-1.0f64..1.0, 1..12)) {
            let p = SingularParams::new(g0).unwrap();
            let v = FockVector::new(Basis::Singular(p), re.iter().map(|r| Complex64::new(*r, 0.5 * r)).collect());
            let c = v.apply_casimir().unwrap();
            let expect = v.scale(Complex64::new(p.casimir_value(), 0.0));
            let scale = 1.0 + v.norm() * p.energy(v.len()).powi(2) / 16.0;
            prop_assert!(c.sub(&expect).unwrap().norm() <= 1e-12 * scale);
        }

        #[test]
        fn laguerre_recurrence_agrees_with_plain_polynomial(g0 in -0.45f64..6.0, n in 0usize..10, y in 0.05f64..4.0) {
            let p = SingularParams::new(g0).unwrap();
            prop_assume!(g0 != 0.0);
            let g = p.alpha() - 0.5;
            let nf = n as f64;
            let norm = (2.0 * gamma(nf + 1.0).unwrap() / gamma(p.alpha() + nf + 0.5).unwrap()).sqrt();
            let expect = norm * y.powf(p.alpha()) * (-0.5 * y * y).exp() * laguerre(n, g, y * y);
            prop_assert!((p.phi_n(n, y).unwrap() - expect).abs() <= 1e-11 * (1.0 + expect.abs()));
        }
    }
}
