//! Coherent states as Fock-space expansions.
//!
//! Glauber states live on the linear PDM oscillator; Barut–Girardello and
//! Perelomov states on singular systems. Coefficients depend only on the
//! kind, z and g₀; the mass profile enters only through evaluation in x.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{bessel_i, ln_gamma};
use crate::table::Table;
use crate::verify::quadrature::integrate_with_breaks;
use crate::xspace::PdmSystem;
use crate::yspace::{
    apply_ladder, linear_lower_coefficient, linear_phi_all, linear_raise_coefficient, Basis, Direction, FockVector,
    SingularParams,
};

/// Default bound on the discarded tail Σ_{ℓ>N}|c_ℓ|².
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-14;

/// Hard cap on the number of retained coefficients.
const MAX_TERMS: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoherentKind {
    Glauber,
    BarutGirardello,
    Perelomov,
}

impl CoherentKind {
    pub fn name(&self) -> &'static str {
        match self {
            CoherentKind::Glauber => "glauber",
            CoherentKind::BarutGirardello => "barut-girardello",
            CoherentKind::Perelomov => "perelomov",
        }
    }
}

impl fmt::Display for CoherentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoherentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "glauber" => Ok(CoherentKind::Glauber),
            "bg" | "barut-girardello" | "barutgirardello" => Ok(CoherentKind::BarutGirardello),
            "perelomov" => Ok(CoherentKind::Perelomov),
            other => Err(Error::usage(format!("unknown coherent-state kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherentState {
    kind: CoherentKind,
    z: Complex64,
    system: PdmSystem,
    coeffs: FockVector,
    tail_bound: f64,
}

/// First coefficient and successive ratios c_{ℓ+1}/c_ℓ of one family.
struct Series {
    first: Complex64,
    ratio: Box<dyn Fn(usize) -> Complex64>,
}

fn series(kind: CoherentKind, basis: Basis, z: Complex64) -> Result<Series> {
    let r = z.norm();
    match (kind, basis) {
        (CoherentKind::Glauber, Basis::Linear) => Ok(Series {
            first: Complex64::new((-0.25 * r * r).exp(), 0.0),
            ratio: Box::new(move |k| z / (2.0 * (k as f64 + 1.0)).sqrt()),
        }),
        (CoherentKind::BarutGirardello, Basis::Singular(p)) => {
            let kappa = p.kappa();
            let first = if r == 0.0 {
                1.0
            } else {
                // (|z|/4)^{κ-1/2} I_{2κ-1}(|z|/2)^{-1/2} / √Γ(2κ)
                ((kappa - 0.5) * (0.25 * r).ln()
                    - 0.5 * bessel_i(2.0 * kappa - 1.0, 0.5 * r)?.ln()
                    - 0.5 * ln_gamma(2.0 * kappa)?)
                .exp()
            };
            Ok(Series {
                first: Complex64::new(first, 0.0),
                ratio: Box::new(move |l| {
                    let l = l as f64;
                    z * 0.25 / ((l + 1.0) * (l + 2.0 * kappa)).sqrt()
                }),
            })
        }
        (CoherentKind::Perelomov, Basis::Singular(p)) => {
            let q = 4.0 * r;
            if !(q < 1.0) {
                return Err(Error::domain(format!("Perelomov states need |4z| < 1, got |4z| = {q}")));
            }
            let kappa = p.kappa();
            Ok(Series {
                first: Complex64::new((1.0 - q * q).powf(kappa), 0.0),
                ratio: Box::new(move |l| {
                    let l = l as f64;
                    z * 4.0 * ((l + 2.0 * kappa) / (l + 1.0)).sqrt()
                }),
            })
        }
        (CoherentKind::Glauber, _) => Err(Error::usage("Glauber states need a linear PDM system")),
        (_, _) => Err(Error::usage(format!("{kind} states need a singular PDM system"))),
    }
}

/// Coefficients up to the first N at which the ratio test holds and the
/// geometric tail bound |c_N|²ρ²/(1−ρ²) is below `tolerance`, then
/// extended to 2N. Every family's ratio modulus is non-increasing in ℓ,
/// so the bound holds for the whole tail.
fn sum_series(s: &Series, tolerance: f64) -> Result<(Vec<Complex64>, f64)> {
    let mut coeffs = vec![s.first];
    let mut found: Option<usize> = None;
    loop {
        let l = coeffs.len() - 1;
        let rho = (s.ratio)(l).norm();
        let w = coeffs[l].norm_sqr();
        let tail = if rho < 1.0 { w * rho * rho / (1.0 - rho * rho) } else { f64::INFINITY };
        match found {
            None if tail < tolerance => found = Some(l.max(1)),
            Some(n0) if l >= 2 * n0 => return Ok((coeffs, tail)),
            _ => {}
        }
        if coeffs.len() >= MAX_TERMS {
            return Err(Error::Accuracy(format!("coherent-state series needs more than {MAX_TERMS} terms")));
        }
        let next = coeffs[l] * (s.ratio)(l);
        coeffs.push(next);
    }
}

impl CoherentState {
    /// Builds the Fock coefficients, truncated so the discarded weight is
    /// below `tolerance` ∈ (0, 1).
    pub fn build(kind: CoherentKind, system: &PdmSystem, z: Complex64, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(Error::usage(format!("tolerance must lie in (0, 1), got {tolerance}")));
        }
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::domain("z must be finite"));
        }
        let basis = system.basis();
        let s = series(kind, basis, z)?;
        let (coeffs, tail_bound) = sum_series(&s, tolerance)?;
        Ok(Self { kind, z, system: *system, coeffs: FockVector::new(basis, coeffs), tail_bound })
    }

    pub fn kind(&self) -> CoherentKind {
        self.kind
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn system(&self) -> &PdmSystem {
        &self.system
    }

    pub fn coeffs(&self) -> &FockVector {
        &self.coeffs
    }

    /// Highest retained index N.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Bound on the weight Σ_{ℓ>N}|c_ℓ|² left out.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// ‖(lowering − z)c‖ in coefficient space: γ₋ for Barut–Girardello,
    /// √(2k) for Glauber.
    pub fn eigen_residual(&self) -> Result<f64> {
        if self.kind == CoherentKind::Perelomov {
            return Err(Error::Unsupported("Perelomov states are not eigenstates of the lowering operator".into()));
        }
        let lowered = apply_ladder(&self.coeffs, Direction::Lower);
        Ok(lowered.sub(&self.coeffs.scale(self.z))?.norm())
    }

    /// J^{1/2}(x) Σ c_ℓ φ_ℓ(s(x)) in the Fock phase convention.
    pub fn evaluate(&self, x: f64) -> Result<Complex64> {
        let basis = self.system.basis_all(self.truncation(), x)?;
        Ok(self.coeffs.coeffs().iter().zip(basis).map(|(c, b)| c * b).sum())
    }

    /// ⟨self, other⟩ = Σ conj(c)·c'.
    pub fn overlap(&self, other: &Self) -> Result<Complex64> {
        if self.kind != other.kind || self.system != other.system {
            return Err(Error::usage("overlap needs states of the same kind on the same system"));
        }
        self.coeffs.inner(&other.coeffs)
    }

    /// ∫|state|² dx by adaptive quadrature over the system's domain.
    pub fn norm_by_quadrature(&self) -> Result<f64> {
        let breaks = self.system.quadrature_breaks(self.truncation())?;
        Ok(integrate_with_breaks(|x| self.evaluate(x).map(|v| v.norm_sqr()).unwrap_or(0.0), &breaks, 1e-12)?.value)
    }

    /// Table `n,re,im`.
    pub fn coefficient_table(&self) -> Table {
        let rows = self.coeffs.coeffs().iter().enumerate().map(|(n, c)| vec![n as f64, c.re, c.im]).collect();
        Table::new(vec!["n".into(), "re".into(), "im".into()], rows)
    }

    /// Table `x,re,im,abs2` at the given points.
    pub fn evaluation_table(&self, xs: &[f64]) -> Result<Table> {
        let rows = xs
            .iter()
            .map(|&x| self.evaluate(x).map(|v| vec![x, v.re, v.im, v.norm_sqr()]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Table::new(vec!["x".into(), "re".into(), "im".into(), "abs2".into()], rows))
    }
}

/// Dense complex matrix, row-major.
#[derive(Clone, Debug)]
struct Matrix {
    n: usize,
    a: Vec<Complex64>,
}

impl Matrix {
    fn identity(n: usize) -> Self {
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self { n, a }
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] += x * other.a[k * n + j];
                }
            }
        }
        Self { n, a }
    }

    fn scale(&self, s: f64) -> Self {
        Self { n: self.n, a: self.a.iter().map(|x| x * s).collect() }
    }

    fn add(&self, other: &Self) -> Self {
        Self { n: self.n, a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect() }
    }

    /// Max absolute column sum.
    fn norm1(&self) -> f64 {
        (0..self.n).map(|j| (0..self.n).map(|i| self.a[i * self.n + j].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// exp by scaling and squaring with a Taylor series on the scaled matrix.
    fn exp(&self) -> Self {
        let norm = self.norm1();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let scaled = self.scale(0.5f64.powi(squarings as i32));
        let mut result = Self::identity(self.n);
        let mut term = Self::identity(self.n);
        for k in 1..=30 {
            term = term.mul(&scaled).scale(1.0 / k as f64);
            result = result.add(&term);
            if term.norm1() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.mul(&result);
        }
        result
    }
}

/// Distance between exp((z a₊ − z̄ a₋)/2)e₀, computed in an N-dimensional
/// truncation of the linear basis, and the Glauber coefficients.
pub fn displacement_check(system: &PdmSystem, z: Complex64, dim: usize) -> Result<f64> {
    if system.basis() != Basis::Linear {
        return Err(Error::usage("the displacement check applies to Glauber states on linear systems"));
    }
    if dim < 2 {
        return Err(Error::usage("displacement check needs at least 2 basis states"));
    }
    let mut g = Matrix { n: dim, a: vec![Complex64::new(0.0, 0.0); dim * dim] };
    for k in 0..dim - 1 {
        // (a₊)_{k+1,k} = √(2(k+1)), (a₋)_{k,k+1} = √(2(k+1))
        g.a[(k + 1) * dim + k] = z * (0.5 * linear_raise_coefficient(k));
        g.a[k * dim + k + 1] = -z.conj() * (0.5 * linear_lower_coefficient(k + 1));
    }
    let e = g.exp();
    let cs = CoherentState::build(CoherentKind::Glauber, system, z, DEFAULT_TAIL_TOLERANCE)?;
    let dist2: f64 = (0..dim).map(|k| (e.a[k * dim] - cs.coeffs.coeff(k)).norm_sqr()).sum();
    let beyond: f64 = cs.coeffs.coeffs().iter().skip(dim).map(|c| c.norm_sqr()).sum();
    Ok((dist2 + beyond).sqrt())
}

/// |Σ_ℓ |4z|^{2ℓ}Γ(ℓ+2κ)/(Γ(ℓ+1)Γ(2κ))·(1−|4z|²)^{2κ} − 1|, the binomial
/// identity behind the Perelomov normalization.
pub fn perelomov_norm_check(params: &SingularParams, z: Complex64) -> Result<f64> {
    let q2 = 16.0 * z.norm_sqr();
    if !(q2 < 1.0) {
        return Err(Error::domain(format!("Perelomov states need |4z| < 1, got |4z| = {}", q2.sqrt())));
    }
    let two_kappa = 2.0 * params.kappa();
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut l = 0.0;
    loop {
        term *= q2 * (l + two_kappa) / (l + 1.0);
        sum += term;
        l += 1.0;
        let rho = q2 * (l + two_kappa) / (l + 1.0);
        if rho < 1.0 && term * rho / (1.0 - rho) < 1e-17 * sum {
            break;
        }
        if l > 1e7 {
            return Err(Error::Accuracy("Perelomov normalization series did not converge".into()));
        }
    }
    Ok((sum * (1.0 - q2).powf(two_kappa) - 1.0).abs())
}

/// |Σ_ℓ (r/4)^{2ℓ}/(Γ(ℓ+1)Γ(ℓ+2κ)) / ((r/4)^{1−2κ}I_{2κ−1}(r/2)) − 1|.
pub fn bg_normalization_identity(params: &SingularParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain("the Barut–Girardello identity is checked at |z| > 0"));
    }
    let two_kappa = 2.0 * params.kappa();
    let x = (0.25 * r).powi(2);
    let mut term = (-ln_gamma(two_kappa)?).exp();
    let mut sum = term;
    let mut l = 0.0;
    while term > 1e-18 * sum {
        term *= x / ((l + 1.0) * (l + two_kappa));
        sum += term;
        l += 1.0;
    }
    let rhs = (0.25 * r).powf(1.0 - two_kappa) * bessel_i(two_kappa - 1.0, 0.5 * r)?;
    Ok((sum / rhs - 1.0).abs())
}

/// 4z = (ξ/|ξ|)·tanh|ξ|.
pub fn xi_to_z(xi: Complex64) -> Complex64 {
    let r = xi.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    xi / r * (r.tanh() / 4.0)
}

/// ΔY·ΔP for a Glauber state of the constant-mass linear oscillator,
/// with Y = y and P = −i d/dy, by quadrature.
pub fn glauber_uncertainty(z: Complex64, tolerance: f64) -> Result<f64> {
    let system = PdmSystem::new(crate::massmap::MassProfile::constant(), None, crate::xspace::PotentialId::LinearPdm)?;
    let cs = CoherentState::build(CoherentKind::Glauber, &system, z, tolerance)?;
    let n = cs.truncation();
    let c = cs.coeffs.coeffs().to_vec();
    // ψ and ψ' from the Hermite functions, ψ'_k = √(k/2)ψ_{k-1} − √((k+1)/2)ψ_{k+1}
    let eval = move |y: f64| {
        let phi = linear_phi_all(n + 1, y);
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for (k, ck) in c.iter().enumerate() {
            v += ck * phi[k];
            let down = if k > 0 { (k as f64 / 2.0).sqrt() * phi[k - 1] } else { 0.0 };
            let up = ((k as f64 + 1.0) / 2.0).sqrt() * phi[k + 1];
            dv += ck * (down - up);
        }
        (v, dv)
    };
    let centre = z.re;
    let half_width = 12.0 + (2.0 * n as f64 + 1.0).sqrt();
    let breaks: Vec<f64> = (0..=32).map(|i| centre - half_width + 2.0 * half_width * i as f64 / 32.0).collect();
    let moment = |f: &dyn Fn(f64) -> f64| -> Result<f64> { Ok(integrate_with_breaks(f, &breaks, 1e-13)?.value) };
    let norm = moment(&|y| eval(y).0.norm_sqr())?;
    let y1 = moment(&|y| y * eval(y).0.norm_sqr())? / norm;
    let y2 = moment(&|y| y * y * eval(y).0.norm_sqr())? / norm;
    // ⟨P⟩ = ∫ conj(ψ)(−iψ') is real for normalizable ψ
    let p1 = moment(&|y| {
        let (v, dv) = eval(y);
        (v.conj() * dv * Complex64::new(0.0, -1.0)).re
    })? / norm;
    let p2 = moment(&|y| eval(y).1.norm_sqr())? / norm;
    Ok(((y2 - y1 * y1) * (p2 - p1 * p1)).sqrt())
}
