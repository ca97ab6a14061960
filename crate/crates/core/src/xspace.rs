//! Position-dependent-mass systems in the x-representation.
//!
//! A [`PdmSystem`] pairs a mass profile with either a singular coupling
//! (potential s² + g₀/(2s²)) or nothing (the linear oscillator s²). Wave
//! functions are ψ_n = J^{1/2}φ_n(s(x)); operators act on grid samples
//! with analytic m, J, s and finite differences of the input only.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::massmap::{MassProfile, ProfileKind};
use crate::specfun::ln_gamma;
use crate::verify::grid::{derivative, points_per_oscillation, relative_l2, sup_norm, EXCLUDED_EDGE_ROWS};
use crate::verify::quadrature::integrate_with_breaks;
use crate::verify::{Grid, GridFunction, VerificationReport};
use crate::yspace::{
    ladder_phase, linear_decay_radius, linear_lower_coefficient, linear_phi_all, linear_raise_coefficient, Basis,
    Direction, SingularParams,
};

/// Fewest grid points per oscillation of the input before operator
/// results are flagged as under-resolved.
pub const MIN_POINTS_PER_OSCILLATION: f64 = 16.0;

/// Inner end of the y-range used for residual grids.
pub const RESIDUAL_Y_MIN: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PotentialId {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
    /// Constant-mass singular oscillator.
    Sing,
    /// PDM linear oscillator, potential s².
    LinearPdm,
}

impl PotentialId {
    pub const ALL: [PotentialId; 9] = [
        PotentialId::V1,
        PotentialId::V2,
        PotentialId::V3,
        PotentialId::V4,
        PotentialId::V5,
        PotentialId::V6,
        PotentialId::V7,
        PotentialId::Sing,
        PotentialId::LinearPdm,
    ];

    pub fn is_singular(&self) -> bool {
        *self != PotentialId::LinearPdm
    }

    pub fn name(&self) -> &'static str {
        match self {
            PotentialId::V1 => "V1",
            PotentialId::V2 => "V2",
            PotentialId::V3 => "V3",
            PotentialId::V4 => "V4",
            PotentialId::V5 => "V5",
            PotentialId::V6 => "V6",
            PotentialId::V7 => "V7",
            PotentialId::Sing => "Sing",
            PotentialId::LinearPdm => "LinearPdm",
        }
    }
}

impl fmt::Display for PotentialId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PotentialId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        PotentialId::ALL
            .into_iter()
            .find(|id| id.name().to_ascii_lowercase() == key)
            .or(match key.as_str() {
                "linear" => Some(PotentialId::LinearPdm),
                "singular" => Some(PotentialId::Sing),
                _ => None,
            })
            .ok_or_else(|| Error::usage(format!("unknown potential {s:?}")))
    }
}

/// One row of the potential catalog.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub id: PotentialId,
    /// "MDNT", "MINT" or "linear".
    pub family: &'static str,
    pub mass: &'static str,
    pub bijection: &'static str,
    pub domain: &'static str,
    pub potential: &'static str,
}

/// The seven singular PDM potentials and the PDM linear oscillator.
pub fn catalog() -> Vec<CatalogEntry> {
    use PotentialId::*;
    vec![
        CatalogEntry {
            id: V1,
            family: "MDNT",
            mass: "(x0+λx)^-2, a=-1/4",
            bijection: "ln(x0+λx)/λ",
            domain: "[(1-x0)/λ, ∞)",
            potential: "ln²(x0+λx)/λ² + g0λ²/(2ln²(x0+λx))",
        },
        CatalogEntry {
            id: V2,
            family: "MDNT",
            mass: "(x0+λx)^(-4n/(2n+1)), a=(1-n)/(4n)",
            bijection: "(2n+1)(x0+λx)^(1/(2n+1))/λ",
            domain: "[-x0/λ, ∞)",
            potential: "((2n+1)/λ)²(x0+λx)^(2/(2n+1)) + (g0/2)(λ/(2n+1))²(x0+λx)^(-2/(2n+1))",
        },
        CatalogEntry {
            id: V3,
            family: "MINT",
            mass: "1/(1+λ²x²), a=-1/4",
            bijection: "arcsinh(λx)/λ",
            domain: "[0, ∞)",
            potential: "arcsinh²(λx)/λ² + g0λ²/(2arcsinh²(λx))",
        },
        CatalogEntry {
            id: V4,
            family: "MINT",
            mass: "e^(2λx), a=-1/4",
            bijection: "(e^(λx)-x0)/λ",
            domain: "[ln(x0)/λ, ∞)",
            potential: "((e^(λx)-x0)/λ)² + g0λ²/(2(e^(λx)-x0)²)",
        },
        CatalogEntry {
            id: V5,
            family: "MINT",
            mass: "e^(2λx), a=-1/4, x0=1",
            bijection: "(e^(λx)-1)/λ",
            domain: "[0, ∞)",
            potential: "(4e^(λx)/λ²)sinh²(λx/2) + (g0λ²/8)e^(-λx)csch²(λx/2)",
        },
        CatalogEntry {
            id: V6,
            family: "MINT",
            mass: "e^(2λx), a=-1/4, x0=0",
            bijection: "e^(λx)/λ",
            domain: "(-∞, ∞)",
            potential: "e^(2λx)/λ² + (g0λ²/2)e^(-2λx)",
        },
        CatalogEntry {
            id: V7,
            family: "MINT",
            mass: "e^(2x), a=-1/4, x0=0, λ=1, g0=2",
            bijection: "e^x",
            domain: "(-∞, ∞)",
            potential: "2cosh(2x)",
        },
        CatalogEntry {
            id: LinearPdm,
            family: "linear",
            mass: "any full-line profile (mdnt0, regular, constant)",
            bijection: "s(x) of the profile",
            domain: "natural domain of the profile",
            potential: "s²(x)",
        },
    ]
}

/// Catalog rows whose family or id equals `filter` (case-insensitive).
pub fn catalog_filtered(filter: Option<&str>) -> Vec<CatalogEntry> {
    match filter {
        None => catalog(),
        Some(f) => {
            let f = f.trim().to_ascii_lowercase();
            catalog()
                .into_iter()
                .filter(|e| e.family.to_ascii_lowercase() == f || e.id.name().to_ascii_lowercase() == f)
                .collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PdmSystem {
    profile: MassProfile,
    params: Option<SingularParams>,
    potential_id: PotentialId,
}

impl PdmSystem {
    /// Checks that the profile is the one the potential is built from and
    /// that it satisfies the bijection conditions.
    pub fn new(profile: MassProfile, params: Option<SingularParams>, potential_id: PotentialId) -> Result<Self> {
        use PotentialId::*;
        let kind = profile.kind();
        let mismatch = |what: &str| Err(Error::domain(format!("{potential_id} needs {what}, got {profile}")));
        match potential_id {
            V1 if kind != ProfileKind::Mdnt0 => return mismatch("an mdnt0 profile"),
            V2 if !matches!(kind, ProfileKind::MdntN(_)) => return mismatch("an mdnt profile"),
            V3 if kind != ProfileKind::Regular => return mismatch("a regular profile"),
            V4 if kind != ProfileKind::Exponential || !(profile.x0() > 0.0) => {
                return mismatch("an exponential profile with x0 > 0")
            }
            V5 if kind != ProfileKind::Exponential || profile.x0() != 1.0 => {
                return mismatch("an exponential profile with x0 = 1")
            }
            V6 if kind != ProfileKind::Exponential || profile.x0() != 0.0 => {
                return mismatch("an exponential profile with x0 = 0")
            }
            V7 if kind != ProfileKind::Exponential || profile.x0() != 0.0 || profile.lambda() != 1.0 => {
                return mismatch("an exponential profile with x0 = 0 and lambda = 1")
            }
            Sing if kind != ProfileKind::ConstantMass => return mismatch("the constant-mass profile"),
            LinearPdm if !matches!(kind, ProfileKind::Mdnt0 | ProfileKind::Regular | ProfileKind::ConstantMass) => {
                return mismatch("a profile whose bijection covers the whole line (mdnt0, regular or constant)")
            }
            _ => {}
        }
        match (potential_id, params) {
            (LinearPdm, Some(_)) => return Err(Error::usage("the linear PDM oscillator takes no coupling g0")),
            (LinearPdm, None) => {}
            (_, None) => return Err(Error::usage(format!("{potential_id} needs a coupling g0"))),
            (V7, Some(p)) if p.g0() != 2.0 => return Err(Error::domain("V7 is the g0 = 2 case of V6")),
            _ => {}
        }
        let report = profile.validate();
        if !report.passed {
            let why = report.context.get("violations").cloned().unwrap_or_default();
            return Err(Error::domain(format!("invalid mass profile {profile}: {why}")));
        }
        Ok(Self { profile, params, potential_id })
    }

    /// Standard parameters: λ = 1 and x0 such that the domain starts at 0
    /// where possible (V2 with n = 1, V4 with x0 = 2).
    pub fn with_defaults(potential_id: PotentialId, g0: f64) -> Result<Self> {
        use PotentialId::*;
        let profile = match potential_id {
            V1 => MassProfile::mdnt0(1.0, 1.0),
            V2 => MassProfile::mdnt_n(1, 0.0, 1.0)?,
            V3 | LinearPdm => MassProfile::regular(1.0),
            V4 => MassProfile::exponential(2.0, 1.0),
            V5 => MassProfile::exponential(1.0, 1.0),
            V6 | V7 => MassProfile::exponential(0.0, 1.0),
            Sing => MassProfile::constant(),
        };
        let params = match potential_id {
            LinearPdm => None,
            V7 => Some(SingularParams::new(2.0)?),
            _ => Some(SingularParams::new(g0)?),
        };
        Self::new(profile, params, potential_id)
    }

    /// Singular system on the constant-mass profile.
    pub fn singular_constant_mass(g0: f64) -> Result<Self> {
        Self::new(MassProfile::constant(), Some(SingularParams::new(g0)?), PotentialId::Sing)
    }

    pub fn profile(&self) -> &MassProfile {
        &self.profile
    }

    pub fn params(&self) -> Option<&SingularParams> {
        self.params.as_ref()
    }

    pub fn potential_id(&self) -> PotentialId {
        self.potential_id
    }

    pub fn is_singular(&self) -> bool {
        self.params.is_some()
    }

    pub fn basis(&self) -> Basis {
        match self.params {
            Some(p) => Basis::Singular(p),
            None => Basis::Linear,
        }
    }

    /// Lower end of the x-domain: x_min for singular systems, the natural
    /// edge of the profile for linear ones.
    pub fn x_lower(&self) -> f64 {
        if self.is_singular() {
            self.profile.x_min()
        } else {
            self.profile.natural_lower_edge()
        }
    }

    fn check_interior(&self, x: f64) -> Result<()> {
        let lower = self.x_lower();
        if !(x > lower) || !self.profile.is_defined_at(x) {
            return Err(Error::domain(format!("x = {x} is not inside the domain ({lower}, ∞) of {self}")));
        }
        Ok(())
    }

    /// E_n in units of ħω₀/2.
    pub fn energy(&self, n: usize) -> f64 {
        match self.params {
            Some(p) => p.energy(n),
            None => 2.0 * n as f64 + 1.0,
        }
    }

    /// V(x) = s² + g₀/(2s²) (or s² for the linear system) through the bijection.
    pub fn potential(&self, x: f64) -> Result<f64> {
        self.check_interior(x)?;
        let s = self.profile.bijection_s(x)?;
        Ok(match self.params {
            Some(p) => p.potential(s),
            None => s * s,
        })
    }

    /// The catalog's closed form of the potential, written directly in x.
    pub fn closed_form_potential(&self, x: f64) -> Result<f64> {
        use PotentialId::*;
        self.check_interior(x)?;
        let (x0, l) = (self.profile.x0(), self.profile.lambda());
        let g0 = self.params.map(|p| p.g0()).unwrap_or(0.0);
        let u = x0 + l * x;
        Ok(match self.potential_id {
            V1 => {
                let ln2 = u.ln().powi(2);
                ln2 / (l * l) + g0 * l * l / (2.0 * ln2)
            }
            V2 => {
                let ProfileKind::MdntN(n) = self.profile.kind() else { unreachable!() };
                let k = (2 * n + 1) as f64;
                (k / l).powi(2) * u.powf(2.0 / k) + 0.5 * g0 * (l / k).powi(2) * u.powf(-2.0 / k)
            }
            V3 => {
                let a2 = (l * x).asinh().powi(2);
                a2 / (l * l) + g0 * l * l / (2.0 * a2)
            }
            V4 => {
                let d = (l * x).exp() - x0;
                (d / l).powi(2) + g0 * l * l / (2.0 * d * d)
            }
            V5 => {
                let sh = (0.5 * l * x).sinh();
                4.0 * (l * x).exp() / (l * l) * sh * sh + g0 * l * l / 8.0 * (-l * x).exp() / (sh * sh)
            }
            V6 => (2.0 * l * x).exp() / (l * l) + 0.5 * g0 * l * l * (-2.0 * l * x).exp(),
            V7 => 2.0 * (2.0 * x).cosh(),
            Sing => x * x + g0 / (2.0 * x * x),
            LinearPdm => match self.profile.kind() {
                ProfileKind::Mdnt0 => u.ln().powi(2) / (l * l),
                ProfileKind::Regular => (l * x).asinh().powi(2) / (l * l),
                _ => x * x,
            },
        })
    }

    /// ψ_0(x), ..., ψ_nmax(x) with ψ_n = J^{1/2}φ_n(s(x)).
    /// At the lower end of a singular domain the limit is returned.
    pub fn psi_all(&self, nmax: usize, x: f64) -> Result<Vec<f64>> {
        if self.is_singular() && x == self.profile.x_min() {
            return (0..=nmax).map(|n| self.boundary_value(n)).collect();
        }
        self.check_interior(x)?;
        let s = self.profile.bijection_s(x)?;
        let root_j = self.profile.jacobian(x)?.sqrt();
        let phis = match self.params {
            Some(p) => p.phi_all(nmax, s)?,
            None => linear_phi_all(nmax, s),
        };
        Ok(phis.into_iter().map(|v| root_j * v).collect())
    }

    pub fn psi_n(&self, n: usize, x: f64) -> Result<f64> {
        Ok(self.psi_all(n, x)?[n])
    }

    /// Fock-basis functions |n⟩ in x: (-1)^n ψ_n for singular systems, ψ_n
    /// for linear ones; ladder operators have non-negative matrix elements.
    pub fn basis_all(&self, nmax: usize, x: f64) -> Result<Vec<f64>> {
        let mut v = self.psi_all(nmax, x)?;
        if self.is_singular() {
            for (n, p) in v.iter_mut().enumerate() {
                *p *= ladder_phase(n);
            }
        }
        Ok(v)
    }

    /// lim ψ_n(x) as x → x_min. Zero unless the Jacobian diverges there
    /// (MDNT orders n ≥ 1), where ψ_n ∝ (x - x_min)^{(α-n)/(2n+1)}.
    pub fn boundary_value(&self, n: usize) -> Result<f64> {
        let p = self.params.ok_or_else(|| Error::usage("boundary value of a linear system"))?;
        let ProfileKind::MdntN(order) = self.profile.kind() else {
            return Ok(0.0);
        };
        let order = order as f64;
        if p.alpha() > order {
            return Ok(0.0);
        }
        if p.alpha() < order {
            return Ok(f64::INFINITY);
        }
        // J^{1/2}y^α → ((2n+1)/λ)^α; φ_n/y^α → √2·√(Γ(n+γ+1)/n!)/Γ(γ+1)
        let k = 2.0 * order + 1.0;
        let g = p.alpha() - 0.5;
        let nf = n as f64;
        let lim = (0.5 * std::f64::consts::LN_2 + 0.5 * (ln_gamma(nf + g + 1.0)? - ln_gamma(nf + 1.0)?)
            - ln_gamma(g + 1.0)?)
        .exp();
        Ok((k / self.profile.lambda()).powf(p.alpha()) * lim)
    }

    fn require_inside(&self, f: &GridFunction) -> Result<()> {
        let g = f.grid();
        if !(g.min() > self.x_lower()) || !self.profile.is_defined_at(g.min()) {
            return Err(Error::domain(format!(
                "grid [{}, {}] must lie strictly inside the domain of {self}",
                g.min(),
                g.max()
            )));
        }
        Ok(())
    }

    fn coefficient(&self, grid: Grid, f: impl Fn(f64) -> Result<f64>) -> Result<GridFunction> {
        GridFunction::try_sample(grid, f)
    }

    /// h_a f = -m^a (m^{2b} (m^a f)')' + V f with the profile's ordering.
    pub fn apply_hamiltonian(&self, f: &GridFunction) -> Result<GridFunction> {
        self.require_inside(f)?;
        let grid = *f.grid();
        let (a, b) = (self.profile.ordering_a(), self.profile.ordering_b());
        let ma = self.coefficient(grid, |x| Ok(self.profile.mass(x)?.powf(a)))?;
        let m2b = self.coefficient(grid, |x| Ok(self.profile.mass(x)?.powf(2.0 * b)))?;
        let v = self.coefficient(grid, |x| self.potential(x))?;
        let u = ma.zip_with(f, |_, c, y| c * y)?;
        let w = m2b.zip_with(&derivative(&u, 1)?, |_, c, y| c * y)?;
        let t = derivative(&w, 1)?;
        let kinetic = ma.zip_with(&t, |_, c, y| -(c * y))?;
        let potential = v.zip_with(f, |_, c, y| c * y)?;
        kinetic.zip_with(&potential, |_, k, p| k + p)
    }

    /// A warning when `f` has fewer than 16 grid points per oscillation.
    pub fn coarse_grid_warning(f: &GridFunction) -> Option<String> {
        match points_per_oscillation(f) {
            Some(p) if p < MIN_POINTS_PER_OSCILLATION => {
                Some(format!("grid too coarse: {p:.1} points per oscillation (need {MIN_POINTS_PER_OSCILLATION})"))
            }
            _ => None,
        }
    }

    /// First-order factor: sign = +1 gives B f = J⁻¹f' + s f − ½J⁻¹(ln J)' f,
    /// sign = -1 gives A f = −J⁻¹f' + s f + ½J⁻¹(ln J)' f.
    fn first_order(&self, f: &GridFunction, sign: f64) -> Result<GridFunction> {
        self.require_inside(f)?;
        let grid = *f.grid();
        let jinv = self.coefficient(grid, |x| Ok(1.0 / self.profile.jacobian(x)?))?;
        let s = self.coefficient(grid, |x| self.profile.bijection_s(x))?;
        let dlnj = self.coefficient(grid, |x| self.profile.log_jacobian_d1(x))?;
        let df = derivative(f, 1)?;
        let out: Vec<f64> = (0..grid.len())
            .map(|i| {
                let (ji, v) = (jinv.values()[i], f.values()[i]);
                let d = ji * df.values()[i];
                let d = if sign > 0.0 { d } else { -d };
                d + s.values()[i] * v - sign * (0.5 * ji * dlnj.values()[i] * v)
            })
            .collect();
        GridFunction::new(grid, out)
    }

    /// A, raising: A J^{1/2} = J^{1/2} a₊.
    pub fn apply_a(&self, f: &GridFunction) -> Result<GridFunction> {
        self.first_order(f, -1.0)
    }

    /// B, lowering: B J^{1/2} = J^{1/2} a₋.
    pub fn apply_b(&self, f: &GridFunction) -> Result<GridFunction> {
        self.first_order(f, 1.0)
    }

    /// C₊ = A² − g₀/(2s²), C₋ = B² − g₀/(2s²).
    pub fn apply_cpm(&self, f: &GridFunction, direction: Direction) -> Result<GridFunction> {
        let p = self.params.ok_or_else(|| Error::usage("C± act on singular systems"))?;
        let sq = match direction {
            Direction::Raise => self.apply_a(&self.apply_a(f)?)?,
            Direction::Lower => self.apply_b(&self.apply_b(f)?)?,
        };
        let g0 = p.g0();
        let s = self.coefficient(*f.grid(), |x| self.profile.bijection_s(x))?;
        let cent = s.zip_with(f, |_, s, v| g0 / (2.0 * s * s) * v)?;
        sq.zip_with(&cent, |_, a, c| a - c)
    }

    /// Grid for residual checks: the image under s⁻¹ of y ∈ [1e-3, Y]
    /// (singular) or [−Y, Y] (linear), with Y where every state up to
    /// `nmax` has decayed below 1e-12, spaced so that the node density
    /// follows the wave functions.
    pub fn residual_grid(&self, nmax: usize, points: usize) -> Result<Grid> {
        let pr = &self.profile;
        match self.params {
            Some(p) => {
                let y_max = p.decay_radius(nmax, 1e-12)?;
                let lo = pr.inverse_s(RESIDUAL_Y_MIN)?;
                let hi = pr.inverse_s(y_max)?;
                if pr.x_min().is_finite() {
                    Grid::log(pr.x_min(), lo, hi, points)
                } else {
                    Grid::uniform(lo, hi, points)
                }
            }
            None => {
                let y = linear_decay_radius(nmax, 1e-12);
                let (lo, hi) = (pr.inverse_s(-y)?, pr.inverse_s(y)?);
                match pr.kind() {
                    ProfileKind::Mdnt0 => Grid::log(pr.natural_lower_edge(), lo, hi, points),
                    ProfileKind::Regular => Grid::sinh(0.0, 1.0 / pr.lambda().abs(), lo, hi, points),
                    _ => Grid::uniform(lo, hi, points),
                }
            }
        }
    }

    pub fn sample_psi(&self, n: usize, grid: Grid) -> Result<GridFunction> {
        GridFunction::try_sample(grid, |x| self.psi_n(n, x))
    }

    pub fn sample_basis(&self, n: usize, grid: Grid) -> Result<GridFunction> {
        GridFunction::try_sample(grid, |x| Ok(self.basis_all(n, x)?[n]))
    }

    /// ‖h_aψ_n − E_nψ_n‖₂/‖ψ_n‖₂ over interior rows, with any
    /// under-resolution warning.
    pub fn eigen_residual(&self, n: usize, grid: Grid) -> Result<(f64, Option<String>)> {
        let psi = self.sample_psi(n, grid)?;
        let e = self.energy(n);
        let r = self.apply_hamiltonian(&psi)?.zip_with(&psi, |_, h, v| h - e * v)?;
        Ok((relative_l2(&r, &psi, EXCLUDED_EDGE_ROWS), Self::coarse_grid_warning(&psi)))
    }

    /// Relative L² distance between the x-space ladder action on |n⟩ and
    /// its coefficient-space value (C± for singular, A/B for linear).
    pub fn ladder_residual(&self, n: usize, direction: Direction, grid: Grid) -> Result<f64> {
        let f = self.sample_basis(n, grid)?;
        let (applied, m, coeff) = match (self.params, direction) {
            (Some(p), Direction::Raise) => (self.apply_cpm(&f, direction)?, n + 1, p.gamma_plus(n)),
            (Some(p), Direction::Lower) => (self.apply_cpm(&f, direction)?, n.saturating_sub(1), p.gamma_minus(n)),
            (None, Direction::Raise) => (self.apply_a(&f)?, n + 1, linear_raise_coefficient(n)),
            (None, Direction::Lower) => (self.apply_b(&f)?, n.saturating_sub(1), linear_lower_coefficient(n)),
        };
        let target = self.sample_basis(m, grid)?.scale(coeff);
        let scale = match self.params {
            Some(p) => p.gamma_plus(n),
            None => linear_raise_coefficient(n),
        };
        // four-fold nested stencils for C±, two-fold for A, B
        let exclude = if self.is_singular() { 4 } else { 2 } * EXCLUDED_EDGE_ROWS;
        Ok(relative_l2(&applied.sub(&target)?, &f.scale(scale), exclude))
    }

    /// ‖h_a(C₊|n⟩) − E_{n+1}C₊|n⟩‖₂/‖C₊|n⟩‖₂ on 800 log points over
    /// y ∈ [0.1, 10]. Six nested stencils amplify roundoff like dt⁻⁶, so
    /// the grid is moderate and kept away from the wall.
    pub fn raised_eigen_residual(&self, n: usize) -> Result<f64> {
        if !self.is_singular() {
            return Err(Error::usage("the raised-state check applies to singular systems"));
        }
        let pr = &self.profile;
        let (lo, hi) = (pr.inverse_s(0.1)?, pr.inverse_s(10.0)?);
        let grid =
            if pr.x_min().is_finite() { Grid::log(pr.x_min(), lo, hi, 800)? } else { Grid::uniform(lo, hi, 800)? };
        let raised = self.apply_cpm(&self.sample_basis(n, grid)?, Direction::Raise)?;
        let e = self.energy(n + 1);
        let r = self.apply_hamiltonian(&raised)?.zip_with(&raised, |_, h, v| h - e * v)?;
        Ok(relative_l2(&r, &raised, 6 * EXCLUDED_EDGE_ROWS))
    }

    /// ‖(AB − BA)f + 2f‖₂/‖2f‖₂ by nested stencils.
    pub fn commutator_residual(&self, f: &GridFunction) -> Result<f64> {
        let ab = self.apply_a(&self.apply_b(f)?)?;
        let ba = self.apply_b(&self.apply_a(f)?)?;
        let r = ab.sub(&ba)?.zip_with(f, |_, c, v| c + 2.0 * v)?;
        Ok(relative_l2(&r, &f.scale(2.0), 2 * EXCLUDED_EDGE_ROWS))
    }

    /// ∫ψ_n ψ_m dx by adaptive quadrature in x, with panel breaks at the
    /// images of equally spaced y.
    pub fn overlap_by_quadrature(&self, n: usize, m: usize) -> Result<f64> {
        let nmax = n.max(m);
        let breaks = self.quadrature_breaks(nmax)?;
        Ok(integrate_with_breaks(
            |x| match self.psi_all(nmax, x) {
                Ok(v) => v[n] * v[m],
                Err(_) => 0.0,
            },
            &breaks,
            1e-12,
        )?
        .value)
    }

    /// x-breaks covering where ψ_0..ψ_nmax are not negligible.
    pub fn quadrature_breaks(&self, nmax: usize) -> Result<Vec<f64>> {
        let pr = &self.profile;
        let (y_lo, y_hi) = match self.params {
            Some(p) => {
                let y_max = p.decay_radius(nmax, 1e-12)?;
                (if pr.x_min().is_finite() { 0.0 } else { 1e-9 }, y_max)
            }
            None => {
                let y = linear_decay_radius(nmax, 1e-12);
                (-y, y)
            }
        };
        let panels = 24;
        let mut breaks = Vec::with_capacity(panels + 1);
        for i in 0..=panels {
            let y = y_lo + (y_hi - y_lo) * i as f64 / panels as f64;
            breaks.push(if i == 0 && self.is_singular() && pr.x_min().is_finite() {
                pr.x_min()
            } else {
                pr.inverse_s(y)?
            });
        }
        Ok(breaks)
    }
}

impl fmt::Display for PdmSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.potential_id, self.profile)?;
        if let Some(p) = self.params {
            write!(f, " g0={}", p.g0())?;
        }
        Ok(())
    }
}

/// β = (s − (a + 1/4)m'/m^{3/2})/√2, the superpotential of the PDM linear
/// oscillator (constant of integration zero).
pub fn riccati_beta(profile: &MassProfile, x: f64) -> Result<f64> {
    let c = profile.ordering_a() + 0.25;
    let q = c * profile.mass_d1(x)? / profile.mass(x)?.powf(1.5);
    Ok((profile.bijection_s(x)? - q) / std::f64::consts::SQRT_2)
}

/// √2·β' = J − q' with q = (a + 1/4)m'/m^{3/2}.
fn riccati_beta_d1_scaled(profile: &MassProfile, x: f64) -> Result<f64> {
    let c = profile.ordering_a() + 0.25;
    let (m, m1, m2) = (profile.mass(x)?, profile.mass_d1(x)?, profile.mass_d2(x)?);
    let q1 = c * (m2 / m.powf(1.5) - 1.5 * m1 * m1 / m.powf(2.5));
    Ok(profile.jacobian(x)? - q1)
}

/// V − ε − [(1/√(2m))(2(a+1/4)(m'/m)β − β') + β²] for V = s², ε = 1,
/// in units of ħω₀/2.
pub fn riccati_residual(profile: &MassProfile, x: f64) -> Result<f64> {
    let c = profile.ordering_a() + 0.25;
    let (m, m1) = (profile.mass(x)?, profile.mass_d1(x)?);
    let beta = riccati_beta(profile, x)?;
    let beta1 = riccati_beta_d1_scaled(profile, x)? / std::f64::consts::SQRT_2;
    let s = profile.bijection_s(x)?;
    let bracket = (2.0 * c * (m1 / m) * beta - beta1) / (2.0 * m).sqrt() + beta * beta;
    Ok(s * s - 1.0 - 2.0 * bracket)
}

/// Ṽ − V = −[A, B] = (a+1/4)(m m'' − 3m'²/2)/m³ + 2β'/√(2m), in units of ħω₀/2.
pub fn partner_shift(profile: &MassProfile, x: f64) -> Result<f64> {
    let c = profile.ordering_a() + 0.25;
    let (m, m1, m2) = (profile.mass(x)?, profile.mass_d1(x)?, profile.mass_d2(x)?);
    // 2β'/√(2m) = √2β'/√m
    let shift = c * (m * m2 - 1.5 * m1 * m1) / (m * m * m) + riccati_beta_d1_scaled(profile, x)? / m.sqrt();
    Ok(2.0 * shift)
}

/// 200 points spread over the bulk of the profile's natural domain.
pub fn profile_sample_points(profile: &MassProfile) -> Vec<f64> {
    let span = 6.0 / profile.lambda().abs();
    let edge = profile.natural_lower_edge();
    let lo = if edge.is_finite() { edge } else { -span };
    (1..=200).map(|i| lo + span * i as f64 / 200.0).collect()
}

/// max |Ṽ − V − 2| on sampled points.
pub fn partner_shift_check(system: &PdmSystem) -> Result<VerificationReport> {
    let pr = system.profile();
    let mut worst = 0.0f64;
    for x in profile_sample_points(pr) {
        worst = worst.max((partner_shift(pr, x)? - 2.0).abs());
    }
    Ok(VerificationReport::new("partner_shift", worst, 1e-9).with("system", system))
}

/// max |V_k(x) − (s² + g₀/(2s²))| / (1 + |V_k|) on 200 points of the domain.
pub fn closed_form_agreement(system: &PdmSystem) -> Result<f64> {
    let pr = system.profile();
    let span = 5.0 / pr.lambda().abs();
    let lo = system.x_lower();
    let lo = if lo.is_finite() { lo } else { -span };
    let mut worst = 0.0f64;
    for i in 1..=200 {
        let x = lo + span * i as f64 / 200.0;
        let a = system.closed_form_potential(x)?;
        let b = system.potential(x)?;
        worst = worst.max((a - b).abs() / (1.0 + a.abs()));
    }
    Ok(worst)
}

/// Max pointwise distance, relative to the sup of `reference`.
pub fn relative_sup(residual: &GridFunction, reference: &GridFunction, exclude: usize) -> f64 {
    sup_norm(residual, exclude) / sup_norm(reference, exclude)
}
