//! Named invariant checks, run concurrently and reported in a fixed order.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coherent::{
    bg_normalization_identity, displacement_check, glauber_uncertainty, perelomov_norm_check, CoherentKind,
    CoherentState,
};
use crate::error::{Error, Result};
use crate::massmap::MassProfile;
use crate::verify::quadrature::integrate_with_breaks;
use crate::verify::{Grid, GridFunction, VerificationReport};
use crate::xspace::{
    catalog, closed_form_agreement, partner_shift, profile_sample_points, riccati_residual, PdmSystem, PotentialId,
};
use crate::yspace::{self, apply_ladder, casimir_residual, Basis, Direction, FockVector, SingularParams};

/// Every check id with its default tolerance, in report order.
pub const CHECKS: &[(&str, f64)] = &[
    ("spectrum", 1e-12),
    ("casimir", 1e-12),
    ("gamma_identity", 1e-10),
    ("ladder_fock", 0.0),
    ("kummer", 1e-9),
    ("mdnt_ode", 1e-9),
    ("profile_valid", 0.0),
    ("y_eigen", 1e-4),
    ("y_ladder", 1e-4),
    ("y_commutator", 1e-3),
    ("y_orthonormality", 1e-8),
    ("x_eigen", 1e-4),
    ("x_orthonormality", 1e-8),
    ("x_ladder", 1e-3),
    ("x_raised", 1e-3),
    ("x_commutator", 1e-3),
    ("riccati", 1e-9),
    ("partner_shift", 1e-9),
    ("closed_form", 1e-12),
    ("bg_norm", 1e-10),
    ("bg_eigen", 1e-8),
    ("bg_mass_independence", 0.0),
    ("bg_identity", 1e-10),
    ("bg_quadrature", 1e-8),
    ("perelomov_norm", 1e-10),
    ("perelomov_identity", 1e-8),
    ("perelomov_domain", 0.0),
    ("glauber_overlap", 1e-8),
    ("glauber_eigen", 1e-8),
    ("glauber_displacement", 1e-8),
    ("glauber_uncertainty", 1e-6),
    ("limit_g0", 1e-3),
    ("limit_constant_mass", 0.0),
    // residual is the inverse of the smallest reduction per grid halving
    ("convergence_order", 1.0 / 12.0),
    ("determinism", 0.0),
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|(id, _)| *id).collect()
}

pub fn default_tolerance(id: &str) -> Option<f64> {
    CHECKS.iter().find(|(c, _)| *c == id).map(|(_, t)| *t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Coupling for the x-space and coherent-state checks.
    pub g0: f64,
    /// Couplings swept by the y-space checks.
    pub couplings: Vec<f64>,
    /// Highest quantum number in the residual checks.
    pub nmax: usize,
    /// Points of the residual grids.
    pub points: usize,
    /// Per-check tolerance overrides.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { g0: 2.0, couplings: vec![0.5, 2.0, 3.5], nmax: 5, points: 4000, tolerances: BTreeMap::new() }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        SingularParams::new(self.g0)?;
        for &g in &self.couplings {
            SingularParams::new(g)?;
        }
        if self.points < 64 {
            return Err(Error::usage(format!("residual grids need at least 64 points, got {}", self.points)));
        }
        for (id, tol) in &self.tolerances {
            if default_tolerance(id).is_none() {
                return Err(Error::usage(format!("tolerance given for unknown check {id:?}")));
            }
            if !(*tol >= 0.0) {
                return Err(Error::usage(format!("tolerance for {id} must be non-negative")));
            }
        }
        Ok(())
    }

    pub fn tolerance_for(&self, id: &str) -> Option<f64> {
        self.tolerances.get(id).copied().or_else(|| default_tolerance(id))
    }

    fn params(&self) -> Result<SingularParams> {
        SingularParams::new(self.g0)
    }

    fn system(&self, id: PotentialId) -> Result<PdmSystem> {
        PdmSystem::with_defaults(id, self.g0)
    }
}

/// Largest residual seen, with a description of where.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Self { value: 0.0, at: String::new() }
    }

    fn update(&mut self, value: f64, at: impl FnOnce() -> String) {
        if !(value <= self.value) {
            self.value = value;
            self.at = at();
        }
    }
}

type Outcome = Result<(f64, Vec<(&'static str, String)>)>;

fn worst_outcome(w: Worst) -> Outcome {
    Ok((w.value, if w.at.is_empty() { vec![] } else { vec![("worst", w.at)] }))
}

/// Runs the selected checks; "all" selects every check. Reports come back
/// in the fixed order of [`CHECKS`], one per distinct id.
pub fn run_suite<S: AsRef<str>>(selection: &[S], config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    config.validate()?;
    let mut chosen = vec![false; CHECKS.len()];
    for s in selection {
        let s = s.as_ref();
        if s == "all" {
            chosen.iter_mut().for_each(|c| *c = true);
            continue;
        }
        let i = CHECKS
            .iter()
            .position(|(id, _)| *id == s)
            .ok_or_else(|| Error::usage(format!("unknown check id {s:?}")))?;
        chosen[i] = true;
    }
    let ids: Vec<&str> = CHECKS.iter().zip(&chosen).filter(|(_, c)| **c).map(|((id, _), _)| *id).collect();
    Ok(ids.par_iter().map(|id| run_check(id, config)).collect())
}

fn run_check(id: &str, config: &SuiteConfig) -> VerificationReport {
    let tol = config.tolerance_for(id).expect("id comes from the check table");
    let outcome = match id {
        "spectrum" => spectrum(),
        "casimir" => casimir(config),
        "gamma_identity" => gamma_identity(config),
        "ladder_fock" => ladder_fock(config),
        "kummer" => kummer(config),
        "mdnt_ode" => mdnt_ode(),
        "profile_valid" => profile_valid(config),
        "y_eigen" => y_eigen(config),
        "y_ladder" => y_ladder(config),
        "y_commutator" => y_commutator(config),
        "y_orthonormality" => y_orthonormality(config),
        "x_eigen" => x_eigen(config),
        "x_orthonormality" => x_orthonormality(config),
        "x_ladder" => x_ladder(config),
        "x_raised" => x_raised(config),
        "x_commutator" => x_commutator(config),
        "riccati" => riccati(),
        "partner_shift" => partner_shift_all(),
        "closed_form" => closed_form(config),
        "bg_norm" => bg_norm(config),
        "bg_eigen" => bg_eigen(config),
        "bg_mass_independence" => bg_mass_independence(config),
        "bg_identity" => bg_identity(config),
        "bg_quadrature" => bg_quadrature(config),
        "perelomov_norm" => perelomov_norm(config),
        "perelomov_identity" => perelomov_identity(config),
        "perelomov_domain" => perelomov_domain(config),
        "glauber_overlap" => glauber_overlap(),
        "glauber_eigen" => glauber_eigen(),
        "glauber_displacement" => glauber_displacement(),
        "glauber_uncertainty" => glauber_uncertainty_check(),
        "limit_g0" => limit_g0(),
        "limit_constant_mass" => limit_constant_mass(config),
        "convergence_order" => convergence_order(config),
        "determinism" => determinism(config),
        _ => unreachable!("check table and dispatch agree"),
    };
    match outcome {
        Ok((residual, ctx)) => {
            let mut r = VerificationReport::new(id, residual, tol);
            for (k, v) in ctx {
                r = r.with(k, v);
            }
            r
        }
        Err(e) => VerificationReport::new(id, f64::INFINITY, tol).with("error", e),
    }
}

const BG_POINTS: [Complex64; 3] = [Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0), Complex64::new(4.0, 3.0)];
const BG_COUPLINGS: [f64; 2] = [0.5, 2.0];
const FIGURE_SYSTEMS: [PotentialId; 4] = [PotentialId::V1, PotentialId::V2, PotentialId::V3, PotentialId::V5];

fn spectrum() -> Outcome {
    let (p0, p2) = (SingularParams::new(0.0)?, SingularParams::new(2.0)?);
    let mut w = Worst::new();
    for n in 0..=20 {
        w.update((p0.energy(n) - (4 * n + 3) as f64).abs(), || format!("g0=0 n={n}"));
        w.update((p2.energy(n) - (4.0 * n as f64 + 2.0 + 5f64.sqrt())).abs(), || format!("g0=2 n={n}"));
    }
    worst_outcome(w)
}

fn casimir(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for &g in std::iter::once(&config.g0).chain(&config.couplings) {
        let p = SingularParams::new(g)?;
        w.update((p.casimir_value() - p.casimir_from_kappa()).abs(), || format!("g0={g} closed form"));
        w.update(casimir_residual(&p, 20)?, || format!("g0={g} coefficient space"));
    }
    worst_outcome(w)
}

fn gamma_identity(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for &g in std::iter::once(&config.g0).chain(&config.couplings) {
        let p = SingularParams::new(g)?;
        for n in 0..=20 {
            let e = p.energy(n);
            let rhs = e * e + 4.0 * e + 3.0 - 2.0 * g;
            w.update((p.gamma_plus(n) * p.gamma_minus(n + 1) - rhs).abs() / rhs.abs(), || format!("g0={g} n={n}"));
        }
    }
    worst_outcome(w)
}

fn ladder_fock(config: &SuiteConfig) -> Outcome {
    let p = config.params()?;
    let basis = Basis::Singular(p);
    let mut w = Worst::new();
    for n in 0..=20 {
        let e = FockVector::unit(basis, n);
        let up =
            apply_ladder(&e, Direction::Raise).sub(&FockVector::unit(basis, n + 1).scale(p.gamma_plus(n).into()))?;
        w.update(up.norm(), || format!("raise n={n}"));
        let expect = if n == 0 { FockVector::new(basis, vec![]) } else { FockVector::unit(basis, n - 1) };
        let down = apply_ladder(&e, Direction::Lower).sub(&expect.scale(p.gamma_minus(n).into()))?;
        w.update(down.norm(), || format!("lower n={n}"));
    }
    worst_outcome(w)
}

fn kummer(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for &g in &config.couplings {
        let p = SingularParams::new(g)?;
        for n in 0..=config.nmax {
            let l1 = p.kummer_normalization(n)?;
            for i in 0..50 {
                let y = 0.1 + 4.9 * i as f64 / 49.0;
                let (k, f) = (p.kummer_phi(p.energy(n), l1, 0.0, y)?, p.phi_n(n, y)?);
                w.update((k - f).abs() / f.abs().max(1e-3), || format!("g0={g} n={n} y={y}"));
            }
        }
    }
    worst_outcome(w)
}

fn mdnt_ode() -> Outcome {
    let mut w = Worst::new();
    for n in 1..=5 {
        for (x0, lambda) in [(0.0, 1.0), (0.5, 1.7)] {
            let pr = MassProfile::mdnt_n(n, x0, lambda)?;
            let (c1, c2) = crate::massmap::mdnt_coefficients(pr.ordering_a());
            for x in profile_sample_points(&pr) {
                let (m, m1, m2) = (pr.mass(x)?, pr.mass_d1(x)?, pr.mass_d2(x)?);
                let scale = (c1 * m * m2).abs() + (c2 * m1 * m1).abs();
                w.update(pr.mdnt_residual(x)?.abs() / scale.max(f64::MIN_POSITIVE), || format!("{pr} x={x}"));
            }
        }
    }
    worst_outcome(w)
}

fn profile_valid(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    let mut total = 0.0;
    for entry in catalog() {
        let sys = match entry.id {
            PotentialId::LinearPdm => PdmSystem::with_defaults(entry.id, 0.0)?,
            id if id == PotentialId::V7 => PdmSystem::with_defaults(id, 2.0)?,
            id => config.system(id)?,
        };
        let r = sys.profile().validate();
        total += r.residual;
        w.update(r.residual, || format!("{sys}"));
    }
    Ok((total, if total > 0.0 { vec![("worst", w.at)] } else { vec![] }))
}

fn y_eigen(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for &g in &config.couplings {
        let p = SingularParams::new(g)?;
        let grid = yspace::residual_grid(&p, config.nmax, config.points)?;
        for n in 0..=config.nmax {
            w.update(yspace::eigen_residual(&p, n, grid)?, || format!("g0={g} n={n}"));
        }
    }
    let (v, mut ctx) = worst_outcome(w)?;
    ctx.push(("points", config.points.to_string()));
    Ok((v, ctx))
}

fn y_ladder(config: &SuiteConfig) -> Outcome {
    let p = config.params()?;
    let grid = yspace::residual_grid(&p, config.nmax + 1, config.points)?;
    let mut w = Worst::new();
    for n in 0..=config.nmax {
        for d in [Direction::Raise, Direction::Lower] {
            w.update(yspace::ladder_residual(&p, n, d, grid)?, || format!("n={n} {d:?}"));
        }
    }
    worst_outcome(w)
}

fn y_commutator(config: &SuiteConfig) -> Outcome {
    let p = config.params()?;
    let grid = Grid::uniform(0.5, 8.0, 4001)?;
    let mut w = Worst::new();
    for (c, width) in [(2.0, 1.2), (3.0, 1.5), (4.0, 2.0), (5.0, 1.0), (3.5, 2.5)] {
        let f = GridFunction::sample(grid, |y| yspace::bump(c, width, y));
        w.update(yspace::commutator_residual(&p, &f)?, || format!("bump({c},{width})"));
    }
    worst_outcome(w)
}

/// Largest |⟨f_n, f_m⟩ − δ_nm| for n, m ≤ nmax.
fn gram_defect(values: impl Fn(f64) -> Vec<f64> + Sync, breaks: &[f64], nmax: usize) -> Result<(f64, String)> {
    let pairs: Vec<(usize, usize)> = (0..=nmax).flat_map(|n| (0..=n).map(move |m| (n, m))).collect();
    let defects = pairs
        .par_iter()
        .map(|&(n, m)| {
            let v = integrate_with_breaks(
                |x| {
                    let f = values(x);
                    f[n] * f[m]
                },
                breaks,
                1e-12,
            )?
            .value;
            Ok(((v - if n == m { 1.0 } else { 0.0 }).abs(), format!("n={n} m={m}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut w = Worst::new();
    for (d, at) in defects {
        w.update(d, || at);
    }
    Ok((w.value, w.at))
}

fn y_orthonormality(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for &g in std::iter::once(&0.0).chain(&config.couplings) {
        let p = SingularParams::new(g)?;
        let y_max = p.decay_radius(8, 1e-12)?;
        let breaks: Vec<f64> = (0..=12).map(|i| y_max * i as f64 / 12.0).collect();
        let (d, at) = gram_defect(
            |y| {
                if y > 0.0 {
                    p.phi_all(8, y).unwrap_or_else(|_| vec![0.0; 9])
                } else {
                    vec![0.0; 9]
                }
            },
            &breaks,
            8,
        )?;
        w.update(d, || format!("g0={g} {at}"));
    }
    worst_outcome(w)
}

fn x_eigen(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    let mut warnings = Vec::new();
    for id in FIGURE_SYSTEMS {
        let sys = config.system(id)?;
        let grid = sys.residual_grid(config.nmax, config.points)?;
        for n in 0..=config.nmax {
            let (r, warn) = sys.eigen_residual(n, grid)?;
            if let Some(msg) = warn {
                warnings.push(format!("{id} n={n}: {msg}"));
            }
            w.update(r, || format!("{id} n={n}"));
        }
    }
    let (v, mut ctx) = worst_outcome(w)?;
    ctx.push(("points", config.points.to_string()));
    if !warnings.is_empty() {
        ctx.push(("warning", warnings.join("; ")));
    }
    Ok((v, ctx))
}

fn x_orthonormality(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for id in [PotentialId::V1, PotentialId::V5] {
        let sys = config.system(id)?;
        let breaks = sys.quadrature_breaks(8)?;
        let (d, at) = gram_defect(|x| sys.psi_all(8, x).unwrap_or_else(|_| vec![0.0; 9]), &breaks, 8)?;
        w.update(d, || format!("{id} {at}"));
    }
    worst_outcome(w)
}

fn linear_systems() -> Result<Vec<PdmSystem>> {
    [MassProfile::constant(), MassProfile::regular(1.0), MassProfile::mdnt0(1.0, 1.0)]
        .into_iter()
        .map(|pr| PdmSystem::new(pr, None, PotentialId::LinearPdm))
        .collect()
}

fn x_ladder(config: &SuiteConfig) -> Outcome {
    let mut systems = vec![config.system(PotentialId::V1)?, config.system(PotentialId::V5)?];
    systems.extend(linear_systems()?);
    let mut w = Worst::new();
    for sys in systems {
        let grid = sys.residual_grid(config.nmax + 1, config.points)?;
        for n in 0..config.nmax {
            for d in [Direction::Raise, Direction::Lower] {
                w.update(sys.ladder_residual(n, d, grid)?, || format!("{sys} n={n} {d:?}"));
            }
        }
    }
    worst_outcome(w)
}

fn x_raised(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for id in [PotentialId::V1, PotentialId::V5] {
        let sys = config.system(id)?;
        for n in 0..=3 {
            w.update(sys.raised_eigen_residual(n)?, || format!("{id} n={n}"));
        }
    }
    worst_outcome(w)
}

fn x_commutator(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for sys in linear_systems()? {
        let grid = sys.residual_grid(4, config.points)?;
        for n in 0..=2 {
            let f = sys.sample_psi(n, grid)?;
            w.update(sys.commutator_residual(&f)?, || format!("{sys} n={n}"));
        }
    }
    worst_outcome(w)
}

fn structural_profiles() -> Result<Vec<MassProfile>> {
    Ok(vec![
        MassProfile::constant(),
        MassProfile::regular(1.0),
        MassProfile::mdnt0(1.0, 1.0),
        MassProfile::mdnt_n(1, 0.0, 1.0)?,
        MassProfile::mdnt_n(3, 0.4, 1.3)?,
        MassProfile::exponential(1.0, 0.7),
    ])
}

fn riccati() -> Outcome {
    let mut w = Worst::new();
    for pr in structural_profiles()? {
        for x in profile_sample_points(&pr) {
            let scale = 1.0 + pr.bijection_s(x)?.powi(2);
            w.update(riccati_residual(&pr, x)?.abs() / scale, || format!("{pr} x={x}"));
        }
    }
    worst_outcome(w)
}

fn partner_shift_all() -> Outcome {
    let mut w = Worst::new();
    for pr in structural_profiles()? {
        for x in profile_sample_points(&pr) {
            w.update((partner_shift(&pr, x)? - 2.0).abs(), || format!("{pr} x={x}"));
        }
    }
    worst_outcome(w)
}

fn closed_form(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for id in PotentialId::ALL {
        if id == PotentialId::LinearPdm {
            continue;
        }
        for &g in std::iter::once(&config.g0).chain(&config.couplings) {
            let g = if id == PotentialId::V7 { 2.0 } else { g };
            let sys = PdmSystem::with_defaults(id, g)?;
            w.update(closed_form_agreement(&sys)?, || format!("{sys}"));
        }
    }
    worst_outcome(w)
}

fn bg_states() -> Result<Vec<(f64, Complex64, CoherentState)>> {
    let mut out = Vec::new();
    for g in BG_COUPLINGS {
        let sys = PdmSystem::singular_constant_mass(g)?;
        for z in BG_POINTS {
            out.push((g, z, CoherentState::build(CoherentKind::BarutGirardello, &sys, z, 1e-15)?));
        }
    }
    Ok(out)
}

fn bg_norm(_: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for (g, z, cs) in bg_states()? {
        w.update((cs.norm().powi(2) - 1.0).abs(), || format!("g0={g} z={z} N={}", cs.truncation()));
    }
    worst_outcome(w)
}

fn bg_eigen(_: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for (g, z, cs) in bg_states()? {
        w.update(cs.eigen_residual()?, || format!("g0={g} z={z}"));
    }
    worst_outcome(w)
}

/// Number of profiles whose coefficients differ in any bit from the
/// constant-mass ones.
fn bg_mass_independence(_: &SuiteConfig) -> Outcome {
    let mut mismatches = 0.0;
    let mut at = Vec::new();
    for g in BG_COUPLINGS {
        for z in BG_POINTS {
            let reference =
                CoherentState::build(CoherentKind::BarutGirardello, &PdmSystem::singular_constant_mass(g)?, z, 1e-15)?;
            for id in
                [PotentialId::V1, PotentialId::V2, PotentialId::V3, PotentialId::V4, PotentialId::V5, PotentialId::V6]
            {
                let cs =
                    CoherentState::build(CoherentKind::BarutGirardello, &PdmSystem::with_defaults(id, g)?, z, 1e-15)?;
                let same = cs.coeffs().coeffs().len() == reference.coeffs().coeffs().len()
                    && cs
                        .coeffs()
                        .coeffs()
                        .iter()
                        .zip(reference.coeffs().coeffs())
                        .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
                if !same {
                    mismatches += 1.0;
                    at.push(format!("{id} g0={g} z={z}"));
                }
            }
        }
    }
    Ok((mismatches, if at.is_empty() { vec![] } else { vec![("worst", at.join("; "))] }))
}

fn bg_identity(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for &g in BG_COUPLINGS.iter().chain(&config.couplings) {
        let p = SingularParams::new(g)?;
        for r in [0.1, 0.5, 1.0, 2.0, 4.0, 5.0, 8.0] {
            w.update(bg_normalization_identity(&p, r)?, || format!("g0={g} |z|={r}"));
        }
    }
    worst_outcome(w)
}

fn bg_quadrature(config: &SuiteConfig) -> Outcome {
    let sys = config.system(PotentialId::V5)?;
    let mut w = Worst::new();
    for z in [Complex64::new(2.0, 1.0), Complex64::new(0.5, 0.0)] {
        let cs = CoherentState::build(CoherentKind::BarutGirardello, &sys, z, 1e-15)?;
        w.update((cs.norm_by_quadrature()? - 1.0).abs(), || format!("{sys} z={z}"));
    }
    worst_outcome(w)
}

const PERELOMOV_RADII: [f64; 6] = [0.0, 0.3, 0.5, 0.8, 0.9, 0.95];

fn perelomov_norm(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for g in BG_COUPLINGS.iter().chain(std::iter::once(&config.g0)) {
        let sys = PdmSystem::singular_constant_mass(*g)?;
        for q in PERELOMOV_RADII {
            let z = Complex64::from_polar(0.25 * q, 0.7);
            let cs = CoherentState::build(CoherentKind::Perelomov, &sys, z, 1e-15)?;
            w.update((cs.norm().powi(2) - 1.0).abs(), || format!("g0={g} |4z|={q} N={}", cs.truncation()));
        }
    }
    worst_outcome(w)
}

fn perelomov_identity(config: &SuiteConfig) -> Outcome {
    let mut w = Worst::new();
    for g in BG_COUPLINGS.iter().chain(std::iter::once(&config.g0)) {
        let p = SingularParams::new(*g)?;
        for q in PERELOMOV_RADII {
            w.update(perelomov_norm_check(&p, Complex64::new(0.25 * q, 0.0))?, || format!("g0={g} |4z|={q}"));
        }
    }
    worst_outcome(w)
}

/// Number of |4z| ≥ 1 requests that did not raise a domain error.
fn perelomov_domain(config: &SuiteConfig) -> Outcome {
    let sys = PdmSystem::singular_constant_mass(config.g0)?;
    let p = config.params()?;
    let mut missed = 0.0;
    for q in [1.0, 1.2, 4.0] {
        let z = Complex64::from_polar(0.25 * q, -0.4);
        if !matches!(CoherentState::build(CoherentKind::Perelomov, &sys, z, 1e-12), Err(Error::Domain(_))) {
            missed += 1.0;
        }
        if !matches!(perelomov_norm_check(&p, z), Err(Error::Domain(_))) {
            missed += 1.0;
        }
    }
    Ok((missed, vec![]))
}

fn glauber_system() -> Result<PdmSystem> {
    PdmSystem::new(MassProfile::constant(), None, PotentialId::LinearPdm)
}

fn glauber_overlap() -> Outcome {
    let sys = glauber_system()?;
    let pairs = [
        (Complex64::new(1.0, 0.0), Complex64::new(1.0, 2.0)),
        (Complex64::new(0.0, 0.0), Complex64::new(-2.0, 1.5)),
        (Complex64::new(3.0, -1.0), Complex64::new(2.5, 0.5)),
    ];
    let mut w = Worst::new();
    for (z1, z2) in pairs {
        let a = CoherentState::build(CoherentKind::Glauber, &sys, z1, 1e-15)?;
        let b = CoherentState::build(CoherentKind::Glauber, &sys, z2, 1e-15)?;
        let expect = (-0.25 * (z1 - z2).norm_sqr()).exp();
        w.update((a.overlap(&b)?.norm() - expect).abs(), || format!("z={z1} z'={z2}"));
    }
    worst_outcome(w)
}

fn glauber_eigen() -> Outcome {
    let sys = glauber_system()?;
    let mut w = Worst::new();
    for z in [Complex64::new(1.0, 1.0), BG_POINTS[0], BG_POINTS[1], BG_POINTS[2]] {
        let cs = CoherentState::build(CoherentKind::Glauber, &sys, z, 1e-15)?;
        w.update(cs.eigen_residual()?, || format!("z={z}"));
    }
    worst_outcome(w)
}

fn glauber_displacement() -> Outcome {
    let sys = glauber_system()?;
    let mut w = Worst::new();
    for (z, dim) in [(Complex64::new(1.0, 0.0), 40), (Complex64::new(0.0, 2.0), 60), (Complex64::new(-1.5, 0.7), 60)] {
        w.update(displacement_check(&sys, z, dim)?, || format!("z={z} N={dim}"));
    }
    worst_outcome(w)
}

fn glauber_uncertainty_check() -> Outcome {
    let base = glauber_uncertainty(Complex64::new(0.0, 0.0), 1e-15)?;
    let mut w = Worst::new();
    for z in [Complex64::new(1.0, 0.0), Complex64::new(0.5, -2.0), Complex64::new(-3.0, 1.0)] {
        w.update((glauber_uncertainty(z, 1e-15)? - base).abs(), || format!("z={z}"));
    }
    let (v, mut ctx) = worst_outcome(w)?;
    ctx.push(("minimum", format!("{base:.12}")));
    Ok((v, ctx))
}

fn limit_g0() -> Outcome {
    let (p0, p) = (SingularParams::new(0.0)?, SingularParams::new(1e-8)?);
    let mut w = Worst::new();
    for n in 0..=3 {
        for i in 1..=800 {
            let y = i as f64 * 0.01;
            w.update((p.phi_n(n, y)? - p0.phi_n(n, y)?).abs(), || format!("n={n}"));
        }
    }
    worst_outcome(w)
}

/// Number of constant-mass evaluations that differ in any bit from the
/// y-space ones.
fn limit_constant_mass(config: &SuiteConfig) -> Outcome {
    let mut mismatches = Vec::new();
    for &g in std::iter::once(&config.g0).chain(&config.couplings) {
        let sys = PdmSystem::singular_constant_mass(g)?;
        let p = SingularParams::new(g)?;
        let grid = sys.residual_grid(config.nmax, 800)?;
        if grid != yspace::residual_grid(&p, config.nmax, 800)? {
            mismatches.push(format!("g0={g} grid"));
        }
        for n in 0..=config.nmax {
            for y in [0.05, 0.5, 1.0, 2.7, 5.0] {
                if sys.psi_n(n, y)?.to_bits() != p.phi_n(n, y)?.to_bits() {
                    mismatches.push(format!("g0={g} psi n={n} y={y}"));
                }
            }
            let phi = yspace::sample_phi(&p, n, grid)?;
            if sys.apply_hamiltonian(&phi)? != yspace::apply_h(&p, &phi)? {
                mismatches.push(format!("g0={g} h n={n}"));
            }
            for d in [Direction::Raise, Direction::Lower] {
                if sys.apply_cpm(&phi, d)? != yspace::apply_c(&p, &phi, d)? {
                    mismatches.push(format!("g0={g} C n={n} {d:?}"));
                }
            }
            if sys.eigen_residual(n, grid)?.0.to_bits() != yspace::eigen_residual(&p, n, grid)?.to_bits() {
                mismatches.push(format!("g0={g} residual n={n}"));
            }
        }
    }
    let lin = glauber_system()?;
    let f = GridFunction::sample(Grid::uniform(-6.0, 6.0, 301)?, |y| yspace::linear_phi(3, y));
    if lin.apply_b(&f)? != yspace::grid_a_minus(&f)? || lin.apply_a(&f)? != yspace::grid_a_plus(&f)? {
        mismatches.push("linear ladders".into());
    }
    let ctx = if mismatches.is_empty() { vec![] } else { vec![("worst", mismatches.join("; "))] };
    Ok((mismatches.len() as f64, ctx))
}

/// Smallest eigen-residual reduction over two grid halvings, for n ≤ 3 in
/// y-space and on the V5 system; the residual is its inverse.
fn convergence_order(config: &SuiteConfig) -> Outcome {
    let p = config.params()?;
    let v5 = config.system(PotentialId::V5)?;
    let mut smallest = f64::INFINITY;
    let mut at = String::new();
    for n in 0..=3 {
        let mut ry = Vec::new();
        let mut rx = Vec::new();
        for points in [250, 500, 1000] {
            ry.push(yspace::eigen_residual(&p, n, yspace::residual_grid(&p, 3, points)?)?);
            rx.push(v5.eigen_residual(n, v5.residual_grid(3, points)?)?.0);
        }
        for (label, r) in [("y-space", &ry), ("V5", &rx)] {
            for k in 0..2 {
                let ratio = r[k] / r[k + 1];
                if ratio < smallest {
                    smallest = ratio;
                    at = format!("{label} n={n} halving {}", k + 1);
                }
            }
        }
    }
    Ok((1.0 / smallest, vec![("smallest_ratio", format!("{smallest:.2}")), ("worst", at)]))
}

/// Number of differing reports when a sample of checks is run twice.
fn determinism(config: &SuiteConfig) -> Outcome {
    let sample = ["x_eigen", "bg_norm", "y_orthonormality", "glauber_uncertainty"];
    let first: Vec<VerificationReport> = sample.par_iter().map(|id| run_check(id, config)).collect();
    let second: Vec<VerificationReport> = sample.iter().map(|id| run_check(id, config)).collect();
    let differing = first
        .iter()
        .zip(&second)
        .filter(|(a, b)| a.residual.to_bits() != b.residual.to_bits() || a.context != b.context)
        .count();
    Ok((differing as f64, vec![]))
}
