//! Mass profiles m(x), the point bijections y = s(x) they induce, and
//! the Jacobian J = s' = (m/m₀)^{1/2}.
//!
//! Masses are dimensionless (m/m₀). Every profile knows two domains:
//! the *natural* one where its closed forms are defined with J finite and
//! positive, and the half-line `[x_min, ∞)` on which `s ≥ 0`, which is
//! what a singular oscillator lives on.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::verify::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    /// m = (x₀+λx)⁻², ordering a = -1/4.
    Mdnt0,
    /// m = (x₀+λx)^{-4n/(2n+1)}, ordering a = (1-n)/(4n).
    MdntN(u32),
    /// m = 1/(1+(λx)²), ordering a = -1/4.
    Regular,
    /// m = e^{2λx}, ordering a = -1/4.
    Exponential,
    ConstantMass,
}

impl ProfileKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProfileKind::Mdnt0 => "mdnt0",
            ProfileKind::MdntN(_) => "mdnt",
            ProfileKind::Regular => "regular",
            ProfileKind::Exponential => "exponential",
            ProfileKind::ConstantMass => "constant",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassProfile {
    kind: ProfileKind,
    x0: f64,
    lambda: f64,
    ordering_a: f64,
    x_min: f64,
}

/// Ordering label a_n = (1-n)/(4n) that makes m ∝ (x₀+λx)^{-4n/(2n+1)}
/// a mass-dependent null-term solution.
pub fn mdnt_ordering(n: u32) -> f64 {
    (1.0 - n as f64) / (4.0 * n as f64)
}

/// Coefficients (c₁, c₂) of c₁·m·m'' + c₂·(m')² = 0 for ordering `a`,
/// with c₁ = 1/4 + a and c₂ = 1/16 - a² - (1/2 + 2a).
pub fn mdnt_coefficients(a: f64) -> (f64, f64) {
    let c1 = 0.25 + a;
    let c2 = 1.0 / 16.0 - a * a - (0.5 + 2.0 * a);
    (c1, c2)
}

impl MassProfile {
    fn with_kind(kind: ProfileKind, x0: f64, lambda: f64, ordering_a: f64) -> Self {
        let mut p = Self { kind, x0, lambda, ordering_a, x_min: f64::NAN };
        p.x_min = p.natural_x_min();
        p
    }

    pub fn mdnt0(x0: f64, lambda: f64) -> Self {
        Self::with_kind(ProfileKind::Mdnt0, x0, lambda, -0.25)
    }

    pub fn mdnt_n(n: u32, x0: f64, lambda: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("MDNT order n must be at least 1"));
        }
        Ok(Self::with_kind(ProfileKind::MdntN(n), x0, lambda, mdnt_ordering(n)))
    }

    pub fn regular(lambda: f64) -> Self {
        Self::with_kind(ProfileKind::Regular, 0.0, lambda, -0.25)
    }

    pub fn exponential(x0: f64, lambda: f64) -> Self {
        Self::with_kind(ProfileKind::Exponential, x0, lambda, -0.25)
    }

    pub fn constant() -> Self {
        Self::with_kind(ProfileKind::ConstantMass, 0.0, 1.0, -0.25)
    }

    /// Overrides the lower end of the singular-oscillator domain.
    pub fn with_x_min(mut self, x_min: f64) -> Self {
        self.x_min = x_min;
        self
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn ordering_a(&self) -> f64 {
        self.ordering_a
    }

    /// b = -1/2 - a, so that 2a + 2b = -1.
    pub fn ordering_b(&self) -> f64 {
        -0.5 - self.ordering_a
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// The point where s vanishes (−∞ when s only vanishes asymptotically,
    /// NaN when it never does).
    pub fn natural_x_min(&self) -> f64 {
        let (x0, l) = (self.x0, self.lambda);
        match self.kind {
            ProfileKind::Mdnt0 => (1.0 - x0) / l,
            ProfileKind::MdntN(_) => -x0 / l,
            ProfileKind::Regular | ProfileKind::ConstantMass => 0.0,
            ProfileKind::Exponential => {
                if x0 > 0.0 {
                    x0.ln() / l
                } else if x0 == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    f64::NAN
                }
            }
        }
    }

    /// Lower edge of the natural domain (open), −∞ when unbounded.
    pub fn natural_lower_edge(&self) -> f64 {
        match self.kind {
            ProfileKind::Mdnt0 | ProfileKind::MdntN(_) => -self.x0 / self.lambda,
            _ => f64::NEG_INFINITY,
        }
    }

    fn u(&self, x: f64) -> f64 {
        self.x0 + self.lambda * x
    }

    fn check_lambda(&self) -> Result<()> {
        if self.lambda == 0.0 && self.kind != ProfileKind::ConstantMass {
            return Err(Error::domain("degenerate Jacobian: lambda = 0"));
        }
        Ok(())
    }

    /// Whether x lies in the open natural domain (J finite and positive).
    pub fn is_defined_at(&self, x: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        match self.kind {
            ProfileKind::Mdnt0 | ProfileKind::MdntN(_) => self.u(x) > 0.0,
            _ => true,
        }
    }

    fn check_x(&self, x: f64) -> Result<()> {
        self.check_lambda()?;
        if self.is_defined_at(x) {
            Ok(())
        } else {
            Err(Error::domain(format!("x = {x} is outside the domain of the {} profile", self.kind.name())))
        }
    }

    /// Dimensionless mass m(x)/m₀.
    pub fn mass(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let l = self.lambda;
        Ok(match self.kind {
            ProfileKind::Mdnt0 => self.u(x).powi(-2),
            ProfileKind::MdntN(n) => self.u(x).powf(-4.0 * n as f64 / (2 * n + 1) as f64),
            ProfileKind::Regular => 1.0 / (1.0 + (l * x) * (l * x)),
            ProfileKind::Exponential => (2.0 * l * x).exp(),
            ProfileKind::ConstantMass => 1.0,
        })
    }

    /// dm/dx.
    pub fn mass_d1(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let l = self.lambda;
        Ok(match self.kind {
            ProfileKind::Mdnt0 => -2.0 * l * self.u(x).powi(-3),
            ProfileKind::MdntN(n) => {
                let p = -4.0 * n as f64 / (2 * n + 1) as f64;
                p * l * self.u(x).powf(p - 1.0)
            }
            ProfileKind::Regular => {
                let q = 1.0 + (l * x) * (l * x);
                -2.0 * l * l * x / (q * q)
            }
            ProfileKind::Exponential => 2.0 * l * (2.0 * l * x).exp(),
            ProfileKind::ConstantMass => 0.0,
        })
    }

    /// d²m/dx².
    pub fn mass_d2(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let l = self.lambda;
        Ok(match self.kind {
            ProfileKind::Mdnt0 => 6.0 * l * l * self.u(x).powi(-4),
            ProfileKind::MdntN(n) => {
                let p = -4.0 * n as f64 / (2 * n + 1) as f64;
                p * (p - 1.0) * l * l * self.u(x).powf(p - 2.0)
            }
            ProfileKind::Regular => {
                let q = 1.0 + (l * x) * (l * x);
                (6.0 * l.powi(4) * x * x - 2.0 * l * l) / (q * q * q)
            }
            ProfileKind::Exponential => 4.0 * l * l * (2.0 * l * x).exp(),
            ProfileKind::ConstantMass => 0.0,
        })
    }

    /// J(x) = ds/dx = (m/m₀)^{1/2}, from the closed form of each kind.
    pub fn jacobian(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let l = self.lambda;
        Ok(match self.kind {
            ProfileKind::Mdnt0 => 1.0 / self.u(x),
            ProfileKind::MdntN(n) => self.u(x).powf(-2.0 * n as f64 / (2 * n + 1) as f64),
            ProfileKind::Regular => 1.0 / (1.0 + (l * x) * (l * x)).sqrt(),
            ProfileKind::Exponential => (l * x).exp(),
            ProfileKind::ConstantMass => 1.0,
        })
    }

    /// d(ln J)/dx = m'/(2m).
    pub fn log_jacobian_d1(&self, x: f64) -> Result<f64> {
        Ok(0.5 * self.mass_d1(x)? / self.mass(x)?)
    }

    /// y = s(x), with s(x_min) = 0.
    pub fn bijection_s(&self, x: f64) -> Result<f64> {
        self.check_lambda()?;
        let (x0, l) = (self.x0, self.lambda);
        match self.kind {
            ProfileKind::MdntN(n) => {
                let u = self.u(x);
                if !(u >= 0.0) {
                    return Err(Error::domain(format!("x = {x} is below the MDNT domain edge")));
                }
                let k = (2 * n + 1) as f64;
                Ok(k * u.powf(1.0 / k) / l)
            }
            _ => {
                self.check_x(x)?;
                Ok(match self.kind {
                    ProfileKind::Mdnt0 => self.u(x).ln() / l,
                    ProfileKind::Regular => (l * x).asinh() / l,
                    ProfileKind::Exponential if x0 == 1.0 => (l * x).exp_m1() / l,
                    ProfileKind::Exponential => ((l * x).exp() - x0) / l,
                    _ => x,
                })
            }
        }
    }

    /// x = s⁻¹(y).
    pub fn inverse_s(&self, y: f64) -> Result<f64> {
        self.check_lambda()?;
        let (x0, l) = (self.x0, self.lambda);
        if !y.is_finite() {
            return Err(Error::domain(format!("inverse_s needs a finite argument, got {y}")));
        }
        match self.kind {
            ProfileKind::Mdnt0 => Ok(((l * y).exp() - x0) / l),
            ProfileKind::MdntN(n) => {
                if y * l < 0.0 {
                    return Err(Error::domain(format!("y = {y} is outside the range of the MDNT bijection")));
                }
                let k = (2 * n + 1) as f64;
                Ok(((l * y / k).powf(k) - x0) / l)
            }
            ProfileKind::Regular => Ok((l * y).sinh() / l),
            ProfileKind::Exponential => {
                let arg = l * y + x0;
                if !(arg > 0.0) {
                    return Err(Error::domain(format!("y = {y} is outside the range of the exponential bijection")));
                }
                Ok(if x0 == 1.0 { (l * y).ln_1p() / l } else { arg.ln() / l })
            }
            ProfileKind::ConstantMass => Ok(y),
        }
    }

    /// c₁·m·m'' + c₂·(m')² with the profile's ordering label.
    pub fn mdnt_residual(&self, x: f64) -> Result<f64> {
        match self.kind {
            ProfileKind::Mdnt0 | ProfileKind::MdntN(_) => {}
            _ => {
                return Err(Error::usage(format!(
                    "the mass-dependent null-term equation does not apply to the {} profile",
                    self.kind.name()
                )))
            }
        }
        let (c1, c2) = mdnt_coefficients(self.ordering_a);
        let (m, m1, m2) = (self.mass(x)?, self.mass_d1(x)?, self.mass_d2(x)?);
        Ok(c1 * m * m2 + c2 * m1 * m1)
    }

    /// Checks the bijection conditions: λ ≠ 0 (and positive where the
    /// domain orientation needs it), J > 0 and s increasing on a sample of
    /// the half-line domain, s(x_min) = 0 and a consistent ordering label.
    /// The residual is the number of violated conditions.
    pub fn validate(&self) -> VerificationReport {
        let mut violations: Vec<String> = Vec::new();
        let oriented = matches!(self.kind, ProfileKind::Mdnt0 | ProfileKind::MdntN(_) | ProfileKind::Exponential);
        if self.lambda == 0.0 && self.kind != ProfileKind::ConstantMass {
            violations.push("degenerate Jacobian (lambda = 0)".into());
        } else if !self.lambda.is_finite() {
            violations.push("lambda is not finite".into());
        } else if oriented && self.lambda < 0.0 {
            violations.push("lambda must be positive for this kind".into());
        }
        let expected_a = match self.kind {
            ProfileKind::MdntN(n) => mdnt_ordering(n),
            _ => -0.25,
        };
        if self.ordering_a != expected_a {
            violations.push(format!("ordering label a = {} (expected {expected_a})", self.ordering_a));
        }
        if violations.is_empty() {
            if self.x_min.is_nan() {
                violations.push("s never vanishes, no half-line domain".into());
            } else {
                // s(−∞) is read off far enough out that e^{λx} underflows
                let at = if self.x_min == f64::NEG_INFINITY { -800.0 / self.lambda.abs() } else { self.x_min };
                match self.bijection_s(at) {
                    Ok(s) if s.abs() <= 1e-12 => {}
                    Ok(s) => violations.push(format!("s(x_min) = {s:e}, expected 0")),
                    Err(e) => violations.push(format!("s(x_min) undefined: {e}")),
                }
                let span = 10.0 / self.lambda.abs();
                let start = if self.x_min.is_finite() { self.x_min } else { -span };
                let mut prev_s = f64::NEG_INFINITY;
                let mut bad_j = 0usize;
                let mut bad_s = 0usize;
                for i in 1..=200 {
                    let x = start + span * i as f64 / 200.0;
                    match (self.jacobian(x), self.bijection_s(x)) {
                        (Ok(j), Ok(s)) => {
                            if !(j > 0.0 && j.is_finite()) {
                                bad_j += 1;
                            }
                            if !(s > prev_s) {
                                bad_s += 1;
                            }
                            prev_s = s;
                        }
                        _ => bad_j += 1,
                    }
                }
                if bad_j > 0 {
                    violations.push(format!("Jacobian not positive at {bad_j} sampled points"));
                }
                if bad_s > 0 {
                    violations.push(format!("s not increasing at {bad_s} sampled points"));
                }
            }
        }
        let mut report = VerificationReport::new("profile_valid", violations.len() as f64, 0.0).with("profile", self);
        if !violations.is_empty() {
            report = report.with("violations", violations.join("; "));
        }
        report
    }
}

impl fmt::Display for MassProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ProfileKind::MdntN(n) => write!(f, "kind=mdnt n={n} x0={} lambda={}", self.x0, self.lambda),
            ProfileKind::ConstantMass => write!(f, "kind=constant"),
            ProfileKind::Regular => write!(f, "kind=regular lambda={}", self.lambda),
            k => write!(f, "kind={} x0={} lambda={}", k.name(), self.x0, self.lambda),
        }
    }
}

/// Parses a plain-text `key=value` record, e.g. `kind=mdnt n=1 x0=0 lambda=1`.
/// Pairs may be separated by whitespace, commas, semicolons or newlines;
/// `#` starts a comment. Missing `x0`/`lambda` take the defaults that put
/// the half-line domain at `[0, ∞)` with λ = 1.
impl FromStr for MassProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut kind: Option<String> = None;
        let mut n: Option<u32> = None;
        let mut x0: Option<f64> = None;
        let mut lambda = 1.0;
        let mut x_min: Option<f64> = None;
        let body: String = s.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join(" ");
        for token in body.split(|c: char| c.is_whitespace() || c == ',' || c == ';').filter(|t| !t.is_empty()) {
            let (key, value) =
                token.split_once('=').ok_or_else(|| Error::usage(format!("expected key=value, got {token:?}")))?;
            let num = |v: &str| v.parse::<f64>().map_err(|e| Error::usage(format!("{key}: {e}")));
            match key.trim().to_ascii_lowercase().as_str() {
                "kind" => kind = Some(value.trim().to_ascii_lowercase()),
                "n" => n = Some(value.parse().map_err(|e| Error::usage(format!("n: {e}")))?),
                "x0" => x0 = Some(num(value)?),
                "lambda" => lambda = num(value)?,
                "x_min" => x_min = Some(num(value)?),
                other => return Err(Error::usage(format!("unknown profile key {other:?}"))),
            }
        }
        let kind = kind.ok_or_else(|| Error::usage("profile record needs kind=..."))?;
        let profile = match kind.as_str() {
            "mdnt0" => Self::mdnt0(x0.unwrap_or(1.0), lambda),
            "mdnt" | "mdntn" | "mdnt_n" => {
                let n = n.ok_or_else(|| Error::usage("kind=mdnt needs n=<order>"))?;
                Self::mdnt_n(n, x0.unwrap_or(0.0), lambda)?
            }
            "regular" => Self::regular(lambda),
            "exponential" | "exp" => Self::exponential(x0.unwrap_or(1.0), lambda),
            "constant" | "constantmass" | "constant_mass" => Self::constant(),
            other => return Err(Error::usage(format!("unknown profile kind {other:?}"))),
        };
        Ok(match x_min {
            Some(v) => profile.with_x_min(v),
            None => profile,
        })
    }
}
