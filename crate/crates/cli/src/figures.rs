//! Tables emitted by `figure`, all at g0 = 2, λ = 1.

use pdmosc::table::Table;
use pdmosc::xspace::{PdmSystem, PotentialId};
use pdmosc::Result;

use crate::GridSpec;

pub const FIGURE_G0: f64 = 2.0;

pub const FIGURE1_GRID: GridSpec = GridSpec { min: 0.0, max: 4.0, points: 401 };
pub const FIGURE2_GRID: GridSpec = GridSpec { min: 0.0, max: 20.0, points: 2001 };
pub const FIGURE3_GRID: GridSpec = GridSpec { min: 0.0, max: 10.0, points: 10001 };

pub fn figure(which: u8) -> Result<Table> {
    match which {
        1 => figure1(),
        2 => figure2(),
        3 => figure3(),
        _ => Err(pdmosc::Error::Usage(format!("there is no figure {which}"))),
    }
}

fn system(id: PotentialId) -> Result<PdmSystem> {
    PdmSystem::with_defaults(id, FIGURE_G0)
}

/// V at x, with the centrifugal wall at the domain edge written as +∞.
fn potential_or_wall(sys: &PdmSystem, x: f64) -> Result<f64> {
    if x == sys.x_lower() {
        Ok(f64::INFINITY)
    } else {
        sys.potential(x)
    }
}

/// Columns x, V1, V2, V3, V5, Vsing and the levels E0..E3.
pub fn figure1() -> Result<Table> {
    use PotentialId::*;
    let systems = [V1, V2, V3, V5, Sing].map(system).into_iter().collect::<Result<Vec<_>>>()?;
    let levels: Vec<f64> = (0..4).map(|n| systems[0].energy(n)).collect();
    let mut header: Vec<String> = ["x", "V1", "V2", "V3", "V5", "Vsing"].map(String::from).to_vec();
    header.extend((0..4).map(|n| format!("E{n}")));
    let rows = FIGURE1_GRID
        .points()
        .into_iter()
        .map(|x| {
            let mut row = vec![x];
            for s in &systems {
                row.push(potential_or_wall(s, x)?);
            }
            row.extend(&levels);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table::new(header, rows))
}

fn psi_or_boundary(sys: &PdmSystem, nmax: usize, x: f64) -> Result<Vec<f64>> {
    if x == sys.x_lower() {
        (0..=nmax).map(|n| sys.boundary_value(n)).collect()
    } else {
        sys.psi_all(nmax, x)
    }
}

/// Columns x and ψ0..ψ2 for V5, then for V1.
pub fn figure2() -> Result<Table> {
    let systems = [system(PotentialId::V5)?, system(PotentialId::V1)?];
    let mut header = vec!["x".to_string()];
    for s in &systems {
        header.extend((0..3).map(|n| format!("{}_psi{n}", s.potential_id())));
    }
    let rows = FIGURE2_GRID
        .points()
        .into_iter()
        .map(|x| {
            let mut row = vec![x];
            for s in &systems {
                row.extend(psi_or_boundary(s, 2, x)?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table::new(header, rows))
}

/// Columns x and |ψ2|² for V5 and for the constant-mass oscillator.
pub fn figure3() -> Result<Table> {
    let systems = [system(PotentialId::V5)?, system(PotentialId::Sing)?];
    let header = vec!["x".to_string(), "V5_density2".to_string(), "Vsing_density2".to_string()];
    let rows = FIGURE3_GRID
        .points()
        .into_iter()
        .map(|x| {
            let mut row = vec![x];
            for s in &systems {
                row.push(psi_or_boundary(s, 2, x)?[2].powi(2));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table::new(header, rows))
}

/// Trapezoid rule on tabulated samples.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2).zip(ys.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}
