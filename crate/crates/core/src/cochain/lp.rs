//! Minimal ℓ∞ primitives of relative 2-cocycles by linear programming, and growth
//! scans over window families.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use rayon::prelude::*;
use serde::Serialize;

use super::chain::{coboundary, Cochain};
use super::window::{build_window, CellKind, Window, WindowSpec};
use crate::error::{Error, Result};
use crate::oracle::Group;
use crate::presentation::Word;

pub const LP_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub enum LpStatus {
    Primitive { m: Cochain, norm: f64 },
    /// No relative `m` satisfies the constraints; the interior 2-cells involved.
    Infeasible { witness: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpCertificate {
    pub window: String,
    pub cocycle: String,
    pub status: LpStatus,
    /// Largest `|δm − z|` over interior cells (0 when infeasible).
    pub residual: f64,
}

impl LpCertificate {
    pub fn norm(&self) -> Option<f64> {
        match &self.status {
            LpStatus::Primitive { norm, .. } => Some(*norm),
            LpStatus::Infeasible { .. } => None,
        }
    }
}

/// Minimizes `‖m‖∞` over relative 1-cochains with `δm = z` on interior 2-cells.
pub fn min_linf_primitive(w: &Window, z: &Cochain, cocycle: &str) -> Result<LpCertificate> {
    if z.dim != 2 || z.values.len() != w.count(2) {
        return Err(Error::Precondition("target must be a 2-cochain on the window".into()));
    }
    if !z.is_relative(w) {
        return Err(Error::Precondition("target cocycle does not vanish on L-bar cells".into()));
    }
    let mut pb = Problem::new(OptimizationDirection::Minimize);
    let t = pb.add_var(1.0, (0.0, f64::INFINITY));
    let vars: Vec<Option<microlp::Variable>> = w.cells[1]
        .iter()
        .map(|c| (!c.in_lbar()).then(|| pb.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))))
        .collect();
    for v in vars.iter().flatten() {
        pb.add_constraint([(*v, 1.0), (t, -1.0)], ComparisonOp::Le, 0.0);
        pb.add_constraint([(*v, 1.0), (t, 1.0)], ComparisonOp::Ge, 0.0);
    }
    let interior: Vec<usize> = w.interior_cells().collect();
    for &f in &interior {
        let terms: Vec<(microlp::Variable, f64)> =
            w.boundary2_idx[f].iter().filter_map(|&(e, s)| vars[e].map(|v| (v, s as f64))).collect();
        if terms.is_empty() {
            if z.values[f].abs() > LP_TOLERANCE {
                return Ok(LpCertificate {
                    window: w.spec_label.clone(),
                    cocycle: cocycle.to_string(),
                    status: LpStatus::Infeasible { witness: vec![f] },
                    residual: 0.0,
                });
            }
            continue;
        }
        pb.add_constraint(terms.as_slice(), ComparisonOp::Eq, z.values[f]);
    }
    let solution = match pb.solve() {
        Ok(out) => out.into_solution().map_err(|_| Error::Solver("LP solve was interrupted".into()))?,
        Err(microlp::Error::Infeasible) => {
            return Ok(LpCertificate {
                window: w.spec_label.clone(),
                cocycle: cocycle.to_string(),
                status: LpStatus::Infeasible { witness: interior },
                residual: 0.0,
            })
        }
        Err(e) => return Err(Error::Solver(e.to_string())),
    };
    let m = Cochain {
        dim: 1,
        values: vars.iter().map(|v| v.map_or(0.0, |v| solution.var_value(v))).collect(),
    };
    let dm = coboundary(w, &m)?;
    let residual = interior.iter().map(|&f| (dm.values[f] - z.values[f]).abs()).fold(0.0, f64::max);
    if residual > 1e-6 {
        return Err(Error::Solver(format!("solver returned a primitive with residual {residual:e}")));
    }
    Ok(LpCertificate {
        window: w.spec_label.clone(),
        cocycle: cocycle.to_string(),
        status: LpStatus::Primitive { norm: m.norm_inf(), m },
        residual,
    })
}

/// A relative 2-cocycle given uniformly on every window.
#[derive(Clone, Debug, PartialEq)]
pub enum CocycleFamily {
    Zero,
    /// 1 on every relator 2-cell.
    RelatorIndicator,
    /// `δh` for the relative 1-cochain with values in `[-1, 1]` drawn per cell from `seed`.
    Coboundary { seed: u64 },
}

impl CocycleFamily {
    pub fn name(&self) -> String {
        match self {
            CocycleFamily::Zero => "zero".into(),
            CocycleFamily::RelatorIndicator => "relator-indicator".into(),
            CocycleFamily::Coboundary { seed } => format!("coboundary(seed={seed})"),
        }
    }

    pub fn on(&self, w: &Window) -> Result<Cochain> {
        Ok(match self {
            CocycleFamily::Zero => Cochain::zero(w, 2),
            CocycleFamily::RelatorIndicator => Cochain::from_fn(w, 2, |f| {
                if matches!(w.cells[2][f].kind, CellKind::RCell { .. }) {
                    1.0
                } else {
                    0.0
                }
            }),
            CocycleFamily::Coboundary { seed } => coboundary(w, &seeded_relative_cochain(w, *seed))?,
        })
    }
}

/// Relative 1-cochain whose value on a cell depends only on the cell and the seed,
/// so the same cell gets the same value in every window.
pub fn seeded_relative_cochain(w: &Window, seed: u64) -> Cochain {
    Cochain::from_fn(w, 1, |e| {
        let c = &w.cells[1][e];
        if c.in_lbar() {
            return 0.0;
        }
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
        for b in format!("{c:?}").bytes() {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x0100_0000_01b3);
        }
        // Quarter steps in [-1, 1].
        ((hash % 9) as f64 - 4.0) / 4.0
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthVerdict {
    BoundedConsistent,
    LinearGrowthWitness,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub radius: usize,
    pub norm: Option<f64>,
    pub interior_cells: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthScan {
    pub rows: Vec<GrowthRow>,
    pub slope: f64,
    pub verdict: GrowthVerdict,
}

/// How windows grow with the scan parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowFamily {
    Ball { rho: u64 },
    Strip { step: Word, rho: u64 },
}

impl WindowFamily {
    pub fn at(&self, r: usize) -> WindowSpec {
        match self {
            WindowFamily::Ball { rho } => WindowSpec::Ball { radius: r, rho: *rho },
            WindowFamily::Strip { step, rho } => WindowSpec::Strip { step: step.clone(), n: r, rho: *rho },
        }
    }
}

/// Solves the LP at each radius. The verdict is linear growth when the norms grow
/// at least three quarters as fast as the radii between the first and last row.
pub fn growth_scan(g: &Group, family: &WindowFamily, z: &CocycleFamily, radii: &[usize]) -> Result<GrowthScan> {
    let rows: Vec<Result<GrowthRow>> = radii
        .par_iter()
        .map(|&r| {
            let w = build_window(g, &family.at(r))?;
            let cert = min_linf_primitive(&w, &z.on(&w)?, &z.name())?;
            Ok(GrowthRow { radius: r, norm: cert.norm(), interior_cells: w.interior_cells().count() })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.norm.map(|n| (r.radius as f64, n))).collect();
    let slope = if pts.len() >= 2 {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        if sxx > 0.0 {
            sxy / sxx
        } else {
            0.0
        }
    } else {
        0.0
    };
    let verdict = match (pts.first(), pts.last()) {
        (Some(&(r0, n0)), Some(&(r1, n1))) if pts.len() >= 2 && n0 > LP_TOLERANCE && r0 > 0.0 => {
            if n1 / n0 >= 0.75 * (r1 / r0) {
                GrowthVerdict::LinearGrowthWitness
            } else {
                GrowthVerdict::BoundedConsistent
            }
        }
        _ => GrowthVerdict::BoundedConsistent,
    };
    Ok(GrowthScan { rows, slope, verdict })
}
