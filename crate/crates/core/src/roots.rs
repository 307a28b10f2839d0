//! Polynomial root finding.
//!
//! Primary solver is Aberth-Ehrlich simultaneous iteration (all roots at
//! once, cubic local convergence); if its backward error stays poor after a
//! few deterministic restarts we fall back to companion-matrix eigenvalues
//! and Newton polish. Acceptance is always backward-error based:
//! `|p(z)| / sum_i |a_i| |z|^i`, which stays meaningful near multiple roots
//! where forward accuracy necessarily degrades.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::linalg::CMat;
use crate::sympoly::NumPoly;
use crate::{Error, Result};

type C = Complex64;

/// Backward error at which a root set is accepted.
const ACCEPT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMethod {
    Aberth,
    Companion,
}

impl RootMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            RootMethod::Aberth => "aberth",
            RootMethod::Companion => "companion",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootReport {
    /// Roots sorted by real part, then imaginary part.
    pub roots: Vec<C>,
    /// Backward error of each root, same order.
    pub residuals: Vec<f64>,
    pub method: RootMethod,
}

/// All complex roots of `p`, multiplicity included.
pub fn find_roots(p: &NumPoly) -> Result<RootReport> {
    if p.is_zero() {
        return Err(Error::BadInput("root finding on the zero polynomial".into()));
    }
    let mut coeffs = p.coeffs.clone();
    // trim is relative; make the top coefficient exactly the last entry
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() == 0.0 {
        coeffs.pop();
    }
    // factor out roots at the origin so the iteration sees a0 != 0
    let mut origin = 0usize;
    while coeffs.len() > 1 && coeffs[0].norm() == 0.0 {
        coeffs.remove(0);
        origin += 1;
    }
    let deg = coeffs.len() - 1;
    if deg == 0 && origin == 0 {
        return Ok(RootReport {
            roots: vec![],
            residuals: vec![],
            method: RootMethod::Aberth,
        });
    }

    // normalize so coefficient magnitudes are O(1) for the solver
    let top: f64 = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let norm: Vec<C> = coeffs.iter().map(|c| c / top).collect();

    let finish = |mut roots: Vec<C>, method: RootMethod| -> RootReport {
        roots.extend(std::iter::repeat(C::new(0.0, 0.0)).take(origin));
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let residuals = roots.iter().map(|&z| backward_error(p, z)).collect();
        RootReport {
            roots,
            residuals,
            method,
        }
    };

    if deg > 0 {
        for attempt in 0..3 {
            let roots = aberth(&norm, attempt);
            let worst = roots
                .iter()
                .map(|&z| backward_error(p, z))
                .fold(0.0, f64::max);
            if worst <= ACCEPT {
                return Ok(finish(roots, RootMethod::Aberth));
            }
        }
        // companion fallback
        if let Ok(mut roots) = companion_roots(&norm) {
            for z in roots.iter_mut() {
                *z = polish(&norm, *z);
            }
            let worst = roots
                .iter()
                .map(|&z| backward_error(p, z))
                .fold(0.0, f64::max);
            if worst <= 1e2 * ACCEPT {
                return Ok(finish(roots, RootMethod::Companion));
            }
        }
        return Err(Error::ConvergenceFailure(format!(
            "root finding failed for a degree-{} polynomial",
            deg + origin
        )));
    }
    Ok(finish(vec![], RootMethod::Aberth))
}

/// `|p(z)| / sum |a_i||z|^i` with a floor on the denominator.
fn backward_error(p: &NumPoly, z: C) -> f64 {
    let num = p.eval(z).norm();
    let den = p.eval_scale(z).max(1e-300);
    num / den
}

fn eval_with_deriv(coeffs: &[C], z: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for &a in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn aberth(coeffs: &[C], attempt: usize) -> Vec<C> {
    let d = coeffs.len() - 1;
    let an = coeffs[d].norm();
    let a0 = coeffs[0].norm();
    // geometric-mean root magnitude as the starting radius, then the Cauchy
    // bound as a ceiling
    let mut r = (a0 / an).powf(1.0 / d as f64);
    let cauchy = 1.0 + coeffs[..d].iter().map(|c| c.norm()).fold(0.0, f64::max) / an;
    if !r.is_finite() || r == 0.0 {
        r = 1.0;
    }
    r = r.min(cauchy) * (1.0 + 0.37 * attempt as f64);
    let phase0 = 0.41 + 1.7 * attempt as f64;
    let mut z: Vec<C> = (0..d)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / d as f64 + phase0;
            C::new(r * th.cos(), r * th.sin())
        })
        .collect();

    for _ in 0..200 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (p, dp) = eval_with_deriv(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 1e-300 {
                p / dp
            } else {
                // stationary point: take an off-axis nudge and move on
                let bump = C::new(1e-3, 2e-3) * (1.0 + z[k].norm());
                z[k] += bump;
                moved = 1.0;
                continue;
            };
            let mut s = C::new(0.0, 0.0);
            for j in 0..d {
                if j == k {
                    continue;
                }
                let dz = z[k] - z[j];
                if dz.norm() < 1e-290 {
                    let bump = C::new(3e-4, -1e-4) * (1.0 + z[k].norm());
                    z[k] += bump;
                    continue;
                }
                s += 1.0 / dz;
            }
            let denom = 1.0 - newton * s;
            let w = if denom.norm() > 1e-290 { newton / denom } else { newton };
            z[k] -= w;
            moved = moved.max(w.norm() / (1.0 + z[k].norm()));
        }
        if moved < 1e-14 {
            break;
        }
    }
    z
}

fn polish(coeffs: &[C], mut z: C) -> C {
    for _ in 0..3 {
        let (p, dp) = eval_with_deriv(coeffs, z);
        if dp.norm() < 1e-300 {
            break;
        }
        let step = p / dp;
        if !step.is_finite() || step.norm() > 0.5 * (1.0 + z.norm()) {
            break;
        }
        z -= step;
    }
    z
}

fn companion_roots(coeffs: &[C]) -> Result<Vec<C>> {
    let d = coeffs.len() - 1;
    let an = coeffs[d];
    let mut m = CMat::zeros(d, d);
    for i in 0..d.saturating_sub(1) {
        m[(i, i + 1)] = C::new(1.0, 0.0);
    }
    for j in 0..d {
        m[(d - 1, j)] = -coeffs[j] / an;
    }
    m.eigenvalues()
}

#[derive(Clone, Copy, Debug)]
pub struct RealDistinctReport {
    pub all_real: bool,
    pub distinct: bool,
    pub max_imag: f64,
    pub min_gap: f64,
    pub scale: f64,
}

impl RealDistinctReport {
    pub fn passed(&self) -> bool {
        self.all_real && self.distinct
    }
}

/// Certify that a root set is real and pairwise separated, with both tests
/// relative to `scale = 1 + max |root|`.
pub fn certify_real_distinct(roots: &[C], real_tol: f64, gap_tol: f64) -> RealDistinctReport {
    let scale = 1.0 + roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let max_imag = roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let mut min_gap = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            min_gap = min_gap.min((roots[i] - roots[j]).norm());
        }
    }
    RealDistinctReport {
        all_real: max_imag <= real_tol * scale,
        distinct: roots.len() < 2 || min_gap >= gap_tol * scale,
        max_imag,
        min_gap,
        scale,
    }
}
