//! Transfer matrices of the ODE around the two torus generators.
//!
//! The coefficients of `y''' - (alpha wp + B) y' + beta wp' y = 0` are
//! elliptic, so analytic continuation along `z -> z + 1` and `z -> z + tau`
//! sends the solution space to itself; the matrices `N1`, `N2` of these maps
//! in a frozen fundamental basis generate the monodromy group together with
//! the loop around the lattice point, which equals their commutator. B is an
//! apparent parameter exactly when that commutator is trivial, and then the
//! pair `(N1, N2)` is classified by its joint normal form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{invert_wp, lattice_data, wp_eval, LatticeData};
use crate::linalg::CMat;
use crate::recurrence::{even_elliptic_solution, problem_params, ProblemParams};
use crate::roots::find_roots;
use crate::sympoly::NumPoly;
use crate::{Error, Result};

type C = Complex64;

const MAX_STEPS: usize = 200_000;
const MIN_STEP: f64 = 1e-13;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

// ---------------------------------------------------------------------------
// coefficient systems

/// First-order companion system of the third-order operator.
fn third_system<'a>(
    alpha: f64,
    beta: f64,
    b: C,
    lat: &'a LatticeData,
) -> impl Fn(C) -> Result<CMat> + 'a {
    move |z| {
        let (p, dp, _) = wp_eval(z, lat)?;
        Ok(CMat::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![-beta * dp, alpha * p + b, c(0.0, 0.0)],
        ]))
    }
}

/// Companion system of `y'' = (m(m+1) wp + B) y`.
fn lame_system<'a>(m: u32, b: C, lat: &'a LatticeData) -> impl Fn(C) -> Result<CMat> + 'a {
    let mm = (m * (m + 1)) as f64;
    move |z| {
        let (p, _, _) = wp_eval(z, lat)?;
        Ok(CMat::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![mm * p + b, c(0.0, 0.0)],
        ]))
    }
}

/// Second-order system for `f = (y / y0)'` given the even elliptic solution
/// `y0 = Y(wp)`: substituting `y = y0 int f` reduces the operator to
/// `y0 f'' + 3 y0' f' + (3 y0'' - (alpha wp + B) y0) f = 0`.
/// Its generator matrices carry the two nontrivial multipliers of the
/// third-order equation, which makes it an independent route to them.
fn reduced_system<'a>(
    alpha: f64,
    b: C,
    y: NumPoly,
    lat: &'a LatticeData,
) -> impl Fn(C) -> Result<CMat> + 'a {
    let dy = y.derivative();
    let ddy = dy.derivative();
    move |z| {
        let (x, dp, ddp) = wp_eval(z, lat)?;
        let yv = y.eval(x);
        let scale = y.eval_scale(x).max(1e-300);
        if yv.norm() < 1e-9 * scale {
            // a zero of y0 is a (deceptive) singularity of the reduced
            // equation; reject the step like a lattice pole
            return Err(Error::PoleProximity {
                z,
                dist: yv.norm() / scale,
            });
        }
        let y1 = dy.eval(x) * dp;
        let y2 = ddy.eval(x) * dp * dp + dy.eval(x) * ddp;
        let a21 = -(3.0 * y2 / yv - (alpha * x + b));
        let a22 = -3.0 * y1 / yv;
        Ok(CMat::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![a21, a22],
        ]))
    }
}

// ---------------------------------------------------------------------------
// adaptive Runge-Kutta 5(4) along a straight segment

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
const CS: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

fn combine(w: &CMat, h: f64, ks: &[&CMat], weights: &[f64]) -> CMat {
    let mut out = w.clone();
    for (k, &wt) in ks.iter().zip(weights) {
        if wt != 0.0 {
            out = out.add(&k.scale(c(h * wt, 0.0)));
        }
    }
    out
}

/// Transfer matrix of `W' = A(z) W` along the straight segment from `a` to
/// `b`, with the solution basis frozen at `a` (`W(a) = I`).
fn transfer_segment<F>(sys: &F, a: C, b: C, dim: usize, tol: f64) -> Result<CMat>
where
    F: Fn(C) -> Result<CMat>,
{
    let dir = b - a;
    if dir.norm() == 0.0 {
        return Ok(CMat::identity(dim));
    }
    let eval = |s: f64, w: &CMat| -> Result<CMat> {
        Ok(sys(a + dir * s)?.mul(w).scale(dir))
    };
    let (atol, rtol) = (tol, tol);
    let mut w = CMat::identity(dim);
    let mut s = 0.0f64;
    let mut h = 0.02f64;
    let mut k1: Option<CMat> = None;
    let mut steps = 0usize;
    while s < 1.0 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::ConvergenceFailure(format!(
                "step budget exhausted at s = {s:.6} on segment {a} -> {b}"
            )));
        }
        if h < MIN_STEP {
            return Err(Error::StepUnderflow { z: a + dir * s, h });
        }
        if s + h > 1.0 {
            h = 1.0 - s;
        }
        let k1v = match &k1 {
            Some(k) => k.clone(),
            None => eval(s, &w)?,
        };
        let stages = (|| -> Result<(CMat, CMat, CMat)> {
            let k2 = eval(s + CS[1] * h, &combine(&w, h, &[&k1v], &A2))?;
            let k3 = eval(s + CS[2] * h, &combine(&w, h, &[&k1v, &k2], &A3))?;
            let k4 = eval(s + CS[3] * h, &combine(&w, h, &[&k1v, &k2, &k3], &A4))?;
            let k5 = eval(s + CS[4] * h, &combine(&w, h, &[&k1v, &k2, &k3, &k4], &A5))?;
            let k6 = eval(
                s + CS[5] * h,
                &combine(&w, h, &[&k1v, &k2, &k3, &k4, &k5], &A6),
            )?;
            let w5 = combine(&w, h, &[&k1v, &k2, &k3, &k4, &k5, &k6], &B5[..6]);
            let k7 = eval(s + CS[6] * h, &w5)?;
            let ks = [&k1v, &k2, &k3, &k4, &k5, &k6, &k7];
            let mut err = CMat::zeros(dim, dim);
            for (i, k) in ks.iter().enumerate() {
                let d = B5[i] - B4[i];
                if d != 0.0 {
                    err = err.add(&k.scale(c(h * d, 0.0)));
                }
            }
            Ok((w5, err, k7))
        })();
        let (w5, errm, k7) = match stages {
            Ok(triple) => triple,
            Err(Error::PoleProximity { .. }) => {
                // a stage probed too close to a singular point: shrink and retry
                h *= 0.25;
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut errnorm = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let sc = atol + rtol * w5[(i, j)].norm().max(w[(i, j)].norm());
                errnorm = errnorm.max(errm[(i, j)].norm() / sc);
            }
        }
        if errnorm <= 1.0 {
            s += h;
            w = w5;
            // the seventh stage sits at the accepted endpoint: reuse it
            k1 = Some(k7);
        }
        let factor = if errnorm == 0.0 {
            5.0
        } else {
            (0.9 * errnorm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok(w)
}

fn transfer_along<F>(sys: &F, path: &[C], dim: usize, tol: f64) -> Result<CMat>
where
    F: Fn(C) -> Result<CMat>,
{
    let mut acc = CMat::identity(dim);
    for seg in path.windows(2) {
        let t = transfer_segment(sys, seg[0], seg[1], dim, tol)?;
        acc = t.mul(&acc);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// path planning

fn lattice_obstructions(tau: C) -> Vec<C> {
    let mut out = Vec::new();
    for m in -2..=3i32 {
        for n in -2..=3i32 {
            out.push(c(m as f64, 0.0) + c(n as f64, 0.0) * tau);
        }
    }
    out
}

fn point_obstructions(pts: &[C], tau: C) -> Vec<C> {
    let mut out = Vec::new();
    for &p in pts {
        for sign in [1.0, -1.0] {
            for m in -2..=3i32 {
                for n in -2..=3i32 {
                    out.push(sign * p + c(m as f64, 0.0) + c(n as f64, 0.0) * tau);
                }
            }
        }
    }
    out
}

/// Distance from `w` to the segment `[a, b]`, and the segment parameter of
/// the closest point.
fn segment_distance(a: C, b: C, w: C) -> (f64, f64) {
    let dir = b - a;
    let len2 = dir.norm_sqr();
    if len2 == 0.0 {
        return ((w - a).norm(), 0.0);
    }
    let t = (((w - a) * dir.conj()).re / len2).clamp(0.0, 1.0);
    ((a + dir * t - w).norm(), t)
}

fn worst_violation(a: C, b: C, obs: &[C], clearance: f64) -> Option<(C, f64)> {
    let mut best: Option<(C, f64, f64)> = None;
    for &w in obs {
        let (d, t) = segment_distance(a, b, w);
        if d < clearance && best.as_ref().map(|&(_, _, bd)| d < bd).unwrap_or(true) {
            best = Some((w, t, d));
        }
    }
    best.map(|(w, t, _)| (w, t))
}

fn extend_path(a: C, b: C, obs: &[C], clearance: f64, depth: u32, out: &mut Vec<C>) -> Result<()> {
    if depth > 16 {
        return Err(Error::PathBlocked(format!(
            "could not route {a} -> {b} around the singular points"
        )));
    }
    if let Some((w, t)) = worst_violation(a, b, obs, clearance) {
        let dir = (b - a) / (b - a).norm();
        let nhat = c(0.0, 1.0) * dir;
        let foot = a + (b - a) * t;
        let d = 3.0 * clearance;
        // step to whichever side moves away from the obstruction
        let side = if (foot + nhat * d - w).norm() >= (foot - nhat * d - w).norm() {
            1.0
        } else {
            -1.0
        };
        let off = nhat * (side * d);
        let q1 = foot - dir * (2.0 * clearance) + off;
        let q2 = foot + dir * (2.0 * clearance) + off;
        extend_path(a, q1, obs, clearance, depth + 1, out)?;
        extend_path(q1, q2, obs, clearance, depth + 1, out)?;
        extend_path(q2, b, obs, clearance, depth + 1, out)?;
    } else {
        out.push(b);
    }
    Ok(())
}

fn plan_path(z0: C, omega: C, obs: &[C], clearance: f64) -> Result<Vec<C>> {
    let mut out = vec![z0];
    extend_path(z0, z0 + omega, obs, clearance, 0, &mut out)?;
    Ok(out)
}

/// Base point for the generator loops, chosen away from every obstruction.
fn choose_base(tau: C, obs: &[C], clearance: f64) -> Result<C> {
    const CAND: &[(f64, f64)] = &[
        (0.37, 0.41),
        (0.43, 0.29),
        (0.31, 0.47),
        (0.39, 0.33),
        (0.27, 0.37),
        (0.41, 0.43),
        (0.23, 0.31),
        (0.47, 0.21),
    ];
    'cand: for &(u, v) in CAND {
        let z0 = c(u, 0.0) + c(v, 0.0) * tau;
        for corner in [z0, z0 + c(1.0, 0.0), z0 + tau, z0 + c(1.0, 0.0) + tau] {
            let near = obs
                .iter()
                .map(|&w| (corner - w).norm())
                .fold(f64::INFINITY, f64::min);
            if near < 1.5 * clearance {
                continue 'cand;
            }
        }
        return Ok(z0);
    }
    Err(Error::PathBlocked(
        "no candidate base point cleared the obstruction set".into(),
    ))
}

// ---------------------------------------------------------------------------
// generator pairs

/// Transfer matrices along `z0 -> z0 + 1` and `z0 -> z0 + tau`.
#[derive(Clone, Debug)]
pub struct TransferPair {
    pub n1: CMat,
    pub n2: CMat,
    pub base_point: C,
}

fn generator_pair<F>(
    sys: &F,
    lat: &LatticeData,
    extra_obs: &[C],
    dim: usize,
    tol: f64,
) -> Result<TransferPair>
where
    F: Fn(C) -> Result<CMat>,
{
    let clearance = 0.05 * lat.tau.im.min(1.0);
    let mut obs = lattice_obstructions(lat.tau);
    obs.extend_from_slice(extra_obs);
    let z0 = choose_base(lat.tau, &obs, clearance)?;
    let p1 = plan_path(z0, c(1.0, 0.0), &obs, clearance)?;
    let p2 = plan_path(z0, lat.tau, &obs, clearance)?;
    let n1 = transfer_along(sys, &p1, dim, tol)?;
    let n2 = transfer_along(sys, &p2, dim, tol)?;
    Ok(TransferPair {
        n1,
        n2,
        base_point: z0,
    })
}

/// Monodromy generators of the third-order equation at parameter B.
pub fn monodromy_pair(
    pp: &ProblemParams,
    b: C,
    lat: &LatticeData,
    tol: f64,
) -> Result<TransferPair> {
    let sys = third_system(pp.alpha as f64, pp.beta_f64(), b, lat);
    generator_pair(&sys, lat, &[], 3, tol)
}

/// Monodromy generators of the dual third-order equation.
pub fn dual_monodromy_pair(
    pp: &ProblemParams,
    b: C,
    lat: &LatticeData,
    tol: f64,
) -> Result<TransferPair> {
    let sys = third_system(pp.alpha as f64, pp.dual_beta_f64(), b, lat);
    generator_pair(&sys, lat, &[], 3, tol)
}

/// Monodromy generators of `y'' = (m(m+1) wp + B) y`.
pub fn lame_monodromy_pair(m: u32, b: C, lat: &LatticeData, tol: f64) -> Result<TransferPair> {
    let sys = lame_system(m, b, lat);
    generator_pair(&sys, lat, &[], 2, tol)
}

/// Zeros (mod the lattice) of the even elliptic solution at parameter B.
pub fn y0_zeros(pp: &ProblemParams, b: C, lat: &LatticeData) -> Result<Vec<C>> {
    let y = even_elliptic_solution(pp)?.specialize_b(b, lat.g2, lat.g3);
    match y.degree() {
        None => Err(Error::NumericalInstability(
            "even solution specialized to zero".into(),
        )),
        Some(0) => Ok(Vec::new()),
        Some(_) => {
            let rep = find_roots(&y)?;
            rep.roots.iter().map(|&x| invert_wp(x, lat)).collect()
        }
    }
}

/// Monodromy generators of the reduced second-order equation on
/// `f = (y / y0)'`; needs the even elliptic solution.
pub fn reduced_monodromy_pair(
    pp: &ProblemParams,
    b: C,
    lat: &LatticeData,
    tol: f64,
) -> Result<TransferPair> {
    let y = even_elliptic_solution(pp)?.specialize_b(b, lat.g2, lat.g3);
    let zeros = y0_zeros(pp, b, lat)?;
    let extra = point_obstructions(&zeros, lat.tau);
    let sys = reduced_system(pp.alpha as f64, b, y, lat);
    generator_pair(&sys, lat, &extra, 2, tol)
}

// ---------------------------------------------------------------------------
// classification

/// Joint normal form of the commuting generator pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    /// The puncture loop (the commutator) is nontrivial: B is not apparent.
    NonApparent,
    /// Both generators square to the identity with trace -1: the image is
    /// the Klein four-group acting by signs.
    KleinFour,
    /// Simultaneously diagonalizable with all multipliers on the unit circle.
    Unitary,
    /// Simultaneously diagonalizable with a multiplier off the unit circle.
    NonUnitary,
    /// All eigenvalues 1 but some generator differs from the identity.
    UnipotentNontrivial,
    Indeterminate,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::NonApparent => "non-apparent",
            Classification::KleinFour => "klein-four",
            Classification::Unitary => "unitary",
            Classification::NonUnitary => "non-unitary",
            Classification::UnipotentNontrivial => "unipotent-nontrivial",
            Classification::Indeterminate => "indeterminate",
        };
        f.write_str(s)
    }
}

/// `|| N1 N2 N1^-1 N2^-1 - I ||_F`, the size of the puncture loop.
pub fn commutator_defect(n1: &CMat, n2: &CMat) -> f64 {
    let dim = n1.nrows();
    let id = CMat::identity(dim);
    match (n1.inverse(), n2.inverse()) {
        (Ok(i1), Ok(i2)) => n1.mul(n2).mul(&i1).mul(&i2).sub(&id).frobenius(),
        _ => f64::INFINITY,
    }
}

fn try_simultaneous_diag(n1: &CMat, n2: &CMat, mix: f64) -> Result<(Vec<C>, Vec<C>, f64, f64)> {
    let m = n1.add(&n2.scale(c(mix, 0.0)));
    let (_, v) = m.eigen()?;
    let vinv = v.inverse()?;
    let cond = v.cond_estimate();
    let d1 = vinv.mul(n1).mul(&v);
    let d2 = vinv.mul(n2).mul(&v);
    let dim = n1.nrows();
    let scale = n1.max_abs().max(n2.max_abs()).max(1.0);
    let mut off = 0.0f64;
    let mut diag1 = Vec::with_capacity(dim);
    let mut diag2 = Vec::with_capacity(dim);
    for i in 0..dim {
        diag1.push(d1[(i, i)]);
        diag2.push(d2[(i, i)]);
        for j in 0..dim {
            if i != j {
                off = off.max(d1[(i, j)].norm().max(d2[(i, j)].norm()));
            }
        }
    }
    Ok((diag1, diag2, off / scale, cond))
}

/// Pick the canonical member of a reciprocal multiplier pair: modulus above
/// one if that is decisive, otherwise positive imaginary part, falling back
/// through the second generator.
fn canonical_pair(p: (C, C), q: (C, C), tol: f64) -> (C, C) {
    let decide = |pair: &(C, C)| -> Option<bool> {
        if (pair.0.norm() - 1.0).abs() > tol {
            return Some(pair.0.norm() > 1.0);
        }
        if pair.0.im.abs() > tol {
            return Some(pair.0.im > 0.0);
        }
        None
    };
    match decide(&p) {
        Some(true) => p,
        Some(false) => q,
        None => match decide(&(p.1, q.1)) {
            Some(true) => p,
            Some(false) => q,
            None => p,
        },
    }
}

/// Classify a commuting (or not) generator pair; for the diagonalizable
/// abelian cases also return the canonical multiplier pair `(lambda_1,
/// lambda_2)` of the two generators on a common nontrivial eigenvector.
pub fn classify(n1: &CMat, n2: &CMat, tol: f64) -> (Classification, Option<Vec<C>>) {
    let dim = n1.nrows();
    let id = CMat::identity(dim);
    let loose = 1e3 * tol;

    let defect = commutator_defect(n1, n2);
    if !defect.is_finite() || defect > loose {
        return (Classification::NonApparent, None);
    }

    if dim == 3 {
        let s1 = n1.mul(n1).sub(&id).frobenius();
        let s2 = n2.mul(n2).sub(&id).frobenius();
        let t1 = n1.trace();
        let t2 = n2.trace();
        let t12 = n1.mul(n2).trace();
        let m1 = c(-1.0, 0.0);
        if s1 <= loose
            && s2 <= loose
            && (t1 - m1).norm() <= loose
            && (t2 - m1).norm() <= loose
            && (t12 - m1).norm() <= loose
        {
            return (Classification::KleinFour, None);
        }
    }

    for mix in [0.6180339887498949, 0.3819660112501051] {
        let Ok((d1, d2, off, cond)) = try_simultaneous_diag(n1, n2, mix) else {
            continue;
        };
        if cond > 1e6 || off > loose {
            continue;
        }
        if dim == 3 {
            // order indices by closeness of the multiplier pair to (1, 1);
            // the best is the single-valued direction, the rest pair up
            let mut idx = [0usize, 1, 2];
            let dist =
                |i: usize| (d1[i] - c(1.0, 0.0)).norm() + (d2[i] - c(1.0, 0.0)).norm();
            idx.sort_by(|&a, &b| dist(a).partial_cmp(&dist(b)).unwrap());
            for &i0 in &idx {
                let rest: Vec<usize> = (0..3).filter(|&i| i != i0).collect();
                let (j, k) = (rest[0], rest[1]);
                let rec1 = (d1[j] * d1[k] - c(1.0, 0.0)).norm();
                let rec2 = (d2[j] * d2[k] - c(1.0, 0.0)).norm();
                if rec1 <= loose * (1.0 + d1[j].norm() * d1[k].norm())
                    && rec2 <= loose * (1.0 + d2[j].norm() * d2[k].norm())
                {
                    let (l1, l2) = canonical_pair((d1[j], d2[j]), (d1[k], d2[k]), tol);
                    let unitary =
                        (l1.norm() - 1.0).abs() <= tol && (l2.norm() - 1.0).abs() <= tol;
                    let class = if unitary {
                        Classification::Unitary
                    } else {
                        Classification::NonUnitary
                    };
                    return (class, Some(vec![l1, l2]));
                }
            }
        } else if dim == 2 {
            let rec1 = (d1[0] * d1[1] - c(1.0, 0.0)).norm();
            let rec2 = (d2[0] * d2[1] - c(1.0, 0.0)).norm();
            if rec1 <= loose && rec2 <= loose {
                let (l1, l2) = canonical_pair((d1[0], d2[0]), (d1[1], d2[1]), tol);
                let unitary = (l1.norm() - 1.0).abs() <= tol && (l2.norm() - 1.0).abs() <= tol;
                let class = if unitary {
                    Classification::Unitary
                } else {
                    Classification::NonUnitary
                };
                return (class, Some(vec![l1, l2]));
            }
        }
    }

    let all_one = |m: &CMat| -> bool {
        m.eigenvalues()
            .map(|eigs| eigs.iter().all(|e| (e - c(1.0, 0.0)).norm() <= 100.0 * tol))
            .unwrap_or(false)
    };
    if all_one(n1) && all_one(n2) {
        let sep = n1.sub(&id).frobenius().max(n2.sub(&id).frobenius());
        if sep >= loose {
            return (Classification::UnipotentNontrivial, None);
        }
        // both generators are the identity to working accuracy
        return (Classification::Unitary, Some(vec![c(1.0, 0.0), c(1.0, 0.0)]));
    }

    (Classification::Indeterminate, None)
}

// ---------------------------------------------------------------------------
// full report

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonodromyReport {
    pub n: u32,
    pub l: u32,
    #[serde(rename = "B")]
    pub b: [f64; 2],
    pub tau: [f64; 2],
    pub base_point: [f64; 2],
    pub ode_tol: f64,
    #[serde(rename = "N1")]
    pub n1: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "N2")]
    pub n2: Vec<Vec<[f64; 2]>>,
    pub dets: Vec<[f64; 2]>,
    pub commutator_defect: f64,
    /// Eigenvalues of N1, then of N2.
    pub eigenvalues: Vec<Vec<[f64; 2]>>,
    pub classification: String,
    pub lambdas: Option<Vec<[f64; 2]>>,
}

fn mat_records(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn eig_records(m: &CMat) -> Vec<[f64; 2]> {
    m.eigenvalues()
        .map(|v| v.iter().map(|e| [e.re, e.im]).collect())
        .unwrap_or_default()
}

/// End-to-end monodromy computation with classification, in a
/// serialization-friendly shape.
pub fn monodromy_report(n: u32, l: u32, b: C, tau: C, tol: f64) -> Result<MonodromyReport> {
    let pp = problem_params(n, l)?;
    let lat = lattice_data(tau, crate::elliptic::DEFAULT_TOL)?;
    let pair = monodromy_pair(&pp, b, &lat, tol)?;
    let defect = commutator_defect(&pair.n1, &pair.n2);
    let (class, lambdas) = classify(&pair.n1, &pair.n2, tol.max(1e-6));
    let d1 = pair.n1.det()?;
    let d2 = pair.n2.det()?;
    Ok(MonodromyReport {
        n,
        l,
        b: [b.re, b.im],
        tau: [tau.re, tau.im],
        base_point: [pair.base_point.re, pair.base_point.im],
        ode_tol: tol,
        n1: mat_records(&pair.n1),
        n2: mat_records(&pair.n2),
        dets: vec![[d1.re, d1.im], [d2.re, d2.im]],
        commutator_defect: defect,
        eigenvalues: vec![eig_records(&pair.n1), eig_records(&pair.n2)],
        classification: class.to_string(),
        lambdas: lambdas.map(|v| v.iter().map(|e| [e.re, e.im]).collect()),
    })
}
