//! Weierstrass functions for the lattice `Z + tau Z`.
//!
//! Invariants come from Eisenstein series in the nome `q = exp(2 pi i tau)`,
//! half-period values from Jacobi theta constants, and point evaluation of
//! `wp`, `wp'`, `zeta`, `sigma` from the logarithmic derivative of `theta_1`:
//!
//! ```text
//!     zeta(z) = eta1 z + pi * theta1'(pi z) / theta1(pi z)
//!     wp(z)   = -eta1 - pi^2 * d/dv [theta1'/theta1](pi z)
//! ```
//!
//! The theta series in `z` converge quadratically for any height, so point
//! evaluation always runs at the caller's tau after reducing `z` into the
//! fundamental cell centred at 0. The Eisenstein/Lambert sums decay only
//! linearly, so for `Im tau < 0.3` the invariants are computed on a
//! modular-reduced tau and mapped back through the lattice scaling laws.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Error, Result};

type C = Complex64;

/// Default validation tolerance for [`lattice_data`].
pub const DEFAULT_TOL: f64 = 1e-10;

/// Evaluation points closer than this to a lattice point are rejected.
pub const POLE_GUARD: f64 = 1e-8;

/// Below this height the invariants are computed via modular reduction.
const IM_TAU_DIRECT: f64 = 0.3;

/// Series-term cap unless overridden by `LAME3_SERIES_TERMS`.
const DEFAULT_SERIES_CAP: usize = 64;

/// Series terms stop contributing once they fall below this, relative to the
/// largest term seen.
const SERIES_EPS: f64 = 1e-18;

/// Lattice invariants of `Z + tau Z` with half-period labels
/// `e1 = wp(1/2)`, `e2 = wp(tau/2)`, `e3 = wp((1+tau)/2)` and quasi-periods
/// `eta1 = 2 zeta(1/2)`, `eta2 = 2 zeta(tau/2)`.
#[derive(Clone, Debug)]
pub struct LatticeData {
    pub tau: C,
    /// Nome `exp(2 pi i tau)`.
    pub q: C,
    pub g2: C,
    pub g3: C,
    pub e1: C,
    pub e2: C,
    pub e3: C,
    pub eta1: C,
    pub eta2: C,
    /// Cap on theta/Eisenstein series terms used for this lattice.
    pub series_terms: usize,
}

impl LatticeData {
    pub fn e(&self, i: usize) -> C {
        match i {
            1 => self.e1,
            2 => self.e2,
            3 => self.e3,
            _ => panic!("half-period index must be 1, 2 or 3"),
        }
    }

    /// Half period `omega_i / 2` with `omega_1 = 1`, `omega_2 = tau`,
    /// `omega_3 = 1 + tau`.
    pub fn half_period(&self, i: usize) -> C {
        match i {
            1 => C::new(0.5, 0.0),
            2 => self.tau * 0.5,
            3 => (self.tau + 1.0) * 0.5,
            _ => panic!("half-period index must be 1, 2 or 3"),
        }
    }
}

fn series_cap() -> usize {
    std::env::var("LAME3_SERIES_TERMS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 4)
        .unwrap_or(DEFAULT_SERIES_CAP)
}

/// Lambert-series sum `sum_{n>=1} n^p q^n / (1 - q^n)`.
fn lambert(p: u32, q: C, cap: usize) -> C {
    let mut acc = C::new(0.0, 0.0);
    let mut qn = C::new(1.0, 0.0);
    for n in 1..=(4 * cap).max(64) {
        qn *= q;
        let term = (n as f64).powi(p as i32) * qn / (1.0 - qn);
        acc += term;
        if term.norm() < SERIES_EPS * (1.0 + acc.norm()) {
            break;
        }
    }
    acc
}

/// `qt^s = exp(i pi tau s)` on the branch continuous in s; plain complex
/// `powf` picks the principal log and misbehaves once `|Re tau| > 1`.
fn qt_pow(tau: C, s: f64) -> C {
    (C::i() * PI * tau * s).exp()
}

/// Jacobi theta constants `theta2(0), theta3(0), theta4(0)`.
fn theta_constants(tau: C, cap: usize) -> (C, C, C) {
    let mut t2 = C::new(0.0, 0.0);
    let mut t3 = C::new(1.0, 0.0);
    let mut t4 = C::new(1.0, 0.0);
    for n in 0..cap {
        let h = n as f64 + 0.5;
        t2 += 2.0 * qt_pow(tau, h * h);
        if n >= 1 {
            let qn = qt_pow(tau, (n * n) as f64);
            t3 += 2.0 * qn;
            t4 += 2.0 * if n % 2 == 1 { -qn } else { qn };
            if qn.norm() < SERIES_EPS {
                break;
            }
        }
    }
    (t2, t3, t4)
}

/// Invariants at a tau of comfortable height; returns
/// `(g2, g3, e1, e2, e3, eta1)`.
fn invariants_direct(tau: C, cap: usize) -> (C, C, C, C, C, C) {
    let q = (C::i() * 2.0 * PI * tau).exp();
    let e4 = C::new(1.0, 0.0) + 240.0 * lambert(3, q, cap);
    let e6 = C::new(1.0, 0.0) - 504.0 * lambert(5, q, cap);
    let e2s = C::new(1.0, 0.0) - 24.0 * lambert(1, q, cap);
    let g2 = 4.0 * PI.powi(4) / 3.0 * e4;
    let g3 = 8.0 * PI.powi(6) / 27.0 * e6;
    let eta1 = PI * PI / 3.0 * e2s;

    let (t2, t3, t4) = theta_constants(tau, cap);
    let (p2, p3, p4) = (t2.powu(4), t3.powu(4), t4.powu(4));
    let c = PI * PI / 3.0;
    let e1 = c * (p3 + p4);
    let e2 = -c * (p2 + p3);
    let e3 = c * (p2 - p4);
    (g2, g3, e1, e2, e3, eta1)
}

/// Compute lattice invariants from tau, validating internal identities at
/// the given tolerance (`0 < tol <= 1e-6`).
pub fn lattice_data(tau: C, tol: f64) -> Result<LatticeData> {
    if !tau.is_finite() || !(tau.im > 0.0) {
        return Err(Error::Domain(format!(
            "tau must lie in the upper half plane, got {tau}"
        )));
    }
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::Domain(format!(
            "validation tolerance must be in (0, 1e-6], got {tol}"
        )));
    }
    let cap = series_cap();

    // Reduce tau toward the fundamental domain: alternately shift Re into
    // [-1/2, 1/2] and invert while |t| < 1. `taus` records every
    // intermediate value; `shifts[s]` produced taus[2s+1] from taus[2s], and
    // the inversion (when present) produced taus[2s+2] from taus[2s+1].
    let mut taus = vec![tau];
    let mut shifts: Vec<i64> = Vec::new();
    let mut t = tau;
    for _ in 0..64 {
        let n = t.re.round();
        t -= n;
        shifts.push(n as i64);
        taus.push(t);
        // After the shift |Re t| <= 1/2, so |t| >= 1 forces Im t >= sqrt(3)/2.
        if t.im >= IM_TAU_DIRECT || t.norm() >= 1.0 {
            break;
        }
        t = -1.0 / t;
        taus.push(t);
    }
    if t.im < IM_TAU_DIRECT {
        return Err(Error::DegenerateLattice(format!(
            "tau = {tau} resisted modular reduction; lattice is numerically degenerate"
        )));
    }

    let (mut g2, mut g3, mut e1, mut e2, mut e3, mut eta1) = invariants_direct(t, cap);

    // Unwind the reduction backwards: undo the inversion (if the forward pass
    // made one after this shift), then undo the shift itself.
    for (step, &n) in shifts.iter().enumerate().rev() {
        if 2 * step + 2 < taus.len() {
            // Data currently describes t_cur = -1/t_prev; map it to t_prev.
            // The lattices satisfy L(t_cur) = (1/t_prev) L(t_prev).
            let t_prev = taus[2 * step + 1];
            let t_cur = taus[2 * step + 2];
            let s2 = t_prev * t_prev;
            g2 /= s2 * s2;
            g3 /= s2 * s2 * s2;
            let ne1 = e2 / s2;
            let ne2 = e1 / s2;
            e3 /= s2;
            e1 = ne1;
            e2 = ne2;
            let eta2_cur = eta1 * t_cur - C::i() * 2.0 * PI;
            eta1 = -eta2_cur / t_prev;
        }
        // Undo t -> t - n: the lattice is unchanged, but an odd shift moves
        // the half-period labels tau/2 and (1+tau)/2 across each other.
        if n % 2 != 0 {
            std::mem::swap(&mut e2, &mut e3);
        }
    }

    let eta2 = eta1 * tau - C::i() * 2.0 * PI;
    let q = (C::i() * 2.0 * PI * tau).exp();
    let lat = LatticeData {
        tau,
        q,
        g2,
        g3,
        e1,
        e2,
        e3,
        eta1,
        eta2,
        series_terms: cap,
    };

    // Validation: the trace and cubic identities tie the theta route (e_k)
    // to the Eisenstein route (g2, g3); the discriminant guards degeneracy.
    let escale = 1.0 + lat.e1.norm().max(lat.e2.norm()).max(lat.e3.norm());
    let sum = lat.e1 + lat.e2 + lat.e3;
    if sum.norm() > tol * escale {
        return Err(Error::NumericalInstability(format!(
            "half-period values fail the trace identity: |e1+e2+e3| = {:.3e}",
            sum.norm()
        )));
    }
    let cubic_scale = 1.0 + 4.0 * escale.powi(3) + lat.g2.norm() * escale + lat.g3.norm();
    for i in 1..=3 {
        let e = lat.e(i);
        let r = 4.0 * e.powu(3) - lat.g2 * e - lat.g3;
        if r.norm() > tol * cubic_scale {
            return Err(Error::NumericalInstability(format!(
                "e{i} fails the cubic 4e^3 - g2 e - g3 = 0 by {:.3e}",
                r.norm()
            )));
        }
    }
    let disc = lat.g2.powu(3) - 27.0 * lat.g3.powu(2);
    if disc.norm() <= tol * (lat.g2.norm().powi(3) + 27.0 * lat.g3.norm().powi(2) + 1.0) {
        return Err(Error::DegenerateLattice(format!(
            "discriminant g2^3 - 27 g3^2 = {disc} is numerically zero"
        )));
    }
    Ok(lat)
}

/// Write `z = z0 + m + n tau` with `z0 = a + b tau`, `|a|, |b| <= 1/2`.
fn reduce_cell(z: C, tau: C) -> (C, i64, i64) {
    let n = (z.im / tau.im).round();
    let m = (z.re - n * tau.re).round();
    (z - m - n * tau, m as i64, n as i64)
}

/// Distance from z (already cell-reduced) to the nearest lattice point.
fn lattice_distance(z0: C, tau: C) -> f64 {
    let mut d = f64::INFINITY;
    for m in -1..=1 {
        for n in -1..=1 {
            let w = z0 - C::new(m as f64, 0.0) - tau * n as f64;
            d = d.min(w.norm());
        }
    }
    d
}

/// `theta_1` and its first four v-derivatives at v.
///
/// Each term is assembled from `exp(i pi tau (n+1/2)^2 +- i (2n+1) v)` so the
/// decaying theta weight and the growing sin/cos factor share one exponent;
/// for v in the image of the centred cell the combined exponent stays
/// bounded, where the naive product would overflow at large `Im tau`.
fn theta1_derivs(v: C, tau: C, cap: usize) -> (C, C, C, C, C) {
    let minus_i = C::new(0.0, -1.0);
    let mut t = [C::new(0.0, 0.0); 5];
    let mut scale = 0.0f64;
    let mut quiet = 0;
    for n in 0..cap {
        let k = 2.0 * n as f64 + 1.0;
        let h = n as f64 + 0.5;
        let base = C::i() * (PI * (h * h)) * tau;
        let ep = (base + C::i() * (k * v)).exp();
        let em = (base - C::i() * (k * v)).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let s_part = sign * minus_i * (ep - em); // 2 (-1)^n qt^{h^2} sin(kv)
        let c_part = sign * (ep + em); //           2 (-1)^n qt^{h^2} cos(kv)
        t[0] += s_part;
        t[1] += k * c_part;
        t[2] -= k * k * s_part;
        t[3] -= k * k * k * c_part;
        t[4] += k * k * k * k * s_part;
        let mag = k.powi(4) * (ep.norm() + em.norm());
        scale = scale.max(mag);
        if mag < SERIES_EPS * (1.0 + scale) {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (t[0], t[1], t[2], t[3], t[4])
}

/// Evaluate `(wp, wp', wp'')` at z. `wp''` comes from `6 wp^2 - g2/2`.
pub fn wp_eval(z: C, lat: &LatticeData) -> Result<(C, C, C)> {
    let (z0, _, _) = reduce_cell(z, lat.tau);
    let dist = lattice_distance(z0, lat.tau);
    if dist < POLE_GUARD {
        return Err(Error::PoleProximity { z, dist });
    }
    let v = z0 * PI;
    let (t0, t1, t2, t3, _) = theta1_derivs(v, lat.tau, lat.series_terms);
    let r1 = t1 / t0;
    let r2 = t2 / t0;
    let r3 = t3 / t0;
    let l2 = r2 - r1 * r1; // (theta1'/theta1)'
    let l3 = r3 - 3.0 * r1 * r2 + 2.0 * r1.powu(3); // (theta1'/theta1)''
    let wp = -lat.eta1 - PI * PI * l2;
    let wpd = -PI.powi(3) * l3;
    let wpdd = 6.0 * wp * wp - lat.g2 * 0.5;
    Ok((wp, wpd, wpdd))
}

/// Evaluate `(zeta, sigma)` at z, applying the quasi-period corrections for
/// arguments outside the fundamental cell.
pub fn zeta_sigma_eval(z: C, lat: &LatticeData) -> Result<(C, C)> {
    let (z0, m, n) = reduce_cell(z, lat.tau);
    let dist = lattice_distance(z0, lat.tau);
    if dist < POLE_GUARD {
        return Err(Error::PoleProximity { z, dist });
    }
    let v = z0 * PI;
    let (t0, t1, _, _, _) = theta1_derivs(v, lat.tau, lat.series_terms);
    let (_, d1, _, _, _) = theta1_derivs(C::new(0.0, 0.0), lat.tau, lat.series_terms);
    let zeta0 = lat.eta1 * z0 + PI * t1 / t0;
    let sigma0 = (lat.eta1 * z0 * z0 * 0.5).exp() * t0 / (PI * d1);

    let (mf, nf) = (m as f64, n as f64);
    let zeta = zeta0 + mf * lat.eta1 + nf * lat.eta2;
    let omega = C::new(mf, 0.0) + lat.tau * nf;
    let eta_omega = mf * lat.eta1 + nf * lat.eta2;
    let parity = if (m + n + m * n) % 2 == 0 { 1.0 } else { -1.0 };
    let sigma = parity * (eta_omega * (z0 + omega * 0.5)).exp() * sigma0;
    Ok((zeta, sigma))
}

/// Invert `wp`: find z in the (closed) centred fundamental cell with
/// `wp(z) = x`. The other preimage is `-z` modulo the lattice.
pub fn invert_wp(x: C, lat: &LatticeData) -> Result<C> {
    if !x.is_finite() {
        return Err(Error::Domain("cannot invert wp at a non-finite value".into()));
    }
    let escale = 1.0 + lat.e1.norm().max(lat.e2.norm()).max(lat.e3.norm());
    // Half-period hits first: wp' vanishes there, so Newton would stall and
    // no refinement is possible anyway.
    for i in 1..=3 {
        if (x - lat.e(i)).norm() <= 1e-10 * escale {
            return Ok(lat.half_period(i));
        }
    }

    let accept = 1e-9 * (1.0 + x.norm());
    let newton = |seed: C| -> Option<C> {
        let mut z = seed;
        let mut best: Option<(f64, C)> = None;
        for _ in 0..80 {
            let (wp, wpd, _) = wp_eval(z, lat).ok()?;
            let rn = (wp - x).norm();
            if best.map_or(true, |(b, _)| rn < b) {
                best = Some((rn, z));
            }
            if rn <= 1e-12 * (1.0 + x.norm()) {
                break;
            }
            if wpd.norm() < 1e-13 * (1.0 + wp.norm()) {
                // parked on a critical point: nudge off and keep going
                z += C::new(1e-4, 2e-4) * lat.tau.im.min(1.0);
                continue;
            }
            let mut step = (wp - x) / wpd;
            let cell = lat.tau.im.min(1.0);
            if step.norm() > 0.25 * cell {
                step *= 0.25 * cell / step.norm();
            }
            let (zr, _, _) = reduce_cell(z - step, lat.tau);
            z = zr;
        }
        let (rn, z) = best?;
        (rn <= accept).then_some(z)
    };

    // Large x: wp(z) ~ z^-2, so z ~ x^{-1/2} is already in the Newton basin.
    if x.norm() > 1e3 * escale {
        if let Some(z) = newton(1.0 / x.sqrt()) {
            return Ok(z);
        }
    }

    // Otherwise seed from a coarse grid over the cell, best residuals first.
    let nn = 28;
    let mut seeds: Vec<(f64, C)> = Vec::new();
    for i in 0..nn {
        for j in 0..nn {
            let a = (i as f64 + 0.5) / nn as f64 - 0.5;
            let b = (j as f64 + 0.5) / nn as f64 - 0.5;
            let z = C::new(a, 0.0) + lat.tau * b;
            if lattice_distance(z, lat.tau) < 0.02 * lat.tau.im.min(1.0) {
                continue;
            }
            if let Ok((wp, _, _)) = wp_eval(z, lat) {
                seeds.push(((wp - x).norm(), z));
            }
        }
    }
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (_, seed) in seeds.into_iter().take(8) {
        if let Some(z) = newton(seed) {
            return Ok(z);
        }
    }
    Err(Error::ConvergenceFailure(format!(
        "invert_wp failed to converge for x = {x}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C, b: C, tol: f64, msg: &str) {
        let d = (a - b).norm();
        assert!(d <= tol, "{msg}: |{a} - {b}| = {d:.3e} > {tol:.3e}");
    }

    fn lat(re: f64, im: f64) -> LatticeData {
        lattice_data(C::new(re, im), DEFAULT_TOL).unwrap()
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            lattice_data(C::new(0.5, -1.0), DEFAULT_TOL),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            lattice_data(C::new(0.0, 1.0), 1e-3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn square_lattice_has_real_ordered_roots() {
        let l = lat(0.0, 1.0);
        assert!(l.g3.norm() < 1e-12, "g3(i) = {}", l.g3);
        assert!(l.g2.im.abs() < 1e-12 && l.g2.re > 0.0);
        close(l.e3, C::new(0.0, 0.0), 1e-12, "e3 at tau=i");
        close(l.e1, C::new(l.g2.re.sqrt() / 2.0, 0.0), 1e-10, "e1 = sqrt(g2)/2");
        close(l.e2, -l.e1, 1e-10, "e2 = -e1");
        assert!(l.e1.re > l.e3.re && l.e3.re > l.e2.re);
    }

    #[test]
    fn imaginary_axis_orders_roots() {
        for im in [0.8, 1.3, 2.0, 0.25] {
            let l = lat(0.0, im);
            assert!(l.e1.im.abs() < 1e-9 * (1.0 + l.e1.re.abs()));
            assert!(
                l.e1.re > l.e3.re && l.e3.re > l.e2.re,
                "ordering failed at tau = {im} i: {} {} {}",
                l.e1,
                l.e3,
                l.e2
            );
        }
    }

    #[test]
    fn legendre_relation() {
        for (re, im) in [(0.0, 1.0), (0.5, 1.0), (0.3, 0.8), (-0.2, 1.7), (0.0, 0.25)] {
            let l = lat(re, im);
            let r = l.eta1 * l.tau - l.eta2 - C::i() * 2.0 * PI;
            assert!(r.norm() < 1e-10, "Legendre residual {:.3e} at {re}+{im}i", r.norm());
        }
    }

    #[test]
    fn eta1_matches_theta_triple_derivative() {
        for (re, im) in [(0.0, 1.0), (0.3, 0.8)] {
            let l = lat(re, im);
            let (_, d1, _, d3, _) = theta1_derivs(C::new(0.0, 0.0), l.tau, l.series_terms);
            close(
                l.eta1,
                -PI * PI / 3.0 * d3 / d1,
                1e-11 * (1.0 + l.eta1.norm()),
                "eta1 = -pi^2/3 theta1'''(0)/theta1'(0)",
            );
        }
    }

    #[test]
    fn wp_satisfies_the_cubic_identity() {
        for (re, im) in [(0.0, 1.0), (0.5, 1.0), (0.3, 0.8), (0.2, 1.1)] {
            let l = lat(re, im);
            for (a, b) in [(0.21, 0.13), (-0.37, 0.42), (0.11, -0.45), (0.49, 0.26)] {
                let z = C::new(a, 0.0) + l.tau * b;
                let (wp, wpd, wpdd) = wp_eval(z, &l).unwrap();
                let r = wpd * wpd - (4.0 * wp.powu(3) - l.g2 * wp - l.g3);
                let scale = 1.0 + wp.norm().powi(3);
                assert!(
                    r.norm() <= 1e-10 * scale,
                    "identity residual {:.3e} at z = {z}, tau = {re}+{im}i",
                    r.norm() / scale
                );
                close(
                    wpdd,
                    6.0 * wp * wp - l.g2 * 0.5,
                    1e-12 * (1.0 + wp.norm().powi(2)),
                    "wp'' identity",
                );
            }
        }
    }

    #[test]
    fn wp_derivative_matches_finite_difference() {
        let l = lat(0.3, 0.9);
        let z = C::new(0.27, 0.0) + l.tau * 0.18;
        let h = 1e-5;
        let (wp_p, _, _) = wp_eval(z + h, &l).unwrap();
        let (wp_m, _, _) = wp_eval(z - h, &l).unwrap();
        let (_, wpd, _) = wp_eval(z, &l).unwrap();
        close(
            (wp_p - wp_m) / (2.0 * h),
            wpd,
            1e-5 * (1.0 + wpd.norm()),
            "wp' finite difference",
        );
    }

    #[test]
    fn wp_is_doubly_periodic() {
        let l = lat(0.3, 0.9);
        let z = C::new(0.31, 0.0) + l.tau * 0.22;
        let (w0, wd0, _) = wp_eval(z, &l).unwrap();
        for shift in [C::new(1.0, 0.0), l.tau, C::new(3.0, 0.0) - l.tau * 2.0] {
            let (w1, wd1, _) = wp_eval(z + shift, &l).unwrap();
            close(w0, w1, 1e-10 * (1.0 + w0.norm()), "wp periodicity");
            close(wd0, wd1, 1e-10 * (1.0 + wd0.norm()), "wp' periodicity");
        }
    }

    #[test]
    fn half_period_values_match_labels() {
        for (re, im) in [(0.0, 1.0), (0.5, 1.0), (0.3, 0.8), (0.0, 0.25)] {
            let l = lat(re, im);
            for i in 1..=3 {
                let (wp, wpd, _) = wp_eval(l.half_period(i), &l).unwrap();
                close(wp, l.e(i), 1e-9 * (1.0 + l.e(i).norm()), "wp(omega_i/2) = e_i");
                assert!(
                    wpd.norm() <= 1e-7 * (1.0 + l.e(i).norm()).powf(1.5),
                    "wp' should vanish at half-period {i}, got {wpd}"
                );
            }
        }
    }

    #[test]
    fn zeta_quasi_periods() {
        let l = lat(0.2, 1.1);
        let z = C::new(0.17, 0.0) + l.tau * 0.31;
        let (z0, _) = zeta_sigma_eval(z, &l).unwrap();
        let (zp1, _) = zeta_sigma_eval(z + 1.0, &l).unwrap();
        let (zpt, _) = zeta_sigma_eval(z + l.tau, &l).unwrap();
        close(zp1 - z0, l.eta1, 1e-10 * (1.0 + l.eta1.norm()), "zeta(z+1)-zeta(z)");
        close(zpt - z0, l.eta2, 1e-10 * (1.0 + l.eta2.norm()), "zeta(z+tau)-zeta(z)");
    }

    #[test]
    fn zeta_derivative_is_minus_wp() {
        let l = lat(0.0, 1.0);
        let z = C::new(0.23, 0.0) + l.tau * 0.19;
        let h = 1e-5;
        let (zp, _) = zeta_sigma_eval(z + h, &l).unwrap();
        let (zm, _) = zeta_sigma_eval(z - h, &l).unwrap();
        let (wp, _, _) = wp_eval(z, &l).unwrap();
        close((zp - zm) / (2.0 * h), -wp, 1e-6 * (1.0 + wp.norm()), "zeta' = -wp");
    }

    #[test]
    fn zeta_at_half_period_gives_eta() {
        let l = lat(0.3, 0.8);
        let (z1, _) = zeta_sigma_eval(C::new(0.5, 0.0), &l).unwrap();
        close(z1 * 2.0, l.eta1, 1e-10 * (1.0 + l.eta1.norm()), "2 zeta(1/2) = eta1");
        let (z2, _) = zeta_sigma_eval(l.tau * 0.5, &l).unwrap();
        close(z2 * 2.0, l.eta2, 1e-10 * (1.0 + l.eta2.norm()), "2 zeta(tau/2) = eta2");
    }

    #[test]
    fn sigma_is_odd_and_log_derivative_is_zeta() {
        let l = lat(0.3, 0.8);
        let z = C::new(0.19, 0.0) + l.tau * 0.23 + 1.0; // outside the cell
        let (zeta, s0) = zeta_sigma_eval(z, &l).unwrap();
        let (_, sm) = zeta_sigma_eval(-z, &l).unwrap();
        close(sm, -s0, 1e-10 * (1.0 + s0.norm()), "sigma odd");
        let h = 1e-5;
        let (_, s_up) = zeta_sigma_eval(z + h, &l).unwrap();
        let (_, s_dn) = zeta_sigma_eval(z - h, &l).unwrap();
        let fd = (s_up - s_dn) / (2.0 * h * s0);
        close(fd, zeta, 1e-6 * (1.0 + zeta.norm()), "sigma'/sigma = zeta");
    }

    #[test]
    fn sigma_vanishes_linearly_at_origin() {
        let l = lat(0.0, 1.0);
        for h in [1e-3, 1e-4] {
            let z = C::new(h, h / 2.0);
            let (_, s) = zeta_sigma_eval(z, &l).unwrap();
            close(s, z, 1e-6 * h, "sigma(z) ~ z near 0");
        }
    }

    #[test]
    fn pole_guard_triggers() {
        let l = lat(0.0, 1.0);
        assert!(matches!(
            wp_eval(C::new(0.0, 0.0), &l),
            Err(Error::PoleProximity { .. })
        ));
        assert!(matches!(
            wp_eval(C::new(3.0, 0.0) + l.tau * 2.0, &l),
            Err(Error::PoleProximity { .. })
        ));
        assert!(matches!(
            zeta_sigma_eval(C::new(1e-10, 0.0), &l),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn lattice_invariance_under_unit_shift() {
        let a = lat(0.3, 0.9);
        let b = lat(1.3, 0.9);
        close(a.g2, b.g2, 1e-11 * (1.0 + a.g2.norm()), "g2 shift invariance");
        close(a.g3, b.g3, 1e-11 * (1.0 + a.g3.norm()), "g3 shift invariance");
        close(a.eta1, b.eta1, 1e-11 * (1.0 + a.eta1.norm()), "eta1 shift invariance");
        // e-labels permute under tau -> tau+1: e2 and e3 swap.
        close(a.e1, b.e1, 1e-10 * (1.0 + a.e1.norm()), "e1 fixed");
        close(a.e2, b.e3, 1e-10 * (1.0 + a.e2.norm()), "e2 -> e3");
        close(a.e3, b.e2, 1e-10 * (1.0 + a.e3.norm()), "e3 -> e2");
    }

    #[test]
    fn modular_inversion_scaling_laws() {
        // Both tau and -1/tau sit above the direct-evaluation threshold, so
        // this pins the unwind formulas against two independent series runs.
        let t = C::new(0.15, 0.7);
        let ti = -1.0 / t;
        let a = lat(t.re, t.im);
        let b = lat(ti.re, ti.im);
        let s2 = t * t;
        let s4 = s2 * s2;
        close(a.g2 * s4, b.g2, 1e-9 * (1.0 + b.g2.norm()), "g2 inversion law");
        close(a.g3 * s4 * s2, b.g3, 1e-9 * (1.0 + b.g3.norm()), "g3 inversion law");
        close(a.e1 * s2, b.e2, 1e-9 * (1.0 + b.e2.norm()), "e1 -> e2 under inversion");
        close(a.e2 * s2, b.e1, 1e-9 * (1.0 + b.e1.norm()), "e2 -> e1 under inversion");
        close(a.e3 * s2, b.e3, 1e-9 * (1.0 + b.e3.norm()), "e3 fixed under inversion");
        // eta1 at tau recovers from eta2 at -1/tau the same way the unwind does.
        let eta2_b = b.eta1 * b.tau - C::i() * 2.0 * PI;
        close(a.eta1, -eta2_b / t, 1e-9 * (1.0 + a.eta1.norm()), "eta1 inversion law");
    }

    #[test]
    fn low_height_invariants_stay_consistent() {
        // Invariants at low height go through modular reduction; pointwise
        // wp does not. wp(omega/2) = e and the cubic identity tie the two.
        let l = lat(0.0, 0.25);
        assert!(l.e1.re > l.e3.re && l.e3.re > l.e2.re);
        let z = C::new(0.11, 0.0) + l.tau * 0.21;
        let (wp, wpd, _) = wp_eval(z, &l).unwrap();
        let r = wpd * wpd - (4.0 * wp.powu(3) - l.g2 * wp - l.g3);
        assert!(r.norm() <= 1e-9 * (1.0 + wp.norm().powi(3)));

        let shifted = lat(7.0, 0.25); // same lattice, several reduction rounds deep
        close(shifted.g2, l.g2, 1e-9 * (1.0 + l.g2.norm()), "g2 after long reduction");
        close(shifted.g3, l.g3, 1e-9 * (1.0 + l.g3.norm()), "g3 after long reduction");
    }

    #[test]
    fn invert_wp_round_trips() {
        for (re, im) in [(0.0, 1.0), (0.3, 0.8)] {
            let l = lat(re, im);
            for (a, b) in [(0.27, 0.11), (-0.31, 0.4), (0.05, -0.33)] {
                let z = C::new(a, 0.0) + l.tau * b;
                let (wp, _, _) = wp_eval(z, &l).unwrap();
                let zi = invert_wp(wp, &l).unwrap();
                let (wp2, _, _) = wp_eval(zi, &l).unwrap();
                close(wp2, wp, 1e-8 * (1.0 + wp.norm()), "invert_wp round trip");
            }
        }
    }

    #[test]
    fn invert_wp_at_branch_points_and_infinity() {
        let l = lat(0.0, 1.0);
        close(invert_wp(l.e1, &l).unwrap(), C::new(0.5, 0.0), 1e-12, "invert_wp(e1)");
        close(invert_wp(l.e2, &l).unwrap(), l.tau * 0.5, 1e-12, "invert_wp(e2)");
        for xr in [1e4, 1e6] {
            let x = C::new(xr, 0.0);
            let z = invert_wp(x, &l).unwrap();
            let expect = 1.0 / x.sqrt();
            assert!(
                (z.norm() - expect.norm()).abs() <= 0.02 * expect.norm(),
                "asymptotic size |z| = {} vs {}",
                z.norm(),
                expect.norm()
            );
        }
    }
}
