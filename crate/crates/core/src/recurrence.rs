//! Finite recursions attached to the operator
//! `L = d^3 - (alpha wp + B) d + beta wp'` with
//! `alpha = n^2 + 3nl + 3l^2 + 2n + 3l`, `beta = (l-1)(n+l)(n+2l+2)/2`.
//!
//! Everything here is exact: coefficients live in `Q[g2, g3][B]`
//! ([`WeightedPoly`]) or, for the half-period expansions that need a concrete
//! lattice, in `C[B]` ([`NumPoly`]). The local exponents of `L` at the lattice
//! points are `{-n-l, 1-l, n+2l+2}`; the recursions below are all bookkeeping
//! for which exponent a series solution rides on and what obstruction it hits.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::elliptic::LatticeData;
use crate::sympoly::{rat, rat_int, NumPoly, Rat, WeightedPoly, XPoly};
use crate::{Error, Result};

type C = Complex64;

/// Parity class of `(n, l)`; each class has its own solution structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// n odd, l odd: two elliptic-function solutions when B is apparent.
    OddOdd,
    /// n odd, l even: solutions expand in half-integer powers of `wp - e_i`.
    OddEven,
    /// n even: an even elliptic solution exists for every B.
    EvenAny,
}

#[derive(Clone, Debug)]
pub struct ProblemParams {
    pub n: u32,
    pub l: u32,
    pub alpha: i64,
    pub beta: Rat,
    /// `-(alpha + beta) = -(l+1)(n+2l)(n+l+2)/2`, the zeroth-order
    /// coefficient of the adjoint-conjugate operator.
    pub dual_beta: Rat,
    /// Local exponents at a lattice point, ascending.
    pub exponents: (i64, i64, i64),
    /// Local exponents of the dual operator, ascending.
    pub dual_exponents: (i64, i64, i64),
    pub regime: Regime,
    /// Degree in `wp` of the even elliptic solution, when one exists.
    pub k: Option<u32>,
    /// `n + 2l`, the degree of the symmetric-square polynomial.
    pub m: u32,
    /// `(n + 2l)/2` for even n: degree of the dual even solution.
    pub m0: Option<u32>,
}

impl ProblemParams {
    pub fn beta_f64(&self) -> f64 {
        self.beta.to_f64().expect("beta fits in f64")
    }

    pub fn dual_beta_f64(&self) -> f64 {
        self.dual_beta.to_f64().expect("dual beta fits in f64")
    }
}

pub fn problem_params(n: u32, l: u32) -> Result<ProblemParams> {
    if n == 0 && l == 0 {
        return Err(Error::Domain(
            "(n, l) = (0, 0) gives alpha = beta = 0 and the operator degenerates".into(),
        ));
    }
    let (ni, li) = (n as i64, l as i64);
    let alpha = ni * ni + 3 * ni * li + 3 * li * li + 2 * ni + 3 * li;
    let beta = rat((li - 1) * (ni + li) * (ni + 2 * li + 2), 2);
    let dual_beta = rat(-(li + 1) * (ni + 2 * li) * (ni + li + 2), 2);
    debug_assert_eq!(&dual_beta, &(-(rat_int(alpha) + &beta)));
    let regime = match (n % 2, l % 2) {
        (1, 1) => Regime::OddOdd,
        (1, 0) => Regime::OddEven,
        _ => Regime::EvenAny,
    };
    let k = if l % 2 == 1 {
        Some((l - 1) / 2)
    } else if n % 2 == 0 {
        Some((n + l) / 2)
    } else {
        None
    };
    Ok(ProblemParams {
        n,
        l,
        alpha,
        beta,
        dual_beta,
        exponents: (-ni - li, 1 - li, ni + 2 * li + 2),
        dual_exponents: (-ni - 2 * li, li + 1, ni + li + 2),
        regime,
        k,
        m: n + 2 * l,
        m0: (n % 2 == 0).then(|| (n + 2 * l) / 2),
    })
}

/// Indicial polynomial of `L` at a lattice point:
/// `r(r-1)(r-2) - alpha r - 2 beta`, whose roots are the local exponents.
fn indicial(alpha: i64, beta: &Rat, r: i64) -> Rat {
    rat_int(r * (r - 1) * (r - 2) - alpha * r) - rat_int(2) * beta
}

/// Weight of the coefficient `C_j` in the even (`wp`-power) ansatz:
/// `-indicial(-2j)/2 = 4j^3 + 6j^2 + 2j - alpha j + beta`.
fn pole_weight(alpha: i64, beta: &Rat, j: i64) -> Rat {
    rat_int(4 * j * j * j + 6 * j * j + 2 * j - alpha * j) + beta
}

/// Expansion coefficients of `wp + B/alpha` by weight: index 0 is the `z^-2`
/// coefficient 1, index 1 is `B/alpha`, and index `i >= 2` is the coefficient
/// of `z^{2i-2}` in the Laurent series of `wp` (weight-`i` polynomial in
/// `g2, g3`). Folding `B` into slot 1 lets the series recursions treat
/// `alpha wp + B` as a single weighted series.
pub fn wp_laurent(alpha: i64, depth: usize) -> Vec<WeightedPoly> {
    assert!(alpha != 0, "wp_laurent needs alpha != 0");
    let mut c = Vec::with_capacity(depth + 1);
    c.push(WeightedPoly::one());
    if depth >= 1 {
        c.push(WeightedPoly::b().div_rat(&rat_int(alpha)));
    }
    if depth >= 2 {
        c.push(WeightedPoly::g2().scale(&rat(1, 20)));
    }
    if depth >= 3 {
        c.push(WeightedPoly::g3().scale(&rat(1, 28)));
    }
    for j in 4..=depth {
        let mut s = WeightedPoly::zero();
        for m in 2..=(j - 2) {
            s = &s + &(&c[m] * &c[j - m]);
        }
        let jj = j as i64;
        c.push(s.scale(&rat(3, (2 * jj + 1) * (jj - 3))));
    }
    c
}

/// Obstruction polynomial of the pole series on the lowest exponent.
///
/// For odd n the series `z^{-n-l} sum c_j z^{2j}` meets the middle exponent
/// `1 - l` at step `J = (n+1)/2`; the recursion's right-hand side there must
/// vanish for the singularity to be apparent. This returns that right-hand
/// side, normalized monic in B (degree `J`, homogeneous of weight `J`).
pub fn apparent_polynomial(pp: &ProblemParams) -> Result<WeightedPoly> {
    if pp.n % 2 == 0 {
        return Err(Error::Regime(format!(
            "the pole-series obstruction needs odd n, got n = {}",
            pp.n
        )));
    }
    let t = (pp.n + pp.l) as i64;
    let steps = ((pp.n + 1) / 2) as usize;
    let lau = wp_laurent(pp.alpha, steps);
    let mut c: Vec<WeightedPoly> = vec![WeightedPoly::one()];
    for j in 1..=steps {
        let ji = j as i64;
        let mut rhs = WeightedPoly::zero();
        for i in 1..=j {
            let ii = i as i64;
            let w = rat_int(pp.alpha * (2 * ji - 2 * ii - t))
                - rat_int(2 * ii - 2) * &pp.beta;
            if w.is_zero() {
                continue;
            }
            rhs = &rhs + &(&lau[i] * &c[j - i]).scale(&w);
        }
        if j < steps {
            let phi = indicial(pp.alpha, &pp.beta, 2 * ji - t);
            if phi.is_zero() {
                return Err(Error::CaseDegeneracy(format!(
                    "premature resonance at series step {j} for (n, l) = ({}, {})",
                    pp.n, pp.l
                )));
            }
            c.push(rhs.div_rat(&phi));
        } else {
            debug_assert!(indicial(pp.alpha, &pp.beta, 2 * ji - t).is_zero());
            let (p, _) = rhs.monic_in_b()?;
            debug_assert_eq!(p.deg_b(), Some(steps as u32));
            debug_assert!(p.is_homogeneous_of(steps as u32));
            return Ok(p);
        }
    }
    unreachable!("steps >= 1 for odd n")
}

fn even_rhs(c: &BTreeMap<i64, WeightedPoly>, j: i64) -> WeightedPoly {
    let get = |idx: i64| c.get(&idx).cloned().unwrap_or_else(WeightedPoly::zero);
    let t1 = &WeightedPoly::b().scale(&rat_int(j + 1)) * &get(j + 1);
    let t2 = &WeightedPoly::g2().scale(&rat((j + 1) * (2 * j + 3) * (j + 2), 2)) * &get(j + 2);
    let t3 = &WeightedPoly::g3().scale(&rat_int((j + 1) * (j + 2) * (j + 3))) * &get(j + 3);
    &(&t1 + &t2) + &t3
}

/// Even elliptic solution `y0 = wp^k + ... ` of `L y = 0`, valid for every B.
/// Exists when `k` is defined: l odd (degree `(l-1)/2`) or n, l both even
/// (degree `(n+l)/2`).
pub fn even_elliptic_solution(pp: &ProblemParams) -> Result<XPoly> {
    let k = pp.k.ok_or_else(|| {
        Error::Regime(format!(
            "no even elliptic solution for (n, l) = ({}, {})",
            pp.n, pp.l
        ))
    })? as i64;
    solve_even_down(pp.alpha, &pp.beta, k)
}

/// Even elliptic solution of the dual operator (`beta` replaced by
/// `dual_beta`), degree `m0 = (n+2l)/2`; defined for even n.
pub fn dual_even_solution(pp: &ProblemParams) -> Result<XPoly> {
    let m0 = pp.m0.ok_or_else(|| {
        Error::Regime(format!(
            "the dual even solution needs even n, got n = {}",
            pp.n
        ))
    })? as i64;
    solve_even_down(pp.alpha, &pp.dual_beta, m0)
}

fn solve_even_down(alpha: i64, beta: &Rat, k: i64) -> Result<XPoly> {
    let mut c: BTreeMap<i64, WeightedPoly> = BTreeMap::new();
    c.insert(k, WeightedPoly::one());
    for j in (0..k).rev() {
        let phi = pole_weight(alpha, beta, j);
        if phi.is_zero() {
            return Err(Error::CaseDegeneracy(format!(
                "resonant coefficient at wp^{j} blocks the even solution"
            )));
        }
        let val = even_rhs(&c, j).div_rat(&phi);
        c.insert(j, val);
    }
    Ok(XPoly::from_coeffs(
        (0..=k).map(|j| c.remove(&j).unwrap()).collect(),
    ))
}

/// Obstruction of the second elliptic solution in the odd-odd regime.
///
/// Running the even recursion down from `wp^{(n+l)/2}` hits the resonant
/// index `(l-1)/2`; the right-hand side there, monic in B, is returned. It
/// agrees with [`apparent_polynomial`] identically — the two recursions probe
/// the same locus from different exponents.
pub fn second_elliptic_polynomial(pp: &ProblemParams) -> Result<WeightedPoly> {
    if pp.regime != Regime::OddOdd {
        return Err(Error::Regime(format!(
            "the second elliptic solution needs n, l both odd, got ({}, {})",
            pp.n, pp.l
        )));
    }
    let k_top = ((pp.n + pp.l) / 2) as i64;
    let j_res = ((pp.l - 1) / 2) as i64;
    let mut c: BTreeMap<i64, WeightedPoly> = BTreeMap::new();
    c.insert(k_top, WeightedPoly::one());
    for j in (j_res..k_top).rev() {
        let rhs = even_rhs(&c, j);
        if j > j_res {
            let phi = pole_weight(pp.alpha, &pp.beta, j);
            if phi.is_zero() {
                return Err(Error::CaseDegeneracy(format!(
                    "unexpected resonance at wp^{j} above the obstruction"
                )));
            }
            c.insert(j, rhs.div_rat(&phi));
        } else {
            debug_assert!(pole_weight(pp.alpha, &pp.beta, j).is_zero());
            let (p, _) = rhs.monic_in_b()?;
            return Ok(p);
        }
    }
    unreachable!("k_top > j_res in the odd-odd regime")
}

// ---------------------------------------------------------------------------
// half-integer expansions at the finite branch points (n odd, l even)

fn halfbasis_indices(pp: &ProblemParams) -> Result<(i64, i64)> {
    if pp.regime != Regime::OddEven || pp.n < 1 {
        return Err(Error::Regime(format!(
            "half-integer expansions need n odd >= 1 and l even, got ({}, {})",
            pp.n, pp.l
        )));
    }
    let (n, l) = (pp.n as i64, pp.l as i64);
    Ok(((l + n - 1) / 2, l / 2 - 1))
}

/// `a_j`, the coefficient of `C_j` in the half-integer recursion; vanishes
/// exactly at the free index k and the resonant index k0.
fn halfbasis_a(n: i64, l: i64, j: i64) -> f64 {
    let k = (l + n - 1) / 2;
    (4 * (j + l + (n + 3) / 2) * (j - k) * (j - k + (n + 1) / 2)) as f64
}

/// `b_j`, the e_i-weight in the half-integer recursion.
fn halfbasis_b(n: i64, l: i64, j: i64) -> f64 {
    let q = 12 * j * j + 36 * j + 27 - 3 * l * l - 3 * l - 2 * n - 3 * l * n - n * n;
    -(j as f64 + 1.5) * q as f64
}

/// `theta_i = 3 e_i^2 - g2/4 = (e_i - e_j)(e_i - e_k)`, the branch-point
/// discriminant factor.
fn branch_theta(lat: &LatticeData, i: usize) -> C {
    let e = lat.e(i);
    3.0 * e * e - lat.g2 * 0.25
}

/// Right-hand side of the half-integer recursion at index j, acting on
/// polynomial-in-B coefficients.
fn halfbasis_rhs_poly(
    c: &BTreeMap<i64, NumPoly>,
    j: i64,
    n: i64,
    l: i64,
    e: C,
    theta: C,
) -> NumPoly {
    let get = |idx: i64| c.get(&idx).cloned().unwrap_or_else(NumPoly::zero);
    let lin = NumPoly::new(vec![halfbasis_b(n, l, j) * e, C::new(j as f64 + 1.5, 0.0)]);
    let w = ((j + 2) * (2 * j + 3) * (2 * j + 5)) as f64; // 4 (j+2)(j+3/2)(j+5/2)
    let t1 = lin.mul(&get(j + 1));
    let t2 = get(j + 2).scale(-w * theta);
    t1.add(&t2)
}

/// Obstruction polynomial of the half-integer expansion at branch point
/// `e_i` (i in 1..=3): monic in B of degree `(n+1)/2`. Its roots are the B
/// values admitting a solution `(wp - e_i)^{1/2} * (polynomial in wp - e_i)`,
/// and it coincides with [`apparent_polynomial`] specialized to the lattice.
pub fn halfbasis_polynomial(
    pp: &ProblemParams,
    lat: &LatticeData,
    i: usize,
) -> Result<NumPoly> {
    let (k, k0) = halfbasis_indices(pp)?;
    let (n, l) = (pp.n as i64, pp.l as i64);
    let e = lat.e(i);
    let theta = branch_theta(lat, i);
    let mut c: BTreeMap<i64, NumPoly> = BTreeMap::new();
    c.insert(k, NumPoly::new(vec![C::new(1.0, 0.0)]));
    for j in ((k0 + 1)..k).rev() {
        let rhs = halfbasis_rhs_poly(&c, j, n, l, e, theta);
        let a = halfbasis_a(n, l, j);
        debug_assert!(a != 0.0);
        let val = rhs.scale(C::new(1.0 / a, 0.0));
        if val.max_coeff_norm() > 1e100 {
            return Err(Error::NumericalInstability(
                "half-integer recursion coefficients overflowed".into(),
            ));
        }
        c.insert(j, val);
    }
    let r = halfbasis_rhs_poly(&c, k0, n, l, e, theta);
    let deg = r
        .degree()
        .ok_or_else(|| Error::NumericalInstability("vanishing obstruction polynomial".into()))?;
    debug_assert_eq!(deg as i64, k - k0);
    let lead = r.coeff(deg);
    Ok(r.scale(1.0 / lead))
}

/// A solved half-integer expansion at a branch point.
#[derive(Clone, Debug)]
pub struct HalfbasisSolution {
    /// Coefficients `C_0 ..= C_k` of powers of `wp - e_i`.
    pub coeffs: Vec<C>,
    /// Leading index actually populated: `k` on the generic branch,
    /// `k0 = l/2 - 1` when the expansion rides the middle exponent.
    pub degree: i64,
    /// Which branch point (1..=3).
    pub halfperiod: usize,
}

/// Solve the half-integer expansion at `e_i` for a concrete apparent B.
/// Rejects B unless the obstruction polynomial (almost) vanishes there.
pub fn halfbasis_solution(
    pp: &ProblemParams,
    lat: &LatticeData,
    i: usize,
    b: C,
    tol: f64,
) -> Result<HalfbasisSolution> {
    let (k, k0) = halfbasis_indices(pp)?;
    let (n, l) = (pp.n as i64, pp.l as i64);
    let phat = halfbasis_polynomial(pp, lat, i)?;
    let residual = phat.eval(b).norm() / phat.eval_scale(b).max(1e-300);
    if residual > tol {
        return Err(Error::NotApparent { b, residual });
    }
    let e = lat.e(i);
    let theta = branch_theta(lat, i);

    // scalar right-hand side at index j given the tail coefficients
    let rhs_at = |c: &BTreeMap<i64, C>, j: i64| -> C {
        let get = |idx: i64| c.get(&idx).copied().unwrap_or(C::new(0.0, 0.0));
        let lin = (j as f64 + 1.5) * b + halfbasis_b(n, l, j) * e;
        let w = ((j + 2) * (2 * j + 3) * (2 * j + 5)) as f64;
        lin * get(j + 1) - w * theta * get(j + 2)
    };
    let solve_down = |top: i64| -> Result<BTreeMap<i64, C>> {
        let mut c: BTreeMap<i64, C> = BTreeMap::new();
        c.insert(top, C::new(1.0, 0.0));
        for j in (0..top).rev() {
            let a = halfbasis_a(n, l, j);
            let val = if j == k0 {
                // free direction; the particular branch leaves it empty
                C::new(0.0, 0.0)
            } else {
                rhs_at(&c, j) / a
            };
            if val.norm() > 1e100 {
                return Err(Error::NumericalInstability(
                    "half-integer solution coefficients overflowed".into(),
                ));
            }
            c.insert(j, val);
        }
        Ok(c)
    };
    // constraint shared by every branch: the recursion row below C_0
    let constraint = |c: &BTreeMap<i64, C>| -> C { rhs_at(c, -1) };

    let assemble = |c: &BTreeMap<i64, C>, degree: i64| -> HalfbasisSolution {
        HalfbasisSolution {
            coeffs: (0..=k).map(|j| c.get(&j).copied().unwrap_or(C::new(0.0, 0.0))).collect(),
            degree,
            halfperiod: i,
        }
    };
    let validate = |c: &BTreeMap<i64, C>| -> bool {
        let get = |idx: i64| c.get(&idx).copied().unwrap_or(C::new(0.0, 0.0));
        for j in -1..k {
            let rhs = rhs_at(c, j);
            let lhs = if j >= 0 {
                halfbasis_a(n, l, j) * get(j)
            } else {
                C::new(0.0, 0.0)
            };
            let scale = 1.0 + lhs.norm() + rhs.norm() + get(j + 1).norm() + get(j + 2).norm();
            let tol_here = if j == k0 || j == -1 { 1e-6 } else { 1e-9 };
            if (lhs - rhs).norm() > tol_here * scale {
                return false;
            }
        }
        true
    };

    let particular = solve_down(k)?;
    if k0 < 0 {
        // l = 0: a single branch; the row below C_0 is the obstruction itself
        let g = constraint(&particular);
        let scale: f64 = 1.0 + particular.values().map(|v| v.norm()).fold(0.0, f64::max);
        if g.norm() > tol.max(1e-8) * scale {
            return Err(Error::NotApparent {
                b,
                residual: g.norm() / scale,
            });
        }
        if !validate(&particular) {
            return Err(Error::NumericalInstability(
                "half-integer recursion residuals did not close".into(),
            ));
        }
        let sol = assemble(&particular, k);
        debug_assert!(-1 - 2 * k == -(n + l));
        return Ok(sol);
    }

    let homogeneous = solve_down(k0)?;
    let h = constraint(&particular);
    let t = constraint(&homogeneous);
    // particular + c * homogeneous must satisfy the constraint: h + c t = 0
    if t.norm() > 1e-12 * (1.0 + h.norm()) {
        let cmix = -h / t;
        let mixed: BTreeMap<i64, C> = (0..=k)
            .map(|j| {
                let p = particular.get(&j).copied().unwrap_or(C::new(0.0, 0.0));
                let q = homogeneous.get(&j).copied().unwrap_or(C::new(0.0, 0.0));
                (j, p + cmix * q)
            })
            .collect();
        if validate(&mixed) {
            let sol = assemble(&mixed, k);
            debug_assert!(-1 - 2 * k == -(n + l));
            return Ok(sol);
        }
    }
    // degenerate direction: the expansion rides the middle exponent 1 - l
    if validate(&homogeneous) {
        let sol = assemble(&homogeneous, k0);
        debug_assert!(-1 - 2 * k0 == 1 - l);
        return Ok(sol);
    }
    Err(Error::NumericalInstability(
        "no branch of the half-integer expansion closed its recursion".into(),
    ))
}

// ---------------------------------------------------------------------------
// symmetric square

/// Coefficient polynomials of the symmetric-square operator applied to a
/// function of x: `Op(F) = A3 F''' + A2 F'' + A1 F' + A0 F`, all derivatives
/// in x, with `p = 4x^3 - g2 x - g3` absorbing the elliptic chain rule.
struct SymSquareOp {
    a3: XPoly,
    a2: XPoly,
    a1: XPoly,
    a0: XPoly,
}

impl SymSquareOp {
    fn new(y0: &XPoly, alpha: i64, beta: &Rat) -> Self {
        let p = XPoly::wp_cubic();
        let dp = p.dx();
        let three_half = WeightedPoly::constant(rat(3, 2));
        // p1 = -(alpha x + B)
        let p1 = XPoly::from_coeffs(vec![
            -&WeightedPoly::b(),
            WeightedPoly::constant(rat_int(-alpha)),
        ]);
        let y = y0.clone();
        let dy = y.dx();
        let ddy = dy.dx();
        let ysq = &y * &y;

        let a3 = &ysq * &p;
        let a2 = &(&ysq * &dp).scale_w(&three_half) - &(&(&y * &dy) * &p).scale_w(
            &WeightedPoly::constant(rat_int(3)),
        );
        let twelve_x = XPoly::monomial(1, WeightedPoly::constant(rat_int(12)));
        let a1 = &(&(&ysq * &twelve_x)
            - &(&(&y * &dy) * &dp).scale_w(&three_half))
            + &(&(&(&(&dy * &dy) * &p).scale_w(&WeightedPoly::constant(rat_int(3)))
                + &(&(&y * &ddy) * &p).scale_w(&WeightedPoly::constant(rat_int(3))))
                + &(&(&(&y * &dy) * &dp).scale_w(&three_half)
                    + &(&ysq * &p1).scale_w(&WeightedPoly::constant(rat_int(4)))));
        let gamma = rat_int(2) * (rat_int(alpha) + beta); // 2(alpha + beta)
        let a0 = &(&(&(&(&dy * &ddy) * &p).scale_w(&WeightedPoly::constant(rat_int(-6)))
            - &(&(&dy * &dy) * &dp).scale_w(&WeightedPoly::constant(rat_int(3))))
            - &(&(&(&y * &dy) * &p1).scale_w(&WeightedPoly::constant(rat_int(6)))))
            - &ysq.scale_w(&WeightedPoly::constant(gamma));
        SymSquareOp { a3, a2, a1, a0 }
    }

    fn apply(&self, f: &XPoly) -> XPoly {
        let f1 = f.dx();
        let f2 = f1.dx();
        let f3 = f2.dx();
        &(&(&self.a3 * &f3) + &(&self.a2 * &f2)) + &(&(&self.a1 * &f1) + &(&self.a0 * f))
    }
}

fn rat_constant(w: &WeightedPoly) -> Option<Rat> {
    if w.is_zero() {
        return Some(Rat::zero());
    }
    if w.num_terms() == 1 {
        let (e, c) = w.terms().next().unwrap();
        if *e == (0, 0, 0) {
            return Some(c.clone());
        }
    }
    None
}

/// Triangular solve for the monic degree-m polynomial F with `Op(F) = 0`,
/// eliminating the x^{2k+j} coefficient with the x^j monomial at each step.
fn solve_symmetric_square(op: &SymSquareOp, m: usize, k: usize) -> Result<XPoly> {
    let mut f = XPoly::monomial(m, WeightedPoly::one());
    for j in (0..m).rev() {
        let window = 2 * k + j;
        let xi = op.apply(&f).coeff(window);
        if xi.is_zero() {
            continue;
        }
        let diag = op.apply(&XPoly::monomial(j, WeightedPoly::one())).coeff(window);
        let diag = rat_constant(&diag).ok_or_else(|| {
            Error::NumericalInstability(
                "symmetric-square diagonal is not a rational constant".into(),
            )
        })?;
        if diag.is_zero() {
            return Err(Error::CaseDegeneracy(format!(
                "zero diagonal at monomial x^{j} in the symmetric-square solve"
            )));
        }
        f = &f + &XPoly::monomial(j, xi.div_rat(&diag).scale(&rat_int(-1)));
    }
    let residual = op.apply(&f);
    if !residual.is_zero() {
        return Err(Error::NonzeroRemainder(
            "symmetric square did not annihilate the solved polynomial".into(),
        ));
    }
    Ok(f)
}

/// The symmetric-square polynomial `F` alone (monic, degree `n + 2l`).
pub fn symmetric_square(pp: &ProblemParams) -> Result<XPoly> {
    let y0 = even_elliptic_solution(pp)?;
    let op = SymSquareOp::new(&y0, pp.alpha, &pp.beta);
    solve_symmetric_square(&op, pp.m as usize, pp.k.unwrap() as usize)
}

#[derive(Clone, Debug)]
pub struct SpectralData {
    /// Spectral polynomial, monic in B, degree `2(m - k) + 1`.
    pub q: WeightedPoly,
    /// Leading B-coefficient before monic normalization.
    pub norm: Rat,
    /// Symmetric-square polynomial (monic in x, degree m).
    pub f: XPoly,
    /// Even elliptic solution (monic in x, degree k).
    pub y0: XPoly,
}

/// Quartic-invariant numerator whose ratio to `y0^4` is the spectral
/// polynomial: a first integral of the symmetric-square flow.
fn spectral_numerator(f: &XPoly, y0: &XPoly, alpha: i64) -> XPoly {
    let p = XPoly::wp_cubic();
    let dp = p.dx();
    let half = WeightedPoly::constant(rat(1, 2));
    let quarter = WeightedPoly::constant(rat(1, 4));
    let y = y0.clone();
    let dy = y.dx();
    let ddy = dy.dx();
    let ysq = &y * &y;
    // B + alpha x
    let b_ax = XPoly::from_coeffs(vec![
        WeightedPoly::b(),
        WeightedPoly::constant(rat_int(alpha)),
    ]);
    let g = &(&f.dx() * &y) - &(f * &dy);
    let i_y0sq = &(&(&b_ax * &ysq)
        - &(&(&(&p * &ddy) + &(&dp * &dy).scale_w(&half)) * &y)
            .scale_w(&WeightedPoly::constant(rat(3, 2))))
        + &(&(&dy * &dy) * &p).scale_w(&WeightedPoly::constant(rat(3, 4)));
    let gsq = &g * &g;
    let fsq = f * f;
    let bracket = &(&(&dp * &y).scale_w(&half) * &g)
        + &(&p * &(&(&g.dx() * &y) - &(&g * &dy).scale_w(&WeightedPoly::constant(rat_int(2)))));
    &(&(&i_y0sq * &fsq) + &(&gsq * &p).scale_w(&quarter))
        - &(&(f * &bracket).scale_w(&half))
}

fn spectral_core(y0: &XPoly, f: &XPoly, alpha: i64) -> Result<WeightedPoly> {
    let num = spectral_numerator(f, y0, alpha);
    let y0sq = y0 * y0;
    let y0q = &y0sq * &y0sq;
    let quot = num.div_exact(&y0q)?;
    match quot.deg() {
        Some(0) => Ok(quot.coeff(0)),
        Some(d) => Err(Error::NonzeroRemainder(format!(
            "spectral quotient has residual x-degree {d}"
        ))),
        None => Err(Error::NumericalInstability(
            "spectral quotient vanished identically".into(),
        )),
    }
}

/// Spectral polynomial of the symmetric square: monic in B of degree
/// `2(m - k) + 1`, homogeneous of the same weight. Defined whenever the even
/// elliptic solution exists.
pub fn spectral_polynomial(pp: &ProblemParams) -> Result<SpectralData> {
    let y0 = even_elliptic_solution(pp)?;
    let k = pp.k.unwrap() as usize;
    let op = SymSquareOp::new(&y0, pp.alpha, &pp.beta);
    let f = solve_symmetric_square(&op, pp.m as usize, k)?;
    let q_raw = spectral_core(&y0, &f, pp.alpha)?;
    let want = 2 * (pp.m - pp.k.unwrap()) + 1;
    if q_raw.deg_b() != Some(want) || !q_raw.is_homogeneous_of(want) {
        return Err(Error::NumericalInstability(format!(
            "spectral polynomial has degree {:?}, expected {want}",
            q_raw.deg_b()
        )));
    }
    let (q, norm) = q_raw.monic_in_b()?;
    Ok(SpectralData { q, norm, f, y0 })
}

/// Spectral polynomial of `y'' = (m(m+1) wp + B) y`: the classical chain
/// `B^{2m+1} + ...`, monic in B. The same machinery with `y0 = 1`.
pub fn lame_spectral(m: u32) -> Result<WeightedPoly> {
    let alpha = (m as i64) * (m as i64 + 1);
    let beta = Rat::zero();
    let y0 = XPoly::one();
    if m == 0 {
        // F = 1 and the numerator is already the answer: B
        return Ok(WeightedPoly::b());
    }
    let op = SymSquareOp::new(&y0, alpha, &beta);
    let f = solve_symmetric_square(&op, m as usize, 0)?;
    let q_raw = spectral_core(&y0, &f, alpha)?;
    let (q, _) = q_raw.monic_in_b()?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{lattice_data, DEFAULT_TOL};

    fn pp(n: u32, l: u32) -> ProblemParams {
        problem_params(n, l).unwrap()
    }

    // raw alpha/beta formulas on signed arguments, for involution checks
    fn alpha_raw(n: i64, l: i64) -> i64 {
        n * n + 3 * n * l + 3 * l * l + 2 * n + 3 * l
    }
    fn beta_raw(n: i64, l: i64) -> Rat {
        rat((l - 1) * (n + l) * (n + 2 * l + 2), 2)
    }

    #[test]
    fn parameter_table() {
        let p = pp(1, 0);
        assert_eq!(p.alpha, 3);
        assert_eq!(p.beta, rat(-3, 2));
        assert_eq!(p.exponents, (-1, 1, 3));
        assert_eq!(p.regime, Regime::OddEven);
        assert_eq!(p.k, None);
        assert_eq!((p.m, p.m0), (1, None));

        let p = pp(1, 1);
        assert_eq!(p.alpha, 12);
        assert!(p.beta.is_zero());
        assert_eq!(p.regime, Regime::OddOdd);
        assert_eq!(p.k, Some(0));
        assert_eq!(p.m, 3);

        let p = pp(0, 1);
        assert_eq!(p.alpha, 6);
        assert!(p.beta.is_zero());
        assert_eq!(p.dual_beta, rat_int(-6));
        assert_eq!(p.regime, Regime::EvenAny);
        assert_eq!((p.k, p.m, p.m0), (Some(0), 2, Some(1)));

        let p = pp(2, 0);
        assert_eq!(p.alpha, 8);
        assert_eq!(p.beta, rat_int(-4));
        assert_eq!((p.k, p.m, p.m0), (Some(1), 2, Some(1)));

        let p = pp(0, 3);
        assert_eq!(p.beta, rat_int(24));
        assert_eq!(p.k, Some(1));

        assert!(matches!(problem_params(0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn exponent_sets_solve_the_indicial_cubic() {
        for n in 0..=6u32 {
            for l in 0..=6u32 {
                if n == 0 && l == 0 {
                    continue;
                }
                let p = pp(n, l);
                for r in [p.exponents.0, p.exponents.1, p.exponents.2] {
                    assert!(indicial(p.alpha, &p.beta, r).is_zero(), "({n},{l}) r={r}");
                }
                for r in [p.dual_exponents.0, p.dual_exponents.1, p.dual_exponents.2] {
                    assert!(
                        indicial(p.alpha, &p.dual_beta, r).is_zero(),
                        "dual ({n},{l}) r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn dual_parameters_form_an_involution() {
        // (n, l) -> (n + 3l, -l) preserves alpha and swaps beta with dual_beta
        for n in 0..=6i64 {
            for l in 0..=6i64 {
                if n == 0 && l == 0 {
                    continue;
                }
                let (dn, dl) = (n + 3 * l, -l);
                assert_eq!(alpha_raw(dn, dl), alpha_raw(n, l));
                let p = pp(n as u32, l as u32);
                assert_eq!(beta_raw(dn, dl), p.dual_beta, "({n},{l})");
                // and applying it twice returns home
                assert_eq!((dn + 3 * dl, -dl), (n, l));
            }
        }
    }

    #[test]
    fn pole_weight_factors_over_the_exponents() {
        for n in 0..=7i64 {
            for l in 0..=7i64 {
                if n == 0 && l == 0 {
                    continue;
                }
                let p = pp(n as u32, l as u32);
                for j in -3..=10i64 {
                    let lhs = pole_weight(p.alpha, &p.beta, j);
                    let rhs = rat(
                        (2 * j - l + 1) * (2 * j - n - l) * (2 * j + n + 2 * l + 2),
                        2,
                    );
                    assert_eq!(lhs, rhs, "primal ({n},{l}) j={j}");
                    let dhs = rat((2 * j - n - 2 * l) * (2 * j + l + 1) * (2 * j + n + l + 2), 2);
                    assert_eq!(
                        pole_weight(p.alpha, &p.dual_beta, j),
                        dhs,
                        "dual ({n},{l}) j={j}"
                    );
                    // and the defining relation to the indicial cubic
                    assert_eq!(
                        lhs.clone() + lhs,
                        -indicial(p.alpha, &p.beta, -2 * j),
                        "indicial link ({n},{l}) j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn laurent_coefficients_match_known_values() {
        let c = wp_laurent(7, 8);
        assert_eq!(c[0], WeightedPoly::one());
        assert_eq!(c[1], WeightedPoly::b().div_rat(&rat_int(7)));
        assert_eq!(c[2], WeightedPoly::g2().scale(&rat(1, 20)));
        assert_eq!(c[3], WeightedPoly::g3().scale(&rat(1, 28)));
        assert_eq!(c[4], WeightedPoly::g2().pow(2).scale(&rat(1, 1200)));
        assert_eq!(
            c[5],
            (&WeightedPoly::g2() * &WeightedPoly::g3()).scale(&rat(3, 6160))
        );
        for (i, ci) in c.iter().enumerate() {
            assert!(ci.is_homogeneous_of(i as u32), "weight of slot {i}");
        }
    }

    #[test]
    fn first_obstruction_is_b_for_n_1() {
        for l in 0..=4u32 {
            let p = apparent_polynomial(&pp(1, l)).unwrap();
            assert_eq!(p, WeightedPoly::b(), "l = {l}");
        }
    }

    #[test]
    fn second_obstruction_closed_form_for_n_3() {
        for l in 0..=3u32 {
            let p = apparent_polynomial(&pp(3, l)).unwrap();
            let want = &WeightedPoly::b().pow(2)
                - &WeightedPoly::g2().scale(&rat_int(3 * ((l as i64) + 2) * ((l as i64) + 2)));
            assert_eq!(p, want, "l = {l}");
        }
    }

    #[test]
    fn obstruction_degree_weight_and_monicity() {
        for n in [1u32, 3, 5, 7] {
            for l in 0..=5u32 {
                let p = apparent_polynomial(&pp(n, l)).unwrap();
                let want = (n + 1) / 2;
                assert_eq!(p.deg_b(), Some(want), "({n},{l})");
                assert!(p.is_homogeneous_of(want), "({n},{l})");
                assert_eq!(p.leading_b_rat(), Some(rat_int(1)), "({n},{l})");
            }
        }
        assert!(apparent_polynomial(&pp(2, 1)).is_err());
    }

    #[test]
    fn both_elliptic_obstructions_agree() {
        for n in [1u32, 3, 5, 7] {
            for l in [1u32, 3, 5] {
                let p = pp(n, l);
                let a = apparent_polynomial(&p).unwrap();
                let b = second_elliptic_polynomial(&p).unwrap();
                assert_eq!(a, b, "({n},{l})");
            }
        }
        assert!(second_elliptic_polynomial(&pp(1, 0)).is_err());
        assert!(second_elliptic_polynomial(&pp(2, 1)).is_err());
    }

    /// Residual of the even ansatz: `p Y''' + (3/2) p' Y'' + ((12 - alpha) x
    /// - B) Y' + beta Y` must vanish for a solution.
    fn even_ode_residual(y: &XPoly, alpha: i64, beta: &Rat) -> XPoly {
        let p = XPoly::wp_cubic();
        let dp = p.dx();
        let y1 = y.dx();
        let y2 = y1.dx();
        let y3 = y2.dx();
        let lin = XPoly::from_coeffs(vec![
            -&WeightedPoly::b(),
            WeightedPoly::constant(rat_int(12 - alpha)),
        ]);
        &(&(&p * &y3) + &(&dp * &y2).scale_w(&WeightedPoly::constant(rat(3, 2))))
            + &(&(&lin * &y1) + &y.scale_w(&WeightedPoly::constant(beta.clone())))
    }

    #[test]
    fn even_solution_oracles() {
        // (2,0): y0 = wp - B/4
        let y = even_elliptic_solution(&pp(2, 0)).unwrap();
        assert_eq!(y.deg(), Some(1));
        assert_eq!(y.coeff(1), WeightedPoly::one());
        assert_eq!(y.coeff(0), WeightedPoly::b().scale(&rat(-1, 4)));
        // l = 3: y0 = wp + B/((n+3)(n+8))
        for n in [0u32, 2, 4] {
            let y = even_elliptic_solution(&pp(n, 3)).unwrap();
            let ni = n as i64;
            assert_eq!(
                y.coeff(0),
                WeightedPoly::b().div_rat(&rat_int((ni + 3) * (ni + 8))),
                "n = {n}"
            );
        }
        // l = 1: y0 = 1
        assert_eq!(even_elliptic_solution(&pp(0, 1)).unwrap(), XPoly::one());
        assert!(even_elliptic_solution(&pp(1, 0)).is_err());
    }

    #[test]
    fn even_solutions_satisfy_the_equation_symbolically() {
        for (n, l) in [(2u32, 0u32), (4, 0), (0, 2), (2, 2), (4, 2), (0, 3), (2, 3), (1, 1), (3, 3), (0, 5)] {
            let p = pp(n, l);
            let y = even_elliptic_solution(&p).unwrap();
            let r = even_ode_residual(&y, p.alpha, &p.beta);
            assert!(r.is_zero(), "primal residual nonzero for ({n},{l})");
        }
    }

    #[test]
    fn dual_solutions_satisfy_the_dual_equation() {
        // (0,1): Y0 = wp - B/6
        let p = pp(0, 1);
        let y = dual_even_solution(&p).unwrap();
        assert_eq!(y.coeff(0), WeightedPoly::b().scale(&rat(-1, 6)));
        assert_eq!(y.deg(), Some(1));
        // the dual ladder weight (2j - n - 2l)(2j + l + 1)(2j + n + l + 2)/2
        // has no roots strictly between 0 and m0, so every even n solves
        for (n, l) in [
            (0u32, 1u32),
            (2, 1),
            (4, 1),
            (2, 3),
            (0, 3),
            (2, 0),
            (4, 0),
            (0, 2),
            (2, 2),
            (4, 2),
        ] {
            let p = pp(n, l);
            match dual_even_solution(&p) {
                Ok(y) => {
                    let r = even_ode_residual(&y, p.alpha, &p.dual_beta);
                    assert!(r.is_zero(), "dual residual nonzero for ({n},{l})");
                }
                Err(e) => panic!("dual solve failed for ({n},{l}): {e}"),
            }
        }
        assert!(dual_even_solution(&pp(1, 1)).is_err());
    }

    #[test]
    fn symmetric_square_oracle() {
        // (0,1): F = x^2 - (B/3) x + B^2/9 - g2/4
        let f = symmetric_square(&pp(0, 1)).unwrap();
        assert_eq!(f.deg(), Some(2));
        assert_eq!(f.coeff(2), WeightedPoly::one());
        assert_eq!(f.coeff(1), WeightedPoly::b().scale(&rat(-1, 3)));
        let want0 = &WeightedPoly::b().pow(2).scale(&rat(1, 9))
            - &WeightedPoly::g2().scale(&rat(1, 4));
        assert_eq!(f.coeff(0), want0);
    }

    #[test]
    fn symmetric_square_diagonal_closed_forms() {
        // mechanical diagonal coefficients against their factored forms
        for (n, l) in [(0u32, 1u32), (2, 1), (0, 3), (2, 0), (4, 0), (0, 2), (2, 2)] {
            let p = pp(n, l);
            let y0 = even_elliptic_solution(&p).unwrap();
            let k = p.k.unwrap() as usize;
            let op = SymSquareOp::new(&y0, p.alpha, &p.beta);
            let (ni, li, mi) = (n as i64, l as i64, p.m as i64);
            for j in 0..=(p.m as i64) {
                let got = rat_constant(&op.apply(&XPoly::monomial(j as usize, WeightedPoly::one())).coeff(2 * k + j as usize))
                    .expect("diagonal must be a rational constant");
                let want = if li % 2 == 1 {
                    rat_int(4 * (j - mi)) * rat(2 * j - (li - 2), 2) * rat_int(j + mi - li + 2)
                } else {
                    rat_int(4 * (j - mi)) * rat(2 * j - (mi - li - 1), 2) * rat_int(j + li + 1)
                };
                assert_eq!(got, want, "({n},{l}) j={j}");
                let _ = ni;
            }
        }
        // the classical second-order chain: y0 = 1, alpha = m(m+1)
        for m in 1..=4i64 {
            let op = SymSquareOp::new(&XPoly::one(), m * (m + 1), &Rat::zero());
            for j in 0..=m {
                let got = rat_constant(&op.apply(&XPoly::monomial(j as usize, WeightedPoly::one())).coeff(j as usize))
                    .unwrap();
                let want = rat_int(4 * (j - m)) * rat(2 * j + 1, 2) * rat_int(j + m + 1);
                assert_eq!(got, want, "m={m} j={j}");
            }
        }
    }

    #[test]
    fn classical_spectral_chain() {
        assert_eq!(lame_spectral(0).unwrap(), WeightedPoly::b());
        let l1 = lame_spectral(1).unwrap();
        let want1 = &(&WeightedPoly::b().pow(3)
            - &(&WeightedPoly::g2() * &WeightedPoly::b()).scale(&rat(1, 4)))
            - &WeightedPoly::g3().scale(&rat(1, 4));
        assert_eq!(l1, want1);

        let l2 = lame_spectral(2).unwrap();
        let b = WeightedPoly::b();
        let g2 = WeightedPoly::g2();
        let g3 = WeightedPoly::g3();
        let want2 = &(&(&b.pow(5) - &(&g2 * &b.pow(3)).scale(&rat(21, 4)))
            + &(&g3 * &b.pow(2)).scale(&rat(27, 4)))
            + &(&(&g2.pow(2) * &b).scale(&rat(27, 4)) - &(&g2 * &g3).scale(&rat(81, 4)));
        assert_eq!(l2, want2);
    }

    #[test]
    fn spectral_polynomial_bridges_to_the_classical_chain() {
        // l = 1 has y0 = 1 and alpha = (n+2)(n+3): the second-order chain
        for n in [0u32, 2] {
            let q = spectral_polynomial(&pp(n, 1)).unwrap().q;
            let want = lame_spectral(n + 2).unwrap();
            assert_eq!(q, want, "n = {n}");
        }
    }

    #[test]
    fn spectral_degree_and_weight() {
        for (n, l) in [(0u32, 2u32), (2, 0), (2, 2), (0, 3), (4, 0), (2, 1)] {
            let p = pp(n, l);
            let s = spectral_polynomial(&p).unwrap();
            let want = 2 * (p.m - p.k.unwrap()) + 1;
            assert_eq!(s.q.deg_b(), Some(want), "({n},{l})");
            assert!(s.q.is_homogeneous_of(want), "({n},{l})");
            assert_eq!(s.q.leading_b_rat(), Some(rat_int(1)));
            assert!(!s.norm.is_zero());
            // expected degree identities per parity of l
            let by_parity = if l % 2 == 1 { 2 * n + 3 * l + 2 } else { n + 3 * l + 1 };
            assert_eq!(want, by_parity, "({n},{l})");
        }
    }

    #[test]
    fn spectral_ratio_is_x_independent_numerically() {
        use num_complex::Complex64 as C64;
        for (n, l) in [(2u32, 0u32), (0, 2)] {
            let p = pp(n, l);
            let s = spectral_polynomial(&p).unwrap();
            let (b, g2, g3) = (C64::new(0.7, 0.3), C64::new(1.1, -0.2), C64::new(0.4, 0.9));
            let num = spectral_numerator(&s.f, &s.y0, p.alpha).specialize_b(b, g2, g3);
            let den = s.y0.specialize_b(b, g2, g3);
            let qv = s.q.eval(b, g2, g3);
            let norm = s.norm.to_f64().unwrap();
            let mut samples = Vec::new();
            for xr in [0.3, -1.2, 2.4, 0.9] {
                let x = C64::new(xr, 0.5 * xr * xr);
                let d = den.eval(x);
                samples.push(num.eval(x) / (d * d * d * d));
            }
            for s in &samples {
                let rel = (s - norm * qv).norm() / (1.0 + s.norm());
                assert!(rel < 1e-9, "({n},{l}): sample {s} vs {}", norm * qv);
            }
        }
    }

    #[test]
    fn branch_obstruction_matches_the_pole_obstruction() {
        // The half-integer expansion's obstruction at any branch point equals
        // the pole-series obstruction specialized to the lattice.
        let lat = lattice_data(C::new(0.0, 1.0), DEFAULT_TOL).unwrap();
        for (n, l) in [(1u32, 0u32), (3, 0), (3, 2), (5, 0)] {
            let p = pp(n, l);
            let spec = apparent_polynomial(&p).unwrap().specialize(lat.g2, lat.g3);
            for i in 1..=3 {
                let phat = halfbasis_polynomial(&p, &lat, i).unwrap();
                let deg = spec.degree().unwrap();
                assert_eq!(phat.degree(), Some(deg), "({n},{l}) i={i}");
                let scale = spec.max_coeff_norm().max(1.0);
                for j in 0..=deg {
                    let d = (phat.coeff(j) - spec.coeff(j)).norm();
                    assert!(d <= 1e-8 * scale, "({n},{l}) i={i} coeff {j}: {d:.3e}");
                }
            }
        }
    }

    #[test]
    fn branch_obstruction_for_n_1_is_linear() {
        let lat = lattice_data(C::new(0.3, 0.8), DEFAULT_TOL).unwrap();
        for l in [0u32, 2, 4] {
            let p = pp(1, l);
            for i in 1..=3 {
                let phat = halfbasis_polynomial(&p, &lat, i).unwrap();
                assert_eq!(phat.degree(), Some(1), "l={l} i={i}");
                assert!(phat.coeff(0).norm() <= 1e-9, "l={l} i={i}: {}", phat.coeff(0));
            }
        }
    }

    #[test]
    fn branch_solutions_close_their_recursions() {
        let lat = lattice_data(C::new(0.0, 1.0), DEFAULT_TOL).unwrap();
        for (n, l) in [(3u32, 0u32), (3, 2), (5, 0)] {
            let p = pp(n, l);
            for i in 1..=3 {
                let phat = halfbasis_polynomial(&p, &lat, i).unwrap();
                let roots = crate::roots::find_roots(&phat).unwrap();
                for &b in &roots.roots {
                    let sol = halfbasis_solution(&p, &lat, i, b, 1e-6).unwrap();
                    let k = ((l + n - 1) / 2) as i64;
                    let k0 = (l as i64) / 2 - 1;
                    assert!(sol.degree == k || sol.degree == k0, "({n},{l}) i={i}");
                    assert_eq!(sol.coeffs.len() as i64, k + 1);
                    // the leading populated coefficient is 1 by construction
                    let lead = sol.coeffs[sol.degree as usize];
                    assert!((lead - C::new(1.0, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn branch_solution_rejects_generic_b() {
        let lat = lattice_data(C::new(0.0, 1.0), DEFAULT_TOL).unwrap();
        let p = pp(3, 0);
        let err = halfbasis_solution(&p, &lat, 1, C::new(123.4, 0.0), 1e-6);
        assert!(matches!(err, Err(Error::NotApparent { .. })));
    }
}
