//! Exact polynomial arithmetic for the accessory parameter.
//!
//! Everything the finite recursions produce lives in the graded ring
//! `Q[g2, g3][B]` with weights `wt(B) = 1`, `wt(g2) = 2`, `wt(g3) = 3`.
//! A [`WeightedPoly`] stores terms as an exponent triple `(b, g2, g3)` mapped
//! to an exact rational coefficient; [`XPoly`] is a univariate polynomial in
//! `x = wp(z)` over that ring, used while expanding symmetric-square
//! identities; [`NumPoly`] is the numeric image after substituting complex
//! values for `g2`, `g3` (and possibly `B`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Rat = BigRational;

/// Exact rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from(BigInt::from(num))
}

/// Exponent triple `(b, g2, g3)`.
pub type Exps = (u32, u32, u32);

fn exps_weight(e: &Exps) -> u32 {
    e.0 + 2 * e.1 + 3 * e.2
}

/// Polynomial in `B` over `Q[g2, g3]`, stored sparsely by exponent triple.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct WeightedPoly {
    terms: BTreeMap<Exps, Rat>,
}

impl WeightedPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::default();
        p.add_term((0, 0, 0), c);
        p
    }

    /// The generator B.
    pub fn b() -> Self {
        Self::monomial((1, 0, 0), Rat::one())
    }

    /// The generator g2.
    pub fn g2() -> Self {
        Self::monomial((0, 1, 0), Rat::one())
    }

    /// The generator g3.
    pub fn g3() -> Self {
        Self::monomial((0, 0, 1), Rat::one())
    }

    pub fn monomial(e: Exps, c: Rat) -> Self {
        let mut p = Self::default();
        p.add_term(e, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, e: Exps, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::default();
        for (e, v) in &self.terms {
            out.terms.insert(*e, v * c);
        }
        out
    }

    pub fn div_rat(&self, c: &Rat) -> Self {
        assert!(!c.is_zero(), "division by zero rational");
        self.scale(&c.recip())
    }

    /// Grading weight if the polynomial is homogeneous. The zero polynomial
    /// reports `Some(0)`.
    pub fn weight(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let w = match it.next() {
            None => return Some(0),
            Some(e) => exps_weight(e),
        };
        for e in it {
            if exps_weight(e) != w {
                return None;
            }
        }
        Some(w)
    }

    pub fn is_homogeneous_of(&self, w: u32) -> bool {
        self.terms.keys().all(|e| exps_weight(e) == w)
    }

    /// Degree in B, `None` for the zero polynomial.
    pub fn deg_b(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).max()
    }

    /// Coefficient of `B^j` as a polynomial in g2, g3 alone.
    pub fn coeff_b(&self, j: u32) -> WeightedPoly {
        let mut out = Self::default();
        for (e, v) in &self.terms {
            if e.0 == j {
                out.terms.insert((0, e.1, e.2), v.clone());
            }
        }
        out
    }

    /// The leading B-coefficient when it is a pure rational (no g2, g3).
    pub fn leading_b_rat(&self) -> Option<Rat> {
        let d = self.deg_b()?;
        let lead = self.coeff_b(d);
        if lead.num_terms() == 1 {
            if let Some(c) = lead.terms.get(&(0, 0, 0)) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Divide by the leading B-coefficient, which must be a nonzero rational.
    /// Returns the monic polynomial and the scalar that was divided out.
    pub fn monic_in_b(&self) -> Result<(WeightedPoly, Rat)> {
        let lead = self.leading_b_rat().ok_or_else(|| {
            Error::Domain("leading B-coefficient is not a rational constant".into())
        })?;
        Ok((self.div_rat(&lead), lead))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitute numeric g2, g3, keeping B formal. Trailing coefficients that
    /// vanish numerically (relative to the largest) are trimmed.
    pub fn specialize(&self, g2: Complex64, g3: Complex64) -> NumPoly {
        let deg = match self.deg_b() {
            None => return NumPoly::zero(),
            Some(d) => d as usize,
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (e, v) in &self.terms {
            let c = rat_to_f64(v);
            coeffs[e.0 as usize] += c * g2.powu(e.1) * g3.powu(e.2);
        }
        NumPoly::new(coeffs)
    }

    /// Full numeric evaluation at `(B, g2, g3)`.
    pub fn eval(&self, b: Complex64, g2: Complex64, g3: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, v) in &self.terms {
            acc += rat_to_f64(v) * b.powu(e.0) * g2.powu(e.1) * g3.powu(e.2);
        }
        acc
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(e, v)| TermRecord {
                b: e.0,
                g2: e.1,
                g3: e.2,
                num: v.numer().to_string(),
                den: v.denom().to_string(),
            })
            .collect()
    }

    pub fn from_records(records: &[TermRecord]) -> Result<Self> {
        let mut out = Self::default();
        for r in records {
            let num = BigInt::from_str(&r.num)
                .map_err(|e| Error::BadInput(format!("bad numerator {:?}: {e}", r.num)))?;
            let den = BigInt::from_str(&r.den)
                .map_err(|e| Error::BadInput(format!("bad denominator {:?}: {e}", r.den)))?;
            if den.is_zero() {
                return Err(Error::BadInput("zero denominator in term record".into()));
            }
            out.add_term((r.b, r.g2, r.g3), Rat::new(num, den));
        }
        Ok(out)
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Serialized form of one term of a [`WeightedPoly`]. Numerator and
/// denominator are decimal strings so arbitrary-size integers round-trip
/// bit-exactly through JSON.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermRecord {
    pub b: u32,
    pub g2: u32,
    pub g3: u32,
    pub num: String,
    pub den: String,
}

impl Add for &WeightedPoly {
    type Output = WeightedPoly;
    fn add(self, rhs: &WeightedPoly) -> WeightedPoly {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(*e, v.clone());
        }
        out
    }
}

impl Sub for &WeightedPoly {
    type Output = WeightedPoly;
    fn sub(self, rhs: &WeightedPoly) -> WeightedPoly {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(*e, -v.clone());
        }
        out
    }
}

impl Mul for &WeightedPoly {
    type Output = WeightedPoly;
    fn mul(self, rhs: &WeightedPoly) -> WeightedPoly {
        let mut out = WeightedPoly::default();
        for (ea, va) in &self.terms {
            for (eb, vb) in &rhs.terms {
                out.add_term((ea.0 + eb.0, ea.1 + eb.1, ea.2 + eb.2), va * vb);
            }
        }
        out
    }
}

impl Neg for &WeightedPoly {
    type Output = WeightedPoly;
    fn neg(self) -> WeightedPoly {
        let mut out = WeightedPoly::default();
        for (e, v) in &self.terms {
            out.terms.insert(*e, -v.clone());
        }
        out
    }
}

impl fmt::Debug for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, v) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({v})")?;
            if e.0 > 0 {
                write!(f, "*B^{}", e.0)?;
            }
            if e.1 > 0 {
                write!(f, "*g2^{}", e.1)?;
            }
            if e.2 > 0 {
                write!(f, "*g3^{}", e.2)?;
            }
        }
        Ok(())
    }
}

/// Univariate polynomial in `x = wp(z)` with [`WeightedPoly`] coefficients,
/// index = power of x. Trailing zero coefficients are kept trimmed.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct XPoly {
    coeffs: Vec<WeightedPoly>,
}

impl XPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_coeffs(vec![WeightedPoly::one()])
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![WeightedPoly::zero(), WeightedPoly::one()])
    }

    pub fn constant(c: WeightedPoly) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `x^k` with coefficient c.
    pub fn monomial(k: usize, c: WeightedPoly) -> Self {
        let mut coeffs = vec![WeightedPoly::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(coeffs: Vec<WeightedPoly>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    /// `4x^3 - g2 x - g3`, the square of d(wp)/dz as a polynomial in wp.
    pub fn wp_cubic() -> Self {
        Self::from_coeffs(vec![
            -&WeightedPoly::g3(),
            -&WeightedPoly::g2(),
            WeightedPoly::zero(),
            WeightedPoly::constant(rat_int(4)),
        ])
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> WeightedPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[WeightedPoly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: WeightedPoly) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, WeightedPoly::zero());
        }
        self.coeffs[k] = c;
        self.trim();
    }

    /// d/dx.
    pub fn dx(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&rat_int(k as i64)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn scale_w(&self, c: &WeightedPoly) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        Self::from_coeffs(coeffs)
    }

    /// Exact division. The divisor's leading coefficient must be a nonzero
    /// rational constant; any nonzero remainder is an error.
    pub fn div_exact(&self, den: &XPoly) -> Result<XPoly> {
        let dd = den
            .deg()
            .ok_or_else(|| Error::Domain("division by zero polynomial".into()))?;
        let lead = den.coeffs[dd].leading_b_rat().filter(|_| den.coeffs[dd].deg_b() == Some(0));
        let lead = match lead {
            Some(c) if den.coeffs[dd].num_terms() == 1 => c,
            _ => {
                return Err(Error::Domain(
                    "divisor leading coefficient is not a rational constant".into(),
                ))
            }
        };
        let mut rem = self.clone();
        let nd = match rem.deg() {
            None => return Ok(XPoly::zero()),
            Some(d) => d,
        };
        if nd < dd {
            return Err(Error::NonzeroRemainder(
                "dividend degree below divisor degree".into(),
            ));
        }
        let mut quot = vec![WeightedPoly::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = rem.coeff(dd + k);
            if top.is_zero() {
                continue;
            }
            let q = top.div_rat(&lead);
            for (i, dc) in den.coeffs.iter().enumerate() {
                let cur = rem.coeff(i + k);
                rem.set_coeff(i + k, &cur - &(dc * &q));
            }
            quot[k] = q;
        }
        if !rem.is_zero() {
            return Err(Error::NonzeroRemainder(format!(
                "remainder of x-degree {:?} survived exact division",
                rem.deg()
            )));
        }
        Ok(XPoly::from_coeffs(quot))
    }

    /// Substitute numeric g2, g3 and B, producing a polynomial in x.
    pub fn specialize_b(&self, b: Complex64, g2: Complex64, g3: Complex64) -> NumPoly {
        NumPoly::new(self.coeffs.iter().map(|c| c.eval(b, g2, g3)).collect())
    }
}

impl Add for &XPoly {
    type Output = XPoly;
    fn add(self, rhs: &XPoly) -> XPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) + &rhs.coeff(k));
        }
        XPoly::from_coeffs(coeffs)
    }
}

impl Sub for &XPoly {
    type Output = XPoly;
    fn sub(self, rhs: &XPoly) -> XPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) - &rhs.coeff(k));
        }
        XPoly::from_coeffs(coeffs)
    }
}

impl Mul for &XPoly {
    type Output = XPoly;
    fn mul(self, rhs: &XPoly) -> XPoly {
        if self.is_zero() || rhs.is_zero() {
            return XPoly::zero();
        }
        let mut coeffs =
            vec![WeightedPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        XPoly::from_coeffs(coeffs)
    }
}

impl Neg for &XPoly {
    type Output = XPoly;
    fn neg(self) -> XPoly {
        XPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Numeric polynomial with complex coefficients, index = power.
#[derive(Clone, Debug, PartialEq)]
pub struct NumPoly {
    pub coeffs: Vec<Complex64>,
}

/// Relative threshold below which a leading numeric coefficient is treated
/// as an artifact of cancellation and trimmed.
const TRIM_REL: f64 = 1e-13;

impl NumPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn trim(&mut self) {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= TRIM_REL * scale {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Magnitude of the evaluation `sum |a_k| |z|^k`, the natural scale for
    /// backward-error residuals.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c.norm();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut coeffs =
            vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    /// Monic product of `(x - r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Self::new(vec![Complex64::new(1.0, 0.0)]);
        for r in roots {
            p = p.mul(&Self::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct NumPolyWire {
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for NumPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NumPolyWire {
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NumPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = NumPolyWire::deserialize(d)?;
        Ok(NumPoly::new(
            wire.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        ))
    }
}
