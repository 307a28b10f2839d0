//! Dense complex linear algebra for the small matrices this crate moves
//! around (fundamental systems, companion matrices).
//!
//! LU with partial pivoting backs `solve`/`inverse`/`det`; eigenvalues come
//! from a Householder Hessenberg reduction followed by an explicitly shifted
//! QR iteration with complex Givens rotations (Wilkinson shift, deterministic
//! exceptional shifts); eigenvectors from inverse iteration on the factored
//! shifted matrix. Everything is O(n^3) per sweep, which is plenty below
//! n ~ 30.

use num_complex::Complex64;

use crate::{Error, Result};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl std::fmt::Debug for CMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let v = self[(i, j)];
                write!(f, "{:>12.5e}{:+.5e}i ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C;
    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        &mut self.data[i * self.cols + j]
    }
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build from row slices; all rows must share a length.
    pub fn from_rows(rows: &[Vec<C>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        CMat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn col(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C]) {
        assert_eq!(v.len(), self.rows);
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: C) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// LU with partial pivoting: returns (LU-packed, pivot rows, sign swaps).
    fn lu(&self) -> Result<(CMat, Vec<usize>, usize)> {
        if !self.is_square() {
            return Err(Error::BadInput("LU of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut swaps = 0usize;
        let scale = self.max_abs().max(1.0);
        for k in 0..n {
            let (mut best, mut best_mag) = (k, a[(k, k)].norm());
            for i in k + 1..n {
                let m = a[(i, k)].norm();
                if m > best_mag {
                    best = i;
                    best_mag = m;
                }
            }
            if best_mag < 1e-300 * scale {
                return Err(Error::NumericalInstability(
                    "singular matrix in LU factorization".into(),
                ));
            }
            if best != k {
                for j in 0..n {
                    let t = a[(k, j)];
                    a[(k, j)] = a[(best, j)];
                    a[(best, j)] = t;
                }
                piv.swap(k, best);
                swaps += 1;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let m = a[(i, k)] / pivot;
                a[(i, k)] = m;
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= m * akj;
                }
            }
        }
        Ok((a, piv, swaps))
    }

    pub fn det(&self) -> Result<C> {
        match self.lu() {
            Ok((lu, _, swaps)) => {
                let mut d = if swaps % 2 == 0 { ONE } else { -ONE };
                for i in 0..self.rows {
                    d *= lu[(i, i)];
                }
                Ok(d)
            }
            // a singular matrix has a perfectly good determinant
            Err(Error::NumericalInstability(_)) => Ok(ZERO),
            Err(e) => Err(e),
        }
    }

    /// Solve `self * X = B` for all columns of B.
    pub fn solve(&self, b: &CMat) -> Result<CMat> {
        if self.rows != b.rows {
            return Err(Error::BadInput("solve: right-hand side height mismatch".into()));
        }
        let (lu, piv, _) = self.lu()?;
        let n = self.rows;
        let mut x = CMat::zeros(n, b.cols);
        for c in 0..b.cols {
            // permuted forward substitution
            let mut y = vec![ZERO; n];
            for i in 0..n {
                let mut s = b[(piv[i], c)];
                for j in 0..i {
                    s -= lu[(i, j)] * y[j];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in i + 1..n {
                    s -= lu[(i, j)] * y[j];
                }
                y[i] = s / lu[(i, i)];
            }
            x.set_col(c, &y);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMat> {
        self.solve(&CMat::identity(self.rows))
    }

    /// Crude condition estimate `||A||_F ||A^-1||_F`; infinite when singular.
    pub fn cond_estimate(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => self.frobenius() * inv.frobenius(),
            Err(_) => f64::INFINITY,
        }
    }

    /// Diagonal similarity with powers of two to even out row/column norms.
    fn balance(&mut self) -> Vec<f64> {
        let n = self.rows;
        let mut d = vec![1.0f64; n];
        for _ in 0..5 {
            let mut done = true;
            for i in 0..n {
                let mut rnorm = 0.0;
                let mut cnorm = 0.0;
                for j in 0..n {
                    if j != i {
                        rnorm += self[(i, j)].norm();
                        cnorm += self[(j, i)].norm();
                    }
                }
                if rnorm == 0.0 || cnorm == 0.0 {
                    continue;
                }
                let mut f = 1.0f64;
                let s = cnorm + rnorm;
                let mut c = cnorm;
                while c < rnorm / 2.0 {
                    c *= 4.0;
                    f *= 2.0;
                }
                while c > rnorm * 2.0 {
                    c /= 4.0;
                    f /= 2.0;
                }
                if (c + rnorm) < 0.95 * s && f != 1.0 {
                    done = false;
                    d[i] *= f;
                    for j in 0..n {
                        self[(i, j)] /= f;
                    }
                    for j in 0..n {
                        self[(j, i)] *= f;
                    }
                }
            }
            if done {
                break;
            }
        }
        d
    }

    /// Householder reduction to upper Hessenberg form (in place).
    fn hessenberg(&mut self) {
        let n = self.rows;
        for k in 0..n.saturating_sub(2) {
            let mut alpha = 0.0;
            for i in k + 1..n {
                alpha += self[(i, k)].norm_sqr();
            }
            let alpha = alpha.sqrt();
            if alpha < 1e-300 {
                continue;
            }
            let x0 = self[(k + 1, k)];
            let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
            // v = x + phase * alpha * e1, reflector H = I - 2 v v* / (v* v)
            let mut v: Vec<C> = (k + 1..n).map(|i| self[(i, k)]).collect();
            v[0] += phase * alpha;
            let vnorm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
            if vnorm2 < 1e-300 {
                continue;
            }
            // left: A <- A - 2 v (v* A) / vnorm2 on rows k+1.., cols k..
            for j in k..n {
                let mut dot = ZERO;
                for (r, vi) in v.iter().enumerate() {
                    dot += vi.conj() * self[(k + 1 + r, j)];
                }
                let f = 2.0 * dot / vnorm2;
                for (r, vi) in v.iter().enumerate() {
                    let delta = f * vi;
                    self[(k + 1 + r, j)] -= delta;
                }
            }
            // right: A <- A - 2 (A v) v* / vnorm2 on cols k+1.., all rows
            for i in 0..n {
                let mut dot = ZERO;
                for (r, vi) in v.iter().enumerate() {
                    dot += self[(i, k + 1 + r)] * vi;
                }
                let f = 2.0 * dot / vnorm2;
                for (r, vi) in v.iter().enumerate() {
                    let delta = f * vi.conj();
                    self[(i, k + 1 + r)] -= delta;
                }
            }
            // clean the annihilated entries
            for i in k + 2..n {
                self[(i, k)] = ZERO;
            }
        }
    }

    /// All eigenvalues, unordered.
    pub fn eigenvalues(&self) -> Result<Vec<C>> {
        if !self.is_square() {
            return Err(Error::BadInput("eigenvalues of a non-square matrix".into()));
        }
        let n = self.rows;
        match n {
            0 => return Ok(vec![]),
            1 => return Ok(vec![self[(0, 0)]]),
            2 => {
                let (l1, l2) = eig2(self[(0, 0)], self[(0, 1)], self[(1, 0)], self[(1, 1)]);
                return Ok(vec![l1, l2]);
            }
            _ => {}
        }
        let mut h = self.clone();
        h.balance();
        h.hessenberg();
        let eps = 1e-15;
        let mut eigs = Vec::with_capacity(n);
        let mut p = n; // active block is 0..p
        let mut stall = 0usize;
        let mut total = 0usize;
        let max_total = 60 * n.max(10);
        while p > 0 {
            if p == 1 {
                eigs.push(h[(0, 0)]);
                break;
            }
            // deflate any negligible subdiagonal inside the active block
            let mut deflated = false;
            for i in (1..p).rev() {
                let s = h[(i - 1, i - 1)].norm() + h[(i, i)].norm();
                let s = if s == 0.0 { 1.0 } else { s };
                if h[(i, i - 1)].norm() <= eps * s {
                    h[(i, i - 1)] = ZERO;
                    if i == p - 1 {
                        eigs.push(h[(p - 1, p - 1)]);
                        p -= 1;
                        stall = 0;
                        deflated = true;
                        break;
                    }
                }
            }
            if deflated {
                continue;
            }
            if p == 2 {
                let (l1, l2) = eig2(h[(0, 0)], h[(0, 1)], h[(1, 0)], h[(1, 1)]);
                eigs.push(l1);
                eigs.push(l2);
                break;
            }
            total += 1;
            stall += 1;
            if total > max_total {
                return Err(Error::ConvergenceFailure(
                    "QR iteration failed to converge".into(),
                ));
            }
            // find the start of the trailing unreduced block
            let mut lo = 0;
            for i in (1..p).rev() {
                if h[(i, i - 1)] == ZERO {
                    lo = i;
                    break;
                }
            }
            let mu = if stall % 12 == 0 {
                // deterministic exceptional shift to break symmetry stalls
                h[(p - 1, p - 1)] + C::new(0.75, 0.4) * h[(p - 1, p - 2)].norm()
            } else {
                wilkinson_shift(
                    h[(p - 2, p - 2)],
                    h[(p - 2, p - 1)],
                    h[(p - 1, p - 2)],
                    h[(p - 1, p - 1)],
                )
            };
            // shifted QR sweep on rows/cols lo..p via Givens rotations
            let mut rots: Vec<(usize, C, C, f64)> = Vec::with_capacity(p - lo);
            for i in lo..p {
                h[(i, i)] -= mu;
            }
            for j in lo..p - 1 {
                let a = h[(j, j)];
                let b = h[(j + 1, j)];
                let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
                if r < 1e-300 {
                    rots.push((j, ONE, ZERO, 1.0));
                    continue;
                }
                // G = (1/r) [[conj a, conj b], [-b, a]] zeroes the subdiagonal
                for col in j..p {
                    let x = h[(j, col)];
                    let y = h[(j + 1, col)];
                    h[(j, col)] = (a.conj() * x + b.conj() * y) / r;
                    h[(j + 1, col)] = (-b * x + a * y) / r;
                }
                rots.push((j, a, b, r));
            }
            // multiply the adjoint rotations back on the right
            for &(j, a, b, r) in &rots {
                let hi = (j + 2).min(p - 1);
                for row in lo..=hi {
                    let x = h[(row, j)];
                    let y = h[(row, j + 1)];
                    h[(row, j)] = (x * a + y * b) / r;
                    h[(row, j + 1)] = (-x * b.conj() + y * a.conj()) / r;
                }
            }
            for i in lo..p {
                h[(i, i)] += mu;
            }
        }
        Ok(eigs)
    }

    /// Eigenvalues with eigenvectors as the columns of the returned matrix,
    /// each normalized to unit 2-norm. Vectors come from inverse iteration,
    /// so for defective matrices nearby eigenvalue vectors will be nearly
    /// parallel; callers decide whether that matters.
    pub fn eigen(&self) -> Result<(Vec<C>, CMat)> {
        let eigs = self.eigenvalues()?;
        let n = self.rows;
        let mut vmat = CMat::zeros(n, n);
        let scale = self.max_abs().max(1.0);
        for (k, &lam) in eigs.iter().enumerate() {
            let mut shifted = self.clone();
            // tiny diagonal offset keeps the factorization from collapsing
            let off = C::new(1e-14 * scale, 1e-14 * scale);
            for i in 0..n {
                shifted[(i, i)] -= lam + off;
            }
            // deterministic start, varied per eigenvalue index
            let mut v: Vec<C> = (0..n)
                .map(|i| C::new(1.0 + 0.17 * (i + k) as f64, 0.31 * ((i * 7 + 3 * k) % 5) as f64))
                .collect();
            normalize(&mut v);
            let mut ok = false;
            for _ in 0..6 {
                let b = CMat {
                    rows: n,
                    cols: 1,
                    data: v.clone(),
                };
                let sol = match shifted.solve(&b) {
                    Ok(s) => s,
                    Err(_) => break,
                };
                v = sol.col(0);
                normalize(&mut v);
                let av = self.mul_vec(&v);
                let res: f64 = av
                    .iter()
                    .zip(&v)
                    .map(|(a, x)| (a - lam * x).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if res <= 1e-10 * scale {
                    ok = true;
                    break;
                }
            }
            if !ok {
                // last resort: accept the best vector found, residual and all
                let av = self.mul_vec(&v);
                let res: f64 = av
                    .iter()
                    .zip(&v)
                    .map(|(a, x)| (a - lam * x).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if res > 1e-6 * scale {
                    return Err(Error::ConvergenceFailure(format!(
                        "inverse iteration residual {res:.3e} for eigenvalue {lam}"
                    )));
                }
            }
            vmat.set_col(k, &v);
        }
        Ok((eigs, vmat))
    }
}

fn normalize(v: &mut [C]) {
    let n: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

/// Eigenvalues of `[[a, b], [c, d]]` in closed form.
pub fn eig2(a: C, b: C, c: C, d: C) -> (C, C) {
    let tr = a + d;
    let half = tr * 0.5;
    let disc = (half * half - (a * d - b * c)).sqrt();
    // pick the sign that avoids cancellation in the larger root
    let disc = if (half + disc).norm() >= (half - disc).norm() {
        disc
    } else {
        -disc
    };
    let l1 = half + disc;
    let det = a * d - b * c;
    let l2 = if l1.norm() > 0.0 { det / l1 } else { half - disc };
    (l1, l2)
}

/// Wilkinson shift: eigenvalue of the trailing 2x2 closest to its (2,2).
fn wilkinson_shift(a: C, b: C, c: C, d: C) -> C {
    let (l1, l2) = eig2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn sort_by_re(mut v: Vec<C>) -> Vec<C> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn solve_and_inverse_round_trip() {
        let a = CMat::from_rows(&[
            vec![c(2.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(3.0, 0.5), c(-1.0, 2.0)],
            vec![c(0.0, 2.0), c(1.0, -1.0), c(4.0, 0.0)],
        ]);
        let b = CMat::from_rows(&[vec![c(1.0, 0.0)], vec![c(0.0, 1.0)], vec![c(2.0, -1.0)]]);
        let x = a.solve(&b).unwrap();
        let r = a.mul(&x).sub(&b);
        assert!(r.max_abs() < 1e-12, "residual {}", r.max_abs());

        let inv = a.inverse().unwrap();
        let eye = a.mul(&inv).sub(&CMat::identity(3));
        assert!(eye.max_abs() < 1e-12, "A A^-1 - I = {}", eye.max_abs());
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = CMat::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(3.0, 0.0), c(4.0, 0.0)],
        ]);
        let d = a.det().unwrap();
        assert!((d - c(-2.0, 0.0)).norm() < 1e-14);

        let m = CMat::from_rows(&[
            vec![c(0.0, 1.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 1.0)],
        ]);
        // det = i*i - 1 = -2
        assert!((m.det().unwrap() - c(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_matrix_reports_zero_det_and_fails_solve() {
        let a = CMat::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ]);
        assert!(a.det().unwrap().norm() < 1e-12);
        assert!(a.inverse().is_err());
    }

    #[test]
    fn eig2_handles_rotation_and_jordan_block() {
        let (l1, l2) = eig2(c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let got = sort_by_re(vec![l1, l2]);
        assert!((got[0] - c(0.0, -1.0)).norm() < 1e-14 || (got[0] - c(0.0, 1.0)).norm() < 1e-14);
        assert!((l1 + l2).norm() < 1e-14);
        assert!((l1 * l2 - c(1.0, 0.0)).norm() < 1e-14);

        let (j1, j2) = eig2(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!((j1 - c(1.0, 0.0)).norm() < 1e-14 && (j2 - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn companion_matrix_eigenvalues() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let a = CMat::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(6.0, 0.0), c(-11.0, 0.0), c(6.0, 0.0)],
        ]);
        let eigs = sort_by_re(a.eigenvalues().unwrap());
        for (got, want) in eigs.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn cube_roots_of_unity() {
        // companion of x^3 - 1
        let a = CMat::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        let eigs = a.eigenvalues().unwrap();
        for l in &eigs {
            assert!((l.powu(3) - ONE).norm() < 1e-9, "{l}^3 != 1");
        }
        let sum: C = eigs.iter().sum();
        assert!(sum.norm() < 1e-9);
    }

    #[test]
    fn spectrum_matches_trace_and_det() {
        // fixed pseudo-random 4x4 (hand-picked entries, nonsymmetric)
        let a = CMat::from_rows(&[
            vec![c(0.3, 0.1), c(-1.2, 0.4), c(0.7, -0.2), c(0.05, 0.9)],
            vec![c(1.1, -0.3), c(0.2, 0.0), c(-0.4, 0.6), c(0.3, 0.3)],
            vec![c(-0.5, 0.2), c(0.8, -0.7), c(1.4, 0.1), c(-0.2, 0.0)],
            vec![c(0.6, 0.6), c(-0.1, 0.2), c(0.9, -0.5), c(-0.7, 0.4)],
        ]);
        let eigs = a.eigenvalues().unwrap();
        assert_eq!(eigs.len(), 4);
        let sum: C = eigs.iter().sum();
        assert!((sum - a.trace()).norm() < 1e-9, "sum {sum} vs trace {}", a.trace());
        let prod: C = eigs.iter().product();
        let det = a.det().unwrap();
        assert!((prod - det).norm() < 1e-9 * (1.0 + det.norm()), "prod {prod} vs det {det}");
    }

    #[test]
    fn hermitian_matrix_has_real_spectrum() {
        let a = CMat::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, 1.0), c(0.0, -2.0)],
            vec![c(1.0, -1.0), c(3.0, 0.0), c(0.5, 0.0)],
            vec![c(0.0, 2.0), c(0.5, 0.0), c(-1.0, 0.0)],
        ]);
        for l in a.eigenvalues().unwrap() {
            assert!(l.im.abs() < 1e-9, "non-real eigenvalue {l}");
        }
    }

    #[test]
    fn eigenvectors_satisfy_the_defining_equation() {
        let a = CMat::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 1.0), c(0.0, 0.0)],
            vec![c(0.0, -1.0), c(-0.5, 0.3), c(1.5, 0.0)],
            vec![c(0.7, 0.0), c(0.0, 0.4), c(2.0, -1.0)],
        ]);
        let (eigs, v) = a.eigen().unwrap();
        for (k, &lam) in eigs.iter().enumerate() {
            let x = v.col(k);
            let ax = a.mul_vec(&x);
            let res: f64 = ax
                .iter()
                .zip(&x)
                .map(|(p, q)| (p - lam * q).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-9, "eigenpair residual {res:.3e} for lambda {lam}");
        }
    }

    #[test]
    fn badly_scaled_matrix_still_resolves() {
        let a = CMat::from_rows(&[
            vec![c(1e6, 0.0), c(1e-4, 0.0), c(0.0, 0.0)],
            vec![c(1e4, 0.0), c(1.0, 0.0), c(1e-6, 0.0)],
            vec![c(0.0, 0.0), c(1e4, 0.0), c(1e-6, 0.0)],
        ]);
        let eigs = a.eigenvalues().unwrap();
        let sum: C = eigs.iter().sum();
        assert!(
            (sum - a.trace()).norm() < 1e-7 * a.trace().norm(),
            "trace mismatch after balancing"
        );
    }
}
