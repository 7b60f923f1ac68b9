//! Dense complex linear algebra and the small convex-optimization kernels
//! shared by the rest of the toolkit. Everything here is deterministic given
//! explicit seeds and sized for desk-scale problems (matrices up to 128x128,
//! LPs with at most 500 inequalities over at most 256 simplex weights).

mod simplex;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub(crate) use simplex::{solve_standard, LpStatus, StandardLp};

pub const OPNORM_ITER_CAP: usize = 10_000;
pub const LP_ITER_CAP: usize = 100_000;
pub const LP_SLACK_TOL: f64 = 1e-8;
const GRAM_RIDGE: f64 = 1e-12;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    #[serde(with = "crate::cserde::cvec")]
    entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        Ok(CMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidInput("matrix needs at least one row".into()));
        }
        let c = rows[0].len();
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            entries.extend_from_slice(row);
        }
        CMatrix::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// y = A x
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.cols);
        let mut y = vec![Complex64::new(0.0, 0.0); self.rows];
        for r in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..self.cols {
                acc += self.entries[r * self.cols + c] * x[c];
            }
            y[r] = acc;
        }
        y
    }

    /// y = A^H x
    pub fn adjoint_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.rows);
        let mut y = vec![Complex64::new(0.0, 0.0); self.cols];
        for r in 0..self.rows {
            let xr = x[r];
            for c in 0..self.cols {
                y[c] += self.entries[r * self.cols + c].conj() * xr;
            }
        }
        y
    }

    pub fn opnorm(&self) -> Result<f64> {
        opnorm(self)
    }
}

pub(crate) fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value by power iteration on A^H A. Two deterministic
/// seeded starts guard against an unlucky initial vector.
pub fn opnorm(a: &CMatrix) -> Result<f64> {
    if a.entries.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
        return Err(Error::InvalidInput("opnorm: non-finite entries".into()));
    }
    let mut best = 0.0f64;
    for seed in [0x5eed_0001u64, 0x5eed_0b0bu64] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x: Vec<Complex64> = (0..a.cols).map(|_| gaussian_c(&mut rng)).collect();
        let nx = vec_norm(&x);
        if nx == 0.0 {
            continue;
        }
        x.iter_mut().for_each(|v| *v /= nx);
        let mut sigma2_prev = -1.0f64;
        let mut settled = 0;
        for _ in 0..OPNORM_ITER_CAP {
            let ax = a.matvec(&x);
            let sigma2 = ax.iter().map(|v| v.norm_sqr()).sum::<f64>();
            if sigma2 == 0.0 {
                break;
            }
            let mut y = a.adjoint_vec(&ax);
            let ny = vec_norm(&y);
            if ny == 0.0 {
                break;
            }
            y.iter_mut().for_each(|v| *v /= ny);
            x = y;
            if (sigma2 - sigma2_prev).abs() <= 1e-13 * sigma2.max(1e-300) {
                settled += 1;
                if settled >= 4 {
                    sigma2_prev = sigma2;
                    break;
                }
            } else {
                settled = 0;
            }
            sigma2_prev = sigma2;
        }
        if sigma2_prev > best {
            best = sigma2_prev;
        }
    }
    Ok(best.max(0.0).sqrt())
}

/// Solves the `k x k` complex system `M y = b` by LU with partial pivoting.
pub(crate) fn solve_complex(m: &mut Vec<Vec<Complex64>>, b: &mut Vec<Complex64>) -> Result<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        let mut best = m[col][col].norm();
        for r in col + 1..n {
            if m[r][col].norm() > best {
                best = m[r][col].norm();
                piv = r;
            }
        }
        if best == 0.0 {
            return Err(Error::InternalInconsistency("singular Gram system".into()));
        }
        m.swap(col, piv);
        b.swap(col, piv);
        let d = m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / d;
            if f.norm_sqr() != 0.0 {
                for c in col..n {
                    let v = m[col][c];
                    m[r][c] -= f * v;
                }
                let bc = b[col];
                b[r] -= f * bc;
            }
        }
    }
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= m[r][c] * y[c];
        }
        y[r] = acc / m[r][r];
    }
    Ok(y)
}

/// Minimal Euclidean-norm solution of the linear constraints `row_i . x = rhs_i`
/// (plain bilinear products). Returns the solution and the max-abs residual.
pub fn least_norm_solve(
    rows: &[Vec<Complex64>],
    rhs: &[Complex64],
    dim: usize,
) -> Result<(Vec<Complex64>, f64)> {
    if rows.len() != rhs.len() {
        return Err(Error::DimensionMismatch(
            "constraint rows and right-hand sides differ in count".into(),
        ));
    }
    if rows.is_empty() {
        return Ok((vec![Complex64::new(0.0, 0.0); dim], 0.0));
    }
    for row in rows {
        if row.len() != dim {
            return Err(Error::DimensionMismatch("constraint row length mismatch".into()));
        }
        if row.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite constraint row".into()));
        }
    }
    let k = rows.len();
    // Minimal-norm solutions live in the span of the conjugated rows:
    // x = sum_i y_i conj(row_i), with (A A^H + ridge) y = rhs.
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for i in 0..k {
        for j in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..dim {
                acc += rows[i][l] * rows[j][l].conj();
            }
            gram[i][j] = acc;
        }
        gram[i][i] += Complex64::new(GRAM_RIDGE, 0.0);
    }
    let mut b = rhs.to_vec();
    let y = solve_complex(&mut gram, &mut b)?;
    let mut x = vec![Complex64::new(0.0, 0.0); dim];
    for i in 0..k {
        for l in 0..dim {
            x[l] += y[i] * rows[i][l].conj();
        }
    }
    let mut residual = 0.0f64;
    let mut bmax = 0.0f64;
    for i in 0..k {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..dim {
            acc += rows[i][l] * x[l];
        }
        residual = residual.max((acc - rhs[i]).norm());
        bmax = bmax.max(rhs[i].norm());
    }
    if residual > 1e-9 * (1.0 + bmax) {
        return Err(Error::Infeasible { residual });
    }
    Ok((x, residual))
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexWeights {
    weights: Vec<f64>,
}

impl SimplexWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidInput("weights must be finite and nonnegative".into()));
        }
        let s: f64 = weights.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("weights sum to {s}, expected 1")));
        }
        Ok(SimplexWeights { weights })
    }

    pub fn uniform(n: usize) -> Self {
        SimplexWeights {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Affine inequality `coeffs . w >= rhs` over simplex weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineIneq {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl AffineIneq {
    pub fn slack(&self, w: &[f64]) -> f64 {
        self.coeffs.iter().zip(w).map(|(c, x)| c * x).sum::<f64>() - self.rhs
    }
}

fn check_lp_input(ineqs: &[AffineIneq], n_weights: usize) -> Result<()> {
    if n_weights == 0 || n_weights > 256 {
        return Err(Error::InvalidInput(format!(
            "weight count {n_weights} outside 1..=256"
        )));
    }
    if ineqs.len() > 500 {
        return Err(Error::InvalidInput(format!(
            "{} inequalities exceed the cap of 500",
            ineqs.len()
        )));
    }
    for q in ineqs {
        if q.coeffs.len() != n_weights {
            return Err(Error::DimensionMismatch(format!(
                "inequality has {} coefficients, expected {n_weights}",
                q.coeffs.len()
            )));
        }
        if !q.rhs.is_finite() || q.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite inequality data".into()));
        }
    }
    Ok(())
}

/// Builds the min-max violation LP over the simplex and returns (w*, t*).
/// Violations are row-normalized; `shift` is subtracted from every rhs first.
fn minmax_over_simplex(ineqs: &[AffineIneq], n: usize, shift: f64) -> (Vec<f64>, f64, LpStatus) {
    let k = ineqs.len();
    // Columns: w_0..w_{n-1}, t+, t-, s_0..s_{k-1}
    let ncols = n + 2 + k;
    let mut a = Vec::with_capacity(k + 1);
    let mut b = Vec::with_capacity(k + 1);
    let mut row = vec![0.0; ncols];
    row[..n].iter_mut().for_each(|v| *v = 1.0);
    a.push(row);
    b.push(1.0);
    for (i, q) in ineqs.iter().enumerate() {
        let scale = q
            .coeffs
            .iter()
            .fold(q.rhs.abs(), |m, c| m.max(c.abs()))
            .max(1e-300);
        // a.w + t - s = rhs - shift (normalized), i.e. violation_i <= t.
        let mut row = vec![0.0; ncols];
        for (j, &c) in q.coeffs.iter().enumerate() {
            row[j] = c / scale;
        }
        row[n] = 1.0;
        row[n + 1] = -1.0;
        row[n + 2 + i] = -1.0;
        a.push(row);
        b.push((q.rhs - shift) / scale);
    }
    let mut c = vec![0.0; ncols];
    c[n] = 1.0;
    c[n + 1] = -1.0;
    let sol = solve_standard(&StandardLp { a, b, c }, LP_ITER_CAP);
    let w = sol.x[..n].to_vec();
    let t = sol.x[n] - sol.x[n + 1];
    (w, t, sol.status)
}

/// Feasibility over the probability simplex: a point with every slack at
/// least `-1e-8`, or `None` when the exchange method certifies that no such
/// point exists.
pub fn lp_feasible(ineqs: &[AffineIneq], n_weights: usize) -> Result<Option<SimplexWeights>> {
    check_lp_input(ineqs, n_weights)?;
    if ineqs.is_empty() {
        return Ok(Some(SimplexWeights::uniform(n_weights)));
    }
    let (w, t, status) = minmax_over_simplex(ineqs, n_weights, LP_SLACK_TOL);
    if status == LpStatus::IterLimit {
        return Err(Error::BudgetExceeded { best: t });
    }
    let w = clean_simplex(&w, n_weights);
    let worst = ineqs
        .iter()
        .map(|q| q.slack(&w))
        .fold(f64::INFINITY, f64::min);
    if worst >= -LP_SLACK_TOL * (1.0 + 1e-6) {
        return Ok(Some(SimplexWeights { weights: w }));
    }
    // t > 0 for the shifted system certifies that no simplex point keeps all
    // slacks above -1e-8; the point found is the least-violating one.
    Ok(None)
}

/// Maximizes `objective . w` over the simplex subject to `ineqs`.
/// Returns `None` when the constraints are infeasible.
pub(crate) fn lp_max_linear(
    objective: &[f64],
    ineqs: &[AffineIneq],
    n_weights: usize,
) -> Result<Option<(Vec<f64>, f64)>> {
    check_lp_input(ineqs, n_weights)?;
    if objective.len() != n_weights {
        return Err(Error::DimensionMismatch("objective length mismatch".into()));
    }
    let k = ineqs.len();
    let ncols = n_weights + k;
    let mut a = Vec::with_capacity(k + 1);
    let mut b = Vec::with_capacity(k + 1);
    let mut row = vec![0.0; ncols];
    row[..n_weights].iter_mut().for_each(|v| *v = 1.0);
    a.push(row);
    b.push(1.0);
    for (i, q) in ineqs.iter().enumerate() {
        let scale = q
            .coeffs
            .iter()
            .fold(q.rhs.abs(), |m, c| m.max(c.abs()))
            .max(1e-300);
        let mut row = vec![0.0; ncols];
        for (j, &c) in q.coeffs.iter().enumerate() {
            row[j] = c / scale;
        }
        row[n_weights + i] = -1.0;
        a.push(row);
        b.push(q.rhs / scale);
    }
    let mut c = vec![0.0; ncols];
    for j in 0..n_weights {
        c[j] = -objective[j];
    }
    let sol = solve_standard(&StandardLp { a, b, c }, LP_ITER_CAP);
    match sol.status {
        LpStatus::Infeasible => Ok(None),
        LpStatus::IterLimit => Err(Error::BudgetExceeded { best: -sol.objective }),
        LpStatus::Unbounded => Err(Error::InternalInconsistency(
            "bounded simplex LP reported unbounded".into(),
        )),
        LpStatus::Optimal => {
            let w = clean_simplex(&sol.x[..n_weights], n_weights);
            let value = objective.iter().zip(&w).map(|(o, x)| o * x).sum();
            Ok(Some((w, value)))
        }
    }
}

fn clean_simplex(w: &[f64], n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = w.iter().take(n).map(|x| x.max(0.0)).collect();
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    } else {
        v = vec![1.0 / n as f64; n];
    }
    v
}

pub(crate) fn gaussian_c<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed `n x n` unitary: complex Ginibre matrix orthonormalized
/// column by column (positive-diagonal QR), with a reorthogonalization pass.
pub fn haar_unitary(n: usize, seed: u64) -> Result<CMatrix> {
    if n == 0 || n > 64 {
        return Err(Error::InvalidInput(format!("unitary size {n} outside 1..=64")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| gaussian_c(&mut rng)).collect())
        .collect();
    for j in 0..n {
        for _pass in 0..2 {
            for i in 0..j {
                let proj: Complex64 = (0..n).map(|l| cols[j][l] * cols[i][l].conj()).sum();
                for l in 0..n {
                    let v = cols[i][l];
                    cols[j][l] -= proj * v;
                }
            }
        }
        let norm = vec_norm(&cols[j]);
        if norm < 1e-14 {
            return Err(Error::InternalInconsistency(
                "Ginibre sample numerically singular".into(),
            ));
        }
        cols[j].iter_mut().for_each(|v| *v /= norm);
    }
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            m.set(i, j, cols[j][i]);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn opnorm_scalar_is_modulus() {
        let m = CMatrix::new(1, 1, vec![c(3.0, 4.0)]).unwrap();
        assert!((opnorm(&m).unwrap() - 5.0).abs() < 1e-10);
    }

    #[test]
    fn opnorm_identity() {
        for n in [1usize, 3, 8] {
            let m = CMatrix::identity(n);
            assert!((opnorm(&m).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn opnorm_shear_matches_gram_eigenvalues() {
        // Independent oracle: eigenvalues of A^T A for A = [[1,1],[0,1]] via the
        // quadratic formula; the top singular value is sqrt((3+sqrt 5)/2).
        let m = CMatrix::new(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let (tr, det) = (3.0f64, 1.0f64);
        let disc = (tr * tr - 4.0 * det).sqrt();
        let expected = ((tr + disc) / 2.0).sqrt();
        assert!((opnorm(&m).unwrap() - expected).abs() < 1e-10);
        // The oracle value is the golden ratio.
        assert!((expected - (1.0 + 5.0f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn opnorm_rejects_non_finite() {
        let m = CMatrix {
            rows: 1,
            cols: 1,
            entries: vec![c(f64::NAN, 0.0)],
        };
        assert!(opnorm(&m).is_err());
    }

    #[test]
    fn least_norm_single_constraint() {
        let rows = vec![vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]];
        let rhs = vec![c(2.0, 0.0)];
        let (x, res) = least_norm_solve(&rows, &rhs, 3).unwrap();
        assert!((x[0] - c(2.0, 0.0)).norm() < 1e-9);
        assert!(x[1].norm() < 1e-12 && x[2].norm() < 1e-12);
        assert!(res < 1e-10);
    }

    #[test]
    fn least_norm_empty_is_zero() {
        let (x, res) = least_norm_solve(&[], &[], 4).unwrap();
        assert!(x.iter().all(|v| v.norm() == 0.0));
        assert_eq!(res, 0.0);
    }

    #[test]
    fn least_norm_matches_projection_formula() {
        // Dense oracle: x = A^H (A A^H)^{-1} b for two random-ish consistent
        // constraints in dimension 4, solved here with an independent 2x2 inverse.
        let a1 = vec![c(1.0, 0.5), c(0.0, -1.0), c(2.0, 0.0), c(0.3, 0.3)];
        let a2 = vec![c(0.0, 1.0), c(1.0, 0.0), c(-1.0, 0.2), c(0.0, 0.7)];
        let b = vec![c(1.0, -1.0), c(0.5, 0.25)];
        let g11: Complex64 = a1.iter().map(|v| v * v.conj()).sum();
        let g12: Complex64 = a1.iter().zip(&a2).map(|(u, v)| u * v.conj()).sum();
        let g21: Complex64 = a2.iter().zip(&a1).map(|(u, v)| u * v.conj()).sum();
        let g22: Complex64 = a2.iter().map(|v| v * v.conj()).sum();
        let det = g11 * g22 - g12 * g21;
        let y1 = (g22 * b[0] - g12 * b[1]) / det;
        let y2 = (-g21 * b[0] + g11 * b[1]) / det;
        let expect: Vec<Complex64> = (0..4).map(|l| y1 * a1[l].conj() + y2 * a2[l].conj()).collect();

        let (x, _) = least_norm_solve(&[a1.clone(), a2.clone()], &b, 4).unwrap();
        for l in 0..4 {
            assert!((x[l] - expect[l]).norm() < 1e-8, "component {l}");
        }
    }

    #[test]
    fn least_norm_inconsistent_reports_infeasible() {
        let rows = vec![vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]];
        let rhs = vec![c(1.0, 0.0), c(2.0, 0.0)];
        match least_norm_solve(&rows, &rhs, 1) {
            Err(Error::Infeasible { residual }) => assert!(residual > 0.1),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn lp_feasible_single_bound() {
        let ineqs = vec![AffineIneq {
            coeffs: vec![1.0, 0.0],
            rhs: 0.5,
        }];
        let w = lp_feasible(&ineqs, 2).unwrap().expect("feasible");
        assert!(w.as_slice()[0] >= 0.5 - 1e-8);
    }

    #[test]
    fn lp_feasible_contradictory_pair() {
        let ineqs = vec![
            AffineIneq {
                coeffs: vec![1.0, 0.0],
                rhs: 0.9,
            },
            AffineIneq {
                coeffs: vec![0.0, 1.0],
                rhs: 0.9,
            },
        ];
        assert!(lp_feasible(&ineqs, 2).unwrap().is_none());
    }

    #[test]
    fn lp_feasible_dimension_mismatch() {
        let ineqs = vec![AffineIneq {
            coeffs: vec![1.0],
            rhs: 0.0,
        }];
        assert!(lp_feasible(&ineqs, 2).is_err());
    }

    /// Exhaustive grid over the simplex at step 1/64 (3 weights).
    fn grid_feasible(ineqs: &[AffineIneq]) -> bool {
        let n = 64i64;
        for i in 0..=n {
            for j in 0..=(n - i) {
                let k = n - i - j;
                let w = [i as f64 / n as f64, j as f64 / n as f64, k as f64 / n as f64];
                if ineqs.iter().all(|q| q.slack(&w) >= -1e-8) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn lp_feasible_agrees_with_grid_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for case in 0..20 {
            // Anchor at a grid point so the oracle can certify feasibility.
            let i = rng.gen_range(0..=64i64);
            let j = rng.gen_range(0..=(64 - i));
            let anchor = [i as f64 / 64.0, j as f64 / 64.0, (64 - i - j) as f64 / 64.0];
            let feasible_target = case % 2 == 0;
            let mut ineqs = Vec::new();
            if feasible_target {
                for _ in 0..20 {
                    let coeffs: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
                    let at: f64 = coeffs.iter().zip(&anchor).map(|(c, w)| c * w).sum();
                    ineqs.push(AffineIneq {
                        coeffs,
                        rhs: at - rng.gen_range(0.01..0.5),
                    });
                }
            } else {
                let lo = rng.gen_range(0.55..0.8);
                ineqs.push(AffineIneq {
                    coeffs: vec![1.0, 0.0, 0.0],
                    rhs: lo,
                });
                ineqs.push(AffineIneq {
                    coeffs: vec![0.0, 1.0, 0.0],
                    rhs: lo,
                });
            }
            let got = lp_feasible(&ineqs, 3).unwrap();
            assert_eq!(
                got.is_some(),
                grid_feasible(&ineqs),
                "case {case} disagrees with the grid oracle"
            );
            if let Some(w) = got {
                assert!(ineqs.iter().all(|q| q.slack(w.as_slice()) >= -1e-8));
            }
        }
    }

    #[test]
    fn haar_unimodular_at_n1() {
        let u = haar_unitary(1, 7).unwrap();
        assert!((u.get(0, 0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_is_unitary() {
        let u = haar_unitary(4, 99).unwrap();
        let mut max_dev = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in 0..4 {
                    acc += u.get(l, i).conj() * u.get(l, j);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                max_dev = max_dev.max((acc - Complex64::new(target, 0.0)).norm());
            }
        }
        assert!(max_dev < 1e-10, "U^H U deviates by {max_dev}");
    }

    #[test]
    fn haar_column_statistics() {
        // Monte-Carlo oracle: first column is uniform on the unit sphere of C^2,
        // so E|U_11|^2 = 1/2.
        let n = 1000;
        let mean: f64 = (0..n)
            .map(|s| haar_unitary(2, 1000 + s as u64).unwrap().get(0, 0).norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn haar_size_cap() {
        assert!(haar_unitary(65, 0).is_err());
        assert!(haar_unitary(0, 0).is_err());
    }
}
