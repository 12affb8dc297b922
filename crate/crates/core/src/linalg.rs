//! Dense complex linear algebra sized for the matrices this crate actually
//! produces (at most ~100x100 after dilation).
//!
//! Hermitian eigenproblems are solved by cyclic Jacobi rotations with complex
//! Givens angles; singular values come out of the Hermitian dilation
//! `[[0, M], [M^dagger, 0]]`, whose spectrum is exactly the signed singular
//! values. The dilation route keeps *absolute* accuracy near machine epsilon
//! even for vanishing singular values, where the usual `M^dagger M` route
//! loses half the digits to the square root.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for treating a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Jacobi terminates once the off-diagonal Frobenius norm drops below this.
const OFF_DIAG_TOL: f64 = 1e-12;

/// Sweep budget for the Jacobi solver.
const MAX_SWEEPS: usize = 100;

/// Spectral values of a dilation/Gram matrix this slightly negative are
/// rounding artifacts and clamp to zero; anything lower is a solver failure.
const SINGULAR_CLAMP: f64 = -1e-12;

/// Dense complex matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Wraps row-major `entries` as a `rows x cols` matrix.
    ///
    /// Panics if the entry count does not match.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count {} does not match {}x{}",
            entries.len(),
            rows,
            cols
        );
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Complex64::new(0.0, 0.0); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    /// Diagonal matrix with real entries.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Sum of squared moduli of all entries. For a Hermitian matrix this is
    /// the purity numerator `tr(M^2)`.
    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn has_finite_entries(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Max elementwise deviation from Hermiticity, `max |M - M^dagger|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square(), "hermiticity of a non-square matrix");
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }
}

/// Kronecker product: `out[(i*rB + k), (j*cB + l)] = A[i,j] * B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.get(i, j);
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (values, _) = jacobi(m, false)?;
    Ok(values)
}

/// Eigenvalues (ascending) and matching eigenvectors (columns) of a
/// Hermitian matrix, so that `M = V diag(values) V^dagger`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let (values, vectors) = jacobi(m, true)?;
    Ok((values, vectors.expect("vectors requested")))
}

/// Singular values of a (possibly rectangular) matrix, descending.
///
/// Computed as the positive spectrum of the Hermitian dilation
/// `[[0, M], [M^dagger, 0]]`.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.has_finite_entries() {
        return Err(Error::NonFinite);
    }
    let (rows, cols) = (m.rows(), m.cols());
    let n = rows + cols;
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..rows {
        for j in 0..cols {
            let v = m.get(i, j);
            h.set(i, rows + j, v);
            h.set(rows + j, i, v.conj());
        }
    }
    let spectrum = hermitian_eigenvalues(&h)?;
    // Spectrum is {+sigma_i, -sigma_i} plus |rows-cols| zeros; the top
    // min(rows, cols) entries are the singular values.
    let count = rows.min(cols);
    let mut out = Vec::with_capacity(count);
    for &value in spectrum.iter().rev().take(count) {
        if value < SINGULAR_CLAMP {
            return Err(Error::NonConvergence(MAX_SWEEPS));
        }
        out.push(value.max(0.0));
    }
    Ok(out)
}

/// Trace norm `tr sqrt(M M^dagger)`, the sum of singular values.
///
/// For a Hermitian input this equals the sum of absolute eigenvalues and is
/// computed that way.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.is_square() && m.hermiticity_deviation() <= HERMITICITY_TOL {
        let values = hermitian_eigenvalues(m)?;
        return Ok(values.iter().map(|v| v.abs()).sum());
    }
    Ok(singular_values(m)?.iter().sum())
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation annihilates one off-diagonal pair using a complex Givens
/// rotation: the pivot's phase is absorbed so the remaining 2x2 problem is
/// real symmetric. Terminates when the off-diagonal Frobenius norm falls
/// below `OFF_DIAG_TOL`.
fn jacobi(m: &ComplexMatrix, with_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    if !m.is_square() {
        return Err(Error::BadDims {
            expected: "square matrix".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    if !m.has_finite_entries() {
        return Err(Error::NonFinite);
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NonHermitian { dev, tol: HERMITICITY_TOL });
    }

    let n = m.rows();
    if n == 0 {
        return Ok((Vec::new(), with_vectors.then(|| ComplexMatrix::zeros(0, 0))));
    }
    if n == 1 {
        return Ok((vec![m.get(0, 0).re], with_vectors.then(|| ComplexMatrix::identity(1))));
    }

    // Work on an exactly Hermitian copy; the input may deviate by rounding.
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        a.set(i, i, Complex64::new(m.get(i, i).re, 0.0));
        for j in (i + 1)..n {
            let v = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
            a.set(i, j, v);
            a.set(j, i, v.conj());
        }
    }
    let mut v = with_vectors.then(|| ComplexMatrix::identity(n));

    // Per-element budget: if every off-diagonal entry is below this, the
    // off-diagonal Frobenius norm is below OFF_DIAG_TOL.
    let pair_count = (n * (n - 1)) as f64;
    let skip_tol = OFF_DIAG_TOL / pair_count.sqrt();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < OFF_DIAG_TOL {
            return Ok(finish(a, v));
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag <= skip_tol {
                    continue;
                }
                let phase = apq / mag; // e^{i phi}
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;

                // Rotation angle for the phase-stripped real 2x2 block.
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // U differs from identity only in the (p, q) plane:
                //   U[p][p] = c          U[p][q] = s e^{i phi}
                //   U[q][p] = -s e^{-i phi}   U[q][q] = c
                let s_phase = phase * s; // s e^{i phi}

                // Columns: B = A U.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c - akq * s_phase.conj());
                    a.set(k, q, akp * s_phase + akq * c);
                }
                // Rows: A' = U^dagger B.
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c - aqk * s_phase);
                    a.set(q, k, apk * s_phase.conj() + aqk * c);
                }
                // The pivot pair is now zero analytically; make it exact and
                // keep the diagonal real.
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
                a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

                if let Some(vm) = v.as_mut() {
                    for k in 0..n {
                        let vkp = vm.get(k, p);
                        let vkq = vm.get(k, q);
                        vm.set(k, p, vkp * c - vkq * s_phase.conj());
                        vm.set(k, q, vkp * s_phase + vkq * c);
                    }
                }
            }
        }
    }

    if off_diagonal_norm(&a) < OFF_DIAG_TOL {
        return Ok(finish(a, v));
    }
    Err(Error::NonConvergence(MAX_SWEEPS))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            acc += 2.0 * a.get(i, j).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Sorts the converged diagonal ascending and permutes eigenvector columns
/// to match.
fn finish(a: ComplexMatrix, v: Option<ComplexMatrix>) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = v.map(|vm| {
        ComplexMatrix::from_fn(n, n, |i, j| vm.get(i, order[j]))
    });
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn random_hermitian(rng: &mut StdRng, n: usize) -> ComplexMatrix {
        let b = random_matrix(rng, n, n);
        let bt = b.adjoint();
        ComplexMatrix::from_fn(n, n, |i, j| (b.get(i, j) + bt.get(i, j)) * 0.5)
    }

    /// Unitary built as a product of random complex Givens rotations.
    fn random_unitary(rng: &mut StdRng, n: usize) -> ComplexMatrix {
        let mut u = ComplexMatrix::identity(n);
        for p in 0..n {
            for q in 0..n {
                if p == q {
                    continue;
                }
                let theta = rng.gen_range(0.0..std::f64::consts::PI);
                let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                let (cth, sth) = (theta.cos(), theta.sin());
                let e = Complex64::from_polar(1.0, phi);
                let mut g = ComplexMatrix::identity(n);
                g.set(p, p, c(cth, 0.0));
                g.set(p, q, e * sth);
                g.set(q, p, -e.conj() * sth);
                g.set(q, q, c(cth, 0.0));
                u = u.mul(&g);
            }
        }
        u
    }

    #[test]
    fn kron_identity_and_diagonal() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));

        let a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        let b = ComplexMatrix::from_real_diag(&[3.0, 4.0]);
        assert_eq!(kron(&a, &b), ComplexMatrix::from_real_diag(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn kron_trace_is_product_of_traces() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 2, 2);
            let b = random_matrix(&mut rng, 2, 2);
            let k = kron(&a, &b);
            // Oracle: expand the defining formula entry by entry.
            for i in 0..2 {
                for j in 0..2 {
                    for p in 0..2 {
                        for q in 0..2 {
                            let got = k.get(i * 2 + p, j * 2 + q);
                            let want = a.get(i, j) * b.get(p, q);
                            assert!((got - want).norm() < 1e-15);
                        }
                    }
                }
            }
            let d = k.trace() - a.trace() * b.trace();
            assert!(d.norm() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let m = ComplexMatrix::from_real_diag(&[3.0, -1.0, 2.0]);
        let vals = hermitian_eigenvalues(&m).unwrap();
        assert_eq!(vals.len(), 3);
        assert_close(vals[0], -1.0, 1e-14);
        assert_close(vals[1], 2.0, 1e-14);
        assert_close(vals[2], 3.0, 1e-14);
    }

    #[test]
    fn eigenvalues_of_pauli_x() {
        let m = ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let vals = hermitian_eigenvalues(&m).unwrap();
        assert_close(vals[0], -1.0, 1e-14);
        assert_close(vals[1], 1.0, 1e-14);
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let mut rng = StdRng::seed_from_u64(11);
        for &n in &[2usize, 5, 16, 40, 81] {
            let m = random_hermitian(&mut rng, n);
            let vals = hermitian_eigenvalues(&m).unwrap();
            let sum: f64 = vals.iter().sum();
            assert_close(sum, m.trace().re, 1e-10);
        }
    }

    #[test]
    fn eigen_reconstruction() {
        let mut rng = StdRng::seed_from_u64(13);
        for &n in &[2usize, 4, 9, 20] {
            let m = random_hermitian(&mut rng, n);
            let (vals, vecs) = hermitian_eigen(&m).unwrap();
            let rebuilt = vecs
                .mul(&ComplexMatrix::from_real_diag(&vals))
                .mul(&vecs.adjoint());
            for i in 0..n {
                for j in 0..n {
                    assert!(
                        (rebuilt.get(i, j) - m.get(i, j)).norm() < 1e-9,
                        "reconstruction off at ({i},{j}) for n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)]);
        match hermitian_eigenvalues(&m) {
            Err(Error::NonHermitian { .. }) => {}
            other => panic!("expected NonHermitian, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_is_rejected() {
        let m = ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NonFinite)));
        assert!(matches!(singular_values(&m), Err(Error::NonFinite)));
    }

    #[test]
    fn singular_values_of_diagonal() {
        let m = ComplexMatrix::from_real_diag(&[2.0, -3.0]);
        let sv = singular_values(&m).unwrap();
        assert_close(sv[0], 3.0, 1e-13);
        assert_close(sv[1], 2.0, 1e-13);
    }

    #[test]
    fn singular_values_of_zero_matrix() {
        let m = ComplexMatrix::zeros(3, 2);
        let sv = singular_values(&m).unwrap();
        assert_eq!(sv, vec![0.0, 0.0]);
    }

    #[test]
    fn singular_values_match_gram_route() {
        // Cross-check of two algebraic routes: dilation spectrum vs the
        // square roots of eigenvalues of M^dagger M.
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 3, 3);
            let sv = singular_values(&m).unwrap();
            let gram = m.adjoint().mul(&m);
            let mut gram_sv: Vec<f64> = hermitian_eigenvalues(&gram)
                .unwrap()
                .into_iter()
                .rev()
                .map(|v| v.max(0.0).sqrt())
                .collect();
            gram_sv.truncate(3);
            for (a, b) in sv.iter().zip(gram_sv.iter()) {
                assert_close(*a, *b, 1e-9);
            }
        }
    }

    #[test]
    fn squares_of_singular_values_sum_to_frobenius() {
        let mut rng = StdRng::seed_from_u64(19);
        for &(r, c_) in &[(3usize, 5usize), (5, 3), (4, 4)] {
            let m = random_matrix(&mut rng, r, c_);
            let sv = singular_values(&m).unwrap();
            let sum: f64 = sv.iter().map(|s| s * s).sum();
            assert_close(sum, m.frobenius_norm_sqr(), 1e-10);
            assert!(sv.windows(2).all(|w| w[0] >= w[1]), "descending order");
            assert!(sv.iter().all(|&s| s >= 0.0));
        }
    }

    #[test]
    fn singular_values_of_adjoint_match() {
        let mut rng = StdRng::seed_from_u64(23);
        let m = random_matrix(&mut rng, 4, 6);
        let a = singular_values(&m).unwrap();
        let b = singular_values(&m.adjoint()).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_close(*x, *y, 1e-11);
        }
    }

    #[test]
    fn trace_norm_examples() {
        let m = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert_close(trace_norm(&m).unwrap(), 2.0, 1e-13);

        // Any density matrix has trace norm 1; take a random mixture.
        let mut rng = StdRng::seed_from_u64(29);
        let u = random_unitary(&mut rng, 4);
        let probs = [0.4, 0.3, 0.2, 0.1];
        let rho = u
            .mul(&ComplexMatrix::from_real_diag(&probs))
            .mul(&u.adjoint());
        assert_close(trace_norm(&rho).unwrap(), 1.0, 1e-12);
    }

    #[test]
    fn trace_norm_is_unitarily_invariant() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..5 {
            let m = random_matrix(&mut rng, 5, 5);
            let u = random_unitary(&mut rng, 5);
            let w = random_unitary(&mut rng, 5);
            let rotated = u.mul(&m).mul(&w);
            let a = trace_norm(&m).unwrap();
            let b = trace_norm(&rotated).unwrap();
            assert_close(a, b, 1e-9);
        }
    }
}
