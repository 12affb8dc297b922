//! Exact four-party pure state of two dissipative cavity modes and their
//! reservoirs, plus the reductions the entanglement measures consume.
//!
//! The tensor order is fixed to `c1 x r1 x c2 x r2` so each cavity sits next
//! to its own reservoir and the `(c1 r1) | (c2 r2)` split is contiguous. Each
//! party carries `d + 1` levels, where `d` is the Fock cutoff of the initial
//! cavity state.

use num_complex::Complex64;

use crate::amplitudes::damping_amplitude;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HERMITICITY_TOL};

/// Highest supported Fock cutoff; keeps every matrix inside the dense
/// kernel's comfort zone.
pub const MAX_CUTOFF: usize = 6;

/// Unit-norm tolerance for input amplitude vectors.
pub const NORM_TOL: f64 = 1e-9;

/// The four parties, in canonical tensor order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Party {
    C1,
    R1,
    C2,
    R2,
}

impl Party {
    pub const ALL: [Party; 4] = [Party::C1, Party::R1, Party::C2, Party::R2];

    pub fn index(self) -> usize {
        match self {
            Party::C1 => 0,
            Party::R1 => 1,
            Party::C2 => 2,
            Party::R2 => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Party::C1 => "c1",
            Party::R1 => "r1",
            Party::C2 => "c2",
            Party::R2 => "r2",
        }
    }
}

/// Side A of a bipartition of the four parties (the complement is side B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartitionSpec {
    mask: u8,
}

impl PartitionSpec {
    /// Builds a partition from the parties on side A. Must be a nonempty
    /// proper subset.
    pub fn new(side_a: &[Party]) -> Result<Self> {
        let mut mask = 0u8;
        for p in side_a {
            mask |= 1 << p.index();
        }
        if mask == 0 || mask == 0b1111 {
            return Err(Error::Domain(
                "partition side A must be a nonempty proper subset of {c1, r1, c2, r2}".into(),
            ));
        }
        Ok(Self { mask })
    }

    pub fn single(p: Party) -> Self {
        Self { mask: 1 << p.index() }
    }

    pub fn cavities() -> Self {
        Self { mask: 0b0101 }
    }

    pub fn reservoirs() -> Self {
        Self { mask: 0b1010 }
    }

    pub fn pair(a: Party, b: Party) -> Self {
        assert!(a != b, "a pair needs two distinct parties");
        Self { mask: (1 << a.index()) | (1 << b.index()) }
    }

    pub fn complement(self) -> Self {
        Self { mask: !self.mask & 0b1111 }
    }

    pub fn contains(self, p: Party) -> bool {
        self.mask & (1 << p.index()) != 0
    }

    /// Parties on side A, in canonical order.
    pub fn side_a(self) -> Vec<Party> {
        Party::ALL.iter().copied().filter(|p| self.contains(*p)).collect()
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    /// Compact label like `c1c2`.
    pub fn label(self) -> String {
        self.side_a().iter().map(|p| p.label()).collect()
    }
}

/// Pure state of the four parties at a fixed time.
#[derive(Debug, Clone)]
pub struct FourPartyState {
    cutoff: usize,
    levels: usize,
    amplitudes: Vec<Complex64>,
    t: f64,
    kappa: f64,
}

/// Builds the evolved four-party state for an initial two-cavity state
/// `sum_n alpha_n |n>_{c1} |n>_{c2}` with both reservoirs in vacuum.
///
/// Each `|n>|n>` component evolves into the product of two identical
/// single-mode damping superpositions, so the amplitude on the basis state
/// `|n-j, j, n-k, k>` is `alpha_n b_{n,j}(t) b_{n,k}(t)`.
///
/// The input must be unit-norm already; no silent rescaling is performed.
pub fn build_state(alphas: &[f64], t: f64, kappa: f64) -> Result<FourPartyState> {
    if alphas.len() < 2 {
        return Err(Error::Domain("need at least two amplitudes (cutoff d >= 1)".into()));
    }
    let cutoff = alphas.len() - 1;
    if cutoff > MAX_CUTOFF {
        return Err(Error::Domain(format!(
            "Fock cutoff {cutoff} exceeds the supported maximum {MAX_CUTOFF}"
        )));
    }
    if alphas.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = alphas.iter().map(|a| a * a).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm, tol: NORM_TOL });
    }

    let levels = cutoff + 1;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); levels.pow(4)];
    for (n, &alpha) in alphas.iter().enumerate() {
        if alpha == 0.0 {
            continue;
        }
        let n = n as u32;
        let b: Vec<f64> = (0..=n)
            .map(|k| damping_amplitude(n, k, t, kappa))
            .collect::<Result<_>>()?;
        for j in 0..=n as usize {
            for k in 0..=n as usize {
                let idx = flat_index(
                    levels,
                    [n as usize - j, j, n as usize - k, k],
                );
                amplitudes[idx] = Complex64::new(alpha * b[j] * b[k], 0.0);
            }
        }
    }

    Ok(FourPartyState { cutoff, levels, amplitudes, t, kappa })
}

#[inline]
fn flat_index(levels: usize, idx: [usize; 4]) -> usize {
    ((idx[0] * levels + idx[1]) * levels + idx[2]) * levels + idx[3]
}

impl FourPartyState {
    /// Fock cutoff `d` (each party has `d + 1` levels).
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Levels per party, `d + 1`.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, idx: [usize; 4]) -> Complex64 {
        self.amplitudes[flat_index(self.levels, idx)]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies a permutation of the Fock labels of a single party. Local
    /// relabeling leaves every entanglement measure unchanged; used by the
    /// invariance tests.
    pub fn relabel_party(&self, party: Party, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.levels);
        let mut out = self.clone();
        for (flat, amp) in self.amplitudes.iter().enumerate() {
            let mut idx = unflatten(self.levels, flat);
            idx[party.index()] = perm[idx[party.index()]];
            out.amplitudes[flat_index(self.levels, idx)] = *amp;
        }
        out
    }
}

fn unflatten(levels: usize, mut flat: usize) -> [usize; 4] {
    let mut idx = [0usize; 4];
    for slot in (0..4).rev() {
        idx[slot] = flat % levels;
        flat /= levels;
    }
    idx
}

/// Density matrix with subsystem structure attached.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix as a density operator over subsystems of the given
    /// dimensions, checking Hermiticity and unit trace.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let total: usize = dims.iter().product();
        if matrix.rows() != total || matrix.cols() != total {
            return Err(Error::BadDims {
                expected: format!("{total}x{total}"),
                got: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        let dev = matrix.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::NonHermitian { dev, tol: HERMITICITY_TOL });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > HERMITICITY_TOL || trace.im.abs() > HERMITICITY_TOL {
            return Err(Error::Domain(format!("density matrix trace is {trace}, expected 1")));
        }
        Ok(Self { dims, matrix })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn total_dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Purity `tr(rho^2)`, computed from the Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.matrix.frobenius_norm_sqr()
    }
}

/// Partial trace of the pure state over the complement of `keep`.
///
/// The subsystem order of the result is the canonical party order filtered
/// by `keep`.
pub fn reduced_density(state: &FourPartyState, keep: PartitionSpec) -> DensityMatrix {
    let levels = state.levels;
    let kept: Vec<usize> = keep.side_a().iter().map(|p| p.index()).collect();
    let traced: Vec<usize> = keep
        .complement()
        .side_a()
        .iter()
        .map(|p| p.index())
        .collect();

    let kept_dim = levels.pow(kept.len() as u32);
    let traced_dim = levels.pow(traced.len() as u32);
    let mut rho = ComplexMatrix::zeros(kept_dim, kept_dim);

    let mut row_idx = [0usize; 4];
    let mut col_idx = [0usize; 4];
    for row in 0..kept_dim {
        decode(levels, row, &kept, &mut row_idx);
        for col in 0..kept_dim {
            decode(levels, col, &kept, &mut col_idx);
            let mut acc = Complex64::new(0.0, 0.0);
            for tr in 0..traced_dim {
                decode(levels, tr, &traced, &mut row_idx);
                decode(levels, tr, &traced, &mut col_idx);
                let a = state.amplitudes[flat_index(levels, row_idx)];
                let b = state.amplitudes[flat_index(levels, col_idx)];
                acc += a * b.conj();
            }
            rho.set(row, col, acc);
        }
    }

    let dims = vec![levels; kept.len()];
    DensityMatrix::new(dims, rho).expect("partial trace of a unit state is a density matrix")
}

/// Writes the digits of `value` (base `levels`) into the listed slots of
/// `idx`, most significant digit first.
#[inline]
fn decode(levels: usize, mut value: usize, slots: &[usize], idx: &mut [usize; 4]) {
    for &slot in slots.iter().rev() {
        idx[slot] = value % levels;
        value /= levels;
    }
}

/// Partial transpose of a bipartite density matrix on one side.
///
/// For `side = 0`: `out[(i,k),(j,l)] = rho[(j,k),(i,l)]`. Hermiticity is
/// preserved.
pub fn partial_transpose(rho: &DensityMatrix, transpose_side: usize) -> Result<ComplexMatrix> {
    if rho.dims().len() != 2 {
        return Err(Error::BadPartition(rho.dims().len()));
    }
    if transpose_side > 1 {
        return Err(Error::Domain(format!("transpose side must be 0 or 1, got {transpose_side}")));
    }
    let (da, db) = (rho.dims()[0], rho.dims()[1]);
    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(da * db, da * db, |row, col| {
        let (i, k) = (row / db, row % db);
        let (j, l) = (col / db, col % db);
        if transpose_side == 0 {
            m.get(j * db + k, i * db + l)
        } else {
            m.get(i * db + l, j * db + k)
        }
    });
    Ok(out)
}

/// Realignment of a bipartite density matrix: the `(dA^2) x (dB^2)` matrix
/// with `out[(i,j),(k,l)] = rho[(i,k),(j,l)]`. A trace norm above 1
/// witnesses entanglement.
pub fn realign(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    if rho.dims().len() != 2 {
        return Err(Error::BadPartition(rho.dims().len()));
    }
    let (da, db) = (rho.dims()[0], rho.dims()[1]);
    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(da * da, db * db, |row, col| {
        let (i, j) = (row / da, row % da);
        let (k, l) = (col / db, col % db);
        m.get(i * db + k, j * db + l)
    });
    Ok(out)
}
