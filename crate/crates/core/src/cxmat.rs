//! Minimal dense complex linear algebra for small multi-qubit objects:
//! tensor products, partial traces, Hilbert–Schmidt norms, and the two
//! eigensolvers the rest of the crate needs (analytic 2×2 Hermitian, cyclic
//! Jacobi for small real symmetric matrices).
//!
//! Dimensions are capped at 8 (three qubits); anything larger is rejected.

use num_complex::Complex64 as C64;

use crate::{Error, Result, EIG_TOL, HERM_TOL};

/// Dimensions a [`ComplexMatrix`] or [`StateVector`] may have.
const ALLOWED_DIMS: [usize; 3] = [2, 4, 8];

fn check_dim(dim: usize) -> Result<()> {
    if ALLOWED_DIMS.contains(&dim) {
        Ok(())
    } else {
        Err(Error::BadDim(dim))
    }
}

/// Dense square complex matrix of dimension 2, 4 or 8, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, entries: vec![C64::new(0.0, 0.0); dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        Ok(m)
    }

    /// Build from a row-major slice of `dim * dim` entries.
    pub fn from_slice(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch { expected: dim * dim, got: entries.len() });
        }
        Ok(Self { dim, entries: entries.to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn dagger(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: other.dim });
        }
        let n = self.dim;
        let mut out = Self::zeros(n)?;
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: other.dim });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: other.dim });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn scale(&self, f: C64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|a| a * f).collect() }
    }

    pub fn scale_re(&self, f: f64) -> Self {
        self.scale(C64::new(f, 0.0))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in i..self.dim {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest eigenvalue of a Hermitian matrix, via the real symmetric
    /// embedding `[[Re A, -Im A], [Im A, Re A]]` (its spectrum is that of A,
    /// doubled) and cyclic Jacobi.
    pub fn min_eigenvalue_herm(&self) -> Result<f64> {
        if !self.is_hermitian(HERM_TOL) {
            return Err(Error::NotHermitian(HERM_TOL));
        }
        let n = self.dim;
        let mut big = vec![vec![0.0; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                big[i][j] = z.re;
                big[i + n][j + n] = z.re;
                big[i][j + n] = -z.im;
                big[i + n][j] = z.im;
            }
        }
        let eigs = jacobi_eigenvalues(&mut big);
        Ok(eigs.into_iter().fold(f64::INFINITY, f64::min))
    }

    /// Check the density-matrix invariants: Hermitian, unit trace, positive
    /// semidefinite (all within tolerance).
    pub fn check_density(&self, tol: f64) -> Result<()> {
        if !self.is_hermitian(tol) {
            return Err(Error::NotDensity(format!("not Hermitian within {tol:e}")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::NotDensity(format!("trace {tr} differs from 1")));
        }
        let min = self.min_eigenvalue_herm()?;
        if min < -100.0 * tol {
            return Err(Error::NotDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// Complex amplitude vector of dimension 2, 4 or 8.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dim: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn from_slice(amplitudes: &[C64]) -> Result<Self> {
        check_dim(amplitudes.len())?;
        Ok(Self { dim: amplitudes.len(), amplitudes: amplitudes.to_vec() })
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[k] = C64::new(1.0, 0.0);
        Ok(Self { dim, amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize) -> C64 {
        self.amplitudes[i]
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩` with the left argument conjugated.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: other.dim });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&self, f: C64) -> Self {
        Self { dim: self.dim, amplitudes: self.amplitudes.iter().map(|a| a * f).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: other.dim });
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { dim: self.dim, amplitudes })
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized(1.0));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    /// Projector `|self⟩⟨self|`.
    pub fn outer(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim).expect("state dims are matrix dims");
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, self.amplitudes[i] * self.amplitudes[j].conj());
            }
        }
        m
    }
}

/// Kronecker product of two matrices. The left factor owns the most
/// significant index, so `tensor_mat(A, B)` acts on `|ab⟩` as `A|a⟩ ⊗ B|b⟩`.
pub fn tensor_mat(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a.dim * b.dim;
    if dim > 8 {
        return Err(Error::DimOverflow(dim));
    }
    let mut out = ComplexMatrix::zeros(dim)?;
    for i in 0..a.dim {
        for j in 0..a.dim {
            let f = a.get(i, j);
            for k in 0..b.dim {
                for l in 0..b.dim {
                    out.set(i * b.dim + k, j * b.dim + l, f * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of two state vectors.
pub fn tensor_vec(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let dim = a.dim * b.dim;
    if dim > 8 {
        return Err(Error::DimOverflow(dim));
    }
    let mut amplitudes = Vec::with_capacity(dim);
    for i in 0..a.dim {
        for k in 0..b.dim {
            amplitudes.push(a.amplitudes[i] * b.amplitudes[k]);
        }
    }
    StateVector::from_slice(&amplitudes)
}

/// Reduced density matrix on the subsystems listed in `keep`.
///
/// `dims` lists the tensor factor dimensions left to right (factor 0 is the
/// most significant index); `keep` selects factors by that position, in
/// increasing order.
pub fn partial_trace(
    rho: &ComplexMatrix,
    keep: &[usize],
    dims: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if total != rho.dim {
        return Err(Error::BadSubsystems(format!(
            "factor dims {dims:?} multiply to {total}, matrix dim is {}",
            rho.dim
        )));
    }
    let nf = dims.len();
    let mut seen = vec![false; nf];
    for &k in keep {
        if k >= nf || seen[k] {
            return Err(Error::BadSubsystems(format!(
                "keep set {keep:?} invalid for {nf} factors"
            )));
        }
        seen[k] = true;
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    if sorted != keep {
        return Err(Error::BadSubsystems("keep indices must be increasing".into()));
    }
    if !rho.is_hermitian(HERM_TOL) {
        return Err(Error::NotHermitian(HERM_TOL));
    }

    let traced: Vec<usize> = (0..nf).filter(|&i| !seen[i]).collect();
    let keep_dim: usize = keep.iter().map(|&i| dims[i]).product();
    let trace_dim: usize = traced.iter().map(|&i| dims[i]).product();
    let mut out = ComplexMatrix::zeros(keep_dim)?;

    // Decompose a flat index into per-factor digits, then reassemble the
    // row/column indices of rho from (kept digits, traced digits).
    let flat = |digits: &[usize]| -> usize {
        let mut idx = 0;
        for (f, &d) in digits.iter().enumerate() {
            idx = idx * dims[f] + d;
        }
        idx
    };
    let unflatten = |mut idx: usize, factors: &[usize]| -> Vec<usize> {
        let mut digits = vec![0; factors.len()];
        for (slot, &f) in factors.iter().enumerate().rev() {
            digits[slot] = idx % dims[f];
            idx /= dims[f];
        }
        digits
    };

    for row in 0..keep_dim {
        let row_digits = unflatten(row, keep);
        for col in 0..keep_dim {
            let col_digits = unflatten(col, keep);
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..trace_dim {
                let t_digits = unflatten(t, &traced);
                let mut full_row = vec![0; nf];
                let mut full_col = vec![0; nf];
                for (slot, &f) in keep.iter().enumerate() {
                    full_row[f] = row_digits[slot];
                    full_col[f] = col_digits[slot];
                }
                for (slot, &f) in traced.iter().enumerate() {
                    full_row[f] = t_digits[slot];
                    full_col[f] = t_digits[slot];
                }
                acc += rho.get(flat(&full_row), flat(&full_col));
            }
            out.set(row, col, acc);
        }
    }
    Ok(out)
}

/// Squared Hilbert–Schmidt norm `Σ|A_ij|²`.
pub fn hs_norm_sq(a: &ComplexMatrix) -> f64 {
    a.entries.iter().map(|z| z.norm_sqr()).sum()
}

/// Eigendecomposition of a 2×2 Hermitian matrix, eigenvalues descending.
///
/// Eigenvector phases are fixed by making the first component of magnitude
/// above `1e-14` real and positive. A degenerate spectrum returns the
/// computational basis.
pub fn eig_herm2(h: &ComplexMatrix) -> Result<[(f64, StateVector); 2]> {
    if h.dim != 2 {
        return Err(Error::DimMismatch { expected: 2, got: h.dim });
    }
    if !h.is_hermitian(HERM_TOL) {
        return Err(Error::NotHermitian(HERM_TOL));
    }
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    let b = h.get(0, 1);
    let half_gap = ((a - d) * 0.5).hypot(b.norm());
    let mean = (a + d) * 0.5;
    let (hi, lo) = (mean + half_gap, mean - half_gap);

    let vec_for = |lam: f64| -> StateVector {
        if b.norm() <= 1e-15 * (1.0 + a.abs() + d.abs()) {
            // diagonal: eigenvectors are the basis; pick by proximity
            let k = if (lam - a).abs() <= (lam - d).abs() { 0 } else { 1 };
            return StateVector::basis(2, k).expect("dim 2");
        }
        let raw = [b, C64::new(lam - a, 0.0)];
        let v = StateVector::from_slice(&raw).expect("dim 2");
        fix_phase(&v.normalized().expect("nonzero"))
    };

    if half_gap <= EIG_TOL {
        // degenerate spectrum: any orthonormal pair works, return the basis
        return Ok([
            (hi, StateVector::basis(2, 0)?),
            (lo, StateVector::basis(2, 1)?),
        ]);
    }
    Ok([(hi, vec_for(hi)), (lo, vec_for(lo))])
}

/// Multiply by a global phase so the first component of magnitude above
/// 1e-14 becomes real and positive.
pub fn fix_phase(v: &StateVector) -> StateVector {
    for k in 0..v.dim {
        let z = v.get(k);
        if z.norm() > 1e-14 {
            return v.scale(z.conj() / z.norm());
        }
    }
    v.clone()
}

/// Largest eigenvalue of a real symmetric 3×3 matrix by cyclic Jacobi
/// iteration, run until the off-diagonal norm drops below 1e-13.
pub fn max_eig_sym3(s: &[[f64; 3]; 3]) -> f64 {
    let mut m: Vec<Vec<f64>> = s.iter().map(|row| row.to_vec()).collect();
    let eigs = jacobi_eigenvalues(&mut m);
    eigs.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Cyclic Jacobi eigenvalues of a small real symmetric matrix (in place).
pub(crate) fn jacobi_eigenvalues(m: &mut [Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let off = |m: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i][j] * m[i][j];
                }
            }
        }
        s.sqrt()
    };
    for _sweep in 0..60 {
        if off(m) <= 1e-13 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

/// The Pauli matrices `(σ_x, σ_y, σ_z)`.
pub fn paulis() -> [ComplexMatrix; 3] {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        ComplexMatrix::from_slice(2, &[zero, one, one, zero]).expect("2x2"),
        ComplexMatrix::from_slice(2, &[zero, -i, i, zero]).expect("2x2"),
        ComplexMatrix::from_slice(2, &[one, zero, zero, -one]).expect("2x2"),
    ]
}

/// `½(I + v⃗·σ⃗)` for a Bloch vector with `|v⃗| ≤ 1`.
pub fn qubit_density(bloch: [f64; 3]) -> ComplexMatrix {
    let [x, y, z] = bloch;
    let m = [
        C64::new(0.5 * (1.0 + z), 0.0),
        C64::new(0.5 * x, -0.5 * y),
        C64::new(0.5 * x, 0.5 * y),
        C64::new(0.5 * (1.0 - z), 0.0),
    ];
    ComplexMatrix::from_slice(2, &m).expect("2x2")
}
