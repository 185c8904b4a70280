//! The two-branch family of two-qubit mixed states
//! `σ_AB = p|χ₁⟩⟨χ₁|⊗ρ₁ + (1−p)|χ₂⟩⟨χ₂|⊗ρ₂` with
//! `|χ₁⟩ = α|0⟩ + β|1⟩`, `|χ₂⟩ = β|0⟩ + (−1)ⁿα|1⟩` and single-qubit branch
//! states `ρᵢ = ½(I + Bloch·σ⃗)`.
//!
//! Party A carries the χ states, party B the Bloch-vector states; the branch
//! overlap `⟨χ₁|χ₂⟩ = αβ(1 + (−1)ⁿ)` vanishes exactly when `n` is odd, which
//! is what makes the odd-parity states classical.

use num_complex::Complex64 as C64;

use crate::cxmat::{paulis, qubit_density, tensor_mat, ComplexMatrix, StateVector};
use crate::{Error, Result};

const BLOCH_TOL: f64 = 1e-9;

/// The parameter tuple `(p, α, n, r⃗, s⃗)`.
///
/// `β = +√(1−α²)` is derived, never stored; only the parity of `n` matters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    pub p: f64,
    pub alpha: f64,
    pub n: i32,
    pub r: [f64; 3],
    pub s: [f64; 3],
}

impl FamilyParams {
    pub fn new(p: f64, alpha: f64, n: i32, r: [f64; 3], s: [f64; 3]) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::InvalidParams(format!("p = {p} outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
            return Err(Error::InvalidParams(format!("alpha = {alpha} outside [0, 1]")));
        }
        for (name, v) in [("r", r), ("s", s)] {
            let norm = norm3(v);
            if !norm.is_finite() || norm > 1.0 + BLOCH_TOL {
                return Err(Error::InvalidParams(format!(
                    "|{name}| = {norm} exceeds the Bloch ball"
                )));
            }
        }
        Ok(Self { p, alpha, n, r, s })
    }

    /// The nonnegative root `β = √(1−α²)`.
    pub fn beta(&self) -> f64 {
        (1.0 - self.alpha * self.alpha).max(0.0).sqrt()
    }

    /// `(−1)ⁿ`.
    pub fn parity_sign(&self) -> f64 {
        if self.n.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Branch overlap `⟨χ₁|χ₂⟩ = αβ(1 + (−1)ⁿ)`.
    pub fn overlap(&self) -> f64 {
        self.alpha * self.beta() * (1.0 + self.parity_sign())
    }

    /// Whether both Bloch vectors are unit within `tol` (branch purity).
    pub fn has_unit_bloch(&self, tol: f64) -> bool {
        (norm3(self.r) - 1.0).abs() <= tol && (norm3(self.s) - 1.0).abs() <= tol
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// The `(x⃗, y⃗, T)` representation of a two-qubit state:
/// `ρ = ¼(I⊗I + Σxᵢ σᵢ⊗I + Σyⱼ I⊗σⱼ + Σt_ij σᵢ⊗σⱼ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochForm {
    pub x: [f64; 3],
    pub y: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl BlochForm {
    /// `‖x⃗‖²`.
    pub fn x_norm_sq(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum()
    }

    /// `‖T‖²` (entrywise).
    pub fn t_norm_sq(&self) -> f64 {
        self.t.iter().flatten().map(|v| v * v).sum()
    }

    /// The symmetric matrix `x⃗x⃗ᵀ + TTᵀ` whose top eigenvalue enters the
    /// geometric discord.
    pub fn xxt_plus_ttt(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut v = self.x[i] * self.x[j];
                for k in 0..3 {
                    v += self.t[i][k] * self.t[j][k];
                }
                m[i][j] = v;
            }
        }
        m
    }

    /// Rebuild the 4×4 matrix from the Pauli expansion.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let i2 = ComplexMatrix::identity(2).expect("dim 2");
        let sig = paulis();
        let mut acc = tensor_mat(&i2, &i2).expect("4x4");
        for i in 0..3 {
            acc = acc
                .add(&tensor_mat(&sig[i], &i2).expect("4x4").scale_re(self.x[i]))
                .expect("same dim");
            acc = acc
                .add(&tensor_mat(&i2, &sig[i]).expect("4x4").scale_re(self.y[i]))
                .expect("same dim");
            for j in 0..3 {
                acc = acc
                    .add(&tensor_mat(&sig[i], &sig[j]).expect("4x4").scale_re(self.t[i][j]))
                    .expect("same dim");
            }
        }
        acc.scale_re(0.25)
    }
}

/// The branch states `|χ₁⟩ = α|0⟩+β|1⟩`, `|χ₂⟩ = β|0⟩+(−1)ⁿα|1⟩` and their
/// overlap.
pub fn chi_states(params: &FamilyParams) -> (StateVector, StateVector, f64) {
    let (alpha, beta) = (params.alpha, params.beta());
    let chi1 = StateVector::from_slice(&[C64::new(alpha, 0.0), C64::new(beta, 0.0)])
        .expect("dim 2");
    let chi2 = StateVector::from_slice(&[
        C64::new(beta, 0.0),
        C64::new(params.parity_sign() * alpha, 0.0),
    ])
    .expect("dim 2");
    (chi1, chi2, params.overlap())
}

/// Assemble `σ_AB` as an explicit 4×4 density matrix.
pub fn build_sigma(params: &FamilyParams) -> Result<ComplexMatrix> {
    for (name, v) in [("r", params.r), ("s", params.s)] {
        let norm = norm3(v);
        if norm > 1.0 + BLOCH_TOL {
            return Err(Error::InvalidParams(format!(
                "|{name}| = {norm} exceeds the Bloch ball"
            )));
        }
    }
    let (chi1, chi2, _) = chi_states(params);
    let rho1 = qubit_density(params.r);
    let rho2 = qubit_density(params.s);
    let term1 = tensor_mat(&chi1.outer(), &rho1)?.scale_re(params.p);
    let term2 = tensor_mat(&chi2.outer(), &rho2)?.scale_re(1.0 - params.p);
    term1.add(&term2)
}

/// The Bloch form of `σ_AB` straight from the parameters, no matrices.
///
/// Row 2 of the correlation matrix is identically zero for every member of
/// the family: neither branch contributes a `σ_y` component on party A.
pub fn bloch_form_closed(params: &FamilyParams) -> BlochForm {
    let p = params.p;
    let q = 1.0 - p;
    let alpha = params.alpha;
    let beta = params.beta();
    let sgn = params.parity_sign();
    let a2b2 = alpha * alpha - beta * beta;
    let two_ab = 2.0 * alpha * beta;

    let x = [two_ab * (p + sgn * q), 0.0, (2.0 * p - 1.0) * a2b2];
    let mut y = [0.0; 3];
    let mut t = [[0.0; 3]; 3];
    for j in 0..3 {
        y[j] = p * params.r[j] + q * params.s[j];
        t[0][j] = two_ab * (p * params.r[j] + sgn * q * params.s[j]);
        t[2][j] = a2b2 * (p * params.r[j] - q * params.s[j]);
    }
    BlochForm { x, y, t }
}

/// Extract the Bloch form of an arbitrary two-qubit density matrix via
/// `x_i = Tr(ρ σᵢ⊗I)`, `y_j = Tr(ρ I⊗σⱼ)`, `t_ij = Tr(ρ σᵢ⊗σⱼ)`.
///
/// The traces must be real within 1e-10; imaginary parts are discarded after
/// that check.
pub fn pauli_expand(rho: &ComplexMatrix) -> Result<BlochForm> {
    if rho.dim() != 4 {
        return Err(Error::DimMismatch { expected: 4, got: rho.dim() });
    }
    rho.check_density(crate::HERM_TOL)?;
    let i2 = ComplexMatrix::identity(2)?;
    let sig = paulis();
    let real_trace = |op: &ComplexMatrix| -> Result<f64> {
        let tr = rho.mul(op)?.trace();
        if tr.im.abs() > 1e-10 {
            return Err(Error::NotDensity(format!(
                "Pauli expectation has imaginary part {:e}",
                tr.im
            )));
        }
        Ok(tr.re)
    };
    let mut x = [0.0; 3];
    let mut y = [0.0; 3];
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        x[i] = real_trace(&tensor_mat(&sig[i], &i2)?)?;
        y[i] = real_trace(&tensor_mat(&i2, &sig[i])?)?;
        for j in 0..3 {
            t[i][j] = real_trace(&tensor_mat(&sig[i], &sig[j])?)?;
        }
    }
    Ok(BlochForm { x, y, t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cxmat::hs_norm_sq;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn max_bloch_diff(a: &BlochForm, b: &BlochForm) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            worst = worst.max((a.x[i] - b.x[i]).abs());
            worst = worst.max((a.y[i] - b.y[i]).abs());
            for j in 0..3 {
                worst = worst.max((a.t[i][j] - b.t[i][j]).abs());
            }
        }
        worst
    }

    #[test]
    fn overlap_parity() {
        // odd n: orthogonal branches regardless of alpha
        for alpha in [0.0, 0.3, 1.0 / 2.0_f64.sqrt(), 0.9] {
            let p = FamilyParams::new(0.5, alpha, 1, [0.0, 0.0, 1.0], [0.0, 0.0, 1.0]).unwrap();
            assert_eq!(p.overlap(), 0.0);
        }
        // even n, alpha = beta: overlap 1 and identical branch states
        let p = FamilyParams::new(0.5, 1.0 / 2.0_f64.sqrt(), 2, [0.0, 0.0, 1.0], [0.0, 0.0, 1.0])
            .unwrap();
        let (chi1, chi2, ov) = chi_states(&p);
        assert!((ov - 1.0).abs() < 1e-15);
        assert!((chi1.inner(&chi2).unwrap().re - 1.0).abs() < 1e-15);
        // even n, alpha = 0.6: overlap 2 * 0.6 * 0.8
        let p = FamilyParams::new(0.5, 0.6, 2, [0.0, 0.0, 1.0], [0.0, 0.0, 1.0]).unwrap();
        assert!((p.overlap() - 0.96).abs() < 1e-15);
    }

    #[test]
    fn overlap_matches_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let params = sample::random_params(&mut rng, None);
            let (chi1, chi2, ov) = chi_states(&params);
            let ip = chi1.inner(&chi2).unwrap();
            assert!((ip.re - ov).abs() < 1e-14 && ip.im.abs() < 1e-15);
        }
    }

    #[test]
    fn sigma_single_pure_term() {
        // p = 1, alpha = 1, r = +z gives |00><00|
        let params = FamilyParams::new(1.0, 1.0, 0, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        let sigma = build_sigma(&params).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert!((sigma.get(i, j) - C64::new(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn sigma_equal_mixture_diagonal() {
        // p = 1/2, alpha = 1, n = 1: chi1 = |0>, chi2 = -|1> (global phase drops)
        let params = FamilyParams::new(0.5, 1.0, 1, [0.0, 0.0, 1.0], [0.0, 0.0, 1.0]).unwrap();
        let sigma = build_sigma(&params).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if (i, j) == (0, 0) || (i, j) == (2, 2) { 0.5 } else { 0.0 };
                assert!((sigma.get(i, j) - C64::new(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn sigma_is_positive_semidefinite() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let params = sample::random_params(&mut rng, None);
            let sigma = build_sigma(&params).unwrap();
            assert!(sigma.min_eigenvalue_herm().unwrap() >= -1e-12);
            assert!((sigma.trace().re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sigma_rejects_oversized_bloch() {
        let mut params =
            FamilyParams::new(0.5, 0.5, 0, [0.0, 0.0, 1.0], [0.0, 0.0, 1.0]).unwrap();
        params.r = [1.2, 0.0, 0.0];
        assert!(build_sigma(&params).is_err());
    }

    #[test]
    fn closed_bloch_substitution_point() {
        // p = 1/2, n even, alpha = beta = 1/sqrt(2) puts x on the x-axis
        let params = FamilyParams::new(
            0.5,
            1.0 / 2.0_f64.sqrt(),
            2,
            [0.2, -0.4, 0.1],
            [0.0, 0.3, -0.5],
        )
        .unwrap();
        let bf = bloch_form_closed(&params);
        assert!((bf.x[0] - 1.0).abs() < 1e-15);
        assert_eq!(bf.x[1], 0.0);
        assert!(bf.x[2].abs() < 1e-15);
    }

    #[test]
    fn correlation_row_two_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..100 {
            let params = sample::random_params(&mut rng, None);
            let bf = bloch_form_closed(&params);
            assert_eq!(bf.t[1], [0.0, 0.0, 0.0]);
            // and the matrix route agrees exactly within expansion tolerance
            let expanded = pauli_expand(&build_sigma(&params).unwrap()).unwrap();
            for j in 0..3 {
                assert!(expanded.t[1][j].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn pauli_expand_maximally_mixed() {
        let rho = ComplexMatrix::identity(4).unwrap().scale_re(0.25);
        let bf = pauli_expand(&rho).unwrap();
        assert_eq!(bf.x, [0.0; 3]);
        assert_eq!(bf.y, [0.0; 3]);
        assert_eq!(bf.t, [[0.0; 3]; 3]);
    }

    #[test]
    fn pauli_expand_bell_state() {
        let amp = 1.0 / 2.0_f64.sqrt();
        let bell = StateVector::from_slice(&[
            C64::new(amp, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(amp, 0.0),
        ])
        .unwrap();
        let bf = pauli_expand(&bell.outer()).unwrap();
        for i in 0..3 {
            assert!(bf.x[i].abs() < 1e-14 && bf.y[i].abs() < 1e-14);
        }
        let expect = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((bf.t[i][j] - expect[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn pauli_expand_rejects_non_density() {
        let rho = ComplexMatrix::identity(4).unwrap(); // trace 4
        assert!(pauli_expand(&rho).is_err());
    }

    #[test]
    fn closed_form_matches_matrix_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let params = sample::random_params(&mut rng, None);
            let closed = bloch_form_closed(&params);
            let expanded = pauli_expand(&build_sigma(&params).unwrap()).unwrap();
            assert!(max_bloch_diff(&closed, &expanded) < 1e-12);
        }
    }

    #[test]
    fn bloch_reconstruction_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..50 {
            let params = sample::random_params(&mut rng, None);
            let sigma = build_sigma(&params).unwrap();
            let rebuilt = bloch_form_closed(&params).reconstruct();
            assert!(hs_norm_sq(&rebuilt.sub(&sigma).unwrap()).sqrt() < 1e-12);
            rebuilt.check_density(1e-10).unwrap();
        }
    }

    #[test]
    fn trace_is_one_to_machine_precision() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let params = sample::random_params(&mut rng, None);
            let tr = build_sigma(&params).unwrap().trace();
            assert!((tr.re - 1.0).abs() < 1e-14 && tr.im.abs() < 1e-16);
        }
    }
}
