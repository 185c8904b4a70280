//! One-ancilla purification of the family states.
//!
//! Each branch state `ρ = ½(I + v⃗·σ⃗)` is spectrally decomposed with explicit
//! eigenpair formulas; the candidate purification correlates each eigenvector
//! with an ancilla basis state,
//!
//! ```text
//! |ξ⟩ = √p χ₁ ⊗ (√λ₁ ψ₁ ⊗ |0⟩ + √λ₂ ψ₂ ⊗ |1⟩)
//!     + √(1−p) χ₂ ⊗ (√λ₁′ ψ₁′ ⊗ |0⟩ + √λ₂′ ψ₂′ ⊗ |1⟩)
//! ```
//!
//! Tracing out the ancilla recovers the mixed state iff the cross-branch
//! terms vanish, which happens iff both branch states are pure. [`purify`]
//! enforces that and keeps only the surviving term per branch;
//! [`purification_ansatz`] builds the literal four-term candidate so the
//! mixed-branch failure is observable.
//!
//! Qubit order is `A ⊗ B ⊗ C` with the ancilla last: basis `|abc⟩` at index
//! `a·4 + b·2 + c`.

use num_complex::Complex64 as C64;

use crate::cxmat::{hs_norm_sq, partial_trace, tensor_vec, StateVector};
use crate::family::{build_sigma, chi_states, norm3, FamilyParams};
use crate::{Error, Result, PURITY_TOL};

/// Regularity floor for the closed-form amplitude denominators.
const REG_TOL: f64 = 1e-12;

/// Which eigenvalue a [`SpectralPair`] lists first.
///
/// The two branch states use opposite conventions so that the purity
/// condition reads "first eigenvalue of branch 1 is zero, second eigenvalue
/// of branch 2 is zero".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenOrder {
    SmallFirst,
    LargeFirst,
}

/// Spectral decomposition of a single-qubit density matrix.
#[derive(Clone, Debug)]
pub struct SpectralPair {
    pub eigenvalues: [f64; 2],
    pub eigenvectors: [StateVector; 2],
    /// The normalizers `N = 1 + (v_z ∓ |v⃗|)²/(v_x² + v_y²)` actually divided
    /// out of each eigenvector (1 on the computational-basis fallback path).
    pub norm_constants: [f64; 2],
}

impl SpectralPair {
    /// Index of the eigenvalue `(1+|v⃗|)/2` in this pair's ordering.
    pub fn large_index(&self) -> usize {
        if self.eigenvalues[0] >= self.eigenvalues[1] {
            0
        } else {
            1
        }
    }
}

/// Eigenpairs of `½(I + v⃗·σ⃗)`: eigenvalues `(1 ∓ |v⃗|)/2` with eigenvectors
/// `[(v_z ∓ |v⃗|)/(v_x + i v_y), 1]/√N`.
///
/// When `v_x² + v_y² ≤ 1e-20` the fractions are undefined and the
/// computational basis is returned instead: for `v_z ≥ 0` the larger
/// eigenvalue gets `|0⟩`, otherwise `|1⟩`.
pub fn spectral_decompose_qubit(bloch: [f64; 3], order: EigenOrder) -> Result<SpectralPair> {
    let m = norm3(bloch);
    if !m.is_finite() || m > 1.0 + 1e-9 {
        return Err(Error::InvalidParams(format!("|bloch| = {m} exceeds the Bloch ball")));
    }
    let lam_small = (1.0 - m) / 2.0;
    let lam_large = (1.0 + m) / 2.0;
    let [x, y, z] = bloch;
    let xy_sq = x * x + y * y;

    let (v_small, v_large, n_small, n_large) = if xy_sq > 1e-20 {
        let denom = C64::new(x, y);
        let n_small = 1.0 + (z - m) * (z - m) / xy_sq;
        let n_large = 1.0 + (z + m) * (z + m) / xy_sq;
        let mk = |num: f64, norm_c: f64| -> StateVector {
            let scale = 1.0 / norm_c.sqrt();
            StateVector::from_slice(&[
                C64::new(num, 0.0) / denom * scale,
                C64::new(scale, 0.0),
            ])
            .expect("dim 2")
        };
        (mk(z - m, n_small), mk(z + m, n_large), n_small, n_large)
    } else if z >= 0.0 {
        (StateVector::basis(2, 1)?, StateVector::basis(2, 0)?, 1.0, 1.0)
    } else {
        (StateVector::basis(2, 0)?, StateVector::basis(2, 1)?, 1.0, 1.0)
    };

    Ok(match order {
        EigenOrder::SmallFirst => SpectralPair {
            eigenvalues: [lam_small, lam_large],
            eigenvectors: [v_small, v_large],
            norm_constants: [n_small, n_large],
        },
        EigenOrder::LargeFirst => SpectralPair {
            eigenvalues: [lam_large, lam_small],
            eigenvectors: [v_large, v_small],
            norm_constants: [n_large, n_small],
        },
    })
}

/// A three-qubit purification together with the parameters it came from.
#[derive(Clone, Debug)]
pub struct PurifiedState {
    pub xi: StateVector,
    pub params: FamilyParams,
}

impl PurifiedState {
    /// The eight amplitudes in `(a, b, c, d, e, f, g, h)` order, i.e. the
    /// coefficients of `|001⟩, |011⟩, |101⟩, |111⟩, |000⟩, |010⟩, |100⟩,
    /// |110⟩` respectively.
    pub fn branch_amplitudes(&self) -> [C64; 8] {
        let xi = &self.xi;
        [
            xi.get(1),
            xi.get(3),
            xi.get(5),
            xi.get(7),
            xi.get(0),
            xi.get(2),
            xi.get(4),
            xi.get(6),
        ]
    }
}

fn check_purification_preconditions(params: &FamilyParams) -> Result<()> {
    if !(params.p > 0.0 && params.p < 1.0) {
        return Err(Error::InvalidParams(format!(
            "p = {} must lie strictly inside (0, 1) for purification",
            params.p
        )));
    }
    if !params.has_unit_bloch(PURITY_TOL) {
        return Err(Error::MixedBranch(format!(
            "|r| = {}, |s| = {}; both must equal 1 within {PURITY_TOL:e}",
            norm3(params.r),
            norm3(params.s)
        )));
    }
    Ok(())
}

/// Purify a family state with pure branches onto a single ancilla qubit.
///
/// With both Bloch vectors unit, one eigenvalue per branch is zero, so the
/// four-term candidate collapses to one surviving term per branch; those are
/// assembled directly (the vanishing eigenvalues are clamped to exactly
/// zero, the surviving ones to exactly one).
pub fn purify(params: &FamilyParams) -> Result<PurifiedState> {
    check_purification_preconditions(params)?;
    let (chi1, chi2, _) = chi_states(params);
    let sp_r = spectral_decompose_qubit(params.r, EigenOrder::SmallFirst)?;
    let sp_s = spectral_decompose_qubit(params.s, EigenOrder::LargeFirst)?;
    // branch 1 survives on ancilla |1⟩, branch 2 on ancilla |0⟩
    let psi_r = &sp_r.eigenvectors[1];
    let psi_s = &sp_s.eigenvectors[0];
    let anc0 = StateVector::basis(2, 0)?;
    let anc1 = StateVector::basis(2, 1)?;
    let term1 = tensor_vec(&chi1, &tensor_vec(psi_r, &anc1)?)?
        .scale(C64::new(params.p.sqrt(), 0.0));
    let term2 = tensor_vec(&chi2, &tensor_vec(psi_s, &anc0)?)?
        .scale(C64::new((1.0 - params.p).sqrt(), 0.0));
    let xi = term1.add(&term2)?;
    Ok(PurifiedState { xi, params: *params })
}

/// The literal four-term purification candidate, with no purity requirement
/// and no renormalization. For mixed branches this is *not* a purification:
/// the ancilla trace leaves cross-branch terms behind.
pub fn purification_ansatz(params: &FamilyParams) -> Result<StateVector> {
    let (chi1, chi2, _) = chi_states(params);
    let sp_r = spectral_decompose_qubit(params.r, EigenOrder::SmallFirst)?;
    let sp_s = spectral_decompose_qubit(params.s, EigenOrder::LargeFirst)?;
    let anc = [StateVector::basis(2, 0)?, StateVector::basis(2, 1)?];
    let mut xi = StateVector::from_slice(&[C64::new(0.0, 0.0); 8])?;
    for (weight, chi, pair) in [
        (params.p, &chi1, &sp_r),
        (1.0 - params.p, &chi2, &sp_s),
    ] {
        for k in 0..2 {
            let term = tensor_vec(chi, &tensor_vec(&pair.eigenvectors[k], &anc[k])?)?
                .scale(C64::new(weight.sqrt() * pair.eigenvalues[k].max(0.0).sqrt(), 0.0));
            xi = xi.add(&term)?;
        }
    }
    Ok(xi)
}

/// The closed-form amplitudes `a…h` of the purified state.
#[derive(Clone, Copy, Debug)]
pub struct ClosedAmplitudes {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub e: C64,
    pub f: C64,
    pub g: C64,
    pub h: C64,
}

impl ClosedAmplitudes {
    pub fn as_array(&self) -> [C64; 8] {
        [self.a, self.b, self.c, self.d, self.e, self.f, self.g, self.h]
    }

    /// Place the amplitudes at their basis positions:
    /// `a→|001⟩, b→|011⟩, c→|101⟩, d→|111⟩, e→|000⟩, f→|010⟩, g→|100⟩, h→|110⟩`.
    pub fn to_state_vector(&self) -> StateVector {
        let mut amps = [C64::new(0.0, 0.0); 8];
        for (amp, idx) in self.as_array().into_iter().zip([1, 3, 5, 7, 0, 2, 4, 6]) {
            amps[idx] = amp;
        }
        StateVector::from_slice(&amps).expect("dim 8")
    }
}

/// Closed-form amplitudes of the purification, valid only on the regular
/// region where none of the fractions degenerate: `αβ`, `1 + r_z`, `1 + s_z`,
/// `r_x² + r_y²` and `s_x² + s_y²` all above 1e-12.
///
/// This is a validation path: [`purify`] assembles the same state from
/// eigenvectors without any of these denominators.
pub fn amplitudes_closed(params: &FamilyParams) -> Result<ClosedAmplitudes> {
    check_purification_preconditions(params)?;
    let alpha = params.alpha;
    let beta = params.beta();
    let [rx, ry, rz] = params.r;
    let [sx, sy, sz] = params.s;
    let rxy = rx * rx + ry * ry;
    let sxy = sx * sx + sy * sy;
    for (name, v) in [
        ("alpha*beta", alpha * beta),
        ("1+r_z", 1.0 + rz),
        ("1+s_z", 1.0 + sz),
        ("r_x^2+r_y^2", rxy),
        ("s_x^2+s_y^2", sxy),
    ] {
        if v <= REG_TOL {
            return Err(Error::SingularClosedForm(format!(
                "{name} = {v:e}; use purify() directly"
            )));
        }
    }
    let sgn = params.parity_sign();
    let a = C64::new(rx, -ry)
        * (alpha * params.p.sqrt() * (rz + 1.0)
            / (rxy * (rxy + (rz + 1.0) * (rz + 1.0))).sqrt());
    let b = a * C64::new(rx, ry) / (rz + 1.0);
    let c = a * (beta / alpha);
    let d = c * C64::new(rx, ry) / (rz + 1.0);
    let e = C64::new(sx, -sy)
        * (beta * (1.0 - params.p).sqrt() * (sz + 1.0)
            / (sxy * (sxy + (sz + 1.0) * (sz + 1.0))).sqrt());
    let f = e * C64::new(sx, sy) / (sz + 1.0);
    let g = e * (sgn * alpha / beta);
    let h = g * C64::new(sx, sy) / (sz + 1.0);
    Ok(ClosedAmplitudes { a, b, c, d, e, f, g, h })
}

/// Moduli of the `a` and `e` amplitudes for unit Bloch vectors, via the
/// pole-free simplification `|a| = α√p · √((1+r_z)/2)` (and the mirror
/// expression for `|e|`). Used by classification and the closed-form tangle,
/// where only the moduli enter.
pub fn amplitude_moduli(params: &FamilyParams) -> (f64, f64) {
    let a = params.alpha * params.p.sqrt() * ((1.0 + params.r[2]).max(0.0) / 2.0).sqrt();
    let e = params.beta() * (1.0 - params.p).sqrt() * ((1.0 + params.s[2]).max(0.0) / 2.0).sqrt();
    (a, e)
}

/// Residual `‖Tr_C |ξ⟩⟨ξ| − σ_AB‖²` of a purified state against the mixed
/// state rebuilt from its own parameters.
pub fn verify_purification(state: &PurifiedState) -> f64 {
    let rho = state.xi.outer();
    let reduced = partial_trace(&rho, &[0, 1], &[2, 2, 2]).expect("8 = 2*2*2");
    let sigma = build_sigma(&state.params).expect("params were validated");
    hs_norm_sq(&reduced.sub(&sigma).expect("both 4x4"))
}

/// Residual of the literal four-term candidate, defined for mixed branches
/// too (where it stays strictly positive).
pub fn ansatz_residual(params: &FamilyParams) -> Result<f64> {
    let xi = purification_ansatz(params)?;
    let rho = xi.outer();
    let reduced = partial_trace(&rho, &[0, 1], &[2, 2, 2])?;
    let sigma = build_sigma(params)?;
    Ok(hs_norm_sq(&reduced.sub(&sigma)?))
}
