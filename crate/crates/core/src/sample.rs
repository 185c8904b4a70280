//! Deterministic random generators for states and family parameters, shared
//! by the unit tests, the acceptance suite and the `selftest` subcommand.

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::cxmat::{qubit_density, ComplexMatrix, StateVector};
use crate::family::FamilyParams;

/// Uniform point on the unit sphere.
pub fn random_unit_vec<R: Rng>(rng: &mut R) -> [f64; 3] {
    let cos_t: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    [sin_t * phi.cos(), sin_t * phi.sin(), cos_t]
}

/// Point in the closed unit ball (Bloch vector of a generally mixed qubit).
pub fn random_in_ball<R: Rng>(rng: &mut R) -> [f64; 3] {
    let u = random_unit_vec(rng);
    let m: f64 = rng.gen_range(0.0..=1.0);
    [u[0] * m, u[1] * m, u[2] * m]
}

pub fn random_qubit_density<R: Rng>(rng: &mut R) -> ComplexMatrix {
    qubit_density(random_in_ball(rng))
}

/// Random Hermitian 2×2 with entries of order one.
pub fn random_hermitian2<R: Rng>(rng: &mut R) -> ComplexMatrix {
    let a: f64 = rng.gen_range(-1.0..1.0);
    let d: f64 = rng.gen_range(-1.0..1.0);
    let br: f64 = rng.gen_range(-1.0..1.0);
    let bi: f64 = rng.gen_range(-1.0..1.0);
    ComplexMatrix::from_slice(
        2,
        &[
            C64::new(a, 0.0),
            C64::new(br, bi),
            C64::new(br, -bi),
            C64::new(d, 0.0),
        ],
    )
    .expect("2x2")
}

/// Random normalized single-qubit state.
pub fn random_qubit_state<R: Rng>(rng: &mut R) -> StateVector {
    random_state(rng, 2)
}

/// Random normalized state of the given dimension.
pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> StateVector {
    loop {
        let amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let v = StateVector::from_slice(&amps).expect("allowed dim");
        if v.norm() > 1e-3 {
            return v.normalized().expect("nonzero");
        }
    }
}

/// Family parameters with Bloch vectors anywhere in the unit ball. The
/// mixing weight and amplitude stay inside `[0.02, 0.98]` so denominators in
/// closed forms never degenerate to exactly zero by accident.
pub fn random_params<R: Rng>(rng: &mut R, parity: Option<i32>) -> FamilyParams {
    let n = parity.unwrap_or_else(|| rng.gen_range(0..4));
    FamilyParams::new(
        rng.gen_range(0.02..0.98),
        rng.gen_range(0.02..0.98),
        n,
        random_in_ball(rng),
        random_in_ball(rng),
    )
    .expect("in-range draw")
}

/// Family parameters with unit Bloch vectors (purification preconditions
/// hold) and `p` strictly inside `(0, 1)`.
pub fn random_pure_branch_params<R: Rng>(rng: &mut R, parity: Option<i32>) -> FamilyParams {
    let n = parity.unwrap_or_else(|| rng.gen_range(0..4));
    FamilyParams::new(
        rng.gen_range(0.02..0.98),
        rng.gen_range(0.02..0.98),
        n,
        random_unit_vec(rng),
        random_unit_vec(rng),
    )
    .expect("in-range draw")
}

/// Like [`random_pure_branch_params`] but restricted to the regular region
/// where the closed-form amplitudes are well conditioned: `αβ > 0.05` and
/// both Bloch vectors away from the south pole (`r_z, s_z > −0.9`).
pub fn random_regular_params<R: Rng>(rng: &mut R, parity: Option<i32>) -> FamilyParams {
    let n = parity.unwrap_or_else(|| rng.gen_range(0..4));
    let alpha = loop {
        let a: f64 = rng.gen_range(0.06..0.96);
        let beta = (1.0 - a * a).sqrt();
        if a * beta > 0.05 {
            break a;
        }
    };
    let northern = |rng: &mut R| loop {
        let v = random_unit_vec(rng);
        if v[2] > -0.9 {
            break v;
        }
    };
    let r = northern(rng);
    let s = northern(rng);
    FamilyParams::new(rng.gen_range(0.02..0.98), alpha, n, r, s).expect("in-range draw")
}

/// E/F/G triple drawn so that the assembled block matrix stays well away
/// from overflow but covers both signs of F and E−G.
pub fn random_efg<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
    (
        rng.gen_range(0.0..3.0),
        rng.gen_range(-1.5..1.5),
        rng.gen_range(0.0..3.0),
    )
}
