//! Three-tangle of three-qubit pure states and classification of the
//! purified family states.
//!
//! The general route evaluates `τ₃ = 2√|d₁ − 2d₂ + 4d₃|` over the eight
//! complex amplitudes. The degree-4 monomials cancel catastrophically on
//! zero-tangle states (biseparable states sit on the singular locus of the
//! quartic), and the square root amplifies whatever survives: plain f64
//! evaluation bottoms out near `τ₃ ≈ 1e-8`. The monomials and their sum are
//! therefore accumulated in double-double arithmetic, which pushes the floor
//! below `1e-15`.
//!
//! The `k`-form is the identical quartic under the amplitude labeling
//! `a→|001⟩, b→|011⟩, c→|101⟩, d→|111⟩, e→|000⟩, f→|010⟩, g→|100⟩, h→|110⟩`,
//! and the closed form reduces the whole thing to moduli of two amplitudes
//! times the distance `Δ` between the stereographic projections of the two
//! branch Bloch vectors.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::cxmat::{eig_herm2, partial_trace, StateVector};
use crate::family::{norm3, FamilyParams};
use crate::purify::{amplitude_moduli, purify};
use crate::{Error, Result, NORM_TOL, PURITY_TOL};

// ---------------------------------------------------------------------------
// double-double scalar and complex arithmetic (enough for quartic monomials)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        renorm(s.hi, s.lo + self.lo + o.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        renorm(p.hi, p.lo + self.hi * o.lo + self.lo * o.hi)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    /// Exact scaling by a power of two.
    fn scale_pow2(self, k: f64) -> Dd {
        Dd { hi: self.hi * k, lo: self.lo * k }
    }
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

fn renorm(hi: f64, lo: f64) -> Dd {
    let s = hi + lo;
    Dd { hi: s, lo: (hi - s) + lo }
}

#[derive(Clone, Copy, Debug)]
struct DdC {
    re: Dd,
    im: Dd,
}

impl DdC {
    fn from_c64(z: C64) -> DdC {
        DdC { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    fn to_c64(self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    fn add(self, o: DdC) -> DdC {
        DdC { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    fn mul(self, o: DdC) -> DdC {
        DdC {
            re: self.re.mul(o.re).add(self.im.mul(o.im).neg()),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    fn scale_pow2(self, k: f64) -> DdC {
        DdC { re: self.re.scale_pow2(k), im: self.im.scale_pow2(k) }
    }

    fn norm(self) -> f64 {
        let mag_sq = self.re.mul(self.re).add(self.im.mul(self.im));
        mag_sq.to_f64().max(0.0).sqrt()
    }
}

/// The quartic `d₁ − 2d₂ + 4d₃` over amplitudes in binary order
/// (`index = a·4 + b·2 + c`), with the three `d` aggregates reported.
fn hyperdet(amps: &[C64; 8]) -> ([C64; 3], f64) {
    let a = |idx: usize| DdC::from_c64(amps[idx]);
    // products of the four antipodal index pairs
    let p1 = a(0b000).mul(a(0b111));
    let p2 = a(0b001).mul(a(0b110));
    let p3 = a(0b010).mul(a(0b101));
    let p4 = a(0b100).mul(a(0b011));

    let d1 = p1.mul(p1).add(p2.mul(p2)).add(p3.mul(p3)).add(p4.mul(p4));
    let d2 = p1
        .mul(p2.add(p3).add(p4))
        .add(p2.mul(p3.add(p4)))
        .add(p3.mul(p4));
    let d3 = a(0b000)
        .mul(a(0b110))
        .mul(a(0b101))
        .mul(a(0b011))
        .add(a(0b111).mul(a(0b001)).mul(a(0b010)).mul(a(0b100)));

    let total = d1.add(d2.scale_pow2(-2.0)).add(d3.scale_pow2(4.0));
    ([d1.to_c64(), d2.to_c64(), d3.to_c64()], total.norm())
}

fn check_norm(amps: &[C64; 8]) -> Result<()> {
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized((norm - 1.0).abs()));
    }
    Ok(())
}

/// `τ₃ = 2√|d₁ − 2d₂ + 4d₃|` of a unit three-qubit state, plus the three
/// `d` aggregates.
pub fn three_tangle_general(psi: &StateVector) -> Result<(f64, [C64; 3])> {
    if psi.dim() != 8 {
        return Err(Error::DimMismatch { expected: 8, got: psi.dim() });
    }
    let mut amps = [C64::new(0.0, 0.0); 8];
    amps.copy_from_slice(psi.amplitudes());
    check_norm(&amps)?;
    let (d, modulus) = hyperdet(&amps);
    Ok((2.0 * modulus.sqrt(), d))
}

/// `τ₃ = 2√|k₁ − 2k₂ + 4k₃|` over amplitudes given in `(a…h)` order; the
/// same quartic as [`three_tangle_general`] after relabeling.
pub fn three_tangle_k(amps_a_to_h: &[C64; 8]) -> Result<(f64, [C64; 3])> {
    check_norm(amps_a_to_h)?;
    let mut binary = [C64::new(0.0, 0.0); 8];
    for (amp, idx) in amps_a_to_h.iter().zip([1, 3, 5, 7, 0, 2, 4, 6]) {
        binary[idx] = *amp;
    }
    let (k, modulus) = hyperdet(&binary);
    Ok((2.0 * modulus.sqrt(), k))
}

/// Distance between the stereographic projections (from the south pole) of
/// two Bloch vectors:
/// `Δ = √((s_x/(1+s_z) − r_x/(1+r_z))² + (s_y/(1+s_z) − r_y/(1+r_z))²)`.
pub fn delta(r: [f64; 3], s: [f64; 3]) -> Result<f64> {
    if 1.0 + r[2] <= 1e-12 || 1.0 + s[2] <= 1e-12 {
        return Err(Error::DeltaAtPole);
    }
    let dx = s[0] / (1.0 + s[2]) - r[0] / (1.0 + r[2]);
    let dy = s[1] / (1.0 + s[2]) - r[1] / (1.0 + r[2]);
    Ok(dx.hypot(dy))
}

fn check_tangle_preconditions(params: &FamilyParams) -> Result<()> {
    if !(params.p > 0.0 && params.p < 1.0) {
        return Err(Error::InvalidParams(format!(
            "p = {} must lie strictly inside (0, 1)",
            params.p
        )));
    }
    if !params.has_unit_bloch(PURITY_TOL) {
        return Err(Error::MixedBranch(format!(
            "|r| = {}, |s| = {}; tangle classification needs pure branches",
            norm3(params.r),
            norm3(params.s)
        )));
    }
    Ok(())
}

/// Closed-form three-tangle of the purified state:
/// `τ₃ = 2|a·e·(α⟨χ₁|χ₂⟩ − β)| · Δ / (αβ²)`,
/// with `|a| = α√p·√((1+r_z)/2)` and `|e| = β√(1−p)·√((1+s_z)/2)`.
///
/// Only the amplitude moduli enter, so this stays finite everywhere `Δ` is
/// defined; callers fall back to the general formula on the poles.
pub fn three_tangle_closed(params: &FamilyParams) -> Result<f64> {
    check_tangle_preconditions(params)?;
    let alpha = params.alpha;
    let beta = params.beta();
    if alpha * beta <= 1e-12 {
        return Err(Error::SingularClosedForm(format!(
            "alpha*beta = {:e}; use the general tangle",
            alpha * beta
        )));
    }
    let d = delta(params.r, params.s)?;
    let (abs_a, abs_e) = amplitude_moduli(params);
    Ok(2.0 * abs_a * abs_e * (alpha * params.overlap() - beta).abs() / (alpha * beta * beta) * d)
}

/// Classification of the purified state by the closed-form case analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaperLabel {
    /// `a·e = 0`: one branch contributes nothing on its surviving ancilla
    /// sector and the state splits across a bipartition.
    Biseparable,
    /// `Δ = 0` with `a·e ≠ 0`: zero tangle with both branches alive.
    WType,
    /// `Δ ≠ 0`, `a·e ≠ 0`, `⟨χ₁|χ₂⟩ ≠ β/α`: strictly positive tangle.
    GhzType,
    /// The leftover cell `Δ ≠ 0`, `a·e ≠ 0`, `⟨χ₁|χ₂⟩ = β/α` (even parity
    /// with `α = 1/√2`): the tangle vanishes but the case analysis above
    /// does not cover it, so it is reported as its own label rather than
    /// silently folded into one of the others.
    ZeroTangleUnclassified,
}

impl fmt::Display for PaperLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PaperLabel::Biseparable => "Biseparable",
            PaperLabel::WType => "WType",
            PaperLabel::GhzType => "GHZType",
            PaperLabel::ZeroTangleUnclassified => "ZeroTangleUnclassified",
        })
    }
}

/// The six SLOCC equivalence classes of three-qubit pure states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SloccLabel {
    Product,
    BiseparableA,
    BiseparableB,
    BiseparableC,
    WClass,
    GhzClass,
}

impl fmt::Display for SloccLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SloccLabel::Product => "ProductABC",
            SloccLabel::BiseparableA => "BiseparableA_BC",
            SloccLabel::BiseparableB => "BiseparableB_AC",
            SloccLabel::BiseparableC => "BiseparableC_AB",
            SloccLabel::WClass => "WClass",
            SloccLabel::GhzClass => "GHZClass",
        })
    }
}

/// Case analysis on `(a·e, Δ, ⟨χ₁|χ₂⟩ − β/α)` with everything compared to
/// `tol`.
///
/// The amplitude moduli come from the pole-free expressions, so this works
/// on the whole unit-Bloch parameter space; where `Δ` itself is undefined
/// (a Bloch vector at the south pole) the `Δ = 0` test falls back to the
/// equivalent condition `r⃗ = s⃗`.
pub fn classify_paper(params: &FamilyParams, tol: f64) -> Result<PaperLabel> {
    check_tangle_preconditions(params)?;
    let (abs_a, abs_e) = amplitude_moduli(params);
    if abs_a * abs_e < tol {
        return Ok(PaperLabel::Biseparable);
    }
    let delta_zero = match delta(params.r, params.s) {
        Ok(d) => d < tol,
        // projections coincide exactly when the unit vectors do
        Err(Error::DeltaAtPole) => {
            let diff = [
                params.r[0] - params.s[0],
                params.r[1] - params.s[1],
                params.r[2] - params.s[2],
            ];
            norm3(diff) < tol
        }
        Err(e) => return Err(e),
    };
    if delta_zero {
        return Ok(PaperLabel::WType);
    }
    // a·e != 0 guarantees alpha > 0 here
    let ratio = params.beta() / params.alpha;
    if (params.overlap() - ratio).abs() >= tol {
        Ok(PaperLabel::GhzType)
    } else {
        Ok(PaperLabel::ZeroTangleUnclassified)
    }
}

/// Outcome of the rank-based SLOCC check.
#[derive(Clone, Copy, Debug)]
pub struct SloccClassification {
    pub label: SloccLabel,
    /// Largest eigenvalue of each single-qubit marginal, in `(A, B, C)`
    /// order; 1 means that qubit factors out.
    pub marginal_purity: [f64; 3],
    /// Set when some marginal purity landed in `[1 − 10·tol, 1 − tol)`,
    /// too close to the cut to trust the label.
    pub borderline: bool,
    pub tau3: f64,
}

/// Classify a three-qubit pure state by counting pure single-qubit
/// marginals, breaking the zero-pure tie with the tangle: three pure →
/// product, one pure → biseparable across that qubit, none pure → GHZ class
/// if `τ₃ > tol`, W class otherwise.
pub fn classify_slocc(psi: &StateVector, tol: f64) -> Result<SloccClassification> {
    if psi.dim() != 8 {
        return Err(Error::DimMismatch { expected: 8, got: psi.dim() });
    }
    let (tau3, _) = three_tangle_general(psi)?;
    let rho = psi.outer();
    let mut marginal_purity = [0.0; 3];
    for (k, purity) in marginal_purity.iter_mut().enumerate() {
        let reduced = partial_trace(&rho, &[k], &[2, 2, 2])?;
        *purity = eig_herm2(&reduced)?[0].0;
    }
    let pure: Vec<bool> = marginal_purity.iter().map(|&p| p > 1.0 - tol).collect();
    let borderline = marginal_purity
        .iter()
        .any(|&p| p >= 1.0 - 10.0 * tol && p <= 1.0 - tol);
    let count = pure.iter().filter(|&&b| b).count();
    let label = match count {
        // two pure marginals force the third within noise of pure
        2 | 3 => SloccLabel::Product,
        1 if pure[0] => SloccLabel::BiseparableA,
        1 if pure[1] => SloccLabel::BiseparableB,
        1 => SloccLabel::BiseparableC,
        _ if tau3 > tol => SloccLabel::GhzClass,
        _ => SloccLabel::WClass,
    };
    Ok(SloccClassification { label, marginal_purity, borderline, tau3 })
}

/// Everything the tangle stage produces for one family point.
#[derive(Clone, Debug)]
pub struct TangleReport {
    /// Purified-state amplitudes in `(a…h)` order.
    pub amplitudes: [C64; 8],
    pub d: [C64; 3],
    pub k: [C64; 3],
    /// `None` when a Bloch vector sits at the south pole.
    pub delta: Option<f64>,
    pub overlap: f64,
    pub tau3_general: f64,
    /// `None` outside the closed form's regular region.
    pub tau3_closed: Option<f64>,
    pub paper_label: PaperLabel,
    pub slocc_label: SloccLabel,
    pub slocc_borderline: bool,
}

/// Purify a family point and run the full tangle/classification stage.
pub fn tangle_report(params: &FamilyParams, tol: f64) -> Result<TangleReport> {
    let state = purify(params)?;
    let amplitudes = state.branch_amplitudes();
    let (tau3_general, d) = three_tangle_general(&state.xi)?;
    let (_, k) = three_tangle_k(&amplitudes)?;
    let slocc = classify_slocc(&state.xi, tol)?;
    Ok(TangleReport {
        amplitudes,
        d,
        k,
        delta: delta(params.r, params.s).ok(),
        overlap: params.overlap(),
        tau3_general,
        tau3_closed: three_tangle_closed(params).ok(),
        paper_label: classify_paper(params, tol)?,
        slocc_label: slocc.label,
        slocc_borderline: slocc.borderline,
    })
}

/// `λ|000⟩ + μ|111⟩` (not renormalized; pass `λ² + μ² = 1`).
pub fn ghz_state(lambda: f64, mu: f64) -> StateVector {
    let mut amps = [C64::new(0.0, 0.0); 8];
    amps[0] = C64::new(lambda, 0.0);
    amps[7] = C64::new(mu, 0.0);
    StateVector::from_slice(&amps).expect("dim 8")
}

/// `γ|100⟩ + δ|010⟩ + ν|001⟩` (pass `γ² + δ² + ν² = 1`).
pub fn w_state(gamma: f64, delta: f64, nu: f64) -> StateVector {
    let mut amps = [C64::new(0.0, 0.0); 8];
    amps[4] = C64::new(gamma, 0.0);
    amps[2] = C64::new(delta, 0.0);
    amps[1] = C64::new(nu, 0.0);
    StateVector::from_slice(&amps).expect("dim 8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cxmat::tensor_vec;
    use crate::sample;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn ghz_anchors() {
        let (tau, _) = three_tangle_general(&ghz_state(SQRT_HALF, SQRT_HALF)).unwrap();
        assert!((tau - 1.0).abs() < 1e-12);
        for k in 1..20 {
            let lambda = (k as f64 / 20.0).sqrt();
            let mu = (1.0 - lambda * lambda).sqrt();
            let (tau, _) = three_tangle_general(&ghz_state(lambda, mu)).unwrap();
            assert!((tau - 2.0 * lambda * mu).abs() < 1e-12, "lambda {lambda}");
        }
    }

    #[test]
    fn w_states_have_zero_tangle() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for _ in 0..50 {
            let g: f64 = rng.gen_range(-1.0..1.0);
            let d: f64 = rng.gen_range(-1.0..1.0);
            let n: f64 = rng.gen_range(-1.0..1.0);
            let norm = (g * g + d * d + n * n).sqrt();
            if norm < 1e-3 {
                continue;
            }
            let (tau, _) = three_tangle_general(&w_state(g / norm, d / norm, n / norm)).unwrap();
            assert!(tau < 1e-12, "w tangle {tau:e}");
        }
    }

    #[test]
    fn product_states_have_zero_tangle() {
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        for _ in 0..50 {
            let a = sample::random_qubit_state(&mut rng);
            let b = sample::random_qubit_state(&mut rng);
            let c = sample::random_qubit_state(&mut rng);
            let psi = tensor_vec(&a, &tensor_vec(&b, &c).unwrap()).unwrap();
            let (tau, _) = three_tangle_general(&psi).unwrap();
            assert!(tau < 1e-10, "product tangle {tau:e}");
        }
    }

    #[test]
    fn biseparable_states_have_zero_tangle() {
        let mut rng = ChaCha8Rng::seed_from_u64(109);
        for _ in 0..50 {
            // entangled pair on (A, C), product qubit on B
            let pair = sample::random_state(&mut rng, 4);
            let b = sample::random_qubit_state(&mut rng);
            let mut amps = [C64::new(0.0, 0.0); 8];
            for ai in 0..2 {
                for bi in 0..2 {
                    for ci in 0..2 {
                        amps[ai * 4 + bi * 2 + ci] = pair.get(ai * 2 + ci) * b.get(bi);
                    }
                }
            }
            let psi = StateVector::from_slice(&amps).unwrap();
            let (tau, _) = three_tangle_general(&psi).unwrap();
            assert!(tau < 1e-10, "biseparable tangle {tau:e}");
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let mut amps = [C64::new(0.0, 0.0); 8];
        amps[0] = C64::new(2.0, 0.0);
        let psi = StateVector::from_slice(&amps).unwrap();
        assert!(matches!(three_tangle_general(&psi), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn k_form_anchors() {
        let mut amps = [C64::new(0.0, 0.0); 8];
        // e = d = 1/sqrt(2): the |000>/|111> pair
        amps[4] = C64::new(SQRT_HALF, 0.0);
        amps[3] = C64::new(SQRT_HALF, 0.0);
        let (tau, k) = three_tangle_k(&amps).unwrap();
        assert!((tau - 1.0).abs() < 1e-12);
        assert!((k[0].re - 0.25).abs() < 1e-15);
        // product |000>: e = 1
        let mut amps = [C64::new(0.0, 0.0); 8];
        amps[4] = C64::new(1.0, 0.0);
        let (tau, _) = three_tangle_k(&amps).unwrap();
        assert_eq!(tau, 0.0);
    }

    #[test]
    fn k_form_matches_general_after_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        for _ in 0..1000 {
            let psi = sample::random_state(&mut rng, 8);
            let (tau_g, _) = three_tangle_general(&psi).unwrap();
            let reordered = [
                psi.get(1),
                psi.get(3),
                psi.get(5),
                psi.get(7),
                psi.get(0),
                psi.get(2),
                psi.get(4),
                psi.get(6),
            ];
            let (tau_k, _) = three_tangle_k(&reordered).unwrap();
            assert!((tau_g - tau_k).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_rotation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(127);
        for _ in 0..50 {
            let psi = sample::random_state(&mut rng, 8);
            let (tau, _) = three_tangle_general(&psi).unwrap();
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let qubit = rng.gen_range(0..3usize);
            let bit = 1usize << (2 - qubit);
            let phase = C64::from_polar(1.0, theta);
            let rotated: Vec<C64> = (0..8)
                .map(|k| {
                    if k & bit != 0 {
                        psi.get(k) * phase
                    } else {
                        psi.get(k)
                    }
                })
                .collect();
            let rotated = StateVector::from_slice(&rotated).unwrap();
            let (tau_rot, _) = three_tangle_general(&rotated).unwrap();
            assert!((tau - tau_rot).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_basics() {
        assert_eq!(delta([0.3, 0.4, 0.5], [0.3, 0.4, 0.5]).unwrap(), 0.0);
        let d = delta([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(131);
        for _ in 0..50 {
            let r = sample::random_unit_vec(&mut rng);
            let s = sample::random_unit_vec(&mut rng);
            if r[2] <= -0.999 || s[2] <= -0.999 {
                continue;
            }
            assert!((delta(r, s).unwrap() - delta(s, r).unwrap()).abs() < 1e-14);
        }
        assert!(matches!(delta([0.0, 0.0, -1.0], [1.0, 0.0, 0.0]), Err(Error::DeltaAtPole)));
    }

    #[test]
    fn closed_tangle_equal_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(137);
        for _ in 0..20 {
            let mut params = sample::random_regular_params(&mut rng, None);
            params.s = params.r;
            assert_eq!(three_tangle_closed(&params).unwrap(), 0.0);
        }
    }

    #[test]
    fn closed_tangle_balanced_alpha_vanishes() {
        let params =
            FamilyParams::new(0.3, SQRT_HALF, 2, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        let tau = three_tangle_closed(&params).unwrap();
        assert!(tau < 1e-15, "closed tangle {tau:e}");
        let state = purify(&params).unwrap();
        let (tau_g, _) = three_tangle_general(&state.xi).unwrap();
        assert!(tau_g < 1e-9, "general tangle {tau_g:e}");
    }

    #[test]
    fn closed_tangle_frozen_point() {
        let params = FamilyParams::new(0.3, 0.6, 2, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        let closed = three_tangle_closed(&params).unwrap();
        assert!((closed - 0.1814607395554202).abs() < 1e-12, "closed {closed}");
        let (general, _) = three_tangle_general(&purify(&params).unwrap().xi).unwrap();
        assert!((closed - general).abs() < 1e-9);
    }

    #[test]
    fn closed_tangle_matches_general_on_regular_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(139);
        for _ in 0..200 {
            let params = sample::random_regular_params(&mut rng, None);
            let closed = three_tangle_closed(&params).unwrap();
            let (general, _) = three_tangle_general(&purify(&params).unwrap().xi).unwrap();
            assert!(
                (closed - general).abs() < 1e-9,
                "closed {closed} general {general} at {params:?}"
            );
        }
    }

    #[test]
    fn paper_cases() {
        // equal Bloch vectors, both branches alive: W-type
        let r = [0.6, 0.0, 0.8];
        let params = FamilyParams::new(0.4, 0.7, 2, r, r).unwrap();
        assert_eq!(classify_paper(&params, 1e-9).unwrap(), PaperLabel::WType);
        // the frozen GHZ-type point
        let params = FamilyParams::new(0.3, 0.6, 2, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(classify_paper(&params, 1e-9).unwrap(), PaperLabel::GhzType);
        // balanced alpha with even parity: the uncovered zero-tangle cell
        let params =
            FamilyParams::new(0.3, SQRT_HALF, 2, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            classify_paper(&params, 1e-9).unwrap(),
            PaperLabel::ZeroTangleUnclassified
        );
        // alpha = 0 kills a, alpha = 1 kills e
        for alpha in [0.0, 1.0] {
            let params =
                FamilyParams::new(0.3, alpha, 2, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
            assert_eq!(classify_paper(&params, 1e-9).unwrap(), PaperLabel::Biseparable);
        }
        // odd parity with distinct vectors: GHZ-type (overlap 0 != beta/alpha)
        let params = FamilyParams::new(0.3, 0.6, 1, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(classify_paper(&params, 1e-9).unwrap(), PaperLabel::GhzType);
    }

    #[test]
    fn slocc_anchors() {
        let product = tensor_vec(
            &StateVector::basis(2, 0).unwrap(),
            &tensor_vec(&StateVector::basis(2, 0).unwrap(), &StateVector::basis(2, 0).unwrap())
                .unwrap(),
        )
        .unwrap();
        assert_eq!(classify_slocc(&product, 1e-9).unwrap().label, SloccLabel::Product);

        // Bell pair on (A, C) with B factored out
        let mut amps = [C64::new(0.0, 0.0); 8];
        amps[0b000] = C64::new(SQRT_HALF, 0.0);
        amps[0b101] = C64::new(SQRT_HALF, 0.0);
        let psi = StateVector::from_slice(&amps).unwrap();
        let out = classify_slocc(&psi, 1e-9).unwrap();
        assert_eq!(out.label, SloccLabel::BiseparableB);
        assert!(out.marginal_purity[1] > 1.0 - 1e-12);

        let w = w_state(1.0 / 3.0_f64.sqrt(), 1.0 / 3.0_f64.sqrt(), 1.0 / 3.0_f64.sqrt());
        assert_eq!(classify_slocc(&w, 1e-9).unwrap().label, SloccLabel::WClass);

        let ghz = ghz_state(SQRT_HALF, SQRT_HALF);
        assert_eq!(classify_slocc(&ghz, 1e-9).unwrap().label, SloccLabel::GhzClass);
    }

    #[test]
    fn equal_branches_factor_out_qubit_b() {
        let mut rng = ChaCha8Rng::seed_from_u64(149);
        for _ in 0..50 {
            let mut params = sample::random_pure_branch_params(&mut rng, None);
            params.s = params.r;
            let state = purify(&params).unwrap();
            let (tau, _) = three_tangle_general(&state.xi).unwrap();
            assert!(tau < 1e-12, "tangle {tau:e}");
            let out = classify_slocc(&state.xi, 1e-9).unwrap();
            assert!(
                out.marginal_purity[1] > 1.0 - 1e-10,
                "B purity {}",
                out.marginal_purity[1]
            );
        }
    }

    #[test]
    fn south_pole_disagreement_is_visible() {
        // at r = -z the closed-form amplitude a vanishes, so the case
        // analysis says biseparable, while the actual purified state still
        // carries tangle; both labels are reported and they disagree.
        let params = FamilyParams::new(0.3, 0.6, 2, [0.0, 0.0, -1.0], [1.0, 0.0, 0.0]).unwrap();
        let report = tangle_report(&params, 1e-9).unwrap();
        assert_eq!(report.paper_label, PaperLabel::Biseparable);
        assert_eq!(report.slocc_label, SloccLabel::GhzClass);
        assert!((report.tau3_general - 0.1814607395554202).abs() < 1e-12);
        assert!(report.delta.is_none());
        assert!(report.tau3_closed.is_none());
    }

    #[test]
    fn report_is_internally_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(151);
        for _ in 0..50 {
            let params = sample::random_regular_params(&mut rng, None);
            let report = tangle_report(&params, 1e-9).unwrap();
            if let Some(closed) = report.tau3_closed {
                assert!((closed - report.tau3_general).abs() < 1e-9);
            }
            assert!(report.tau3_general <= 1.0 + 1e-10);
            if report.paper_label == PaperLabel::GhzType {
                assert_eq!(report.slocc_label, SloccLabel::GhzClass);
                assert!(report.tau3_general > 1e-9);
            }
        }
    }
}
