//! Normalized geometric discord of the family states.
//!
//! Two independent routes are kept side by side:
//!
//! * the closed form `D_G = ½(‖x⃗‖² + ‖T‖² − λ_max(x⃗x⃗ᵀ + TTᵀ))`, evaluated
//!   through the `E/F/G` block entries of `x⃗x⃗ᵀ + TTᵀ` (the matrix collapses
//!   to a 2×2 block because row 2 of `T` vanishes on the family), and
//! * a brute-force upper bound that sweeps projective measurements
//!   `{Π_e, Π_{−e}}` on party A over a sphere grid, dephases the state and
//!   minimizes the squared Hilbert–Schmidt distance.
//!
//! The sweep never touches the Bloch machinery, so agreement between the two
//! is a real cross-check, not a tautology.

use rayon::prelude::*;

use crate::cxmat::{hs_norm_sq, qubit_density, tensor_mat, ComplexMatrix};
use crate::family::FamilyParams;
use crate::{Error, Result};

/// Everything the closed form produces on the way to the discord value.
#[derive(Clone, Copy, Debug)]
pub struct DiscordBreakdown {
    pub x_norm_sq: f64,
    pub t_norm_sq: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub lambda_max: f64,
    pub discord: f64,
}

/// Shared subexpressions of the closed forms: with `u_i = p·r_i − (1−p)·s_i`,
/// returns `(Σu_i², Σs_i², Σs_i·u_i)`.
fn sums(params: &FamilyParams) -> (f64, f64, f64) {
    let q = 1.0 - params.p;
    let mut uu = 0.0;
    let mut ss = 0.0;
    let mut su = 0.0;
    for i in 0..3 {
        let u = params.p * params.r[i] - q * params.s[i];
        uu += u * u;
        ss += params.s[i] * params.s[i];
        su += params.s[i] * u;
    }
    (uu, ss, su)
}

/// The `(1,1)`, `(1,3)` and `(3,3)` entries of `x⃗x⃗ᵀ + TTᵀ` in closed form,
/// with the branch overlap substituted for `⟨χ₁|χ₂⟩`.
pub fn efg(params: &FamilyParams) -> (f64, f64, f64) {
    let (uu, ss, su) = sums(params);
    let q = 1.0 - params.p;
    let w = 2.0 * params.p - 1.0;
    let alpha = params.alpha;
    let beta = params.beta();
    let c = params.overlap();
    let a2b2 = alpha * alpha - beta * beta;

    let e = 4.0 * alpha * alpha * beta * beta * (uu + w * w)
        + 4.0 * c * c * q * q * (ss + 1.0)
        + 8.0 * c * q * alpha * beta * (su + w);
    let f = 2.0 * alpha * beta * a2b2 * (uu + w * w) + 2.0 * a2b2 * c * q * (su + w);
    let g = a2b2 * a2b2 * (uu + w * w);
    (e, f, g)
}

/// `‖x⃗‖²` from the closed expression in the overlap.
pub fn x_norm_sq_closed(params: &FamilyParams) -> f64 {
    let q = 1.0 - params.p;
    let w = 2.0 * params.p - 1.0;
    let c = params.overlap();
    4.0 * q * q * c * c + 8.0 * params.alpha * params.beta() * w * q * c + w * w
}

/// `‖T‖²` from the closed expression in the overlap.
pub fn t_norm_sq_closed(params: &FamilyParams) -> f64 {
    let (uu, ss, su) = sums(params);
    let q = 1.0 - params.p;
    let c = params.overlap();
    uu + 4.0 * c * c * q * q * ss + 8.0 * c * q * params.alpha * params.beta() * su
}

/// Largest eigenvalue of the block matrix `[[E, 0, F], [0, 0, 0], [F, 0, G]]`:
/// `½((E+G) + √((E−G)² + 4F²))`.
pub fn lambda_max_closed(e: f64, f: f64, g: f64) -> f64 {
    0.5 * ((e + g) + ((e - g) * (e - g) + 4.0 * f * f).sqrt())
}

/// Closed-form normalized geometric discord with every intermediate exposed.
///
/// Values inside `[−1e-10, 0)` are numerical noise and clamp to zero; more
/// negative results mean the formulas were applied outside the family and
/// are reported as an error.
pub fn geometric_discord_closed(params: &FamilyParams) -> Result<DiscordBreakdown> {
    let (e, f, g) = efg(params);
    let x_norm_sq = x_norm_sq_closed(params);
    let t_norm_sq = t_norm_sq_closed(params);
    let lambda_max = lambda_max_closed(e, f, g);
    let raw = 0.5 * (x_norm_sq + t_norm_sq - lambda_max);
    let discord = if raw >= 0.0 {
        raw
    } else if raw >= -1e-10 {
        0.0
    } else {
        return Err(Error::NegativeDiscord(raw));
    };
    Ok(DiscordBreakdown { x_norm_sq, t_norm_sq, e, f, g, lambda_max, discord })
}

/// `true` when the closed-form discord falls below `tol`.
pub fn is_classical(params: &FamilyParams, tol: f64) -> Result<bool> {
    Ok(geometric_discord_closed(params)?.discord < tol)
}

const GOLD: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of `f` on `[lo, hi]`; returns the best point
/// and value seen over `iters` shrink steps.
fn golden_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - GOLD * (b - a);
    let mut d = a + GOLD * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let (mut best_x, mut best_f) = if fc <= fd { (c, fc) } else { (d, fd) };
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLD * (b - a);
            fc = f(c);
            if fc < best_f {
                best_f = fc;
                best_x = c;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLD * (b - a);
            fd = f(d);
            if fd < best_f {
                best_f = fd;
                best_x = d;
            }
        }
    }
    (best_x, best_f)
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Orthonormal tangent basis at a unit vector.
fn tangent_basis(e: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let seed = if e[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let u = normalize3(cross3(seed, e));
    (u, cross3(e, u))
}

/// Brute-force normalized geometric discord: `2·min` over rank-1 projective
/// measurements on party A of `‖ρ − Σ_k (Π_k⊗I) ρ (Π_k⊗I)‖²`.
///
/// The measurement axis sweeps a `grid × grid` parametrization uniform in
/// `(cosθ, φ)`. The few best mutually separated grid directions are then
/// polished with three rounds of golden-section line searches in a local
/// tangent frame on the sphere (axis-aligned and diagonal, so neither the
/// parametrization poles nor rotated curvature can stall the descent), and
/// the smallest value seen anywhere is returned. Deterministic: no
/// randomness, and candidate ordering ties break on grid indices.
pub fn geometric_discord_oracle(rho: &ComplexMatrix, grid: usize) -> Result<f64> {
    if grid < 8 {
        return Err(Error::GridTooCoarse(grid));
    }
    rho.check_density(crate::HERM_TOL)?;
    let i2 = ComplexMatrix::identity(2)?;

    let eval = |e: [f64; 3]| -> f64 {
        // ½(I + e·σ) is exactly the rank-1 projector onto the +e eigenstate
        let proj_plus = qubit_density(e);
        let proj_minus = qubit_density([-e[0], -e[1], -e[2]]);
        let mut dephased = ComplexMatrix::zeros(4).expect("dim 4");
        for proj in [&proj_plus, &proj_minus] {
            let big = tensor_mat(proj, &i2).expect("4x4");
            let term = big.mul(rho).expect("dims").mul(&big).expect("dims");
            dephased = dephased.add(&term).expect("dims");
        }
        hs_norm_sq(&rho.sub(&dephased).expect("dims"))
    };
    let dir_at = |i: usize, j: usize| -> [f64; 3] {
        let ct = -1.0 + 2.0 * i as f64 / (grid - 1) as f64;
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        let ph = std::f64::consts::TAU * j as f64 / grid as f64;
        [st * ph.cos(), st * ph.sin(), ct]
    };

    let mut cells: Vec<(f64, usize, usize)> = (0..grid)
        .into_par_iter()
        .flat_map_iter(|i| (0..grid).map(move |j| (i, j)))
        .map(|(i, j)| (eval(dir_at(i, j)), i, j))
        .collect();
    cells.sort_by(|a, b| (a.0, a.1, a.2).partial_cmp(&(b.0, b.1, b.2)).expect("finite"));

    // refine the best cells, skipping ones too close to an already-chosen
    // candidate; this keeps near-degenerate competing minima honest
    let mut candidates: Vec<[f64; 3]> = Vec::new();
    for &(_, i, j) in cells.iter() {
        if candidates.len() >= 5 {
            break;
        }
        let e = dir_at(i, j);
        let separated = candidates.iter().all(|c| {
            let dot = (c[0] * e[0] + c[1] * e[1] + c[2] * e[2]).abs();
            dot < 0.98 // measurement axes ±e are the same measurement
        });
        if separated {
            candidates.push(e);
        }
    }

    let mut best_f = cells[0].0;
    // largest possible distance from a grid point to the in-cell optimum:
    // polar rows are arccos(1 - 2/(grid-1)) ~ 2/sqrt(grid-1) radians tall
    let base_radius = 2.0 / ((grid - 1) as f64).sqrt() + std::f64::consts::TAU / grid as f64;
    const ITERS: usize = 40;
    for start in candidates {
        let mut center = start;
        let mut radius = base_radius;
        for _round in 0..3 {
            let (u, v) = tangent_basis(center);
            for (cu, cv) in [(1.0f64, 0.0f64), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0)] {
                let norm = (cu * cu + cv * cv).sqrt();
                let dir = [
                    (cu * u[0] + cv * v[0]) / norm,
                    (cu * u[1] + cv * v[1]) / norm,
                    (cu * u[2] + cv * v[2]) / norm,
                ];
                let line = |t: f64| {
                    eval(normalize3([
                        center[0] + t * dir[0],
                        center[1] + t * dir[1],
                        center[2] + t * dir[2],
                    ]))
                };
                let (t, ft) = golden_min(line, -radius, radius, ITERS);
                if ft < best_f {
                    best_f = ft;
                    center = normalize3([
                        center[0] + t * dir[0],
                        center[1] + t * dir[1],
                        center[2] + t * dir[2],
                    ]);
                }
            }
            radius *= 0.25;
        }
    }
    Ok(2.0 * best_f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cxmat::{max_eig_sym3, StateVector};
    use crate::family::{bloch_form_closed, build_sigma};
    use crate::sample;
    use num_complex::Complex64 as C64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn efg_degenerate_even_mixture() {
        // n odd, p = 1/2, r = s: every E contribution dies
        let r = [0.3, -0.2, 0.5];
        let params = FamilyParams::new(0.5, 0.7, 1, r, r).unwrap();
        let (e, f, g) = efg(&params);
        assert!(e.abs() < 1e-15 && f.abs() < 1e-15 && g.abs() < 1e-15);
    }

    #[test]
    fn efg_alpha_zero() {
        let params = FamilyParams::new(0.4, 0.0, 2, [0.1, 0.2, 0.3], [0.5, 0.0, -0.1]).unwrap();
        let (e, f, _g) = efg(&params);
        assert_eq!(e, 0.0);
        assert_eq!(f, 0.0);
    }

    #[test]
    fn efg_matches_assembled_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..200 {
            let params = sample::random_params(&mut rng, None);
            let m = bloch_form_closed(&params).xxt_plus_ttt();
            let (e, f, g) = efg(&params);
            assert!((m[0][0] - e).abs() < 1e-12, "E: {} vs {e}", m[0][0]);
            assert!((m[0][2] - f).abs() < 1e-12, "F: {} vs {f}", m[0][2]);
            assert!((m[2][2] - g).abs() < 1e-12, "G: {} vs {g}", m[2][2]);
            // the rest of the matrix is the zero row/column
            for k in 0..3 {
                assert!(m[1][k].abs() < 1e-14 && m[k][1].abs() < 1e-14);
            }
        }
    }

    #[test]
    fn lambda_max_trivial_points() {
        assert_eq!(lambda_max_closed(1.0, 0.0, 0.0), 1.0);
        assert!((lambda_max_closed(1.0, 1.0, 1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_max_matches_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..200 {
            let (e, f, g) = sample::random_efg(&mut rng);
            let s = [[e, 0.0, f], [0.0, 0.0, 0.0], [f, 0.0, g]];
            let closed = lambda_max_closed(e, f, g).max(0.0);
            assert!((max_eig_sym3(&s) - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn odd_parity_is_classical() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..200 {
            let parity = rng.gen_range(0..2) * 2 + 1;
            let params = sample::random_params(&mut rng, Some(parity));
            let b = geometric_discord_closed(&params).unwrap();
            assert!(b.discord.abs() < 1e-12, "discord {}", b.discord);
            assert!(is_classical(&params, 1e-9).unwrap());
        }
    }

    #[test]
    fn equal_branches_give_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..50 {
            let mut params = sample::random_params(&mut rng, Some(2));
            params.s = params.r;
            let b = geometric_discord_closed(&params).unwrap();
            assert!(b.discord.abs() < 1e-12);
        }
    }

    #[test]
    fn branch_relabeling_invariance() {
        // for even parity, swapping which branch is called 1 or 2 together
        // with p <-> 1-p and alpha <-> beta produces the identical state,
        // so every discord quantity must match
        let mut rng = ChaCha8Rng::seed_from_u64(157);
        for _ in 0..100 {
            let params = sample::random_params(&mut rng, Some(2));
            let swapped = FamilyParams::new(
                1.0 - params.p,
                params.beta(),
                params.n,
                params.s,
                params.r,
            )
            .unwrap();
            let sigma = build_sigma(&params).unwrap();
            let sigma_swapped = build_sigma(&swapped).unwrap();
            assert!(hs_norm_sq(&sigma.sub(&sigma_swapped).unwrap()) < 1e-28);
            let a = geometric_discord_closed(&params).unwrap().discord;
            let b = geometric_discord_closed(&swapped).unwrap().discord;
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn trace_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..200 {
            let params = sample::random_params(&mut rng, None);
            let b = geometric_discord_closed(&params).unwrap();
            assert!((b.e + b.g - (b.x_norm_sq + b.t_norm_sq)).abs() < 1e-10);
            assert!(b.lambda_max <= b.e + b.g + 1e-10);
        }
    }

    #[test]
    fn frozen_point_values() {
        // independently computed with a high-precision reference sweep
        let params = FamilyParams::new(0.3, 0.6, 2, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        let b = geometric_discord_closed(&params).unwrap();
        assert!((b.discord - 0.012844363256691249).abs() < 1e-14);
        assert!((b.e - 1.456128).abs() < 1e-12);
        assert!((b.f - 0.21504).abs() < 1e-12);
        assert!((b.g - 0.058016).abs() < 1e-12);
        assert!((b.x_norm_sq - 0.934144).abs() < 1e-12);
        assert!((b.t_norm_sq - 0.58).abs() < 1e-12);

        let params = FamilyParams::new(0.5, 0.6, 2, [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]).unwrap();
        let b = geometric_discord_closed(&params).unwrap();
        assert!((b.discord - 0.0392).abs() < 1e-13);
        assert!(!is_classical(&params, 1e-9).unwrap());
    }

    #[test]
    fn classical_corner_cases() {
        let params = FamilyParams::new(0.4, 0.3, 3, [0.2, 0.1, 0.5], [0.0, 0.9, 0.0]).unwrap();
        assert!(is_classical(&params, 1e-9).unwrap());
        let params = FamilyParams::new(0.4, 0.0, 2, [0.2, 0.1, 0.5], [0.0, 0.9, 0.0]).unwrap();
        assert!(is_classical(&params, 1e-9).unwrap());
    }

    #[test]
    fn oracle_rejects_coarse_grid() {
        let params = FamilyParams::new(0.3, 0.6, 2, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        let rho = build_sigma(&params).unwrap();
        assert!(matches!(geometric_discord_oracle(&rho, 7), Err(Error::GridTooCoarse(7))));
    }

    #[test]
    fn oracle_product_state_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let a = sample::random_qubit_density(&mut rng);
        let b = sample::random_qubit_density(&mut rng);
        let rho = tensor_mat(&a, &b).unwrap();
        assert!(geometric_discord_oracle(&rho, 16).unwrap() < 1e-8);
    }

    #[test]
    fn oracle_odd_parity_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let params = sample::random_params(&mut rng, Some(1));
        let rho = build_sigma(&params).unwrap();
        assert!(geometric_discord_oracle(&rho, 16).unwrap() < 1e-8);
    }

    #[test]
    fn oracle_bell_state_is_one() {
        let amp = 1.0 / 2.0_f64.sqrt();
        let bell = StateVector::from_slice(&[
            C64::new(amp, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(amp, 0.0),
        ])
        .unwrap();
        let d = geometric_discord_oracle(&bell.outer(), 16).unwrap();
        assert!((d - 1.0).abs() < 1e-6, "bell discord {d}");
    }

    #[test]
    fn oracle_refinement_is_monotone() {
        let params = FamilyParams::new(0.3, 0.6, 2, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        let rho = build_sigma(&params).unwrap();
        let mut prev = f64::INFINITY;
        for grid in [8, 16, 32, 64] {
            let d = geometric_discord_oracle(&rho, grid).unwrap();
            // minima over denser candidate sets, up to terminal-bracket noise
            assert!(d <= prev + 1e-15, "grid {grid}: {d} > {prev}");
            prev = d;
        }
    }

    #[test]
    fn oracle_matches_closed_form_at_frozen_point() {
        let params = FamilyParams::new(0.3, 0.6, 2, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        let rho = build_sigma(&params).unwrap();
        let oracle = geometric_discord_oracle(&rho, 32).unwrap();
        assert!((oracle - 0.012844363256691249).abs() < 5e-6);
    }
}
