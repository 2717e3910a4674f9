//! Trace-distance discord by direct minimization over quantum-classical
//! states `ϖ = X₀ ⊗ |n><n| + X₁ ⊗ |n⊥><n⊥|` with `X_k ⪰ 0`, `Tr X₀ + Tr X₁ = 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::epsnet::fibonacci_sphere;
use crate::error::{Error, Result};
use crate::measures::optimize::{Minimum, NelderMead};
use crate::protocol::basis_unitary;
use crate::qcore::bloch::BlochVector;
use crate::qcore::density::DensityMatrix;
use crate::qcore::eigen::hermitian_eigen;
use crate::qcore::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscordOptions {
    pub seeds: usize,
    pub iterations: usize,
    pub restarts: usize,
    pub step: f64,
    /// Nelder-Mead re-launches from the incumbent before giving up.
    pub max_refinements: usize,
    pub seed: u64,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        Self {
            seeds: 64,
            iterations: 200,
            restarts: 5,
            step: 0.1,
            max_refinements: 5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscordEstimate {
    pub value: f64,
    pub basis: BlochVector,
    pub evaluations: usize,
}

/// Projects the four eigenvalues of `(X₀, X₁)` jointly onto the simplex.
fn project_blocks(blocks: [ComplexMatrix; 2]) -> [ComplexMatrix; 2] {
    let eigs = blocks
        .each_ref()
        .map(|b| hermitian_eigen(&b.hermitian_part()).expect("2x2 Hermitian"));
    let mut vals: Vec<f64> = eigs.iter().flat_map(|e| e.values.clone()).collect();
    project_simplex(&mut vals);
    [eigs[0].rebuild(&vals[..2]), eigs[1].rebuild(&vals[2..])]
}

/// Euclidean projection onto `{v ≥ 0, Σ v = 1}`.
pub(crate) fn project_simplex(v: &mut [f64]) {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            tau = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - tau).max(0.0);
    }
}

fn block(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = m[(2 * i + k, 2 * j + k)];
        }
    }
    out
}

fn embed(blocks: &[ComplexMatrix; 2]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for (k, b) in blocks.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                out[(2 * i + k, 2 * j + k)] = b[(i, j)];
            }
        }
    }
    out
}

fn random_blocks(rng: &mut ChaCha8Rng) -> [ComplexMatrix; 2] {
    let mut gen = || {
        let mut g = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                g[(i, j)] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        &g * &g.dagger()
    };
    let (a, b) = (gen(), gen());
    let tr = a.trace().re + b.trace().re;
    [a.scale_real(1.0 / tr), b.scale_real(1.0 / tr)]
}

/// `min ‖χ − ϖ‖₁` over quantum-classical `ϖ` in the fixed basis `±n`, by
/// projected subgradient descent. Restart 0 starts from the dephased state.
pub fn distance_in_basis(
    chi: &DensityMatrix,
    n: &BlochVector,
    opts: &DiscordOptions,
) -> Result<f64> {
    let w = ComplexMatrix::identity(2).kron(&basis_unitary(n));
    let rotated = chi.matrix().conjugate_by(&w).hermitian_part();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = f64::INFINITY;
    for restart in 0..opts.restarts.max(1) {
        let mut x = if restart == 0 {
            [block(&rotated, 0), block(&rotated, 1)]
        } else {
            random_blocks(&mut rng)
        };
        for t in 0..opts.iterations.max(1) {
            let delta = &rotated - &embed(&x);
            let eig = hermitian_eigen(&delta)?;
            let value: f64 = eig.values.iter().map(|v| v.abs()).sum();
            if value < best {
                best = value;
            }
            let sign = eig.reassemble(f64::signum);
            let eta = opts.step / ((t + 1) as f64).sqrt();
            let stepped = [0, 1].map(|k| &x[k] + &block(&sign, k).scale_real(eta));
            x = project_blocks(stepped);
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::NoConvergence("inner distance is not finite".into()))
    }
}

fn angles_of(n: &BlochVector) -> [f64; 2] {
    [n.z.clamp(-1.0, 1.0).acos(), n.y.atan2(n.x)]
}

fn vector_at(x: [f64; 2]) -> BlochVector {
    BlochVector::from_spherical(x[0], x[1])
}

/// Trace-distance discord with B measured.
///
/// Fibonacci seeds rank candidate bases, then Nelder-Mead refines the best
/// one over (polar, azimuth). Refinement is re-launched from its own
/// endpoint until it reports convergence; failing that after
/// `max_refinements` launches is an error.
pub fn discord_numeric_detailed(
    chi: &DensityMatrix,
    opts: &DiscordOptions,
) -> Result<DiscordEstimate> {
    if chi.dims() != [2, 2] {
        return Err(Error::InvalidState(format!(
            "discord needs two qubits, got dims {:?}",
            chi.dims()
        )));
    }
    let seeds = fibonacci_sphere(opts.seeds.max(1));
    let scored: Vec<(f64, BlochVector)> = seeds
        .par_iter()
        .map(|n| distance_in_basis(chi, n, opts).map(|d| (d, *n)))
        .collect::<Result<_>>()?;
    let (seed_value, seed_basis) = scored
        .iter()
        .copied()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one seed");

    let objective =
        |x: [f64; 2]| distance_in_basis(chi, &vector_at(x), opts).unwrap_or(f64::INFINITY);
    let mut evaluations = scored.len();
    let mut incumbent = Minimum {
        x: angles_of(&seed_basis),
        value: seed_value,
        evaluations: 0,
        converged: false,
    };
    let mut step = 0.25;
    for _ in 0..opts.max_refinements.max(1) {
        let nm = NelderMead {
            initial_step: step,
            ..NelderMead::default()
        };
        let m = nm.minimize(objective, incumbent.x);
        evaluations += m.evaluations;
        if m.value <= incumbent.value {
            incumbent = Minimum { evaluations, ..m };
        }
        if m.converged {
            incumbent.converged = true;
            break;
        }
        step /= 4.0;
    }
    if !incumbent.converged || !incumbent.value.is_finite() {
        return Err(Error::NoConvergence(format!(
            "discord refinement did not converge after {} launches (best {:.3e})",
            opts.max_refinements, incumbent.value
        )));
    }
    Ok(DiscordEstimate {
        value: incumbent.value,
        basis: vector_at(incumbent.x),
        evaluations,
    })
}

pub fn discord_numeric(chi: &DensityMatrix, seed: u64) -> Result<f64> {
    discord_numeric_detailed(
        chi,
        &DiscordOptions {
            seed,
            ..DiscordOptions::default()
        },
    )
    .map(|e| e.value)
}
