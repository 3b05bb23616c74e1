//! Deterministic problem generators.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, StateVector, SymMatrix};
use crate::problem::{Forcing, Manufactured, ScalarTrig, SplitProblem, TrigForcing, TrigTerm};

/// Time profile `g(t)` of the manufactured solution `g(t) w` used by
/// [`gen_pseudo_parabolic_2d`]; `g(0) = 1`.
pub const PSEUDO_PARABOLIC_PROFILE: (f64, f64, f64) = (2.0, 1.0, 0.5);

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-1.0..1.0)
}

/// `Qᵀ Λ Q` with `Q` a product of `m` seeded Householder reflectors and the
/// eigenvalues log-uniform in `[1, condition]` (both ends attained when `m ≥ 2`).
pub fn random_spd(rng: &mut ChaCha8Rng, m: usize, condition: f64) -> SymMatrix {
    let top = condition.ln();
    let eigs: Vec<f64> = (0..m)
        .map(|k| match k {
            0 => 1.0,
            k if k == m - 1 => condition,
            _ => (rng.gen::<f64>() * top).exp(),
        })
        .collect();
    synthesize(rng, &eigs)
}

fn synthesize(rng: &mut ChaCha8Rng, eigs: &[f64]) -> SymMatrix {
    let m = eigs.len();
    // rows of Q, starting from the identity and reflected in place
    let mut q = DenseMatrix::identity(m);
    for _ in 0..m {
        let mut v: Vec<f64> = (0..m).map(|_| unit(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= n);
        for i in 0..m {
            let d: f64 = (0..m).map(|j| q[(i, j)] * v[j]).sum();
            for j in 0..m {
                q[(i, j)] -= 2.0 * d * v[j];
            }
        }
    }
    let dense = DenseMatrix::from_fn(m, m, |i, j| {
        (0..m).map(|k| q[(k, i)] * eigs[k] * q[(k, j)]).sum()
    });
    SymMatrix::from_dense(dense).expect("spectral synthesis is symmetric")
}

/// Random split problem: `A` and every `B_α` synthesized with spectra in
/// `[1, condition]`, a two-term trigonometric forcing, `u0` uniform in
/// `[-1, 1]` and horizon 1. Bit-identical for equal arguments.
pub fn gen_random_split(seed: u64, m: usize, p: usize, condition: f64) -> Result<SplitProblem> {
    if m == 0 || p == 0 {
        return Err(Error::InvalidParameter("m and p must be positive".into()));
    }
    if !(condition >= 1.0 && condition.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "condition target must be ≥ 1, got {condition}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_spd(&mut rng, m, condition);
    let parts: Vec<SymMatrix> = (0..p).map(|_| random_spd(&mut rng, m, condition)).collect();
    let rand_vec = |rng: &mut ChaCha8Rng| StateVector::from_fn(m, |_| unit(rng));
    let forcing = TrigForcing {
        constant: rand_vec(&mut rng),
        terms: (0..2)
            .map(|_| TrigTerm {
                omega: rng.gen_range(0.5..3.0),
                cos: rand_vec(&mut rng),
                sin: rand_vec(&mut rng),
            })
            .collect(),
    };
    let u0 = rand_vec(&mut rng);
    SplitProblem::new(a, parts, Forcing::Trig(forcing), u0, 1.0)
}

/// Three-point second difference `(2u_i − u_{i−1} − u_{i+1}) / h²` on `n`
/// interior nodes of the unit interval with Dirichlet ends, `h = 1/(n+1)`.
pub fn second_difference(n: usize) -> DenseMatrix {
    let h = 1.0 / (n + 1) as f64;
    let s = 1.0 / (h * h);
    DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * s
        } else if i.abs_diff(j) == 1 {
            -s
        } else {
            0.0
        }
    })
}

/// Pseudo-parabolic problem on the unit square with directional splitting:
/// `B_α = ½ I + κ L_α`, `A = L_1 + L_2 + c I`, node `(i, j)` stored at
/// `i + nx·j`. The forcing manufactures `u(t) = g(t) w` where `w` is the
/// sine bump `sin πx sin πy + ½ sin 2πx sin πy` and `g` is
/// [`PSEUDO_PARABOLIC_PROFILE`]; `u0 = w`.
pub fn gen_pseudo_parabolic_2d(nx: usize, ny: usize, kappa: f64, c: f64) -> Result<SplitProblem> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid must be at least 2x2, got {nx}x{ny}"
        )));
    }
    if !(kappa >= 0.0 && kappa.is_finite() && c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(
            "kappa and c must be finite and non-negative".into(),
        ));
    }
    let m = nx * ny;
    let lx = second_difference(nx);
    let ly = second_difference(ny);
    let l1 = DenseMatrix::from_fn(m, m, |r, s| {
        let (i, j, k, l) = (r % nx, r / nx, s % nx, s / nx);
        if j == l {
            lx[(i, k)]
        } else {
            0.0
        }
    });
    let l2 = DenseMatrix::from_fn(m, m, |r, s| {
        let (i, j, k, l) = (r % nx, r / nx, s % nx, s / nx);
        if i == k {
            ly[(j, l)]
        } else {
            0.0
        }
    });
    let eye = DenseMatrix::identity(m);
    let b1 = SymMatrix::from_dense(eye.lincomb(0.5, &l1, kappa)?)?;
    let b2 = SymMatrix::from_dense(eye.lincomb(0.5, &l2, kappa)?)?;
    let a = SymMatrix::from_dense(l1.lincomb(1.0, &l2, 1.0)?.lincomb(1.0, &eye, c)?)?;
    let b = b1.lincomb(1.0, &b2, 1.0)?;

    let hx = 1.0 / (nx + 1) as f64;
    let hy = 1.0 / (ny + 1) as f64;
    let w = StateVector::from_fn(m, |r| {
        let x = (r % nx + 1) as f64 * hx;
        let y = (r / nx + 1) as f64 * hy;
        (PI * x).sin() * (PI * y).sin() + 0.5 * (2.0 * PI * x).sin() * (PI * y).sin()
    });
    let (omega, ca, sa) = PSEUDO_PARABOLIC_PROFILE;
    let profile = ScalarTrig {
        constant: 0.0,
        terms: vec![(omega, ca, sa)],
    };
    let u0 = w.scaled(profile.eval(0.0));
    let forcing = Forcing::Manufactured(Manufactured::new(profile, w, &a, &b)?);
    SplitProblem::new(a, vec![b1, b2], forcing, u0, 1.0)
}
