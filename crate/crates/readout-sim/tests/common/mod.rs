//! Helpers shared by the integration suites.

use readout_sim::multimode::Block;

/// Largest entry of `S Omega S^T - Omega` for an interleaved-quadrature
/// symplectic candidate.
pub fn symplectic_residual<const N: usize>(s: [[f64; N]; N]) -> f64 {
    let omega = |i: usize, j: usize| -> f64 {
        if i % 2 == 0 && j == i + 1 {
            1.0
        } else if i % 2 == 1 && j + 1 == i {
            -1.0
        } else {
            0.0
        }
    };
    let mut worst = 0.0f64;
    for i in 0..N {
        for j in 0..N {
            let mut acc = 0.0;
            for k in 0..N {
                for l in 0..N {
                    acc += s[i][k] * omega(k, l) * s[j][l];
                }
            }
            worst = worst.max((acc - omega(i, j)).abs());
        }
    }
    worst
}

/// Smallest eigenvalue of `cov + (i/2) Omega` over one block; physical
/// states keep this non-negative up to rounding.
pub fn min_uncertainty_eigenvalue(block: &Block<f64>) -> f64 {
    let n = block.quads;
    let h = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        let omega = if i % 2 == 0 && j == i + 1 {
            0.5
        } else if i % 2 == 1 && j + 1 == i {
            -0.5
        } else {
            0.0
        };
        nalgebra::Complex::new(block.cov[i][j], omega)
    });
    nalgebra::linalg::SymmetricEigen::new(h)
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |m, &e| m.min(e))
}
