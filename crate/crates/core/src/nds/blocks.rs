//! Spectral description of the optimal measurement, one 2×2 block per `k`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::reduce::block_trace_norm;
use super::terms::{EnvSeries, EnvTerm};
use crate::signal::Occupation;

/// `π0|ψ_k0⟩⟨ψ_k0| - π1|ψ_k1⟩⟨ψ_k1|` in the Gram–Schmidt basis built from
/// `|ψ_k0⟩` and then `|ψ_k1⟩`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockMatrix2x2 {
    pub entries: [[C64; 2]; 2],
}

impl BlockMatrix2x2 {
    pub fn from_term(t: &EnvTerm, pi0: f64, pi1: f64) -> Self {
        let z = C64::new(0.0, 0.0);
        if t.p0 <= 0.0 {
            // Only |ψ_k1⟩ survives; it spans the second basis direction.
            return Self {
                entries: [[z, z], [z, C64::new(-pi1 * t.p1, 0.0)]],
            };
        }
        let i2 = t.cross.norm_sqr();
        let w = (t.p0 * t.p1 - i2).max(0.0).sqrt();
        let a = pi0 * t.p0 - pi1 * i2 / t.p0;
        let b = -pi1 * t.cross * (w / t.p0);
        let d = -pi1 * (t.p1 - i2 / t.p0).max(0.0);
        Self {
            entries: [[C64::new(a, 0.0), b], [b.conj(), C64::new(d, 0.0)]],
        }
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let e = &self.entries;
        e[0][0].im.abs() <= tol
            && e[1][1].im.abs() <= tol
            && (e[0][1] - e[1][0].conj()).norm() <= tol
    }

    /// Unit eigenvector of the Hermitian matrix for eigenvalue `lambda`.
    fn eigenvector(&self, lambda: f64) -> [C64; 2] {
        let [[a, b], [_, d]] = self.entries;
        let (a, d) = (a.re, d.re);
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        // Two candidate solutions of (A - λ)v = 0; keep the longer one.
        let u = [b, C64::new(lambda - a, 0.0)];
        let v = [C64::new(lambda - d, 0.0), b.conj()];
        let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
        let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if nu == 0.0 && nv == 0.0 {
            return if (lambda - a).abs() <= (lambda - d).abs() {
                [one, zero]
            } else {
                [zero, one]
            };
        }
        if nu >= nv {
            [u[0] / nu, u[1] / nu]
        } else {
            [v[0] / nv, v[1] / nv]
        }
    }
}

/// One block of the optimal projective measurement.
///
/// The eigenvector of the nonnegative eigenvalue belongs to the projector that
/// announces hypothesis 0; the other announces hypothesis 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBlock {
    pub k: Occupation,
    pub matrix: BlockMatrix2x2,
    /// `(λ+, λ-)` with `λ+ >= 0 >= λ-` whenever the block has rank two.
    pub eigenvalues: [f64; 2],
    pub eigenvectors: [[C64; 2]; 2],
}

impl MeasurementBlock {
    /// `λ+ - λ-`, the block's trace norm.
    pub fn trace_norm(&self) -> f64 {
        self.eigenvalues[0] - self.eigenvalues[1]
    }
}

impl EnvSeries {
    /// Block decomposition of `π0 ρ0 - π1 ρ1` with prior `π0` on hypothesis 0.
    pub fn measurement_blocks(&self, prior0: f64) -> Vec<MeasurementBlock> {
        let pi1 = 1.0 - prior0;
        self.terms()
            .iter()
            .map(|t| {
                let matrix = BlockMatrix2x2::from_term(t, prior0, pi1);
                let tr = prior0 * t.p0 - pi1 * t.p1;
                let norm = block_trace_norm(t, prior0, pi1);
                let eigenvalues = [0.5 * (tr + norm), 0.5 * (tr - norm)];
                let eigenvectors = [
                    matrix.eigenvector(eigenvalues[0]),
                    matrix.eigenvector(eigenvalues[1]),
                ];
                MeasurementBlock {
                    k: t.k.clone(),
                    matrix,
                    eigenvalues,
                    eigenvectors,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(p0: f64, p1: f64, i: f64) -> EnvTerm {
        EnvTerm {
            k: Occupation::new(vec![0]),
            p0,
            p1,
            cross: C64::new(i, 0.0),
        }
    }

    fn apply(m: &BlockMatrix2x2, v: &[C64; 2]) -> [C64; 2] {
        let e = &m.entries;
        [
            e[0][0] * v[0] + e[0][1] * v[1],
            e[1][0] * v[0] + e[1][1] * v[1],
        ]
    }

    #[test]
    fn eigenpairs_satisfy_the_eigen_equation() {
        let s = EnvSeries::from_parts(1, vec![term(0.3, 0.6, 0.4)], 0.0);
        for b in s.measurement_blocks(0.5) {
            assert!(b.matrix.is_hermitian(1e-15));
            assert!((b.matrix.trace() - 0.5 * (0.3 - 0.6)).abs() < 1e-15);
            for j in 0..2 {
                let av = apply(&b.matrix, &b.eigenvectors[j]);
                for r in 0..2 {
                    let lv = b.eigenvectors[j][r] * b.eigenvalues[j];
                    assert!((av[r] - lv).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn parallel_conditional_states_give_rank_one_block() {
        // |I|² = p0 p1: eigenvalues are (p0 - p1)/2 and 0.
        let t = term(0.7, 0.4, (0.28f64).sqrt());
        let s = EnvSeries::from_parts(1, vec![t], 0.0);
        let b = &s.measurement_blocks(0.5)[0];
        assert!((b.eigenvalues[0] - 0.15).abs() < 1e-15);
        assert!(b.eigenvalues[1].abs() < 1e-15);
    }

    #[test]
    fn identical_states_give_zero_block() {
        let s = EnvSeries::from_parts(1, vec![term(0.5, 0.5, 0.5)], 0.0);
        let b = &s.measurement_blocks(0.5)[0];
        assert_eq!(b.trace_norm(), 0.0);
    }

    #[test]
    fn missing_null_conditional_state() {
        let s = EnvSeries::from_parts(1, vec![term(0.0, 0.25, 0.0)], 0.0);
        let b = &s.measurement_blocks(0.5)[0];
        assert_eq!(b.matrix.entries[1][1].re, -0.125);
        assert_eq!(b.eigenvalues, [0.0, -0.125]);
    }
}
