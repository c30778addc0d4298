use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::input::PureInputSpec;
use crate::channel::{ChannelPair, Hypothesis};
use crate::error::{Error, Result};
use crate::signal::Occupation;

/// Largest Hilbert-space dimension [`propagate`] will build.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Density operator on the joint (idler, returned signal) space, in a fixed
/// lexicographic basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    pub matrix: DMatrix<C64>,
    pub basis: Vec<(Occupation, Occupation)>,
    /// Input norm² not represented in `matrix`.
    pub tail_mass: f64,
}

impl DenseState {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// Hermitian to `1e-13`, trace `1 - tail` to `1e-12`.
    pub fn check(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                let d = (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm();
                if d > 1e-13 {
                    return Err(Error::Numerical(format!(
                        "not Hermitian at ({i}, {j}): {d:e}"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr - (1.0 - self.tail_mass)).abs() > 1e-12 {
            return Err(Error::Numerical(format!(
                "trace {tr} does not match 1 - tail = {}",
                1.0 - self.tail_mass
            )));
        }
        Ok(())
    }

    /// Writes the matrix as CSV: one row per basis state, with the idler and
    /// signal occupations followed by interleaved real and imaginary parts.
    pub fn write_debug_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let n = self.dim();
        write!(w, "row,idler,signal")?;
        for j in 0..n {
            write!(w, ",re_{j},im_{j}")?;
        }
        writeln!(w)?;
        let join = |o: &Occupation| {
            o.counts()
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(";")
        };
        for (i, (idler, signal)) in self.basis.iter().enumerate() {
            write!(w, "{i},{},{}", join(idler), join(signal))?;
            for j in 0..n {
                let z = self.matrix[(i, j)];
                write!(w, ",{},{}", z.re, z.im)?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Every `(m, n - k)` with `k <= n` for some stored `(m, n)`. The set does not
/// depend on the hypothesis, so both outputs share one basis.
fn reachable(spec: &PureInputSpec) -> BTreeSet<(Occupation, Occupation)> {
    let mut out = BTreeSet::new();
    for (idler, signal) in spec.amplitudes().keys() {
        for_each_below(signal.counts(), |kept| {
            out.insert((idler.clone(), Occupation::new(kept.to_vec())));
        });
    }
    out
}

/// Calls `f` on every vector `v` with `0 <= v <= top` component-wise.
fn for_each_below(top: &[u32], mut f: impl FnMut(&[u32])) {
    let mut v = vec![0u32; top.len()];
    loop {
        f(&v);
        let mut m = 0;
        while m < v.len() {
            if v[m] < top[m] {
                v[m] += 1;
                break;
            }
            v[m] = 0;
            m += 1;
        }
        if m == v.len() {
            return;
        }
    }
}

/// [`propagate_with_cap`] with [`DEFAULT_DIM_CAP`].
pub fn propagate(spec: &PureInputSpec, c: &ChannelPair, b: Hypothesis) -> Result<DenseState> {
    propagate_with_cap(spec, c, b, DEFAULT_DIM_CAP)
}

/// Output state `ρ_b = Tr_E[(U_b ⊗ 1)|ψ⟩⟨ψ|(U_b ⊗ 1)†]` of the input through
/// the beam splitter of hypothesis `b` on every signal mode.
///
/// A signal with `n` photons leaves `k` of them in the environment with
/// amplitude `√C(n,k) e^{i n θ_b} r_b^(n-k) t_b^k` per mode.
pub fn propagate_with_cap(
    spec: &PureInputSpec,
    c: &ChannelPair,
    b: Hypothesis,
    cap: usize,
) -> Result<DenseState> {
    let basis: Vec<(Occupation, Occupation)> = reachable(spec).into_iter().collect();
    let dim = basis.len();
    if dim > cap {
        return Err(Error::Resource { dim, cap });
    }
    let index: BTreeMap<&(Occupation, Occupation), usize> =
        basis.iter().enumerate().map(|(i, key)| (key, i)).collect();
    let (r, t, theta) = (c.r(b), c.t(b), c.theta(b));

    // Unnormalized conditional output for each environment occupation.
    let mut branches: BTreeMap<Vec<u32>, DVector<C64>> = BTreeMap::new();
    for ((idler, signal), &amp) in spec.amplitudes() {
        let phase = C64::from_polar(1.0, signal.total() as f64 * theta);
        for_each_below(signal.counts(), |k| {
            let mut a = amp * phase;
            let mut kept = Vec::with_capacity(k.len());
            for (&n, &km) in signal.counts().iter().zip(k) {
                a *= binomial(n, km).sqrt() * r.powi((n - km) as i32) * t.powi(km as i32);
                kept.push(n - km);
            }
            if a == C64::new(0.0, 0.0) {
                return;
            }
            let key = (idler.clone(), Occupation::new(kept));
            let i = index[&key];
            branches
                .entry(k.to_vec())
                .or_insert_with(|| DVector::zeros(dim))[i] += a;
        });
    }
    let mut matrix = DMatrix::<C64>::zeros(dim, dim);
    for v in branches.values() {
        matrix += v * v.adjoint();
    }
    let state = DenseState {
        matrix,
        basis,
        tail_mass: spec.tail_mass(),
    };
    state.check()?;
    Ok(state)
}
