//! Randomized self-checks of the series evaluator against the dense oracle
//! and against the structural properties every result must satisfy.

use std::f64::consts::TAU;

use ndsread::nds::{analyze_series, env_terms, EnvSeries, EnvTerm};
use ndsread::oracle::{nds_input_spec, propagate, q_of_s_dense, trace_norm_pe, uhlmann_fidelity};
use ndsread::transmitters::fock_error_probability;
use ndsread::{ChannelPair, Hypothesis, Occupation, SeriesControl, SignalDistribution};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;

pub const PE_TOL: f64 = 1e-9;
pub const FIDELITY_TOL: f64 = 1e-9;
pub const Q_TOL: f64 = 1e-8;
pub const SANDWICH_SLACK: f64 = 1e-12;
pub const FAULT_SIZE: f64 = 1e-6;

pub const SUITES: [&str; 4] = [
    "oracle_equivalence",
    "bound_sandwich",
    "convexity",
    "partition_invariance",
];

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ValidateOptions {
    pub seed: u64,
    pub budget: usize,
    pub tail_tolerance: f64,
    /// Adds `FAULT_SIZE` to the largest `|I_k|` before the checks run.
    pub inject_fault: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            budget: 200,
            tail_tolerance: 1e-12,
            inject_fault: false,
        }
    }
}

/// A randomized probe/channel pair, kept in plain form for the report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Instance {
    pub index: usize,
    pub support: Vec<(Vec<u32>, f64)>,
    pub r0: f64,
    pub r1: f64,
    pub theta1: f64,
    pub prior0: f64,
    pub s_values: Vec<f64>,
}

impl Instance {
    pub fn generate(seed: u64, index: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let modes = rng.random_range(1..=2usize);
        let points = rng.random_range(1..=5usize);
        let mut support: Vec<(Vec<u32>, f64)> = (0..points)
            .map(|_| {
                let occ = (0..modes).map(|_| rng.random_range(0..=3u32)).collect();
                (occ, rng.random_range(0.05..1.0))
            })
            .collect();
        support.sort_by(|a, b| a.0.cmp(&b.0));
        support.dedup_by(|a, b| {
            if a.0 == b.0 {
                b.1 += a.1;
                true
            } else {
                false
            }
        });
        let total: f64 = support.iter().map(|p| p.1).sum();
        for p in &mut support {
            p.1 /= total;
        }
        let (r0, r1) = loop {
            let a: f64 = rng.random_range(0.02..0.98);
            let b: f64 = rng.random_range(0.02..0.98);
            if (a - b).abs() >= 0.02 {
                break (a.min(b), a.max(b));
            }
        };
        let theta1 = if rng.random_bool(0.5) {
            rng.random_range(0.0..TAU)
        } else {
            0.0
        };
        let prior0 = if rng.random_bool(0.5) {
            rng.random_range(0.15..0.85)
        } else {
            0.5
        };
        let s_values = (0..5).map(|_| rng.random::<f64>()).collect();
        Self {
            index,
            support,
            r0,
            r1,
            theta1,
            prior0,
            s_values,
        }
    }

    pub fn modes(&self) -> usize {
        self.support[0].0.len()
    }

    pub fn distribution(&self) -> Result<SignalDistribution> {
        Ok(SignalDistribution::sparse(
            self.support
                .iter()
                .map(|(k, p)| (Occupation::new(k.clone()), *p)),
        )?)
    }

    /// The same probe with mode labels reversed.
    pub fn relabelled(&self) -> Result<SignalDistribution> {
        Ok(SignalDistribution::sparse(self.support.iter().map(
            |(k, p)| {
                let mut k = k.clone();
                k.reverse();
                (Occupation::new(k), *p)
            },
        ))?)
    }

    pub fn channel(&self) -> Result<ChannelPair> {
        Ok(ChannelPair::new(
            self.r0,
            self.r1,
            0.0,
            self.theta1,
            self.prior0,
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub suite: &'static str,
    pub detail: String,
    pub instance: Instance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub budget: usize,
    pub fault_injected: bool,
    pub passed: bool,
    pub suites: Vec<SuiteSummary>,
    pub violations: Vec<Violation>,
}

/// Shifts the largest cross term outward by `size` in modulus.
pub fn inject_fault(s: &EnvSeries, size: f64) -> EnvSeries {
    let mut terms: Vec<EnvTerm> = s.terms().to_vec();
    if let Some(t) = terms
        .iter_mut()
        .max_by(|a, b| a.cross.norm().total_cmp(&b.cross.norm()))
    {
        let m = t.cross.norm();
        t.cross = if m > 0.0 {
            t.cross * ((m + size) / m)
        } else {
            C64::new(size, 0.0)
        };
    }
    EnvSeries::from_parts(s.modes(), terms, s.tail_mass())
}

/// Results of one suite on one instance: number of checks and the failures.
type Outcome = (usize, Vec<String>);

fn compare(what: &str, series: f64, oracle: f64, tol: f64, bad: &mut Vec<String>) {
    let gap = (series - oracle).abs();
    if gap.is_nan() || gap > tol {
        bad.push(format!(
            "{what}: series {series} vs oracle {oracle} (tol {tol:e})"
        ));
    }
}

fn oracle_suite(inst: &Instance, s: &EnvSeries, c: &ChannelPair) -> Result<Outcome> {
    let spec = nds_input_spec(&inst.distribution()?, None)?;
    let rho0 = propagate(&spec, c, Hypothesis::Zero)?;
    let rho1 = propagate(&spec, c, Hypothesis::One)?;
    let mut bad = Vec::new();
    compare(
        "pe",
        s.helstrom_pe().value,
        trace_norm_pe(&rho0, &rho1, 0.5)?,
        PE_TOL,
        &mut bad,
    );
    compare(
        "prior-weighted pe",
        s.helstrom_pe_priors(inst.prior0).value,
        trace_norm_pe(&rho0, &rho1, inst.prior0)?,
        PE_TOL,
        &mut bad,
    );
    compare(
        "fidelity",
        s.fidelity().value,
        uhlmann_fidelity(&rho0, &rho1)?,
        FIDELITY_TOL,
        &mut bad,
    );
    for &x in &inst.s_values {
        compare(
            &format!("Q({x})"),
            s.q_of_s(x).value,
            q_of_s_dense(&rho0, &rho1, x)?,
            Q_TOL,
            &mut bad,
        );
    }
    Ok((3 + inst.s_values.len(), bad))
}

fn sandwich_suite(inst: &Instance, s: &EnvSeries, ctl: &SeriesControl) -> Result<Outcome> {
    let mut bad = Vec::new();
    for prior0 in [0.5, inst.prior0] {
        let report = analyze_series(s, prior0, ctl)?;
        if let Err(e) = report.check_sandwich(prior0, SANDWICH_SLACK) {
            bad.push(format!("priors ({prior0}, {}): {e}", 1.0 - prior0));
        }
    }
    Ok((2, bad))
}

fn convexity_suite(inst: &Instance, s: &EnvSeries) -> Outcome {
    let mut bad = Vec::new();
    let xs = &inst.s_values;
    let mut checks = 0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let (a, b) = (xs[i], xs[j]);
            let mid = s.q_of_s(0.5 * (a + b)).value;
            let chord = 0.5 * (s.q_of_s(a).value + s.q_of_s(b).value);
            checks += 1;
            if mid > chord + SANDWICH_SLACK {
                bad.push(format!("Q midpoint of [{a}, {b}] is {mid} > chord {chord}"));
            }
        }
    }
    (checks, bad)
}

fn partition_suite(
    inst: &Instance,
    s: &EnvSeries,
    c: &ChannelPair,
    ctl: &SeriesControl,
) -> Result<Outcome> {
    let mut bad = Vec::new();
    let swapped = env_terms(&inst.relabelled()?, c, ctl)?;
    let pairs = [
        ("pe", s.helstrom_pe().value, swapped.helstrom_pe().value),
        ("fidelity", s.fidelity().value, swapped.fidelity().value),
        (
            "Q(s0)",
            s.q_of_s(inst.s_values[0]).value,
            swapped.q_of_s(inst.s_values[0]).value,
        ),
    ];
    for (what, x, y) in pairs {
        if x.to_bits() != y.to_bits() {
            bad.push(format!("{what} changed under mode relabelling: {x} vs {y}"));
        }
    }
    let occ = Occupation::new(inst.support[0].0.clone());
    let fock = env_terms(&SignalDistribution::fock(occ.counts())?, c, ctl)?;
    let direct = fock_error_probability(occ.total(), c)?;
    let gap = (fock.helstrom_pe().value - direct).abs();
    if gap.is_nan() || gap > 1e-12 {
        bad.push(format!(
            "number state {:?}: series pe {} vs count-statistics pe {direct}",
            occ.counts(),
            fock.helstrom_pe().value
        ));
    }
    Ok((4, bad))
}

fn check_instance(inst: &Instance, opts: &ValidateOptions) -> Vec<Outcome> {
    let run = || -> Result<Vec<Outcome>> {
        let c = inst.channel()?;
        let ctl = SeriesControl {
            tail_tolerance: opts.tail_tolerance,
            ..Default::default()
        };
        let mut s = env_terms(&inst.distribution()?, &c, &ctl)?;
        if opts.inject_fault {
            s = inject_fault(&s, FAULT_SIZE);
        }
        Ok(vec![
            oracle_suite(inst, &s, &c)?,
            sandwich_suite(inst, &s, &ctl)?,
            convexity_suite(inst, &s),
            partition_suite(inst, &s, &c, &ctl)?,
        ])
    };
    run().unwrap_or_else(|e| {
        let failed = (1, vec![format!("evaluation failed: {e}")]);
        vec![failed; SUITES.len()]
    })
}

/// Runs every suite on `opts.budget` instances. Instances are generated from
/// independent streams of one seeded generator, so the report does not
/// depend on scheduling.
pub fn run_validation(opts: &ValidateOptions) -> ValidationReport {
    let outcomes: Vec<(Instance, Vec<Outcome>)> = (0..opts.budget)
        .into_par_iter()
        .map(|i| {
            let inst = Instance::generate(opts.seed, i);
            let out = check_instance(&inst, opts);
            (inst, out)
        })
        .collect();
    let mut suites: Vec<SuiteSummary> = SUITES
        .iter()
        .map(|&name| SuiteSummary {
            name,
            checks: 0,
            failures: 0,
        })
        .collect();
    let mut violations = Vec::new();
    for (inst, out) in outcomes {
        for (summary, (checks, bad)) in suites.iter_mut().zip(out) {
            summary.checks += checks;
            summary.failures += bad.len();
            violations.extend(bad.into_iter().map(|detail| Violation {
                suite: summary.name,
                detail,
                instance: inst.clone(),
            }));
        }
    }
    ValidationReport {
        seed: opts.seed,
        budget: opts.budget,
        fault_injected: opts.inject_fault,
        passed: violations.is_empty(),
        suites,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible_and_normalized() {
        for i in 0..20 {
            let a = Instance::generate(7, i);
            assert_eq!(a, Instance::generate(7, i));
            let total: f64 = a.support.iter().map(|p| p.1).sum();
            assert!((total - 1.0).abs() < 1e-14);
            assert!(a.r1 - a.r0 >= 0.02);
            assert!(a.distribution().is_ok());
        }
        assert_ne!(Instance::generate(7, 0), Instance::generate(8, 0));
    }

    #[test]
    fn small_run_passes() {
        let report = run_validation(&ValidateOptions {
            budget: 8,
            ..Default::default()
        });
        assert!(report.passed, "{:#?}", report.violations);
        assert_eq!(report.suites.len(), 4);
    }

    #[test]
    fn fault_moves_the_largest_cross_term() {
        let inst = Instance::generate(3, 1);
        let c = inst.channel().unwrap();
        let s = env_terms(&inst.distribution().unwrap(), &c, &SeriesControl::default()).unwrap();
        let f = inject_fault(&s, FAULT_SIZE);
        let top = |s: &EnvSeries| s.terms().iter().map(|t| t.cross.norm()).fold(0.0, f64::max);
        assert!((top(&f) - top(&s) - FAULT_SIZE).abs() < 1e-15);
    }
}
