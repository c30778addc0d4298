mod common;

use common::pair;
use ndsread::nds::{env_terms, helstrom_pe, nds_chernoff, nds_fidelity, nds_q_of_s};
use ndsread::transmitters::{
    epr_chernoff, epr_fidelity, epr_q_of_s, fock_error_probability, fock_pe, fock_special_pe,
    EprInput,
};
use ndsread::{minimum_fidelity, overlap_lower_bound, SeriesControl, SignalDistribution};

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

fn grid() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for r0 in [0.05, 0.2, 0.4, 0.6, 0.8] {
        for f in [0.1, 0.3, 0.5, 0.7, 0.9] {
            for n in [0.1, 0.5, 1.0, 2.0, 4.0] {
                out.push((r0, r0 + (1.0 - r0) * f, n));
            }
        }
    }
    out
}

#[test]
fn single_pair_series_matches_closed_forms() {
    for (r0, r1, n) in grid() {
        let c = pair(r0, r1);
        // Q(s) near the endpoints converges slowly in the cutoff, so keep a deep tail.
        let d = SignalDistribution::epr(1, n, 1e-24).unwrap();
        let e = EprInput::new(1, n).unwrap();
        let f = nds_fidelity(&d, &c, &ctl()).unwrap().value;
        let fc = epr_fidelity(&e, &c).unwrap();
        assert!((f - fc).abs() <= 1e-10, "F at ({r0},{r1},{n}): {f} vs {fc}");
        for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let q = nds_q_of_s(&d, &c, s, &ctl()).unwrap().value;
            let qc = epr_q_of_s(&e, &c, s).unwrap();
            assert!(
                (q - qc).abs() <= 1e-10,
                "Q({s}) at ({r0},{r1},{n}): {q} vs {qc}"
            );
        }
    }
}

#[test]
fn epr_chernoff_matches_series_minimum() {
    for (r0, r1, n) in grid().into_iter().step_by(7) {
        let c = pair(r0, r1);
        let d = SignalDistribution::epr(1, n, 1e-16).unwrap();
        let series = nds_chernoff(&d, &c, &ctl()).unwrap();
        let closed = epr_chernoff(&EprInput::new(1, n).unwrap(), &c).unwrap();
        assert!(
            (series.q - 2.0 * closed.bound).abs() <= 1e-8,
            "({r0},{r1},{n})"
        );
    }
}

#[test]
fn multi_pair_fidelity_is_a_power() {
    let c = pair(0.3, 0.6);
    let d = SignalDistribution::epr(3, 1.5, 1e-16).unwrap();
    let f = nds_fidelity(&d, &c, &ctl()).unwrap().value;
    let single = epr_fidelity(&EprInput::new(1, 0.5).unwrap(), &c).unwrap();
    assert!((f - single.powi(3)).abs() < 1e-12);
    assert!((f - epr_fidelity(&EprInput::new(3, 1.5).unwrap(), &c).unwrap()).abs() < 1e-12);
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[test]
fn fock_exact_value_matches_series_on_all_partitions() {
    for (r0, r1) in [(0.3, 0.6), (0.1, 0.9), (0.45, 0.5), (0.7, 0.95)] {
        let c = pair(r0, r1);
        for ns in 0..=6u32 {
            let exact = fock_pe(ns as u64, &c).unwrap();
            for parts in 2..=3 {
                for occ in compositions(ns, parts) {
                    let d = SignalDistribution::fock(&occ).unwrap();
                    let s = helstrom_pe(&d, &c, &ctl()).unwrap().value;
                    assert!(
                        (s - exact).abs() <= 1e-12,
                        "{occ:?} at ({r0},{r1}): {s} vs {exact}"
                    );
                }
            }
        }
    }
}

#[test]
fn boundary_fock_values_match_series() {
    for (r0, r1) in [(0.0, 0.3), (0.5, 1.0), (0.0, 1.0)] {
        let c = pair(r0, r1);
        for ns in 0..=5u32 {
            let d = SignalDistribution::fock(&[ns]).unwrap();
            let s = helstrom_pe(&d, &c, &ctl()).unwrap().value;
            let closed = fock_error_probability(ns as u64, &c).unwrap();
            assert!((s - closed).abs() <= 1e-12, "({r0},{r1}) ns={ns}");
        }
    }
}

#[test]
fn ideal_memory_number_state_attains_the_fidelity_floor() {
    for r0 in [0.0, 0.1, 0.5, 0.9] {
        let c = pair(r0, 1.0);
        for ns in 0..=30u64 {
            let pe = fock_special_pe(ns, &c).unwrap();
            assert_eq!(
                pe,
                0.5 * minimum_fidelity(ns as f64, &c).unwrap(),
                "R0={r0} ns={ns}"
            );
        }
    }
}

#[test]
fn ideal_memory_epr_fidelity_equals_chernoff() {
    for r0 in [0.0, 0.2, 0.5, 0.8] {
        let c = pair(r0, 1.0);
        for (m, ns) in [(1, 0.5), (10, 5.0), (50, 40.0)] {
            let e = EprInput::new(m, ns).unwrap();
            let f = epr_fidelity(&e, &c).unwrap();
            let q = 2.0 * epr_chernoff(&e, &c).unwrap().bound;
            assert!((f - q).abs() <= 1e-12, "R0={r0} M={m}: {f} vs {q}");
        }
    }
}

#[test]
fn series_fidelity_equals_overlap_bound_at_zero_phase() {
    let c = pair(0.2, 0.7);
    let d = SignalDistribution::sparse([
        (vec![0, 2].into(), 0.3),
        (vec![1, 1].into(), 0.2),
        (vec![3, 0].into(), 0.5),
    ])
    .unwrap();
    let f = env_terms(&d, &c, &ctl()).unwrap().fidelity().value;
    assert!((f - overlap_lower_bound(&d, &c).value).abs() < 1e-14);
}
