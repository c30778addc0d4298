mod common;

use common::{arb_channel, arb_distribution, pair};
use ndsread::nds::{analyze, env_terms, product_combine, EnvSeries};
use ndsread::transmitters::{
    coherent_chernoff, epr_bhattacharyya_limit, epr_chernoff, epr_pe_lower, epr_q_of_s,
    fock_chernoff, fock_error_probability, EprInput,
};
use ndsread::{
    qcb_exponent_upper_bound, Hypothesis, Occupation, SeriesControl, SignalDistribution,
};
use proptest::prelude::*;

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

fn permuted(d: &SignalDistribution, perm: &[usize]) -> SignalDistribution {
    SignalDistribution::sparse(d.expand().into_iter().map(|(n, p)| {
        let counts = perm.iter().map(|&i| n.counts()[i]).collect();
        (Occupation::new(counts), p)
    }))
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn terms_are_normalized_and_satisfy_cauchy_schwarz(d in arb_distribution(3, 3), c in arb_channel(true)) {
        let s = env_terms(&d, &c, &ctl()).unwrap();
        let (n0, n1) = s.normalization();
        prop_assert!((n0 - 1.0).abs() < 1e-13 && (n1 - 1.0).abs() < 1e-13);
        for t in s.terms() {
            prop_assert!(t.p0 >= 0.0 && t.p1 >= 0.0);
            prop_assert!(t.satisfies_cauchy_schwarz(1e-12), "{:?}", t);
        }
    }

    #[test]
    fn bound_sandwich_holds(d in arb_distribution(2, 3), c in arb_channel(true)) {
        let c = c.with_prior0(0.5).unwrap();
        let r = analyze(&d, &c, &ctl()).unwrap();
        let f = r.fidelity;
        let lower = (1.0 - (1.0 - f).sqrt()) / 2.0;
        prop_assert!(f / 4.0 <= lower + 1e-12);
        prop_assert!(lower <= r.pe + 1e-12);
        prop_assert!(r.pe <= f.sqrt() / 2.0 + 1e-12);
        prop_assert!(r.pe <= r.q_of_s_star / 2.0 + 1e-12);
        let s = env_terms(&d, &c, &ctl()).unwrap();
        for i in 0..=10 {
            prop_assert!(r.pe <= s.q_of_s(i as f64 / 10.0).value / 2.0 + 1e-12);
        }
    }

    #[test]
    fn q_is_midpoint_convex(d in arb_distribution(2, 3), c in arb_channel(true), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let s = env_terms(&d, &c, &ctl()).unwrap();
        let mid = s.q_of_s(0.5 * (a + b)).value;
        prop_assert!(mid <= 0.5 * (s.q_of_s(a).value + s.q_of_s(b).value) + 1e-14);
    }

    #[test]
    fn mode_relabelling_is_bit_identical(d in arb_distribution(3, 3), c in arb_channel(false), k in 0usize..6) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let m = d.modes();
        let perm: Vec<usize> = perms[k].iter().copied().filter(|&i| i < m).collect();
        let e = permuted(&d, &perm);
        let a = analyze(&d, &c, &ctl()).unwrap();
        let b = analyze(&e, &c, &ctl()).unwrap();
        prop_assert_eq!(a.pe.to_bits(), b.pe.to_bits());
        prop_assert_eq!(a.fidelity.to_bits(), b.fidelity.to_bits());
        prop_assert_eq!(a.q_of_s_star.to_bits(), b.q_of_s_star.to_bits());
    }

    #[test]
    fn chernoff_exponents_respect_the_universal_cap(r0 in 0.01f64..0.9, dr in 0.01f64..0.09) {
        let c = pair(r0, r0 + dr);
        let cap = qcb_exponent_upper_bound(1.0, &c).unwrap().as_f64();
        prop_assert!(coherent_chernoff(1.0, &c).unwrap().exponent <= cap + 1e-12);
        prop_assert!(fock_chernoff(1, &c).unwrap().exponent <= cap + 1e-12);
        let e = EprInput::new(10, 10.0).unwrap();
        prop_assert!(epr_chernoff(&e, &c).unwrap().exponent <= cap + 1e-12);
    }
}

#[test]
fn fock_values_ignore_photon_repartition() {
    let c = pair(0.3, 0.6);
    let a = SignalDistribution::fock(&[2, 0]).unwrap();
    let b = SignalDistribution::fock(&[1, 1]).unwrap();
    let ra = analyze(&a, &c, &ctl()).unwrap();
    let rb = analyze(&b, &c, &ctl()).unwrap();
    assert!((ra.pe - rb.pe).abs() < 1e-15);
    assert_eq!(
        fock_error_probability(2, &c).unwrap().to_bits(),
        fock_error_probability(2, &c).unwrap().to_bits()
    );
}

#[test]
fn chernoff_bounds_dominate_lower_bounds() {
    for (r0, r1) in [(0.3, 0.6), (0.0, 0.3), (0.5, 0.75), (0.2, 0.8)] {
        let c = pair(r0, r1);
        for ns in [0.5, 5.0, 50.0] {
            let e = EprInput::new(50, ns).unwrap();
            assert!(epr_chernoff(&e, &c).unwrap().bound >= epr_pe_lower(&e, &c).unwrap());
        }
    }
}

#[test]
fn unit_fidelity_factor_and_split_products() {
    let c = pair(0.25, 0.65);
    let one = env_terms(&SignalDistribution::fock(&[1]).unwrap(), &c, &ctl()).unwrap();
    let vac = env_terms(&SignalDistribution::vacuum(1).unwrap(), &c, &ctl()).unwrap();
    let two = env_terms(&SignalDistribution::fock(&[1, 1]).unwrap(), &c, &ctl()).unwrap();
    let p = product_combine(vec![one.clone(), one.clone()]);
    for s in [0.0, 0.3, 0.6, 1.0] {
        assert!((p.q_of_s(s).value - two.q_of_s(s).value).abs() <= 1e-10);
    }
    let with_vac = product_combine(vec![one.clone(), vac]);
    assert_eq!(with_vac.fidelity().value, one.fidelity().value);
}

#[test]
fn fault_in_cross_terms_is_visible() {
    // A 1e-6 perturbation of I_k moves the error probability far outside
    // the 1e-9 oracle tolerance.
    let c = pair(0.3, 0.6);
    let d = SignalDistribution::fock(&[2, 1]).unwrap();
    let s = env_terms(&d, &c, &ctl()).unwrap();
    let mut terms = s.terms().to_vec();
    terms[1].cross *= 1.0 + 1e-6;
    let bad = EnvSeries::from_parts(s.modes(), terms, s.tail_mass());
    assert!((bad.helstrom_pe().value - s.helstrom_pe().value).abs() > 1e-9);
}

#[test]
fn identical_channels_are_coin_flips() {
    let c = pair(0.4, 0.4);
    for d in [
        SignalDistribution::fock(&[3, 1]).unwrap(),
        SignalDistribution::epr(2, 3.0, 1e-14).unwrap(),
    ] {
        let r = analyze(&d, &c, &ctl()).unwrap();
        assert_eq!(
            (r.pe, r.fidelity, r.q_of_s_star, r.s_star),
            (0.5, 1.0, 1.0, 0.0)
        );
    }
    assert_eq!(
        analyze(
            &SignalDistribution::vacuum(1).unwrap(),
            &pair(0.1, 0.9),
            &ctl()
        )
        .unwrap()
        .pe,
        0.5
    );
}

#[test]
fn bhattacharyya_powers_approach_the_limit() {
    // Reported rather than asserted: monotonicity in M is an empirical observation.
    for (r0, r1) in [(0.3, 0.6), (0.0, 0.3), (0.5, 1.0)] {
        let c = pair(r0, r1);
        let ns = 5.0;
        let limit = epr_bhattacharyya_limit(ns, &c).unwrap().value;
        let values: Vec<f64> = [1, 2, 4, 8, 16, 32, 64]
            .iter()
            .map(|&m| 0.5 * epr_q_of_s(&EprInput::new(m, ns).unwrap(), &c, 0.5).unwrap())
            .collect();
        let monotone = values.windows(2).all(|w| w[1] <= w[0]);
        eprintln!("({r0},{r1}) limit {limit:.6e} monotone {monotone} values {values:?}");
        assert!((values[6] - limit).abs() < 1e-2 * limit);
    }
    let _ = Hypothesis::Zero;
}
