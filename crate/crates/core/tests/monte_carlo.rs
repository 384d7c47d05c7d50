//! Monte Carlo ensembles against the analytic results, at test-sized budgets.

use heralding_core::analytic::{p_sequence, EventSequence};
use heralding_core::engine::{
    classify_and_estimate, counting_jump_fraction, run_ensemble, strong_lo_excursion_probability,
    SimConfig,
};
use heralding_core::{DetectionScheme, Params};

fn params(mu: f64, pe: f64) -> Params {
    Params::unit(mu, pe).unwrap()
}

fn adaptive(mu: f64, pe: f64, n: usize) -> SimConfig {
    SimConfig::new(params(mu, pe), DetectionScheme::AdaptiveLo)
        .with_n_traj(n)
        .with_sample_dt(0.1)
        .with_seed(2024)
}

#[test]
fn counting_click_fraction_equals_initial_excitation() {
    for pe in [0.36, 0.8] {
        let cfg = SimConfig::new(params(0.5, pe), DetectionScheme::Counting)
            .with_n_traj(20_000)
            .with_seed(3);
        let est = counting_jump_fraction(&cfg).unwrap();
        assert!(est.z_score(pe).abs() < 3.0, "pe {pe}: {}", est.p());
    }
}

#[test]
fn adaptive_sequence_frequencies_match_quadrature() {
    let (pe, mu) = (0.9, 0.5);
    let freq = classify_and_estimate(&adaptive(mu, pe, 20_000)).unwrap();
    assert_eq!(freq.unresolved, 0);
    for seq in EventSequence::all() {
        let want = p_sequence(&seq, &params(mu, pe));
        let z = freq.estimate(&seq.label()).z_score(want);
        assert!(z.abs() < 3.0, "{seq}: z = {z}");
    }
}

#[test]
fn halving_the_step_stays_within_the_confidence_interval() {
    let coarse = classify_and_estimate(&adaptive(0.5, 0.5, 10_000).with_p_jump_max(2e-3)).unwrap();
    let fine = classify_and_estimate(&adaptive(0.5, 0.5, 10_000).with_p_jump_max(1e-3)).unwrap();
    for label in ["0", "A", "B0", "BA"] {
        let (lo, hi) = fine.estimate(label).wilson95();
        let p = coarse.estimate(label).p();
        assert!((p - fine.estimate(label).p()).abs() < hi - lo, "{label}");
    }
}

#[test]
fn every_scheme_reproduces_exponential_decay() {
    let schemes = [
        (DetectionScheme::Counting, 1e-3),
        (DetectionScheme::fixed_real(1.0), 0.05),
        (DetectionScheme::fixed_real(3.0), 0.01),
        (DetectionScheme::AdaptiveLo, 1e-3),
    ];
    for (scheme, p_jump) in schemes {
        let cfg = SimConfig::new(params(0.5, 0.5), scheme)
            .with_n_traj(4000)
            .with_t_max(3.0)
            .with_p_jump_max(p_jump)
            .with_record_stride(20)
            .with_seed(17);
        let stats = run_ensemble(&cfg);
        for m in stats.mean_population.iter().skip(1) {
            let z = (m.mean - 0.5 * (-m.t).exp()) / m.stderr;
            assert!(z.abs() < 3.5, "{}: t = {}, z = {z}", scheme.name(), m.t);
        }
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = SimConfig::new(params(0.5, 0.6), DetectionScheme::fixed_real(2.0))
        .with_n_traj(300)
        .with_t_max(3.0)
        .with_p_jump_max(0.05)
        .with_record_stride(10)
        .with_seed(8);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                (
                    run_ensemble(&cfg),
                    classify_and_estimate(&adaptive(0.5, 0.6, 300)).unwrap(),
                )
            })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn strong_oscillator_excursions() {
    let cfg = |pe: f64| {
        SimConfig::new(params(0.5, pe), DetectionScheme::fixed_real(5.0))
            .with_n_traj(2000)
            .with_p_jump_max(0.05)
            .with_seed(5)
    };
    assert_eq!(strong_lo_excursion_probability(&cfg(0.0), 0.99).unwrap().successes, 0);
    let est = strong_lo_excursion_probability(&cfg(0.5), 0.99).unwrap();
    let p_a = p_sequence(&EventSequence::excited(0), &params(0.5, 0.5));
    assert!(est.successes > 0);
    assert!(est.p() < p_a);
}
