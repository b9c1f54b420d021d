//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line and
//! asserts. Run with `cargo test -p sqsearch-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use sqsearch::ensemble::post_step_probabilities;
use sqsearch::report::{to_csv, to_json};
use sqsearch::{
    classical_binary_search, deviation_stats, inversion_about_average, measurement_distribution, phase_invert,
    post_step_amplitudes, probability_gap, quantum_phase_query, recommended_eta, run_experiment, run_trial, sweep,
    validate_all, validation_grid, Amplitude, DatabaseSpec, EtaRule, Execution, ExperimentPlan, MarkedSet,
    QueryLedger, SubsystemState, DEFAULT_GLOBAL_CAP,
};

fn verdict(id: u32, title: &str, pass: bool, detail: String) {
    println!("[{}] criterion {id}: {title} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn post_step(n: usize, marked: &MarkedSet) -> SubsystemState {
    let u = SubsystemState::uniform(n).unwrap();
    inversion_about_average(&phase_invert(&u, marked).unwrap())
}

#[test]
fn criterion_1_factorization_matches_brute_force() {
    let start = Instant::now();
    let cases = validation_grid(&[2, 4], &[1, 2, 3]);
    let reports = validate_all(&cases, DEFAULT_GLOBAL_CAP, Execution::Parallel).unwrap();
    let elapsed = start.elapsed();
    let worst = reports.iter().map(|r| r.max_discrepancy).fold(0.0, f64::max);
    verdict(
        1,
        "factorized vs brute-force marginals",
        reports.len() == 48 && worst < 1e-10 && elapsed < Duration::from_secs(5),
        format!("{} cases, worst {worst:e}, {elapsed:?}", reports.len()),
    );
}

#[test]
fn criterion_2_closed_form_amplitudes() {
    let mut worst_amp: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    let mut cases = 0;
    let mut n = 4;
    while n <= 256 {
        for k in 1..n {
            let marked = MarkedSet::new(0..k);
            let s = post_step(n, &marked);
            let (m, u) = post_step_amplitudes(n, k).unwrap();
            let nf = n as f64;
            let (m_ref, u_ref) = ((3.0 * nf - 4.0 * k as f64) / nf.powf(1.5), (nf - 4.0 * k as f64) / nf.powf(1.5));
            worst_amp = worst_amp.max((m - m_ref).abs()).max((u - u_ref).abs());
            for (i, a) in s.amplitudes().iter().enumerate() {
                let e = if i < k { m_ref } else { u_ref };
                worst_amp = worst_amp.max((a - Amplitude::new(e, 0.0)).norm());
            }
            worst_norm = worst_norm.max((k as f64 * m * m + (n - k) as f64 * u * u - 1.0).abs());
            cases += 1;
        }
        n *= 2;
    }
    verdict(
        2,
        "post-step amplitudes (3N-4k)/N^1.5, (N-4k)/N^1.5",
        worst_amp < 1e-12 && worst_norm < 1e-12,
        format!("{cases} (N,k) pairs, amplitude err {worst_amp:e}, norm err {worst_norm:e}"),
    );
}

#[test]
fn criterion_3_nine_over_n_and_factor_three() {
    let n = 1024;
    let s = post_step(n, &MarkedSet::from([0]));
    let p = measurement_distribution(&s)[0];
    let approx = 9.0 / n as f64;
    let rel = (approx - p).abs() / approx;
    let ratio = s.amplitudes()[0].re / SubsystemState::uniform(n).unwrap().amplitudes()[0].re;
    let ratio_dev = (ratio - 3.0).abs() / 3.0;
    verdict(
        3,
        "9/N approximation and factor-3 boost at N=1024",
        rel < 0.003 && ratio_dev < 0.002 && (ratio - 2.99609375).abs() < 1e-12,
        format!("p={p:.7}, 9/N={approx:.7}, rel dev {:.4}%, ratio {ratio:.4}", rel * 100.0),
    );
}

#[test]
fn criterion_4_majority_decoding_success() {
    let start = Instant::now();
    let mut rates = Vec::new();
    for (i, n) in [8usize, 16, 32].into_iter().enumerate() {
        let eta = recommended_eta(n, 4.0).unwrap();
        let nf = n as f64;
        assert_eq!(eta, (4.0 * nf * nf.ln()).ceil() as usize);
        let plan = ExperimentPlan::new(n, MarkedSet::from([n / 2 + i]), eta, 2024, 200).unwrap();
        let r = run_experiment(&plan, Execution::Parallel).unwrap();
        rates.push((n, eta, r.success_rate));
    }
    let elapsed = start.elapsed();
    verdict(
        4,
        "decode success >= 0.99 at eta = ceil(4 N ln N)",
        rates.iter().all(|&(_, _, r)| r >= 0.99) && elapsed < Duration::from_secs(30),
        format!("{rates:?}, {elapsed:?}"),
    );
}

#[test]
fn criterion_5_query_accounting() {
    let mut ok = true;
    for p in 1..=10u32 {
        let n = 1usize << p;
        let db = DatabaseSpec::new(n, MarkedSet::from([n - 1])).unwrap();
        let mut ledger = QueryLedger::default();
        ok &= classical_binary_search(&db, &mut ledger).unwrap() == n - 1;
        ok &= ledger.classical_calls == p as u64;

        let plan = ExperimentPlan::new(n, MarkedSet::from([n / 2]), 16, 9, 20).unwrap();
        for t in 0..20 {
            ok &= run_trial(&plan, t).unwrap().ledger.oracle_calls == 1;
        }
        let r = run_experiment(&plan, Execution::Parallel).unwrap();
        ok &= r.quantum_queries == 1 && r.classical_queries == Some(p as u64);
    }
    let rows = sweep(&[2, 4, 8, 16, 32, 64, 128, 256, 512, 1024], &[1], EtaRule::Fixed(8), 4, 3, Execution::Parallel).unwrap();
    ok &= rows
        .iter()
        .all(|r| r.quantum_queries == 1 && r.classical_queries == Some(r.n.trailing_zeros() as u64));
    verdict(5, "1 oracle call per quantum trial, log2 N classical calls", ok, "N = 2..1024".into());
}

#[test]
fn criterion_6_deterministic_n4_case() {
    let mut ok = true;
    for m in 0..4 {
        let marked = MarkedSet::from([m]);
        let (p, _) = post_step_probabilities(4, 1).unwrap();
        ok &= p == 1.0 && measurement_distribution(&post_step(4, &marked))[m] == 1.0;
        for eta in [1usize, 2, 7, 23, 1000] {
            let plan = ExperimentPlan::new(4, marked.clone(), eta, 77, 25).unwrap();
            ok &= run_experiment(&plan, Execution::Parallel).unwrap().success_rate == 1.0;
        }
    }
    verdict(6, "N=4, k=1 marked probability and success rate exactly 1", ok, "4 items x 5 eta values".into());
}

#[test]
fn criterion_7_multi_marked_caveats() {
    let mut worst_gap: f64 = 0.0;
    let mut ok = true;
    for n in [4usize, 8, 16, 32, 64] {
        for k in 1..n {
            let nf = n as f64;
            let g = probability_gap(n, k).unwrap();
            worst_gap = worst_gap.max((g - 8.0 * (nf - 2.0 * k as f64) / (nf * nf)).abs());
        }
        ok &= probability_gap(n, n / 2).unwrap() == 0.0;
    }
    for n in [2usize, 4, 8] {
        let u = SubsystemState::uniform(n).unwrap();
        for mask in 1..(1u32 << n) - 1 {
            let m = MarkedSet::new((0..n).filter(|i| mask >> i & 1 == 1));
            let c = m.complement(n);
            let mut ledger = QueryLedger::default();
            let a = quantum_phase_query(&u, &DatabaseSpec::new(n, m.clone()).unwrap(), &mut ledger).unwrap();
            let b = quantum_phase_query(&u, &DatabaseSpec::new(n, c.clone()).unwrap(), &mut ledger).unwrap();
            ok &= a.equal_up_to_global_phase(&b, 0.0);
            ok &= measurement_distribution(&post_step(n, &m)) == measurement_distribution(&post_step(n, &c));
        }
    }
    verdict(
        7,
        "probability gap 8(N-2k)/N^2, null at k=N/2, complement indistinguishable",
        ok && worst_gap < 1e-12,
        format!("gap err {worst_gap:e}"),
    );
}

#[test]
fn criterion_8_tail_of_marked_count() {
    let start = Instant::now();
    let plan = ExperimentPlan::new(16, MarkedSet::from([11]), 320, 8, 10_000).unwrap();
    let exceed = sqsearch::exec::par_map_range(Execution::Parallel, plan.trials as u64, |t| {
        let o = run_trial(&plan, t).unwrap();
        deviation_stats(&o.tally, &plan).unwrap().gamma.abs() > 3.0
    })
    .into_iter()
    .filter(|&x| x)
    .count();
    let elapsed = start.elapsed();
    let frac = exceed as f64 / plan.trials as f64;
    verdict(
        8,
        "fraction of trials with |gamma| > 3 at most 0.01",
        frac <= 0.01 && elapsed < Duration::from_secs(30),
        format!("{exceed}/10000 = {frac}, {elapsed:?}"),
    );
}

#[test]
fn criterion_9_reproducible_output() {
    let run = |threads: usize, exec: Execution| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let rows = pool
            .install(|| sweep(&[8, 16, 32], &[1, 3], EtaRule::Multiplier(4.0), 50, 1234, exec))
            .unwrap();
        let rows: Vec<_> = rows.into_iter().map(|r| r.without_timing()).collect();
        (to_csv(&rows), to_json(&rows))
    };
    let reference = run(1, Execution::Sequential);
    let mut ok = !reference.0.is_empty();
    for (threads, exec) in [(1, Execution::Sequential), (1, Execution::Parallel), (2, Execution::Parallel), (8, Execution::Parallel)] {
        ok &= run(threads, exec) == reference;
    }
    verdict(9, "byte-identical CSV/JSON across runs and worker counts", ok, format!("{} CSV bytes", reference.0.len()));
}
