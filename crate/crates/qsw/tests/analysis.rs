use qsw::analysis::*;
use qsw::gksl::{evolve, evolve_times, gqsw_spec, lqsw_spec, measure, DensityMatrix, WalkModel};
use qsw::graphs::{circulant_jump2, complete, directed_path, gen_ba_directed, gen_er, path, random_orientation, DiGraph};
use qsw::nonmoral::{demoralize, natural_measure, ngqsw_generator, uniform_block_state, NonmoralOperators};
use qsw::numkernel::{unitary_apply, HermitianMatrix, C64};
use qsw::QswError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn second_moment_basics() {
    assert_eq!(second_moment(&[0.0, 1.0, 0.0], &[-1, 0, 1]).unwrap(), 0.0);
    assert_eq!(second_moment(&[0.5, 0.0, 0.5], &[-1, 0, 1]).unwrap(), 1.0);
    assert!(second_moment(&[0.5, 0.4], &[0, 1]).is_err());
}

#[test]
fn moment_law_on_a_long_path() {
    let times = [1.0, 2.5, 5.0, 7.5, 10.0];
    for omega in [0.25, 0.5, 0.75] {
        let mu = path_second_moments(WalkModel::Gqsw, omega, 121, &times).unwrap();
        for (t, m) in times.iter().zip(&mu) {
            let want = moment_mu2(omega, *t);
            assert!(((m - want) / want).abs() <= 1e-3, "omega {omega}, t {t}: {m} vs {want}");
        }
    }
    assert_eq!(moment_mu2(0.5, 5.0), 17.5);
}

#[test]
fn slopes_of_power_laws() {
    let t: Vec<f64> = (1..=20).map(|k| k as f64).collect();
    let sq: Vec<f64> = t.iter().map(|x| 3.0 * x * x).collect();
    let tr = scaling_exponents(&t, &sq, 5).unwrap();
    assert_eq!(tr.alphas.len(), t.len() - 5 + 1);
    assert!(tr.alphas.iter().all(|a| (a - 2.0).abs() <= 1e-12));
    assert_eq!(tr.alpha_mid[0], 3.0);
    let flat = scaling_exponents(&t, &[4.0; 20], 4).unwrap();
    assert!(flat.alphas.iter().all(|a| a.abs() <= 1e-12));
    assert!(scaling_exponents(&t, &[0.0; 20], 4).is_err());
    assert!(scaling_exponents(&t[..3], &sq[..3], 5).is_err());
}

#[test]
fn limit_model_recovers_synthetic_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let t: Vec<f64> = (1..=40).map(|k| 10.0 * k as f64).collect();
    let y: Vec<f64> = t.iter().map(|x| 2.0 - 1.0 / x + rng.random_range(-1e-6..1e-6)).collect();
    let fit = fit_limit_model(&t, &y).unwrap();
    assert!((fit.p[0] - 2.0).abs() <= 1e-3, "{:?}", fit);
    assert!(!fit.degenerate);

    let y: Vec<f64> = t.iter().map(|x| 1.5 - 4.0 / (x + 5.0).powf(0.7)).collect();
    let fit = fit_limit_model(&t, &y).unwrap();
    assert!((fit.p[0] - 1.5).abs() <= 1e-6 && (fit.p[3] - 0.7).abs() <= 1e-4, "{:?}", fit);

    let fit = fit_limit_model(&t, &vec![1.25; 40]).unwrap();
    assert!((fit.p[0] - 1.25).abs() <= 1e-6);
    assert!(fit_limit_model(&t[..7], &y[..7]).is_err());
}

#[test]
fn closed_form_at_time_zero() {
    for k in 1..=7 {
        let p = path_probability_closed_form(7, 3, k, 0.0, 0.4).unwrap();
        assert!((p - if k == 3 { 1.0 } else { 0.0 }).abs() <= 1e-14);
    }
    assert!(path_probability_closed_form(7, 0, 1, 1.0, 0.4).is_err());
}

#[test]
fn closed_form_without_dissipation_is_the_unitary_walk() {
    let n = 15;
    let a = HermitianMatrix::new(path(n).adjacency()).unwrap();
    let mut psi = vec![C64::new(0.0, 0.0); n];
    psi[4] = C64::new(1.0, 0.0);
    for t in [0.3, 1.7, 4.0] {
        let out = unitary_apply(&a, &psi, t).unwrap();
        for k in 1..=n {
            let p = path_probability_closed_form(n, 5, k, t, 0.0).unwrap();
            assert!((p - out[k - 1].norm_sqr()).abs() <= 1e-12);
        }
    }
}

#[test]
fn closed_form_matches_generator_evolution() {
    let n = 21;
    let gen = gqsw_spec(&path(n).to_digraph(), 0.6).unwrap().generator().unwrap();
    let rho = evolve(&gen, &DensityMatrix::basis(n, 6).unwrap(), 3.0).unwrap();
    let p = measure(&rho);
    for k in 1..=n {
        let want = path_probability_closed_form(n, 7, k, 3.0, 0.6).unwrap();
        assert!((p[k - 1] - want).abs() <= 1e-8);
    }
}

#[test]
fn infinite_path_integral() {
    assert!((infinite_path_probability(0, 0.0, 0.3).unwrap() - 1.0).abs() <= 1e-12);
    let total: f64 = (-40..=40).map(|k| infinite_path_probability(k, 1.0, 0.5).unwrap()).sum();
    assert!((total - 1.0).abs() <= 1e-6);
    let q = infinite_path_probability_with(2, 1.0, 0.5, 1e-10).unwrap();
    assert!(q.imag.abs() <= 1e-8);
}

#[test]
fn infinite_path_agrees_with_a_long_finite_path() {
    let n = 201;
    let mid = 101;
    for (t, omega) in [(1.0, 0.0), (2.5, 0.5), (5.0, 0.8), (5.0, 1.0)] {
        for k in [0i64, 1, 3, 7] {
            let fin = path_probability_closed_form(n, mid, (mid as i64 + k) as usize, t, omega).unwrap();
            let inf = infinite_path_probability(k, t, omega).unwrap();
            assert!((fin - inf).abs() <= 1e-5, "t {t}, omega {omega}, k {k}");
        }
    }
}

#[test]
fn taylor_coefficients_basic_values() {
    assert_eq!(taylor_a(0, 0), 1.0);
    for n in 0..6 {
        for k in (n as i64 + 1)..(n as i64 + 4) {
            assert_eq!(taylor_a(n, k), 0.0);
            assert_eq!(taylor_a(n, -k), 0.0);
        }
    }
    // leaving the start vertex at total rate 2 omega
    assert!((taylor_b(1, 0, 0.3) + 0.6).abs() <= 1e-14);
    assert!((taylor_a(1, 0) + 2.0).abs() <= 1e-14);
}

/// `(S^n rho_0)_{kk}` on a path wide enough that the boundary is never seen.
fn generator_taylor_coefficients(omega: f64, order: usize) -> Vec<Vec<f64>> {
    let half = order + 3;
    let n = 2 * half + 1;
    let gen = gqsw_spec(&path(n).to_digraph(), omega).unwrap().generator().unwrap();
    let mut rho = DensityMatrix::basis(n, half).unwrap().into_matrix();
    let mut out = Vec::new();
    for _ in 0..=order {
        out.push((0..=order).map(|k| rho[(half + k, half + k)].re).collect());
        rho = gen.apply(&rho).unwrap();
    }
    out
}

#[test]
fn taylor_coefficients_match_generator_powers() {
    for omega in [1.0, 0.5, 0.2] {
        let coeff = generator_taylor_coefficients(omega, 8);
        for (n, row) in coeff.iter().enumerate() {
            for (k, want) in row.iter().enumerate() {
                let got = taylor_b(n, k as i64, omega);
                assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "omega {omega} B_{n},{k}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn taylor_series_matches_quadrature() {
    for k in 0..=3i64 {
        let a = taylor_series_probability(k, 0.5, 1.0).unwrap();
        assert!((a - infinite_path_probability(k, 0.5, 1.0).unwrap()).abs() <= 1e-7);
    }
    for k in -3..=3i64 {
        for t in [0.25, 1.0] {
            let b = taylor_series_probability(k, t, 0.5).unwrap();
            assert!((b - infinite_path_probability(k, t, 0.5).unwrap()).abs() <= 1e-6);
        }
    }
}

#[test]
fn local_walks_on_strongly_connected_digraphs_relax() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut done = 0;
    let mut seed = 0;
    while done < 6 {
        seed += 1;
        let g = random_orientation(&gen_er(rng.random_range(3..=6), 0.7, seed).unwrap(), seed);
        if !g.is_strongly_connected() {
            continue;
        }
        let gen = lqsw_spec(&g, rng.random_range(0.1..1.0)).unwrap().generator().unwrap();
        let rep = classify_convergence(&gen, CLASSIFY_TOL).unwrap();
        assert_eq!(rep.classification, Classification::Relaxing, "seed {seed}");
        assert_eq!(rep.zero_multiplicity, 1);
        done += 1;
    }
}

#[test]
fn global_walks_on_undirected_graphs_do_not_relax() {
    for g in [path(4), complete(4), gen_er(6, 0.5, 3).unwrap()] {
        let gen = gqsw_spec(&g.to_digraph(), 0.4).unwrap().generator().unwrap();
        let rep = classify_convergence(&gen, CLASSIFY_TOL).unwrap();
        assert_ne!(rep.classification, Classification::Relaxing);
        assert!(rep.zero_multiplicity >= 1);
    }
    let single = gqsw_spec(&DiGraph::empty(1), 0.4).unwrap().generator().unwrap();
    assert_eq!(classify_convergence(&single, CLASSIFY_TOL).unwrap().classification, Classification::Relaxing);
}

#[test]
fn circulant_global_walk_oscillates() {
    let omega = 0.5;
    let gen = gqsw_spec(&circulant_jump2(8).unwrap(), omega).unwrap().generator().unwrap();
    let rep = classify_convergence(&gen, CLASSIFY_TOL).unwrap();
    assert_eq!(rep.classification, Classification::PossiblyPeriodic);
    assert!(rep.distance_to(C64::new(0.0, 2.0 * (1.0 - omega))) <= 1e-8);
    assert!(rep.eigenvalues.iter().all(|z| z[0] <= 1e-9));
}

#[test]
fn period_graph_is_flagged_periodic() {
    let dg = demoralize(&qsw::graphs::ngqsw_period_graph());
    let gen = ngqsw_generator(&dg, &NonmoralOperators::standard(&dg).unwrap(), 0.7).unwrap();
    let rep = classify_convergence(&gen, CLASSIFY_TOL).unwrap();
    assert_eq!(rep.classification, Classification::PossiblyPeriodic);
    let w = 2.0 * 3f64.sqrt() * 0.7;
    assert!(rep.distance_to(C64::new(0.0, w)) <= 1e-8 && rep.distance_to(C64::new(0.0, -w)) <= 1e-8);
}

#[test]
fn classifier_cap_and_rules() {
    let gen = gqsw_spec(&path(60).to_digraph(), 0.5).unwrap().generator().unwrap();
    assert!(matches!(classify_convergence(&gen, CLASSIFY_TOL), Err(QswError::DimensionCap(3600, 2500))));
    let z = |re: f64, im: f64| C64::new(re, im);
    let rep = classify_spectrum(&[z(0.0, 0.0), z(-1.0, 0.0), z(-1e-12, 3.0)], 1e-10, 10);
    assert_eq!((rep.classification, rep.imaginary_count), (Classification::PossiblyPeriodic, 1));
    let rep = classify_spectrum(&[z(0.0, 0.0), z(1e-11, 0.0), z(-2.0, 1.0)], 1e-10, 10);
    assert_eq!((rep.classification, rep.zero_multiplicity), (Classification::ConvergentNonRelaxing, 2));
    // a coarser tolerance turns a slow mode into a second zero
    let rep = classify_spectrum(&[z(0.0, 0.0), z(-1e-6, 0.0)], 1e-5, 10);
    assert_eq!(rep.zero_multiplicity, 2);
}

#[test]
fn structure_measures_simple_cases() {
    let g = directed_path(4);
    assert_eq!(structure_measures(&g, &[0.0, 0.0, 0.0, 1.0]).unwrap(), (1.0, 0.0));
    let (ps, mus) = structure_measures(&g, &[0.25; 4]).unwrap();
    assert!((ps - 0.25).abs() <= 1e-15 && (mus - 0.25 * (9.0 + 4.0 + 1.0)).abs() <= 1e-15);
    let two_sinks = DiGraph::new(3, &[(0, 1), (0, 2)]).unwrap();
    assert!(matches!(structure_measures(&two_sinks, &[1.0, 0.0, 0.0]), Err(QswError::MultipleSinks(2))));
}

#[test]
fn sink_localization_improves_with_omega() {
    let g = directed_path(5);
    let rho0 = DensityMatrix::maximally_mixed(5);
    let mut prev = (0.0, f64::INFINITY);
    for omega in [0.5, 0.75, 0.9, 1.0] {
        let gen = lqsw_spec(&g, omega).unwrap().generator().unwrap();
        let p = measure(&evolve(&gen, &rho0, 1e4).unwrap());
        let (ps, mus) = structure_measures(&g, &p).unwrap();
        assert!(ps >= prev.0 - 1e-9 && mus <= prev.1 + 1e-9, "omega {omega}: {ps} {mus}");
        if omega < 1.0 {
            assert!(ps < 1.0 - 1e-3);
        } else {
            assert!((ps - 1.0).abs() <= 1e-6 && mus <= 1e-6);
        }
        prev = (ps, mus);
    }
}

#[test]
fn convergence_profile_simple_traces() {
    let times = [0.0, 1.0, 2.0, 3.0];
    let flat = vec![vec![0.5, 0.5]; 4];
    assert_eq!(convergence_profile(&flat, &times).unwrap().t_min, 0.0);
    let decay: Vec<Vec<f64>> = times.iter().map(|t: &f64| vec![1.0 - (-t).exp() / 2.0, (-t).exp() / 2.0]).collect();
    assert_eq!(convergence_profile(&decay, &times).unwrap().index, 0);
    let bump = vec![vec![0.5, 0.5], vec![0.0, 1.0], vec![0.4, 0.6], vec![0.5, 0.5]];
    assert_eq!(convergence_profile(&bump, &times).unwrap().t_min, 1.0);
    assert!(convergence_profile(&bump[..2], &times[..2]).is_err());
}

#[test]
fn nonmoral_walk_on_random_tree_settles() {
    let g = gen_ba_directed(10, 1, 2).unwrap();
    let dg = demoralize(&g);
    let gen = ngqsw_generator(&dg, &NonmoralOperators::standard(&dg).unwrap(), 0.5).unwrap();
    let times: Vec<f64> = (0..=100).map(|k| 100.0 * k as f64).collect();
    let states = evolve_times(&gen, &uniform_block_state(&dg), &times).unwrap();
    let trace: Vec<Vec<f64>> = states.iter().map(|r| natural_measure(r, &dg).unwrap()).collect();
    let prof = convergence_profile(&trace, &times).unwrap();
    assert!(prof.t_min.is_finite() && prof.t_min < 1e4);
}
