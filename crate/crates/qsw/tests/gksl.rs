use qsw::gksl::*;
use qsw::graphs::{circulant_jump2, complete, gen_er, moral_triangle, path, random_orientation, star, DiGraph, Graph};
use qsw::numkernel::{eig_general, kron, unitary_apply, vec, CMatrix, CsrMatrix, HermitianMatrix, LinearOperator, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let m = random_matrix(n, rng);
    HermitianMatrix::new((&m + &m.adjoint()).scale_real(0.5)).unwrap()
}

fn random_density(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let m = random_matrix(n, rng);
    let p = m.matmul(&m.adjoint());
    let tr = p.trace().re;
    DensityMatrix::new(p.scale_real(1.0 / tr)).unwrap()
}

/// Right-hand side of the master equation written with commutators.
fn gksl_rhs(h: &CMatrix, ls: &[CMatrix], hw: f64, dw: f64, rho: &CMatrix) -> CMatrix {
    let mut out = h.commutator(rho).scale(c(0.0, -hw));
    for l in ls {
        let jump = l.matmul(rho).matmul(&l.adjoint());
        let anti = l.adjoint().matmul(l).anticommutator(rho).scale_real(0.5);
        out = &out + &(&jump - &anti).scale_real(dw);
    }
    out
}

#[test]
fn generator_matches_direct_right_hand_side() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let h = random_hermitian(3, &mut rng);
        let l = random_matrix(3, &mut rng);
        let rho = random_matrix(3, &mut rng);
        let (hw, dw) = (0.7, 0.4);
        let gen = build_generator(&h, std::slice::from_ref(&l), hw, dw).unwrap();
        let want = vec(&gksl_rhs(&h, &[l], hw, dw, &rho));
        let got = gen.matrix().matmul(&vec(&rho));
        assert!(got.max_abs_diff(&want) <= 1e-12);
        // the matrix-free form agrees too, for any input
        let direct = gen.apply(&rho).unwrap();
        assert!(vec(&direct).max_abs_diff(&want) <= 1e-12);
    }
}

#[test]
fn hermitian_fast_path_matches_general_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h = random_hermitian(5, &mut rng);
    let ls = vec![random_matrix(5, &mut rng), CMatrix::ketbra(5, 3, 1)];
    let gen = build_generator(&h, &ls, 0.5, 0.5).unwrap();
    let rho = random_density(5, &mut rng);
    let fast = gen.superoperator(true);
    let slow = gen.superoperator(false);
    let mut a = vec![c(0.0, 0.0); 25];
    let mut b = vec![c(0.0, 0.0); 25];
    fast.apply(rho.data(), &mut a);
    slow.apply(rho.data(), &mut b);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).norm() <= 1e-13);
    }
}

#[test]
fn superoperator_norm_bound_and_trace_are_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = random_hermitian(4, &mut rng);
    let ls = vec![random_matrix(4, &mut rng), CMatrix::ketbra(4, 2, 0), CMatrix::ketbra(4, 1, 1)];
    let gen = build_generator(&h, &ls, 0.8, 0.3).unwrap();
    let dense = gen.matrix();
    let op = gen.superoperator(false);
    assert!((op.trace() - dense.trace()).norm() <= 1e-12);
    let mu = dense.trace() / 16.0;
    assert!(op.norm_one_shifted(mu) >= dense.norm_one_shifted(mu) - 1e-12);
}

#[test]
fn lqsw_on_directed_edge_relaxes_to_sink() {
    let g = DiGraph::new(2, &[(0, 1)]).unwrap();
    let gen = lqsw_spec(&g, 1.0).unwrap().generator().unwrap();
    let rho = evolve(&gen, &DensityMatrix::basis(2, 0).unwrap(), 40.0).unwrap();
    let want = CMatrix::ketbra(2, 1, 1);
    assert!(rho.max_abs_diff(&want) <= 1e-12);
    // generator of the same walk contains eigenvalue 0
    assert!(gen.spectrum().unwrap().iter().any(|z| z.norm() < 1e-12));
}

#[test]
fn omega_zero_is_unitary_walk() {
    let g = star(6);
    let spec = gqsw_spec(&g.to_digraph(), 0.0).unwrap();
    let gen = spec.generator().unwrap();
    assert!(gen.lindblads().is_empty());
    let h = HermitianMatrix::new(g.adjacency()).unwrap();
    let mut psi = vec![c(0.0, 0.0); 6];
    psi[2] = c(1.0, 0.0);
    for t in [0.4, 2.0, 7.5] {
        let rho = evolve(&gen, &DensityMatrix::pure(&psi).unwrap(), t).unwrap();
        let phi = unitary_apply(&h, &psi, t).unwrap();
        assert!(rho.max_abs_diff(&CMatrix::outer(&phi)) <= 1e-9);
        let lq = evolve(&lqsw_spec(&g.to_digraph(), 0.0).unwrap().generator().unwrap(), &DensityMatrix::pure(&psi).unwrap(), t).unwrap();
        assert!(lq.max_abs_diff(&rho) <= 1e-9);
    }
}

/// Classical master equation `dp/dt = A p - D p`, integrated by a
/// fine fixed-step RK4 as an independent oracle.
fn rate_oracle(g: &Graph, p0: &[f64], t: f64) -> Vec<f64> {
    let n = g.n();
    let f = |p: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|w| g.neighbors(w).iter().map(|&v| p[v]).sum::<f64>() - g.degree(w) as f64 * p[w])
            .collect()
    };
    let steps = 20_000;
    let h = t / steps as f64;
    let mut p = p0.to_vec();
    for _ in 0..steps {
        let k1 = f(&p);
        let p2: Vec<f64> = p.iter().zip(&k1).map(|(a, b)| a + 0.5 * h * b).collect();
        let k2 = f(&p2);
        let p3: Vec<f64> = p.iter().zip(&k2).map(|(a, b)| a + 0.5 * h * b).collect();
        let k3 = f(&p3);
        let p4: Vec<f64> = p.iter().zip(&k3).map(|(a, b)| a + h * b).collect();
        let k4 = f(&p4);
        for i in 0..n {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    p
}

#[test]
fn fully_dissipative_local_walk_is_classical() {
    let g = gen_er(7, 0.5, 4).unwrap();
    let mut p0 = vec![0.0; 7];
    p0[0] = 1.0;
    let gen = ctrw_spec(&g).generator().unwrap();
    let rho = evolve(&gen, &DensityMatrix::diagonal(&p0).unwrap(), 1.3).unwrap();
    let oracle = rate_oracle(&g, &p0, 1.3);
    let classical = ctrw_evolve(&g, &p0, &[1.3]).unwrap().pop().unwrap();
    for k in 0..7 {
        assert!((measure(&rho)[k] - oracle[k]).abs() <= 1e-9);
        assert!((classical[k] - oracle[k]).abs() <= 1e-9);
        for j in 0..7 {
            if j != k {
                assert!(rho[(j, k)].norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn undirected_global_walk_uses_hamiltonian_as_lindblad() {
    let g = path(5);
    let spec = gqsw_spec(&g.to_digraph(), 0.3).unwrap();
    assert_eq!(spec.lindblads.len(), 1);
    assert_eq!(spec.lindblads[0], spec.hamiltonian);
    // sqrt(omega) A as the Lindblad with (1 - omega) A as the Hamiltonian
    let a = HermitianMatrix::new(g.adjacency()).unwrap();
    let alt = build_generator(&a.affine(0.7, 0.0), &[g.adjacency().scale_real(0.3f64.sqrt())], 1.0, 1.0).unwrap();
    assert!(alt.matrix().max_abs_diff(&spec.generator().unwrap().matrix()) <= 1e-14);
}

#[test]
fn moral_triangle_global_walk_closed_form() {
    let gen = gqsw_spec(&moral_triangle(), 1.0).unwrap().generator().unwrap();
    let rho0 = DensityMatrix::basis(3, 0).unwrap();
    for t in [0.1, 0.7, 2.0, 5.0, 20.0] {
        let rho = evolve(&gen, &rho0, t).unwrap();
        let e = (-t).exp();
        let mut want = CMatrix::zeros(3, 3);
        want[(0, 0)] = c(0.25 * (e + 1.0).powi(2), 0.0);
        want[(0, 1)] = c(0.25 * (e * e - 1.0), 0.0);
        want[(1, 0)] = want[(0, 1)];
        want[(1, 1)] = c(0.25 * (e - 1.0).powi(2), 0.0);
        want[(2, 2)] = c(e * t.sinh(), 0.0);
        assert!(rho.max_abs_diff(&want) <= 1e-9, "t = {t}");
    }
    let p = measure(&evolve(&gen, &rho0, 20.0).unwrap());
    assert!((p[1] - 0.25).abs() <= 1e-6);
}

#[test]
fn commuting_spectrum_matches_dense_eigenvalues() {
    let g = path(5);
    for omega in [0.0, 0.4, 1.0] {
        let formula = gqsw_spectrum_commuting(&g, omega).unwrap();
        let dense = gqsw_spec(&g.to_digraph(), omega).unwrap().generator().unwrap().spectrum().unwrap();
        let mut rest = dense.clone();
        for z in &formula {
            let (k, d) = rest
                .iter()
                .enumerate()
                .map(|(k, y)| (k, (z - y).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(d <= 1e-7, "omega {omega}: {z} unmatched ({d:e})");
            rest.swap_remove(k);
        }
        if omega == 1.0 {
            assert!(formula.iter().all(|z| z.im == 0.0 && z.re <= 0.0));
        }
        // diagonal pairs are stationary directions
        for i in 0..5 {
            assert_eq!(formula[i * 5 + i], c(0.0, 0.0));
        }
    }
}

fn model_zoo() -> Vec<(String, EvolutionGenerator)> {
    let mut out = Vec::new();
    let und = gen_er(8, 0.45, 11).unwrap();
    let dir = random_orientation(&complete(6), 3);
    for omega in [0.0, 0.35, 1.0] {
        out.push((format!("lqsw {omega}"), lqsw_spec(&dir, omega).unwrap().generator().unwrap()));
        out.push((format!("gqsw {omega}"), gqsw_spec(&dir, omega).unwrap().generator().unwrap()));
        out.push((format!("gqsw und {omega}"), gqsw_spec(&und.to_digraph(), omega).unwrap().generator().unwrap()));
    }
    out.push(("ctqw".into(), ctqw_spec(&und).generator().unwrap()));
    out.push(("ctrw".into(), ctrw_spec(&und).generator().unwrap()));
    out.push(("circulant".into(), gqsw_spec(&circulant_jump2(12).unwrap(), 0.5).unwrap().generator().unwrap()));
    out
}

#[test]
fn trace_and_positivity_are_preserved() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, gen) in model_zoo() {
        let rho0 = random_density(gen.state_dim(), &mut rng);
        let states = evolve_times(&gen, &rho0, &[0.1, 1.0, 10.0, 100.0]).expect(&name);
        for rho in states {
            assert!((rho.trace() - 1.0).norm() <= 1e-9, "{name}");
            assert!(rho.min_eigenvalue().unwrap() >= -1e-7, "{name}");
            assert!((measure(&rho).iter().sum::<f64>() - 1.0).abs() <= 1e-9, "{name}");
        }
    }
}

#[test]
fn generator_spectra_lie_in_closed_left_half_plane() {
    for (name, gen) in model_zoo() {
        let m = gen.matrix();
        // trace functional vanishes on every column
        let id = vec(&CMatrix::identity(gen.state_dim()));
        let tf = id.adjoint().matmul(&m);
        assert!(tf.data().iter().all(|z| z.norm() <= 1e-9), "{name}");
        for z in gen.spectrum().unwrap() {
            assert!(z.re <= 1e-9, "{name}: {z}");
        }
    }
}

#[test]
fn semigroup_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (name, gen) in model_zoo().into_iter().step_by(3) {
        let rho = random_density(gen.state_dim(), &mut rng);
        let split = evolve(&gen, &evolve(&gen, &rho, 0.8).unwrap(), 2.1).unwrap();
        let whole = evolve(&gen, &rho, 2.9).unwrap();
        assert!(split.max_abs_diff(&whole) <= 1e-8, "{name}");
    }
}

#[test]
fn vectorization_of_dissipator_matches_kron_form() {
    let l = CMatrix::ketbra(3, 2, 0);
    let gen = build_generator(&HermitianMatrix::zeros(3), std::slice::from_ref(&l), 0.0, 1.0).unwrap();
    let id = CMatrix::identity(3);
    let want = &(&kron(&l, &l.conj()) - &kron(&l.adjoint().matmul(&l), &id).scale_real(0.5))
        - &kron(&id, &l.transpose().matmul(&l.conj())).scale_real(0.5);
    assert_eq!(gen.matrix(), want);
    assert!(eig_general(&want).unwrap().iter().all(|z| z.re <= 1e-12));
}

#[test]
fn rejects_mismatched_operators() {
    let h = HermitianMatrix::zeros(3);
    assert!(build_generator(&h, &[CMatrix::zeros(2, 2)], 1.0, 1.0).is_err());
    let bad = CsrMatrix::from_triplets(2, 2, &[(0, 1, c(1.0, 0.0))]);
    assert!(EvolutionGenerator::from_sparse(&bad, &[], 1.0, 0.0, WalkModel::Custom, 0.0).is_err());
    let gen = ctqw_spec(&path(3)).generator().unwrap();
    assert!(evolve(&gen, &DensityMatrix::basis(2, 0).unwrap(), 1.0).is_err());
}
