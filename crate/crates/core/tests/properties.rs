use modgauss::combinatorics::{
    conf, graphical_shuffle, mn_character, p_k, partitions_of, sigma_rho, z_rho, AdjacencyBits, Graph, Partition,
    Permutation,
};
use modgauss::cumulants::{
    kappa2_graphs, kappa2_parts, kappa2_perms, kappa3_graphs, kappa3_parts, sample_statistic, BasisObject,
};
use modgauss::models::{
    embed_partition, exact_central_measure, sample_graph, GraphonSpec, ModelSpec, PermutonSpec, RngSeed,
    ThomaParameter,
};
use modgauss::observables::{
    evaluate_exact, hom_density, pattern_density, permuton_density_of_perm, thoma_moment, Observable,
};
use modgauss::parallel::Execution;
use modgauss::rational::{binomial, falling, q, qi, Q};
use modgauss::stats::{kolmogorov_distance, Provenance, StandardizedStatistic};
use modgauss::FormalSum;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn graph(max_k: usize) -> impl Strategy<Value = Graph> {
    (1..=max_k).prop_flat_map(|k| {
        let pairs: Vec<(usize, usize)> = (1..=k).flat_map(|a| (a + 1..=k).map(move |b| (a, b))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges: Vec<(usize, usize)> = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(e, _)| *e).collect();
            Graph::new(k, &edges).unwrap()
        })
    })
}

fn permutation(min: usize, max: usize) -> impl Strategy<Value = Permutation> {
    (min..=max).prop_flat_map(|n| {
        Just((1..=n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    })
}

fn partition(min: usize, max: usize) -> impl Strategy<Value = Partition> {
    (min..=max).prop_flat_map(|n| {
        let all = partitions_of(n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

/// A rational point of the Thoma simplex with up to two α's and two β's.
fn thoma() -> impl Strategy<Value = ThomaParameter> {
    (
        proptest::collection::vec(1..=6i64, 0..=2),
        proptest::collection::vec(1..=6i64, 0..=2),
        0..=6i64,
    )
        .prop_map(|(mut a, mut b, slack)| {
            let total: i64 = a.iter().sum::<i64>() + b.iter().sum::<i64>() + slack;
            let total = total.max(1);
            a.sort_unstable_by(|x, y| y.cmp(x));
            b.sort_unstable_by(|x, y| y.cmp(x));
            ThomaParameter::new(
                a.into_iter().map(|x| q(x, total)).collect(),
                b.into_iter().map(|x| q(x, total)).collect(),
            )
            .unwrap()
        })
}

/// Two-block step graphon with rational masses and values.
fn step_graphon() -> impl Strategy<Value = GraphonSpec> {
    (1..=4i64, 0..=4i64, 0..=4i64, 0..=4i64).prop_map(|(m, a, b, c)| {
        GraphonSpec::step(
            vec![q(m, 5), q(5 - m, 5)],
            vec![vec![q(a, 4), q(b, 4)], vec![q(b, 4), q(c, 4)]],
        )
        .unwrap()
    })
}

fn product<K: modgauss::Basis>(a: &K, b: &K) -> FormalSum<K> {
    FormalSum::single(a.clone()).mul(&FormalSum::single(b.clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn junction_sizes(f in graph(4), g in graph(4), a in 1..=4usize, b in 1..=4usize) {
        prop_assume!(a <= f.order() && b <= g.order());
        let j = f.junction2(&g, a, b).unwrap();
        prop_assert_eq!(j.order(), f.order() + g.order() - 1);
        prop_assert_eq!(j.edge_count(), f.edge_count() + g.edge_count());
    }

    #[test]
    fn shuffle_coefficients(s in permutation(0, 3), t in permutation(0, 3)) {
        let st = graphical_shuffle(&s, &t);
        prop_assert!(st.iter().all(|(_, c)| *c > Q::zero()));
        prop_assert_eq!(st.total_coefficient(), Q::from_integer(binomial(s.len() + t.len(), s.len())));
        prop_assert_eq!(st, graphical_shuffle(&t, &s));
    }

    #[test]
    fn conf_inverts_diagram(s in permutation(1, 8)) {
        prop_assert_eq!(conf(&s.diagram()).unwrap(), s);
    }

    #[test]
    fn frobenius_coordinates(l in partition(1, 12)) {
        let (a, b) = l.frobenius_coords();
        let total = a.iter().chain(&b).fold(Q::zero(), |s, x| s + x);
        prop_assert_eq!(total, qi(l.size()));
        let half = q(1, 2);
        for xs in [&a, &b] {
            prop_assert!(xs.windows(2).all(|w| w[0] > w[1]));
            prop_assert!(xs.iter().all(|x| *x > Q::zero() && (x - &half).is_integer()));
        }
    }

    #[test]
    fn power_sums(l in partition(1, 12), k in 1..=4usize) {
        prop_assert_eq!(p_k(1, &l), qi(l.size()));
        let ones = Partition::ones(k);
        prop_assert_eq!(sigma_rho(&ones, &l).unwrap(), Q::from_integer(falling(l.size(), k)));
    }

    #[test]
    fn graph_morphism_on_step_graphons(f in graph(3), g in graph(3), w in step_graphon()) {
        let m = ModelSpec::Graphon(w);
        let fg = evaluate_exact(&Observable::Graph(product(&f, &g)), &m).unwrap();
        let lhs = evaluate_exact(&f.clone().into(), &m).unwrap() * evaluate_exact(&g.clone().into(), &m).unwrap();
        prop_assert_eq!(fg, lhs);
    }

    #[test]
    fn permutation_morphism_on_uniform(s in permutation(1, 3), t in permutation(1, 3)) {
        let m = ModelSpec::Permuton(PermutonSpec::Uniform);
        let st = evaluate_exact(&Observable::Permutation(product(&s, &t)), &m).unwrap();
        let lhs = evaluate_exact(&s.clone().into(), &m).unwrap() * evaluate_exact(&t.clone().into(), &m).unwrap();
        prop_assert_eq!(st, lhs);
    }

    #[test]
    fn partition_morphism_on_thoma(r in partition(1, 4), s in partition(1, 4), w in thoma()) {
        let m = ModelSpec::Thoma(w);
        let rs = evaluate_exact(&Observable::Partition(product(&r, &s)), &m).unwrap();
        let lhs = evaluate_exact(&r.clone().into(), &m).unwrap() * evaluate_exact(&s.clone().into(), &m).unwrap();
        prop_assert_eq!(rs, lhs);
    }

    #[test]
    fn disjoint_union_density(f in graph(3), g in graph(3), h in graph(6)) {
        let fg = f.disjoint_union(&g);
        prop_assert_eq!(hom_density(&fg, &h).unwrap(), hom_density(&f, &h).unwrap() * hom_density(&g, &h).unwrap());
    }

    #[test]
    fn pattern_and_permuton_densities_are_close(t in permutation(1, 3), s in permutation(3, 7)) {
        let gap = (permuton_density_of_perm(&t, &s).unwrap() - pattern_density(&t, &s).unwrap()).abs();
        let k = t.len();
        prop_assert!(gap <= q((k * (k - 1) / 2) as i64, s.len() as i64));
    }

    #[test]
    fn embedded_partition_moments(l in partition(1, 10), k in 1..=5usize) {
        let w = embed_partition(&l).unwrap();
        prop_assert!(w.validate().is_ok());
        prop_assert!(w.gamma().is_zero());
        prop_assert_eq!(thoma_moment(k, &w), p_k(k, &l) / qi(l.size()).pow(k as i32));
    }

    #[test]
    fn central_measure_is_a_probability(w in thoma(), n in 1..=6usize) {
        let m = exact_central_measure(&w, n).unwrap();
        prop_assert!(m.values().all(|p| *p >= Q::zero()));
        prop_assert_eq!(m.values().fold(Q::zero(), |s, p| s + p), Q::one());
    }

    #[test]
    fn kappa2_graph_terms_keep_edge_count(f in graph(3), g in graph(3)) {
        prop_assume!(f.order() == g.order());
        let e = f.edge_count() + g.edge_count();
        let k2 = kappa2_graphs(&f, &g).unwrap();
        prop_assert!(k2.iter().all(|(h, _)| h.edge_count() == e));
        prop_assert_eq!(k2.clone(), kappa2_graphs(&g, &f).unwrap());
        let p = q(2, 7);
        let m = ModelSpec::Graphon(GraphonSpec::constant(p).unwrap());
        prop_assert!(evaluate_exact(&Observable::Graph(k2), &m).unwrap().is_zero());
    }

    #[test]
    fn kappa2_is_symmetric(s in permutation(2, 3), t in permutation(2, 3), r in partition(3, 4), u in partition(3, 4)) {
        prop_assume!(s.len() == t.len() && r.size() == u.size());
        prop_assert_eq!(kappa2_perms(&s, &t).unwrap(), kappa2_perms(&t, &s).unwrap());
        prop_assert_eq!(kappa2_parts(&r, &u).unwrap(), kappa2_parts(&u, &r).unwrap());
    }

    #[test]
    fn kappa3_is_symmetric(a in partition(3, 3), b in partition(3, 3), c in partition(3, 3)) {
        let base = kappa3_parts(&a, &b, &c).unwrap();
        for (x, y, z) in [(&b, &a, &c), (&a, &c, &b), (&c, &b, &a), (&b, &c, &a)] {
            prop_assert_eq!(&base, &kappa3_parts(x, y, z).unwrap());
        }
    }

    #[test]
    fn kolmogorov_distance_is_affine_invariant(seed in any::<u64>(), scale in 0.1f64..10.0, shift in -5.0f64..5.0) {
        let raw = sample_statistic(
            &ModelSpec::Permuton(PermutonSpec::Uniform),
            &BasisObject::Permutation("21".parse().unwrap()),
            12,
            1000,
            RngSeed::new(seed),
            Execution::Sequential,
        ).unwrap();
        let moved: Vec<f64> = raw.iter().map(|x| scale * x + shift).collect();
        let a = StandardizedStatistic::y_mode(&raw, Provenance::default()).unwrap();
        let b = StandardizedStatistic::y_mode(&moved, Provenance::default()).unwrap();
        let (da, db) = (kolmogorov_distance(&a.values).unwrap(), kolmogorov_distance(&b.values).unwrap());
        prop_assert!((da - db).abs() < 1e-9);
    }
}

#[test]
fn kappa3_graph_symmetry() {
    let graphs: Vec<Graph> = ["k=3; 1-2,2-3", "k=3; 1-2,1-3,2-3", "k=3; 1-2"].iter().map(|s| s.parse().unwrap()).collect();
    let (a, b, c) = (&graphs[0], &graphs[1], &graphs[2]);
    let base = kappa3_graphs(a, b, c).unwrap();
    for (x, y, z) in [(b, a, c), (a, c, b), (c, b, a), (b, c, a), (c, a, b)] {
        assert_eq!(base, kappa3_graphs(x, y, z).unwrap());
    }
}

#[test]
fn character_orthogonality() {
    for n in 1..=6 {
        let parts = partitions_of(n);
        for rho in &parts {
            for sigma in &parts {
                let s: i64 = parts
                    .iter()
                    .map(|l| mn_character(l, rho).unwrap() * mn_character(l, sigma).unwrap())
                    .sum();
                let want = if rho == sigma { z_rho(rho) } else { 0.into() };
                assert_eq!(num_bigint::BigInt::from(s), want, "n={n} ρ={rho} σ={sigma}");
            }
        }
        for l in &parts {
            let dim = mn_character(l, &Partition::ones(n)).unwrap();
            assert_eq!(num_bigint::BigInt::from(dim), l.hook_dimension().unwrap());
        }
    }
}

#[test]
fn replicates_do_not_depend_on_execution() {
    let cases = [
        (ModelSpec::Graphon(GraphonSpec::Product), BasisObject::Graph(Graph::complete(3)), 30),
        (ModelSpec::Permuton(PermutonSpec::Disc), BasisObject::Permutation("231".parse().unwrap()), 40),
        (
            ModelSpec::Thoma(ThomaParameter::new(vec![q(1, 2)], vec![q(1, 3)]).unwrap()),
            BasisObject::Partition("2,1".parse().unwrap()),
            40,
        ),
    ];
    for (model, obj, n) in cases {
        let seq = sample_statistic(&model, &obj, n, 300, RngSeed::new(77), Execution::Sequential).unwrap();
        let par = sample_statistic(&model, &obj, n, 300, RngSeed::new(77), Execution::Parallel).unwrap();
        let pooled = modgauss::parallel::with_threads(3, || {
            sample_statistic(&model, &obj, n, 300, RngSeed::new(77), Execution::Parallel).unwrap()
        });
        assert_eq!(seq, par);
        assert_eq!(seq, pooled);
    }
}

#[test]
fn exchangeable_labels() {
    // G(n, γ) is invariant under relabeling: vertex 1 and vertex n have the
    // same degree law.
    let spec = GraphonSpec::Product;
    let reps = 4000;
    let (mut first, mut last) = (0u64, 0u64);
    for r in 0..reps {
        let g: AdjacencyBits = sample_graph(&spec, 8, RngSeed::with_stream(5, r)).to_bits();
        first += g.degree(0);
        last += g.degree(7);
    }
    // mean degree 7/4; per-draw sd below 2
    let diff = (first as f64 - last as f64) / reps as f64;
    assert!(diff.abs() < 4.0 * 2.0 * (2.0 / reps as f64).sqrt(), "diff = {diff}");
}
