//! Property tests for the invariants each module promises.

use proptest::prelude::*;
use rand::Rng;

use sfm_lab::cut_dimension::{cut_dimension, enumerate_minimizers, verify_span_bound};
use sfm_lab::generators::{random_directed_graph, random_st_graph, random_undirected_graph, rng};
use sfm_lab::hard_instances::{make_pair_family, Adversary2n};
use sfm_lab::oracle::{check_diminishing_returns, check_submodular, check_symmetric};
use sfm_lab::perturbation::{compute_epsilon0, determining_basis, predict_from_basis, PerturbationContext};
use sfm_lab::rational::{int, ratio, Rational};
use sfm_lab::solvers::{brute_force_sfm, nontrivial_via_reduction, queyranne_minimize_checked};
use sfm_lab::weight_based::{
    build_star_matching_graph, check_weight_based_condition, cut_system_from_graph, GraphMode, WeightBasedFunction,
    WeightVector, WeightedGraph,
};
use sfm_lab::{QueryOracle, SetFunction, Subset, ValueOracle};

fn graph(seed: u64, n: usize, kind: u8) -> WeightedGraph {
    let mut r = rng(seed);
    match kind % 3 {
        0 => random_undirected_graph(&mut r, n, 0.6),
        1 => random_directed_graph(&mut r, n, 0.4),
        _ => random_st_graph(&mut r, n, 0.5, seed.is_multiple_of(2)),
    }
    .unwrap()
}

fn nonempty_undirected(seed: u64, n: usize) -> WeightedGraph {
    (0..)
        .map(|k| random_undirected_graph(&mut rng(seed.wrapping_mul(31).wrapping_add(k)), n, 0.6).unwrap())
        .find(|g| !g.edges().is_empty())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn counter_and_replay(seed: u64, n in 1usize..=6, masks in proptest::collection::vec(any::<u32>(), 0..30)) {
        let f = WeightBasedFunction::from_graph(&graph(seed, n, 0));
        let mut o = ValueOracle::new(&f);
        for (k, m) in masks.iter().enumerate() {
            o.evaluate(Subset::new(n, m & ((1 << n) - 1)).unwrap()).unwrap();
            prop_assert_eq!(o.counter(), k + 1);
        }
        prop_assert!(o.transcript().replay_against(&f).is_none());
    }

    #[test]
    fn weight_based_systems_are_submodular(seed: u64, n in 1usize..=6, kind: u8) {
        let g = graph(seed, n, kind);
        let f = WeightBasedFunction::from_graph(&g);
        prop_assert_eq!(check_weight_based_condition(f.system()).unwrap(), None);
        prop_assert_eq!(check_submodular(&f).unwrap(), None);
        prop_assert_eq!(check_diminishing_returns(&f).unwrap(), None);
        if g.mode() == GraphMode::Undirected {
            prop_assert_eq!(check_symmetric(&f).unwrap(), None);
        }
        let ext = f.system().to_extensional().unwrap();
        for s in Subset::all(n) {
            prop_assert_eq!(ext.active(s), f.system().active(s));
        }
    }

    #[test]
    fn adversary_stays_consistent(n in 2usize..=8, masks in proptest::collection::vec(any::<u32>(), 0..40), guess in -1i64..=1) {
        let mut adv = Adversary2n::new(n).unwrap();
        for m in masks {
            adv.answer(Subset::new(n, m & ((1 << n) - 1)).unwrap()).unwrap();
            prop_assert!(adv.distinct_important() <= adv.decoy_count() + 2);
        }
        let game = adv.finalize(&int(guess));
        prop_assert!(adv.transcript().replay_against(&game.instance).is_none());
        prop_assert_eq!(game.instance.true_min(), game.true_min.clone());
    }

    #[test]
    fn cut_dimension_invariances(seed: u64, n in 2usize..=6, kind: u8, scale in 1i64..5, shift in 0usize..8) {
        let g = graph(seed, n, kind);
        let f = WeightBasedFunction::from_graph(&g);
        let cd = cut_dimension(&f, false).unwrap();
        prop_assert!(cd.d <= f.ground_size() + 1);
        prop_assert!(verify_span_bound(&f).unwrap().passed());

        let scaled = f.with_weights(f.weights().scaled(&ratio(scale, 3)).unwrap()).unwrap();
        let cs = cut_dimension(&scaled, false).unwrap();
        prop_assert_eq!(&cs.family.sets, &cd.family.sets);
        prop_assert_eq!(cs.d, cd.d);

        let mut edges = g.edges().to_vec();
        if !edges.is_empty() {
            let k = shift % edges.len();
            edges.rotate_left(k);
        }
        let rotated = WeightedGraph::new(g.n_vertices(), g.mode(), edges).unwrap();
        prop_assert_eq!(cut_dimension(&WeightBasedFunction::from_graph(&rotated), false).unwrap().d, cd.d);
    }

    #[test]
    fn basis_determines_minimizers_in_the_box(seed: u64, n in 3usize..=6) {
        let g = nonempty_undirected(seed, n);
        let f = WeightBasedFunction::from_graph(&g);
        let pbox = compute_epsilon0(&f, true).unwrap();
        let basis = determining_basis(&f, true).unwrap();
        let fam = enumerate_minimizers(&f, true).unwrap();
        let mut r = rng(seed ^ 0x5eed);
        for _ in 0..20 {
            let w: Vec<Rational> = f
                .weights()
                .as_slice()
                .iter()
                .map(|x| x * (int(1) + &pbox.epsilon0 * ratio(r.gen_range(-4..=4), 4)))
                .collect();
            prop_assert!(pbox.contains(&w));
            let h = f.with_weights(WeightVector::new(w).unwrap()).unwrap();
            let at_basis: Vec<Rational> = basis.iter().map(|&b| h.value(b)).collect();
            for &s in &fam.sets {
                prop_assert_eq!(predict_from_basis(&f, &basis, &at_basis, s), Some(h.value(s)));
            }
        }
    }

    #[test]
    fn witnesses_satisfy_their_invariants(seed: u64, n in 3usize..=6, masks in proptest::collection::vec(any::<u32>(), 0..6)) {
        let g = nonempty_undirected(seed, n);
        let f = WeightBasedFunction::from_graph(&g);
        let ctx = PerturbationContext::new(&f, true).unwrap();
        let d = ctx.d();
        let queries: Vec<Subset> = masks
            .iter()
            .take(d.saturating_sub(1))
            .map(|m| Subset::new(n, m & ((1 << n) - 1)).unwrap())
            .collect();
        let wit = ctx.find_witness(&queries).unwrap();
        // A zero-value cut leaves nothing to perturb.
        prop_assert_eq!(wit.is_some(), d > 0);
        if let Some(w) = &wit {
            prop_assert_eq!(ctx.check_witness(w, &queries), Ok(()));
        }
        prop_assert!(ctx.find_witness(ctx.basis()).unwrap().is_none());
    }

    #[test]
    fn solvers_agree_on_cuts(seed: u64, n in 2usize..=7) {
        let f = WeightBasedFunction::from_graph(&random_undirected_graph(&mut rng(seed), n, 0.5).unwrap());
        let brute = brute_force_sfm(&mut ValueOracle::new(&f), true).unwrap();
        let red = nontrivial_via_reduction(&mut ValueOracle::new(&f)).unwrap();
        let q = queyranne_minimize_checked(&f).unwrap();
        for r in [&red, &q] {
            prop_assert_eq!(&r.min_value, &brute.min_value);
            prop_assert_eq!(f.value(r.argmin), r.min_value.clone());
        }
        prop_assert!(q.queries_used <= n * n * n + 3 * n * n);
    }
}

#[test]
fn pair_family_members_differ_in_one_set() {
    for n in 4..=6 {
        let fam = make_pair_family(n).unwrap();
        for f in fam.variants().values() {
            let diff = Subset::all(n).filter(|&s| f.value(s) != fam.base().value(s)).count();
            assert_eq!(diff, 1);
        }
    }
}

#[test]
fn star_matching_min_cut_is_two() {
    for n in 3..=12 {
        let g = build_star_matching_graph(n).unwrap();
        let f = WeightBasedFunction::from_graph(&g);
        assert_eq!(brute_force_sfm(&mut ValueOracle::new(&f), true).unwrap().min_value, int(2));
        let (sys, w) = cut_system_from_graph(&g);
        assert_eq!(sys.m(), w.len());
    }
}

#[test]
fn brute_force_is_judged_correct_by_the_adversary() {
    for n in 2..=8 {
        let mut adv = Adversary2n::new(n).unwrap();
        let r = brute_force_sfm(&mut adv, false).unwrap();
        let game = adv.finalize(&r.min_value);
        assert_eq!(game.verdict, sfm_lab::hard_instances::Verdict::Correct);
        assert!(adv.queries_used() >= 2 * n);
    }
}
