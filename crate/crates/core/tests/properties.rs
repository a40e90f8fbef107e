mod common;

use common::*;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use sepcat::cmod::{
    kernel_of, random_bimodule, random_left_module, random_short_exact_sequence, tensor_square, Bimodule, BimoduleDoc,
};
use sepcat::cohomology::{
    build_hm_complex, cohomology_dims, hm_cohomology, invariants_dim, les_analysis, obstruction_cocycle,
    obstruction_with_section, shifted_section, DEFAULT_BUDGET,
};
use sepcat::lincat::{linearize, random_presentation, FiniteCatPresentation};
use sepcat::separability::{
    module_section, reduce_family, separability_system, solve_separability, verify_family, zelinsky_report,
    SeparabilityFamily,
};
use sepcat::{exec, Error, FieldSpec, FinLinCat, Matrix, Result as SResult};

/// Fixed seed so every run sees the same cases.
fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5e9ca7),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn field_of(i: usize) -> FieldSpec {
    fields()[i % 4]
}

prop_compose! {
    fn matrix()(f in 0usize..4, rows in 0usize..6, cols in 0usize..6)
        (entries in proptest::collection::vec(-3i64..=3, rows * cols), f in Just(f), rows in Just(rows), cols in Just(cols))
        -> Matrix
    {
        let k = field_of(f);
        Matrix::from_fn(k, rows, cols, |r, c| k.from_i64(entries[r * cols + c]))
    }
}

fn instance(seed: u64, f2: bool) -> FinLinCat {
    let k = if f2 {
        FieldSpec::prime(2).unwrap()
    } else {
        FieldSpec::Rationals
    };
    linearize(&random_presentation(seed, 6), k).unwrap()
}

/// Skips draws whose complexes do not fit the default budget.
fn fits<T>(r: SResult<T>) -> Result<T, TestCaseError> {
    match r {
        Ok(v) => Ok(v),
        Err(Error::BudgetExceeded { .. }) => Err(TestCaseError::reject("over budget")),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

// ---- exact linear algebra ---------------------------------------------------

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn kernel_basis_spans_the_kernel(a in matrix()) {
        let k = a.kernel_basis();
        prop_assert_eq!(k.rows(), a.cols());
        prop_assert_eq!(a.rank() + k.cols(), a.cols());
        prop_assert!(a.mul(&k).unwrap().is_zero());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn rref_is_idempotent_and_rank_is_transpose_invariant(a in matrix()) {
        let r = a.rref();
        prop_assert_eq!(&r.reduced.rref().reduced, &r.reduced);
        prop_assert_eq!(r.rank, a.transpose().rank());
        prop_assert_eq!(r.pivot_cols.len(), r.rank);
    }

    #[test]
    fn rref_does_not_depend_on_execution_strategy(a in matrix()) {
        prop_assert_eq!(exec::sequential(|| a.rref()).reduced, a.rref().reduced);
    }

    #[test]
    fn solve_is_sound(a in matrix(), xs in proptest::collection::vec(-3i64..=3, 6), bs in proptest::collection::vec(-3i64..=3, 6)) {
        let k = a.field();
        let x0: Vec<_> = (0..a.cols()).map(|i| k.from_i64(xs[i])).collect();
        let b = a.mul_vec(&x0);
        let x = a.solve_vec(&b).unwrap().expect("consistent system");
        prop_assert_eq!(a.mul_vec(&x), b);

        let b: Vec<_> = (0..a.rows()).map(|i| k.from_i64(bs[i])).collect();
        match a.solve_vec(&b).unwrap() {
            Some(x) => prop_assert_eq!(a.mul_vec(&x), b),
            None => {
                let aug = a.hstack(&Matrix::column_vector(k, b)).unwrap();
                prop_assert!(aug.rank() > a.rank());
            }
        }
    }

    #[test]
    fn scalars_are_canonical(f in 0usize..4, a in -50i64..50, b in 1i64..50, m in 1i64..10) {
        let k = field_of(f);
        let den = k.from_i64(b);
        prop_assume!(!den.is_zero() && !k.from_i64(b * m).is_zero());
        let s = k.from_i64(a).checked_div(&den).unwrap();
        let t = k.from_i64(a * m).checked_div(&k.from_i64(b * m)).unwrap();
        prop_assert_eq!(&s, &t);
        prop_assert_eq!(s.to_string(), t.to_string());
        prop_assert_eq!(k.parse_scalar(&s.to_string()).unwrap(), s);
    }
}

// ---- categories and bimodules -----------------------------------------------

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn linearized_presentations_validate(seed in 0u64..10_000, f in 0usize..4) {
        let p = random_presentation(seed, 8);
        let c = linearize(&p, field_of(f)).unwrap();
        prop_assert!(c.validate().ok(), "{}", c.validate().violations.join("; "));
        for e in c.basis_elements() {
            let id = c.basis_id(&e.label).unwrap();
            let v = c.unit_vector(id);
            let (x, y) = (e.source, e.target);
            prop_assert_eq!(&c.compose_vectors(x, y, y, c.identity(y), &v), &v);
            prop_assert_eq!(&c.compose_vectors(x, x, y, &v, c.identity(x)), &v);
        }
        prop_assert_eq!(FinLinCat::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn discrete_categories_are_groupoids_and_delta(n in 1usize..6) {
        let cl = FiniteCatPresentation::discrete(n).unwrap().classify();
        prop_assert!(cl.is_discrete && cl.is_groupoid && cl.is_delta);
    }

    #[test]
    fn random_bimodules_are_valid_and_deterministic(seed in 0u64..1000, s in 0u64..1000, f2 in any::<bool>()) {
        let c = instance(seed, f2);
        let m = random_bimodule(&c, s, 2).unwrap();
        prop_assert!(m.validate(&c).ok());
        prop_assert!(m.max_component_dim() <= 2);
        prop_assert_eq!(&random_bimodule(&c, s, 2).unwrap(), &m);
        let doc: BimoduleDoc = serde_json::from_str(&serde_json::to_string(&m.to_doc(&c)).unwrap()).unwrap();
        prop_assert_eq!(Bimodule::from_doc(&c, &doc).unwrap(), m);
    }

    #[test]
    fn composition_map_and_its_kernel(seed in 0u64..1000, f2 in any::<bool>()) {
        let c = instance(seed, f2);
        let (t, comp) = tensor_square(&c);
        prop_assert!(t.validate(&c).ok());
        prop_assert!(comp.validate(&c, &t, &sepcat::cmod::canonical_bimodule(&c)).ok());
        let (k, incl) = kernel_of(&c, &t, &comp).unwrap();
        prop_assert!(k.validate(&c).ok());
        prop_assert!(incl.validate(&c, &k, &t).ok());
        for x in 0..c.object_count() {
            for y in 0..c.object_count() {
                prop_assert_eq!(k.dim(x, y), t.dim(x, y) - comp.component(x, y).rank());
            }
        }
    }

    #[test]
    fn random_sequences_are_exact(seed in 0u64..1000, s in 0u64..1000, f2 in any::<bool>()) {
        let c = instance(seed, f2);
        let ses = random_short_exact_sequence(&c, s, 4).unwrap();
        prop_assert!(ses.validate(&c).ok());
    }
}

// ---- separability -----------------------------------------------------------

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn solver_answers_are_certified(seed in 0u64..10_000, f2 in any::<bool>()) {
        let c = instance(seed, f2);
        if let Some(fam) = solve_separability(&c).unwrap() {
            prop_assert!(verify_family(&c, &fam).unwrap().ok());
            let back = SeparabilityFamily::from_json(&c, &fam.to_json(&c)).unwrap();
            prop_assert_eq!(back, fam);
        }
    }

    #[test]
    fn solver_agrees_with_exhaustive_search_over_f2(seed in 0u64..10_000) {
        let c = instance(seed, true);
        let Some(feasible) = f2_exhaustive_feasible(&c, 12) else {
            return Err(TestCaseError::reject("too many unknowns"));
        };
        prop_assert_eq!(solve_separability(&c).unwrap().is_some(), feasible);
    }

    #[test]
    fn groupoids_follow_their_orders(n in 1usize..=2, orders in proptest::collection::vec(1usize..=4, 0..=2), f in 0usize..4) {
        // the system has n^2 |G|^2 unknowns; keep it small
        prop_assume!(orders.iter().product::<usize>() <= 6);
        let p = FiniteCatPresentation::connected_groupoid(n, &orders).unwrap();
        let k = field_of(f);
        let c = linearize(&p, k).unwrap();
        prop_assert_eq!(solve_separability(&c).unwrap().is_some(), sizes_invertible(&p, k));
    }

    #[test]
    fn delta_categories_are_separable_only_when_discrete(seed in 0u64..10_000, f2 in any::<bool>()) {
        let p = random_presentation(seed, 6);
        let cl = p.classify();
        prop_assume!(cl.is_delta);
        let k = if f2 { FieldSpec::prime(2).unwrap() } else { FieldSpec::Rationals };
        let c = linearize(&p, k).unwrap();
        prop_assert_eq!(solve_separability(&c).unwrap().is_some(), cl.is_discrete);
    }

    #[test]
    fn reduction_recomposes_with_independent_terms(seed in 0u64..10_000, f2 in any::<bool>()) {
        let c = instance(seed, f2);
        let Some(fam) = solve_separability(&c).unwrap() else {
            return Err(TestCaseError::reject("not separable"));
        };
        let red = reduce_family(&c, &fam).unwrap();
        prop_assert_eq!(red.recompose(&c), fam);
        for x in 0..c.object_count() {
            for y in 0..c.object_count() {
                let n = red.term_count(x, y);
                prop_assert_eq!(red.f_matrix(&c, x, y).rank(), n);
                prop_assert_eq!(red.g_matrix(&c, x, y).rank(), n);
            }
        }
    }

    #[test]
    fn shifting_by_homogeneous_solutions_keeps_a_family(seed in 0u64..10_000, f2 in any::<bool>(), coeffs in proptest::collection::vec(-2i64..=2, 8)) {
        let c = instance(seed, f2);
        let sys = separability_system(&c).unwrap();
        let Some(fam) = sys.solve(&c).unwrap() else {
            return Err(TestCaseError::reject("not separable"));
        };
        let mut v = sys.family_to_vector(&fam);
        for (h, &a) in sys.homogeneous_basis(&c).iter().zip(coeffs.iter().cycle()) {
            let a = c.field().from_i64(a);
            for (vi, hi) in v.iter_mut().zip(sys.family_to_vector(h)) {
                *vi = &*vi + &(&a * &hi);
            }
        }
        prop_assert!(verify_family(&c, &sys.family_from_vector(&c, &v)).unwrap().ok());
        prop_assert_eq!(sys.solution_dim().unwrap(), Some(sys.unknowns() - sys.rank()));
    }

    #[test]
    fn modules_split_and_embeddings_are_injective(seed in 0u64..10_000, s in 0u64..100, f2 in any::<bool>()) {
        let c = instance(seed, f2);
        let Some(fam) = solve_separability(&c).unwrap() else {
            return Err(TestCaseError::reject("not separable"));
        };
        let red = reduce_family(&c, &fam).unwrap();
        let m = random_left_module(&c, s, 2).unwrap();
        let sec = module_section(&c, &red, &m).unwrap();
        prop_assert!(sec.section_ok && sec.linear_ok, "{:?}", sec.failures);
        let z = zelinsky_report(&c, &red).unwrap();
        for p in &z.pairs {
            prop_assert!(p.injective && p.range_in_v && p.rank == p.hom_dim && p.bound >= p.hom_dim);
        }
    }
}

// ---- cohomology -------------------------------------------------------------

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn bar_differentials_square_to_zero(seed in 0u64..10_000, s in 0u64..100, f2 in any::<bool>()) {
        let c = instance(seed, f2);
        let m = random_bimodule(&c, s, 2).unwrap();
        let cx = fits(build_hm_complex(&c, &m, 2, DEFAULT_BUDGET))?;
        for n in 0..cx.differentials.len() - 1 {
            prop_assert!(cx.d(n + 1).mul(cx.d(n)).unwrap().is_zero());
        }
        let seq = exec::sequential(|| build_hm_complex(&c, &m, 2, DEFAULT_BUDGET)).unwrap();
        for n in 0..cx.differentials.len() {
            prop_assert_eq!(seq.d(n), cx.d(n));
        }
    }

    #[test]
    fn degree_zero_is_the_invariants(seed in 0u64..10_000, s in 0u64..100, f2 in any::<bool>()) {
        let c = instance(seed, f2);
        let m = random_bimodule(&c, s, 2).unwrap();
        let cx = fits(build_hm_complex(&c, &m, 1, DEFAULT_BUDGET))?;
        prop_assert_eq!(cohomology_dims(&cx).dim_h(0), invariants_dim(&c, &m));
    }

    #[test]
    fn feasibility_matches_the_obstruction(seed in 0u64..10_000, f2 in any::<bool>()) {
        let c = instance(seed, f2);
        let o = fits(obstruction_cocycle(&c, DEFAULT_BUDGET))?;
        prop_assert_eq!(solve_separability(&c).unwrap().is_some(), o.is_coboundary);
    }

    #[test]
    fn obstruction_verdict_ignores_the_section(seed in 0u64..10_000, f2 in any::<bool>(), raw in proptest::collection::vec(-2i64..=2, 64)) {
        let c = instance(seed, f2);
        let base = fits(obstruction_cocycle(&c, DEFAULT_BUDGET))?;
        let (t, comp) = tensor_square(&c);
        let (k, _) = kernel_of(&c, &t, &comp).unwrap();
        let mut it = raw.iter().cycle();
        let shifts: Vec<Vec<_>> = (0..c.object_count())
            .map(|x| (0..k.dim(x, x)).map(|_| c.field().from_i64(*it.next().unwrap())).collect())
            .collect();
        let sigma = shifted_section(&c, &shifts).unwrap();
        let o = obstruction_with_section(&c, &sigma, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(o.is_coboundary, base.is_coboundary);
    }

    #[test]
    fn long_exact_sequences_are_exact(seed in 0u64..10_000, s in 0u64..100, f2 in any::<bool>()) {
        let c = instance(seed, f2);
        let ses = random_short_exact_sequence(&c, s, 3).unwrap();
        let r = fits(les_analysis(&c, &ses, 1, DEFAULT_BUDGET))?;
        prop_assert!(r.all_exact(), "{:?}", r.positions);
    }

    #[test]
    fn separable_categories_have_no_higher_cohomology(seed in 0u64..10_000, s in 0u64..100, f2 in any::<bool>()) {
        let c = instance(seed, f2);
        prop_assume!(solve_separability(&c).unwrap().is_some());
        let m = random_bimodule(&c, s, 2).unwrap();
        let h = fits(hm_cohomology(&c, &m, 2, DEFAULT_BUDGET))?;
        prop_assert_eq!((h.dim_h(1), h.dim_h(2)), (0, 0));
    }
}
