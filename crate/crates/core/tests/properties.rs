use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superzono::corpus::{random_arrangement, random_bihomogeneous, random_element, random_rational};
use superzono::inverse_basis::{build_family, family_size, split_counts};
use superzono::invariants::{fvector_generic, hilbert_via_recursion, hilbert_via_tutte};
use superzono::io::{canonical_json, parse_arrangement};
use superzono::matroid::{
    activity_correspondence, count_independent_sets, count_spanning_sets, enumerate_bases, thicken_tutte, tutte,
    tutte_subset_sum, TutteMethod,
};
use superzono::perp::{hilbert_via_perp, membership_check, perp_kernel_direct};
use superzono::{Arrangement, Bidegree, Hyperplane, PerpSolver, Rational, SuperElement};

fn arrangement(max_n: usize, max_m: usize) -> impl Strategy<Value = Arrangement> {
    (1..=max_n, 0..=max_m).prop_flat_map(|(n, m)| {
        let normal = prop::collection::vec(-2i64..=2, n).prop_filter("nonzero normal", |v| v.iter().any(|&c| c != 0));
        prop::collection::vec(normal, m).prop_map(move |vs| {
            Arrangement::from_normals(n, vs.into_iter().map(|v| v.into_iter().map(Rational::from).collect()).collect())
                .unwrap()
        })
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn product(n: usize, factors: impl IntoIterator<Item = SuperElement>) -> SuperElement {
    factors.into_iter().fold(SuperElement::one(n), |acc, f| &acc * &f)
}

fn alpha(a: &Arrangement, i: usize) -> SuperElement {
    SuperElement::linear_form(a.normal(i))
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rational>> {
    loop {
        let m: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| Rational::from(rng.gen_range(-2..=2i64))).collect()).collect();
        if superzono::linalg::rank(&m, n) == n {
            return m;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flats_are_closed_and_complementary(a in arrangement(4, 6)) {
        for f in a.flats() {
            prop_assert_eq!(a.rank_of(&f.containing_set) + f.dim(), a.dim());
            prop_assert_eq!(a.closure(&f.containing_set), f.containing_set.clone());
            for h in 0..a.len() {
                let contains = f.subspace_basis.iter().all(|v| {
                    a.normal(h).iter().zip(v).map(|(x, y)| x * y).sum::<Rational>().is_zero()
                });
                prop_assert_eq!(contains, f.containing_set.contains(&h));
            }
            prop_assert_eq!(f.rho, a.len() - f.containing_set.len());
        }
    }

    #[test]
    fn deletion_and_restriction_ranks(a in arrangement(4, 6)) {
        for h in 0..a.len() {
            let del = a.delete(h).unwrap();
            let drop = usize::from(a.is_coloop(h));
            prop_assert_eq!(del.rank() + drop, a.rank());
            if !a.is_loop(h) {
                prop_assert_eq!(a.restrict(h).unwrap().rank() + 1, a.rank());
            }
        }
    }

    #[test]
    fn tutte_methods_and_counts(a in arrangement(4, 7)) {
        let polys: Vec<_> = TutteMethod::ALL.iter().map(|&m| tutte(&a, m)).collect();
        prop_assert_eq!(&polys[0], &polys[1]);
        prop_assert_eq!(&polys[1], &polys[2]);
        let t = &polys[0];
        let (one, two) = (Rational::one(), Rational::from(2));
        prop_assert_eq!(t.eval(&one, &one), Rational::from(enumerate_bases(&a).len()));
        prop_assert_eq!(t.eval(&two, &one), Rational::from(count_independent_sets(&a)));
        prop_assert_eq!(t.eval(&one, &two), Rational::from(count_spanning_sets(&a)));
        prop_assert_eq!(thicken_tutte(t, a.rank(), 2).unwrap(), tutte_subset_sum(&a.thicken(2)));
    }

    #[test]
    fn activity_correspondence_holds(a in arrangement(4, 7)) {
        if let Some(rep) = activity_correspondence(&a) {
            prop_assert!(rep.passed(), "{:?}", rep.failures);
        }
    }

    #[test]
    fn tutte_and_recursion_agree(a in arrangement(4, 7)) {
        prop_assert_eq!(hilbert_via_tutte(&a), hilbert_via_recursion(&a));
    }

    #[test]
    fn matroid_invariance(a in arrangement(4, 6), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n = a.dim();
        let mut perm: Vec<usize> = (0..a.len()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let moved = a.transform(&random_invertible(&mut rng, n)).permute(&perm);
        let scaled = Arrangement::new(
            n,
            moved
                .hyperplanes()
                .iter()
                .map(|h| {
                    let c = loop {
                        let c = random_rational(&mut rng, 3);
                        if !c.is_zero() {
                            break c;
                        }
                    };
                    Hyperplane::new(h.normal.iter().map(|x| x * &c).collect(), h.label.clone())
                })
                .collect(),
        )
        .unwrap();
        prop_assert_eq!(tutte_subset_sum(&a), tutte_subset_sum(&scaled));
        prop_assert_eq!(hilbert_via_tutte(&a), hilbert_via_tutte(&scaled));
        prop_assert_eq!(hilbert_via_recursion(&a), hilbert_via_recursion(&scaled));
    }

    #[test]
    fn fvector_sums(a in arrangement(4, 7)) {
        let f = fvector_generic(&a);
        let series = hilbert_via_tutte(&a);
        prop_assert_eq!(f.total() as i64, series.eval_ones());
        prop_assert_eq!(f.counts[a.dim()] as usize, count_independent_sets(&a));
        prop_assert_eq!(series.eval(&Rational::one(), &Rational::zero()), Rational::from(count_independent_sets(&a)));
    }

    #[test]
    fn family_size_and_split(a in arrangement(4, 7)) {
        prop_assert_eq!(family_size(&a) as i64, hilbert_via_tutte(&a).eval_ones());
        if let Some(split) = split_counts(&a) {
            prop_assert!(split.consistent(), "{:?}", split);
        }
    }

    #[test]
    fn json_round_trip(a in arrangement(4, 7), mult in 1usize..=3) {
        let thick = a.thicken(mult);
        let text = canonical_json(&thick);
        let back = parse_arrangement(&text).unwrap();
        prop_assert_eq!(&back, &thick);
        prop_assert_eq!(canonical_json(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn perp_equals_tutte(a in arrangement(3, 5)) {
        prop_assert_eq!(hilbert_via_perp(&a, 1).unwrap(), hilbert_via_tutte(&a));
    }

    #[test]
    fn degree_truncation(a in arrangement(3, 4), k in -1i32..=2) {
        let s = hilbert_via_perp(&a, k).unwrap();
        let m = a.len() as i64;
        for (i, j, _) in s.terms() {
            prop_assert!((i as i64) < (m + k as i64).max(1), "q^{} with m = {} k = {}", i, m, k);
            if k == 1 {
                prop_assert!(j as usize <= a.rank());
            }
        }
    }

    #[test]
    fn fast_kernels_match_direct(a in arrangement(3, 3), k in -1i32..=1) {
        let solver = PerpSolver::new(&a, k).unwrap();
        for i in 0..=solver.bosonic_bound() {
            for j in 0..=a.dim() as u32 {
                let bd = Bidegree::new(i, j);
                prop_assert_eq!(solver.kernel(bd), perp_kernel_direct(&a, k, bd).unwrap());
            }
        }
    }

    #[test]
    fn products_of_forms_are_in_the_inverse_system(a in arrangement(3, 5), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n = a.dim();
        let solver = PerpSolver::new(&a, 1).unwrap();
        let (mut dset, mut aset) = (Vec::new(), Vec::new());
        for i in 0..a.len() {
            match rng.gen_range(0..3) {
                0 => dset.push(alpha(&a, i).euler_d()),
                1 => aset.push(alpha(&a, i)),
                _ => {}
            }
        }
        let f = &product(n, dset) * &product(n, aset);
        prop_assert!(membership_check(&a, 1, &f).unwrap());
        prop_assert!(solver.contains(&f));
    }

    #[test]
    fn solver_membership_matches_generic_check(a in arrangement(3, 4), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let solver = PerpSolver::new(&a, 1).unwrap();
        let kernels = solver.all_kernels();
        for _ in 0..4 {
            // half the time a combination of kernel elements, otherwise random
            let f = if rng.gen_bool(0.5) && !kernels.is_empty() {
                let kb = kernels.values().nth(rng.gen_range(0..kernels.len())).unwrap();
                kb.elements.iter().fold(SuperElement::zero(a.dim()), |acc, e| &acc + &e.scale(&random_rational(&mut rng, 2)))
            } else {
                random_element(&mut rng, a.dim(), 3, 3)
            };
            prop_assert_eq!(solver.contains(&f), membership_check(&a, 1, &f).unwrap());
        }
    }

    #[test]
    fn multiplying_by_a_coordinate_hyperplane(rest in arrangement(3, 4)) {
        let n = rest.dim();
        let mut e1 = vec![Rational::zero(); n];
        e1[0] = Rational::one();
        let mut hs = vec![Hyperplane::new(e1, "x1")];
        hs.extend(rest.hyperplanes().iter().cloned());
        let a = Arrangement::new(n, hs).unwrap();
        let big = PerpSolver::new(&a, 1).unwrap();
        let x1 = SuperElement::x(n, 0);
        for kb in PerpSolver::new(&rest, 1).unwrap().all_kernels().values() {
            for e in &kb.elements {
                prop_assert!(big.contains(&(&x1 * e)), "x1 * {}", e);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derivative_implication(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n = rng.gen_range(2..=3);
        let ell: Vec<Rational> = loop {
            let v: Vec<Rational> = (0..n).map(|_| Rational::from(rng.gen_range(-2..=2i64))).collect();
            if v.iter().any(|c| !c.is_zero()) {
                break v;
            }
        };
        let lambda = SuperElement::linear_form(&ell);
        // forms orthogonal to the line are invisible to λ ⊙ (-)
        let orth = |rng: &mut ChaCha8Rng| {
            let v: Vec<Rational> = (0..n).map(|_| random_rational(rng, 2)).collect();
            let dot: Rational = v.iter().zip(&ell).map(|(a, b)| a * b).sum();
            let norm: Rational = ell.iter().map(|c| c * c).sum();
            let w: Vec<Rational> = v.iter().zip(&ell).map(|(a, b)| a - &(&dot / &norm) * b).collect();
            SuperElement::linear_form(&w)
        };
        let generic = |rng: &mut ChaCha8Rng| {
            SuperElement::linear_form(&(0..n).map(|_| random_rational(rng, 3)).collect::<Vec<_>>())
        };
        let s = rng.gen_range(0..=2);
        let u = rng.gen_range(0..=2);
        let mut factors: Vec<SuperElement> = (0..s).map(|_| orth(&mut rng)).collect();
        factors.extend((0..u).map(|_| generic(&mut rng)));
        let word = Bidegree::new(0, rng.gen_range(0..=n as u32));
        factors.push(random_bihomogeneous(&mut rng, n, word, 2));
        let f = product(n, factors);
        let alpha = loop {
            let a = generic(&mut rng);
            if !a.is_zero() {
                break a;
            }
        };
        let p = rng.gen_range(0..=u as u32 + 2);
        let lp = lambda.pow(p);
        if lp.apply(&(&alpha * &f)).unwrap().is_zero() {
            prop_assert!(lp.apply(&f).unwrap().is_zero());
        }
    }

    #[test]
    fn canonical_form_ignores_term_order(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n = rng.gen_range(1..=3);
        let f = random_element(&mut rng, n, 2, 4);
        let g = random_element(&mut rng, n, 2, 4);
        let mut terms: Vec<_> = f.terms().map(|(x, t, c)| (x.clone(), t, c.clone())).collect();
        terms.reverse();
        let mut rebuilt = SuperElement::zero(n);
        for (x, t, c) in terms {
            rebuilt.add_term(x, t, c);
        }
        prop_assert_eq!(&rebuilt, &f);
        prop_assert_eq!(rebuilt.multiply(&g).unwrap(), f.multiply(&g).unwrap());
        prop_assert_eq!(rebuilt.apply(&g).unwrap(), f.apply(&g).unwrap());
    }
}

#[test]
fn family_elements_have_product_shape() {
    let mut r = rng(5);
    for _ in 0..10 {
        let a = random_arrangement(&mut r, 3, 4, 2);
        for (d, e) in build_family(&a).elements {
            let mut used: Vec<usize> = d.e.iter().chain(&d.s).chain(&d.i).chain(&d.t).copied().collect();
            let len = used.len();
            used.sort_unstable();
            used.dedup();
            assert_eq!(used.len(), len, "{d:?}");
            let alphas = d.e.iter().chain(&d.s).map(|&h| alpha(&a, h));
            let mut ds: Vec<usize> = d.i.iter().chain(&d.t).copied().collect();
            ds.sort_unstable();
            let expected = &product(3, alphas) * &product(3, ds.iter().map(|&h| alpha(&a, h).euler_d()));
            assert_eq!(e, expected, "{d:?}");
        }
    }
}
