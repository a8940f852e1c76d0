use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use twotrees::enumerate::{
    canonical_counts, canonical_expansion, canonical_index_series, CountKind,
};
use twotrees::molecular::{
    expansion_to_index_series, factorial, planar_expansion, plane_expansion,
};
use twotrees::oracle::{burnside_count, oracle_counts, orbits};
use twotrees::series::Specialization;
use twotrees::species_index::{builtin, BuiltinSpecies, IndexKind};
use twotrees::{
    a_series, catalan, Family, IndexSeries, Mode, Monomial, Pointing, Rational, Sorts, UniSeries,
    Var,
};

fn term(vars: Vec<Var>) -> impl Strategy<Value = (Monomial, Rational)> {
    let n = vars.len();
    (prop::collection::vec(0u32..3, n), -4i64..=4).prop_map(move |(exps, c)| {
        let pairs: Vec<(Var, u32)> = vars
            .iter()
            .zip(exps)
            .filter(|(_, e)| *e > 0)
            .map(|(v, e)| (*v, e))
            .collect();
        (
            Monomial::from_pairs(&pairs),
            Rational::from_integer(c.into()),
        )
    })
}

fn sparse(sorts: Sorts, cap: u32, constant_free: bool) -> impl Strategy<Value = IndexSeries> {
    let mut vars = vec![Var::X(1), Var::X(2), Var::X(3)];
    if sorts == Sorts::Two {
        vars.extend([Var::Y(1), Var::Y(2)]);
    }
    prop::collection::vec(term(vars), 0..6).prop_map(move |terms| {
        let s = IndexSeries::from_terms(sorts, cap, terms);
        if constant_free {
            &s - &IndexSeries::constant(sorts, cap, s.constant_term())
        } else {
            s
        }
    })
}

fn operand_triple() -> impl Strategy<Value = (IndexSeries, IndexSeries, IndexSeries)> {
    prop_oneof![Just(Sorts::One), Just(Sorts::Two)].prop_flat_map(|sorts| {
        (1u32..=12).prop_flat_map(move |cap| {
            (
                sparse(sorts, cap, false),
                sparse(sorts, cap, false),
                sparse(sorts, cap, false),
            )
        })
    })
}

proptest! {
    #[test]
    fn ring_laws((f, g, h) in operand_triple()) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f - &f, IndexSeries::zero(f.sorts(), f.cap()));
    }

    #[test]
    fn plethysm_is_associative(
        (f, g, h) in (1u32..=10).prop_flat_map(|cap| (
            sparse(Sorts::One, cap, false),
            sparse(Sorts::One, cap, true),
            sparse(Sorts::One, cap, true),
        ))
    ) {
        let left = f.plethysm(&g).unwrap().plethysm(&h).unwrap();
        let right = f.plethysm(&g.plethysm(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn two_sort_substitution_respects_products(
        (f, g, gx, gy) in (1u32..=8).prop_flat_map(|cap| (
            sparse(Sorts::Two, cap, false),
            sparse(Sorts::Two, cap, false),
            sparse(Sorts::One, cap, true),
            sparse(Sorts::One, cap, true),
        ))
    ) {
        let sub = |s: &IndexSeries| s.substitute(&gx, Some(&gy)).unwrap();
        prop_assert_eq!(sub(&(&f * &g)), &sub(&f) * &sub(&g));
    }
}

#[test]
fn unlabelled_specialization_of_composition() {
    let cap = 20;
    let a = a_series(cap as usize);
    let a_plus =
        &IndexSeries::from_uni(Sorts::One, cap, Var::X(1), &a) - &IndexSeries::one(Sorts::One, cap);
    let g = &a - &UniSeries::one(cap as usize);
    let g_at = |m: usize| g.substitute_power(m);
    let half = Rational::new(1.into(), 2.into());
    let third = Rational::new(1.into(), 3.into());
    let e2 = (&(&g * &g) + &g_at(2)).scale(&half);
    let c3 = (&(&(&g * &g) * &g) + &g_at(3).scale(&Rational::from_integer(2.into()))).scale(&third);
    for (species, direct) in [(BuiltinSpecies::E2, e2), (BuiltinSpecies::C3, c3)] {
        let composed = builtin(species, IndexKind::Z, cap)
            .plethysm(&a_plus)
            .unwrap();
        assert_eq!(
            composed.specialize(Specialization::Unlabelled).unwrap(),
            direct,
            "{species:?}"
        );
    }
}

#[test]
fn molecular_coefficients_are_nonnegative() {
    for m in [plane_expansion(60).unwrap(), planar_expansion(60).unwrap()] {
        for (tag, c) in m.terms() {
            assert!(!c.is_negative(), "{tag}: {c}");
            assert!(!c.is_zero(), "{tag} stored with zero coefficient");
        }
    }
}

#[test]
fn plane_asymmetric_part_matches_oracle() {
    let m = plane_expansion(10).unwrap();
    let bar = expansion_to_index_series(&m, IndexKind::Gamma, 10)
        .specialize(Specialization::AsymmetricBar)
        .unwrap();
    for n in 0..=10 {
        let o = oracle_counts(n, Family::Plane.group(), Pointing::None).unwrap();
        assert_eq!(
            bar.coeff(n),
            Rational::from_integer(o.asymmetric.into()),
            "n={n}"
        );
    }
}

#[test]
fn pointed_counts_recombine() {
    let n_max = 25;
    for family in [Family::Plane, Family::Planar] {
        for mode in [Mode::Labelled, Mode::Unlabelled, Mode::Asymmetric] {
            let counts = |p| {
                CountKind::new(family, p, mode)
                    .ok()
                    .map(|k| canonical_counts(k, n_max).unwrap())
            };
            let (Some(none), Some(e), Some(t), Some(f)) = (
                counts(Pointing::None),
                counts(Pointing::Edge),
                counts(Pointing::Triangle),
                counts(Pointing::TriangleEdge),
            ) else {
                continue;
            };
            for n in 0..=n_max {
                assert_eq!(&none[n], &(&e[n] + &t[n] - &f[n]), "{family} {mode} n={n}");
            }
        }
    }
}

#[test]
fn index_series_specializations_reproduce_counts() {
    let cap = 20;
    for kind in CountKind::all() {
        let series = canonical_index_series(
            kind.family,
            kind.pointing,
            match kind.mode {
                Mode::Asymmetric => IndexKind::Gamma,
                _ => IndexKind::Z,
            },
            cap,
        )
        .unwrap();
        let mode = match kind.mode {
            Mode::Labelled => Specialization::Labelled,
            Mode::Unlabelled => Specialization::Unlabelled,
            Mode::Asymmetric => Specialization::AsymmetricBar,
        };
        let s = series.specialize(mode).unwrap();
        let counts = canonical_counts(kind, cap as usize).unwrap();
        for (n, c) in counts.iter().enumerate() {
            let mut v = s.coeff(n);
            if kind.mode == Mode::Labelled {
                v *= Rational::from_integer(factorial(n as u32));
            }
            assert_eq!(v, Rational::from_integer(c.clone()), "{kind} n={n}");
        }
    }
}

#[test]
fn orbit_sizes_sum_to_catalan() {
    for group in [Family::Plane.group(), Family::Planar.group()] {
        for n in 0..=10 {
            let recs = orbits(n, group).unwrap();
            let total: usize = recs.iter().map(|r| r.orbit_size).sum();
            assert_eq!(BigInt::from(total), catalan(n as u64), "{group:?} n={n}");
            let unlabelled = oracle_counts(n, group, Pointing::None).unwrap().unlabelled;
            assert_eq!(
                burnside_count(n, group).unwrap(),
                unlabelled,
                "{group:?} n={n}"
            );
            assert_eq!(recs.len() as u64, unlabelled);
        }
    }
}

#[test]
fn canonical_expansion_degree_matches_request() {
    let m = canonical_expansion(Family::Planar, Pointing::Edge, 7).unwrap();
    assert!(m.terms().all(|(t, _)| t.degree() <= 7));
}
