//! Property tests for the algebraic laws each module promises. Every case
//! draws a seed and builds its inputs with the shared seeded generators.
//! The proptest runner itself is seeded too, so runs are reproducible; set
//! `PROPTEST_RNG_SEED` to explore other cases.

use std::collections::BTreeMap;

use motivic_core::grothendieck_ring::{
    ClassSymbol, LocalizedMotivicElement, MotivicElement, Norm, SymbolRegistry,
};
use motivic_core::presburger::{
    eliminate_quantifiers, evaluate, expand_gf, generating_function, parse_formula, project,
    Formula, GfOptions, LinearForm, PresburgerError,
};
use motivic_core::rational_series::{
    MonomialSubstitution, MotivicRationalFunction, TAtom, TruncatedSeries,
};
use motivic_core::semialg_eval::{
    evaluate_condition, parse_condition, Condition, ExtInt, Order, Polynomial, PowerSeriesValue,
    Truth,
};
use motivic_core::snc_zeta::{
    cylinder_class, multi_indices, property_p, zeta_at_point_closed_form,
    zeta_at_point_series_truncated, zeta_closed_form, zeta_series_truncated, ComponentSet,
};
use motivic_core::specialization::{
    motivic_volume_integral, rational, u_to_l_inverse, volume_numeric_limit, volume_partial_sum,
    volume_tail_exponent, zeta_f, zeta_two_variable, VolumeData, VolumeExponent,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

use common::*;

fn config(cases: u32) -> ProptestConfig {
    let seed = std::env::var("PROPTEST_RNG_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5eed);
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        ..ProptestConfig::default()
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn symbols() -> Vec<ClassSymbol> {
    let mut reg = SymbolRegistry::new();
    vec![
        reg.declare_symbol("A", 0).unwrap(),
        reg.declare_symbol("B", 1).unwrap(),
        reg.declare_symbol("C", 2).unwrap(),
    ]
}

fn random_counts(rng: &mut ChaCha8Rng) -> BTreeMap<String, BigRational> {
    ["A", "B", "C"]
        .iter()
        .map(|s| (s.to_string(), int(rng.gen_range(0..=9))))
        .collect()
}

fn random_exponent(rng: &mut ChaCha8Rng, nvars: usize, max: u32, nonzero: bool) -> Vec<u32> {
    loop {
        let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max)).collect();
        if !nonzero || e.iter().any(|&x| x > 0) {
            return e;
        }
    }
}

fn random_atom(rng: &mut ChaCha8Rng, nvars: usize) -> TAtom {
    TAtom::new(rng.gen_range(0..=3), random_exponent(rng, nvars, 2, true)).unwrap()
}

fn random_function(
    rng: &mut ChaCha8Rng,
    symbols: &[ClassSymbol],
    nvars: usize,
) -> MotivicRationalFunction {
    let num: Vec<(Vec<u32>, LocalizedMotivicElement)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            (
                random_exponent(rng, nvars, 2, false),
                random_localized(rng, symbols),
            )
        })
        .collect();
    let den: Vec<TAtom> = (0..rng.gen_range(0..=3))
        .map(|_| random_atom(rng, nvars))
        .collect();
    MotivicRationalFunction::from_parts(nvars, num, den).unwrap()
}

fn same_series(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<(), TestCaseError> {
    match a.first_difference(b) {
        None => Ok(()),
        Some((n, x, y)) => Err(TestCaseError::fail(format!(
            "coefficient {n:?}: {x} vs {y}"
        ))),
    }
}

fn rat_pow(x: &BigRational, k: u32) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

/// Value of `f` at `L = q` and every `T_j = t`.
fn numeric_value(
    f: &MotivicRationalFunction,
    q: &BigRational,
    t: &BigRational,
    counts: &BTreeMap<String, BigRational>,
) -> BigRational {
    let mut num = BigRational::from_integer(0.into());
    for (n, c) in f.num() {
        let deg: u32 = n.iter().sum();
        num += c.specialize_counts(q, counts).unwrap() * rat_pow(t, deg);
    }
    let mut den = BigRational::one();
    for (atom, &mult) in f.den() {
        let deg: u32 = atom.b().iter().sum();
        let factor = BigRational::one() - rat_pow(t, deg) / rat_pow(q, atom.a());
        den *= rat_pow(&factor, mult);
    }
    num / den
}

fn series_value(
    s: &TruncatedSeries,
    q: &BigRational,
    t: &BigRational,
    counts: &BTreeMap<String, BigRational>,
) -> BigRational {
    let mut total = BigRational::from_integer(0.into());
    for (n, c) in s.coeffs() {
        total += c.specialize_counts(q, counts).unwrap() * rat_pow(t, n.iter().sum());
    }
    total
}

// ---------------------------------------------------------------------------
// Grothendieck ring

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn ring_axioms_hold(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let s = symbols();
        let (a, b, c) = (
            random_element(&mut rng, &s),
            random_element(&mut rng, &s),
            random_element(&mut rng, &s),
        );
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &MotivicElement::one(), a.clone());
        prop_assert_eq!(&a + &MotivicElement::zero(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn norm_is_ultrametric_and_submultiplicative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let s = symbols();
        let (a, b) = (random_element(&mut rng, &s), random_element(&mut rng, &s));
        prop_assert!((&a + &b).norm() <= a.norm().max(b.norm()));
        prop_assert!((&a * &b).norm() <= a.norm() * b.norm());
        prop_assert_eq!((-&a).norm(), a.norm());
        prop_assert_eq!(MotivicElement::zero().norm(), Norm::zero());
    }

    #[test]
    fn dividing_out_a_multiplied_atom_recovers_the_element(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let s = symbols();
        let a = random_element(&mut rng, &s);
        let i = rng.gen_range(1..=4u32);
        let atom = MotivicElement::l_pow_minus_one(i);
        let back = LocalizedMotivicElement::from_parts(&a * &atom, [(i, 1)]).unwrap();
        prop_assert_eq!(back.num(), &a);
        prop_assert!(back.den().is_empty());

        let x = random_localized(&mut rng, &s);
        let mut den: Vec<(u32, u32)> = x.den().iter().map(|(&i, &k)| (i, k)).collect();
        den.push((i, 1));
        let padded = LocalizedMotivicElement::from_parts(x.num() * &atom, den).unwrap();
        prop_assert!(padded.equals(&x), "{} vs {}", padded, x);
    }

    #[test]
    fn point_counting_is_a_ring_homomorphism(seed in any::<u64>(), q in 2i64..=7) {
        let mut rng = rng(seed);
        let s = symbols();
        let counts = random_counts(&mut rng);
        let q = rational(q);
        let (a, b) = (random_element(&mut rng, &s), random_element(&mut rng, &s));
        let sp = |e: &MotivicElement| e.specialize_counts(&q, &counts).unwrap();
        prop_assert_eq!(sp(&(&a + &b)), sp(&a) + sp(&b));
        prop_assert_eq!(sp(&(&a * &b)), sp(&a) * sp(&b));
        let (x, y) = (random_localized(&mut rng, &s), random_localized(&mut rng, &s));
        let spl = |e: &LocalizedMotivicElement| e.specialize_counts(&q, &counts).unwrap();
        prop_assert_eq!(spl(&(&x + &y)), spl(&x) + spl(&y));
        prop_assert_eq!(spl(&(&x * &y)), spl(&x) * spl(&y));
    }
}

// ---------------------------------------------------------------------------
// Rational series

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn expansion_respects_sum_and_product(seed in any::<u64>(), nvars in 1usize..=2, n in 0u32..=6) {
        let mut rng = rng(seed);
        let s = symbols();
        let f = random_function(&mut rng, &s, nvars);
        let g = random_function(&mut rng, &s, nvars);
        same_series(&f.add(&g).unwrap().expand(n), &f.expand(n).add(&g.expand(n)).unwrap())?;
        same_series(&f.mul(&g).unwrap().expand(n), &f.expand(n).mul(&g.expand(n)).unwrap())?;
    }

    #[test]
    fn substitution_commutes_with_expansion(
        seed in any::<u64>(),
        nvars in 1usize..=2,
        target in 1usize..=2,
        n in 0u32..=6,
    ) {
        let mut rng = rng(seed);
        let s = symbols();
        let f = random_function(&mut rng, &s, nvars);
        let subs: Vec<MonomialSubstitution> = (0..nvars)
            .map(|_| MonomialSubstitution::new(rng.gen_range(0..=2), random_exponent(&mut rng, target, 2, true)))
            .collect();
        let substituted = f.substitute_monomials(target, &subs).unwrap();
        // every image exponent is nonzero, so |image(m)| >= |m| and degree n of f suffices
        let mut termwise = TruncatedSeries::zero(target, n);
        for (m, c) in f.expand(n).coeffs() {
            let mut image = vec![0u32; target];
            let mut shift = 0i64;
            for (j, &k) in m.iter().enumerate() {
                for (x, e) in image.iter_mut().zip(&subs[j].e) {
                    *x += e * k;
                }
                shift += i64::from(subs[j].c) * i64::from(k);
            }
            if image.iter().sum::<u32>() <= n {
                termwise.add_term(image, &c.shift_l(-shift));
            }
        }
        same_series(&substituted.expand(n), &termwise)?;
    }

    #[test]
    fn cancelling_a_reinserted_atom_is_stable(seed in any::<u64>(), nvars in 1usize..=2) {
        let mut rng = rng(seed);
        let s = symbols();
        let f = random_function(&mut rng, &s, nvars);
        let atom = random_atom(&mut rng, nvars);
        let factor = MotivicRationalFunction::from_parts(
            nvars,
            [
                (vec![0; nvars], LocalizedMotivicElement::one()),
                (atom.b().to_vec(), -LocalizedMotivicElement::l_pow(-i64::from(atom.a()))),
            ],
            [],
        )
        .unwrap();
        let g = f.mul(&factor).unwrap().mul(&MotivicRationalFunction::inverse_atom(atom)).unwrap();
        prop_assert!(g.equals(&f), "{} vs {}", g, f);
        same_series(&g.expand(6), &f.expand(6))?;
    }

    #[test]
    fn partial_sums_approach_the_numeric_value(seed in any::<u64>(), nvars in 1usize..=2) {
        let mut rng = rng(seed);
        let s = symbols();
        let counts = random_counts(&mut rng);
        let f = random_function(&mut rng, &s, nvars);
        let q = rational(2);
        let t = BigRational::new(1.into(), 8.into());
        let exact = numeric_value(&f, &q, &t, &counts);
        let partial = series_value(&f.expand(16), &q, &t, &counts);
        let tolerance = BigRational::new(1.into(), BigInt::from(1u64 << 12));
        prop_assert!((&exact - &partial).abs() <= tolerance, "{} vs {}", exact, partial);
    }
}

// ---------------------------------------------------------------------------
// SNC zeta functions

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn closed_form_matches_direct_summation(seed in any::<u64>(), n in 1u32..=6) {
        let mut rng = rng(seed);
        let data = random_divisor(&mut rng, None);
        let f = zeta_closed_form(&data).unwrap();
        same_series(&f.expand(n), &zeta_series_truncated(&data, n).unwrap())?;
        if let Some(pt) = random_point(&mut rng, &data) {
            let g = zeta_at_point_closed_form(&data, &pt).unwrap();
            same_series(&g.expand(n), &zeta_at_point_series_truncated(&data, &pt, n).unwrap())?;
        }
    }

    #[test]
    fn cylinder_classes_obey_support_and_degree_laws(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let data = random_divisor(&mut rng, None);
        let d = i64::from(data.d());
        for n in multi_indices(data.m(), 4) {
            let c = cylinder_class(&n, &data).unwrap();
            if c.is_zero() {
                continue;
            }
            let j = ComponentSet::support(&n);
            prop_assert!(property_p(&n, &data).unwrap(), "{:?}", n);
            let symbol = data.stratum_symbol(j).expect("nonzero class needs a stratum");
            let dim = i64::from(symbol.finite_dim().expect("nonempty stratum"));
            let size: i64 = n.iter().map(|&x| i64::from(x)).sum();
            prop_assert_eq!(c.virtual_dim(), Some(dim + j.len() as i64 + size * (d - 1)));
        }
    }

    #[test]
    fn two_vertical_contacts_give_an_empty_cylinder(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let data = loop {
            let data = random_divisor(&mut rng, None);
            if data.vertical().len() >= 2 {
                break data;
            }
        };
        let vertical: Vec<usize> = data.vertical().iter().collect();
        let pair: Vec<usize> = vertical.choose_multiple(&mut rng, 2).copied().collect();
        let mut n: Vec<u32> = (0..data.m()).map(|_| rng.gen_range(0..=3)).collect();
        n[pair[0]] = 1;
        n[pair[1]] = 1;
        prop_assert!(!property_p(&n, &data).unwrap());
        prop_assert!(cylinder_class(&n, &data).unwrap().is_zero());
    }
}

// ---------------------------------------------------------------------------
// Specialization

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn both_specialization_paths_agree(seed in any::<u64>()) {
        let res = random_resolution(&mut rng(seed));
        let zf = zeta_f(&res).unwrap();
        let folded = u_to_l_inverse(&zeta_two_variable(&res).unwrap()).unwrap();
        prop_assert!(zf.equals(&folded), "{} vs {}", zf, folded);
    }

    #[test]
    fn two_variable_coefficients_sit_over_admissible_indices(seed in any::<u64>()) {
        let res = random_resolution(&mut rng(seed));
        let m = res.base().m();
        let bound = 6;
        let two = zeta_two_variable(&res).unwrap().expand(bound);
        // every row of A is nonzero, so |s| <= |n| for any preimage s
        let images: Vec<Vec<u32>> = multi_indices(m, bound)
            .into_iter()
            .filter(|s| property_p(s, res.base()).unwrap())
            .map(|s| {
                let mut n: Vec<u32> = (0..res.ell())
                    .map(|j| (0..m).map(|i| res.a()[i][j] * s[i]).sum())
                    .collect();
                n.push((0..m).map(|i| (res.nu()[i] - 1) * s[i]).sum());
                n
            })
            .collect();
        for (n, c) in two.coeffs() {
            prop_assert!(c.is_zero() || images.contains(n), "coefficient at {:?} is {}", n, c);
        }
    }

    #[test]
    fn volume_partial_sums_converge(seed in any::<u64>(), n in 2u32..=6) {
        let mut rng = rng(seed);
        let data = random_divisor(&mut rng, None);
        let m = data.m();
        let a: Vec<u32> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
        let b: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=2)).collect();
        let counts = counts_for(&mut rng, &data);
        let vol = VolumeData::new(data, a, b).unwrap();
        let conv = if rng.gen_bool(0.5) { VolumeExponent::TimesD } else { VolumeExponent::Plain };
        let v = motivic_volume_integral(&vol, conv).unwrap();
        let diff = v.checked_sub(&volume_partial_sum(&vol, conv, n).unwrap()).unwrap();
        let bound = Norm::from_virtual_dim(Some(volume_tail_exponent(&vol) - i64::from(n)));
        prop_assert!(diff.norm_bound() <= bound, "{} exceeds {}", diff.norm_bound(), bound);
        for q in [2, 3, 5] {
            let q = rational(q);
            prop_assert_eq!(
                v.specialize_counts(&q, &counts).unwrap(),
                volume_numeric_limit(&vol, conv, &q, &counts).unwrap()
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Presburger arithmetic

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn eliminated_formulas_agree_with_direct_evaluation(seed in any::<u64>(), r in 1usize..=2) {
        let mut rng = rng(seed);
        let f = random_quantified(&mut rng, r);
        let g = eliminate_quantifiers(&f).unwrap();
        prop_assert!(g.is_quantifier_free());
        each_point(r, 8, |p| {
            let (x, y) = (evaluate(&f, p).unwrap(), evaluate(&g, p).unwrap());
            if x == y { Ok(()) } else { Err(format!("{f} vs {g} at {p:?}")) }
        })
        .map_err(TestCaseError::fail)?;
    }

    #[test]
    fn projections_compose(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let f = random_qf(&mut rng, &[0, 1, 2], 3, 2);
        let once = project(&f, 1).unwrap();
        let twice = project(&once, 1).unwrap();
        let both = project(&project(&f, 1).unwrap(), 2).unwrap();
        let joint = eliminate_quantifiers(&Formula::exists(1, Formula::exists(2, f.clone()))).unwrap();
        each_point(3, 5, |p| {
            let direct = evaluate(&Formula::exists(1, f.clone()), p).unwrap();
            let v = [&once, &twice].map(|g| evaluate(g, p).unwrap());
            if v != [direct, direct] {
                return Err(format!("projecting {f} along l2 at {p:?}"));
            }
            if evaluate(&both, p).unwrap() != evaluate(&joint, p).unwrap() {
                return Err(format!("projecting {f} along l2, l3 at {p:?}"));
            }
            Ok(())
        })
        .map_err(TestCaseError::fail)?;
    }

    #[test]
    fn generating_functions_count_lattice_points(seed in any::<u64>(), r in 1usize..=3) {
        let mut rng = rng(seed);
        let free: Vec<usize> = (0..r).collect();
        let p = random_qf(&mut rng, &free, r, 2);
        let s = rng.gen_range(1..=r.min(2));
        let mut c: Vec<Vec<i64>> = (0..s).map(|_| (0..r).map(|_| rng.gen_range(0..=2)).collect()).collect();
        for j in 0..r {
            if c.iter().all(|row| row[j] == 0) {
                let k = rng.gen_range(0..s);
                c[k][j] = 1;
            }
        }
        let phi: Vec<LinearForm> = c.into_iter().map(|row| LinearForm::new(row, rng.gen_range(0..=2))).collect();
        // each variable has a positive coefficient in some map, so degree <= 12 forces every l_j <= 12
        match generating_function(&p, r, &phi, GfOptions::default()) {
            Ok(g) => prop_assert_eq!(expand_gf(&g, 12), enumerate_gf(&p, r, 0, 12, &phi, 12).unwrap()),
            Err(PresburgerError::InfiniteFiber(_)) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{p}: {e}"))),
        }
    }

    #[test]
    fn formulas_survive_printing_and_parsing(seed in any::<u64>(), r in 1usize..=3) {
        let f = random_quantified(&mut rng(seed), r);
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }
}

// ---------------------------------------------------------------------------
// Semi-algebraic conditions

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn refining_truncation_never_flips_a_verdict(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let m = rng.gen_range(1..=2);
        let c = random_condition(&mut rng, m, 3);
        let exact: Vec<_> = (0..m).map(|_| random_series(&mut rng)).collect();
        let ell = [rng.gen_range(-2..=3), rng.gen_range(-2..=3)];
        let values: Vec<Truth> = [Some(4), Some(8), Some(16), None]
            .into_iter()
            .map(|trunc| evaluate_condition(&c, &truncate_point(&exact, trunc), &ell).unwrap())
            .collect();
        prop_assert_ne!(values[3], Truth::Indeterminate);
        for w in values.windows(2) {
            if w[0] != Truth::Indeterminate {
                prop_assert_eq!(w[0], w[1], "{}: {:?}", c, values);
            }
        }
    }

    #[test]
    fn infinite_order_conventions(l in -50i64..=50, d in 1u64..=12) {
        prop_assert_eq!(ExtInt::Infinity.add(l), ExtInt::Infinity);
        prop_assert!(ExtInt::Infinity.congruent(l, d));
        let c = Condition::ord_mod(Polynomial::var(1), LinearForm::constant(l), d).unwrap();
        prop_assert_eq!(evaluate_condition(&c, &[PowerSeriesValue::zero()], &[]).unwrap(), Truth::True);
    }

    #[test]
    fn order_is_additive(seed in any::<u64>(), p in 2u32..=24, q in 2u32..=24) {
        let mut rng = rng(seed);
        let (u, v) = (random_series(&mut rng), random_series(&mut rng));
        let u = truncate_point(&[u], Some(p)).remove(0);
        let v = truncate_point(&[v], Some(q)).remove(0);
        if let (Order::Known(a), Order::Known(b)) = (u.ord_t(), v.ord_t()) {
            let expected = match b {
                ExtInt::Finite(b) => a.add(b),
                ExtInt::Infinity => ExtInt::Infinity,
            };
            match u.mul(&v).ord_t() {
                Order::Known(o) => prop_assert_eq!(o, expected),
                // the product is only determinate when its precision exceeds ord u + ord v
                Order::Indeterminate { at_least } => {
                    prop_assert!(ExtInt::Finite(i64::from(at_least)) <= expected)
                }
            }
        }
    }

    #[test]
    fn zero_atom_matches_certified_zero(seed in any::<u64>(), witness in any::<bool>()) {
        let mut rng = rng(seed);
        let exact = random_series(&mut rng);
        let point = truncate_point(std::slice::from_ref(&exact), None);
        let g = random_poly(&mut rng, 2, 3, 2);
        let f = if witness {
            // x1 minus the polynomial in t that x1 equals
            let mut root = Polynomial::var(1);
            for (k, c) in &exact {
                root = root.add(&Polynomial::new([(vec![*k, 0], -c.clone())]));
            }
            g.mul(&root)
        } else {
            g
        };
        let args = [PowerSeriesValue::t(), point[0].clone()];
        let zero = f.eval_series(&args).is_certified_zero();
        let truth = evaluate_condition(&Condition::is_zero(f.clone()), &point, &[]).unwrap();
        prop_assert_eq!(truth, if zero { Truth::True } else { Truth::False }, "{}", Condition::is_zero(f));
        if witness {
            prop_assert!(zero);
        }
    }

    #[test]
    fn conditions_survive_printing_and_parsing(seed in any::<u64>(), m in 1usize..=2) {
        let c = random_condition(&mut rng(seed), m, 3);
        prop_assert_eq!(parse_condition(&c.to_string()).unwrap(), c);
    }
}
