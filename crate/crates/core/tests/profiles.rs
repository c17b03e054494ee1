mod common;

use num_bigint::BigInt;
use rand::Rng;

use so3_core::constructors::{
    catalog, catalog_all, circle_bundle, connected_sum, connected_sum_all, hypersurface, product_3x2, CircleBundleSpec,
    ConstructError, Recipe, ThreeManifoldHomology,
};
use so3_core::fgab::{content, FgAbGroup};
use so3_core::json::{parse_recipe, profile_from_json, profile_to_json};
use so3_core::topology::{group, mod2_euler_characteristic, Coefficients, F2Vector, ManifoldProfile};

/// Comparable data that does not depend on a choice of basis.
#[derive(Debug, PartialEq, Eq)]
struct Invariants {
    homology: [FgAbGroup; 6],
    spin: bool,
    w4_zero: bool,
    p1_order: Option<BigInt>,
    p1_div5: bool,
    chi_hat: u8,
    k: u8,
}

fn invariants(p: &ManifoldProfile) -> Invariants {
    Invariants {
        homology: p.homology.clone(),
        spin: p.spin,
        w4_zero: p.w4_zero,
        p1_order: p.p1.order(),
        p1_div5: so3_core::fgab::solve_divisibility(&p.p1, 5).is_some(),
        chi_hat: p.semicharacteristic(),
        k: p.kervaire_semicharacteristic(),
    }
}

fn sample(seed: u64) -> Vec<ManifoldProfile> {
    let mut rng = common::rng(seed);
    let mut v = common::fragment_profiles(&mut rng, 40, 40);
    for _ in 0..40 {
        v.push(common::random_profile(&mut rng, false, None));
    }
    for g in 0..3 {
        let h1 = group(rng.random_range(0..=2), &common::random_torsion(&mut rng, 2));
        v.push(product_3x2(&ThreeManifoldHomology::from_h1(h1), g).unwrap());
    }
    v
}

#[test]
fn constructor_outputs_are_valid() {
    for p in sample(11) {
        assert!(p.validate().is_empty(), "{}: {:?}", p.name, p.validate());
    }
}

#[test]
fn mod2_euler_characteristic_vanishes() {
    for p in sample(12) {
        assert_eq!(mod2_euler_characteristic(&p), 0, "{}", p.name);
    }
}

#[test]
fn poincare_duality_holds_with_all_coefficients() {
    for p in sample(13) {
        for k in 0..=5 {
            assert_eq!(p.cohomology(k, Coefficients::Integers).unwrap(), p.homology[5 - k], "{} k={k}", p.name);
            for n in [2, 3, 4, 6] {
                assert_eq!(
                    p.cohomology(k, Coefficients::Mod(n)).unwrap(),
                    p.homology_with(5 - k, Coefficients::Mod(n)).unwrap(),
                    "{} k={k} n={n}",
                    p.name
                );
            }
        }
    }
}

#[test]
fn hypersurface_identities() {
    for d in 1..=12u32 {
        let x = hypersurface(d).unwrap();
        let d = i64::from(d);
        assert_eq!(x.b2 as i64, d * d * d - 4 * d * d + 6 * d - 2);
        assert_eq!(x.euler_char, x.b2 as i64 + 2);
        assert_eq!(3 * x.signature, -(d * d - 4) * d);
        assert_eq!(x.p1_eval, 3 * x.signature);
        assert_eq!(x.spin, d % 2 == 0);
        assert!(x.validate().is_empty());
    }
    assert!(matches!(hypersurface(0), Err(ConstructError::InvalidDegree(_))));
}

#[test]
fn circle_bundle_homology_and_semicharacteristics() {
    let mut rng = common::rng(14);
    let bases = common::base_pool();
    for _ in 0..150 {
        let base = bases[rng.random_range(0..bases.len())].clone();
        let c: Vec<BigInt> = (0..base.b2).map(|_| BigInt::from(rng.random_range(-5i64..=5))).collect();
        if c.iter().all(|x| *x == BigInt::from(0)) {
            continue;
        }
        let g = content(&c);
        let m = circle_bundle(&CircleBundleSpec {
            base: base.clone(),
            euler_class: c,
        })
        .unwrap();
        let gu = u64::try_from(&g).unwrap();
        let tg = if gu == 1 { FgAbGroup::trivial() } else { FgAbGroup::cyclic(gu) };
        assert_eq!(m.homology[1], tg);
        assert_eq!(m.homology[2], FgAbGroup::free(base.b2 - 1));
        assert_eq!(m.homology[3], FgAbGroup::free(base.b2 - 1).direct_sum(&tg));
        assert!(m.homology[4].is_trivial());
        let b2 = (base.b2 % 2) as u8;
        assert_eq!(m.kervaire_semicharacteristic(), b2);
        assert_eq!(m.semicharacteristic(), b2);
        assert_eq!(m.p1.group(), &m.h4());
    }
}

#[test]
fn pontryagin_square_obeys_the_quadratic_law() {
    let mut rng = common::rng(15);
    for p in common::fragment_profiles(&mut rng, 60, 30) {
        let n = p.h2_mod2_dimension();
        for _ in 0..6 {
            let x = F2Vector::from_bits(&(0..n).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>());
            let y = F2Vector::from_bits(&(0..n).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>());
            let lhs = p.pontryagin_square(&x.add(&y)).unwrap();
            let cross = p.include_mod2_in_mod4(&p.cup_product(&x, &y).unwrap()).unwrap();
            let rhs = p
                .pontryagin_square(&x)
                .unwrap()
                .add(&p.pontryagin_square(&y).unwrap())
                .unwrap()
                .add(&cross)
                .unwrap();
            assert_eq!(lhs, rhs, "{}", p.name);
            assert_eq!(
                p.reduce_mod4_to_mod2(&p.pontryagin_square(&x).unwrap()).unwrap(),
                p.cup_product(&x, &x).unwrap(),
                "{}",
                p.name
            );
        }
    }
}

#[test]
fn connected_sum_is_commutative_and_associative_on_invariants() {
    let mut rng = common::rng(16);
    let pool = common::fragment_profiles(&mut rng, 20, 0);
    let s5 = catalog("s5").unwrap();
    for _ in 0..40 {
        let a = &pool[rng.random_range(0..pool.len())];
        let b = &pool[rng.random_range(0..pool.len())];
        let c = &pool[rng.random_range(0..pool.len())];
        let ab = connected_sum(a, b).unwrap();
        assert_eq!(invariants(&ab), invariants(&connected_sum(b, a).unwrap()));
        let left = connected_sum(&ab, c).unwrap();
        let right = connected_sum(a, &connected_sum(b, c).unwrap()).unwrap();
        assert_eq!(invariants(&left), invariants(&right));
        assert_eq!(invariants(&connected_sum(a, &s5).unwrap()), invariants(a));
    }
}

#[test]
fn connected_sum_adds_homology() {
    let parts = catalog_all();
    let s = connected_sum_all(&parts).unwrap();
    for k in 1..=4 {
        let expected = parts
            .iter()
            .fold(FgAbGroup::trivial(), |acc, p| acc.direct_sum(&p.homology[k]));
        assert_eq!(s.homology[k], expected);
    }
    assert!(matches!(connected_sum_all(&[]), Err(ConstructError::EmptySum)));
}

#[test]
fn profile_json_round_trips() {
    for p in sample(17) {
        let text = profile_to_json(&p);
        let back = profile_from_json(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(profile_to_json(&back), text);
    }
}

#[test]
fn recipes_are_deterministic() {
    let texts = [
        r#"{"construction":"catalog","name":"wu"}"#,
        r#"{"construction":"connected_sum","parts":[{"construction":"catalog","name":"wu"},{"construction":"catalog","name":"s3~xs2"}]}"#,
        r#"{"construction":"product_3x2","n3_homology":{"h1":{"free":1,"torsion":[2,4]}},"genus":2}"#,
        r#"{"construction":"circle_bundle","base":{"construction":"hypersurface","degree":3},"euler_class":{"u":[3,-1,-1,-1,-1,-1,-1],"torsion":3}}"#,
        r#"{"construction":"circle_bundle","base":{"construction":"form","matrix":[[0,1],[1,0]]},"euler_class":[2,0]}"#,
    ];
    for t in texts {
        let recipe: Recipe = serde_json::from_str(t).unwrap();
        let again: Recipe = serde_json::from_str(&serde_json::to_string(&recipe).unwrap()).unwrap();
        assert_eq!(recipe, again);
        let a = parse_recipe(t, 3).unwrap();
        let b = recipe.build(3).unwrap();
        assert_eq!(a, b);
        assert_eq!(profile_from_json(&profile_to_json(&a)).unwrap(), a);
    }
}

#[test]
fn bad_recipes_are_rejected() {
    for t in [
        r#"{"construction":"catalog","name":"cp2"}"#,
        r#"{"construction":"circle_bundle","base":{"construction":"hypersurface","degree":3},"euler_class":[0,0,0,0,0,0,0]}"#,
        r#"{"construction":"circle_bundle","base":{"construction":"hypersurface","degree":4},"euler_class":[1]}"#,
        r#"{"construction":"product_3x2","n3_homology":{"h1":{"free":0,"torsion":[0]}},"genus":1}"#,
        r#"{"construction":"nope"}"#,
    ] {
        assert!(parse_recipe(t, 3).is_err(), "{t}");
    }
}
