#![allow(dead_code)]

use num_bigint::BigInt;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use so3_core::constructors::{
    catalog_all, circle_bundle, connected_sum, hypersurface, CircleBundleSpec, FourManifoldProfile,
};
use so3_core::decide::{decide_irreducible_so3, Verdict};
use so3_core::fgab::{FgAbGroup, GroupElement, IntegerMatrix};
use so3_core::topology::{group, ManifoldProfile};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const ORDERS: [u64; 6] = [2, 3, 4, 5, 6, 8];

pub fn random_torsion(rng: &mut ChaCha8Rng, max_factors: usize) -> Vec<u64> {
    let k = rng.random_range(0..=max_factors);
    (0..k).map(|_| *ORDERS.choose(rng).unwrap()).collect()
}

/// A random valid profile without a fragment. `spin = None` picks at random.
pub fn random_profile(rng: &mut ChaCha8Rng, simply_connected: bool, spin: Option<bool>) -> ManifoldProfile {
    let (b1, t1) = if simply_connected {
        (0, vec![])
    } else {
        (rng.random_range(0..=2), random_torsion(rng, 2))
    };
    let b2 = rng.random_range(0..=4);
    let t2 = random_torsion(rng, 2);
    let homology = [
        FgAbGroup::integers(),
        group(b1, &t1),
        group(b2, &t2),
        group(b2, &t1),
        FgAbGroup::free(b1),
        FgAbGroup::integers(),
    ];
    let mut p = ManifoldProfile::from_homology("random", homology, true, true).expect("valid by construction");
    let want_spin = spin.unwrap_or_else(|| rng.random_bool(0.5));
    if !want_spin && p.h2_mod2_dimension() > 0 {
        p.spin = false;
        p.w4_zero = p.h4_mod(2).is_trivial() || rng.random_bool(0.7);
    }
    let h4 = p.h4();
    let five = rng.random_bool(0.6);
    let free: Vec<BigInt> = (0..h4.free_rank())
        .map(|_| {
            let v = rng.random_range(-6i64..=6);
            BigInt::from(if five { 5 * v } else { v })
        })
        .collect();
    let torsion: Vec<BigInt> = h4
        .torsion_coefficients()
        .iter()
        .map(|_| BigInt::from(rng.random_range(0i64..40)))
        .collect();
    p.p1 = GroupElement::new(h4, free, torsion).unwrap();
    p.validated().expect("random profile is valid")
}

pub fn decides_yes(p: &ManifoldProfile) -> bool {
    decide_irreducible_so3(p).unwrap().verdict == Verdict::Yes
}

/// A random spin profile that admits an irreducible structure.
pub fn random_spin_yes(rng: &mut ChaCha8Rng) -> ManifoldProfile {
    loop {
        let p = random_profile(rng, false, Some(true));
        if decides_yes(&p) {
            return p;
        }
    }
}

fn diag(entries: &[i64]) -> IntegerMatrix {
    IntegerMatrix::diagonal(&entries.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
}

pub fn e8() -> IntegerMatrix {
    IntegerMatrix::from_i64(&[
        &[2, -1, 0, 0, 0, 0, 0, 0],
        &[-1, 2, -1, 0, 0, 0, 0, 0],
        &[0, -1, 2, -1, 0, 0, 0, -1],
        &[0, 0, -1, 2, -1, 0, 0, 0],
        &[0, 0, 0, -1, 2, -1, 0, 0],
        &[0, 0, 0, 0, -1, 2, -1, 0],
        &[0, 0, 0, 0, 0, -1, 2, 0],
        &[0, 0, -1, 0, 0, 0, 0, 2],
    ])
}

/// Simply connected 4-manifold data: hypersurfaces and standard forms.
pub fn base_pool() -> Vec<FourManifoldProfile> {
    let mut v: Vec<FourManifoldProfile> = (1..=3).map(|d| hypersurface(d).unwrap()).collect();
    let forms = [
        diag(&[1, 1]),
        diag(&[1, -1]),
        diag(&[-1, -1, -1]),
        diag(&[1, 1, -1, -1]),
        diag(&[1, -1, -1, -1, -1]),
        IntegerMatrix::from_i64(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]),
        e8(),
    ];
    for (i, q) in forms.into_iter().enumerate() {
        v.push(FourManifoldProfile::from_form(format!("X{i}"), q).unwrap());
    }
    v
}

pub fn random_circle_bundle(rng: &mut ChaCha8Rng, bases: &[FourManifoldProfile]) -> ManifoldProfile {
    let base = bases.choose(rng).unwrap().clone();
    loop {
        let c: Vec<BigInt> = (0..base.b2).map(|_| BigInt::from(rng.random_range(-4i64..=4))).collect();
        if c.iter().any(|x| x != &BigInt::from(0)) {
            return circle_bundle(&CircleBundleSpec {
                base,
                euler_class: c,
            })
            .unwrap();
        }
    }
}

/// Constructor outputs that carry a mod-2 fragment: the catalog, circle
/// bundles and connected sums of these.
pub fn fragment_profiles(rng: &mut ChaCha8Rng, bundles: usize, sums: usize) -> Vec<ManifoldProfile> {
    let bases = base_pool();
    let mut out = catalog_all();
    for _ in 0..bundles {
        out.push(random_circle_bundle(rng, &bases));
    }
    let atoms = out.clone();
    for _ in 0..sums {
        let a = atoms.choose(rng).unwrap();
        let b = atoms.choose(rng).unwrap();
        out.push(connected_sum(a, b).unwrap());
    }
    out
}
