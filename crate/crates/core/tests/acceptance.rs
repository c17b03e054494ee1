//! Acceptance criteria. Prints one line per criterion and exits nonzero if
//! any of them fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use so3_core::charclass::{necessary_conditions, sym0_classes, Bundle5Data};
use so3_core::constructors::{
    catalog, circle_bundle, connected_sum, connected_sum_all, find_euler_class, hypersurface, product_3x2,
    CircleBundleSpec, ThreeManifoldHomology,
};
use so3_core::decide::{
    decide_irreducible_so3, decide_two_field, rank5_relation_holds, reconstruct_rank3, tags, Criterion, Verdict,
};
use so3_core::fgab::{has_element_of_order, smith_normal_form, solve_divisibility, FgAbGroup, GroupElement, IntegerMatrix};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn hypersurface_table() -> Outcome {
    let s3 = hypersurface(3).map_err(|e| e.to_string())?;
    ensure(
        (s3.b2, s3.euler_char, s3.signature, s3.p1_eval, s3.spin) == (7, 9, -5, -15, false),
        format!("d=3 gave {s3:?}"),
    )?;
    let s4 = hypersurface(4).map_err(|e| e.to_string())?;
    ensure(s4.b2 == 22 && s4.spin && 3 * s4.signature == s4.p1_eval, format!("d=4 gave {s4:?}"))?;
    Ok("d=3: b2=7 chi=9 sigma=-5 p1=-15 non-spin; d=4: b2=22 spin, 3 sigma = p1".into())
}

fn circle_bundle_pipeline() -> Outcome {
    let base = hypersurface(3).map_err(|e| e.to_string())?;
    let hit = find_euler_class(&base, &[3, -1, -1, -1, -1, -1, -1], 3, 3)
        .map_err(|e| e.to_string())?
        .ok_or("no Euler class found")?;
    let m = circle_bundle(&CircleBundleSpec {
        base,
        euler_class: hit.c.iter().map(|&x| BigInt::from(x)).collect(),
    })
    .map_err(|e| e.to_string())?;
    ensure(!m.spin, "spin")?;
    ensure(m.p1.is_zero() && m.p1.group() == &FgAbGroup::cyclic(3), "p1 is not 0 in Z_3")?;
    ensure(m.w4_zero, "w4 nonzero")?;
    ensure(m.h4() == FgAbGroup::cyclic(3), format!("H^4 = {}", m.h4()))?;
    ensure(!has_element_of_order(&m.h4(), 4).unwrap(), "order-4 element in H^4")?;
    ensure(m.semicharacteristic() == 1 && m.kervaire_semicharacteristic() == 1, "chi_hat or k is not 1")?;
    let d = decide_irreducible_so3(&m).map_err(|e| e.to_string())?;
    ensure(
        d.verdict == Verdict::Yes && d.theorem == tags::IRREDUCIBLE_NONSPIN,
        format!("verdict {} via {}", d.verdict, d.theorem),
    )?;
    Ok(format!("c = {:?}: non-spin, p1 = 0 in Z_3, w4 = 0, H^4 = Z_3, chi_hat = k = 1, Yes", hit.c))
}

fn wu_manifold() -> Outcome {
    let wu = catalog("wu").map_err(|e| e.to_string())?;
    let d = decide_irreducible_so3(&wu).map_err(|e| e.to_string())?;
    let a = decide_two_field(&wu, Criterion::Atiyah).map_err(|e| e.to_string())?;
    ensure(d.verdict == Verdict::Yes, "irreducible verdict is not Yes")?;
    ensure(a.verdict == Verdict::No, "two-field verdict is not No")?;
    ensure(wu.kervaire_semicharacteristic() == 1 && wu.semicharacteristic() == 0, "k or chi_hat wrong")?;
    Ok("irreducible Yes, two-field No, k = 1, chi_hat = 0".into())
}

fn parity_law() -> Outcome {
    let mut rng = common::rng(4);
    let profiles: Vec<_> = (0..2000).map(|_| common::random_profile(&mut rng, true, None)).collect();
    let spin = profiles.iter().filter(|p| p.spin).count();
    let mismatches: Vec<String> = profiles
        .par_iter()
        .filter_map(|p| {
            let expected = !p.spin || p.mod2_betti(2) % 2 == 1;
            let got = decide_irreducible_so3(p).unwrap().verdict;
            (got != Verdict::from_bool(expected)).then(|| format!("{:?}", p.homology))
        })
        .collect();
    ensure(mismatches.is_empty(), format!("{} mismatches, e.g. {:?}", mismatches.len(), mismatches.first()))?;
    Ok(format!("2000 simply connected profiles ({spin} spin), 0 mismatches"))
}

fn connected_sum_closure() -> Outcome {
    let mut rng = common::rng(5);
    let pool: Vec<_> = (0..60).map(|_| common::random_spin_yes(&mut rng)).collect();
    let mut pairs = 0;
    for a in &pool {
        for b in &pool {
            let s = connected_sum(a, b).map_err(|e| e.to_string())?;
            ensure(
                s.kervaire_semicharacteristic()
                    == (a.kervaire_semicharacteristic() + b.kervaire_semicharacteristic() + 1) % 2,
                "k formula fails",
            )?;
            pairs += 1;
        }
    }
    let mut sums = 0;
    for len in [1usize, 3, 5, 7] {
        for _ in 0..50 {
            let parts: Vec<_> = (0..len).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect();
            let s = connected_sum_all(&parts).map_err(|e| e.to_string())?;
            ensure(common::decides_yes(&s), format!("odd sum of length {len} does not decide Yes"))?;
            sums += 1;
        }
    }
    Ok(format!("k formula on {pairs} pairs, {sums} odd sums decide Yes"))
}

/// Invariant-factor chains `d₁ | d₂ | …` with product at most `max_order`.
fn chains(max_order: u64) -> Vec<Vec<u64>> {
    fn go(prefix: &mut Vec<u64>, product: u64, max_order: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let last = prefix.last().copied().unwrap_or(1);
        let mut next = if last == 1 { 2 } else { last };
        while product * next <= max_order {
            prefix.push(next);
            go(prefix, product * next, max_order, out);
            prefix.pop();
            next += last;
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 1, max_order, &mut out);
    out
}

fn product_family() -> Outcome {
    // H1(N) = Z^r + torsion with dim H1(N;Z2) = r + #even factors <= 5
    let torsion_choices = chains_upto_factors(&[2, 3, 4, 5, 6, 8, 9], 3);
    let mut cases = 0;
    for r in 0..=5usize {
        for t in &torsion_choices {
            if r + t.iter().filter(|d| *d % 2 == 0).count() > 5 {
                continue;
            }
            let h1 = FgAbGroup::from_cyclic_orders(r, t.iter().map(|&d| BigInt::from(d)));
            let n = ThreeManifoldHomology::from_h1(h1);
            for g in 0..=5 {
                let p = product_3x2(&n, g).map_err(|e| e.to_string())?;
                ensure(p.semicharacteristic() == 0, format!("chi_hat != 0 for H1 = {t:?}, r = {r}, g = {g}"))?;
                ensure(common::decides_yes(&p), format!("verdict not Yes for H1 = {t:?}, r = {r}, g = {g}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} products, all chi_hat = 0 and Yes"))
}

/// Multisets of at most `k` orders from `orders`.
fn chains_upto_factors(orders: &[u64], k: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for prefix in &frontier {
            let start = prefix.last().map_or(0, |l| orders.iter().position(|o| o == l).unwrap());
            for &o in &orders[start..] {
                let mut v: Vec<u64> = prefix.clone();
                v.push(o);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn snf_contract(rng: &mut rand_chacha::ChaCha8Rng) -> Result<(), String> {
    let m = rng.random_range(1..=6);
    let n = rng.random_range(1..=6);
    let rows: Vec<Vec<BigInt>> = (0..m)
        .map(|_| (0..n).map(|_| BigInt::from(rng.random_range(-20i64..=20))).collect())
        .collect();
    let a = IntegerMatrix::from_rows(rows, n).unwrap();
    let s = smith_normal_form(&a);
    ensure(&(&s.u * &a) * &s.v == s.d, format!("U A V != D for {a}"))?;
    let unit = |x: Option<BigInt>| x.is_some_and(|d| d == BigInt::one() || d == -BigInt::one());
    ensure(unit(s.u.determinant()) && unit(s.v.determinant()), "U or V not unimodular")?;
    ensure(s.d.is_diagonal(), "D not diagonal")?;
    let diag = s.diagonal();
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
        ensure(ok && w[0] >= BigInt::zero(), format!("divisibility chain broken: {diag:?}"))?;
    }
    ensure(diag.last().is_none_or(|x| *x >= BigInt::zero()), "negative diagonal entry")
}

fn divisibility_oracle(orders: &[u64]) -> Result<usize, String> {
    let g = FgAbGroup::new(0, orders.iter().map(|&d| BigInt::from(d)).collect()).map_err(|e| e.to_string())?;
    let size: u64 = orders.iter().product();
    let decode = |mut idx: u64| -> Vec<u64> {
        let mut v = vec![0; orders.len()];
        for (slot, d) in v.iter_mut().zip(orders).rev() {
            *slot = idx % d;
            idx /= d;
        }
        v
    };
    let encode = |v: &[u64]| v.iter().zip(orders).fold(0u64, |acc, (x, d)| acc * d + x);
    let mut checks = 0;
    for n in 2..=6u64 {
        let mut image = vec![false; size as usize];
        for idx in 0..size {
            let y = decode(idx);
            let ny: Vec<u64> = y.iter().zip(orders).map(|(x, d)| (x * n) % d).collect();
            image[encode(&ny) as usize] = true;
        }
        for idx in 0..size {
            let x = decode(idx);
            let xi: Vec<i64> = x.iter().map(|&c| c as i64).collect();
            let xe = GroupElement::from_i64(g.clone(), &xi).unwrap();
            match solve_divisibility(&xe, n) {
                Some(y) => ensure(
                    image[idx as usize] && y.scale(&BigInt::from(n)) == xe,
                    format!("bad solution for n = {n}, x = {x:?} in {g}"),
                )?,
                None => ensure(!image[idx as usize], format!("missed solution for n = {n}, x = {x:?} in {g}"))?,
            }
            checks += 1;
        }
    }
    Ok(checks)
}

fn fgab_oracles() -> Outcome {
    let failures: Vec<String> = (0..10_000u64)
        .into_par_iter()
        .filter_map(|i| snf_contract(&mut common::rng(70_000 + i)).err())
        .collect();
    ensure(failures.is_empty(), format!("{} SNF failures, e.g. {:?}", failures.len(), failures.first()))?;
    let groups: Vec<Vec<u64>> = chains(1000);
    let results: Vec<Result<usize, String>> = groups.par_iter().map(|o| divisibility_oracle(o)).collect();
    let mut checks = 0;
    for r in results {
        checks += r?;
    }
    Ok(format!(
        "10000 SNF contracts; solve_divisibility on {} groups of order <= 1000, {checks} (x, n) pairs",
        groups.len()
    ))
}

fn bundle_coherence() -> Outcome {
    let mut rng = common::rng(8);
    let profiles = common::fragment_profiles(&mut rng, 200, 200);
    let mut reconstructed = 0;
    for m in &profiles {
        let tangent = Bundle5Data::tangent(Arc::new(m.clone()));
        ensure(
            rank5_relation_holds(m, &tangent).map_err(|e| e.to_string())?,
            format!("rank-5 relation fails on {}", m.name),
        )?;
        let applicable = necessary_conditions(&tangent).passes() && !has_element_of_order(&m.h4(), 4).unwrap();
        let eta = reconstruct_rank3(m).map_err(|e| e.to_string())?;
        match (applicable, eta) {
            (true, Some(eta)) => {
                ensure(
                    sym0_classes(&eta).same_classes(&tangent),
                    format!("Sym0(eta) differs from the tangent data on {}", m.name),
                )?;
                reconstructed += 1;
            }
            (true, None) => return Err(format!("no eta reconstructed on {}", m.name)),
            (false, _) => {}
        }
    }
    Ok(format!(
        "{} fragment profiles satisfy the rank-5 relation; Sym0(eta) = tangent on {reconstructed} applicable ones",
        profiles.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Check; 8] = [
        ("hypersurface table", hypersurface_table),
        ("circle bundle over the cubic surface", circle_bundle_pipeline),
        ("Wu manifold", wu_manifold),
        ("simply connected parity law", parity_law),
        ("connected-sum closure", connected_sum_closure),
        ("product family N x S_g", product_family),
        ("fgab oracle suite", fgab_oracles),
        ("rank-3/rank-5 coherence", bundle_coherence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {reason}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
