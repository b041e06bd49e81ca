//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the terminal.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use common::{
    check_compress, check_expand, compress_case, oracle_covers, random_instance, random_strict_box,
};
use hadwiger_core::sampling::{boundary_grid, random_tangency_set};
use hadwiger_core::{
    assemble96, bounds_table, cover88, covers_target, paper_bound, paper_face_typing, prop1_cover,
    skeleton_target, tangency_cover, verify_class, A4Case, BoxClass, EpsilonSchedule,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_cover88() -> Outcome {
    let c = cover88(&paper_face_typing()).map_err(|e| e.to_string())?;
    ensure(c.len() == 88, || format!("{} boxes", c.len()))?;
    ensure(
        c.declared_class == BoxClass::NonStrict && verify_class(&c),
        || "class".into(),
    )?;
    let rep = covers_target(&c, &skeleton_target(4, 2));
    ensure(rep.covered, || format!("uncovered at {:?}", rep.witness))?;
    for (i, a) in c.boxes.iter().enumerate() {
        for b in &c.boxes[i + 1..] {
            ensure(!a.relative_interiors_overlap(b), || {
                format!("{a} overlaps {b}")
            })?;
        }
    }
    Ok(format!("88 NonStrict boxes, {} cells", rep.cells_checked))
}

fn c2_assemble96(sizes: &mut BTreeMap<usize, usize>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(96);
    let mut inputs: Vec<_> = (0..1000)
        .map(|_| random_tangency_set(&mut rng, 4, 1 << 16))
        .collect();
    inputs.extend(boundary_grid());
    let sched = EpsilonSchedule::dim4_default();
    let mut hits: BTreeMap<A4Case, usize> = BTreeMap::new();
    for t in &inputs {
        let a = assemble96(t, &sched).map_err(|e| format!("{t}: {e}"))?;
        ensure(a.cover.len() == 96, || {
            format!("{t}: {} boxes", a.cover.len())
        })?;
        ensure(
            a.cover.declared_class == BoxClass::Strict && verify_class(&a.cover),
            || format!("{t}: class"),
        )?;
        let target = skeleton_target(4, 2).with_points(t.realized_points());
        let rep = covers_target(&a.cover, &target);
        ensure(rep.covered, || {
            format!("{t}: uncovered at {:?}", rep.witness)
        })?;
        *hits.entry(a.a4.case_tag).or_default() += 1;
    }
    for case in A4Case::ALL {
        ensure(hits.contains_key(&case), || {
            format!("case {case} never hit")
        })?;
    }
    sizes.insert(4, 96);
    let hist: Vec<String> = hits.iter().map(|(c, k)| format!("{c}={k}")).collect();
    Ok(format!("{} inputs, cases {}", inputs.len(), hist.join(" ")))
}

fn prop1_check(n: usize, expected: usize, sizes: &mut BTreeMap<usize, usize>) -> Outcome {
    let g = prop1_cover(n, &EpsilonSchedule::general_default()).map_err(|e| e.to_string())?;
    let c = &g.cover;
    ensure(c.len() == expected, || format!("{} boxes", c.len()))?;
    ensure(
        c.declared_class == BoxClass::Strict && verify_class(c),
        || "class".into(),
    )?;
    let rep = covers_target(c, &skeleton_target(n, n - 2));
    ensure(rep.covered, || format!("uncovered at {:?}", rep.witness))?;
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let t = random_tangency_set(&mut rng, n, 1 << 16);
    let points = tangency_cover(&t).map_err(|e| e.to_string())?;
    ensure(points.len() == 2 * n, || {
        format!("{} tangency boxes", points.len())
    })?;
    let total = c.len() + points.len();
    sizes.insert(n, total);
    Ok(format!("{} + {} = {total} boxes", c.len(), points.len()))
}

fn c5_lemmas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..10_000 {
        let n = 4 + i % 3;
        let den = rng.random_range(1..=256);
        let b = random_strict_box(&mut rng, n, den);
        check_expand(&b)?;
    }
    for seed in 0..1_000 {
        let (parts, target, k, eps) = compress_case(seed);
        check_compress(&parts, &target, k, &eps)?;
    }
    Ok("10000 expansions, 1000 compressions".into())
}

fn c6_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut covered = 0;
    for _ in 0..100 {
        let inst = random_instance(&mut rng, 4, 32);
        let got = covers_target(&inst.cover, &inst.target).covered;
        let want = oracle_covers(&inst.cover.boxes, &inst.target, inst.den);
        ensure(got == want, || format!("disagreement on {:?}", inst.target))?;
        covered += usize::from(got);
    }
    Ok(format!("100 instances, {covered} covered"))
}

fn c7_bounds(sizes: &BTreeMap<usize, usize>) -> Outcome {
    let expected = [(96, 296, 1879), (1091, 3426, 8927), (15373, 49312, 40886)];
    let rows = bounds_table(4..=6).map_err(|e| e.to_string())?;
    for (row, (p, l, r)) in rows.iter().zip(expected) {
        let want = (BigInt::from(p), BigInt::from(l), BigInt::from(r));
        ensure(
            (row.paper.clone(), row.lassak.clone(), row.rogers.clone()) == want,
            || {
                format!(
                    "row {} = {} {} {}",
                    row.n, row.paper, row.lassak, row.rogers
                )
            },
        )?;
    }
    for n in 4..=6 {
        let size = sizes
            .get(&n)
            .ok_or_else(|| format!("no verified size for n = {n}"))?;
        let bound = paper_bound(n).map_err(|e| e.to_string())?;
        ensure(bound == BigInt::from(*size), || {
            format!("n = {n}: {bound} vs {size}")
        })?;
    }
    Ok("table matches, sizes 96 1091 15373".into())
}

fn main() -> ExitCode {
    let mut sizes = BTreeMap::new();
    let mut failed = 0;
    let mut report = |name: &str, run: &mut dyn FnMut() -> Outcome| {
        let t0 = Instant::now();
        let out = run();
        let secs = t0.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg} ({secs:.1}s)");
            }
        }
    };
    report("1 cover88", &mut c1_cover88);
    report("2 assemble96", &mut || c2_assemble96(&mut sizes));
    report("3 prop1 n=5", &mut || prop1_check(5, 1081, &mut sizes));
    report("4 prop1 n=6", &mut || prop1_check(6, 15361, &mut sizes));
    report("5 lemma suites", &mut c5_lemmas);
    report("6 verifier oracle", &mut c6_oracle);
    report("7 bounds table", &mut || c7_bounds(&sizes));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
