//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! A criterion listed in `KNOWN_RED` is reported as FAIL and does not fail
//! the run; if it starts passing, the run fails so the list gets updated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};
use subpack::bounds::{BoundEngine, KnownValues, MethodRegistry, Side};
use subpack::constructions::{
    build_plan, construction_1, construction_2, dualize_covering, dualize_packing, linkage_plan, linked_plan,
    packing_lower, PackingCode,
};
use subpack::divisible::{divisible_length_feasible, reduce_quotient, PointMultiset};
use subpack::gf::{enumerate_subspaces, Field, Matrix};
use subpack::ilp::{build_model, parse_lp, writer, LinearModel, DEFAULT_SIZE_CAP};
use subpack::oracle::{exhaustive_max, verify_covering, verify_packing, CoveringCheck};
use subpack::qcalc::{gaussian_binomial, gaussian_binomial_u128};
use subpack::rankmetric::{gabidulin, rank_distance};
use subpack::table::{compare, generate};
use subpack::{CoveringParams, PackingParams};

const KNOWN_RED: &[(u32, &str)] = &[(
    5,
    "the printed n=7, k=3, t=3 cell says 2667, but all [7;3]_2 = 11811 planes form a 2-fold packing",
)];

type Outcome = Result<String, String>;

fn pp(n: u32, k: u32, t: u32, lambda: u64) -> PackingParams {
    PackingParams::new(2, n, k, t, lambda).unwrap()
}

fn cp(n: u32, k: u32, delta: u32, alpha: u64) -> CoveringParams {
    CoveringParams::new(2, n, k, delta, alpha).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let p = pp(9, 4, 2, 1);
    let seed = KnownValues::bundled().get(&pp(8, 3, 1, 1)).ok_or("registry lacks A_2(8,3,1;1)")?;
    ensure(seed.upper == 34, || format!("registry A_2(8,3,1;1) = {}", seed.upper))?;
    let r = BoundEngine::new().best_upper(&p).map_err(e)?;
    ensure(r.upper == 1156, || format!("upper {} instead of 1156", r.upper))?;
    let classic_only =
        BoundEngine::with_parts(MethodRegistry::select(&["trivial", "classic-johnson"]).map_err(e)?, Some(KnownValues::bundled().clone()));
    let c = classic_only.best_upper(&p).map_err(e)?.upper;
    ensure(c == 1158, || format!("classic Johnson alone gives {c}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("A_2(9,4,2;1) <= {} (classic Johnson alone {c})", r.upper))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let b = reduce_quotient(63 * 32, 4, 2).map_err(e)?;
    ensure(b == Some(132), || format!("reduce_quotient(2016, 4, 2) = {b:?}"))?;
    // the inner A_2(5,3,2;2) value comes from the registry here
    let r = BoundEngine::new().best_upper(&pp(6, 4, 3, 2)).map_err(e)?;
    let improved = r.value_of("improved-johnson", Side::Upper);
    let classic = r.value_of("classic-johnson", Side::Upper);
    ensure(improved == Some(132) && classic == Some(134), || format!("improved {improved:?}, classic {classic:?}"))?;
    for (len, want) in [(4, false), (19, false), (8, true), (12, true), (14, true), (15, true)] {
        let got = divisible_length_feasible(len, 2, 3).map_err(e)?;
        ensure(got == want, || format!("length {len}: feasible = {got}"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("reduce 132, improved 132 vs classic 134, lengths 4/19 out and 8/12/14/15 in".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let r = BoundEngine::without_registry().best_upper(&pp(6, 4, 3, 2)).map_err(e)?;
    ensure(r.upper == 126, || format!("upper {}", r.upper))?;
    ensure(r.upper_attained_by().contains(&"quadratic"), || format!("attained by {:?}", r.upper_attained_by()))?;
    within(start, Duration::from_secs(1))?;
    Ok("A_2(6,4,3;2) <= 126 via quadratic".into())
}

fn criterion_4() -> Outcome {
    let engine = BoundEngine::without_registry();
    let mut seen = Vec::new();
    for (n, k, t, want) in [(6, 2, 1, 42u128), (6, 5, 5, 63), (6, 2, 2, 651), (6, 4, 4, 651), (7, 2, 2, 2667), (8, 2, 2, 10795)] {
        let p = pp(n, k, t, 2);
        let r = engine.best_upper(&p).map_err(e)?;
        ensure(r.upper == want, || format!("{p}: upper {} instead of {want}", r.upper))?;
        // t = k: all blocks form the packing
        if t == k {
            ensure(r.lower == r.upper, || format!("{p}: lower {} below {want}", r.lower))?;
        }
        seen.push(format!("{want}"));
    }
    // 42 = twice the 21 lines of a line spread of PG(5,2): each point on exactly 2 lines
    let with_registry = BoundEngine::new().best_upper(&pp(6, 2, 1, 2)).map_err(e)?;
    ensure(with_registry.is_exact(), || format!("A_2(6,2,1;2) in [{}, {}]", with_registry.lower, with_registry.upper))?;
    Ok(format!("exact upper bounds {}", seen.join(", ")))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut cells = 0;
    for (label, engine) in [("registry", BoundEngine::new()), ("derived-only", BoundEngine::without_registry())] {
        for n in 6..=8 {
            let tab = generate(&engine, 2, n, 2).map_err(e)?;
            let cmp = compare(&tab, KnownValues::bundled());
            ensure(cmp.len() as u32 == (2..n).map(|k| k).sum::<u32>(), || format!("n={n}: {} fixture cells", cmp.len()))?;
            cells += cmp.len();
            for c in cmp.iter().filter(|c| !c.sound) {
                bad.push(format!(
                    "{label} n={n} k={} t={}: ours [{}, {}] vs printed [{}, {}]",
                    c.k, c.t, c.lower, c.upper, c.fixture_lower, c.fixture_upper
                ));
            }
        }
    }
    // independent check of the contradicting cell: every plane of F_2^7 at once
    let f = Field::get(2).map_err(e)?;
    let planes = PackingCode::new(f, 7, 3, enumerate_subspaces(f, 7, 3).map_err(e)?.collect()).map_err(e)?;
    let report = verify_packing(&planes, 3, 2).map_err(e)?;
    let oracle = format!("oracle: all {} planes form a valid 2-fold packing: {}", planes.len(), report.valid);
    within(start, Duration::from_secs(300))?;
    if bad.is_empty() {
        Ok(format!("{cells} cells sound; {oracle}"))
    } else {
        Err(format!("{} of {cells} cell checks contradict: {}; {oracle}", bad.len(), bad.join("; ")))
    }
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let exhaustive = CoveringCheck { budget: 1 << 40, ..Default::default() };
    let mut sizes = Vec::new();
    for (alpha, want) in [(2u64, 4usize), (3, 8)] {
        let c = cp(4, 2, 2, alpha);
        let code = construction_1(&c).map_err(e)?;
        ensure(code.len() == want, || format!("{c}: {} blocks", code.len()))?;
        let r = verify_covering(&code, 2, alpha as usize, &exhaustive).map_err(e)?;
        ensure(r.valid && !r.probabilistic, || format!("{c}: {r}"))?;
        sizes.push(code.len());
    }
    let c = cp(7, 3, 2, 2);
    let plan = linked_plan(&c, 2).map_err(e)?;
    let subspace_plan = match &plan {
        subpack::constructions::LinkagePlan::Linked { inner, .. } => inner.clone(),
        other => return Err(format!("unexpected plan {}", other.describe())),
    };
    let inner = build_plan(&c.with_n(5), &subspace_plan, 1 << 20).map_err(e)?;
    let code = construction_2(&c, 2, &inner, false).map_err(e)?;
    ensure(code.len() == 64, || format!("{c}: {} blocks", code.len()))?;
    let r = verify_covering(&code, 2, 2, &exhaustive).map_err(e)?;
    ensure(r.valid && !r.probabilistic, || format!("{c}: {r}"))?;
    sizes.push(code.len());
    within(start, Duration::from_secs(30))?;
    Ok(format!("sizes {sizes:?}, all verified exhaustively"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let engine = BoundEngine::new();
    for (p, want) in [(pp(4, 2, 1, 1), 5), (pp(4, 2, 2, 1), 35)] {
        let r = exhaustive_max(&p, u64::MAX, &engine).map_err(e)?;
        ensure(r.complete && r.value == want, || format!("{p}: {} (complete {})", r.value, r.complete))?;
    }
    let mut points = Vec::new();
    for n in 2..=5u32 {
        for k in 1..n {
            for t in 1..=k {
                for lambda in 1..=3 {
                    let p = pp(n, k, t, lambda);
                    if p.block_count().map_err(e)? <= 700 {
                        points.push(p);
                    }
                }
            }
        }
    }
    let results: Vec<Result<(PackingParams, usize, bool), String>> = points
        .par_iter()
        .map(|p| {
            let r = exhaustive_max(p, 5_000_000, &engine).map_err(e)?;
            let lower = packing_lower(p).map_err(e)?;
            let upper = engine.best_upper(p).map_err(e)?.upper;
            let valid = verify_packing(&r.witness, p.t as usize, p.lambda).map_err(e)?.valid;
            ensure(valid && r.witness.len() == r.value, || format!("{p}: witness invalid"))?;
            ensure(lower <= r.value as u128 && r.value as u128 <= upper, || {
                format!("{p}: {lower} <= {} <= {upper} fails", r.value)
            })?;
            Ok((*p, r.value, r.complete))
        })
        .collect();
    let mut incomplete = Vec::new();
    for r in results {
        let (p, v, complete) = r?;
        if !complete {
            incomplete.push(format!("{p} >= {v}"));
        }
    }
    within(start, Duration::from_secs(600))?;
    let note = if incomplete.is_empty() {
        "all searches complete".to_string()
    } else {
        format!("node budget reached at {} (best packing found is used)", incomplete.join(", "))
    };
    Ok(format!("A(4,2,1;1)=5, A(4,2,2;1)=35, sandwich holds at {} points; {note}", points.len()))
}

/// Maximizes a 0/1 program with nonnegative `<=` rows by depth-first search.
/// Works only on the parsed text, independent of how the model was built.
fn solve_parsed(m: &LinearModel) -> i64 {
    let vars: Vec<&String> = m.objective.keys().collect();
    let index: BTreeMap<&String, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut rows_of = vec![Vec::new(); vars.len()];
    let mut slack = Vec::new();
    for (r, (coefs, rhs)) in m.rows.values().enumerate() {
        for (v, &c) in coefs {
            rows_of[index[v]].push((r, c));
        }
        slack.push(*rhs as i64);
    }
    let weights: Vec<i64> = vars.iter().map(|v| m.objective[*v]).collect();
    fn go(i: usize, value: i64, rest: i64, w: &[i64], rows_of: &[Vec<(usize, i64)>], slack: &mut [i64], best: &mut i64) {
        *best = (*best).max(value);
        if i == w.len() || value + rest <= *best {
            return;
        }
        if rows_of[i].iter().all(|&(r, c)| slack[r] >= c) {
            rows_of[i].iter().for_each(|&(r, c)| slack[r] -= c);
            go(i + 1, value + w[i], rest - w[i], w, rows_of, slack, best);
            rows_of[i].iter().for_each(|&(r, c)| slack[r] += c);
        }
        go(i + 1, value, rest - w[i], w, rows_of, slack, best);
    }
    let mut best = 0;
    go(0, 0, weights.iter().sum(), &weights, &rows_of, &mut slack, &mut best);
    best
}

fn criterion_8() -> Outcome {
    let p = pp(4, 2, 1, 1);
    let engine = BoundEngine::new();
    let model = build_model(&p, false, &engine, DEFAULT_SIZE_CAP).map_err(e)?;
    ensure(model.variable_count() == 35 && model.rows.len() == 15, || {
        format!("{} variables, {} rows", model.variable_count(), model.rows.len())
    })?;
    let witness = exhaustive_max(&p, u64::MAX, &engine).map_err(e)?.witness;
    let chosen = model.assignment_of(&witness).map_err(e)?;
    let violated = model.violated_rows(&chosen);
    ensure(violated.is_empty(), || format!("witness violates {violated:?}"))?;
    let strong = build_model(&p.with(5, 3, 2).clone(), true, &engine, DEFAULT_SIZE_CAP).map_err(e)?;
    let w = exhaustive_max(&strong.params, 1_000_000, &engine).map_err(e)?.witness;
    let violated = strong.violated_rows(&strong.assignment_of(&w).map_err(e)?);
    ensure(violated.is_empty(), || format!("strengthened model: witness violates {violated:?}"))?;
    let text = writer("lp").map_err(e)?.write(&model).map_err(e)?;
    let optimum = solve_parsed(&parse_lp(&text).map_err(e)?);
    ensure(optimum == 5, || format!("emitted LP has optimum {optimum}"))?;
    Ok("35 variables / 15 rows, witness feasible, emitted LP optimum 5 (in-process solve; external solver run is manual)".into())
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();

    // q-Pascal and symmetry
    let mut identities = 0;
    for q in [2u32, 3, 4, 5, 7] {
        for n in 1..=14u32 {
            for k in 0..=n {
                let b = gaussian_binomial(n, k, q);
                ensure(b == gaussian_binomial(n, n - k, q), || format!("symmetry fails at [{n};{k}]_{q}"))?;
                if k >= 1 && k < n {
                    let qb = |e: u32| num_bigint::BigUint::from(q).pow(e);
                    let left = gaussian_binomial(n - 1, k - 1, q) + qb(k) * gaussian_binomial(n - 1, k, q);
                    let right = qb(n - k) * gaussian_binomial(n - 1, k - 1, q) + gaussian_binomial(n - 1, k, q);
                    ensure(b == left && b == right, || format!("q-Pascal fails at [{n};{k}]_{q}"))?;
                }
                identities += 1;
            }
        }
    }
    parts.push(format!("{identities} binomials"));

    // RREF idempotence and canonicity
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut matrices = 0;
    for q in [2u32, 3, 4, 5, 8, 9] {
        let f = Field::get(q).map_err(e)?;
        for _ in 0..200 {
            let (r, c) = (rng.gen_range(1..6), rng.gen_range(1..8));
            let m = Matrix::from_fn(f, r, c, |_, _| rng.gen_range(0..q) as _);
            let (rref, rank) = m.rref();
            ensure(rref.rref().0 == rref && rref.is_rref(), || format!("GF({q}) rref not idempotent"))?;
            // a random invertible left factor keeps the row space
            let g = loop {
                let g = Matrix::from_fn(f, r, r, |_, _| rng.gen_range(0..q) as _);
                if g.rank() == r {
                    break g;
                }
            };
            let (other, other_rank) = g.mul(&m).map_err(e)?.rref();
            ensure(other == rref && other_rank == rank, || format!("GF({q}) rref not canonical"))?;
            matrices += 1;
        }
    }
    parts.push(format!("{matrices} matrices"));

    // MRD size and exact minimum distance, exhaustively
    let mut codes = 0;
    for k in 1..=3usize {
        for m in 1..=3usize {
            for delta in 1..=k.min(m) {
                let code = gabidulin(k, m, delta, 2).map_err(e)?;
                let words: Vec<Matrix> = code.codewords().map_err(e)?.collect();
                let want = 1usize << (k.max(m) * (k.min(m) - delta + 1));
                ensure(words.len() == want, || format!("{k}x{m} d={delta}: {} words", words.len()))?;
                let mut min = usize::MAX;
                for i in 0..words.len() {
                    for j in i + 1..words.len() {
                        min = min.min(rank_distance(&words[i], &words[j]).map_err(e)?);
                    }
                }
                ensure(words.len() == 1 || min == delta, || format!("{k}x{m} d={delta}: min distance {min}"))?;
                codes += 1;
            }
        }
    }
    parts.push(format!("{codes} MRD codes"));

    // hyperplane congruence for every constructed code with n <= 6, and duality
    let mut constructed = 0;
    for q in [2u32, 3] {
        for n in 2..=6u32 {
            for k in 1..n {
                for delta in 1..=(n - k) {
                    for alpha in 2..=3u64 {
                        let c = CoveringParams::new(q, n, k, delta, alpha).map_err(e)?;
                        let plan = linkage_plan(&c).map_err(e)?;
                        if plan.size() > 4000 {
                            continue;
                        }
                        let code = build_plan(&c, &plan, 4000).map_err(e)?;
                        let mut codes = vec![(code.clone(), k), (code.dual(), n - k)];
                        if delta >= 2 && delta <= k {
                            codes.push((construction_1(&c).map_err(e)?, k));
                        }
                        for (code, dim) in codes {
                            let pts = PointMultiset::from_blocks(code.blocks()).map_err(e)?;
                            let modulus = (q as u64).pow(dim as u32 - 1);
                            ensure(pts.hyperplane_congruence(modulus), || format!("{c}: congruence mod {modulus} fails"))?;
                        }
                        ensure(code.dual().dual() == code, || format!("{c}: double dual differs"))?;
                        if let Ok(p) = dualize_covering(&c) {
                            ensure(dualize_packing(&p) == c, || format!("{c}: parameter duality round trip"))?;
                            if p.t >= 1 {
                                let r = verify_packing(&code.dual(), p.t as usize, p.lambda).map_err(e)?;
                                ensure(r.valid, || format!("{c}: dual is not a packing for {p}"))?;
                            }
                        }
                        constructed += 1;
                    }
                }
            }
        }
    }
    parts.push(format!("{constructed} constructed codes"));
    let n_blocks = gaussian_binomial_u128(6, 3, 2).map_err(e)?;
    ensure(n_blocks == 1395, || "[6;3]_2".into())?;
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut ok = true;
    for (id, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let known = KNOWN_RED.iter().find(|(k, _)| *k == id).map(|(_, why)| *why);
        match (&outcome, known) {
            (Ok(detail), None) => println!("criterion {id}: PASS ({took:.1?}) {detail}"),
            (Ok(detail), Some(_)) => {
                println!("criterion {id}: PASS ({took:.1?}) {detail} [listed as known failure; update KNOWN_RED]");
                ok = false;
            }
            (Err(detail), Some(why)) => println!("criterion {id}: FAIL ({took:.1?}) known: {why}. {detail}"),
            (Err(detail), None) => {
                println!("criterion {id}: FAIL ({took:.1?}) {detail}");
                ok = false;
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
