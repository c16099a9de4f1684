//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigUint;
use ovaltrack::classify::{classify, is_member, order, GroupFamily};
use ovaltrack::macros::{expected_cycle, MacroKind};
use ovaltrack::moves::{apply_word, eval_word, PuzzleSpec};
use ovaltrack::oracle::{enumerate_group, group_order_stabchain, pack, unpack, DEFAULT_STATE_LIMIT};
use ovaltrack::perm::{ParityType, Permutation};
use ovaltrack::repair::{random_solvable, random_solvable_with, validate};
use ovaltrack::solver::{SolveError, Solver};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const CHI_SQUARED_MIN_P: f64 = 0.001;
const UNIFORMITY_SAMPLES: usize = 100_000;
const SOAK_PER_SPEC: usize = 80;
const MACRO_SWEEP_MAX_N: usize = 30;

fn spec(n: usize, k: usize) -> PuzzleSpec {
    PuzzleSpec::new(n, k).expect("valid spec")
}

fn cyc(text: &str, n: usize) -> Permutation {
    Permutation::parse_cycles(text, n).expect("valid cycles")
}

type Outcome = Result<String, String>;

fn order_agreement_bfs() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=8 {
        for k in 1..=n {
            let s = spec(n, k);
            let found = enumerate_group(s, DEFAULT_STATE_LIMIT).map_err(|e| e.to_string())?.count();
            let predicted = order(&classify(s));
            checked += 1;
            if BigUint::from(found) != predicted {
                failures.push(format!("{s}: bfs {found}, predicted {predicted}"));
            }
        }
    }
    let pinned = [((4, 2), 24u32), ((5, 2), 120), ((6, 3), 72), ((7, 4), 2520), ((8, 5), 576)];
    for ((n, k), expected) in pinned {
        let found = enumerate_group(spec(n, k), DEFAULT_STATE_LIMIT).map_err(|e| e.to_string())?.count();
        if found != expected as usize {
            failures.push(format!("({n},{k}): bfs {found}, pinned {expected}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} specs, all orders equal"))
    } else {
        Err(failures.join("; "))
    }
}

fn pointwise_membership() -> Outcome {
    let mut disagreements = 0u64;
    let mut checked = 0u64;
    for n in 1..=7 {
        let total: u64 = (1..=n as u64).product();
        for k in 1..=n {
            let s = spec(n, k);
            let group = enumerate_group(s, DEFAULT_STATE_LIMIT).map_err(|e| e.to_string())?;
            for code in 0..total {
                let p = unpack(code, n);
                checked += 1;
                if is_member(s, &p).map_err(|e| e.to_string())?.member != group.elements.contains(&code) {
                    disagreements += 1;
                }
            }
        }
    }
    if disagreements == 0 {
        Ok(format!("{checked} (spec, permutation) pairs, 0 disagreements"))
    } else {
        Err(format!("{disagreements} disagreements out of {checked}"))
    }
}

fn chain_orders() -> Outcome {
    let factorial = |m: u32| (1..=m).fold(BigUint::from(1u32), |acc, i| acc * i);
    let cases = [
        ((20, 4), factorial(20)),
        ((20, 5), factorial(10) * factorial(10)),
        ((14, 9), BigUint::from(12_700_800u32)),
        ((12, 9), BigUint::from(518_400u32)),
    ];
    let mut report = Vec::new();
    for ((n, k), expected) in cases {
        let s = spec(n, k);
        let found = group_order_stabchain(s).map_err(|e| e.to_string())?;
        if found != expected {
            return Err(format!("{s}: chain {found}, expected {expected}"));
        }
        if order(&classify(s)) != expected {
            return Err(format!("{s}: classifier disagrees with {expected}"));
        }
        report.push(format!("{s}={found}"));
    }
    Ok(report.join(", "))
}

fn macro_sweep() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=MACRO_SWEEP_MAX_N {
        for k in 1..=n {
            let s = spec(n, k);
            for kind in MacroKind::ALL {
                let Ok(word) = kind.build(s) else { continue };
                checked += 1;
                if eval_word(&word, s) != expected_cycle(kind, s) {
                    failures.push(format!("{kind:?} on {s}"));
                }
            }
        }
    }
    if checked == 0 {
        return Err("no macro was buildable".into());
    }
    if failures.is_empty() {
        Ok(format!("{checked} macro words, all exact"))
    } else {
        Err(failures.join("; "))
    }
}

fn worked_examples() -> Outcome {
    let theta = cyc("(1 2 3 4)", 6);
    let sigma = cyc("(1 3 5)(2 6)", 6);
    let conjugate = sigma.conjugated_by(&theta).map_err(|e| e.to_string())?;
    if conjugate.to_string() != "(2 4 5)(3 6)" {
        return Err(format!("conjugation gave {conjugate}"));
    }

    let s = spec(20, 5);
    let piles = cyc("(1 6 9 12 13 20 19 10 3 8 7 2 11 14)(4 5)(15 16 17 18)", 20);
    let membership = is_member(s, &piles).map_err(|e| e.to_string())?;
    let core_even = membership.reason.half_signs.map(|(a, b)| a * b == 1);
    if !membership.member || piles.is_even() || piles.parity_type() != ParityType::TypeII || core_even != Some(true) {
        return Err(format!("pile example: {}", membership.reason));
    }
    if !validate(s, &piles).map_err(|e| e.to_string())?.valid {
        return Err("pile example not validated".into());
    }

    let closing_spec = spec(14, 9);
    let closing = Permutation::from_tiles(&[9, 10, 7, 6, 13, 2, 1, 4, 3, 12, 11, 14, 5, 8]).map_err(|e| e.to_string())?;
    if !is_member(closing_spec, &closing).map_err(|e| e.to_string())?.member {
        return Err("closing arrangement rejected".into());
    }
    let result = Solver::new(closing_spec)
        .and_then(|mut solver| solver.solve(&closing))
        .map_err(|e| e.to_string())?;
    let solved = apply_word(&result.word, &closing, closing_spec).map_err(|e| e.to_string())?;
    if !solved.is_identity() {
        return Err("closing arrangement not solved".into());
    }
    Ok(format!(
        "conjugate {conjugate}; pile example member, odd, Type II; closing solved in {} moves",
        result.length
    ))
}

fn solver_soak() -> Outcome {
    let specs = [
        (20, 4),
        (7, 2),
        (9, 6),
        (7, 4),
        (9, 5),
        (6, 3),
        (10, 7),
        (20, 5),
        (12, 9),
        (8, 5),
        (14, 9),
        (18, 9),
        (9, 1),
        (2, 2),
        (8, 7),
        (8, 8),
    ];
    let mut families: HashMap<GroupFamily, usize> = HashMap::new();
    let mut solved = 0;
    let mut rejected = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_916);
    for (n, k) in specs {
        let s = spec(n, k);
        let mut solver = Solver::new(s).map_err(|e| e.to_string())?;
        for _ in 0..SOAK_PER_SPEC {
            let scramble = random_solvable_with(s, &mut rng);
            match solver.solve(&scramble) {
                Ok(result) => {
                    let end = apply_word(&result.word, &scramble, s).map_err(|e| e.to_string())?;
                    if !result.verified || !end.is_identity() {
                        return Err(format!("{s}: bad solution for {scramble}"));
                    }
                    solved += 1;
                }
                Err(e) => return Err(format!("{s}: {scramble} refused: {e}")),
            }
            *families.entry(classify(s).family).or_default() += 1;

            let mut images: Vec<usize> = (1..=n).collect();
            images.shuffle(&mut rng);
            let candidate = Permutation::from_images(&images).map_err(|e| e.to_string())?;
            let member = is_member(s, &candidate).map_err(|e| e.to_string())?.member;
            match (member, solver.solve(&candidate)) {
                (true, Ok(_)) => solved += 1,
                (false, Err(SolveError::NotMember(_))) => rejected += 1,
                (true, Err(e)) => return Err(format!("{s}: member {candidate} refused: {e}")),
                (false, other) => return Err(format!("{s}: non-member {candidate} gave {other:?}")),
            }
        }
    }
    let all = [
        GroupFamily::Symmetric,
        GroupFamily::Alternating,
        GroupFamily::ParitySubgroup,
        GroupFamily::TypeICosetEven,
        GroupFamily::DoubleEvenCoset,
        GroupFamily::Cyclic,
        GroupFamily::Sym2,
        GroupFamily::Dihedral,
    ];
    if let Some(missing) = all.iter().find(|f| !families.contains_key(f)) {
        return Err(format!("family {missing} not covered"));
    }
    if solved < 1000 {
        return Err(format!("only {solved} verified solves"));
    }
    Ok(format!("{solved} verified solves over 8 families, {rejected} non-members rejected"))
}

fn sampling_uniformity() -> Outcome {
    let s = spec(6, 3);
    let group = enumerate_group(s, DEFAULT_STATE_LIMIT).map_err(|e| e.to_string())?;
    let mut counts: HashMap<u64, usize> = group.elements.iter().map(|&c| (c, 0)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6003);
    for _ in 0..UNIFORMITY_SAMPLES {
        let code = pack(&random_solvable_with(s, &mut rng));
        match counts.get_mut(&code) {
            Some(count) => *count += 1,
            None => return Err(format!("sampled a non-member {}", unpack(code, 6))),
        }
    }
    let cells = counts.len() as f64;
    let expected = UNIFORMITY_SAMPLES as f64 / cells;
    let statistic: f64 = counts
        .values()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let p = ChiSquared::new(cells - 1.0).map_err(|e| e.to_string())?.sf(statistic);
    // seeded entry point stays deterministic
    if random_solvable(s, 1) != random_solvable(s, 1) {
        return Err("seeded sampling is not reproducible".into());
    }
    let summary = format!("{} cells, chi2 = {statistic:.2}, p = {p:.4}", counts.len());
    if counts.len() == 72 && p > CHI_SQUARED_MIN_P {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("exhaustive order agreement, n <= 8 (bfs)", order_agreement_bfs),
        ("pointwise membership agreement, n <= 7", pointwise_membership),
        ("moderate-n orders via stabilizer chain", chain_orders),
        ("macro identity sweep, n <= 30", macro_sweep),
        ("worked examples", worked_examples),
        ("solver soak", solver_soak),
        ("sampling uniformity on (6,3), p > 0.001", sampling_uniformity),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{elapsed:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{elapsed:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
