//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL
//! line; the process fails if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use speciallab_core::language::{export_lhs_grammar, wp_member, WpQuery};
use speciallab_core::presentations::make_pi;
use speciallab_core::rewriting::CompleteSystem;
use speciallab_core::special::{compute_lambda, is_invertible};
use speciallab_core::words::Word;

const SEED: u64 = 0x5eed;
const REDUCTION_SAMPLES: usize = 10_000;
const REDUCTION_MAX_LEN: usize = 14;
/// Every rule instance deletes at least this many letters.
const MIN_DELETION: usize = 6;
const INVERTIBILITY_SAMPLES: usize = 1_000;
const INVERTIBILITY_MAX_LEN: usize = 16;
const INVERTIBILITY_WITNESS_BOUND: usize = 16;
const SLICE_TIME_LIMIT: Duration = Duration::from_secs(10);
const GRAMMAR_MAX_LEN: usize = 12;
const WP_PAIRS: usize = 1_000;
const WP_CONTEXTS: usize = 200;

struct Run {
    code: i32,
    kv: Vec<(String, String)>,
    stderr: String,
}

impl Run {
    fn all(&self, key: &str) -> Vec<&str> {
        self.kv
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .collect()
    }

    fn one(&self, key: &str) -> &str {
        match self.all(key).as_slice() {
            [v] => v,
            other => panic!("expected one '{key}', got {other:?}"),
        }
    }
}

fn cli(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_speciallab"))
        .args(args)
        .args(["--format", "kv"])
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        kv: stdout
            .lines()
            .filter_map(|l| l.split_once(": "))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn pi(n: usize, bound: u32) -> CompleteSystem {
    CompleteSystem::certify(make_pi(n).unwrap().to_system().unwrap(), bound).unwrap()
}

fn block(i: usize) -> Word {
    Word::from(format!("a{}c", "b".repeat(i)).as_str())
}

/// `a b^i c` blocks with stray letters in between, so that samples contain
/// redexes and invertible factors often.
fn mixed_word(rng: &mut ChaCha8Rng, max: usize) -> Word {
    let mut letters = Vec::new();
    while letters.len() < max {
        if rng.gen_bool(0.7) {
            letters.extend_from_slice(block(rng.gen_range(1..=3)).letters());
        } else {
            letters.push(['a', 'b', 'c'][rng.gen_range(0..3)]);
        }
        if rng.gen_bool(0.2) {
            break;
        }
    }
    letters.truncate(max);
    Word::from_letters(letters)
}

fn uniform_word(rng: &mut ChaCha8Rng, max: usize) -> Word {
    let len = rng.gen_range(0..=max);
    (0..len)
        .map(|_| ['a', 'b', 'c'][rng.gen_range(0..3)])
        .collect()
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Outcome {
    let run = cli(&["--family", "pi", "--n", "2", "--i-bound", "8", "check"]);
    ensure(run.code == 0, format!("exit {}", run.code))?;
    ensure(
        run.one("verdict") == "locally-confluent-up-to-bound",
        "verdict",
    )?;
    ensure(run.one("unjoinable_pairs") == "0", "unjoinable pairs")?;
    ensure(
        run.one("mismatched_parameter_pairs") == "0",
        "mismatched pairs",
    )?;
    let overlaps = run.all("overlap");
    ensure(
        !overlaps.is_empty()
            && overlaps.iter().all(|o| {
                o.starts_with("proper overlap")
                    && o.contains("equal parameters")
                    && o.ends_with("source (a b^i c)^3")
            }),
        format!("overlap shapes {overlaps:?}"),
    )?;
    // Oracle: every proper suffix/prefix overlap of two instances, by direct
    // comparison of the instance words.
    let mut sources = BTreeSet::new();
    for i in 1..=8 {
        for j in 1..=8 {
            let (l, r) = (block(i).repeat(2), block(j).repeat(2));
            for k in 1..l.len().min(r.len()) {
                if l.suffix(k) == r.prefix(k) {
                    sources.insert(l.concat(&r.factor(k, r.len())));
                }
            }
        }
    }
    ensure(
        sources
            .iter()
            .all(|s| (1..=8).any(|i| *s == block(i).repeat(3))),
        "oracle found an overlap outside the three-block shape",
    )?;
    let examined: usize = run.one("critical_pairs").parse().unwrap();
    ensure(
        examined == sources.len(),
        format!("{examined} pairs examined, oracle finds {}", sources.len()),
    )?;
    Ok(format!(
        "{examined} critical pairs, all joinable, all of shape (a b^i c)^3"
    ))
}

fn criterion_2() -> Outcome {
    let sys = pi(2, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut with_steps = 0;
    for k in 0..REDUCTION_SAMPLES {
        let w = if k % 2 == 0 {
            mixed_word(&mut rng, REDUCTION_MAX_LEN)
        } else {
            uniform_word(&mut rng, REDUCTION_MAX_LEN)
        };
        let leftmost = sys.normal_form(&w);
        let (random, steps) = sys
            .system()
            .reduce_with(&w, |n| rng.gen_range(0..n))
            .map_err(|e| e.to_string())?;
        ensure(random == leftmost, format!("{w}: {random} vs {leftmost}"))?;
        ensure(
            steps <= w.len() / MIN_DELETION,
            format!("{w}: {steps} steps"),
        )?;
        with_steps += (steps > 0) as usize;
    }
    Ok(format!(
        "{REDUCTION_SAMPLES} words, {with_steps} reducible, random strategy agrees with leftmost"
    ))
}

fn criterion_3() -> Outcome {
    for i in 1..=5 {
        let w = block(i).repeat(2).to_string();
        let run = cli(&["--family", "pi", "--n", "2", "factor", &w]);
        let expect = block(i).to_string();
        ensure(
            run.code == 0 && run.all("factor") == [expect.as_str(), expect.as_str()],
            format!("{w}: {:?}", run.all("factor")),
        )?;
    }
    let run = cli(&["--family", "pi", "--n", "2", "factor", "abcabbc"]);
    ensure(
        run.code == 0 && run.all("factor") == ["abc", "abbc"],
        format!("abcabbc: {:?}", run.all("factor")),
    )?;
    Ok("(a b^i c)^2 splits into two a b^i c for i = 1..5; abcabbc -> [abc, abbc]".to_string())
}

fn criterion_4() -> Outcome {
    let lambda = cli(&["--family", "pi", "--n", "2", "lambda"]);
    ensure(
        lambda.code == 0 && lambda.all("element") == ["a b^i c (i >= 1)"],
        format!("lambda {:?}", lambda.all("element")),
    )?;
    let units = cli(&["--family", "pi", "--n", "2", "units"]);
    ensure(
        units.code == 0 && units.all("relator") == ["x_i^2 = 1"],
        format!("Pi_2 relators {:?}", units.all("relator")),
    )?;
    ensure(
        units.one("structure") == "free product of infinitely many copies of C2, one per generator"
            && units.one("finitely_generated") == "false",
        format!("Pi_2 structure {}", units.one("structure")),
    )?;
    let units3 = cli(&["--family", "pi", "--n", "3", "--i-bound", "4", "units"]);
    ensure(
        units3.code == 0 && units3.all("relator") == ["x_i^3 = 1"],
        format!("Pi_3 relators {:?}", units3.all("relator")),
    )?;
    Ok(
        "Lambda = {a b^i c}; Pi_2 relators x_i^2, not finitely generated; Pi_3 relators x_i^3"
            .into(),
    )
}

fn criterion_5() -> Outcome {
    let sys = pi(2, 8);
    let lam = compute_lambda(&sys, 4, INVERTIBILITY_WITNESS_BOUND).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut invertible = 0;
    for k in 0..INVERTIBILITY_SAMPLES {
        let raw = if k % 4 == 3 {
            uniform_word(&mut rng, INVERTIBILITY_MAX_LEN)
        } else {
            mixed_word(&mut rng, INVERTIBILITY_MAX_LEN)
        };
        let w = sys.normal_form(&raw);
        ensure(sys.system().is_irreducible(&w), "sample not irreducible")?;
        let by_search = is_invertible(&sys, &w, INVERTIBILITY_WITNESS_BOUND).is_some();
        let by_code = lam.decode(&w).is_some();
        ensure(
            by_search == by_code,
            format!("{w}: search {by_search}, code {by_code}"),
        )?;
        invertible += by_search as usize;
    }
    ensure(
        invertible > 0 && invertible < INVERTIBILITY_SAMPLES,
        "one-sided sample",
    )?;
    Ok(format!(
        "{INVERTIBILITY_SAMPLES} irreducible words ({invertible} invertible), 100% agreement"
    ))
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    for (n, e) in [(2usize, 5u32), (3, 4), (4, 4)] {
        let start = Instant::now();
        let run = cli(&["slice", &n.to_string(), "--e-bound", &e.to_string()]);
        let elapsed = start.elapsed();
        let expected: Vec<String> = (1..=e)
            .map(|i| format!("({})", vec![i.to_string(); n].join(",")))
            .collect();
        ensure(
            run.code == 0 && run.one("members") == expected.join(" "),
            format!("n = {n}: members {}", run.one("members")),
        )?;
        ensure(
            elapsed <= SLICE_TIME_LIMIT,
            format!("n = {n} took {elapsed:?}"),
        )?;
        notes.push(format!(
            "n={n}: {} members in {:.2?}",
            expected.len(),
            elapsed
        ));
    }
    Ok(notes.join("; "))
}

fn criterion_7() -> Outcome {
    let pattern = make_pi(2).unwrap().rules[0].lhs().clone();
    let cnf = export_lhs_grammar(&pattern)
        .map_err(|e| e.to_string())?
        .to_cnf();
    let mut layer: Vec<Vec<char>> = vec![Vec::new()];
    let (mut tested, mut members) = (0usize, Vec::new());
    for len in 0..=GRAMMAR_MAX_LEN {
        for w in &layer {
            let word = Word::from_letters(w.clone());
            let matched = pattern
                .find_matches(&word)
                .iter()
                .any(|m| m.start == 0 && m.length == w.len());
            // Independent oracle: w is (a b^i c)^2 for some i >= 1.
            let oracle =
                w.len() >= 6 && w.len() % 2 == 0 && word == block(w.len() / 2 - 2).repeat(2);
            let cyk = cnf.accepts(w);
            ensure(
                cyk == matched && matched == oracle,
                format!("disagreement on {word}"),
            )?;
            if cyk {
                members.push(word.to_string());
            }
            tested += 1;
        }
        if len < GRAMMAR_MAX_LEN {
            layer = layer
                .iter()
                .flat_map(|w| {
                    ['a', 'b', 'c'].map(|l| {
                        let mut v = w.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
        }
    }
    let rejected = cli(&["--family", "pi", "--n", "3", "grammar"]);
    ensure(
        rejected.code == 1 && rejected.one("rejected").starts_with("not context-free"),
        format!("Pi_3 grammar exit {} {}", rejected.code, rejected.stderr),
    )?;
    Ok(format!(
        "{tested} words, 100% agreement, members {}; (a b^i c)^3 rejected",
        members.join(" ")
    ))
}

fn criterion_8() -> Outcome {
    let check = cli(&["--family", "mn", "--n", "2", "--i-bound", "6", "check"]);
    ensure(
        check.code == 0
            && check.one("unjoinable_pairs") == "0"
            && check.one("verdict") == "locally-confluent-up-to-bound",
        format!("M_2 check exit {}", check.code),
    )?;
    let units = cli(&["--family", "mn", "--n", "2", "--i-bound", "6", "units"]);
    ensure(
        units.code == 0
            && units.one("structure")
                == "free product of infinitely many copies of C2×C2, one per parameter value",
        format!("M_2 units {:?} {}", units.all("structure"), units.stderr),
    )?;
    Ok(format!(
        "M_2: {} critical pairs joinable at t <= 6; units free product of C2×C2 copies",
        check.one("critical_pairs")
    ))
}

fn criterion_9() -> Outcome {
    let sys = pi(2, 8);
    let alphabet = sys.system().alphabet().clone();
    let member = |u: &Word, v: &Word| wp_member(&sys, &WpQuery::of_pair(&alphabet, u, v));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut equal_pairs = Vec::new();
    for _ in 0..WP_PAIRS {
        let u = mixed_word(&mut rng, 12);
        let v = if rng.gen_bool(0.5) {
            // Insert a defining word somewhere in u.
            let k = rng.gen_range(0..=u.len());
            let rel = block(rng.gen_range(1..=3)).repeat(2);
            u.prefix(k).concat(&rel).concat(&u.factor(k, u.len()))
        } else {
            mixed_word(&mut rng, 12)
        };
        ensure(member(&u, &u), format!("reflexivity fails on {u}"))?;
        let (uv, vu) = (member(&u, &v), member(&v, &u));
        ensure(uv == vu, format!("symmetry fails on {u}, {v}"))?;
        if uv {
            equal_pairs.push((u, v));
        }
    }
    ensure(!equal_pairs.is_empty(), "no equal pairs sampled")?;
    for k in 0..WP_CONTEXTS {
        let (u, v) = &equal_pairs[k % equal_pairs.len()];
        let x = uniform_word(&mut rng, 6);
        let y = uniform_word(&mut rng, 6);
        ensure(
            member(&x.concat(u).concat(&y), &x.concat(v).concat(&y)),
            format!("congruence fails on {x}.{u}.{y}"),
        )?;
    }
    Ok(format!(
        "{WP_PAIRS} pairs ({} equal), {WP_CONTEXTS} contexts, no violation",
        equal_pairs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 completeness of T_2", criterion_1),
        ("2 strategy independence", criterion_2),
        ("3 minimal factorization", criterion_3),
        ("4 minimal words and units", criterion_4),
        ("5 invertibility vs decodability", criterion_5),
        ("6 word-problem slices", criterion_6),
        ("7 grammar cross-check", criterion_7),
        ("8 M_2 evidence", criterion_8),
        ("9 word-problem laws", criterion_9),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{:.2?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
