//! Acceptance run: one line per criterion, then a summary.
//!
//! Criteria whose literal statement is refuted by a counterexample print
//! FAIL together with the counterexample and the result of the corrected
//! statement. Those refutations are listed in `REFUTED_AS_PRINTED` and do
//! not fail the process; any other FAIL does.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use walras::auction::{self, AuctionOptions, Direction, Policy, PolicyKind};
use walras::demand::{self, DemandClass, GsCheck};
use walras::equilibrium::{max_walrasian, min_walrasian};
use walras::generate::{generate, GenerateSpec};
use walras::instance::fixtures::{e1, u1, x1};
use walras::lyapunov;
use walras::sweep::{selftest, SuiteStatus, SweepConfig, SweepReport};
use walras::{Instance, ItemSet, PriceOracle, PriceVector, ProfileTable};

const CORPUS_SIZE: u64 = 200;
const CRITERION_1_LIMIT: Duration = Duration::from_secs(1);
const CRITERION_2_LIMIT: Duration = Duration::from_secs(300);

/// Criteria whose literal statement has a counterexample.
const REFUTED_AS_PRINTED: [u32; 2] = [3, 7];

struct Line {
    id: u32,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn price(p: &[u64]) -> PriceVector {
    PriceVector::new(p.to_vec())
}

fn set(items: &[usize]) -> ItemSet {
    ItemSet::from_items(items.iter().copied())
}

fn criterion_1() -> Line {
    let start = Instant::now();
    let inst = e1();
    let zero = price(&[0, 0]);
    let l = inst.lyapunov(&zero);
    let mm = auction::minimal_minimizer(&inst, &zero).map(|c| c.set);
    let ed = auction::excess_demand_sets(&inst, &zero);
    let lo = min_walrasian(&inst).ok();
    let hi = max_walrasian(&inst).ok();
    let elapsed = start.elapsed();
    let pass = l == 6
        && mm == Some(set(&[0, 1]))
        && ed == vec![set(&[0]), set(&[1]), set(&[0, 1])]
        && lo == Some(price(&[1, 1]))
        && hi == Some(price(&[1, 1]))
        && elapsed < CRITERION_1_LIMIT;
    Line {
        id: 1,
        pass,
        detail: format!(
            "L(0,0)={l}, minimal minimizer {}, ED(0,0)={}, min={}, max={}",
            mm.map_or("none".into(), |s| s.to_string()),
            list(&ed),
            lo.map_or("none".into(), |p| p.to_string()),
            hi.map_or("none".into(), |p| p.to_string()),
        ),
        elapsed,
    }
}

fn list(sets: &[ItemSet]) -> String {
    let inner: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

struct Corpus {
    instances: Vec<Instance>,
    reports: Vec<SweepReport>,
    elapsed: Duration,
}

fn corpus() -> Corpus {
    let start = Instant::now();
    let instances: Vec<Instance> = (0..CORPUS_SIZE)
        .map(|seed| generate(&GenerateSpec::corpus(seed)).expect("corpus spec within caps"))
        .collect();
    let reports = instances
        .iter()
        .map(|inst| selftest(inst, SweepConfig::default()).expect("corpus instance within work limits"))
        .collect();
    Corpus {
        instances,
        reports,
        elapsed: start.elapsed(),
    }
}

/// Totals for the named suites across the corpus.
fn suites_line(corpus: &Corpus, names: &[&str]) -> (bool, String) {
    let mut parts = Vec::new();
    let mut pass = true;
    for &name in names {
        let (mut checked, mut failed, mut first) = (0u64, 0u64, None);
        for (seed, r) in corpus.reports.iter().enumerate() {
            let s = r.suite(name).expect("suite present");
            if s.status != SuiteStatus::Passed {
                pass = false;
            }
            checked += s.checked;
            failed += s.failed;
            if first.is_none() {
                first = s.counterexample.clone().map(|c| (seed, c));
            }
        }
        let mut part = format!("{name} {failed}/{checked} failed");
        if let Some((seed, c)) = first {
            part += &format!(" (first: corpus seed {seed}, {c:?})");
        }
        parts.push(part);
    }
    let premise_ok = corpus.reports.iter().all(|r| r.premise.gross_substitute);
    if !premise_ok {
        pass = false;
        parts.push("some corpus instance failed the premise".into());
    }
    (pass, parts.join("; "))
}

/// Literal form of the ascending invariant: no nonempty weakly
/// under-demanded set at any visited price, lowerable or not.
fn ascending_as_printed(corpus: &Corpus) -> (u64, u64, u64, Option<String>) {
    let (mut visited, mut broken, mut multi, mut first) = (0u64, 0u64, 0u64, None);
    for (seed, inst) in corpus.instances.iter().enumerate() {
        let table = ProfileTable::build(inst).expect("table within limits");
        for kind in PolicyKind::shipped() {
            let trace = auction::run_auction(
                &table,
                Direction::Ascending,
                &mut Policy::new(kind),
                AuctionOptions::default(),
            )
            .expect("shipped policies respect the contract");
            for p in trace.visited() {
                visited += 1;
                let wud = demand::enumerate_class(&table, p, DemandClass::WUD);
                if let Some(&s) = wud.iter().find(|s| !s.is_empty()) {
                    broken += 1;
                    if inst.n() > 1 {
                        multi += 1;
                    }
                    first.get_or_insert_with(|| {
                        format!("corpus seed {seed} (n={}), price {p}, {s} has h={}", inst.n(), table.redundant(p, s))
                    });
                }
            }
        }
    }
    (visited, broken, multi, first)
}

/// Literal form of the requirement monotonicity: `l_p(S) >= l_{p+1_T}(S)`
/// for disjoint `S`, `T`.
fn monotonicity_as_printed(instances: &[(String, Instance)]) -> (u64, u64, Option<String>) {
    let (mut checked, mut broken, mut first) = (0u64, 0u64, None);
    for (name, inst) in instances {
        let table = ProfileTable::build(inst).expect("table within limits");
        let m = inst.m();
        for p in inst.grid().iter() {
            for t in ItemSet::all(m).skip(1) {
                let raised = p.raise(t);
                for s in ItemSet::full(m).difference(t).subsets().skip(1) {
                    for i in 0..inst.n() {
                        checked += 1;
                        let before = table.bidder_requirement(i, &p, s);
                        let after = table.bidder_requirement(i, &raised, s);
                        if before < after {
                            broken += 1;
                            first.get_or_insert_with(|| {
                                format!("{name}, bidder {i}, p={p}, S={s}, T={t}: {before} < {after}")
                            });
                        }
                    }
                }
            }
        }
    }
    (checked, broken, first)
}

fn criterion_6_detector() -> (bool, String) {
    let x = x1();
    match demand::is_gross_substitute(&x.bidders()[0], 5) {
        Ok(GsCheck::Violation(w)) => {
            let ok = w.price == price(&[1, 1]) && w.set == set(&[0, 1]) && (w.lhs, w.rhs) == (1, 2);
            (ok, format!("X1 witness p={}, S={}, sides {} vs {}", w.price, w.set, w.lhs, w.rhs))
        }
        other => (false, format!("X1 not rejected: {other:?}")),
    }
}

fn criterion_9() -> Line {
    let start = Instant::now();
    let inst = e1();
    let zero = price(&[0, 0]);
    let ed = auction::excess_demand_sets(&inst, &zero);
    let mm = auction::minimal_minimizer(&inst, &zero);
    let pass = ed.len() == 3 && mm.is_some_and(|c| c.unique && ed.contains(&c.set));
    Line {
        id: 9,
        pass,
        detail: format!("|ED(0,0)| = {} > 1 = |{{minimal minimizer}}|", ed.len()),
        elapsed: start.elapsed(),
    }
}

fn main() -> ExitCode {
    let mut lines = vec![criterion_1()];

    let corpus = corpus();
    let sweep_time = corpus.elapsed;
    let n_single = corpus.instances.iter().filter(|i| i.n() == 1).count();
    println!(
        "corpus: {} instances (seeds 0..{CORPUS_SIZE}, m<=4, n<=4, values<=4, additive/unit-demand mix, {n_single} single-bidder), sweep {:.2?}",
        corpus.instances.len(),
        sweep_time
    );

    let (pass, detail) = suites_line(&corpus, &["characterization"]);
    lines.push(Line {
        id: 2,
        pass: pass && sweep_time < CRITERION_2_LIMIT,
        detail,
        elapsed: sweep_time,
    });

    let start = Instant::now();
    let (pass, detail) = suites_line(&corpus, &["ascending"]);
    let (visited, broken, multi, first) = ascending_as_printed(&corpus);
    lines.push(Line {
        id: 3,
        pass: pass && broken == 0,
        detail: format!(
            "corrected (lowerable sets only): {detail}; as printed (every nonempty set): {broken}/{visited} visited prices with a nonempty WUD set, {multi} of them with n > 1{}",
            first.map_or(String::new(), |f| format!(", first: {f}"))
        ),
        elapsed: start.elapsed(),
    });

    for (id, names) in [(4, &["descending"][..]), (5, &["necessity"][..])] {
        let (pass, detail) = suites_line(&corpus, names);
        lines.push(Line {
            id,
            pass,
            detail,
            elapsed: Duration::ZERO,
        });
    }

    let start = Instant::now();
    let (pass, detail) = suites_line(&corpus, &["gs_equalities", "lyapunov_delta"]);
    let (ok, witness) = criterion_6_detector();
    lines.push(Line {
        id: 6,
        pass: pass && ok,
        detail: format!("{detail}; {witness}"),
        elapsed: start.elapsed(),
    });

    let start = Instant::now();
    let (pass, detail) = suites_line(&corpus, &["submodularity", "lattice", "monotonicity", "single_improvement"]);
    let mut named: Vec<(String, Instance)> = vec![("U1".into(), u1())];
    named.extend(
        corpus
            .instances
            .iter()
            .enumerate()
            .map(|(seed, inst)| (format!("corpus seed {seed}"), inst.clone())),
    );
    let (checked, broken, first) = monotonicity_as_printed(&named);
    lines.push(Line {
        id: 7,
        pass: pass && broken == 0,
        detail: format!(
            "{detail} (monotonicity checked as l_p(S) <= l_{{p+1_T}}(S)); as printed l_p(S) >= l_{{p+1_T}}(S): {broken}/{checked} refuted{}",
            first.map_or(String::new(), |f| format!(", first: {f}"))
        ),
        elapsed: start.elapsed(),
    });

    let (pass, detail) = suites_line(&corpus, &["duality"]);
    lines.push(Line {
        id: 8,
        pass,
        detail,
        elapsed: Duration::ZERO,
    });

    lines.push(criterion_9());

    let sanity = lyapunov::grid_minimize_lyapunov(&e1()).map(|r| r.min_value).ok() == Some(2);

    let mut unexpected = 0;
    for line in &lines {
        let tag = if line.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {tag} [{:.2?}] {}", line.id, line.elapsed, line.detail);
        if !line.pass && !REFUTED_AS_PRINTED.contains(&line.id) {
            unexpected += 1;
        }
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    println!(
        "summary: {passed}/{} PASS; {} FAIL, of which {} refuted as printed and {unexpected} unexpected",
        lines.len(),
        lines.len() - passed,
        lines.len() - passed - unexpected
    );
    if unexpected == 0 && sanity {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
