use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use walras::auction::{self, AuctionError, AuctionOptions, AuctionTrace, Direction, Policy, PolicyKind};
use walras::demand::{self, DemandClass, GsCheck, SetClassification};
use walras::equilibrium::{self, CharacterizationVerdict, Evidence};
use walras::generate::{self, GenerateSpec, Mix};
use walras::instance::{self, Violation};
use walras::lyapunov;
use walras::sweep::{self, SuiteStatus, SweepConfig, SweepReport};
use walras::unitdemand::{self, ComparisonReport};
use walras::{Error, Instance, ItemSet, PriceOracle, PriceVector, ProfileTable};

use crate::{Cli, Command, DirectionArg, Format};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CONTRACT: u8 = 2;
pub const EXIT_CHECK: u8 = 3;

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CHECK,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotGrossSubstitute { .. } | Error::NoEquilibrium => EXIT_CHECK,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

pub fn run(cli: &Cli) -> u8 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let out = Out { format: cli.format };
    match &cli.command {
        Command::Validate { file } => validate(&out, &load(file)?),
        Command::Demand { file, price, bidder } => demand(&out, &load(file)?, &price.price, *bidder),
        Command::Classify {
            file,
            price,
            set,
            class,
        } => classify(&out, &load(file)?, &price.price, *set, class.as_deref()),
        Command::GsCheck {
            file,
            bidder,
            cap,
            search,
        } => gs_check(&out, &load(file)?, *bidder, *cap, *search),
        Command::Lyapunov {
            file,
            price,
            raise,
            lower,
        } => lyapunov_at(&out, &load(file)?, &price.price, *raise, *lower),
        Command::LyapunovMin { file } => lyapunov_min(&out, &load(file)?),
        Command::Characterize { file, price, force } => characterize(&out, &load(file)?, &price.price, *force),
        Command::Equilibrium { file } => equilibrium(&out, &load(file)?),
        Command::Auction {
            file,
            direction,
            policy,
            seed,
            unchecked,
            trace,
        } => {
            let direction = match direction {
                DirectionArg::Asc => Direction::Ascending,
                DirectionArg::Desc => Direction::Descending,
            };
            run_auction(&out, &load(file)?, direction, policy, *seed, *unchecked, trace.as_deref())
        }
        Command::Unitdemand { file, price } => unit_demand(&out, &load(file)?, &price.price),
        Command::Selftest {
            file,
            pair_sample,
            sample_seed,
        } => {
            let config = SweepConfig {
                pair_sample: *pair_sample,
                sample_seed: *sample_seed,
                ..SweepConfig::default()
            };
            selftest(&out, &load(file)?, config)
        }
        Command::Generate {
            m,
            n,
            max_value,
            mix,
            seed,
            verify,
            out: path,
        } => {
            let mix = Mix::parse(mix).ok_or_else(|| Failure::usage(format!("unknown mix {mix:?}")))?;
            let spec = GenerateSpec {
                m: *m,
                n: *n,
                max_value: *max_value,
                mix,
                seed: *seed,
            };
            generate(&spec, *verify, path.as_deref())
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Instance::from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

struct Out {
    format: Format,
}

impl Out {
    /// Prints `text` or the JSON rendering of `value`. CSV is refused.
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
        match self.format {
            Format::Text => print!("{}", text()),
            Format::Json => println!("{}", to_json(value)),
            Format::Csv => return Err(Failure::usage("this command has no CSV output")),
        }
        Ok(())
    }

    /// Like `emit`, with a CSV rendering.
    fn emit_table<T: Serialize>(
        &self,
        value: &T,
        text: impl FnOnce() -> String,
        csv: impl FnOnce() -> String,
    ) -> Result<(), Failure> {
        match self.format {
            Format::Csv => {
                print!("{}", csv());
                Ok(())
            }
            _ => self.emit(value, text),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn sets(list: &[ItemSet]) -> String {
    list.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate(out: &Out, inst: &Instance) -> Outcome {
    let report = instance::validate(inst);
    out.emit(&report, || {
        let mut s = format!(
            "m = {}, n = {}\nwell-formed: {}\nVmax = {}\ngrid bound B = {}\n",
            inst.m(),
            inst.n(),
            yes(report.well_formed),
            report.vmax,
            report.grid_bound
        );
        for v in &report.violations {
            match v {
                Violation::NotNormalized { bidder, value } => {
                    let _ = writeln!(s, "bidder {bidder}: v(∅) = {value}, expected 0");
                }
                Violation::NotMonotone {
                    bidder,
                    subset,
                    superset,
                    subset_value,
                    superset_value,
                } => {
                    let _ = writeln!(
                        s,
                        "bidder {bidder}: v({subset}) = {subset_value} > v({superset}) = {superset_value}"
                    );
                }
            }
        }
        s
    })?;
    Ok(if report.well_formed { EXIT_OK } else { EXIT_CHECK })
}

#[derive(Serialize)]
struct BidderDemand {
    bidder: usize,
    max_utility: i64,
    sets: Vec<ItemSet>,
}

fn demand(out: &Out, inst: &Instance, p: &PriceVector, bidder: Option<usize>) -> Outcome {
    inst.check_price(p)?;
    let bidders: Vec<usize> = match bidder {
        Some(i) => {
            inst.bidder(i)?;
            vec![i]
        }
        None => (0..inst.n()).collect(),
    };
    let rows: Vec<BidderDemand> = bidders
        .into_iter()
        .map(|i| {
            let d = demand::demand_sets(&inst.bidders()[i], p);
            BidderDemand {
                bidder: i,
                max_utility: d.max_utility,
                sets: d.sets,
            }
        })
        .collect();
    out.emit_table(
        &rows,
        || {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(s, "bidder {}: u = {}, D = {}", r.bidder, r.max_utility, sets(&r.sets));
            }
            s
        },
        || {
            let mut s = String::from("bidder,max_utility,set\n");
            for r in &rows {
                for d in &r.sets {
                    let _ = writeln!(s, "{},{},\"{d}\"", r.bidder, r.max_utility);
                }
            }
            s
        },
    )?;
    Ok(EXIT_OK)
}

fn classification_csv(rows: &[SetClassification]) -> String {
    let mut s = String::from("set,l,h,size,od,wod,ud,wud\n");
    for c in rows {
        let _ = writeln!(
            s,
            "\"{}\",{},{},{},{},{},{},{}",
            c.set, c.requirement, c.redundant, c.size, c.over, c.weakly_over, c.under, c.weakly_under
        );
    }
    s
}

fn classification_text(rows: &[SetClassification]) -> String {
    let mut s = format!("{:<12} {:>3} {:>3} {:>3}  classes\n", "set", "l", "h", "|S|");
    for c in rows {
        let classes: Vec<&str> = [
            (c.over, "OD"),
            (c.weakly_over, "WOD"),
            (c.under, "UD"),
            (c.weakly_under, "WUD"),
        ]
        .iter()
        .filter(|(on, _)| *on)
        .map(|&(_, name)| name)
        .collect();
        let _ = writeln!(
            s,
            "{:<12} {:>3} {:>3} {:>3}  {}",
            c.set.to_string(),
            c.requirement,
            c.redundant,
            c.size,
            classes.join(" ")
        );
    }
    s
}

fn classify(out: &Out, inst: &Instance, p: &PriceVector, set: Option<ItemSet>, class: Option<&str>) -> Outcome {
    inst.check_price(p)?;
    if let Some(s) = set {
        inst.check_set(s)?;
    }
    let filter = match class {
        Some(name) => Some(DemandClass::parse(name).ok_or_else(|| Failure::usage(format!("unknown class {name:?}")))?),
        None => None,
    };
    let rows: Vec<SetClassification> = match set {
        Some(s) => vec![demand::classify_set(inst, p, s)],
        None => ItemSet::all(inst.m())
            .map(|s| demand::classify_set(inst, p, s))
            .filter(|c| filter.is_none_or(|k| c.is(k)))
            .collect(),
    };
    out.emit_table(&rows, || classification_text(&rows), || classification_csv(&rows))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct GsRow {
    bidder: usize,
    kind: &'static str,
    check: GsCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    search: Option<demand::NonGsSearch>,
}

fn gs_check(out: &Out, inst: &Instance, bidder: Option<usize>, cap: usize, search: bool) -> Outcome {
    let bidders: Vec<usize> = match bidder {
        Some(i) => {
            inst.bidder(i)?;
            vec![i]
        }
        None => (0..inst.n()).collect(),
    };
    let mut rows = Vec::new();
    for i in bidders {
        let v = &inst.bidders()[i];
        if let Some(e) = v.first_violation() {
            return Err(Failure::usage(format!("bidder {i}: {e}")));
        }
        let check = demand::is_gross_substitute(v, cap)?;
        let search = if search {
            Some(demand::non_gs_configuration(v, cap)?)
        } else {
            None
        };
        rows.push(GsRow {
            bidder: i,
            kind: v.kind().name(),
            check,
            search,
        });
    }
    let all_gs = rows.iter().all(|r| r.check.is_gross_substitute());
    out.emit(&rows, || {
        let mut s = String::new();
        for r in &rows {
            match &r.check {
                GsCheck::GrossSubstitute => {
                    let _ = writeln!(s, "bidder {} ({}): gross substitute", r.bidder, r.kind);
                }
                GsCheck::Violation(w) => {
                    let _ = writeln!(s, "bidder {} ({}): not gross substitute", r.bidder, r.kind);
                    let _ = writeln!(s, "  witness {}", serde_json::to_string(w).expect("witness serializes"));
                }
            }
            if let Some(search) = &r.search {
                let describe = |c: &demand::NonGsConfig| serde_json::to_string(c).expect("config serializes");
                match (&search.exact, &search.near_miss) {
                    (Some(c), _) => {
                        let _ = writeln!(s, "  configuration {}", describe(c));
                    }
                    (None, Some(c)) => {
                        let _ = writeln!(s, "  configuration none found; near miss {}", describe(c));
                    }
                    (None, None) => {
                        let _ = writeln!(s, "  configuration none found");
                    }
                }
            }
        }
        s
    })?;
    Ok(if all_gs { EXIT_OK } else { EXIT_CHECK })
}

#[derive(Serialize)]
struct LyapunovOut {
    price: PriceVector,
    #[serde(flatten)]
    report: lyapunov::LyapunovReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    raise: Option<Step>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower: Option<Step>,
}

#[derive(Serialize)]
struct Step {
    set: ItemSet,
    count: u32,
    predicted: i64,
    actual: i64,
}

fn lyapunov_at(out: &Out, inst: &Instance, p: &PriceVector, raise: Option<ItemSet>, lower: Option<ItemSet>) -> Outcome {
    inst.check_price(p)?;
    for s in raise.iter().chain(lower.iter()) {
        inst.check_set(*s)?;
    }
    let report = lyapunov::lyapunov(inst, p);
    let raise = raise.map(|s| {
        let d = lyapunov::delta_up(inst, p, s);
        Step {
            set: s,
            count: inst.requirement(p, s),
            predicted: d.predicted,
            actual: d.actual,
        }
    });
    let lower = match lower {
        Some(s) => {
            let d = lyapunov::delta_down(inst, p, s)?;
            Some(Step {
                set: s,
                count: inst.redundant(p, s),
                predicted: d.predicted,
                actual: d.actual,
            })
        }
        None => None,
    };
    let doc = LyapunovOut {
        price: p.clone(),
        report,
        raise,
        lower,
    };
    out.emit(&doc, || {
        let r = &doc.report;
        let mut s = format!(
            "L{} = {}\nutilities: {:?}\nprice mass: {}\n",
            doc.price, r.value, r.per_bidder_utilities, r.price_mass
        );
        if let Some(st) = &doc.raise {
            let _ = writeln!(
                s,
                "raise {}: l = {}, predicted L = {}, actual L = {}",
                st.set, st.count, st.predicted, st.actual
            );
        }
        if let Some(st) = &doc.lower {
            let _ = writeln!(
                s,
                "lower {}: h = {}, predicted L = {}, actual L = {}",
                st.set, st.count, st.predicted, st.actual
            );
        }
        s
    })?;
    Ok(EXIT_OK)
}

fn lyapunov_min(out: &Out, inst: &Instance) -> Outcome {
    let min = match ProfileTable::build(inst) {
        Ok(table) => lyapunov::grid_minimize_lyapunov_with(&table, inst, walras::Exec::default())?,
        Err(_) => lyapunov::grid_minimize_lyapunov(inst)?,
    };
    out.emit_table(
        &min,
        || {
            let mut s = format!("min L = {}\nminimizers:\n", min.min_value);
            for p in &min.minimizers {
                let _ = writeln!(s, "  {p}");
            }
            s
        },
        || {
            let mut s = String::from("price,L\n");
            for p in &min.minimizers {
                let _ = writeln!(s, "\"{p}\",{}", min.min_value);
            }
            s
        },
    )?;
    Ok(EXIT_OK)
}

fn evidence_text(e: &Option<Evidence>) -> String {
    match e {
        None => "none".into(),
        Some(e) => format!(
            "{} {:?} (l = {}, h = {}, |S| = {})",
            e.set,
            e.class,
            e.requirement,
            e.redundant,
            e.set.len()
        ),
    }
}

fn verdict_text(v: &CharacterizationVerdict) -> String {
    let mut s = format!("price {}\n", v.price);
    let _ = writeln!(
        s,
        "Walrasian: {}; evidence {}",
        yes(v.is_walrasian),
        evidence_text(&v.walrasian_evidence)
    );
    let _ = writeln!(
        s,
        "minimum Walrasian: {}; evidence {}",
        yes(v.is_min_walrasian),
        evidence_text(&v.min_evidence)
    );
    let _ = writeln!(
        s,
        "maximum Walrasian: {}; evidence {}",
        yes(v.is_max_walrasian),
        evidence_text(&v.max_evidence)
    );
    if let Some(b) = &v.boundary_wud {
        let _ = writeln!(s, "weakly under-demanded at a zero price: {}", evidence_text(&Some(*b)));
    }
    s
}

fn characterize(out: &Out, inst: &Instance, p: &PriceVector, force: bool) -> Outcome {
    inst.check_price(p)?;
    let verdict = if force {
        equilibrium::classify_verdict(inst, p)
    } else {
        equilibrium::characterize(inst, p)?
    };
    out.emit(&verdict, || verdict_text(&verdict))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct EquilibriumOut {
    max_welfare: u64,
    welfare_allocation: Vec<ItemSet>,
    walrasian: Vec<PriceVector>,
    min: Option<PriceVector>,
    max: Option<PriceVector>,
    certificate: Option<equilibrium::EquilibriumCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    problem: Option<String>,
}

fn equilibrium(out: &Out, inst: &Instance) -> Outcome {
    let welfare = equilibrium::max_welfare(inst)?;
    let walrasian = equilibrium::walrasian_set(inst)?;
    let (bounds, problem) = match equilibrium::walrasian_bounds(inst, &walrasian) {
        Ok(b) => (Some(b), None),
        Err(e @ (Error::NoEquilibrium | Error::Precondition(_))) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let certificate = bounds.as_ref().and_then(|(lo, _)| equilibrium::is_walrasian(inst, lo));
    let doc = EquilibriumOut {
        max_welfare: welfare.value,
        welfare_allocation: welfare.allocation.bundles.clone(),
        walrasian,
        min: bounds.as_ref().map(|b| b.0.clone()),
        max: bounds.as_ref().map(|b| b.1.clone()),
        certificate,
        problem,
    };
    out.emit(&doc, || {
        let mut s = format!(
            "max welfare {} with bundles {}\n",
            doc.max_welfare,
            sets(&doc.welfare_allocation)
        );
        let listed: Vec<String> = doc.walrasian.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(s, "Walrasian prices ({}): {}", listed.len(), listed.join(" "));
        match (&doc.min, &doc.max) {
            (Some(lo), Some(hi)) => {
                let _ = writeln!(s, "min {lo}\nmax {hi}");
            }
            _ => {
                let _ = writeln!(s, "min/max undefined: {}", doc.problem.as_deref().unwrap_or(""));
            }
        }
        if let Some(c) = &doc.certificate {
            let _ = writeln!(s, "certificate at min: bundles {}", sets(&c.allocation.bundles));
        }
        s
    })?;
    Ok(if doc.problem.is_some() { EXIT_CHECK } else { EXIT_OK })
}

fn trace_text(trace: &AuctionTrace) -> String {
    let mut s = format!(
        "{} auction, policy {}{}\n",
        trace.direction,
        trace.policy,
        trace.seed.map_or(String::new(), |seed| format!(", seed {seed}"))
    );
    for (k, r) in trace.rounds.iter().enumerate() {
        let _ = writeln!(
            s,
            "round {k}: p = {}, S = {}, L {} -> {}",
            r.price, r.set, r.lyapunov_before, r.lyapunov_after
        );
    }
    for b in &trace.breaches {
        let _ = writeln!(
            s,
            "breach in round {}: {} at {}, culprit {}",
            b.round,
            b.set,
            b.price,
            b.culprit.map_or("none".into(), |c| c.to_string())
        );
    }
    let _ = writeln!(s, "final price {}", trace.final_price);
    s
}

fn trace_csv(trace: &AuctionTrace) -> String {
    let mut s = String::from("round,price,set,L_before,L_after\n");
    for (k, r) in trace.rounds.iter().enumerate() {
        let _ = writeln!(
            s,
            "{k},\"{}\",\"{}\",{},{}",
            r.price, r.set, r.lyapunov_before, r.lyapunov_after
        );
    }
    s
}

fn write_trace(path: Option<&Path>, trace: &AuctionTrace) -> Result<(), Failure> {
    if let Some(path) = path {
        fs::write(path, to_json(trace) + "\n").map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn run_auction(
    out: &Out,
    inst: &Instance,
    direction: Direction,
    policy: &str,
    seed: u64,
    unchecked: bool,
    trace_path: Option<&Path>,
) -> Outcome {
    let kind = PolicyKind::parse(policy, seed).ok_or_else(|| Failure::usage(format!("unknown policy {policy:?}")))?;
    let options = if unchecked {
        AuctionOptions::unchecked()
    } else {
        AuctionOptions::default()
    };
    let mut policy = Policy::new(kind);
    let result = match ProfileTable::build(inst) {
        Ok(table) => auction::run_auction(&table, direction, &mut policy, options),
        Err(_) => auction::run_auction(inst, direction, &mut policy, options),
    };
    match result {
        Ok(trace) => {
            write_trace(trace_path, &trace)?;
            out.emit_table(&trace, || trace_text(&trace), || trace_csv(&trace))?;
            Ok(if trace.breaches.is_empty() { EXIT_OK } else { EXIT_CONTRACT })
        }
        Err(e @ (AuctionError::ContractViolation { .. } | AuctionError::RoundLimit { .. })) => {
            let trace = match &e {
                AuctionError::ContractViolation { trace, .. } | AuctionError::RoundLimit { trace, .. } => trace,
                AuctionError::Instance(_) => unreachable!(),
            };
            write_trace(trace_path, trace)?;
            out.emit_table(trace.as_ref(), || trace_text(trace), || trace_csv(trace))?;
            Err(Failure {
                code: EXIT_CONTRACT,
                message: e.to_string(),
            })
        }
        Err(AuctionError::Instance(e)) => Err(e.into()),
    }
}

fn unit_demand(out: &Out, inst: &Instance, p: &PriceVector) -> Outcome {
    inst.check_price(p)?;
    let report = unitdemand::compare_with_general(inst, p)?;
    out.emit_table(
        &report,
        || {
            let mut s = format!("price {}\n", report.price);
            for (i, b) in report.item_demand.per_bidder.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "bidder {i}: items {}{}",
                    b.items,
                    if b.outside_option { ", outside option" } else { "" }
                );
            }
            s += &csv_table(&report);
            for (name, t) in [
                ("MT over vs OD", report.over),
                ("MT under vs UD", report.under),
                ("Andersson vs ED", report.excess),
            ] {
                let _ = writeln!(s, "{name}: {} agree, {} disagree", t.agree, t.disagree);
            }
            s
        },
        || csv_table(&report),
    )?;
    Ok(EXIT_OK)
}

fn csv_table(report: &ComparisonReport) -> String {
    let mut s = String::from(ComparisonReport::csv_header());
    s.push('\n');
    for row in report.csv_rows() {
        s += &row;
        s.push('\n');
    }
    s
}

fn selftest(out: &Out, inst: &Instance, config: SweepConfig) -> Outcome {
    let report: SweepReport = sweep::selftest(inst, config)?;
    out.emit_table(
        &report,
        || {
            let mut s = format!(
                "instance {}\nm = {}, n = {}, B = {}\n",
                report.digest, report.m, report.n, report.grid_bound
            );
            let p = &report.premise;
            if p.gross_substitute {
                s += "premise: every bidder is gross substitute\n";
            } else {
                let _ = writeln!(
                    s,
                    "premise failed{}{}",
                    p.bidder.map_or(String::new(), |b| format!(" for bidder {b}")),
                    p.reason.as_ref().map_or(String::new(), |r| format!(": {r}"))
                );
                if let Some(w) = &p.witness {
                    let _ = writeln!(s, "  witness {}", serde_json::to_string(w).expect("witness serializes"));
                }
            }
            let _ = writeln!(
                s,
                "max welfare {}, {} Walrasian prices",
                report.max_welfare, report.walrasian_count
            );
            for r in &report.suites {
                let status = match r.status {
                    SuiteStatus::Passed => "PASS",
                    SuiteStatus::Failed => "FAIL",
                    SuiteStatus::Skipped => "SKIP",
                };
                let _ = writeln!(s, "{status} {:<20} {}/{} failed", r.name, r.failed, r.checked);
                if let Some(c) = &r.counterexample {
                    let _ = writeln!(s, "  counterexample {}", serde_json::to_string(c).expect("counterexample serializes"));
                }
            }
            let skipped = report.skipped();
            if !skipped.is_empty() {
                let _ = writeln!(s, "skipped: {}", skipped.join(", "));
            }
            let _ = writeln!(s, "{}", if report.passed { "all suites passed" } else { "FAILED" });
            s
        },
        || {
            let mut s = String::from("suite,status,checked,failed\n");
            for r in &report.suites {
                let status = json!(r.status);
                let _ = writeln!(s, "{},{},{},{}", r.name, status.as_str().unwrap_or(""), r.checked, r.failed);
            }
            s
        },
    )?;
    Ok(if report.passed { EXIT_OK } else { EXIT_CHECK })
}

fn generate(spec: &GenerateSpec, verify: bool, path: Option<&Path>) -> Outcome {
    let inst = generate::generate(spec)?;
    if verify {
        if let Some((bidder, check)) = generate::verify_generated(&inst, demand::DEFAULT_GS_CHECK_CAP)? {
            return Err(Failure::check(format!(
                "generated bidder {bidder} failed the gross-substitute check: {}",
                serde_json::to_string(&check).expect("check serializes")
            )));
        }
    }
    let text = inst.to_json() + "\n";
    match path {
        Some(path) => fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}
