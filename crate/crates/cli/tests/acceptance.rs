//! The nine acceptance criteria at their stated scales. Each prints one
//! PASS/FAIL line and the run exits nonzero if any criterion fails. It
//! runs without the libtest harness so the lines are never captured.

use std::process::Command;
use std::time::{Duration, Instant};

use tightgames::enumerate::all_forms;
use tightgames::sp::{BispMode, Family, SearchConfig};
use tightgames::suite::{self, PropertyResult};

const SEED: u64 = 42;

fn all_pass(props: &[PropertyResult]) -> bool {
    props.iter().all(|p| {
        if !p.passed() {
            eprintln!("  violated: {p:?}");
        }
        p.passed()
    })
}

fn within(start: Instant, limit: Duration) -> bool {
    let took = start.elapsed();
    if took > limit {
        eprintln!("  took {took:?}, limit {limit:?}");
    }
    took <= limit
}

fn golden() -> bool {
    let start = Instant::now();
    let p = suite::golden().unwrap();
    all_pass(&[p]) && within(start, Duration::from_secs(1))
}

fn four_way_equivalence() -> bool {
    let start = Instant::now();
    let exhaustive = all_forms(3, 3, 3).len();
    let forms = suite::form_corpus(SEED, 10_000);
    let sampled = forms.iter().skip(exhaustive).filter(|g| g.num_outcomes() == 4).count();
    let props = suite::form_properties(&forms).unwrap();
    let four = props.iter().find(|p| p.name == "four_way_equivalence").unwrap();
    sampled >= 10_000 && four.checked as usize == forms.len() && all_pass(&props) && within(start, Duration::from_secs(300))
}

fn graph_oracle() -> bool {
    let props = suite::graph_solver_oracle(SEED, 200).unwrap();
    props.iter().all(|p| p.checked >= 200) && all_pass(&props)
}

fn v_tightness_vs_saddles() -> bool {
    let (p, certs) = suite::v_tightness_vs_saddles(SEED, 300, 1_000).unwrap();
    let cert_check = suite::certificate_checks(&certs);
    p.count("tight") > 0 && p.count("not_tight") > 0 && all_pass(&[p, cert_check])
}

fn mean_payoff() -> bool {
    let forms = suite::mean_payoff_forms(SEED, 200).unwrap();
    let (search, certs) = suite::mean_payoff_ne_free(SEED, 20_000, 10_000).unwrap();
    let cert_check = suite::certificate_checks(&certs);
    !certs.is_empty() && all_pass(&[forms, search, cert_check])
}

fn vplus_tightness_vs_equilibria() -> bool {
    let corpus = suite::vplus_corpus(SEED, 150);
    let (p, certs) = suite::vplus_tightness_vs_equilibria(&corpus, SEED, 1_000).unwrap();
    let cert_check = suite::certificate_checks(&certs);
    p.count("tight") > 0 && p.count("not_tight") > 0 && all_pass(&[p, cert_check])
}

fn asumability() -> bool {
    let corpus = suite::vplus_corpus(SEED, 150);
    let (props, _) = suite::asumability_and_pbr_soundness(&corpus).unwrap();
    props.iter().all(|p| p.checked > 0) && all_pass(&props)
}

fn bisp_harness() -> bool {
    let start = Instant::now();
    let run = |name: &str, family, max_v, samples, seed| {
        let cfg = SearchConfig {
            family,
            max_v,
            samples,
            seed,
            mode: BispMode::Strong,
            budget: 1 << 20,
        };
        suite::bisp_family(name, &cfg).unwrap().0
    };
    let exhaustive = run("exhaustive", Family::Exhaustive, 4, 100, SEED);
    let random = run("random", Family::Random, 8, 10_000, SEED + 1);
    let symmetric = run("symmetric", Family::Symmetric, 4, 1_000, SEED + 2);
    let ok = exhaustive.count("instances") > 0
        && exhaustive.checked == 100 * exhaustive.count("instances")
        && random.checked >= 10_000
        && symmetric.count("ne_found") >= 1_000
        && symmetric.count("skipped") == 0;
    ok && all_pass(&[exhaustive, random, symmetric]) && within(start, Duration::from_secs(600))
}

fn determinism() -> bool {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_tightgames"))
            .args(["suite", "--seed", "42", "--json"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout
}

fn main() {
    let criteria: [(&str, fn() -> bool); 9] = [
        ("1 golden corpus", golden),
        ("2 four-way equivalence", four_way_equivalence),
        ("3 graph solver oracle", graph_oracle),
        ("4 v-tightness and saddle points", v_tightness_vs_saddles),
        ("5 mean payoff", mean_payoff),
        ("6 v+-tightness and equilibria", vplus_tightness_vs_equilibria),
        ("7 asumability of PBRs", asumability),
        ("8 bi-shortest-path harness", bisp_harness),
        ("9 determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        let ok = check();
        println!("{} {name} ({:.1?})", if ok { "PASS" } else { "FAIL" }, start.elapsed());
        if !ok {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
