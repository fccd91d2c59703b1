use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::{json, Value};

use tightgames::cert;
use tightgames::error::Error;
use tightgames::graph::{normal_form, outcome_universe, scc_decompose, solve_win_lose, Mode, ALICE};
use tightgames::io;
use tightgames::nf;
use tightgames::rational::{format_rational, int, Rational};
use tightgames::rng::stream;
use tightgames::sp::{self, BispMode, Family, SearchConfig};
use tightgames::suite::{theorem_suite, SuiteConfig};
use tightgames::tightness::{is_tight, Method, Verdict, DEFAULT_BUDGET};
use tightgames::vform::{self, VVerdict};
use tightgames::vplus::{self, VPlusVerdict};

const OK: u8 = 0;
const VIOLATION: u8 = 1;
const INPUT_ERROR: u8 = 2;

/// Tightness, solvability and shortest-path game checks.
#[derive(Parser)]
#[command(name = "tightgames", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Cap on enumerated strategy pairs.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Directory searched for bare input names such as `g7`.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Tightness of a game form.
    Tight {
        form: String,
        #[arg(long, default_value = "all")]
        method: String,
        /// Print a certificate when the form is not tight.
        #[arg(long)]
        witness: bool,
    },
    /// Solve a game form under given or random rewards.
    Solve {
        form: String,
        /// Two lines of rewards; random integers when omitted.
        #[arg(long)]
        rewards: Option<String>,
        #[arg(long, value_enum, default_value = "nash")]
        mode: SolveMode,
    },
    /// Win-lose game on a graph.
    GraphSolve {
        graph: String,
        /// Outcome labels won by Alice (`t3`, `C0`, `c`); the rest go to Bob.
        #[arg(long, value_delimiter = ',')]
        oa: Vec<String>,
        #[arg(long, default_value = "msdggs")]
        mode: String,
    },
    /// v-tightness of a vector game form.
    Vtight { form: String },
    /// Mean-payoff normal forms and the NE-free search.
    Mpg {
        #[arg(long)]
        graph: Option<String>,
        /// Search the complete bipartite arena with A and B positions.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        search_ne_free: Option<Vec<usize>>,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
    },
    /// v⁺-tightness of a form with an infinite outcome.
    VplusTight { form: String },
    /// Equilibria of a v⁺-form under two cost vectors.
    VplusNe {
        form: String,
        /// Two lines: Alice's cost vector, then Bob's.
        #[arg(long)]
        costs: String,
    },
    /// Bi-shortest-path checks.
    Bisp {
        #[command(subcommand)]
        action: BispAction,
    },
    /// Re-check a certificate file.
    Verify { certificate: String },
    /// Run every cross-module property.
    Suite,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMode {
    Nash,
    Zerosum,
    Winlose,
    Lex,
}

#[derive(Subcommand)]
enum BispAction {
    /// Best-response sets of one instance.
    Check {
        instance: String,
        #[arg(long)]
        weak: bool,
    },
    /// Seeded counterexample search.
    Search {
        #[arg(long, default_value_t = 4)]
        max_v: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        terminal: bool,
        #[arg(long)]
        random: bool,
        #[arg(long)]
        weak: bool,
    },
    /// Re-check a counterexample certificate.
    Verify { certificate: String },
}

struct Outcome {
    code: u8,
    human: String,
    json: Value,
}

impl Outcome {
    fn ok(human: String, json: Value) -> Self {
        Outcome { code: OK, human, json }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.global.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.human);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn read_input(name: &str, g: &Global) -> Result<String, Error> {
    let direct = Path::new(name);
    let path = if direct.exists() {
        direct.to_path_buf()
    } else if let Some(dir) = &g.fixtures {
        let p = dir.join(name);
        if p.exists() {
            p
        } else {
            dir.join(format!("{name}.txt"))
        }
    } else {
        direct.to_path_buf()
    };
    std::fs::read_to_string(&path).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let g = &cli.global;
    match &cli.command {
        Command::Tight { form, method, witness } => tight(g, form, method, *witness),
        Command::Solve { form, rewards, mode } => solve(g, form, rewards.as_deref(), *mode),
        Command::GraphSolve { graph, oa, mode } => graph_solve(g, graph, oa, mode),
        Command::Vtight { form } => vtight(g, form),
        Command::Mpg { graph, search_ne_free, samples } => mpg(g, graph.as_deref(), search_ne_free.as_deref(), *samples),
        Command::VplusTight { form } => vplus_tight(g, form),
        Command::VplusNe { form, costs } => vplus_ne(g, form, costs),
        Command::Bisp { action } => bisp(g, action),
        Command::Verify { certificate } => verify(g, certificate),
        Command::Suite => suite(g),
    }
}

fn tight(g: &Global, name: &str, method: &str, witness: bool) -> Result<Outcome, Error> {
    let form = io::parse_form(&read_input(name, g)?)?;
    let methods: Vec<Method> = if method == "all" {
        Method::ALL.to_vec()
    } else {
        vec![method.parse().map_err(Error::Precondition)?]
    };
    let mut human = String::new();
    let mut verdicts = Vec::new();
    let mut certificate = None;
    for m in methods {
        let v = is_tight(&form, m, g.budget)?;
        human.push_str(&format!("{}: {}\n", m.name(), if v.is_tight() { "tight" } else { "not tight" }));
        verdicts.push(json!({"method": m.name(), "tight": v.is_tight()}));
        if let Verdict::NotTight(w) = v {
            certificate.get_or_insert_with(|| cert::tightness_certificate(&form, &w));
        }
    }
    let mut out = json!({"verdicts": verdicts});
    if witness {
        if let Some(c) = &certificate {
            // verdicts go to stderr so stdout is a bare certificate
            eprint!("{human}");
            human = format!("{}\n", c.to_json());
            out["certificate"] = serde_json::to_value(c).expect("json");
        }
    }
    Ok(Outcome::ok(human, out))
}

fn random_rewards(g: &Global, n: usize) -> (Vec<Rational>, Vec<Rational>) {
    let mut rng = stream(g.seed, 0);
    let mut draw = || (0..n).map(|_| int(rng.gen_range(-5..=5))).collect::<Vec<_>>();
    (draw(), draw())
}

fn solve(g: &Global, name: &str, rewards: Option<&str>, mode: SolveMode) -> Result<Outcome, Error> {
    let form = io::parse_form(&read_input(name, g)?)?;
    let (ra, rb) = match rewards {
        Some(file) => io::parse_rewards(&read_input(file, g)?, form.num_outcomes())?,
        None => random_rewards(g, form.num_outcomes()),
    };
    let pair = |s: &tightgames::forms::Situation| json!([s.x, s.y]);
    let (human, out) = match mode {
        SolveMode::Nash => {
            let ne = nf::nash_equilibria(&form, &ra, &rb)?;
            let list: Vec<String> = ne.iter().map(|s| format!("({}, {})", s.x, s.y)).collect();
            (format!("equilibria: {}\n", list.join(" ")), json!({"equilibria": ne.iter().map(pair).collect::<Vec<_>>()}))
        }
        SolveMode::Zerosum => {
            let s = nf::saddle_point(&form, &ra)?;
            let human = format!(
                "maxmin {} minmax {} saddle {}\n",
                format_rational(&s.maxmin),
                format_rational(&s.minmax),
                s.saddle.map_or("none".into(), |p| format!("({}, {})", p.x, p.y))
            );
            let out = json!({
                "maxmin": format_rational(&s.maxmin),
                "minmax": format_rational(&s.minmax),
                "saddle": s.saddle.as_ref().map(pair),
            });
            (human, out)
        }
        SolveMode::Winlose => {
            let r = nf::solvability_report(&form, g.budget)?;
            let human = format!(
                "tight {} nash-solvable {} zero-sum-solvable {} win-lose-solvable {}\n",
                r.tight, r.nash_solvable, r.zero_sum_solvable, r.win_lose_solvable
            );
            let out = json!({
                "tight": r.tight,
                "nash_solvable": r.nash_solvable,
                "zero_sum_solvable": r.zero_sum_solvable,
                "win_lose_solvable": r.win_lose_solvable,
            });
            let code = if r.is_consistent() { OK } else { VIOLATION };
            return Ok(Outcome { code, human, json: out });
        }
        SolveMode::Lex => {
            let a = nf::lex_safe_ne(&form, &ra, &rb)?;
            let b = nf::lex_safe_ne_b(&form, &ra, &rb)?;
            let human = format!("alice-first ({}, {}) bob-first ({}, {})\n", a.x, a.y, b.x, b.y);
            (human, json!({"alice_first": pair(&a), "bob_first": pair(&b)}))
        }
    };
    Ok(Outcome::ok(human, out))
}

fn graph_solve(g: &Global, name: &str, oa: &[String], mode: &str) -> Result<Outcome, Error> {
    let graph = io::parse_graph(&read_input(name, g)?)?;
    let mode: Mode = mode.parse()?;
    let dec = scc_decompose(&graph);
    let universe = outcome_universe(&graph, &dec, mode);
    for label in oa {
        if !universe.iter().any(|k| &k.label() == label) {
            return Err(Error::InvalidPartition(format!("{label} is not an outcome")));
        }
    }
    let (alice, bob): (Vec<_>, Vec<_>) = universe.iter().partition(|k| oa.contains(&k.label()));
    let s = solve_win_lose(&graph, &dec, mode, &alice, &bob)?;
    let name = |p: usize| if p == ALICE { "A" } else { "B" };
    let winners: Vec<&str> = s.winner.iter().map(|&p| name(p)).collect();
    let human = format!("winner at start: {}\nwinners: {}\n", name(s.winner_at_start(&graph)), winners.join(" "));
    // the brute-force normal form is reported when it fits the budget
    let mut out = json!({"winner": name(s.winner_at_start(&graph)), "winners": winners, "strategy": s.strategy});
    if let Ok(nfm) = normal_form(&graph, &dec, mode, g.budget) {
        out["normal_form"] = json!(io::write_form(&nfm.form));
    }
    Ok(Outcome::ok(human, out))
}

fn vtight(g: &Global, name: &str) -> Result<Outcome, Error> {
    let form = io::parse_vform(&read_input(name, g)?)?;
    Ok(match vform::is_v_tight(&form, g.budget)? {
        VVerdict::Tight => Outcome::ok("v-tight\n".into(), json!({"tight": true})),
        VVerdict::NotTight(c) => {
            let env = cert::separation_certificate(&form, &c);
            let s = vform::zero_sum_value(&form, &c.u)?;
            let human = format!(
                "not v-tight\nu: {}\nmaxmin {} < minmax {}\n{}\n",
                io::write_vector(&c.u),
                format_rational(&s.maxmin),
                format_rational(&s.minmax),
                env.to_json()
            );
            Outcome::ok(human, json!({"tight": false, "certificate": env}))
        }
    })
}

fn mpg(g: &Global, graph: Option<&str>, search: Option<&[usize]>, samples: usize) -> Result<Outcome, Error> {
    if let Some(&[a, b]) = search {
        let mut rng = stream(g.seed, 0);
        return Ok(match vform::search_ne_free_mean_payoff(&mut rng, a, b, samples)? {
            Some(c) => {
                let env = cert::ne_free_certificate(&c);
                Outcome::ok(format!("{}\n", env.to_json()), json!({"found": true, "certificate": env}))
            }
            None => Outcome::ok("no NE-free utilities found\n".into(), json!({"found": false})),
        });
    }
    let Some(name) = graph else {
        return Err(Error::Precondition("mpg needs --graph or --search-ne-free".into()));
    };
    let graph = io::parse_graph(&read_input(name, g)?)?;
    let mp = vform::mean_payoff_vform(&graph, g.budget)?;
    let tight = vform::is_v_tight(&mp.vform, g.budget)?.is_tight();
    let text = io::write_vform(&mp.vform);
    let human = format!("{text}v-tight: {tight}\n");
    let code = if tight { OK } else { VIOLATION };
    Ok(Outcome { code, human, json: json!({"vform": text, "cycles": mp.cycles, "v_tight": tight}) })
}

fn vplus_tight(g: &Global, name: &str) -> Result<Outcome, Error> {
    let form = io::parse_vplus(&read_input(name, g)?)?;
    Ok(match vplus::is_vplus_tight(&form, g.budget)? {
        VPlusVerdict::Tight => Outcome::ok("v+-tight\n".into(), json!({"tight": true})),
        VPlusVerdict::NotTight(w) => {
            let env = cert::vplus_witness_certificate(&form, &w);
            let human = format!(
                "not v+-tight\nno-NE costs: ua = {}, ub = {}\n{}\n",
                io::write_vector(&w.psi.u),
                io::write_vector(&w.phi.u),
                env.to_json()
            );
            Outcome::ok(human, json!({"tight": false, "certificate": env}))
        }
    })
}

fn vplus_ne(g: &Global, name: &str, costs: &str) -> Result<Outcome, Error> {
    let form = io::parse_vplus(&read_input(name, g)?)?;
    let (ua, ub) = io::parse_rewards(&read_input(costs, g)?, form.dim())?;
    let ne = vplus::ne_set(&form, &ua, &ub)?;
    let list: Vec<String> = ne.iter().map(|s| format!("({}, {})", s.x, s.y)).collect();
    let human = format!("equilibria: {}\n", if list.is_empty() { "none".into() } else { list.join(" ") });
    let out = json!({"equilibria": ne.iter().map(|s| json!([s.x, s.y])).collect::<Vec<_>>()});
    Ok(Outcome::ok(human, out))
}

fn bisp(g: &Global, action: &BispAction) -> Result<Outcome, Error> {
    match action {
        BispAction::Check { instance, weak } => {
            let raw = io::parse_instance(&read_input(instance, g)?)?;
            let inst = sp::normalize(&raw)?;
            let mode = if *weak { BispMode::Weak } else { BispMode::Strong };
            let r = sp::bisp_check(&inst, mode, g.budget)?;
            let labels = |s: &std::collections::BTreeSet<sp::SpOutcome>| s.iter().map(|o| o.label()).collect::<Vec<_>>();
            let human = format!(
                "alice set: {}\nbob set: {}\nintersect: {}\n",
                labels(&r.alice_set).join(" "),
                labels(&r.bob_set).join(" "),
                r.intersects()
            );
            let out = json!({"alice_set": labels(&r.alice_set), "bob_set": labels(&r.bob_set), "intersects": r.intersects()});
            if r.intersects() {
                return Ok(Outcome::ok(human, out));
            }
            let cx = sp::BispCounterexample { instance: inst, mode, alice_set: r.alice_set, bob_set: r.bob_set };
            let env = cert::bisp_certificate(&cx);
            Ok(Outcome { code: VIOLATION, human: format!("{human}{}\n", env.to_json()), json: json!({"result": out, "certificate": env}) })
        }
        BispAction::Search { max_v, samples, symmetric, terminal, random, weak } => {
            let family = match (symmetric, terminal, random) {
                (true, _, _) => Family::Symmetric,
                (_, true, _) => Family::Terminal,
                (_, _, true) => Family::Random,
                _ => Family::Exhaustive,
            };
            let cfg = SearchConfig {
                family,
                max_v: *max_v,
                samples: *samples,
                seed: g.seed,
                mode: if *weak { BispMode::Weak } else { BispMode::Strong },
                budget: g.budget,
            };
            let r = sp::bisp_search(&cfg)?;
            let certs: Vec<_> = r.counterexamples.iter().map(cert::bisp_certificate).collect();
            let out = json!({
                "instances": r.instances,
                "checks": r.checks,
                "intersections": r.intersections,
                "weak_only": r.weak_only,
                "ne_found": r.ne_found,
                "ne_missing": r.ne_missing,
                "equivalence_failures": r.equivalence_failures,
                "max_inner_outcomes": r.max_inner_outcomes,
                "skipped": r.skipped,
                "counterexamples": certs,
            });
            let mut human = format!(
                "instances {} checks {} intersections {} weak-only {} ne {} / missing {} equivalence failures {} skipped {}\n",
                r.instances, r.checks, r.intersections, r.weak_only, r.ne_found, r.ne_missing, r.equivalence_failures, r.skipped
            );
            for c in &certs {
                human.push_str(&c.to_json());
                human.push('\n');
            }
            let code = if r.is_clean() { OK } else { VIOLATION };
            Ok(Outcome { code, human, json: out })
        }
        BispAction::Verify { certificate } => verify(g, certificate),
    }
}

fn verify(g: &Global, name: &str) -> Result<Outcome, Error> {
    let env = cert::parse_certificate(&read_input(name, g)?)?;
    let ok = cert::verify(&env);
    let human = format!("{} certificate: {}\n", env.kind(), if ok { "valid" } else { "INVALID" });
    Ok(Outcome { code: if ok { OK } else { VIOLATION }, human, json: json!({"kind": env.kind(), "valid": ok}) })
}

fn suite(g: &Global) -> Result<Outcome, Error> {
    let report = theorem_suite(&SuiteConfig::desk(g.seed))?;
    let mut human = String::new();
    for p in &report.properties {
        human.push_str(&format!(
            "{} {:<42} checked {:>8} violations {}\n",
            if p.passed() { "PASS" } else { "FAIL" },
            p.name,
            p.checked,
            p.violations
        ));
    }
    let json: Value = serde_json::to_value(&report).expect("json");
    Ok(Outcome { code: if report.passed { OK } else { VIOLATION }, human, json })
}
