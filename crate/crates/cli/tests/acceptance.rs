//! Acceptance gate: one pass/fail line per criterion.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use softtop::harness::{
    recheck, run_theorem, select_suite, status_table, theorem, Env, GenConfig, Instance, Mode,
    Outcome, SuiteOptions, TheoremReport, Verdict, Witness,
};
use softtop::{Context, Limits, SoftSet, SoftSpace};

struct Gate {
    failed: usize,
}

impl Gate {
    fn report(&mut self, id: &str, title: &str, result: Result<String, String>) {
        match result {
            Ok(note) => println!("[PASS] {id} {title}: {note}"),
            Err(why) => {
                self.failed += 1;
                println!("[FAIL] {id} {title}: {why}");
            }
        }
    }
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn core_fixture(name: &str) -> PathBuf {
    manifest_dir().join("../core/tests/fixtures").join(name)
}

fn cfg(max_universe: usize, max_params: usize, instances: usize) -> GenConfig {
    GenConfig {
        seed: 20240601,
        max_universe,
        max_params,
        instances,
        ..GenConfig::default()
    }
}

fn exhaustive() -> SuiteOptions {
    SuiteOptions {
        exhaustive: true,
        ..SuiteOptions::default()
    }
}

/// Runs each id and requires a verified verdict, in the given mode, with
/// at least `min` instances.
fn require_verified(
    ids: &[&str],
    cfg: &GenConfig,
    opts: &SuiteOptions,
    mode: Mode,
    min: u64,
) -> Result<Vec<TheoremReport>, String> {
    let mut out = Vec::new();
    for id in ids {
        let r = run_theorem(theorem(id).ok_or(format!("unknown theorem {id}"))?, cfg, opts);
        if r.mode != mode {
            return Err(format!("{id} ran in {:?} mode", r.mode));
        }
        if r.instances_run < min {
            return Err(format!("{id} ran only {} instances", r.instances_run));
        }
        if r.verdict != Verdict::Verified {
            return Err(format!("{id}: {}", r.to_json_line()));
        }
        out.push(r);
    }
    Ok(out)
}

fn total(reports: &[TheoremReport]) -> u64 {
    reports.iter().map(|r| r.instances_run).sum()
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn c1() -> Result<String, String> {
    let start = Instant::now();
    // Direct scan at |X| = 2, |E| ≤ 2 against the library operations.
    let mut triples = 0u64;
    for m in 1..=2 {
        let ctx = Context::numbered(2, m).map_err(|e| e.to_string())?;
        let sets: Vec<SoftSet> = SoftSet::enumerate(&ctx).map_err(|e| e.to_string())?.collect();
        let x = SoftSet::absolute(&ctx);
        for f in &sets {
            let c = f.complement();
            if !f.union(&c).unwrap().is_absolute()
                || !f.intersect(&c).unwrap().is_null()
                || f.intersect(&x).unwrap() != *f
            {
                return Err(format!("complement law fails for {f}"));
            }
            for g in &sets {
                let u = f.union(g).unwrap();
                if f.is_subset(g).unwrap() != (f.intersect(g).unwrap() == *f)
                    || !f.is_subset(&u).unwrap()
                    || !g.is_subset(&u).unwrap()
                {
                    return Err(format!("subset law fails for {f}, {g}"));
                }
                for h in &sets {
                    triples += 1;
                    let ok = f.intersect(&g.union(h).unwrap()).unwrap()
                        == f.intersect(g).unwrap().union(&f.intersect(h).unwrap()).unwrap()
                        && f.intersect(&g.intersect(h).unwrap()).unwrap()
                            == f.intersect(g).unwrap().intersect(h).unwrap()
                        && f.union(&g.union(h).unwrap()).unwrap()
                            == f.union(g).unwrap().union(h).unwrap();
                    if !ok {
                        return Err(format!("triple law fails for {f}, {g}, {h}"));
                    }
                }
            }
        }
    }
    if triples != 64 + 4096 {
        return Err(format!("scanned {triples} triples"));
    }
    let ids = [
        "prop-1-i", "prop-1-ii", "prop-1-iii", "prop-6-i", "prop-6-ii", "prop-7-i", "prop-7-ii",
        "prop-3-i", "prop-3-ii",
    ];
    let reports = require_verified(&ids, &cfg(2, 2, 1), &exhaustive(), Mode::Exhaustive, 1)?;
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(5) {
        return Err(format!("took {}", secs(elapsed)));
    }
    Ok(format!(
        "{triples} triples scanned directly, {} harness instances, {}",
        total(&reports),
        secs(elapsed)
    ))
}

fn c2() -> Result<String, String> {
    let start = Instant::now();
    let ctx = Context::numbered(2, 1).map_err(|e| e.to_string())?;
    let all = SoftSpace::enumerate_all(&ctx).map_err(|e| e.to_string())?;
    for s in &all {
        if s.find_separation().is_none() != s.is_connected_clopen() {
            return Err(format!("routes disagree on {s:?}"));
        }
    }
    let exh = require_verified(&["thm-clopen"], &cfg(2, 1, 1), &exhaustive(), Mode::Exhaustive, 1)?;
    let sampled = require_verified(
        &["thm-clopen"],
        &cfg(4, 2, 1000),
        &SuiteOptions::default(),
        Mode::Sampled,
        1000,
    )?;
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {}", secs(elapsed)));
    }
    Ok(format!(
        "{} topologies at |X|=2,|E|=1 ({} harness instances), {} random, {}",
        all.len(),
        total(&exh),
        total(&sampled),
        secs(elapsed)
    ))
}

fn c3() -> Result<String, String> {
    let ids = [
        "prop-babak-i",
        "prop-babak-ii",
        "prop-babak-iii",
        "prop-babak-iv",
        "prop-babak-v",
        "prop-8",
    ];
    let reports =
        require_verified(&ids, &cfg(4, 2, 1000), &SuiteOptions::default(), Mode::Sampled, 1000)?;
    let text = std::fs::read_to_string(core_fixture("prop-babak-iii-strict.json"))
        .map_err(|e| e.to_string())?;
    let w = Witness::parse(&text).map_err(|e| e.to_string())?;
    let inst = Instance::from_document(&w.instance).map_err(|e| e.to_string())?;
    let f = inst.mapping.as_ref().ok_or("witness has no mapping")?;
    let (p, q) = (&inst.sets[0], &inst.sets[1]);
    let lhs = f.image(&p.intersect(q).unwrap()).unwrap();
    let rhs = f.image(p).unwrap().intersect(&f.image(q).unwrap()).unwrap();
    if !lhs.is_subset(&rhs).unwrap() || lhs == rhs {
        return Err("stored witness is not strict".into());
    }
    Ok(format!(
        "{} instances; strict witness f(F∩G) = {lhs} ⊊ {rhs}",
        total(&reports)
    ))
}

fn c4() -> Result<String, String> {
    let exh = require_verified(
        &["lemma-basis-cont"],
        &cfg(2, 1, 1),
        &exhaustive(),
        Mode::Exhaustive,
        1,
    )?;
    let sampled = require_verified(
        &["lemma-basis-cont"],
        &cfg(4, 2, 500),
        &SuiteOptions::default(),
        Mode::Sampled,
        500,
    )?;
    Ok(format!(
        "{} exhaustive instances up to 2 points/1 parameter, {} random",
        total(&exh),
        total(&sampled)
    ))
}

fn c5() -> Result<String, String> {
    let ids = [
        "prop-babak1-i",
        "prop-babak1-ii",
        "prop-babak2",
        "prop-10",
        "cor-closed-prod",
        "prop-prod-topology",
    ];
    let exh = require_verified(&ids, &cfg(2, 1, 1), &exhaustive(), Mode::Exhaustive, 1)?;
    let sampled =
        require_verified(&ids, &cfg(3, 2, 500), &SuiteOptions::default(), Mode::Sampled, 500)?;
    Ok(format!(
        "{} exhaustive instances, {} random",
        total(&exh),
        total(&sampled)
    ))
}

fn c6() -> Result<String, String> {
    let ids = [
        "thm-cont-image",
        "thm-union",
        "prop-4",
        "prop-coarser-connected",
        "prop-prod-hausdorff",
        "thm-prod-connected",
    ];
    let cfg = cfg(3, 2, 1000);
    let opts = SuiteOptions::default();
    let env = Env::default();
    let mut reports = Vec::new();
    for id in ids {
        let r = run_theorem(theorem(id).unwrap(), &cfg, &opts);
        if r.instances_run < 1000 {
            return Err(format!("{id} ran only {} instances", r.instances_run));
        }
        if r.verdict == Verdict::Counterexample {
            let w = r.witness.as_ref().ok_or(format!("{id} has no witness"))?;
            let inst = Instance::from_document(&w.instance).map_err(|e| e.to_string())?;
            if !matches!(recheck(id, &inst, &env), Ok(Outcome::Fails(_))) {
                return Err(format!("{id} witness does not re-fail"));
            }
            let stored = std::fs::read_to_string(core_fixture(&format!("{id}.json")))
                .map_err(|_| format!("{id} counterexample is not stored as a fixture"))?;
            let stored = Witness::parse(&stored).map_err(|e| e.to_string())?;
            let inst = Instance::from_document(&stored.instance).map_err(|e| e.to_string())?;
            if !matches!(recheck(id, &inst, &env), Ok(Outcome::Fails(_))) {
                return Err(format!("stored {id} fixture does not fail"));
            }
        }
        reports.push(r);
    }
    let table = status_table(&reports);
    for line in table.lines() {
        println!("       {line}");
    }
    let verdicts: Vec<String> = reports
        .iter()
        .map(|r| format!("{}={}", r.id, serde_json::to_value(r.verdict).unwrap().as_str().unwrap()))
        .collect();
    Ok(verdicts.join(", "))
}

fn softtop(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_softtop"))
        .args(args)
        .env_remove("SOFTTOP_MAX_OPENS")
        .env_remove("SOFTTOP_MAX_COMPONENT_POINTS")
        .env_remove("SOFTTOP_MAX_FACTOR_OPENS")
        .output()
        .expect("binary runs")
}

fn c7() -> Result<String, String> {
    let fixtures = manifest_dir().join("tests/fixtures");
    let doc = fixtures.join("power_set_1x2.json");
    let o = softtop(&["components", doc.to_str().unwrap()]);
    let golden = std::fs::read_to_string(fixtures.join("components_power_set_1x2.golden"))
        .map_err(|e| e.to_string())?;
    let got = String::from_utf8_lossy(&o.stdout);
    if o.status.code() != Some(0) || got != golden {
        return Err(format!("exit {:?}, output {got}", o.status.code()));
    }
    Ok(got.trim().to_string())
}

fn c8() -> Result<String, String> {
    let args = ["fuzz", "--suite", "all", "--seed", "42"];
    let a = softtop(&args);
    let b = softtop(&args);
    if a.stdout.is_empty() {
        return Err("empty report".into());
    }
    if a.stdout != b.stdout {
        return Err("reports differ".into());
    }
    let lines = a.stdout.iter().filter(|&&c| c == b'\n').count();
    Ok(format!("{lines} report lines, {} bytes, identical", a.stdout.len()))
}

fn c9() -> Result<String, String> {
    let o = softtop(&[
        "fuzz",
        "--suite",
        "prop-1-i",
        "--seed",
        "42",
        "--instances",
        "100",
        "--mutant",
        "complement-drops-element",
    ]);
    let report: serde_json::Value =
        serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
    if report["verdict"] != "counterexample" || o.status.code() != Some(1) {
        return Err(format!("exit {:?}, report {report}", o.status.code()));
    }
    Ok(format!("counterexample: {}", report["detail"].as_str().unwrap_or("")))
}

fn main() -> ExitCode {
    // The harness's own limits are the defaults; make sure nothing shrank them.
    assert_eq!(Env::default().limits, Limits::default());
    assert!(select_suite("all").is_ok());
    let mut gate = Gate { failed: 0 };
    gate.report("C1", "core-law exhaustive suite", c1());
    gate.report("C2", "connectedness oracle equivalence", c2());
    gate.report("C3", "mapping laws", c3());
    gate.report("C4", "continuity via basis", c4());
    gate.report("C5", "product laws", c5());
    gate.report("C6", "conjecture-tier theorem suite", c6());
    gate.report("C7", "orphan golden for components", c7());
    gate.report("C8", "fuzz determinism", c8());
    gate.report("C9", "mutation sanity", c9());
    if gate.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
