//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use g52::verify::{run_group, VerifyConfig};
use g52::{invariant, Covector, FamilyId, Studied};

const TITLES: [&str; 10] = [
    "structural soundness",
    "ad_U table fidelity and spectra",
    "exponentiality verdicts",
    "closed-form exponentials and erratum probes",
    "rank predicate and orbit classification",
    "orbit invariance",
    "foliation vector fields and flows",
    "Jacobian constancy",
    "topological equivalence",
    "end-to-end command line",
];

/// Wall-clock limits stated for individual criteria.
fn time_limit(k: usize) -> Option<Duration> {
    match k {
        1 => Some(Duration::from_secs(2)),
        2 | 4 => Some(Duration::from_secs(10)),
        10 => Some(Duration::from_secs(60)),
        _ => None,
    }
}

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

fn library_group(k: usize) -> Outcome {
    match run_group(k, &VerifyConfig::default()) {
        Ok(part) => {
            let mut notes: Vec<String> = part
                .checks
                .iter()
                .map(|c| {
                    let tag = if c.pass { "ok" } else { "FAILED" };
                    format!("{tag} {} (n={}, worst {:e}, limit {:e})", c.name, c.samples, c.worst, c.limit)
                })
                .collect();
            for p in &part.errata {
                notes.push(format!("probe {} on {}: {:?}", p.name, p.family, p.supported));
            }
            Outcome { pass: part.pass() && !part.checks.is_empty(), notes }
        }
        Err(e) => Outcome { pass: false, notes: vec![format!("error: {e}")] },
    }
}

fn g52(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g52"))
        .args(args)
        .output()
        .expect("the g52 binary runs")
}

fn section_residuals(id: &FamilyId, c: f64, a: f64, n: usize) -> Result<(usize, f64), String> {
    let spec = id.to_string();
    let (cs, as_, ns) = (c.to_string(), a.to_string(), n.to_string());
    let out = g52(&["crosssection", "--family", &spec, "--c", &cs, "--a", &as_, "--n", &ns]);
    if !out.status.success() {
        return Err(format!("{spec}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    if lines.next() != Some("x2*,x4*,x5*,residual") {
        return Err(format!("{spec}: unexpected header"));
    }
    let mut worst = 0.0_f64;
    let mut rows = 0;
    for line in lines {
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| s.parse::<f64>().map_err(|e| format!("{spec}: {line}: {e}")))
            .collect::<Result<_, _>>()?;
        let v = Covector([0.0, vals[0], a, vals[1], vals[2], 0.0, 0.0]);
        let inv = invariant(id, &v).map_err(|e| e.to_string())?;
        worst = worst.max((inv - c).abs());
        rows += 1;
    }
    Ok((rows, worst))
}

fn end_to_end() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let start = Instant::now();
    let run = g52(&["verify"]);
    let elapsed = start.elapsed();
    let ok = run.status.success() && elapsed < Duration::from_secs(60);
    pass &= ok;
    notes.push(format!("verify exit {:?} in {:.2} s", run.status.code(), elapsed.as_secs_f64()));

    let a = g52(&["verify", "--seed", "7"]);
    let b = g52(&["verify", "--seed", "7"]);
    let same = a.status.success() && a.stdout == b.stdout;
    pass &= same;
    notes.push(format!("verify --seed 7 twice: byte-identical {same}"));

    let g13 = g52(&["verify", "--family", "G13"]);
    let report: serde_json::Value = serde_json::from_slice(&g13.stdout).unwrap_or_default();
    let verdicts = report["exponentiality"].as_array().cloned().unwrap_or_default();
    let refuted = !verdicts.is_empty()
        && verdicts.iter().all(|v| v["exponential"] == false && v["witness"].is_array());
    pass &= g13.status.success() && refuted;
    notes.push(format!("verify --family G13: not exponential with witness {refuted}"));

    let mut worst = 0.0_f64;
    let mut rows = 0;
    for s in [Studied::G2, Studied::G3, Studied::G4_00, Studied::G9, Studied::G10(0.5), Studied::G10(-1.5)] {
        for (c, a) in [(0.0, 1.0), (0.0, 0.0), (1.5, -0.5), (-2.0, 2.0)] {
            match section_residuals(&s.id(), c, a, 40) {
                Ok((r, w)) => {
                    rows += r;
                    worst = worst.max(w);
                }
                Err(e) => {
                    pass = false;
                    notes.push(e);
                }
            }
        }
    }
    let sections_ok = rows > 0 && worst < 1e-9;
    pass &= sections_ok;
    notes.push(format!("crosssection: {rows} rows, worst residual {worst:e} (limit 1e-9)"));

    let empty = g52(&["crosssection", "--family", "G2", "--c", "0", "--a", "1", "--n", "0"]);
    let header_only = empty.status.success() && empty.stdout == b"x2*,x4*,x5*,residual\n";
    pass &= header_only;
    notes.push(format!("crosssection on an empty grid prints only the header {header_only}"));

    Outcome { pass, notes }
}

fn main() -> ExitCode {
    let verbose = std::env::args().any(|a| a == "--nocapture" || a == "--verbose");
    let mut failed = 0;
    for k in 1..=10 {
        let start = Instant::now();
        let mut outcome = if k == 10 { end_to_end() } else { library_group(k) };
        let elapsed = start.elapsed();
        if let Some(limit) = time_limit(k) {
            if elapsed > limit {
                outcome.pass = false;
                outcome.notes.push(format!("over the {} s limit", limit.as_secs()));
            }
        }
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] AC{k} {} ({:.2} s)", TITLES[k - 1], elapsed.as_secs_f64());
        if verbose || !outcome.pass {
            for n in &outcome.notes {
                println!("       {n}");
            }
        }
        failed += usize::from(!outcome.pass);
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria fail");
        ExitCode::FAILURE
    }
}
