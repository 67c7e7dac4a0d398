//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::process::Command;

use zdpic::report::{CheckReport, ReportFile};

const SEED: u64 = 20240917;

fn run_all(path: &std::path::Path) -> (i32, Vec<u8>) {
    let status = Command::new(env!("CARGO_BIN_EXE_zdpic"))
        .args(["all", "--quiet", "--seed", &SEED.to_string(), "--json"])
        .arg(path)
        .status()
        .expect("binary runs");
    (status.code().unwrap_or(-1), std::fs::read(path).unwrap_or_default())
}

struct Criterion {
    name: &'static str,
    /// (check id, the d values that must be present)
    checks: Vec<(&'static str, Vec<u32>)>,
}

fn range(a: u32, b: u32) -> Vec<u32> {
    (a..=b).collect()
}

fn criteria() -> Vec<Criterion> {
    let mut sixj = vec![("sixj.duality", vec![3, 5, 7])];
    if cfg!(feature = "fibonacci") {
        sixj.push(("sixj.duality-fibonacci", vec![]));
    }
    vec![
        Criterion {
            name: "rewrite engine: idempotent, confluent, loop values",
            checks: vec![("rewrite.loop-values", range(2, 6)), ("rewrite.normal-form", range(2, 6))],
        },
        Criterion {
            name: "SFT of P_k is the DFT; proof chain replays exactly",
            checks: vec![("sft.dft-agreement", vec![2, 3, 5, 8]), ("sft.proof-chain", vec![2, 3, 5, 8])],
        },
        Criterion {
            name: "dictionary homomorphism, Pauli relations, resolution of identity",
            checks: vec![
                ("gates.homomorphism", range(2, 6)),
                ("gates.pauli", range(2, 9)),
                ("gates.resolution-of-identity", range(2, 9)),
            ],
        },
        Criterion {
            name: "Hausdorff-Young with bi-shift extremizers",
            checks: vec![("qfa.hausdorff-young", range(2, 6)), ("qfa.bi-shift-extremizers", range(2, 6))],
        },
        Criterion { name: "Schur product positivity", checks: vec![("qfa.schur", range(2, 6))] },
        Criterion {
            name: "entropic uncertainty, Renyi limit, minimal-maximal pair",
            checks: vec![
                ("qfa.entropic-uncertainty", range(2, 6)),
                ("qfa.renyi-limit", range(2, 6)),
                ("qfa.minimal-maximal", range(2, 6)),
            ],
        },
        Criterion {
            name: "reflection positivity certificates",
            checks: vec![
                ("rp.sft-positivity", vec![2, 3]),
                ("rp.pairing", vec![2, 3]),
                ("rp.pictures-identity", vec![2, 3]),
                ("rp.decomposed", vec![2]),
            ],
        },
        Criterion {
            name: "quon relations, GHZ/Max duality and reductions",
            checks: vec![("states.quon-relations", vec![2, 3, 5, 7]), ("states.ghz-max", vec![2, 3, 5, 7])],
        },
        Criterion {
            name: "parafermion braids: relations and product-state invariance",
            checks: vec![
                ("braids.generators", range(2, 5)),
                ("braids.relations", range(2, 5)),
                ("braids.product-invariance", range(2, 5)),
                ("braids.non-product-detected", range(2, 5)),
            ],
        },
        Criterion { name: "6j self-duality", checks: sixj },
    ]
}

fn grade(c: &Criterion, reports: &[CheckReport]) -> (bool, String) {
    let mut problems = Vec::new();
    let mut seen = 0;
    for (id, ds) in &c.checks {
        let mine: Vec<&CheckReport> = reports.iter().filter(|r| r.check_id == *id).collect();
        seen += mine.len();
        let have: BTreeSet<u32> = mine.iter().filter_map(|r| r.params.d).collect();
        for d in ds {
            if !have.contains(d) {
                problems.push(format!("{id} missing d={d}"));
            }
        }
        if mine.is_empty() {
            problems.push(format!("{id} missing"));
        }
        for r in mine.iter().filter(|r| !r.pass) {
            problems.push(r.summary_line());
        }
    }
    if problems.is_empty() {
        (true, format!("{seen} reports"))
    } else {
        (false, problems.join("; "))
    }
}

fn main() {
    let start = std::time::Instant::now();
    let dir = std::env::temp_dir().join(format!("zdpic-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let (code1, first) = run_all(&dir.join("first.json"));
    let (code2, second) = run_all(&dir.join("second.json"));
    let _ = std::fs::remove_dir_all(&dir);

    let reports = serde_json::from_slice::<ReportFile>(&first).map(|f| f.reports).unwrap_or_default();
    let mut failed = 0;
    for (i, c) in criteria().iter().enumerate() {
        let (ok, detail) = grade(c, &reports);
        failed += !ok as usize;
        println!("{} [{:>2}] {} ({detail})", if ok { "PASS" } else { "FAIL" }, i + 1, c.name);
    }
    let same = !first.is_empty() && first == second;
    failed += !same as usize;
    println!(
        "{} [11] determinism: two `all --seed {SEED}` runs give byte-identical reports ({} bytes)",
        if same { "PASS" } else { "FAIL" },
        first.len()
    );
    println!("exit codes {code1} and {code2}; {:.1}s", start.elapsed().as_secs_f64());
    if failed > 0 || code1 != 0 || code2 != 0 {
        std::process::exit(1);
    }
}
