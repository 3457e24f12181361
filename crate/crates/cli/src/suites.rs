//! Named suites: the acceptance battery, the exhaustive exact-identity
//! sweep, and the heavier nightly scans. Reports merge deterministically by
//! row order; any failing row yields a nonzero exit.

use std::path::PathBuf;

use cpc_core::battery::{exact_identities, paper_acceptance, Battery};
use cpc_core::construct::{codimension_scan, equivalence_scan};
use cpc_core::geometry::SweepConfig;
use cpc_core::report::CriterionRow;

use crate::scenario::CliError;

fn lift(e: cpc_core::Error) -> CliError {
    match &e {
        cpc_core::Error::Internal(_) => CliError::Internal(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

fn emit_rows(
    title: &str,
    rows: &[CriterionRow],
    json: bool,
    out: &Option<PathBuf>,
) -> Result<bool, CliError> {
    let all = rows.iter().all(|r| r.pass);
    let text = if json {
        serde_json::to_string_pretty(&serde_json::json!({
            "suite": title,
            "rows": rows,
            "all_pass": all,
        }))
        .unwrap()
    } else {
        let mut t = format!(
            "{title}\n{:<4} {:<58} {:<26} {:<30} {:<10} {}\n",
            "id", "claim", "expected", "computed", "tol", "verdict"
        );
        for r in rows {
            t.push_str(&r.table_line());
            t.push('\n');
        }
        t.push_str(&format!("result: {}", if all { "ALL PASS" } else { "FAILURES" }));
        t
    };
    match out {
        None => println!("{text}"),
        Some(p) => std::fs::write(p, text + "\n")
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?,
    }
    Ok(all)
}

pub fn run_suite(
    name: &str,
    seed: u64,
    json: bool,
    out: &Option<PathBuf>,
) -> Result<bool, CliError> {
    match name {
        "paper-acceptance" => {
            let battery = Battery::build().map_err(lift)?;
            let rows = paper_acceptance(&battery, seed).map_err(lift)?;
            emit_rows("paper-acceptance", &rows, json, out)
        }
        "invariants-exhaustive" => {
            let battery = Battery::build().map_err(lift)?;
            let mut rows = Vec::new();
            for d in battery.spaces() {
                for (id, ok) in exact_identities(d, seed) {
                    rows.push(CriterionRow {
                        id: format!("{}:{}", d.label, id),
                        claim: format!("exact identity `{id}` on {}", d.label),
                        paper_value: "zero residual".into(),
                        computed: if ok { "exact".into() } else { "violated".into() },
                        tolerance: "exact".into(),
                        pass: ok,
                    });
                }
            }
            emit_rows("invariants-exhaustive", &rows, json, out)
        }
        "scan-nightly" => {
            let battery = Battery::build().map_err(lift)?;
            let cfg = SweepConfig {
                seed,
                fail_fast: true,
                random_count: 24,
                grid_points: 9,
                ..Default::default()
            };
            let mut rows = Vec::new();
            let scan33 =
                codimension_scan(&battery.sl3h, 0, 1, (3, 3), 400, seed, &cfg).map_err(lift)?;
            rows.push(CriterionRow {
                id: "codim-6".into(),
                claim: "sl3(H): 400 random (3,3)-removals, none passes".into(),
                paper_value: "0 instances".into(),
                computed: format!(
                    "rank passes {}, sweep passes {}",
                    scan33.characterization_passes, scan33.sweep_passes
                ),
                tolerance: "exact".into(),
                pass: scan33.characterization_passes == 0 && scan33.sweep_passes == 0,
            });
            for (label, d) in
                [("sl3R", &battery.sl3r), ("sl3C", &battery.sl3c), ("sl3H", &battery.sl3h)]
            {
                let rep = equivalence_scan(d, 0, 1, 200, seed, &cfg).map_err(lift)?;
                rows.push(CriterionRow {
                    id: format!("equiv-{label}"),
                    claim: format!("{label}: sweep == rank criterion over 200 random removals"),
                    paper_value: "0 mismatches".into(),
                    computed: format!(
                        "{} mismatches, {} cpc",
                        rep.mismatches, rep.sweep_passes
                    ),
                    tolerance: "exact".into(),
                    pass: rep.mismatches == 0,
                });
            }
            emit_rows("scan-nightly", &rows, json, out)
        }
        other => Err(CliError::Usage(format!("unknown suite `{other}`"))),
    }
}
