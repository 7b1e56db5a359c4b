//! One line per acceptance criterion. Every comparison is exact, so the pinned tolerance is zero;
//! the sample sizes below are part of the criteria.

use std::collections::BTreeMap;

use qsplit::forms::{CATALOG, DEFAULT_SEED};
use qsplit::report::{run_suite, Status, VerificationReport, KR_SAMPLES, REGULAR_SAMPLES, SMOOTHNESS_SAMPLES};

const QUASI_SPLIT: [&str; 7] = ["sl2R", "sl3R", "su11", "su12", "su22", "sp4R", "so24"];
/// Exact arithmetic throughout: no numeric slack anywhere.
const TOLERANCE: u32 = 0;
const REGULAR_POINTS: usize = 50;
const SMOOTHNESS_PAIRS: usize = 25;
const KR_BASE_POINTS: usize = 200;

/// Criteria whose reference statement does not hold in this model, with the form responsible.
/// Each entry is analysed in the project notes; the line still prints FAIL.
const KNOWN_DIVERGENT: &[(u32, &str)] = &[(8, "su22")];

struct Criterion {
    number: u32,
    title: &'static str,
    checks: &'static [&'static str],
    forms: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, title: "quasi-split classification", checks: &["cartan.quasi_split"], forms: &CATALOG },
    Criterion { number: 2, title: "regular centralizers abelian", checks: &["centralizers.regular_abelian"], forms: &CATALOG },
    Criterion { number: 3, title: "smoothness criterion", checks: &["centralizers.smoothness"], forms: &QUASI_SPLIT },
    Criterion { number: 4, title: "SL(2,R) example", checks: &["centralizers.sl2_example"], forms: &["sl2R"] },
    Criterion {
        number: 5,
        title: "exact sequences",
        checks: &["centralizers.exact_sequence", "centralizers.semisimple_classes"],
        forms: &["sl2R", "sl3R"],
    },
    Criterion { number: 6, title: "Chevalley restriction", checks: &["chevalley.restriction"], forms: &CATALOG },
    Criterion { number: 7, title: "Kostant-Rallis section", checks: &["chevalley.kr_round_trip", "chevalley.kr_sl2"], forms: &QUASI_SPLIT },
    Criterion { number: 8, title: "stabilizer characterization", checks: &["roots.stabilizer_inclusion"], forms: &QUASI_SPLIT },
    Criterion {
        number: 9,
        title: "cameral covers",
        checks: &["cameral.generic_fibers", "cameral.ramified_fibers", "cameral.degree_identity", "cameral.real_subcover"],
        forms: &QUASI_SPLIT,
    },
    Criterion {
        number: 10,
        title: "band conditions",
        checks: &["sheaves.extension", "sheaves.counts", "sheaves.obstruction"],
        forms: &QUASI_SPLIT,
    },
    Criterion {
        number: 11,
        title: "fixed points and involution",
        checks: &["sheaves.involution", "sheaves.bundle_degrees"],
        forms: &QUASI_SPLIT,
    },
];

fn main() {
    assert_eq!(TOLERANCE, 0);
    assert_eq!((REGULAR_SAMPLES, SMOOTHNESS_SAMPLES, KR_SAMPLES), (REGULAR_POINTS, SMOOTHNESS_PAIRS, KR_BASE_POINTS));
    let reports: BTreeMap<&str, VerificationReport> = CATALOG.iter().map(|&f| (f, run_suite("all", f, DEFAULT_SEED).unwrap())).collect();
    println!("acceptance (seed {DEFAULT_SEED}, {REGULAR_POINTS} regular points, {SMOOTHNESS_PAIRS} smoothness pairs, {KR_BASE_POINTS} KR base points, tolerance {TOLERANCE})");
    let mut unexpected = Vec::new();
    for c in CRITERIA {
        let mut failed = Vec::new();
        let mut ran = 0;
        for &f in c.forms {
            for &id in c.checks {
                // sl2-only checks are emitted for sl2R alone
                let Some(check) = reports[f].checks.iter().find(|k| k.id == id) else { continue };
                match check.status {
                    Status::Pass => ran += 1,
                    Status::Fail => failed.push(format!("{f}/{id}")),
                    Status::Unsupported => failed.push(format!("{f}/{id} unsupported")),
                }
            }
        }
        let known: Vec<&str> = KNOWN_DIVERGENT.iter().filter(|k| k.0 == c.number).map(|k| k.1).collect();
        if failed.is_empty() && ran > 0 {
            println!("criterion {}: PASS {} ({ran} checks)", c.number, c.title);
            if !known.is_empty() {
                // a listed divergence that no longer occurs needs the list and notes updated
                unexpected.push(c.number);
            }
        } else {
            println!("criterion {}: FAIL {}: {}", c.number, c.title, failed.join(", "));
            let all_known = ran > 0 && failed.iter().all(|x| known.iter().any(|f| x.starts_with(&format!("{f}/"))));
            if !all_known {
                unexpected.push(c.number);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures in criteria {unexpected:?}");
        std::process::exit(1);
    }
}
