//! One line per acceptance criterion. Each criterion runs its rows from the
//! reproduction table and then re-checks a few headline values against
//! constants written out here.

use std::path::PathBuf;
use std::process::Command;

use num_rational::BigRational;
use turan_core::certify::{verify, Certificate};
use turan_core::constructions::{
    blowup_density, catalog, closed_form, geometric_exact, gt_pattern, iterated_density, optimize_weights, DensityValue, Pattern,
};
use turan_core::graph::{
    canonical_form, contains, dto3_transform, named_family, named_graph, ContainMode, ForbiddenFamily, GraphKind, Target,
    UniformGraph, Universe,
};
use turan_core::oracle::density_sequence;
use turan_core::rational::ratio;
use turan_core::reproduce::{run_criterion, tamper, ReproduceOptions, Row, TRIANGLE_FREE_CERTIFICATE, TRIANGLE_FREE_PROBLEM};
use turan_core::sdp::ProblemSpec;

fn target(name: &str) -> Target {
    Target::new(named_family(name).unwrap()).unwrap()
}

fn exact(v: DensityValue) -> BigRational {
    match v {
        DensityValue::Exact(x) => x,
        other => panic!("expected an exact value, got {other}"),
    }
}

/// Solver command for criterion 8: `TURAN_SOLVER`, else the bundled cvxpy
/// script when python3 can import cvxpy, else none.
fn solver() -> Option<Vec<String>> {
    if let Ok(cmd) = std::env::var("TURAN_SOLVER") {
        let parts: Vec<String> = cmd.split_whitespace().map(str::to_string).collect();
        return (!parts.is_empty()).then_some(parts);
    }
    let script = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts/solve_sdpa.py");
    let ok = Command::new("python3").args(["-c", "import cvxpy"]).output().map(|o| o.status.success()).unwrap_or(false);
    (ok && script.exists()).then(|| vec!["python3".into(), script.to_string_lossy().into_owned()])
}

struct Outcome {
    criterion: u8,
    pass: bool,
    detail: String,
}

fn summarise(criterion: u8, rows: &[Row], extra: Result<(), String>, limit: Option<f64>) -> Outcome {
    let ran: Vec<&Row> = rows.iter().filter(|r| !r.skipped).collect();
    let failed: Vec<String> = ran.iter().filter(|r| !r.pass).map(|r| format!("{} = {} (want {})", r.label, r.computed, r.expected)).collect();
    let slowest = ran.iter().map(|r| r.seconds).fold(0.0, f64::max);
    let skipped = rows.len() - ran.len();
    let mut detail = format!("{}/{} rows", ran.len() - failed.len(), ran.len());
    if skipped > 0 {
        detail += &format!(", {skipped} skipped");
    }
    detail += &format!(", slowest {slowest:.2}s");
    if let Some(l) = limit {
        detail += &format!(" (limit {l}s)");
    }
    let mut pass = failed.is_empty() && !ran.is_empty();
    if !failed.is_empty() {
        detail += &format!("; failed: {}", failed.join("; "));
    }
    if let Err(e) = extra {
        pass = false;
        detail += &format!("; spot check: {e}");
    }
    Outcome { criterion, pass, detail }
}

fn check(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn spot_1() -> Result<(), String> {
    let p = |s: &str| s.parse::<Pattern>().unwrap();
    check(exact(blowup_density(&catalog::turan(), &target("edge")).unwrap()) == ratio(5, 9), "tripartite edge")?;
    check(exact(blowup_density(&catalog::turan(), &target("K4-")).unwrap()) == ratio(16, 27), "tripartite K4-")?;
    check(exact(blowup_density(&catalog::complete_graph(4), &target("K4")).unwrap()) == ratio(3, 32), "K4 pattern K4")?;
    check(exact(blowup_density(&p("parts=2; weights=3/4,1/4; edges=112"), &target("K4-")).unwrap()) == ratio(27, 64), "{112} K4-")?;
    let h7 = Pattern::from_graph(&named_graph("H7").unwrap()).unwrap();
    check(exact(blowup_density(&h7, &target("edge")).unwrap()) == ratio(12, 49), "H7 edge")?;
    check(exact(blowup_density(&h7, &target("4.2")).unwrap()) == ratio(144, 343), "H7 4.2")
}

fn spot_2() -> Result<(), String> {
    let it = |p: Pattern, t: &str| exact(iterated_density(&p.iterated().unwrap(), &target(t)).unwrap());
    check(it(catalog::single_edge(), "4.2") == ratio(6, 13), "iterated 3-edge 4.2")?;
    check(it(catalog::complete_graph(4), "4.2") == ratio(4, 7), "iterated K4 4.2")?;
    check(it(Pattern::from_graph(&named_graph("H6").unwrap()).unwrap(), "4.2") == ratio(24, 43), "iterated H6 4.2")?;
    check(it(Pattern::from_graph(&named_graph("H7").unwrap()).unwrap(), "4.2") == ratio(8, 19), "iterated H7 4.2")
}

fn spot_3() -> Result<(), String> {
    let p: Pattern = "parts=2; edges=112; recursive=2".parse().unwrap();
    let o = optimize_weights(&p, &target("edge"), 1e-12).map_err(|e| e.to_string())?;
    check((o.value - (2.0 * 3f64.sqrt() - 3.0)).abs() <= 1e-9, "edge maximum")?;
    check((o.weights[1] - 0.366025).abs() <= 1e-6, "edge argmax")
}

fn spot_4() -> Result<(), String> {
    for t in 3..=8usize {
        let p = gt_pattern(t).unwrap();
        let edge = exact(blowup_density(&p, &target("edge")).unwrap());
        let want = ratio(1, 1) - ratio(4, ((t - 1) * (t - 1)) as i64);
        check(edge == want && want == closed_form::gt_edge_density(t), &format!("G_{t} edge density"))?;
    }
    Ok(())
}

fn spot_5() -> Result<(), String> {
    let d = geometric_exact(4).map_err(|e| e.to_string())?;
    let p = |name: &str| d.get(&canonical_form(&named_graph(name).unwrap()).key).cloned().unwrap_or(ratio(0, 1));
    check(p("4.2") == ratio(3, 4) && p("4.0") == ratio(1, 8) && p("K4") == ratio(1, 8), "h = 4 distribution")?;
    let d5 = geometric_exact(5).map_err(|e| e.to_string())?;
    check(d5.get(&canonical_form(&named_graph("C5").unwrap()).key) == Some(&ratio(3, 16)), "C5 at h = 5")
}

fn spot_6() -> Result<(), String> {
    let s3 = dto3_transform(&named_graph("S3").unwrap()).map_err(|e| e.to_string())?;
    check(canonical_form(&s3).key == canonical_form(&named_graph("edge").unwrap()).key, "S3 maps to one edge")?;
    // Transitive tournament on 6 vertices: many out-stars, still no K4 or C5.
    let arcs: Vec<[usize; 2]> = (0..6).flat_map(|i| (i + 1..6).map(move |j| [i, j])).collect();
    let g = dto3_transform(&UniformGraph::new(GraphKind::DIGRAPH, 6, arcs).unwrap()).map_err(|e| e.to_string())?;
    for f in ["K4", "C5"] {
        check(!contains(&g, &named_graph(f).unwrap(), ContainMode::Subgraph), f)?;
    }
    Ok(())
}

fn spot_7() -> Result<(), String> {
    let seq = density_sequence(
        Universe::undirected(3),
        &ForbiddenFamily::subgraphs([named_graph("K4").unwrap()]),
        &Target::single(named_graph("K4-").unwrap()),
        4..=5,
    )
    .map_err(|e| e.to_string())?;
    check(seq.iter().all(|(_, d)| *d >= ratio(16, 27)), "{K4}, K4- above 16/27")
}

fn spot_8() -> Result<(), String> {
    let spec: ProblemSpec = serde_json::from_str(TRIANGLE_FREE_PROBLEM).map_err(|e| e.to_string())?;
    let problem = spec.assemble().map_err(|e| e.to_string())?;
    let cert = Certificate::from_json(TRIANGLE_FREE_CERTIFICATE).map_err(|e| e.to_string())?;
    let v = verify(&cert, &problem).map_err(|e| e.to_string())?;
    check(v.valid && v.certified_bound == ratio(1, 2), "shipped certificate gives 1/2")?;
    let bad = verify(&tamper(&cert), &problem).map_err(|e| e.to_string())?;
    check(!bad.valid, "tampered certificate rejected")?;
    // Soundness: the certified bound is at least the bipartite construction.
    let edge = Target::single(UniformGraph::parse_with_arity("2:12", 2).unwrap());
    let bip = exact(blowup_density(&"parts=2; edges=12".parse::<Pattern>().unwrap(), &edge).unwrap());
    check(v.certified_bound >= bip, "bound below the bipartite construction")
}

#[test]
fn acceptance() {
    let opts = ReproduceOptions { solver: solver(), work_dir: None };
    let limits = [Some(1.0), Some(5.0), None, None, Some(60.0), None, None, None];
    let spots: [fn() -> Result<(), String>; 8] = [spot_1, spot_2, spot_3, spot_4, spot_5, spot_6, spot_7, spot_8];
    let mut outcomes = Vec::new();
    for c in 1..=8u8 {
        let rows = run_criterion(c, &opts);
        let mut o = summarise(c, &rows, spots[c as usize - 1](), limits[c as usize - 1]);
        if let Some(l) = limits[c as usize - 1] {
            // Timing limits are for optimised builds; debug builds get slack.
            let slack = if cfg!(debug_assertions) { 10.0 } else { 1.0 };
            if rows.iter().any(|r| r.seconds > l * slack) {
                o.pass = false;
                o.detail += "; over the time limit";
            }
        }
        outcomes.push(o);
    }
    for o in &outcomes {
        println!("{} criterion {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.criterion, o.detail);
    }
    println!("NOTE criterion 9: decimal upper bounds from large solver runs are not targets; soundness is covered by 7 and 8");
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.criterion).collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
