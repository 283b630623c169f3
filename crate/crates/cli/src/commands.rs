use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde_json::json;
use turan_core::certify::{verify, Certificate};
use turan_core::constructions::{
    blowup_density, geometric_exact, geometric_sample, iterated_density, optimize_weights, Pattern,
};
use turan_core::graph::{
    enumerate_classes, named_family, ContainMode, ForbiddenFamily, GraphKind, Target, UniformGraph, Universe,
};
use turan_core::oracle::{density_sequence, turan_h_number};
use turan_core::rational::{format_float, significant};
use turan_core::reproduce::{run_criterion, ReproduceOptions, CRITERIA};
use turan_core::sdp::{assemble, export_problem, import_solution, round_solution, ProblemSpec};

use crate::output::{density, density_json, rational, Report};
use crate::{Cli, Cmd, UniverseArgs};

/// A named graph or family, or a graph in the text format.
fn resolve(s: &str, arity: usize) -> Result<Vec<UniformGraph>> {
    if let Ok(f) = named_family(s) {
        return Ok(f);
    }
    Ok(vec![UniformGraph::parse_with_arity(s, arity).with_context(|| format!("{s:?} is neither a known name nor a graph"))?])
}

fn target(s: &str, arity: usize) -> Result<Target> {
    Ok(Target::new(resolve(s, arity)?)?)
}

fn universe(args: &UniverseArgs, hint: Option<GraphKind>) -> Result<Universe> {
    let directed = args.directed || hint.is_some_and(|k| k.directed);
    if directed {
        if args.arity.is_some_and(|a| a != 2) {
            bail!("directed graphs have arity 2");
        }
        return Ok(Universe { kind: GraphKind::DIGRAPH, digons: args.digons });
    }
    if args.digons {
        bail!("--digons only applies to directed graphs");
    }
    let arity = args.arity.or(hint.map(|k| k.arity)).unwrap_or(3);
    Ok(Universe { kind: GraphKind::new(arity, false)?, digons: false })
}

fn family(args: &UniverseArgs, universe: Universe) -> Result<ForbiddenFamily> {
    let mut members = Vec::new();
    for (list, mode) in [(&args.forbid, ContainMode::Subgraph), (&args.forbid_induced, ContainMode::Induced)] {
        for s in list {
            for g in resolve(s, universe.kind.arity)? {
                if g.kind() != universe.kind {
                    bail!("forbidden graph {s} is a {} but the problem is about {}s", g.kind(), universe.kind);
                }
                members.push((g, mode));
            }
        }
    }
    Ok(ForbiddenFamily::new(members))
}

/// Target plus the universe it lives in.
fn problem_setup(t: &str, args: &UniverseArgs) -> Result<(Target, Universe, ForbiddenFamily)> {
    let tgt = target(t, args.arity.unwrap_or(if args.directed { 2 } else { 3 }))?;
    let u = universe(args, Some(tgt.kind()))?;
    if tgt.kind() != u.kind {
        bail!("target is a {} but the problem is about {}s", tgt.kind(), u.kind);
    }
    let fam = family(args, u)?;
    Ok((tgt, u, fam))
}

fn parse_pattern(s: &str) -> Result<Pattern> {
    s.parse::<Pattern>().with_context(|| format!("bad pattern {s:?}"))
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let (a, b) = s.split_once("..=").or_else(|| s.split_once("..")).or_else(|| s.split_once('-')).context("range must look like 4..6")?;
    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range {s}");
    }
    Ok(a..=b)
}

fn read_spec(path: &Path) -> Result<ProblemSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not a problem file", path.display()))
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let report = match &cli.command {
        Cmd::Enumerate { order, universe: args, count } => {
            let u = universe(args, None)?;
            let fam = family(args, u)?;
            let classes = enumerate_classes(*order, u, &fam)?;
            let graphs: Vec<String> = classes.iter().map(|c| c.graph.to_string()).collect();
            let mut lines = vec![format!("{} classes", classes.len())];
            if !count {
                lines.extend(graphs.iter().cloned());
            }
            Report::ok(lines, json!({ "order": order, "count": classes.len(), "graphs": graphs }))
        }
        Cmd::Density { target: t, graph } => {
            let tgt = target(t, 3)?;
            let g = UniformGraph::parse_with_arity(graph, tgt.kind().arity)?;
            let d = tgt.density(&g)?;
            let c = tgt.induced_count(&g)?;
            Report::ok(vec![rational(&d)], json!({ "target": t, "graph": g.to_string(), "count": c, "density": rational(&d) }))
        }
        Cmd::Blowup { pattern, target: t } => {
            let p = parse_pattern(pattern)?;
            let v = blowup_density(&p, &target(t, p.kind().arity)?)?;
            Report::ok(vec![density(&v)], json!({ "pattern": p.to_string(), "target": t, "density": density_json(&v) }))
        }
        Cmd::Iterate { pattern, target: t, all } => {
            let mut p = parse_pattern(pattern)?;
            if *all {
                p = p.iterated()?;
            }
            let v = iterated_density(&p, &target(t, p.kind().arity)?)?;
            Report::ok(vec![density(&v)], json!({ "pattern": p.to_string(), "target": t, "density": density_json(&v) }))
        }
        Cmd::Optimize { pattern, target: t, tol } => {
            let p = parse_pattern(pattern)?;
            let o = optimize_weights(&p, &target(t, p.kind().arity)?, *tol)?;
            let w: Vec<String> = o.weights.iter().map(|x| significant(*x, 12)).collect();
            Report::ok(
                vec![format!("weights: {}", w.join(", ")), format!("value: {}", format_float(o.value, o.error))],
                json!({ "pattern": p.to_string(), "target": t, "weights": o.weights, "value": o.value, "error": o.error }),
            )
        }
        Cmd::Geometric { exact: Some(h), .. } => {
            let dist = geometric_exact(*h)?;
            let mut lines = vec![format!("exact distribution on {h} points")];
            let mut rows = Vec::new();
            for (k, p) in &dist {
                let g = k.to_graph().to_string();
                lines.push(format!("{g}  {}", rational(p)));
                rows.push(json!({ "graph": g, "probability": rational(p) }));
            }
            Report::ok(lines, json!({ "points": h, "distribution": rows }))
        }
        Cmd::Geometric { exact: None, order, trials, seed } => {
            let n = order.context("give --exact h or --order n")?;
            let s = geometric_sample(n, *trials, *seed)?;
            let mut lines = vec![format!(
                "{} trials on {n} points, seed {}: edge density {}",
                s.trials,
                s.seed,
                format_float(s.edge_density.mean, s.edge_density.std_error)
            )];
            let mut classes = Vec::new();
            for (label, map) in [("4-vertex", &s.four), ("5-vertex", &s.five)] {
                for (k, e) in map {
                    let g = k.to_graph().to_string();
                    lines.push(format!("{label} {g}  {}", format_float(e.mean, e.std_error)));
                    classes.push(json!({ "graph": g, "mean": e.mean, "std_error": e.std_error }));
                }
            }
            Report::ok(
                lines,
                json!({ "points": n, "trials": s.trials, "seed": s.seed,
                        "edge_density": { "mean": s.edge_density.mean, "std_error": s.edge_density.std_error },
                        "classes": classes }),
            )
        }
        Cmd::SdpExport { order, target: t, universe: args, out, problem } => {
            let (tgt, u, fam) = problem_setup(t, args)?;
            let p = assemble(*order, u, &fam, &tgt)?;
            export_problem(&p, out)?;
            let prob_path = problem.clone().unwrap_or_else(|| out.with_extension("prob"));
            std::fs::write(&prob_path, serde_json::to_string_pretty(&p.spec)? + "\n")?;
            let sizes = p.block_sizes();
            Report::ok(
                vec![
                    format!("{} admissible graphs, {} type blocks of sizes {:?}", p.graphs.len(), sizes.len(), sizes),
                    format!("wrote {} and {}", out.display(), prob_path.display()),
                ],
                json!({ "order": order, "graphs": p.graphs.len(), "block_sizes": sizes,
                        "sdpa": out.display().to_string(), "problem": prob_path.display().to_string() }),
            )
        }
        Cmd::SdpRound { problem, solution, denom_bound, out } => {
            let p = read_spec(problem)?.assemble()?;
            let sol = import_solution(&p, solution)?;
            let cert = round_solution(&p, &sol, *denom_bound)?;
            cert.save(out)?;
            Report::ok(
                vec![
                    format!("solver bound {}", significant(sol.bound, 12)),
                    format!("rounded bound {}", cert.bound),
                    format!("wrote {}", out.display()),
                ],
                json!({ "solver_bound": sol.bound, "bound": cert.bound, "certificate": out.display().to_string() }),
            )
        }
        Cmd::Verify { cert, problem } => {
            let p = read_spec(problem)?.assemble()?;
            let c = Certificate::load(cert).with_context(|| format!("cannot load certificate {}", cert.display()))?;
            let v = verify(&c, &p)?;
            let worst = p.graphs.get(v.worst_graph).map(|c| c.graph.to_string()).unwrap_or_default();
            let line = if v.valid {
                format!(
                    "valid: certified bound {} (claimed {}), attained by graph #{} {worst}",
                    rational(&v.certified_bound),
                    rational(&v.claimed_bound),
                    v.worst_graph + 1
                )
            } else {
                format!("invalid: {}", v.failure.clone().unwrap_or_default())
            };
            Report {
                lines: vec![line],
                json: json!({ "valid": v.valid, "claimed_bound": rational(&v.claimed_bound),
                              "certified_bound": rational(&v.certified_bound), "worst_graph": v.worst_graph,
                              "worst_graph_string": worst, "failure": v.failure }),
                ok: v.valid,
            }
        }
        Cmd::Oracle { target: t, order, range, universe: args } => {
            let (tgt, u, fam) = problem_setup(t, args)?;
            match (order, range) {
                (Some(n), _) => {
                    let r = turan_h_number(*n, u, &fam, &tgt)?;
                    let w: Vec<String> = r.witnesses.iter().map(|g| g.to_string()).collect();
                    let mut lines = vec![format!("n={n}: max {} induced copies, density {}", r.max_count, rational(&r.max_density))];
                    lines.extend(w.iter().map(|g| format!("witness {g}")));
                    Report::ok(lines, json!({ "n": n, "max_count": r.max_count, "max_density": rational(&r.max_density), "witnesses": w }))
                }
                (None, Some(range)) => {
                    let seq = density_sequence(u, &fam, &tgt, parse_range(range)?)?;
                    let lines = seq.iter().map(|(n, d)| format!("n={n}: {}", rational(d))).collect();
                    let rows: Vec<_> = seq.iter().map(|(n, d)| json!({ "n": n, "density": rational(d) })).collect();
                    Report::ok(lines, json!({ "sequence": rows, "nonincreasing": true }))
                }
                (None, None) => bail!("give --order n or --range a..b"),
            }
        }
        Cmd::Reproduce { criteria, solver } => {
            let opts = ReproduceOptions {
                solver: solver.as_ref().map(|s| s.split_whitespace().map(str::to_string).collect()),
                work_dir: None,
            };
            let which: Vec<u8> = if criteria.is_empty() { CRITERIA.to_vec() } else { criteria.clone() };
            if let Some(bad) = which.iter().find(|c| !CRITERIA.contains(c)) {
                bail!("no criterion {bad} (valid: 1 to 8)");
            }
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            let mut ok = true;
            for c in which {
                for r in run_criterion(c, &opts) {
                    let status = if r.skipped { "SKIP" } else if r.pass { "PASS" } else { "FAIL" };
                    ok &= r.pass;
                    lines.push(format!("{status} [{}] {}: {} (expected {}) {:.2}s", r.criterion, r.label, r.computed, r.expected, r.seconds));
                    rows.push(json!({ "criterion": r.criterion, "label": r.label, "computed": r.computed,
                                      "expected": r.expected, "pass": r.pass, "skipped": r.skipped, "seconds": r.seconds }));
                }
            }
            let passed = rows.iter().filter(|r| r["pass"] == true).count();
            lines.push(format!("{passed}/{} rows passed", rows.len()));
            Report { lines, json: json!({ "rows": rows, "all_passed": ok }), ok }
        }
    };
    Ok(report.emit(cli.format))
}
