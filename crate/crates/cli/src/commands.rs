use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use staircase_core::exact_model::Soundness;
use staircase_core::genpowers::example_e1_build;
use staircase_core::io::{
    matrix_from_wire, render_diagram, vector_from_wire, window_from_wire, window_to_wire, Case4Wire, CellWire,
    ComplexWire, DiagramWire, GpWire, SubspaceWire,
};
use staircase_core::numeric_model::{
    build_seto_example, compatibility_defect, doubly_commute_defect, isometry_defect, shift_detector,
    DETECTOR_MAX_DIM,
};
use staircase_core::torusgeo::{helson_reducing, mainl_case4_check, measure_preserving};
use staircase_core::{
    build_gp, compress, gp_verify, preimage, recover_diagram, ArcSet, Direction, NumericSubspace, OmegaMap, ShiftOp,
    Window, C64,
};

use crate::config::RunConfig;
use crate::suite::{self, SuiteOptions};
use crate::{
    Cli, CliError, Command, DiagramCmd, ExampleCmd, GpCmd, MainlCmd, Outcome, PairCmd, StripesCmd, SubspaceCmd,
    SuiteCmd,
};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::json(path, e))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values are plain JSON")
}

fn outcome(results: Value, warnings: Vec<String>, report_out: Option<&PathBuf>) -> Outcome {
    Outcome {
        results,
        warnings,
        report_out: report_out.cloned(),
        failed: false,
    }
}

fn check_tol(name: &str, t: f64) -> Result<f64, CliError> {
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(CliError::Invalid(format!("{name} = {t} must be positive")))
    }
}

pub fn execute(cli: &Cli, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Diagram(c) => diagram(c, cfg),
        Command::Subspace(SubspaceCmd::Analyze { input, max_mn, report }) => {
            subspace_analyze(input, *max_mn).map(|(r, w)| outcome(r, w, report.out.as_ref()))
        }
        Command::Pair(PairCmd::Analyze {
            subspace,
            max_mn,
            rank_tol,
            report,
        }) => {
            let tol = check_tol("rank_tol", rank_tol.unwrap_or(cfg.rank_tol()))?;
            pair_analyze(subspace, *max_mn, tol, cfg.gram_tol()).map(|(r, w)| outcome(r, w, report.out.as_ref()))
        }
        Command::Example(ExampleCmd::Seto {
            lambda,
            lambda_im,
            n,
            max_mn,
            rank_tol,
            report,
        }) => {
            let tol = check_tol("rank_tol", rank_tol.unwrap_or(cfg.rank_tol()))?;
            let margin = cfg.margin.unwrap_or(0).max(*max_mn);
            example_seto(C64::new(*lambda, *lambda_im), *n, *max_mn, margin, tol)
                .map(|(r, w)| outcome(r, w, report.out.as_ref()))
        }
        Command::Gp(c) => gp(c, cfg, cli.seed),
        Command::Stripes(c) => stripes(c, cfg),
        Command::Mainl(MainlCmd::Check { config, tol, report }) => {
            let wire: Case4Wire = read_json(config)?;
            if let Some(d) = cfg.big_m.filter(|&m| m != wire.resolution) {
                return Err(CliError::Invalid(format!(
                    "case-4 file uses M = {} but the run config asks for M = {d}",
                    wire.resolution
                )));
            }
            let tol = tol.unwrap_or(wire.tol);
            let r = mainl_case4_check(&wire.theta_set()?, &wire.systems, tol)?;
            Ok(outcome(to_value(&r), Vec::new(), report.out.as_ref()))
        }
        Command::Suite(SuiteCmd::Run {
            level,
            rank_tol,
            report,
        }) => {
            let opts = SuiteOptions {
                level: *level,
                seed: cli.seed,
                rank_tol: check_tol("rank_tol", rank_tol.unwrap_or(cfg.rank_tol()))?,
                gp_tol: check_tol("gp_tol", cfg.gp_tol())?,
            };
            let results = suite::run_all(&opts);
            for r in &results {
                eprintln!(
                    "{} {:>2} {} ({:.2} s)",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.name,
                    r.elapsed.as_secs_f64()
                );
            }
            let warnings = results
                .iter()
                .flat_map(|r| r.warnings.iter().map(move |w| format!("criterion {}: {w}", r.id)))
                .collect();
            let passed = results.iter().filter(|r| r.pass).count();
            let mut o = outcome(
                json!({
                    "level": level,
                    "seed": cli.seed,
                    "rank_tol": opts.rank_tol,
                    "passed": passed,
                    "total": results.len(),
                    "criteria": results,
                }),
                warnings,
                report.out.as_ref(),
            );
            o.failed = passed < results.len();
            Ok(o)
        }
    }
}

fn diagram(c: &DiagramCmd, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match c {
        DiagramCmd::Classify { input, report } => {
            let d = read_json::<DiagramWire>(input)?.to_diagram()?;
            Ok(outcome(to_value(&d.classify()), Vec::new(), report.out.as_ref()))
        }
        DiagramCmd::Render { input, window, out } => {
            let d = read_json::<DiagramWire>(input)?.to_diagram()?;
            let b = window
                .or(cfg.window)
                .ok_or_else(|| CliError::Invalid("render needs --window or a configured window".into()))?;
            let w = window_from_wire(b, 0)?;
            let raster = render_diagram(&d, &w);
            let path = cfg.output_path(out);
            write_file(&path, &raster.to_pgm())?;
            let members = raster.pixels.iter().filter(|&&v| v > 0).count();
            Ok(outcome(
                json!({
                    "out": path.display().to_string(),
                    "window": b,
                    "width": raster.width,
                    "height": raster.height,
                    "members": members,
                }),
                Vec::new(),
                None,
            ))
        }
    }
}

fn subspace_analyze(input: &Path, max_mn: usize) -> Result<(Value, Vec<String>), CliError> {
    let m = read_json::<SubspaceWire>(input)?.to_subspace()?;
    let mut warnings = Vec::new();
    if m.soundness() == Soundness::WindowLimited {
        warnings.push("no symbolic description: Wold parts are limited by the window".to_string());
    }
    let rec = recover_diagram(&m)?;
    let dc = m.doubly_commute_check()?;
    let mut wold = BTreeMap::new();
    for dir in Direction::BOTH {
        let r = m.wold_single(dir)?;
        wold.insert(
            dir.to_string(),
            json!({
                "unitary": r.unitary.len(),
                "layers": r.layers.iter().map(|l| l.len()).collect::<Vec<_>>(),
                "soundness": r.soundness,
            }),
        );
    }
    let mut failures = Vec::new();
    for a in 1..=max_mn {
        for b in 1..=max_mn {
            if !m.range_projection_commutator(a, b)? {
                failures.push([a, b]);
            }
        }
    }
    let fourfold = if dc.holds {
        let f = m.fourfold_decompose()?;
        let p = &f.wold_parts;
        json!({
            "uu": p.uu.len(), "us": p.us.len(), "su": p.su.len(), "ss": p.ss.len(),
            "parts_invariant": f.parts_invariant,
        })
    } else {
        Value::Null
    };
    Ok((
        json!({
            "window": window_to_wire(m.window()),
            "margin": m.window().margin,
            "points": m.len(),
            "soundness": m.soundness(),
            "invariant": { "w": m.is_invariant(Direction::W), "z": m.is_invariant(Direction::Z) },
            "recovery": {
                "status": rec.status,
                "class": rec.class(),
                "twist": rec.twist,
                "corners": rec.corners,
            },
            "doubly_commuting": dc,
            "wold": wold,
            "compatible": { "checked_up_to": [max_mn, max_mn], "holds": failures.is_empty(), "failures": failures },
            "fourfold": fourfold,
        }),
        warnings,
    ))
}

fn pair_analyze(input: &Path, max_mn: usize, rank_tol: f64, gram_tol: f64) -> Result<(Value, Vec<String>), CliError> {
    let m = read_json::<SubspaceWire>(input)?.to_subspace()?;
    let num = NumericSubspace::from_monomial(&m);
    let mut warnings = Vec::new();
    let gram = num.gram_defect();
    if gram > gram_tol {
        warnings.push(format!("basis Gram defect {gram:e} exceeds gram_tol {gram_tol:e}"));
    }
    let sw = compress(ShiftOp::W, &num)?;
    let sz = compress(ShiftOp::Z, &num)?;
    let compat = compatibility_defect(&sw, &sz, max_mn, max_mn, rank_tol)?;
    warnings.extend(compat.warnings.iter().cloned());
    let k = num.window().margin.min(3);
    let mut detectors = BTreeMap::new();
    for (name, s) in [("w", &sw), ("z", &sz)] {
        if k == 0 || s.dim() > DETECTOR_MAX_DIM {
            warnings.push(format!(
                "shift detector for {name} skipped (dimension {}, margin {})",
                s.dim(),
                num.window().margin
            ));
            detectors.insert(name, Value::Null);
        } else {
            detectors.insert(name, to_value(&shift_detector(s, k, rank_tol)?));
        }
    }
    Ok((
        json!({
            "dim": num.dim(),
            "gram_defect": gram,
            "isometry_defect": { "w": isometry_defect(&sw), "z": isometry_defect(&sz) },
            "doubly_commute_defect": doubly_commute_defect(&sz, &sw)?,
            "compatibility": compat,
            "detector": detectors,
            "rank_tol": rank_tol,
        }),
        warnings,
    ))
}

fn example_seto(lambda: C64, n: i64, max_mn: usize, margin: usize, rank_tol: f64) -> Result<(Value, Vec<String>), CliError> {
    let ex = build_seto_example(lambda, Window::square(0, n, margin)?)?;
    let d = ex.evaluate()?;
    let sw = compress(ShiftOp::W, &ex.subspace)?;
    let sz = compress(ShiftOp::Z, &ex.subspace)?;
    let compat = compatibility_defect(&sw, &sz, max_mn, max_mn, rank_tol)?;
    let mut warnings = ex.warnings.clone();
    warnings.extend(compat.warnings.iter().cloned());
    Ok((
        json!({
            "lambda": [lambda.re, lambda.im],
            "n": n,
            "dim": ex.subspace.dim(),
            "defect": d,
            "tail_bound": ex.tail_bound,
            "compatibility": compat,
            "rank_tol": rank_tol,
        }),
        warnings,
    ))
}

fn gp(c: &GpCmd, cfg: &RunConfig, seed: u64) -> Result<Outcome, CliError> {
    match c {
        GpCmd::Build {
            j0,
            m,
            n,
            unitary,
            e,
            j_max,
            margin,
            out,
        } => {
            let cell = read_json::<CellWire>(j0)?.to_cell()?;
            let u = matrix_from_wire(&read_json::<Vec<Vec<ComplexWire>>>(unitary)?)?;
            let e = vector_from_wire(&read_json::<Vec<ComplexWire>>(e)?);
            let floors = cell.column_floors();
            let lo = floors.iter().copied().min().unwrap_or(0);
            let hi = floors.iter().copied().max().unwrap_or(0);
            let j_max = j_max.or(cfg.window.map(|w| w[3])).unwrap_or(hi + 2 * *n as i64 + 2);
            let margin = margin.or(cfg.margin).unwrap_or(3);
            let w = Window::new(0, *m as i64 - 1, lo.min(j_max), j_max, margin)?;
            let sys = build_gp(&cell, *m, *n, &u, &e, w)?;
            let wire = GpWire::from_system(&sys);
            let mut results = json!({
                "m": sys.m,
                "n": sys.n,
                "d": sys.unitary.nrows(),
                "blocks": sys.layout.blocks.len(),
                "dim": sys.dim(),
                "relation_defect": sys.relation_defect(),
            });
            match out {
                Some(p) => {
                    let p = cfg.output_path(p);
                    let text = serde_json::to_string(&wire).expect("system wire is plain JSON");
                    write_file(&p, text.as_bytes())?;
                    results["out"] = json!(p.display().to_string());
                }
                None => results["system"] = to_value(&wire),
            }
            Ok(outcome(results, Vec::new(), None))
        }
        GpCmd::Verify { input, tol, report } => {
            let wire: GpWire = read_json(input)?;
            let tol = check_tol("tol", tol.unwrap_or(cfg.gp_tol()))?;
            let v1 = wire.v1.to_matrix()?;
            let v2 = wire.v2.to_matrix()?;
            let cyclic = wire.cyclic_vector();
            let v = gp_verify(&v1, &v2, &wire.layout(), wire.m, wire.n, tol, cyclic.as_ref(), seed)?;
            Ok(outcome(to_value(&v), Vec::new(), report.out.as_ref()))
        }
        GpCmd::ExampleE1 {
            gamma,
            d,
            j_max,
            margin,
            tol,
            system_out,
            report,
        } => {
            let gamma: ArcSet = read_json(gamma)?;
            let d = d.or(cfg.d).unwrap_or(gamma.resolution());
            let gamma = if gamma.resolution() == d { gamma } else { gamma.refine(d)? };
            let s = j_max.or(cfg.window.map(|w| w[3])).unwrap_or(6);
            let margin = margin.or(cfg.margin).unwrap_or(3);
            let tol = check_tol("tol", tol.unwrap_or(cfg.gp_tol()))?;
            let ex = example_e1_build(Window::new(0, 0, 0, s, margin)?, &gamma, d)?;
            let mut warnings = Vec::new();
            if ex.degenerate {
                warnings.push(format!(
                    "γ keeps {} of {d} frequencies: the spectral split is trivial",
                    ex.frequencies.len()
                ));
            }
            let verdict = if ex.system.dim() == 0 {
                Value::Null
            } else {
                to_value(&ex.system.verify(tol)?)
            };
            let mut results = json!({
                "d": d,
                "anti_diagonals": s + 1,
                "frequencies": ex.frequencies.len(),
                "dim": ex.system.dim(),
                "m": ex.system.m,
                "n": ex.system.n,
                "degenerate": ex.degenerate,
                "verdict": verdict,
            });
            if let Some(p) = system_out {
                let p = cfg.output_path(p);
                let text = serde_json::to_string(&GpWire::from_system(&ex.system)).expect("plain JSON");
                write_file(&p, text.as_bytes())?;
                results["system_out"] = json!(p.display().to_string());
            }
            Ok(outcome(results, warnings, report.out.as_ref()))
        }
    }
}

fn stripes(c: &StripesCmd, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match c {
        StripesCmd::Preimage {
            m,
            n,
            l,
            gamma,
            big_m,
            out,
        } => {
            let gamma: ArcSet = read_json(gamma)?;
            let d = gamma.resolution();
            if let Some(cd) = cfg.d.filter(|&cd| cd != d) {
                return Err(CliError::Invalid(format!(
                    "arc set has resolution {d} but the run config asks for d = {cd}"
                )));
            }
            let big = big_m.or(cfg.big_m).unwrap_or(d);
            let o = OmegaMap::new(*m, *n, *l)?;
            let set = preimage(o, &gamma, big)?;
            let path = cfg.output_path(out);
            write_file(&path, &set.raster().to_pgm())?;
            let (rows, cols) = set.line_counts();
            let distinct = |v: Vec<usize>| v.into_iter().filter(|&c| c > 0).collect::<std::collections::BTreeSet<_>>();
            let preserving = measure_preserving(o, big, d)?;
            let mut warnings = Vec::new();
            if !preserving {
                warnings.push(format!(
                    "{o} is not measure preserving at M = {big}, d = {d}: some bins of γ have no preimage"
                ));
            }
            Ok(outcome(
                json!({
                    "out": path.display().to_string(),
                    "omega": o.to_string(),
                    "M": big,
                    "d": d,
                    "points": set.count(),
                    "measure": set.measure(),
                    "gamma_measure": gamma.measure(),
                    "measure_preserving": preserving,
                    "row_counts": distinct(rows),
                    "column_counts": distinct(cols),
                }),
                warnings,
                None,
            ))
        }
        StripesCmd::Helson { delta, report } => {
            let delta: ArcSet = read_json(delta)?;
            Ok(outcome(to_value(&helson_reducing(&delta)), Vec::new(), report.out.as_ref()))
        }
    }
}
