use std::path::{Path, PathBuf};
use std::str::FromStr;

use parrep::certificates::{
    witness_average, witness_classical_binomial, witness_naive, witness_recursive_snk, witness_tensor_power,
};
use parrep::error_reduction::{entropy_curve, entropy_threshold, plan_rounds, threshold_condition, write_curve_csv};
use parrep::game::{outcome_probabilities, parallel_game, strategy_from_channel, threshold_objective, value_objective};
use parrep::io::{parse_game, parse_witness, witness_to_json, LoadedGame};
use parrep::sdp::{check_dual_feasibility, optimize, SolveStatus, SolverOptions, WitnessMeta};
use parrep::{hedging, Game, Operator, Witness};
use serde_json::json;

use crate::report::{read_input, Failure, InputDigest, Outcome, RunReport};

#[derive(Clone, Debug, PartialEq)]
pub enum Objective {
    Win,
    Value(Vec<f64>),
    Threshold { n: usize, k: usize },
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let numbers = |list: &str| -> Result<Vec<f64>, String> {
            list.split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}")))
                .collect()
        };
        match s.split_once(':') {
            None if s == "win" => Ok(Objective::Win),
            Some(("value", list)) => Ok(Objective::Value(numbers(list)?)),
            Some(("threshold", list)) => {
                let parts: Vec<usize> = list
                    .split(',')
                    .map(|v| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}")))
                    .collect::<Result<_, _>>()?;
                match parts[..] {
                    [n, k] => Ok(Objective::Threshold { n, k }),
                    _ => Err("threshold needs `threshold:n,k`".into()),
                }
            }
            _ => Err(format!("unknown objective `{s}`; use win, value:v0,v1,… or threshold:n,k")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Construction {
    Average,
    TensorPower,
    Naive,
    Snk,
    ClassicalBinomial,
}

fn load_game(path: &Path, report: &mut RunReport) -> Result<LoadedGame<f64>, Failure> {
    let text = read_input(path, report)?;
    report
        .timed("load", || parse_game(&text))
        .map_err(|e| Failure::from(e).context(&path.display().to_string()))
}

fn status_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Optimal => 0,
        SolveStatus::Infeasible => 2,
        SolveStatus::NumericalFailure | SolveStatus::IterationLimit => 3,
    }
}

fn write_witness(path: &Path, w: &Witness) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(&witness_to_json(w)).expect("witness serializes");
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// The game and objective a problem is posed on, with the repetition count
/// and the witness provenance that goes with it.
struct Posed {
    game: Game,
    objective: Operator,
    meta: WitnessMeta,
}

fn pose(loaded: &LoadedGame<f64>, objective: &Objective, value_n: usize) -> Result<Posed, Failure> {
    Ok(match objective {
        Objective::Win => {
            let g = loaded.win_lose()?;
            Posed {
                objective: g.outcomes()[1].clone(),
                game: g,
                meta: WitnessMeta::new("solver", 1).with_k(1),
            }
        }
        Objective::Value(values) => {
            let mut meta = WitnessMeta::new("solver", value_n);
            meta.values = Some(values.clone());
            Posed {
                objective: value_objective(&loaded.game, values, value_n)?,
                game: parallel_game(&loaded.game, value_n)?,
                meta,
            }
        }
        Objective::Threshold { n, k } => {
            let g = loaded.win_lose()?;
            Posed {
                objective: threshold_objective(&g, *n, *k)?,
                game: parallel_game(&g, *n)?,
                meta: WitnessMeta::new("solver", *n).with_k(*k),
            }
        }
    })
}

fn objective_label(o: &Objective, n: usize) -> String {
    match o {
        Objective::Win => "win".into(),
        Objective::Value(v) => format!(
            "value:{} (n={n})",
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        ),
        Objective::Threshold { n, k } => format!("threshold:{n},{k}"),
    }
}

pub fn solve(
    game: &Path,
    objective: &Objective,
    n: usize,
    opts: &SolverOptions,
    emit_witness: Option<&PathBuf>,
) -> Result<Outcome, Failure> {
    let mut report = RunReport::new("solve");
    let loaded = load_game(game, &mut report)?;
    let posed = report.timed("compile", || pose(&loaded, objective, n))?;
    let opt = report.timed("solve", || optimize(&posed.game, &posed.objective, opts, posed.meta.clone()))?;
    let r = &opt.report;
    let bound = opt.witness.as_ref().map(|w| w.value());
    if let (Some(path), Some(w)) = (emit_witness, &opt.witness) {
        write_witness(path, w)?;
    }
    report.results = json!({
        "objective": objective_label(objective, n),
        "status": r.status,
        "primal_value": r.primal_value,
        "dual_value": r.dual_value,
        "gap": r.gap,
        "certified_upper_bound": bound,
        "iterations": r.iterations,
        "primal_infeasibility": r.primal_infeasibility,
        "dual_infeasibility": r.dual_infeasibility,
        "detail": r.detail,
        "tol": r.tol,
    });
    Ok(Outcome {
        code: status_code(r.status),
        report,
    })
}

pub struct CertifyArgs<'a> {
    pub game: &'a Path,
    pub witness: Option<&'a Path>,
    pub construction: Option<Construction>,
    pub n: usize,
    pub k: usize,
    pub values: Option<Vec<f64>>,
    pub emit_witness: Option<&'a Path>,
}

pub fn certify(args: &CertifyArgs, opts: &SolverOptions) -> Result<Outcome, Failure> {
    let mut report = RunReport::new("certify");
    let loaded = load_game(args.game, &mut report)?;
    let (witness, objective, extra) = match (args.witness, args.construction) {
        (Some(path), None) => {
            let text = read_input(path, &mut report)?;
            let w: Witness = parse_witness(&text).map_err(|e| Failure::from(e).context(&path.display().to_string()))?;
            let objective = match (&w.meta.values, w.meta.k) {
                (Some(v), _) => Objective::Value(v.clone()),
                (None, Some(k)) if w.meta.n == 1 && k == 1 => Objective::Win,
                (None, Some(k)) => Objective::Threshold { n: w.meta.n, k },
                (None, None) => {
                    return Err(Failure::Input(format!(
                        "{}: witness names neither a threshold `k` nor outcome `values`",
                        path.display()
                    )))
                }
            };
            (w, objective, json!(null))
        }
        (None, Some(c)) => construct(&loaded, c, args, opts, &mut report)?,
        _ => return Err(Failure::Input("give exactly one of --witness and --construction".into())),
    };
    let n = witness.meta.n;
    let posed = report.timed("compile", || pose(&loaded, &objective, n))?;
    let tol = opts.tol;
    let check = report.timed("check", || check_dual_feasibility(&posed.game, &posed.objective, &witness, tol))?;
    if let Some(path) = args.emit_witness {
        write_witness(path, &witness)?;
    }
    let constraints: Vec<_> = check
        .constraints
        .iter()
        .map(|(name, m)| json!({"constraint": name, "min_eigenvalue": m}))
        .collect();
    report.results = json!({
        "construction": witness.meta.construction,
        "n": n,
        "k": witness.meta.k,
        "values": witness.meta.values,
        "feasible": check.feasible,
        "value": check.value,
        "constraints": constraints,
        "block_min_eigenvalues": check.block_min_eigenvalues,
        "single_round": extra,
        "tol": check.tol,
    });
    Ok(Outcome {
        code: if check.feasible { 0 } else { 2 },
        report,
    })
}

/// Solves the single-round problem and builds the requested witness from its
/// optimal dual.
fn construct(
    loaded: &LoadedGame<f64>,
    c: Construction,
    args: &CertifyArgs,
    opts: &SolverOptions,
    report: &mut RunReport,
) -> Result<(Witness, Objective, serde_json::Value), Failure> {
    let (n, k) = (args.n, args.k);
    let (base, values) = match (c, &args.values) {
        (Construction::Average, Some(v)) => (loaded.game.clone(), v.clone()),
        _ => (loaded.win_lose()?, vec![0.0, 1.0]),
    };
    if c == Construction::ClassicalBinomial && !base.is_diagonal(1e-12) {
        return Err(Failure::Negative(
            "classical-binomial needs a diagonal game; this game has off-diagonal structure".into(),
        ));
    }
    let single_objective = base.weighted_sum(&values)?;
    let opt = report.timed("solve", || {
        optimize(&base, &single_objective, opts, WitnessMeta::new("solver", 1).with_k(1))
    })?;
    let w = match opt.witness {
        Some(w) => w,
        None => {
            let m = format!("single-round solve ended with status {:?}: {}", opt.report.status, opt.report.detail);
            return Err(match opt.report.status {
                SolveStatus::Infeasible => Failure::Negative(m),
                _ => Failure::Numerical(m),
            });
        }
    };
    let single = json!({
        "primal_value": opt.report.primal_value,
        "witness_value": w.value(),
        "tol": opt.report.tol,
    });
    let built = report.timed("construct", || match c {
        Construction::Average => witness_average(&w, &base, &values, n),
        Construction::TensorPower => witness_tensor_power(&w, &base, n),
        Construction::Naive => witness_naive(&w, &base, n, k),
        Construction::Snk => witness_recursive_snk(&w, &base, n, k),
        Construction::ClassicalBinomial => witness_classical_binomial(&w, &base, n, k),
    })?;
    let objective = match c {
        Construction::Average => match &args.values {
            Some(v) => Objective::Value(v.clone()),
            // on the loaded game, a (lose, win) weighting
            None => Objective::Value(win_indicator(loaded)?),
        },
        Construction::TensorPower if n == 1 => Objective::Win,
        Construction::TensorPower => Objective::Threshold { n, k: n },
        _ if n == 1 && k == 1 => Objective::Win,
        _ => Objective::Threshold { n, k },
    };
    let mut built = built;
    if let Objective::Value(v) = &objective {
        built.meta.values = Some(v.clone());
        built.meta.n = n;
    }
    Ok((built, objective, single))
}

/// Outcome values of the loaded game that reproduce the win/lose split.
fn win_indicator(loaded: &LoadedGame<f64>) -> Result<Vec<f64>, Failure> {
    let t = loaded.game.num_outcomes();
    match &loaded.winning {
        Some(w) => Ok((0..t).map(|i| if w.contains(&i) { 1.0 } else { 0.0 }).collect()),
        None if t == 2 => Ok(vec![0.0, 1.0]),
        None => Err(Failure::Input("the game has no winning set; pass --values".into())),
    }
}

pub fn hedging_demo(opts: &SolverOptions) -> Result<Outcome, Failure> {
    let mut report = RunReport::new("hedging-demo");
    report
        .inputs
        .push(InputDigest::of("bundled:hedging_game.json", hedging::GAME_JSON.as_bytes()));
    let g = report.timed("load", hedging::game);
    let g2 = report.timed("compile", hedging::two_copy_game);
    let mut code = 0;
    let mut run = |name: &str, game: &Game, obj: &Operator, report: &mut RunReport| -> Result<serde_json::Value, Failure> {
        let opt = report.timed(name, || optimize(game, obj, opts, WitnessMeta::new("solver", 1)))?;
        code = code.max(status_code(opt.report.status));
        if opt.report.status != SolveStatus::Optimal {
            code = 3;
        }
        Ok(json!({
            "status": opt.report.status,
            "value": opt.report.primal_value,
            "dual_value": opt.report.dual_value,
            "certified_upper_bound": opt.witness.as_ref().map(|w| w.value()),
            "tol": opt.report.tol,
        }))
    };
    let single = run("solve-single", &g, &g.outcomes()[1].clone(), &mut report)?;
    let at_least_one = run("solve-two-k1", &g2, &threshold_objective(&g, 2, 1)?, &mut report)?;
    let both = run("solve-two-k2", &g2, &threshold_objective(&g, 2, 2)?, &mut report)?;
    let probs = report.timed("phase-flip", || {
        let s = strategy_from_channel(&hedging::phase_flip())?;
        outcome_probabilities(&g2, &s)
    })?;
    let p = hedging::single_round_value();
    const EXACT: f64 = 1e-12;
    report.results = json!({
        "single_round": single,
        "two_rounds_at_least_one": at_least_one,
        "two_rounds_both": both,
        "phase_flip": {
            "lose_both": probs[0],
            "win_second_only": probs[1],
            "win_first_only": probs[2],
            "win_both": probs[3],
            "exactly_one": probs[1] + probs[2],
            "tol": EXACT,
        },
        "cos2_pi_8": p,
        "independent_tail": { "value": hedging::independent_tail(p), "tol": 0.0 },
    });
    Ok(Outcome { report, code })
}

pub fn error_reduction(alpha: f64, beta: f64, epsilon: f64) -> Result<Outcome, Failure> {
    let mut report = RunReport::new("error-reduction");
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Failure::Input(format!("epsilon must lie in (0, 0.5), got {epsilon}")));
    }
    if !threshold_condition(alpha, beta)? {
        return Err(Failure::Negative(format!(
            "threshold condition fails: need beta < 2^(-H(alpha)/alpha) < alpha; \
             2^(-H({alpha})/{alpha}) = {:.6}, beta = {beta}",
            entropy_threshold(alpha)?
        )));
    }
    let plan = report.timed("plan", || plan_rounds(alpha, beta, epsilon))?;
    let mut results = serde_json::to_value(&plan).expect("plan serializes");
    results["entropy_threshold"] = json!(entropy_threshold(alpha)?);
    // the bounds are held to epsilon
    results["tol"] = json!(epsilon);
    report.results = results;
    Ok(Outcome {
        code: if plan.satisfied { 0 } else { 2 },
        report,
    })
}

/// Writes the curve CSV to `csv` (stdout when absent).
pub fn plot_entropy(min: f64, max: f64, step: f64, csv: Option<&Path>) -> Result<Outcome, Failure> {
    let mut report = RunReport::new("plot-entropy");
    let curve = report.timed("sample", || entropy_curve(min, max, step))?;
    let write = |w: &mut dyn std::io::Write| write_curve_csv(&curve, w);
    match csv {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            write(&mut std::io::BufWriter::new(file))
        }
        None => write(&mut std::io::stdout().lock()),
    }
    .map_err(|e| Failure::Input(format!("writing CSV: {e}")))?;
    let above_third = curve.iter().all(|&(x, y)| y > x / 3.0);
    let increasing = curve.windows(2).all(|p| p[1].1 > p[0].1);
    let min_margin = curve.iter().map(|&(x, y)| y - x / 3.0).fold(f64::INFINITY, f64::min);
    report.results = json!({
        "points": curve.len(),
        "above_x_over_3": above_third,
        "min_margin_over_x_over_3": min_margin,
        "increasing": increasing,
        "last": curve.last(),
        "tol": 0.0,
    });
    Ok(Outcome { report, code: 0 })
}
