//! Text exporters: CSV for cost tables, predictions, spectral summaries,
//! correlation matrices, and trial schedules; JSON for structured outputs;
//! DOT for qualitative prediction figures. Graph identifiers are graph6
//! strings (printable ASCII >= 63) or plain names, so no CSV quoting is
//! needed anywhere.

use std::fmt::Write as _;

use crate::analysis::{CorrelationMatrix, PredictionVector, TwoStageFit};
use crate::graph::Graph;
use crate::search::AlgCostTable;
use crate::spectral::spectral_decomposition;
use crate::stimuli::{TrialKind, TrialSchedule};

/// One row per ordered state pair; the diagonal is omitted (no task).
pub fn cost_table_csv(graph_id: &str, table: &AlgCostTable) -> String {
    let mut out = String::from("graph_id,alg,s,z,reward,samples,seed\n");
    for s in 0..table.n() {
        for z in 0..table.n() {
            if s == z {
                continue;
            }
            let _ = writeln!(
                out,
                "{graph_id},{},{s},{z},{},{},{}",
                table.alg.tag(),
                table.reward(s, z),
                table.samples,
                table.seed
            );
        }
    }
    out
}

/// One row per state per vector.
pub fn predictions_csv(preds: &[PredictionVector]) -> String {
    let mut out = String::from("graph_id,model,state,value\n");
    for p in preds {
        for (s, v) in p.values.iter().enumerate() {
            let _ = writeln!(out, "{},{},{s},{v}", p.graph_id, p.model.tag());
        }
    }
    out
}

pub fn predictions_json(preds: &[PredictionVector]) -> String {
    serde_json::to_string_pretty(preds).expect("prediction vectors serialize")
}

/// DOT rendering with nodes filled on a grayscale ramp by normalized
/// prediction (white = lowest, dark = highest). Constant vectors render
/// mid-gray.
pub fn predictions_dot(g: &Graph, pred: &PredictionVector) -> String {
    let lo = pred.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = pred.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out = String::from("graph prediction {\n  node [style=filled, fontcolor=gray25];\n");
    for (s, &v) in pred.values.iter().enumerate() {
        let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
        let shade = (95.0 - 70.0 * t).round() as u32;
        let _ = writeln!(out, "  {s} [fillcolor=gray{shade}, label=\"{s}\\n{v:.3}\"];");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

/// Summary row per graph for the spectral-gap histogram.
pub fn spectral_csv(rows: &[(String, Graph)]) -> crate::error::Result<String> {
    let mut out = String::from("graph_id,lambda2,gap,degenerate\n");
    for (id, g) in rows {
        let sd = spectral_decomposition(g)?;
        let _ = writeln!(
            out,
            "{id},{},{},{}",
            sd.lambda2(),
            1.0 - sd.lambda2(),
            sd.degenerate_lambda2()
        );
    }
    Ok(out)
}

/// Upper-triangular cells inclusive of the diagonal, one row per pair.
pub fn correlation_csv(m: &CorrelationMatrix) -> String {
    let mut out = String::from("model_i,model_j,mean_r,graphs\n");
    for i in 0..m.models.len() {
        for j in i..m.models.len() {
            let (r, count) = m.get(i, j);
            let _ = writeln!(out, "{},{},{r},{count}", m.models[i].tag(), m.models[j].tag());
        }
    }
    out
}

pub fn correlation_json(m: &CorrelationMatrix) -> String {
    serde_json::to_string_pretty(m).expect("correlation matrix serializes")
}

/// Fit records as JSON, one object per (graph, model).
pub fn two_stage_json(fits: &[(String, String, TwoStageFit, usize)]) -> String {
    let records: Vec<serde_json::Value> = fits
        .iter()
        .map(|(graph_id, model, fit, trials)| {
            serde_json::json!({
                "graph_id": graph_id,
                "model": model,
                "beta1": fit.beta1,
                "beta2": fit.beta2,
                "loglik": fit.loglik,
                "trials": trials,
            })
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("fit records serialize")
}

/// One row per trial, in session order.
pub fn schedule_csv(schedule: &TrialSchedule) -> String {
    let mut out = String::from("trial,kind,start,goal\n");
    for (i, (kind, task)) in schedule.trials.iter().enumerate() {
        let kind = match kind {
            TrialKind::Long => "long",
            TrialKind::Filler => "filler",
        };
        let _ = writeln!(out, "{i},{kind},{},{}", task.start, task.goal);
    }
    out
}
