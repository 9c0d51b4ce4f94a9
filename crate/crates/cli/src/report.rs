use std::collections::BTreeMap;
use std::fmt::Write;

use serde_json::{json, Value};

use nmrgate::fmt::{degrees, num};
use nmrgate::gates::LoweredGate;
use nmrgate::pulse::{coupling_annotation, format_event, CouplingTable, PulseEvent};
use nmrgate::sim::magnetization;
use nmrgate::{Decomposition, DeviationMatrix, VerificationReport};

use crate::Format;

/// Below this magnitude numbers are printed as zero.
const DISPLAY_TOL: f64 = 1e-12;

fn snap(x: f64) -> f64 {
    if x.abs() < DISPLAY_TOL {
        0.0
    } else {
        x
    }
}

fn show(x: f64) -> String {
    num(snap(x))
}

/// Snapped and rounded to the same 12 significant digits as the text output.
fn round(x: f64) -> f64 {
    show(x).parse().unwrap_or(x)
}

fn deviation(x: f64) -> String {
    if x < DISPLAY_TOL {
        "0".into()
    } else {
        format!("{x:.2e}")
    }
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values always serialize");
    s.push('\n');
    s
}

fn event_json(e: &PulseEvent, table: Option<&CouplingTable>) -> Value {
    let mut v = match e {
        PulseEvent::RfPulse { targets, axis, flip } => json!({
            "kind": "pulse",
            "targets": targets,
            "axis": axis,
            "flip_deg": round(flip.to_degrees()),
        }),
        PulseEvent::ZRot { target, angle } => json!({
            "kind": "zrot",
            "target": target,
            "angle_deg": round(angle.to_degrees()),
        }),
        PulseEvent::Coupling { pair, angle } => json!({
            "kind": "couple",
            "pair": [pair.0, pair.1],
            "angle_deg": round(angle.to_degrees()),
        }),
        PulseEvent::Crush { orders } => json!({ "kind": "crush", "orders": orders }),
    };
    if let Some(note) = table.and_then(|t| coupling_annotation(e, t)) {
        v["note"] = Value::String(note.trim_start_matches("# ").to_string());
    }
    v
}

pub fn compile(n: usize, lowered: &[LoweredGate], table: Option<&CouplingTable>, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = format!("spins {n}\n");
            for g in lowered {
                let _ = writeln!(out, "# {} (global phase {})", g.gate, degrees(snap(g.global_phase)));
                for e in g.sequence.events() {
                    let _ = writeln!(out, "{}", format_event(e));
                    if let Some(note) = table.and_then(|t| coupling_annotation(e, t)) {
                        let _ = writeln!(out, "{note}");
                    }
                }
            }
            out
        }
        Format::Json => {
            let gates: Vec<Value> = lowered
                .iter()
                .map(|g| {
                    json!({
                        "gate": g.gate.to_string(),
                        "global_phase_deg": round(g.global_phase.to_degrees()),
                        "events": g.sequence.events().iter().map(|e| event_json(e, table)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(json!({ "spins": n, "gates": gates }))
        }
    }
}

/// Significant terms ordered by weight, then by the spins they act on.
fn terms(d: &Decomposition) -> Vec<(String, f64)> {
    let mut ts = d.significant(DISPLAY_TOL);
    ts.sort_by_key(|(t, _)| (t.weight(), t.active_spins(), t.factors().to_vec()));
    ts.into_iter().map(|(t, c)| (t.to_string(), c)).collect()
}

fn write_terms(out: &mut String, d: &Decomposition) {
    let ts = terms(d);
    if ts.is_empty() {
        out.push_str("  (none)\n");
    }
    for (name, c) in ts {
        let _ = writeln!(out, "  {name}: {}", show(c));
    }
}

pub fn state(init: &str, rho: &DeviationMatrix, format: Format) -> String {
    let n = rho.spins();
    let d = rho.decomposition();
    let pops = rho.populations();
    let mags: Vec<[f64; 3]> =
        (0..n).map(|s| magnetization(rho, s).expect("spin index is in range")).collect();
    match format {
        Format::Text => {
            let mut out = format!("spins {n}\ninit {init} ({})\npopulations:\n", rho.kind().label());
            for (i, p) in pops.iter().enumerate() {
                let _ = writeln!(out, "  |{i:0n$b}>: {}", show(*p));
            }
            out.push_str("product operators:\n");
            write_terms(&mut out, &d);
            out.push_str("magnetization:\n");
            for (s, m) in mags.iter().enumerate() {
                let _ = writeln!(out, "  q{s}: x={} y={} z={}", show(m[0]), show(m[1]), show(m[2]));
            }
            out
        }
        Format::Json => pretty(json!({
            "spins": n,
            "init": init,
            "kind": rho.kind().label(),
            "populations": pops.iter().map(|p| round(*p)).collect::<Vec<_>>(),
            "product_operators": terms_json(&d),
            "magnetization": mags.iter().map(|m| m.map(round)).collect::<Vec<_>>(),
        })),
    }
}

fn terms_json(d: &Decomposition) -> Value {
    Value::Object(terms(d).into_iter().map(|(k, c)| (k, json!(round(c)))).collect())
}

pub fn verification(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                let _ = writeln!(
                    out,
                    "{} {}: fidelity={} phase={} max-dev={}",
                    if r.equivalent { "ok  " } else { "FAIL" },
                    r.id,
                    show(r.fidelity),
                    degrees(snap(r.global_phase)),
                    deviation(r.max_deviation),
                );
            }
            out
        }
        Format::Json => {
            let rs: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "equivalent": r.equivalent,
                        "fidelity": round(r.fidelity),
                        "global_phase_deg": round(r.global_phase.to_degrees()),
                        "max_deviation": r.max_deviation,
                    })
                })
                .collect();
            pretty(Value::Array(rs))
        }
    }
}

pub fn decomposition(d: &Decomposition, orders: Option<&BTreeMap<i32, f64>>, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = format!("spins {}\nproduct operators:\n", d.spins());
            write_terms(&mut out, d);
            if let Some(hist) = orders {
                out.push_str("coherence orders:\n");
                if hist.is_empty() {
                    out.push_str("  (none)\n");
                }
                for (p, w) in hist {
                    let sign = if *p > 0 { "+" } else { "" };
                    let _ = writeln!(out, "  {sign}{p}: {}", show(*w));
                }
            }
            out
        }
        Format::Json => {
            let mut v = json!({ "spins": d.spins(), "product_operators": terms_json(d) });
            if let Some(hist) = orders {
                v["coherence_orders"] =
                    Value::Object(hist.iter().map(|(p, w)| (p.to_string(), json!(round(*w)))).collect());
            }
            pretty(v)
        }
    }
}
