//! Time-ordered pulse-sequence IR.
//!
//! Events carry rotation angles rather than durations. Index 0 of a sequence
//! executes first, so the synthesized unitary is `U_k ··· U_2 U_1`.
//!
//! Text form, one event per line after a `spins <n>` header:
//!
//! ```text
//! spins 2
//! pulse q1 axis=y flip=-90
//! zrot q0 angle=90
//! couple q0 q1 angle=-90
//! crush orders=-2,0,2
//! ```
//!
//! Angles are written in degrees. `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fmt::{degrees, num};
use crate::operator::{
    check_index, check_spins, coupling_unitary, embed_single, rotation_2x2, rotation_unitary,
    z_rotation_unitary, Matrix, Unitary,
};

const AXIS_PARSE_TOL: f64 = 1e-6;

pub const X: [f64; 3] = [1.0, 0.0, 0.0];
pub const Y: [f64; 3] = [0.0, 1.0, 0.0];
pub const NEG_X: [f64; 3] = [-1.0, 0.0, 0.0];
pub const NEG_Y: [f64; 3] = [0.0, -1.0, 0.0];

#[derive(Debug, Clone, PartialEq)]
pub enum PulseEvent {
    /// Identical rotations `exp(-i·flip·(axis·I))` on every target spin.
    RfPulse { targets: Vec<usize>, axis: [f64; 3], flip: f64 },
    /// `exp(-i·angle·Iz)` on one spin.
    ZRot { target: usize, angle: f64 },
    /// `exp(-i·angle·2IzSz)` on a spin pair.
    Coupling { pair: (usize, usize), angle: f64 },
    /// Non-unitary coherence-order filter; only the simulator accepts it.
    Crush { orders: BTreeSet<i32> },
}

impl PulseEvent {
    pub fn rf(target: usize, axis: [f64; 3], flip: f64) -> Self {
        PulseEvent::RfPulse { targets: vec![target], axis, flip }
    }

    pub fn zrot(target: usize, angle: f64) -> Self {
        PulseEvent::ZRot { target, angle }
    }

    pub fn coupling(a: usize, b: usize, angle: f64) -> Self {
        PulseEvent::Coupling { pair: (a, b), angle }
    }

    pub fn crush<I: IntoIterator<Item = i32>>(orders: I) -> Self {
        PulseEvent::Crush { orders: orders.into_iter().collect() }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            PulseEvent::RfPulse { targets, axis, .. } => {
                if targets.is_empty() {
                    return Err(Error::EmptyTargets);
                }
                for &t in targets {
                    check_index(t, n)?;
                }
                let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > 1e-12 {
                    return Err(Error::NonUnitAxis(norm));
                }
                Ok(())
            }
            PulseEvent::ZRot { target, .. } => check_index(*target, n),
            PulseEvent::Coupling { pair: (a, b), .. } => {
                check_index(*a, n)?;
                check_index(*b, n)?;
                if a == b {
                    return Err(Error::SamePair(*a));
                }
                Ok(())
            }
            PulseEvent::Crush { .. } => Ok(()),
        }
    }

    /// Unitary of a single event on `n` spins.
    pub fn unitary(&self, n: usize) -> Result<Unitary> {
        match self {
            PulseEvent::RfPulse { targets, axis, flip } => {
                if targets.is_empty() {
                    return Err(Error::EmptyTargets);
                }
                let mut u = Unitary::identity(n)?;
                for &t in targets {
                    u = u.then(&rotation_unitary(t, *axis, *flip, n)?)?;
                }
                Ok(u)
            }
            PulseEvent::ZRot { target, angle } => z_rotation_unitary(*target, *angle, n),
            PulseEvent::Coupling { pair, angle } => coupling_unitary(*pair, *angle, n),
            PulseEvent::Crush { .. } => Err(Error::CrushInSequence),
        }
    }

    /// Structural equality with angles and axis components compared to `tol`.
    pub fn approx_eq(&self, other: &PulseEvent, tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= tol;
        match (self, other) {
            (
                PulseEvent::RfPulse { targets: t1, axis: a1, flip: f1 },
                PulseEvent::RfPulse { targets: t2, axis: a2, flip: f2 },
            ) => t1 == t2 && a1.iter().zip(a2).all(|(x, y)| close(*x, *y)) && close(*f1, *f2),
            (PulseEvent::ZRot { target: t1, angle: a1 }, PulseEvent::ZRot { target: t2, angle: a2 }) => {
                t1 == t2 && close(*a1, *a2)
            }
            (PulseEvent::Coupling { pair: p1, angle: a1 }, PulseEvent::Coupling { pair: p2, angle: a2 }) => {
                p1 == p2 && close(*a1, *a2)
            }
            (PulseEvent::Crush { orders: o1 }, PulseEvent::Crush { orders: o2 }) => o1 == o2,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    n: usize,
    events: Vec<PulseEvent>,
}

impl PulseSequence {
    pub fn new(n: usize) -> Result<Self> {
        check_spins(n)?;
        Ok(PulseSequence { n, events: Vec::new() })
    }

    pub fn from_events(n: usize, events: Vec<PulseEvent>) -> Result<Self> {
        let mut seq = Self::new(n)?;
        for e in events {
            seq.push(e)?;
        }
        Ok(seq)
    }

    pub fn spins(&self) -> usize {
        self.n
    }

    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn push(&mut self, event: PulseEvent) -> Result<()> {
        event.validate(self.n)?;
        self.events.push(event);
        Ok(())
    }

    /// Appends `later` after this sequence in time.
    pub fn append(&mut self, later: &PulseSequence) -> Result<()> {
        if later.n != self.n {
            return Err(Error::DimensionMismatch(1 << self.n, 1 << later.n));
        }
        self.events.extend(later.events.iter().cloned());
        Ok(())
    }

    pub fn has_crush(&self) -> bool {
        self.events.iter().any(|e| matches!(e, PulseEvent::Crush { .. }))
    }
}

/// Product of event unitaries in time order.
pub fn sequence_unitary(seq: &PulseSequence) -> Result<Unitary> {
    if seq.has_crush() {
        return Err(Error::CrushInSequence);
    }
    seq.events.iter().try_fold(Unitary::identity(seq.n)?, |acc, e| acc.then(&e.unitary(seq.n)?))
}

/// The three pulses `(−x, 90°) (y, θ) (x, 90°)` that realize `exp(−iθIz)`.
pub fn composite_z(target: usize, angle: f64) -> [PulseEvent; 3] {
    [
        PulseEvent::rf(target, NEG_X, FRAC_PI_2),
        PulseEvent::rf(target, Y, angle),
        PulseEvent::rf(target, X, FRAC_PI_2),
    ]
}

fn composite_z_2x2(angle: f64) -> Matrix {
    composite_z(0, angle).iter().fold(Matrix::identity(2, 2), |acc, e| match e {
        PulseEvent::RfPulse { axis, flip, .. } => rotation_2x2(*axis, *flip) * acc,
        _ => unreachable!(),
    })
}

/// Replaces every `ZRot` by its composite three-pulse form.
pub fn expand_composite_z(seq: &PulseSequence) -> PulseSequence {
    let mut events = Vec::with_capacity(seq.events.len());
    for e in &seq.events {
        match e {
            PulseEvent::ZRot { target, angle } => {
                debug_assert!({
                    let want = embed_single(&rotation_2x2([0.0, 0.0, 1.0], *angle), 0, 1);
                    let got = composite_z_2x2(*angle);
                    crate::operator::phase_match(&got, &want, 1e-10).map(|m| m.equivalent).unwrap_or(false)
                });
                events.extend(composite_z(*target, *angle));
            }
            other => events.push(other.clone()),
        }
    }
    PulseSequence { n: seq.n, events }
}

/// Scalar couplings in Hz, used only to annotate serialized coupling events with
/// free-evolution delays `t = |angle| / (π·J)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CouplingTable {
    hz: BTreeMap<(usize, usize), f64>,
}

impl CouplingTable {
    pub fn insert(&mut self, a: usize, b: usize, j_hz: f64) {
        self.hz.insert((a.min(b), a.max(b)), j_hz);
    }

    pub fn get(&self, a: usize, b: usize) -> Option<f64> {
        self.hz.get(&(a.min(b), a.max(b))).copied()
    }

    /// Parses lines of the form `q0 q1 <J in Hz>`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = CouplingTable::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |reason: String| Error::Parse { line: line_no, reason };
            if toks.len() != 3 {
                return Err(err("expected 'q<i> q<j> <J Hz>'".into()));
            }
            let a = parse_qubit(toks[0]).map_err(err)?;
            let b = parse_qubit(toks[1]).map_err(err)?;
            let j: f64 = toks[2].parse().map_err(|_| err(format!("bad coupling constant '{}'", toks[2])))?;
            if !(j.is_finite() && j > 0.0) {
                return Err(err(format!("coupling constant must be positive, got {j}")));
            }
            table.insert(a, b, j);
        }
        Ok(table)
    }
}

fn format_axis(axis: &[f64; 3]) -> String {
    match *axis {
        X => "x".into(),
        Y => "y".into(),
        NEG_X => "-x".into(),
        NEG_Y => "-y".into(),
        [a, b, c] => format!("({a},{b},{c})"),
    }
}

/// One event as a text line (no trailing newline).
pub fn format_event(e: &PulseEvent) -> String {
    match e {
        PulseEvent::RfPulse { targets, axis, flip } => {
            let qs: Vec<String> = targets.iter().map(|t| format!("q{t}")).collect();
            format!("pulse {} axis={} flip={}", qs.join(","), format_axis(axis), degrees(*flip))
        }
        PulseEvent::ZRot { target, angle } => format!("zrot q{target} angle={}", degrees(*angle)),
        PulseEvent::Coupling { pair: (a, b), angle } => {
            format!("couple q{a} q{b} angle={}", degrees(*angle))
        }
        PulseEvent::Crush { orders } => {
            let os: Vec<String> = orders.iter().map(|o| o.to_string()).collect();
            format!("crush orders={}", os.join(","))
        }
    }
}

/// Delay annotation for a coupling event, if the table knows the pair.
pub fn coupling_annotation(e: &PulseEvent, table: &CouplingTable) -> Option<String> {
    let PulseEvent::Coupling { pair: (a, b), angle } = e else {
        return None;
    };
    let j = table.get(*a, *b)?;
    let delay = angle.abs() / (std::f64::consts::PI * j);
    let mut note = format!("# J={} Hz delay={} s", num(j), num(delay));
    if *angle < 0.0 {
        note.push_str(" (negative angle: needs a refocusing construction)");
    }
    Some(note)
}

pub fn serialize(seq: &PulseSequence) -> String {
    serialize_annotated(seq, None)
}

pub fn serialize_annotated(seq: &PulseSequence, table: Option<&CouplingTable>) -> String {
    let mut out = format!("spins {}\n", seq.n);
    for e in &seq.events {
        let _ = writeln!(out, "{}", format_event(e));
        if let Some(note) = table.and_then(|t| coupling_annotation(e, t)) {
            let _ = writeln!(out, "{note}");
        }
    }
    out
}

pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub(crate) fn parse_qubit(tok: &str) -> std::result::Result<usize, String> {
    tok.strip_prefix('q')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| format!("expected qubit like 'q0', got '{tok}'"))
}

fn parse_angle(tok: &str) -> std::result::Result<f64, String> {
    let deg: f64 = tok.parse().map_err(|_| format!("bad angle '{tok}'"))?;
    if !deg.is_finite() {
        return Err(format!("bad angle '{tok}'"));
    }
    Ok(deg.to_radians())
}

fn parse_axis(tok: &str) -> std::result::Result<[f64; 3], String> {
    match tok {
        "x" => return Ok(X),
        "y" => return Ok(Y),
        "-x" => return Ok(NEG_X),
        "-y" => return Ok(NEG_Y),
        _ => {}
    }
    let inner =
        tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(|| format!("bad axis '{tok}'"))?;
    let comps: Vec<f64> = inner
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| format!("bad axis '{tok}'"))?;
    let [a, b, c] = comps[..] else {
        return Err(format!("axis needs three components, got '{tok}'"));
    };
    let norm = (a * a + b * b + c * c).sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > AXIS_PARSE_TOL {
        return Err(format!("axis '{tok}' is not a unit vector"));
    }
    if norm == 1.0 {
        Ok([a, b, c])
    } else {
        Ok([a / norm, b / norm, c / norm])
    }
}

/// Removes whitespace inside parentheses so tuple axes form one token.
fn squash_parens(line: &str) -> String {
    let mut depth = 0i32;
    line.chars()
        .filter(|ch| {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            !(depth > 0 && ch.is_whitespace())
        })
        .collect()
}

fn keyed<'a>(tok: &'a str, key: &str) -> std::result::Result<&'a str, String> {
    tok.strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| format!("expected '{key}=...', got '{tok}'"))
}

fn parse_event(toks: &[&str]) -> std::result::Result<PulseEvent, String> {
    let arity = |k: usize| {
        if toks.len() == k {
            Ok(())
        } else {
            Err(format!("'{}' takes {} fields, got {}", toks[0], k - 1, toks.len() - 1))
        }
    };
    match toks[0] {
        "pulse" => {
            arity(4)?;
            let targets = toks[1].split(',').map(parse_qubit).collect::<std::result::Result<Vec<_>, _>>()?;
            let axis = parse_axis(keyed(toks[2], "axis")?)?;
            let flip = parse_angle(keyed(toks[3], "flip")?)?;
            Ok(PulseEvent::RfPulse { targets, axis, flip })
        }
        "zrot" => {
            arity(3)?;
            Ok(PulseEvent::zrot(parse_qubit(toks[1])?, parse_angle(keyed(toks[2], "angle")?)?))
        }
        "couple" => {
            arity(4)?;
            Ok(PulseEvent::coupling(
                parse_qubit(toks[1])?,
                parse_qubit(toks[2])?,
                parse_angle(keyed(toks[3], "angle")?)?,
            ))
        }
        "crush" => {
            arity(2)?;
            let orders = keyed(toks[1], "orders")?
                .split(',')
                .map(|s| s.parse::<i32>().map_err(|_| format!("bad coherence order '{s}'")))
                .collect::<std::result::Result<BTreeSet<_>, _>>()?;
            Ok(PulseEvent::Crush { orders })
        }
        other => Err(format!("unknown event '{other}'")),
    }
}

pub fn parse(text: &str) -> Result<PulseSequence> {
    let mut seq: Option<PulseSequence> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = squash_parens(strip_comment(raw));
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let err = |reason: String| Error::Parse { line: line_no, reason };
        match seq.as_mut() {
            None => {
                if toks.len() != 2 || toks[0] != "spins" {
                    return Err(err("expected header 'spins <n>'".into()));
                }
                let n: usize = toks[1].parse().map_err(|_| err(format!("bad spin count '{}'", toks[1])))?;
                seq = Some(PulseSequence::new(n).map_err(|e| err(e.to_string()))?);
            }
            Some(s) => {
                let event = parse_event(&toks).map_err(err)?;
                s.push(event).map_err(|e| err(e.to_string()))?;
            }
        }
    }
    seq.ok_or(Error::Parse { line: 0, reason: "missing 'spins <n>' header".into() })
}
