//! Labelled transition traces with per-step snapshots, their line-delimited
//! record format, and a human-readable table rendering.
//!
//! The record format is one JSON object per line: a header (machine,
//! template, seed, fuel, initial term), one record per step (label, job,
//! redex address, optional snapshot), and a trailer (outcome, counters,
//! final term). Terms, addresses and job names are serialized as their
//! printed forms.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::mam::Label;
use crate::parse::parse;
use crate::pools::TemplateKind;
use crate::syntax::{Address, HoleName, Term};

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Term, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(D::Error::custom)
    }
}

impl Serialize for Address {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Address {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Address, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

impl Serialize for HoleName {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HoleName {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<HoleName, D::Error> {
        let text = String::deserialize(d)?;
        let id = text
            .strip_prefix('α')
            .and_then(|digits| digits.parse().ok())
            .ok_or_else(|| D::Error::custom(format!("bad job name {text:?}")))?;
        Ok(HoleName(id))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MachineKind {
    Mam,
    Bmam,
    Exam,
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineKind::Mam => write!(f, "mam"),
            MachineKind::Bmam => write!(f, "bmam"),
            MachineKind::Exam => write!(f, "exam"),
        }
    }
}

impl std::str::FromStr for MachineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<MachineKind, String> {
        match s {
            "mam" => Ok(MachineKind::Mam),
            "bmam" => Ok(MachineKind::Bmam),
            "exam" => Ok(MachineKind::Exam),
            _ => Err(format!("unknown machine {s:?} (expected mam, bmam or exam)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Final,
    FuelExhausted,
}

/// How much of a run the trace records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Detail {
    None,
    #[default]
    Labels,
    Full,
}

impl std::str::FromStr for Detail {
    type Err = String;

    fn from_str(s: &str) -> Result<Detail, String> {
        match s {
            "none" => Ok(Detail::None),
            "labels" => Ok(Detail::Labels),
            "full" => Ok(Detail::Full),
            _ => Err(format!("unknown trace detail {s:?}")),
        }
    }
}

/// Rendered state components, in machine-specific field order.
pub type Snapshot = Vec<(String, String)>;

/// Everything needed to run a machine on a term. The template only
/// matters for the job-pool machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub machine: MachineKind,
    pub template: TemplateKind,
    pub seed: u64,
    pub fuel: u64,
    pub trace_detail: Detail,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            machine: MachineKind::Exam,
            template: TemplateKind::Stack,
            seed: 0,
            fuel: 100_000,
            trace_detail: Detail::Labels,
        }
    }
}

impl RunConfig {
    pub fn execute(&self, t: &Term) -> Trace {
        let snapshots = self.trace_detail == Detail::Full;
        match self.machine {
            MachineKind::Mam => crate::mam::run(t, self.fuel, snapshots).0,
            MachineKind::Bmam => crate::bmam::run(t, self.fuel, snapshots).0,
            MachineKind::Exam => {
                crate::exam::run(t, self.template, self.seed, self.fuel, snapshots).0
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub job: Option<HoleName>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "addr")]
    pub redex_addr: Option<Address>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<Snapshot>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Header {
    machine: MachineKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    template: Option<TemplateKind>,
    seed: u64,
    fuel: u64,
    initial: Term,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Trailer {
    outcome: Outcome,
    beta: u64,
    overhead: u64,
    #[serde(rename = "final")]
    final_term: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    snapshot: Option<Snapshot>,
}

/// A run: header data, one step per transition, counters and outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub machine: MachineKind,
    pub template: Option<TemplateKind>,
    pub seed: u64,
    pub fuel: u64,
    pub initial: Term,
    pub steps: Vec<TraceStep>,
    pub beta_count: u64,
    pub overhead_count: u64,
    pub outcome: Outcome,
    pub final_term: String,
    pub final_snapshot: Option<Snapshot>,
}

impl Trace {
    fn new(machine: MachineKind, template: Option<TemplateKind>, seed: u64, fuel: u64, initial: Term) -> Trace {
        Trace {
            machine,
            template,
            seed,
            fuel,
            initial,
            steps: Vec::new(),
            beta_count: 0,
            overhead_count: 0,
            outcome: Outcome::FuelExhausted,
            final_term: String::new(),
            final_snapshot: None,
        }
    }

    pub fn new_mam(initial: Term, fuel: u64) -> Trace {
        Trace::new(MachineKind::Mam, None, 0, fuel, initial)
    }

    pub fn new_bmam(initial: Term, fuel: u64) -> Trace {
        Trace::new(MachineKind::Bmam, None, 0, fuel, initial)
    }

    pub fn new_exam(initial: Term, template: TemplateKind, seed: u64, fuel: u64) -> Trace {
        Trace::new(MachineKind::Exam, Some(template), seed, fuel, initial)
    }

    pub fn push(&mut self, step: TraceStep) {
        if step.label.is_beta() {
            self.beta_count += 1;
        } else {
            self.overhead_count += 1;
        }
        self.steps.push(step);
    }

    pub fn finish(&mut self, outcome: Outcome, final_term: String, snapshot: Option<Snapshot>) {
        self.outcome = outcome;
        self.final_term = final_term;
        self.final_snapshot = snapshot;
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Line-delimited records: header, one line per step, trailer.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        let header = Header {
            machine: self.machine,
            template: self.template,
            seed: self.seed,
            fuel: self.fuel,
            initial: self.initial.clone(),
        };
        out.push_str(&serde_json::to_string(&header).expect("header serializes"));
        out.push('\n');
        for step in &self.steps {
            out.push_str(&serde_json::to_string(step).expect("step serializes"));
            out.push('\n');
        }
        let trailer = Trailer {
            outcome: self.outcome,
            beta: self.beta_count,
            overhead: self.overhead_count,
            final_term: self.final_term.clone(),
            snapshot: self.final_snapshot.clone(),
        };
        out.push_str(&serde_json::to_string(&trailer).expect("trailer serializes"));
        out.push('\n');
        out
    }

    pub fn from_records(input: &str) -> Result<Trace, String> {
        let mut lines = input.lines().filter(|l| !l.trim().is_empty());
        let header: Header = serde_json::from_str(
            lines.next().ok_or_else(|| "empty trace".to_string())?,
        )
        .map_err(|e| format!("bad header: {e}"))?;
        let mut trace = Trace::new(header.machine, header.template, header.seed, header.fuel, header.initial);
        let rest: Vec<&str> = lines.collect();
        let (trailer_line, step_lines) = rest
            .split_last()
            .ok_or_else(|| "missing trailer".to_string())?;
        for line in step_lines {
            let step: TraceStep =
                serde_json::from_str(line).map_err(|e| format!("bad step: {e}"))?;
            trace.push(step);
        }
        let trailer: Trailer =
            serde_json::from_str(trailer_line).map_err(|e| format!("bad trailer: {e}"))?;
        if trailer.beta != trace.beta_count || trailer.overhead != trace.overhead_count {
            return Err(format!(
                "trailer counters ({}, {}) disagree with steps ({}, {})",
                trailer.beta, trailer.overhead, trace.beta_count, trace.overhead_count
            ));
        }
        trace.finish(trailer.outcome, trailer.final_term, trailer.snapshot);
        Ok(trace)
    }

    /// A table in the machine's row format: state columns, then the
    /// transition taken from that state and the job performing it.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let header = match self.template {
            Some(template) => format!(
                "-- {} ({}) seed {} fuel {} on {}",
                self.machine, template, self.seed, self.fuel, self.initial
            ),
            None => format!("-- {} fuel {} on {}", self.machine, self.fuel, self.initial),
        };
        out.push_str(&header);
        out.push('\n');
        for step in &self.steps {
            let mut row = String::new();
            if let Some(snapshot) = &step.snapshot {
                let cells: Vec<&str> = snapshot.iter().map(|(_, v)| v.as_str()).collect();
                row.push_str(&cells.join(" | "));
                row.push_str(" || ");
            }
            row.push_str(&step.label.to_string());
            if let Some(job) = &step.job {
                row.push_str(&format!(" {job}"));
            }
            if let Some(addr) = &step.redex_addr {
                row.push_str(&format!(" @{addr}"));
            }
            out.push_str(&row);
            out.push('\n');
        }
        if let Some(snapshot) = &self.final_snapshot {
            let cells: Vec<&str> = snapshot.iter().map(|(_, v)| v.as_str()).collect();
            out.push_str(&cells.join(" | "));
            out.push('\n');
        }
        let outcome = match self.outcome {
            Outcome::Final => "final",
            Outcome::FuelExhausted => "fuel exhausted",
        };
        out.push_str(&format!(
            "-- {}: {}  (beta {}, overhead {})\n",
            outcome, self.final_term, self.beta_count, self.overhead_count
        ));
        out
    }
}
