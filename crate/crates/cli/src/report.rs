//! Run reports and their table, CSV and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write;

use homleib_core::scalar::to_text;
use homleib_core::{Scalar, Violation, ViolationKind};
use serde::Serialize;

use crate::doc::{Input, Sparse};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Obstructed,
    /// The coboundary under the selected convention does not square to zero.
    ConventionFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            _ => 1,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Obstructed => "OBSTRUCTED",
            Status::ConventionFailure => "CONVENTION FAILURE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationRecord {
    pub identity: String,
    pub tuple: Vec<String>,
    pub residual: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<ViolationRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedTensor {
    pub name: String,
    pub entries: Sparse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub convention: String,
    pub inputs: Vec<Input>,
    pub status: Status,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tensors: Vec<NamedTensor>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: Vec<String>, convention: String) -> Self {
        Report { command, convention, inputs: Vec::new(), status: Status::Pass, checks: Vec::new(), tables: Vec::new(), tensors: Vec::new(), notes: Vec::new() }
    }

    /// Adds a check and downgrades the status if it failed.
    pub fn check(&mut self, check: Check) {
        if !check.passed && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        }
    }

    fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "homleib {}", self.command.join(" "));
        let _ = writeln!(s, "convention  {}", self.convention);
        for i in &self.inputs {
            let _ = writeln!(s, "input       {:<15} {}  sha256:{}", i.role, i.path, i.sha256);
        }
        let _ = writeln!(s, "status      {}", self.status.label());
        if !self.checks.is_empty() {
            let _ = writeln!(s, "\nchecks");
            let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &self.checks {
                let verdict = if c.passed { "pass" } else { "FAIL" };
                let _ = write!(s, "  {:<width$}  {verdict}", c.name);
                if let Some(d) = &c.detail {
                    let _ = write!(s, "  {d}");
                }
                s.push('\n');
                for v in &c.violations {
                    let _ = writeln!(s, "      {} ({}) -> {}", v.identity, v.tuple.join(", "), combination(&v.residual));
                }
            }
        }
        for t in &self.tables {
            let _ = writeln!(s, "\n{}", t.title);
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|j| t.rows.iter().map(|r| r[j].len()).chain([t.columns[j].len()]).max().unwrap_or(0))
                .collect();
            for row in core::iter::once(&t.columns).chain(&t.rows) {
                let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                let _ = writeln!(s, "  {}", cells.join("  ").trim_end());
            }
        }
        for t in &self.tensors {
            let _ = writeln!(s, "\n{}", t.name);
            if t.entries.is_empty() {
                let _ = writeln!(s, "  0");
            }
            for (k, v) in &t.entries {
                let _ = writeln!(s, "  [{k}] = {}", combination(v));
            }
        }
        if !self.notes.is_empty() {
            s.push('\n');
            for n in &self.notes {
                let _ = writeln!(s, "note: {n}");
            }
        }
        s
    }

    /// Long format: `section,key,field,value`.
    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut put = |a: &str, b: &str, c: &str, d: &str| w.write_record([a, b, c, d]).expect("in-memory writer");
        put("section", "key", "field", "value");
        put("meta", "command", "", &self.command.join(" "));
        put("meta", "convention", "", &self.convention);
        put("meta", "status", "", self.status.label());
        for i in &self.inputs {
            put("input", &i.role, &i.path, &i.sha256);
        }
        for c in &self.checks {
            put("check", &c.name, "passed", if c.passed { "true" } else { "false" });
            if let Some(d) = &c.detail {
                put("check", &c.name, "detail", d);
            }
            for v in &c.violations {
                put("violation", &c.name, &format!("{} ({})", v.identity, v.tuple.join(",")), &combination(&v.residual));
            }
        }
        for t in &self.tables {
            for row in &t.rows {
                for (j, col) in t.columns.iter().enumerate().skip(1) {
                    put(&t.title, &row[0], col, &row[j]);
                }
            }
        }
        for t in &self.tensors {
            for (k, v) in &t.entries {
                put("tensor", &t.name, k, &combination(v));
            }
        }
        for (i, n) in self.notes.iter().enumerate() {
            put("note", &i.to_string(), "", n);
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

/// `"e - 3/2 f"` from a sparse vector; `"0"` when empty.
pub fn combination(v: &BTreeMap<String, String>) -> String {
    let mut s = String::new();
    for (label, c) in v {
        let (neg, abs) = match c.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, c.as_str()),
        };
        let coeff = if abs == "1" { String::new() } else { format!("{abs} ") };
        if s.is_empty() {
            let _ = write!(s, "{}{coeff}{label}", if neg { "-" } else { "" });
        } else {
            let _ = write!(s, " {} {coeff}{label}", if neg { "-" } else { "+" });
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn sparse_vector(v: &[Scalar], labels: &[String]) -> BTreeMap<String, String> {
    v.iter().zip(labels).filter(|(c, _)| c != &&homleib_core::scalar::zero()).map(|(c, l)| (l.clone(), to_text(c))).collect()
}

fn identity_name(kind: ViolationKind) -> String {
    match kind {
        ViolationKind::HomLeibniz { module_slot: None } => "hom-leibniz".into(),
        ViolationKind::HomLeibniz { module_slot: Some(q) } => format!("hom-leibniz (module in position {})", q + 1),
        ViolationKind::Multiplicative => "multiplicative".into(),
        ViolationKind::BracketPreservation => "bracket".into(),
        ViolationKind::Intertwining => "twist".into(),
    }
}

/// A check built from violations; `slot_labels(kind, position)` names the
/// basis vectors of each tuple entry.
pub fn violation_check(
    name: &str,
    violations: &[Violation],
    slot_labels: impl Fn(ViolationKind, usize) -> Vec<String>,
    output: impl Fn(ViolationKind) -> Vec<String>,
) -> Check {
    let records: Vec<ViolationRecord> = violations
        .iter()
        .map(|v| ViolationRecord {
            identity: identity_name(v.kind),
            tuple: v.tuple.iter().enumerate().map(|(pos, &i)| slot_labels(v.kind, pos)[i].clone()).collect(),
            residual: sparse_vector(&v.residual, &output(v.kind)),
        })
        .collect();
    let detail = (!records.is_empty()).then(|| format!("{} violated tuples", records.len()));
    Check { name: name.to_string(), passed: records.is_empty(), detail, violations: records }
}
