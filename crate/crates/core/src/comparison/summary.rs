use serde::Serialize;

use super::{BetleyReport, Degree0Report, GlReport, LowDegReport, Status};

fn show(v: Option<usize>) -> String {
    v.map_or_else(|| "-".into(), |d| d.to_string())
}

fn show_vec(v: Option<&[usize]>) -> String {
    v.map_or_else(|| "-".into(), |d| format!("({})", d.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub label: String,
    pub left: String,
    pub right: String,
    pub status: Status,
}

impl From<&Degree0Report> for SummaryRow {
    fn from(r: &Degree0Report) -> SummaryRow {
        SummaryRow {
            label: format!("H_0({}(F_{}); {})", r.kind.name(), r.field, r.expr),
            left: show(r.group_value),
            right: show(r.functor_value),
            status: r.status,
        }
    }
}

impl From<&LowDegReport> for SummaryRow {
    fn from(r: &LowDegReport) -> SummaryRow {
        let last = r.functor_side.last().filter(|x| x.stable).map(|x| x.dims.as_slice());
        SummaryRow {
            label: format!("Tor_0..{}({} over F_{}; {})", r.max_degree, r.kind.name(), r.field, r.expr),
            left: show_vec(last),
            right: show_vec(r.predicted.as_deref()),
            status: r.status,
        }
    }
}

impl From<&GlReport> for SummaryRow {
    fn from(r: &GlReport) -> SummaryRow {
        SummaryRow {
            label: format!("H_0(GL(F_{}); {})", r.scan.field, r.scan.expr),
            left: show(r.scan.plateau_value()),
            right: if r.reduced { "0".into() } else { "control".into() },
            status: r.status,
        }
    }
}

impl SummaryRow {
    pub fn betley(r: &BetleyReport) -> [SummaryRow; 2] {
        [0, 1].map(|d| SummaryRow {
            label: format!("H_{d}(S_inf(F_{}); {})", r.field, r.module),
            left: show(r.group_plateau[d]),
            right: show(r.cross_effect_side[d]),
            status: r.status[d],
        })
    }
}

/// A fixed-width table: label, group or computed side, other side, status.
pub fn render_summary(rows: &[SummaryRow]) -> String {
    let w = rows.iter().map(|r| r.label.chars().count()).max().unwrap_or(0).max(5);
    let lw = rows.iter().map(|r| r.left.len()).max().unwrap_or(0).max(4);
    let rw = rows.iter().map(|r| r.right.len()).max().unwrap_or(0).max(5);
    let mut out = format!("{:<w$}  {:>lw$}  {:>rw$}  status\n", "row", "left", "right");
    for r in rows {
        let status = match r.status {
            Status::Agree => "agree",
            Status::Disagree => "DISAGREE",
            Status::Inconclusive => "inconclusive",
        };
        let pad = w - r.label.chars().count();
        out.push_str(&format!("{}{}  {:>lw$}  {:>rw$}  {status}\n", r.label, " ".repeat(pad), r.left, r.right));
    }
    out
}
