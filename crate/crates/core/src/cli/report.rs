//! Component tables and JSON documents.

use serde::Serialize;

use crate::certify::{ComponentReport, LfdReport};
use crate::quiver::{DimensionVector, Quiver, Weight};
use crate::semi_inv::BlockRecipe;

pub const SCHEMA: &str = "qlfd-report/1";

/// One row of a component table. `weight` is the true weight; the text table
/// prints its negative.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub label: String,
    pub degree: usize,
    pub root: Option<DimensionVector>,
    pub weight: Weight,
    pub neg_weight: Weight,
    pub multiplicity: i64,
    pub root_type: String,
    pub weight_type: String,
}

/// Tuple layout: a `;` sets off the last entry when the last node is a
/// branch node.
pub fn tuple(q: &Quiver, v: &[i64]) -> String {
    let branch_last = q.num_nodes() > 3 && {
        let last = q.num_nodes() - 1;
        q.arrows().iter().filter(|a| a.tail == last || a.head == last).count() >= 3
    } || ends_off_arm(q);
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    match (branch_last, parts.split_last()) {
        (true, Some((last, rest))) if !rest.is_empty() => format!("({};{last})", rest.join(",")),
        _ => format!("({})", parts.join(",")),
    }
}

/// The last node hangs off the interior of a path through all other nodes,
/// as in the D and E numbering.
fn ends_off_arm(q: &Quiver) -> bool {
    let n = q.num_nodes();
    if n < 4 || q.num_arrows() != n - 1 {
        return false;
    }
    let last = n - 1;
    let touching: Vec<usize> = q
        .arrows()
        .iter()
        .filter_map(|a| match (a.tail == last, a.head == last) {
            (true, false) => Some(a.head),
            (false, true) => Some(a.tail),
            _ => None,
        })
        .collect();
    if touching.len() != 1 {
        return false;
    }
    let deg = |x: usize| q.arrows().iter().filter(|a| a.tail == x || a.head == x).count();
    deg(touching[0]) == 3 && touching[0] != 0 && touching[0] != n - 2
}

/// Rows in presentation order: components matched by a recipe weight come
/// first, in recipe order and under the recipe label; the rest follow.
pub fn component_rows(q: &Quiver, report: &LfdReport, recipes: &[(String, String)]) -> Vec<TableRow> {
    let mut used = vec![false; report.components.len()];
    let mut rows = Vec::new();
    let row = |label: String, c: &ComponentReport| TableRow {
        label,
        degree: c.degree,
        root: Some(c.root.clone()),
        weight: c.weight.clone(),
        neg_weight: c.weight.neg(),
        multiplicity: c.multiplicity,
        root_type: c.root_type.clone(),
        weight_type: c.weight_type.clone(),
    };
    for (label, text) in recipes {
        let Ok(r) = BlockRecipe::parse(q, text) else { continue };
        let w = r.weight(q.num_nodes());
        if let Some(i) = report.components.iter().position(|c| c.weight == w) {
            if !used[i] {
                used[i] = true;
                rows.push(row(label.clone(), &report.components[i]));
            }
        }
    }
    for (i, c) in report.components.iter().enumerate() {
        if !used[i] {
            rows.push(row(format!("c^{}", tuple(q, c.root.entries())), c));
        }
    }
    rows
}

/// The closing `Δ` row: total degree and discriminant weight.
pub fn delta_row(report: &LfdReport) -> TableRow {
    TableRow {
        label: "Δ".into(),
        degree: report.dim_rep,
        root: None,
        weight: report.discriminant_weight.clone(),
        neg_weight: report.discriminant_weight.neg(),
        multiplicity: 1,
        root_type: String::new(),
        weight_type: String::new(),
    }
}

fn pad(s: &str, w: usize) -> String {
    let n = s.chars().count();
    format!("{s}{}", " ".repeat(w.saturating_sub(n)))
}

/// Fixed-width table with columns Polynomial, Deg, Root⊥d, −Weight, Type.
pub fn render_table(q: &Quiver, rows: &[TableRow]) -> String {
    let show_exp = rows.iter().any(|r| r.multiplicity != 1);
    let mut header = vec!["Polynomial", "Deg", "Root⊥d", "−Weight", "Type (Root, Weight)"];
    if show_exp {
        header.push("Exp");
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut c = vec![
                r.label.clone(),
                r.degree.to_string(),
                r.root.as_ref().map(|d| tuple(q, d.entries())).unwrap_or_default(),
                tuple(q, r.neg_weight.entries()),
                if r.root_type.is_empty() { String::new() } else { format!("({}, {})", r.root_type, r.weight_type) },
            ];
            if show_exp {
                c.push(r.multiplicity.to_string());
            }
            c
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|j| cells.iter().map(|c| c[j].chars().count()).chain([header[j].chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |c: &[String]| -> String {
        c.iter().enumerate().map(|(j, s)| pad(s, widths[j])).collect::<Vec<_>>().join(" | ").trim_end().to_string()
    };
    let mut out = String::new();
    out.push_str(&line(&header.iter().map(|s| s.to_string()).collect::<Vec<_>>()));
    out.push('\n');
    out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
    out.push('\n');
    for c in &cells {
        out.push_str(&line(c));
        out.push('\n');
    }
    out
}

/// Versioned JSON envelope shared by every command.
#[derive(Serialize)]
pub struct Document<'a, T: Serialize> {
    pub schema: &'static str,
    pub command: &'a str,
    pub input: &'a str,
    pub body: T,
}

pub fn to_json<T: Serialize>(command: &str, input: &str, body: T) -> String {
    let doc = Document { schema: SCHEMA, command, input, body };
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}
