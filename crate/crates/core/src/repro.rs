//! The three-member worked example: majority voting on the subjunctive
//! conditional agenda, everyone learns `p`, and the group's revised view
//! differs from the view it reaches by voting on revised judgments.

use crate::aggregation::make_rule;
use crate::error::Result;
use crate::fixtures;
use crate::revision::{make_operator_with, OperatorConfig, TiePreset};

const PROFILE: [&str; 3] = ["001", "010", "000"];

const EXPECTED: [(&str, &str); 10] = [
    ("pre: individual 1", "{¬p, ¬(p→q), q}"),
    ("pre: individual 2", "{¬p, p→q, ¬q}"),
    ("pre: individual 3", "{¬p, ¬(p→q), ¬q}"),
    ("pre: majority", "{¬p, ¬(p→q), ¬q}"),
    ("post: individual 1", "{p, ¬(p→q), q}"),
    ("post: individual 2", "{p, p→q, q}"),
    ("post: individual 3", "{p, ¬(p→q), ¬q}"),
    ("post: majority", "{p, ¬(p→q), q}"),
    ("pre majority revised by p", "{p, ¬(p→q), ¬q}"),
    ("verdict", "{p, ¬(p→q), q} ≠ {p, ¬(p→q), ¬q}"),
];

#[derive(Debug, Clone)]
pub struct ReproConfig {
    pub operator: String,
    pub tie: TiePreset,
}

impl Default for ReproConfig {
    fn default() -> Self {
        ReproConfig {
            operator: "hamming".into(),
            tie: TiePreset::Example,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReproCell {
    pub label: &'static str,
    pub expected: &'static str,
    pub actual: String,
}

impl ReproCell {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReproReport {
    pub operator: String,
    pub cells: Vec<ReproCell>,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(ReproCell::matches)
    }

    pub fn first_mismatch(&self) -> Option<&ReproCell> {
        self.cells.iter().find(|c| !c.matches())
    }
}

pub fn repro_tark_example(config: &ReproConfig) -> Result<ReproReport> {
    let agenda = fixtures::x_cond();
    let rule = make_rule(&agenda, 3, "majority")?;
    let op = make_operator_with(&agenda, &config.operator, &OperatorConfig { tie: config.tie })?;
    let p = agenda.parse_literal("p")?;
    let show = |s| agenda.render(s).replace("->", "→");

    let pre = PROFILE
        .iter()
        .map(|b| agenda.parse_bits(b))
        .collect::<Result<Vec<_>>>()?;
    let pre_majority = rule.apply(&agenda, &pre)?;
    let post = pre
        .iter()
        .map(|&j| op.revise(&agenda, j, p))
        .collect::<Result<Vec<_>>>()?;
    let post_majority = rule.apply(&agenda, &post)?;
    let revised_majority = op.revise(&agenda, pre_majority, p)?;
    let relation = if post_majority == revised_majority { "=" } else { "≠" };

    let mut actual: Vec<String> = pre.iter().map(|&j| show(j)).collect();
    actual.push(show(pre_majority));
    actual.extend(post.iter().map(|&j| show(j)));
    actual.push(show(post_majority));
    actual.push(show(revised_majority));
    actual.push(format!("{} {relation} {}", show(post_majority), show(revised_majority)));

    let cells = EXPECTED
        .iter()
        .zip(actual)
        .map(|(&(label, expected), actual)| ReproCell { label, expected, actual })
        .collect();
    Ok(ReproReport {
        operator: op.id().to_string(),
        cells,
    })
}
