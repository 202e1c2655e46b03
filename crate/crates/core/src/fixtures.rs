//! Bundled agendas.

use crate::agenda::Agenda;
use crate::report::AgendaFile;

pub const BUNDLED_NAMES: [&str; 3] = ["cond-subjunctive", "cond-material", "independent-2"];

/// JSON text of a bundled agenda.
pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "cond-subjunctive" => Some(include_str!("../fixtures/cond-subjunctive.json")),
        "cond-material" => Some(include_str!("../fixtures/cond-material.json")),
        "independent-2" => Some(include_str!("../fixtures/independent-2.json")),
        _ => None,
    }
}

fn load(name: &str) -> Agenda {
    let text = bundled(name).expect("bundled agenda exists");
    AgendaFile::parse(text)
        .and_then(|f| f.build())
        .expect("bundled agendas are valid")
        .agenda
}

/// Premise `p`, conditional `p->q`, conclusion `q`; every valuation except
/// `110` (the conditional read subjunctively).
pub fn x_cond() -> Agenda {
    load("cond-subjunctive")
}

/// The same issues with `p -> q` read materially.
pub fn material_conditional() -> Agenda {
    load("cond-material")
}

/// `k` logically independent issues `p1..pk`.
pub fn independent(k: usize) -> Agenda {
    if k == 2 {
        return load("independent-2");
    }
    let labels: Vec<String> = (1..=k).map(|i| format!("p{i}")).collect();
    let vals: Vec<String> = (0..1u64 << k).map(|v| format!("{v:0k$b}")).collect();
    Agenda::from_valuations(&labels, &vals).expect("independent agenda is valid")
}
