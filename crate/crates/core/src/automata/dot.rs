use std::collections::BTreeMap;
use std::fmt::Write;

use super::{Decomposition, Dfa};

/// Graphviz rendering. Accepting states are double circles; parallel edges
/// between the same pair of states are merged into one comma-separated label.
pub fn to_dot(dfa: &Dfa) -> String {
    render(dfa, "dfa")
}

/// One digraph per member, named `dfa_0`, `dfa_1`, ...
pub fn decomposition_to_dot(decomp: &Decomposition) -> Vec<String> {
    decomp
        .dfas()
        .iter()
        .enumerate()
        .map(|(k, dfa)| render(dfa, &format!("dfa_{k}")))
        .collect()
}

fn render(dfa: &Dfa, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  __start [shape=point];").unwrap();
    for q in 0..dfa.num_states() {
        let shape = if dfa.is_accepting(q) { "doublecircle" } else { "circle" };
        writeln!(out, "  q{q} [shape={shape}];").unwrap();
    }
    writeln!(out, "  __start -> q{};", dfa.initial()).unwrap();
    for q in 0..dfa.num_states() {
        let mut edges: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for s in dfa.alphabet().symbols() {
            edges.entry(dfa.next(q, s)).or_default().push(dfa.alphabet().label(s));
        }
        for (target, labels) in edges {
            writeln!(out, "  q{q} -> q{target} [label=\"{}\"];", escape(&labels.join(","))).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}
