use std::fmt::Write;

use super::{GameBody, GameDoc};
use crate::cyclic::Target;
use crate::game::{FiniteGame, Outcome};
use crate::parametric::Move;

const INDENT: &str = "  ";

/// Canonical text of `doc`. Parsing the result gives `doc` back.
pub fn serialize(doc: &GameDoc) -> String {
    let mut out = String::new();
    writeln!(out, "players {} {}", doc.players[0], doc.players[1]).unwrap();
    match &doc.body {
        GameBody::Finite(g) => {
            out.push_str("finite {\n");
            write_tree(&mut out, doc, g, 1, "");
            out.push_str("}\n");
        }
        GameBody::Cyclic(g) => {
            writeln!(out, "cyclic start={} {{", g.start()).unwrap();
            for (name, node) in g.nodes() {
                writeln!(out, "{INDENT}{name}: {} {{", doc.player_name(node.owner)).unwrap();
                for (label, target) in &node.edges {
                    let t = match target {
                        Target::Node(n) => n.clone(),
                        Target::Leaf(o) => leaf(o),
                    };
                    writeln!(out, "{INDENT}{INDENT}{label} -> {t}").unwrap();
                }
                writeln!(out, "{INDENT}}}").unwrap();
            }
            out.push_str("}\n");
        }
        GameBody::Parametric(g) => {
            writeln!(out, "param start={} {{", g.start()).unwrap();
            for (name, shape) in g.shapes() {
                writeln!(out, "{INDENT}{name}: {} {{", doc.player_name(shape.owner)).unwrap();
                for (label, m) in &shape.moves {
                    let t = match m {
                        Move::Advance(n) => format!("advance {n}"),
                        Move::Leaf(o) => {
                            let parts: Vec<_> = o.values().iter().map(ToString::to_string).collect();
                            format!("leaf({})", parts.join(", "))
                        }
                    };
                    writeln!(out, "{INDENT}{INDENT}{label} -> {t}").unwrap();
                }
                writeln!(out, "{INDENT}}}").unwrap();
            }
            out.push_str("}\n");
        }
        GameBody::Matrix(m) => {
            writeln!(out, "matrix sum={} {{", m.sum()).unwrap();
            let rows: Vec<String> = m
                .payoffs()
                .iter()
                .map(|row| {
                    let cells: Vec<_> = row.iter().map(ToString::to_string).collect();
                    format!("{INDENT}{}", cells.join(" "))
                })
                .collect();
            out.push_str(&rows.join(";\n"));
            out.push_str("\n}\n");
        }
    }
    out
}

fn leaf(o: &Outcome) -> String {
    let parts: Vec<_> = o.values().iter().map(ToString::to_string).collect();
    format!("leaf({})", parts.join(", "))
}

fn write_tree(out: &mut String, doc: &GameDoc, g: &FiniteGame, depth: usize, prefix: &str) {
    let pad = INDENT.repeat(depth);
    match g {
        FiniteGame::Leaf(o) => writeln!(out, "{pad}{prefix}{}", leaf(o)).unwrap(),
        FiniteGame::Node { owner, branches } => {
            writeln!(out, "{pad}{prefix}{} {{", doc.player_name(*owner)).unwrap();
            for (label, child) in branches {
                write_tree(out, doc, child, depth + 1, &format!("{label} -> "));
            }
            writeln!(out, "{pad}}}").unwrap();
        }
    }
}
