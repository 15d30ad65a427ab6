use std::fmt::Write;

use super::{GameBody, GameDoc};
use crate::cyclic::{PositionalProfile, Target};
use crate::error::{Error, Result};
use crate::game::{FiniteGame, Outcome, TreeProfile};
use crate::parametric::Move;

/// Edges drawn bold in the export.
#[derive(Clone, Copy, Debug, Default)]
pub enum Highlight<'a> {
    #[default]
    None,
    Tree(&'a TreeProfile),
    Positional(&'a PositionalProfile),
}

const BOLD: &str = ", penwidth=2, style=bold";

/// Graphviz rendering of a tree, cyclic or parametric game. Decision nodes
/// are named `n0`, `n1`, ... in preorder (finite games) or declaration
/// order (graphs), followed by one box per leaf.
pub fn to_dot(doc: &GameDoc, highlight: Highlight<'_>) -> Result<String> {
    let mut out = String::from("digraph game {\n  node [fontname=\"Helvetica\"];\n");
    match &doc.body {
        GameBody::Finite(g) => {
            let profile = match highlight {
                Highlight::None => None,
                Highlight::Tree(p) => {
                    p.check_shape(g)?;
                    Some(p)
                }
                Highlight::Positional(_) => {
                    return Err(Error::ShapeMismatch("a finite game takes a tree profile".into()))
                }
            };
            let mut next = 0;
            tree(&mut out, doc, g, profile, &mut next);
        }
        GameBody::Cyclic(g) => {
            let profile = positional(highlight)?;
            if let Some(p) = profile {
                p.check_for(g)?;
            }
            let points: Vec<_> = g
                .nodes()
                .iter()
                .map(|(name, node)| {
                    let edges = node
                        .edges
                        .iter()
                        .map(|(l, t)| match t {
                            Target::Node(n) => (l.to_string(), Err(n.as_str())),
                            Target::Leaf(o) => (l.to_string(), Ok(o.to_string())),
                        })
                        .collect();
                    (name.as_str(), node.owner, edges)
                })
                .collect();
            graph(&mut out, doc, g.start(), points, profile);
        }
        GameBody::Parametric(g) => {
            let profile = positional(highlight)?;
            if let Some(p) = profile {
                g.check_profile(p)?;
            }
            let points: Vec<_> = g
                .shapes()
                .iter()
                .map(|(name, shape)| {
                    let edges = shape
                        .moves
                        .iter()
                        .map(|(l, m)| match m {
                            Move::Advance(n) => (l.to_string(), Err(n.as_str())),
                            Move::Leaf(o) => (l.to_string(), Ok(o.to_string())),
                        })
                        .collect();
                    (name.as_str(), shape.owner, edges)
                })
                .collect();
            graph(&mut out, doc, g.start(), points, profile);
        }
        GameBody::Matrix(_) => return Err(Error::ShapeMismatch("matrix games have no graph form".into())),
    }
    out.push_str("}\n");
    Ok(out)
}

fn positional(h: Highlight<'_>) -> Result<Option<&PositionalProfile>> {
    match h {
        Highlight::None => Ok(None),
        Highlight::Positional(p) => Ok(Some(p)),
        Highlight::Tree(_) => Err(Error::ShapeMismatch("a graph game takes a positional profile".into())),
    }
}

fn leaf_node(out: &mut String, id: usize, o: &impl ToString) {
    writeln!(out, "  n{id} [shape=box, label=\"{}\"];", o.to_string()).unwrap();
}

fn tree(out: &mut String, doc: &GameDoc, g: &FiniteGame, profile: Option<&TreeProfile>, next: &mut usize) -> usize {
    let id = *next;
    *next += 1;
    match g {
        FiniteGame::Leaf(o) => leaf_node(out, id, o as &Outcome),
        FiniteGame::Node { owner, branches } => {
            writeln!(out, "  n{id} [shape=ellipse, label=\"{}\"];", doc.player_name(*owner)).unwrap();
            let (choice, children) = match profile {
                Some(TreeProfile::Node { choice, children }) => (Some(choice), Some(children)),
                _ => (None, None),
            };
            for (i, (label, child)) in branches.iter().enumerate() {
                let sub = children.map(|c| &c[i]);
                let child_id = tree(out, doc, child, sub, next);
                let style = if choice == Some(label) { BOLD } else { "" };
                writeln!(out, "  n{id} -> n{child_id} [label=\"{label}\"{style}];").unwrap();
            }
        }
    }
    id
}

type Point<'a> = (
    &'a str,
    crate::game::PlayerId,
    Vec<(String, std::result::Result<String, &'a str>)>,
);

fn graph(out: &mut String, doc: &GameDoc, start: &str, points: Vec<Point<'_>>, profile: Option<&PositionalProfile>) {
    let index = |name: &str| points.iter().position(|(n, ..)| *n == name).expect("validated");
    for (i, (name, owner, _)) in points.iter().enumerate() {
        let periph = if *name == start { ", peripheries=2" } else { "" };
        writeln!(
            out,
            "  n{i} [shape=ellipse, label=\"{name}: {}\"{periph}];",
            doc.player_name(*owner)
        )
        .unwrap();
    }
    let mut next = points.len();
    for (i, (name, _, edges)) in points.iter().enumerate() {
        for (label, target) in edges {
            let to = match target {
                Err(n) => index(n),
                Ok(leaf) => {
                    leaf_node(out, next, leaf);
                    next += 1;
                    next - 1
                }
            };
            let chosen = profile
                .and_then(|p| p.choice(name))
                .is_some_and(|c| c.as_str() == label);
            let style = if chosen { BOLD } else { "" };
            writeln!(out, "  n{i} -> n{to} [label=\"{label}\"{style}];").unwrap();
        }
    }
}
