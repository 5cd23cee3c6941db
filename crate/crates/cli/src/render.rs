//! Graphviz rendering of graded terms. Generators become boxes with input
//! ports on the left, output ports on the right and grading ports along the
//! bottom; identities and swaps become plain edges.

use std::fmt::Write;

use impcirc_core::grading::Injection;
use impcirc_core::terms::{Generator, GradedTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// A generator box.
    Box,
    /// The grading morphism of a regrading.
    Regrade,
    Inputs,
    Outputs,
    Grading,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: usize,
    pub kind: NodeKind,
    pub label: String,
    /// Ports on the left (`i0`, `i1`, ...).
    pub inputs: usize,
    /// Ports on the right (`o0`, ...).
    pub outputs: usize,
    /// Ports along the bottom (`g0`, ...).
    pub grading: usize,
    /// Ports along the top, for regrading nodes (`c0`, ...).
    pub top: usize,
}

/// A port as `(node id, port name)`.
pub type Port = (usize, String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: Port,
    pub to: Port,
    /// Grading wires are drawn dashed.
    pub grading: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagram {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

fn port(node: usize, prefix: &str, k: usize) -> Port {
    (node, format!("{prefix}{k}"))
}

impl Diagram {
    /// Lays out a valid term.
    pub fn from_term(term: &GradedTerm) -> Diagram {
        let profile = term.profile().expect("render needs a valid term");
        let mut d = Diagram::default();
        let inputs = d.node(NodeKind::Inputs, "inputs", 0, profile.arity, 0, 0);
        let sources: Vec<Port> = (0..profile.arity).map(|k| port(inputs, "o", k)).collect();
        let (outs, grades) = d.build(term, sources);
        let outputs = d.node(NodeKind::Outputs, "outputs", outs.len(), 0, 0, 0);
        for (k, from) in outs.into_iter().enumerate() {
            d.edge(from, port(outputs, "i", k), false);
        }
        if !grades.is_empty() {
            let grading = d.node(NodeKind::Grading, "grading", 0, 0, 0, grades.len());
            for (k, from) in grades.into_iter().enumerate() {
                d.edge(from, port(grading, "c", k), true);
            }
        }
        d
    }

    fn node(
        &mut self,
        kind: NodeKind,
        label: &str,
        inputs: usize,
        outputs: usize,
        grading: usize,
        top: usize,
    ) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node {
            id,
            kind,
            label: label.to_string(),
            inputs,
            outputs,
            grading,
            top,
        });
        id
    }

    fn edge(&mut self, from: Port, to: Port, grading: bool) {
        self.edges.push(Edge { from, to, grading });
    }

    /// Wires `term` to `sources`; returns its output ports and grading ports.
    fn build(&mut self, term: &GradedTerm, mut sources: Vec<Port>) -> (Vec<Port>, Vec<Port>) {
        match term {
            GradedTerm::Id0 | GradedTerm::Id1 => (sources, Vec::new()),
            GradedTerm::Swap => {
                sources.swap(0, 1);
                (sources, Vec::new())
            }
            GradedTerm::Gen(g) => {
                let p = term.profile().expect("render needs a valid term");
                let label = match g {
                    Generator::State(p) => format!("state {p}"),
                    other => other.name().to_string(),
                };
                let id = self.node(NodeKind::Box, &label, p.arity, p.coarity, p.grade, 0);
                for (k, from) in sources.into_iter().enumerate() {
                    self.edge(from, port(id, "i", k), false);
                }
                (
                    (0..p.coarity).map(|k| port(id, "o", k)).collect(),
                    (0..p.grade).map(|k| port(id, "g", k)).collect(),
                )
            }
            GradedTerm::Seq(f, g) => {
                let (mid, mut ga) = self.build(f, sources);
                let (out, gb) = self.build(g, mid);
                ga.extend(gb);
                (out, ga)
            }
            GradedTerm::Par(f, g) => {
                let n = f.profile().expect("render needs a valid term").arity;
                let rest = sources.split_off(n);
                let (mut out, mut ga) = self.build(f, sources);
                let (out2, gb) = self.build(g, rest);
                out.extend(out2);
                ga.extend(gb);
                (out, ga)
            }
            GradedTerm::Regrade(t, f) => {
                let (out, inner) = self.build(f, sources);
                let id = self.regrade_node(t);
                for (k, from) in inner.into_iter().enumerate() {
                    self.edge(from, port(id, "c", k), true);
                }
                (out, (0..t.dom_grade()).map(|k| port(id, "g", k)).collect())
            }
        }
    }

    fn regrade_node(&mut self, t: &Injection) -> usize {
        self.node(NodeKind::Regrade, &t.to_string(), 0, 0, t.dom_grade(), t.cod_grade())
    }

    /// Generator boxes with the given label.
    pub fn boxes(&self, label: &str) -> Vec<&Node> {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Box && n.label == label)
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        s.push_str("digraph diagram {\n  rankdir=LR;\n  node [shape=plaintext];\n");
        for n in &self.nodes {
            let _ = writeln!(s, "  n{} [label=<{}>];", n.id, html_label(n));
        }
        for e in &self.edges {
            let style = if e.grading {
                " [style=dashed, constraint=false]"
            } else {
                ""
            };
            let _ = writeln!(
                s,
                "  n{}:{} -> n{}:{}{};",
                e.from.0, e.from.1, e.to.0, e.to.1, style
            );
        }
        s.push_str("}\n");
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn port_column(prefix: &str, count: usize) -> String {
    let mut s = String::from(r#"<table border="0" cellspacing="0">"#);
    for k in 0..count {
        let _ = write!(s, r#"<tr><td port="{prefix}{k}"> </td></tr>"#);
    }
    s.push_str("</table>");
    s
}

fn port_row(prefix: &str, count: usize) -> String {
    let mut s = String::from(r#"<table border="0" cellspacing="0"><tr>"#);
    for k in 0..count {
        let _ = write!(s, r#"<td port="{prefix}{k}"> </td>"#);
    }
    s.push_str("</tr></table>");
    s
}

fn html_label(n: &Node) -> String {
    let mut s = String::from(r#"<table border="0" cellborder="1" cellspacing="0">"#);
    if n.top > 0 {
        let _ = write!(s, r#"<tr><td colspan="3">{}</td></tr>"#, port_row("c", n.top));
    }
    s.push_str("<tr>");
    if n.inputs > 0 {
        let _ = write!(s, "<td>{}</td>", port_column("i", n.inputs));
    }
    let _ = write!(s, "<td>{}</td>", escape(&n.label));
    if n.outputs > 0 {
        let _ = write!(s, "<td>{}</td>", port_column("o", n.outputs));
    }
    s.push_str("</tr>");
    if n.grading > 0 {
        let _ = write!(s, r#"<tr><td colspan="3">{}</td></tr>"#, port_row("g", n.grading));
    }
    s.push_str("</table>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use impcirc_core::terms::parse_term;

    #[test]
    fn knight_has_one_right_and_one_bottom_port() {
        let d = Diagram::from_term(&parse_term("knight").unwrap());
        let k = d.boxes("knight");
        assert_eq!(k.len(), 1);
        assert_eq!((k[0].inputs, k[0].outputs, k[0].grading), (0, 1, 1));
        assert_eq!(d.edges.iter().filter(|e| e.grading).count(), 1);
    }

    #[test]
    fn identity_is_a_single_edge() {
        let d = Diagram::from_term(&GradedTerm::Id1);
        assert_eq!(d.edges.len(), 1);
        assert!(d.nodes.iter().all(|n| n.kind != NodeKind::Box));
    }

    #[test]
    fn swaps_cross_wires() {
        let d = Diagram::from_term(&GradedTerm::Swap);
        assert_eq!(d.edges[0].from, port(0, "o", 1));
        assert_eq!(d.edges[0].to, port(1, "i", 0));
    }

    #[test]
    fn regrading_gets_its_own_node() {
        let d = Diagram::from_term(&parse_term("(regrade (inj 2->1 [1]) knight)").unwrap());
        let r: Vec<&Node> = d.nodes.iter().filter(|n| n.kind == NodeKind::Regrade).collect();
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].top, r[0].grading), (1, 2));
        let dot = d.to_dot();
        assert!(dot.starts_with("digraph diagram {"));
        assert!(dot.contains("inj 2-&gt;1 [1]"));
    }
}
