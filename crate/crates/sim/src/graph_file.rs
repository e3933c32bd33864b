//! Text format for directed graphs.
//!
//! ```text
//! # comment
//! digraph 3
//! 1 2 0.5
//! 2 3 1
//! ```
//!
//! The header gives the vertex count; each following line is
//! `<source> <target> <weight>`. Blank lines and lines starting with `#`
//! are ignored.

use std::fmt::Write as _;
use std::path::Path;

use usm_core::submodular::{DirectedGraph, Edge};

use crate::error::SimError;

pub fn parse_graph(text: &str) -> Result<DirectedGraph, SimError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| SimError::Config(format!("line {}: {msg}: {raw:?}", lineno + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        match n {
            None => {
                let [keyword, count] = fields[..] else {
                    return Err(bad("expected header `digraph <n>`"));
                };
                if keyword != "digraph" {
                    return Err(bad("expected header `digraph <n>`"));
                }
                n = Some(count.parse::<u32>().map_err(|_| bad("vertex count is not a positive integer"))?);
            }
            Some(_) => {
                let [s, t, w] = fields[..] else {
                    return Err(bad("expected `<source> <target> <weight>`"));
                };
                edges.push(Edge {
                    source: s.parse().map_err(|_| bad("bad source vertex"))?,
                    target: t.parse().map_err(|_| bad("bad target vertex"))?,
                    weight: w.parse().map_err(|_| bad("bad weight"))?,
                });
            }
        }
    }
    let n = n.ok_or_else(|| SimError::Config("missing `digraph <n>` header".into()))?;
    Ok(DirectedGraph::new(n, edges)?)
}

pub fn read_graph(path: &Path) -> Result<DirectedGraph, SimError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SimError::Config(format!("reading graph {}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| match e {
        SimError::Config(msg) => SimError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn format_graph(g: &DirectedGraph) -> String {
    let mut out = format!("digraph {}\n", g.n());
    for e in g.edges() {
        // `{}` on f64 prints the shortest string that parses back exactly.
        writeln!(out, "{} {} {}", e.source, e.target, e.weight).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use usm_core::submodular::{random_digraph, Subset};
    use usm_core::seed;

    #[test]
    fn parses_with_comments() {
        let g = parse_graph("# a test\n\ndigraph 3\n1 2 0.5\n# mid\n2 3   1\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.cut_value(Subset::from_elements([1, 2])).unwrap(), 1.0);
    }

    #[test]
    fn rejects_malformed() {
        for text in ["1 2 3\n", "digraph\n", "digraph 3\n1 2\n", "digraph 3\n1 4 1\n", "digraph 2\n1 2 x\n", ""] {
            assert_eq!(parse_graph(text).unwrap_err().exit_code(), crate::error::EXIT_CONFIG, "{text:?}");
        }
    }

    #[test]
    fn format_round_trips() {
        let mut rng = seed::rng_from_seed(1);
        let g = random_digraph(9, 0.4, (0.0, 3.0), &mut rng).unwrap();
        assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
    }
}
