//! Plain-text edge lists: a header line `n m`, then `m` lines `u v` with
//! 0-based vertices. Blank lines and `#` comments are ignored.

use super::Graph;
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or(Error::Parse { line: 0, message: "missing `n m` header".into() })?;
    let [n, m] = parse_pair(line, header)?;
    let mut g = Graph::empty(n);
    let mut seen = 0usize;
    for (line, body) in lines {
        let [u, v] = parse_pair(line, body)?;
        if g.has_edge_checked(u, v) {
            return Err(Error::Parse { line, message: format!("duplicate edge {u} {v}") });
        }
        g.add_edge(u, v).map_err(|e| Error::Parse { line, message: e.to_string() })?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse { line: 0, message: format!("header announces {m} edges, found {seen}") });
    }
    Ok(g)
}

fn parse_pair(line: usize, body: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = body.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse { line, message: format!("expected two integers, got `{body}`") });
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse { line, message: format!("`{s}`: {e}") });
    Ok([parse(fields[0])?, parse(fields[1])?])
}

/// Header plus one `u v` line per edge, sorted with `u < v`.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

impl Graph {
    fn has_edge_checked(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.has_edge(u, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Graph::from_edges(6, &[(4, 1), (0, 5), (2, 3)]).unwrap();
        let text = write_edge_list(&g);
        assert_eq!(text, "6 3\n0 5\n1 4\n2 3\n");
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edge_list("# a path\n\n3 2\n0 1 # first\n\n1 2\n").unwrap();
        assert_eq!(g, Graph::path(3));
    }

    #[test]
    fn malformed_input() {
        for bad in ["", "3\n", "3 1\n0 3\n", "3 1\n1 1\n", "3 2\n0 1\n", "3 2\n0 1\n1 0\n", "3 1\n0 x\n"] {
            assert!(matches!(parse_edge_list(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
    }
}
