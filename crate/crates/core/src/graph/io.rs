//! Text formats for graphs.
//!
//! * graph6: the standard printable encoding (size prefix `N(n)` followed by
//!   the upper triangle in column order, six bits per byte offset by 63). An
//!   optional `>>graph6<<` header is accepted on input and never written.
//! * Edge list: a header line `n m`, then one `u v` line per edge with
//!   `u < v`, 0-indexed, in ascending order.

use super::{Graph, GraphBuilder};
use crate::error::{Error, Result};

const G6_HEADER: &str = ">>graph6<<";

fn g6_err(msg: impl Into<String>) -> Error {
    Error::Format {
        what: "graph6",
        msg: msg.into(),
    }
}

fn edge_list_err(msg: impl Into<String>) -> Error {
    Error::Format {
        what: "edge list",
        msg: msg.into(),
    }
}

/// Encodes `g` as a graph6 string (no trailing newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Decodes a single graph6 line.
pub fn from_graph6(text: &str) -> Result<Graph> {
    let text = text.trim_end_matches(['\n', '\r']);
    let text = text.strip_prefix(G6_HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(g6_err(format!("byte {b:#04x} outside the printable range 63..=126")));
    }
    let (n, body) = match bytes {
        [] => return Err(g6_err("empty input")),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(g6_err("truncated 8-byte size prefix"));
            }
            (decode_size(&rest[..6]), &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(g6_err("truncated 4-byte size prefix"));
            }
            (decode_size(&rest[..3]), &rest[3..])
        }
        [b, rest @ ..] => ((*b - 63) as usize, rest),
    };
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(g6_err(format!(
            "{} data bytes for {n} vertices, expected {expected}",
            body.len()
        )));
    }
    let mut b = GraphBuilder::new(n);
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                b.add_edge(i, j);
            }
            k += 1;
        }
    }
    if bits % 6 != 0 {
        let last = body[body.len() - 1] - 63;
        if last & ((1u8 << (6 - bits % 6)) - 1) != 0 {
            return Err(g6_err("non-zero padding bits"));
        }
    }
    Ok(b.build())
}

fn decode_size(chunk: &[u8]) -> usize {
    chunk.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize)
}

/// Writes the edge-list format, ending with a newline.
pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Parses the edge-list format. Edges are normalised to `u < v`; loops,
/// duplicates and a wrong edge count are rejected. Blank lines are ignored.
pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| edge_list_err("missing header"))?;
    let nums = parse_pair(header).ok_or_else(|| edge_list_err("header must be `n m`"))?;
    let (n, m) = nums;
    let mut b = GraphBuilder::new(n);
    let mut count = 0;
    for (i, line) in lines {
        let (u, v) = parse_pair(line)
            .ok_or_else(|| edge_list_err(format!("line {}: expected `u v`", i + 1)))?;
        if u >= n || v >= n || u == v {
            return Err(edge_list_err(format!("line {}: bad edge ({u}, {v})", i + 1)));
        }
        if !b.add_edge(u, v) {
            return Err(edge_list_err(format!("line {}: duplicate edge ({u}, {v})", i + 1)));
        }
        count += 1;
    }
    if count != m {
        return Err(edge_list_err(format!("header promises {m} edges, found {count}")));
    }
    Ok(b.build())
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Some((a, b)),
        _ => None,
    }
}
