//! graph6 and plain edge-list formats.
//!
//! graph6 follows the standard ASCII encoding: the order `n` (one byte `n + 63` for `n < 63`,
//! `~` plus three bytes up to 258047, `~~` plus six bytes beyond), then the upper triangle in
//! column order (`x(0,1), x(0,2), x(1,2), x(0,3), ...`) packed six bits per byte, each byte
//! offset by 63, padded with zero bits.
//!
//! The edge list is line based: a header `n m`, then `m` lines `u v` with 0-indexed vertices.
//! Anything after `#` on a line is a comment; blank lines are ignored.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("graph6 byte {position}: {message}")]
    Graph6 { position: usize, message: String },
    #[error("line {line}: {message}")]
    EdgeList { line: usize, message: String },
}

fn g6_err(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Graph6 { position, message: message.into() }
}

fn el_err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::EdgeList { line, message: message.into() }
}

/// Graphs serialise as their graph6 string.
impl serde::Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&to_graph6(self))
    }
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
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
    let mut bits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | u8::from(g.has_edge(i, j));
            bits += 1;
            if bits == 6 {
                out.push(acc + 63);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push((acc << (6 - bits)) + 63);
    }
    String::from_utf8(out).expect("printable ASCII")
}

pub fn parse_graph6(s: &str) -> Result<Graph, ParseError> {
    let s = s.strip_suffix('\n').unwrap_or(s);
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    let value = |i: usize| -> Result<usize, ParseError> {
        match bytes.get(i) {
            None => Err(g6_err(i, "unexpected end of input")),
            Some(&b) if (63..=126).contains(&b) => Ok((b - 63) as usize),
            Some(&b) => Err(g6_err(i, format!("byte {b:#04x} outside 63..=126"))),
        }
    };
    let (n, mut pos) = if bytes.first() != Some(&126) {
        (value(0)?, 1)
    } else if bytes.get(1) != Some(&126) {
        ((value(1)? << 12) | (value(2)? << 6) | value(3)?, 4)
    } else {
        let mut n = 0;
        for i in 2..8 {
            n = n << 6 | value(i)?;
        }
        (n, 8)
    };
    let total_bits = n * n.saturating_sub(1) / 2;
    let need = total_bits.div_ceil(6);
    if bytes.len() != pos + need {
        let at = (pos + need).min(bytes.len());
        return Err(g6_err(at, format!("expected {} bytes for n = {n}, found {}", pos + need, bytes.len())));
    }
    let mut edges = Vec::new();
    let mut bit = 0;
    let mut cur = 0;
    for j in 1..n {
        for i in 0..j {
            if bit % 6 == 0 {
                cur = value(pos)?;
                pos += 1;
            }
            if cur >> (5 - bit % 6) & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    if bit % 6 != 0 && cur & ((1 << (6 - bit % 6)) - 1) != 0 {
        return Err(g6_err(pos - 1, "nonzero padding bits"));
    }
    Ok(Graph::new(n, edges).expect("decoded edges are in range"))
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_edge_list(s: &str) -> Result<Graph, ParseError> {
    let mut lines = s
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| el_err(1, "missing header \"n m\""))?;
    let nums = |line: usize, text: &str| -> Result<(usize, usize), ParseError> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(el_err(line, format!("expected two integers, found {:?}", text)));
        }
        let p = |f: &str| f.parse::<usize>().map_err(|_| el_err(line, format!("not a nonnegative integer: {f:?}")));
        Ok((p(fields[0])?, p(fields[1])?))
    };
    let (n, m) = nums(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line, text) in lines {
        let (u, v) = nums(line, text)?;
        if u >= n || v >= n {
            return Err(el_err(line, format!("vertex out of range for n = {n}")));
        }
        if u == v {
            return Err(el_err(line, format!("self-loop at {u}")));
        }
        edges.push((u, v));
        last_line = line;
    }
    if edges.len() != m {
        return Err(el_err(last_line, format!("header declares {m} edges, found {}", edges.len())));
    }
    Ok(Graph::new(n, edges).expect("validated"))
}

/// Parses either format: a single graph6 token, or an edge list.
pub fn parse_graph(s: &str) -> Result<Graph, ParseError> {
    let trimmed = s.trim();
    let looks_g6 = !trimmed.contains(char::is_whitespace) && !trimmed.starts_with('#');
    if looks_g6 && !trimmed.bytes().all(|b| b.is_ascii_digit()) {
        parse_graph6(trimmed)
    } else {
        parse_edge_list(s)
    }
}
