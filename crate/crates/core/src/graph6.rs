//! graph6 text encoding (short form only, n <= 62).
//!
//! Layout: one byte `n + 63`, then the upper triangle of the adjacency matrix
//! in column-major order (`(0,1), (0,2), (1,2), (0,3), ...`), packed six bits
//! per byte, most significant bit first, each byte offset by 63. The final
//! byte is zero-padded.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_SHORT_N: usize = 62;

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.as_bytes();
    let Some((&head, body)) = bytes.split_first() else {
        return Err(Error::Graph6("empty input".into()));
    };
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6(format!("byte {b:#04x} outside the printable range 63..=126")));
    }
    if head == 126 {
        return Err(Error::Graph6("long-form length header (n > 62) is not supported".into()));
    }
    let n = (head - 63) as usize;
    if body.len() != body_len(n) {
        return Err(Error::Graph6(format!(
            "length header says n = {n}, which needs {} body bytes, found {}",
            body_len(n),
            body.len()
        )));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (bits..body.len() * 6).any(bit) {
        return Err(Error::Graph6("nonzero padding bits".into()));
    }
    let mut adj = vec![0u64; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
            k += 1;
        }
    }
    Graph::from_adjacency(adj)
}

pub fn write_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    if n > MAX_SHORT_N {
        return Err(Error::Graph6(format!("n = {n} needs the long form, which is not supported")));
    }
    let mut out = Vec::with_capacity(1 + body_len(n));
    out.push(n as u8 + 63);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
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
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// Reads one graph per line. Blank lines, `>>graph6<<` headers and anything
/// else that is not a graph6 line are reported as errors with a 1-based line
/// number.
pub fn read_graph6_lines<R: BufRead>(reader: R) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Graph6(format!("read error: {e}")))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        let g = parse_graph6(line).map_err(|e| match e {
            Error::Graph6(msg) => Error::Graph6(format!("line {}: {msg}", i + 1)),
            other => other,
        })?;
        out.push(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_known_strings() {
        let g = parse_graph6("@").unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));
        let k2 = parse_graph6("A_").unwrap();
        assert_eq!(k2, Graph::complete(2).unwrap());
        let k3 = parse_graph6("Bw").unwrap();
        assert_eq!(k3, Graph::complete(3).unwrap());

        assert_eq!(write_graph6(&Graph::complete(2).unwrap()).unwrap(), "A_");
        assert_eq!(write_graph6(&Graph::empty(1).unwrap()).unwrap(), "@");
        assert_eq!(write_graph6(&Graph::complete(3).unwrap()).unwrap(), "Bw");
    }

    #[test]
    fn empty_graph_on_zero_vertices() {
        assert_eq!(write_graph6(&Graph::empty(0).unwrap()).unwrap(), "?");
        assert_eq!(parse_graph6("?").unwrap().n(), 0);
    }

    #[test]
    fn k6_and_k7() {
        // 15 ones -> 111111 111111 111000 ; 21 ones -> 4 bytes, last 111000
        assert_eq!(write_graph6(&Graph::complete(6).unwrap()).unwrap(), "E~~w");
        assert_eq!(write_graph6(&Graph::complete(7).unwrap()).unwrap(), "F~~~w");
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("B").is_err(), "missing body");
        assert!(parse_graph6("Bww").is_err(), "extra body");
        assert!(parse_graph6("A`").is_err(), "padding bit set");
        assert!(parse_graph6("A\x1f").is_err(), "non-printable");
        assert!(parse_graph6("~?").is_err(), "long form");
        assert!(parse_graph6("A_ ").is_err());
    }

    #[test]
    fn too_large_for_short_form() {
        assert!(write_graph6(&Graph::empty(63).unwrap()).is_err());
        assert!(write_graph6(&Graph::empty(62).unwrap()).is_ok());
    }

    #[test]
    fn line_reader_rejects_blank_lines() {
        let ok = read_graph6_lines("A_\nBw\n".as_bytes()).unwrap();
        assert_eq!(ok.len(), 2);
        let err = read_graph6_lines("A_\n\nBw\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(read_graph6_lines(">>graph6<<A_\n".as_bytes()).is_err());
    }
}
