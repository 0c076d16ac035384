//! Graph file formats.
//!
//! Edge list: a header line `n m`, then `m` lines `u v` with `u < v`,
//! 0-based, newline-terminated. JSON: `{"n": 3, "edges": [[0, 1], ...]}`.
//! DOT: the subset written by [`write_dot`].

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

pub fn write_dot<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "graph G {{")?;
    for v in 0..g.n() {
        writeln!(out, "  {v};")?;
    }
    for (u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};")?;
    }
    writeln!(out, "}}")?;
    out.flush()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

pub fn write_graph_json<W: Write>(g: &Graph, out: W) -> io::Result<()> {
    let file = GraphFile {
        n: g.n(),
        edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
    };
    serde_json::to_writer(out, &file).map_err(io::Error::from)
}

fn read_graph_json(text: &str) -> Result<Graph, GraphError> {
    let file: GraphFile =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    Graph::from_edges(file.n, file.edges.into_iter().map(|[u, v]| (u, v)))
}

fn read_dot(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, "graph G {")) => {}
        _ => return Err(parse_err(1, "expected `graph G {`")),
    }
    let mut n = 0usize;
    let mut edges = Vec::new();
    let mut closed = false;
    for (line_no, line) in lines {
        if closed {
            if line.is_empty() {
                continue;
            }
            return Err(parse_err(line_no, "content after closing brace"));
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let body = line
            .strip_suffix(';')
            .ok_or_else(|| parse_err(line_no, "statement must end with `;`"))?;
        let vertex = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("`{}` is not a vertex", s.trim())))
        };
        match body.split_once("--") {
            Some((a, b)) => edges.push((vertex(a)?, vertex(b)?)),
            None => {
                let v = vertex(body)?;
                if v != n {
                    return Err(parse_err(
                        line_no,
                        format!("expected vertex {n}, found {v}"),
                    ));
                }
                n += 1;
            }
        }
    }
    if !closed {
        return Err(parse_err(text.lines().count(), "missing closing brace"));
    }
    Graph::from_edges(n, edges)
}

/// Reads any of the three graph formats, detected from the first
/// non-blank character (`{` for JSON, `g` for DOT, otherwise edge list).
pub fn read_graph(text: &str) -> Result<Graph, GraphError> {
    match text.trim_start().chars().next() {
        Some('{') => read_graph_json(text),
        Some('g') => read_dot(text),
        _ => read_edge_list(text.as_bytes()),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_pair(line_no: usize, line: &str, what: [&str; 2]) -> Result<(usize, usize), GraphError> {
    let mut fields = line.split_ascii_whitespace();
    let mut next = |name: &str| -> Result<usize, GraphError> {
        let field = fields
            .next()
            .ok_or_else(|| parse_err(line_no, format!("missing field `{name}`")))?;
        field.parse().map_err(|_| {
            parse_err(
                line_no,
                format!("field `{name}`: `{field}` is not a non-negative integer"),
            )
        })
    };
    let a = next(what[0])?;
    let b = next(what[1])?;
    if fields.next().is_some() {
        return Err(parse_err(line_no, "expected exactly two fields"));
    }
    Ok((a, b))
}

/// Parses the edge-list format. Line numbers in errors are 1-based.
pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph, GraphError> {
    let mut lines = input.lines().enumerate();
    let (n, m) = match lines.next() {
        Some((_, Ok(header))) => parse_pair(1, &header, ["n", "m"])?,
        Some((_, Err(e))) => return Err(parse_err(1, e.to_string())),
        None => return Err(parse_err(1, "empty input, expected header `n m`")),
    };
    if n > u32::MAX as usize {
        return Err(parse_err(1, format!("n = {n} is too large")));
    }
    let mut edges = Vec::with_capacity(m.min(1 << 24));
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| parse_err(line_no, e.to_string()))?;
        if line.trim().is_empty() {
            return Err(parse_err(line_no, "blank line"));
        }
        if edges.len() == m {
            return Err(parse_err(
                line_no,
                format!("more than the {m} edges declared in the header"),
            ));
        }
        let (u, v) = parse_pair(line_no, &line, ["u", "v"])?;
        if u >= v {
            return Err(parse_err(
                line_no,
                format!("edge `{u} {v}` must satisfy u < v"),
            ));
        }
        if v >= n {
            return Err(parse_err(
                line_no,
                format!("vertex {v} out of range for n = {n}"),
            ));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            edges.len() + 2,
            format!("header declares {m} edges but {} were found", edges.len()),
        ));
    }
    Graph::from_edges(n, edges.iter().copied()).map_err(|e| match e {
        GraphError::DuplicateEdge(u, v) => {
            let second = edges
                .iter()
                .enumerate()
                .filter(|(_, &e)| e == (u, v))
                .nth(1)
                .map_or(0, |(i, _)| i + 2);
            parse_err(second, format!("duplicate edge `{u} {v}`"))
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Graph, GraphError> {
        read_edge_list(text.as_bytes())
    }

    #[test]
    fn single_vertex_file() {
        let mut buf = Vec::new();
        write_edge_list(&Graph::empty(1), &mut buf).unwrap();
        assert_eq!(buf, b"1 0\n");
        assert_eq!(parse("1 0\n").unwrap(), Graph::empty(1));
    }

    #[test]
    fn writes_sorted_edges() {
        let g = Graph::from_edges(3, [(2, 1), (1, 0)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn dot_lists_vertices_and_edges() {
        let mut buf = Vec::new();
        write_dot(&Graph::path(2), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "graph G {\n  0;\n  1;\n  0 -- 1;\n}\n"
        );
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse("3 2\n0 1\n2 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err:?}");
        let err = parse("3 2\n0 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err:?}");
        let err = parse("3 1\n0 x\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err:?}");
        let err = parse("3 1\n0 5\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err:?}");
        let err = parse("2 1\n0 1\n0 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err:?}");
        assert!(parse("").is_err());
    }

    #[test]
    fn autodetects_formats() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let mut edge_list = Vec::new();
        write_edge_list(&g, &mut edge_list).unwrap();
        let mut dot = Vec::new();
        write_dot(&g, &mut dot).unwrap();
        let mut json = Vec::new();
        write_graph_json(&g, &mut json).unwrap();
        assert_eq!(
            String::from_utf8(json.clone()).unwrap(),
            r#"{"n":4,"edges":[[0,1],[0,2],[1,2],[2,3]]}"#
        );
        for bytes in [edge_list, dot, json] {
            assert_eq!(read_graph(std::str::from_utf8(&bytes).unwrap()).unwrap(), g);
        }
        assert!(read_graph("graph G {\n  0;\n  0 -- 1;\n}\n").is_err());
        assert!(read_graph("graph G {\n  0;\n").is_err());
    }

    #[test]
    fn rejects_duplicate_edges() {
        assert!(parse("3 2\n0 1\n0 1\n").is_err());
    }
}
