//! Text formats: edge lists (`p n m`, `e u v`, `c` comments) and colorings
//! (`<id> I|O` per line), plus atomic file writes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::partition::{Color, Coloring};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn number(tok: Option<&str>, line: usize, what: &str) -> Result<usize, FormatError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("bad {what} `{tok}`")))
}

/// Parses an edge list. `c girth=<g>` and `c planar=1` fill the graph's
/// untrusted metadata; other comments are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut graph: Option<Graph> = None;
    let mut declared_m = 0;
    let mut girth = None;
    let mut planar = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None => {}
            Some("c") => {
                for tok in toks {
                    if let Some(g) = tok.strip_prefix("girth=") {
                        girth = Some(number(Some(g), line, "girth")?);
                    } else if tok == "planar=1" {
                        planar = true;
                    }
                }
            }
            Some("p") => {
                if graph.is_some() {
                    return Err(syntax(line, "second `p` line"));
                }
                let n = number(toks.next(), line, "vertex count")?;
                declared_m = number(toks.next(), line, "edge count")?;
                graph = Some(Graph::empty(n));
            }
            Some("e") => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| syntax(line, "edge before the `p` line"))?;
                let u = number(toks.next(), line, "endpoint")?;
                let v = number(toks.next(), line, "endpoint")?;
                g.add_edge(u, v)
                    .map_err(|source| FormatError::Graph { line, source })?;
            }
            Some(other) => return Err(syntax(line, format!("unknown record `{other}`"))),
        }
    }
    let mut g = graph.ok_or_else(|| syntax(0, "no `p` line"))?;
    if g.m() != declared_m {
        return Err(syntax(
            0,
            format!("header declares {declared_m} edges, found {}", g.m()),
        ));
    }
    g.meta.claimed_girth = girth;
    g.meta.claimed_planar = planar;
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    if let Some(girth) = g.meta.claimed_girth {
        writeln!(out, "c girth={girth}").unwrap();
    }
    if g.meta.claimed_planar {
        out.push_str("c planar=1\n");
    }
    writeln!(out, "p {} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

/// Parses `<id> I|O` lines; blank lines and `c` comments are skipped. Ids
/// not listed stay unset.
pub fn parse_coloring(text: &str, n: usize) -> Result<Coloring, FormatError> {
    let mut c = Coloring::unset(n);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        let Some(first) = toks.next() else { continue };
        if first == "c" {
            continue;
        }
        let v = number(Some(first), line, "vertex id")?;
        if v >= n {
            return Err(syntax(line, format!("vertex {v} out of range for {n}")));
        }
        let color = match toks.next() {
            Some("I") => Color::I,
            Some("O") => Color::O,
            _ => return Err(syntax(line, "expected I or O")),
        };
        if c.get(v).is_some() {
            return Err(syntax(line, format!("vertex {v} listed twice")));
        }
        c.set(v, color);
    }
    Ok(c)
}

/// One line per colored vertex.
pub fn write_coloring(c: &Coloring) -> String {
    let mut out = String::new();
    for (v, col) in c.as_slice().iter().enumerate() {
        if let Some(col) = col {
            writeln!(out, "{v} {col}").unwrap();
        }
    }
    out
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "no file name"))?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn edge_list_round_trip() {
        let mut g = petersen();
        g.meta.claimed_girth = Some(5);
        let text = write_edge_list(&g);
        assert!(text.starts_with("c girth=5\np 10 15\n"));
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_reads_metadata_and_comments() {
        let g =
            parse_edge_list("c planar=1\nc a triangle\np 3 3\ne 0 1\n\ne 1 2\ne 2 0\n").unwrap();
        assert_eq!(g, {
            let mut t = cycle(3);
            t.meta.claimed_planar = true;
            t
        });
    }

    #[test]
    fn edge_list_errors() {
        for (text, line) in [
            ("e 0 1\n", 1),
            ("p 2 1\ne 0 2\n", 2),
            ("p 2 1\ne 0 0\n", 2),
            ("p 2 1\ne 0 1\ne 1 0\n", 3),
            ("p 2 x\n", 1),
            ("p 2 2\ne 0 1\n", 0),
            ("q\n", 1),
            ("", 0),
        ] {
            let err = parse_edge_list(text).unwrap_err();
            let got = match err {
                FormatError::Syntax { line, .. } | FormatError::Graph { line, .. } => line,
                FormatError::Io(_) => unreachable!(),
            };
            assert_eq!(got, line, "{text:?}");
        }
    }

    #[test]
    fn coloring_round_trip() {
        let c = Coloring::with_i_set(5, &[0, 3]);
        let text = write_coloring(&c);
        assert_eq!(text, "0 I\n1 O\n2 O\n3 I\n4 O\n");
        assert_eq!(parse_coloring(&text, 5).unwrap(), c);
    }

    #[test]
    fn coloring_errors() {
        assert!(parse_coloring("0 X\n", 2).is_err());
        assert!(parse_coloring("2 I\n", 2).is_err());
        assert!(parse_coloring("0 I\n0 O\n", 2).is_err());
        assert_eq!(parse_coloring("c x\n1 O\n", 2).unwrap().get(0), None);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = std::env::temp_dir().join(format!("iopart-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join("g.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }
}
