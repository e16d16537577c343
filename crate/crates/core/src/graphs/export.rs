//! DOT, GraphML and Pajek writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{GraphError, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    GraphMl,
    Pajek,
}

impl GraphFormat {
    pub fn from_path(path: &Path) -> Result<GraphFormat, GraphError> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or("")
            .to_ascii_lowercase();
        match ext.as_str() {
            "dot" | "gv" => Ok(GraphFormat::Dot),
            "graphml" => Ok(GraphFormat::GraphMl),
            "net" => Ok(GraphFormat::Pajek),
            _ => Err(GraphError::UnknownFormat(ext)),
        }
    }
}

/// Writes `graph` in the format implied by the file extension.
pub fn write_graph(graph: &WeightedGraph, path: &Path) -> Result<(), GraphError> {
    let format = GraphFormat::from_path(path)?;
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        GraphFormat::Dot => write_dot(graph, &mut w)?,
        GraphFormat::GraphMl => write_graphml(graph, &mut w)?,
        GraphFormat::Pajek => write_pajek(graph, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

pub fn write_dot<W: Write>(graph: &WeightedGraph, mut w: W) -> Result<(), GraphError> {
    writeln!(w, "graph \"{}\" {{", graph.kind.as_str())?;
    for n in &graph.nodes {
        write!(w, "  \"{}\" [weight={}", dot_escape(&n.key), n.weight)?;
        for (k, v) in &n.attrs {
            write!(w, ", \"{}\"=\"{}\"", dot_escape(k), dot_escape(v))?;
        }
        writeln!(w, "];")?;
    }
    for e in &graph.edges {
        writeln!(
            w,
            "  \"{}\" -- \"{}\" [weight={}];",
            dot_escape(&e.a),
            dot_escape(&e.b),
            e.weight
        )?;
    }
    writeln!(w, "}}")?;
    Ok(())
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn write_graphml<W: Write>(graph: &WeightedGraph, mut w: W) -> Result<(), GraphError> {
    let attr_keys: std::collections::BTreeSet<&str> = graph
        .nodes
        .iter()
        .flat_map(|n| n.attrs.keys().map(String::as_str))
        .collect();
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(w, r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#)?;
    writeln!(
        w,
        r#"  <key id="nw" for="node" attr.name="weight" attr.type="double"/>"#
    )?;
    writeln!(
        w,
        r#"  <key id="ew" for="edge" attr.name="weight" attr.type="double"/>"#
    )?;
    for (i, k) in attr_keys.iter().enumerate() {
        writeln!(
            w,
            r#"  <key id="na{i}" for="node" attr.name="{}" attr.type="string"/>"#,
            xml_escape(k)
        )?;
    }
    writeln!(
        w,
        r#"  <graph id="{}" edgedefault="undirected">"#,
        graph.kind.as_str()
    )?;
    for n in &graph.nodes {
        writeln!(w, r#"    <node id="{}">"#, xml_escape(&n.key))?;
        writeln!(w, r#"      <data key="nw">{}</data>"#, n.weight)?;
        for (i, k) in attr_keys.iter().enumerate() {
            if let Some(v) = n.attrs.get(*k) {
                writeln!(w, r#"      <data key="na{i}">{}</data>"#, xml_escape(v))?;
            }
        }
        writeln!(w, "    </node>")?;
    }
    for e in &graph.edges {
        writeln!(
            w,
            r#"    <edge source="{}" target="{}">"#,
            xml_escape(&e.a),
            xml_escape(&e.b)
        )?;
        writeln!(w, r#"      <data key="ew">{}</data>"#, e.weight)?;
        writeln!(w, "    </edge>")?;
    }
    writeln!(w, "  </graph>")?;
    writeln!(w, "</graphml>")?;
    Ok(())
}

/// Pajek `.net`: 1-based vertex list then an undirected edge list.
pub fn write_pajek<W: Write>(graph: &WeightedGraph, mut w: W) -> Result<(), GraphError> {
    let index: std::collections::HashMap<&str, usize> = graph
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.key.as_str(), i + 1))
        .collect();
    writeln!(w, "*Vertices {}", graph.nodes.len())?;
    for (i, n) in graph.nodes.iter().enumerate() {
        writeln!(w, "{} \"{}\"", i + 1, n.key.replace('"', "'"))?;
    }
    writeln!(w, "*Edges")?;
    for e in &graph.edges {
        writeln!(w, "{} {} {}", index[e.a.as_str()], index[e.b.as_str()], e.weight)?;
    }
    Ok(())
}
