//! JSON files for graphs and patterns.
//!
//! A pattern file names its graph either inline or by a path relative to the file:
//!
//! ```json
//! {"graph":"k3.json","d":2,
//!  "region":{"kind":"box","origin":[-1,-1],"extents":[3,3]},
//!  "cells":[["1","2","1"],["2","3","2"],["1","2","1"]]}
//! ```
//!
//! Boxes and tori nest `cells` by axis, first axis outermost. Diamonds and explicit
//! site lists use a flat list in lexicographic site order. `null` marks a free cell in
//! a boundary condition.

use std::path::Path;
use std::sync::Arc;

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::pattern::{PartialPattern, Pattern};
use crate::region::{Region, RegionKind};

fn json_error(what: &str, e: &serde_json::Error) -> Error {
    Error::invalid(format!("{what}: line {} column {}: {e}", e.line(), e.column()))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    serde_json::from_str(text).map_err(|e| json_error("graph", &e))
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| json_error(&path.display().to_string(), &e))
}

fn nest(region: &Region, cells: &[Value]) -> Value {
    match region.kind() {
        RegionKind::Box { extents, .. } | RegionKind::Torus { extents } => nest_rec(extents, cells),
        _ => Value::Array(cells.to_vec()),
    }
}

fn nest_rec(extents: &[usize], cells: &[Value]) -> Value {
    if extents.len() <= 1 {
        return Value::Array(cells.to_vec());
    }
    let stride: usize = extents[1..].iter().product();
    Value::Array(cells.chunks(stride.max(1)).map(|c| nest_rec(&extents[1..], c)).collect())
}

fn pattern_value(g: &Graph, region: &Region, cells: Vec<Value>) -> Value {
    json!({
        "graph": g,
        "d": region.dim(),
        "region": region.kind(),
        "cells": nest(region, &cells),
    })
}

/// Pattern as JSON with the graph inline.
pub fn pattern_to_value(p: &Pattern) -> Value {
    let cells = (0..p.region().len()).map(|i| Value::from(p.label_at(i))).collect();
    pattern_value(p.graph(), p.region(), cells)
}

pub fn partial_to_value(p: &PartialPattern) -> Value {
    let cells = p
        .cells()
        .iter()
        .map(|c| c.map_or(Value::Null, |v| Value::from(p.graph().label(v))))
        .collect();
    pattern_value(p.graph(), p.region(), cells)
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        pattern_to_value(self).serialize(s).map_err(S::Error::custom)
    }
}

impl Serialize for PartialPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        partial_to_value(self).serialize(s)
    }
}

fn flatten(region: &Region, cells: &Value) -> Result<Vec<Value>> {
    let mut out = Vec::with_capacity(region.len());
    match region.kind() {
        RegionKind::Box { extents, .. } | RegionKind::Torus { extents } => {
            flatten_rec(extents, cells, "cells".into(), &mut out)?
        }
        _ => {
            let arr = cells
                .as_array()
                .ok_or_else(|| Error::invalid("cells: expected a flat list"))?;
            if arr.len() != region.len() {
                return Err(Error::invalid(format!(
                    "cells: expected {} entries, found {}",
                    region.len(),
                    arr.len()
                )));
            }
            out.extend(arr.iter().cloned());
        }
    }
    Ok(out)
}

fn flatten_rec(extents: &[usize], v: &Value, at: String, out: &mut Vec<Value>) -> Result<()> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::invalid(format!("{at}: expected a list")))?;
    if arr.len() != extents[0] {
        return Err(Error::invalid(format!(
            "{at}: expected {} entries, found {}",
            extents[0],
            arr.len()
        )));
    }
    for (k, item) in arr.iter().enumerate() {
        if extents.len() == 1 {
            out.push(item.clone());
        } else {
            flatten_rec(&extents[1..], item, format!("{at}[{k}]"), out)?;
        }
    }
    Ok(())
}

/// Where a pattern file gets its graph from.
#[derive(Debug, Clone, Copy, Default)]
pub struct GraphSource<'a> {
    /// Graph given separately (for example on the command line).
    pub graph: Option<&'a Arc<Graph>>,
    /// Directory against which a graph path in the file is resolved.
    pub base_dir: Option<&'a Path>,
}

fn resolve_graph(field: Option<&Value>, src: GraphSource<'_>) -> Result<Arc<Graph>> {
    let from_file = match field {
        None | Some(Value::Null) => None,
        Some(Value::String(path)) => {
            let p = match src.base_dir {
                Some(dir) => dir.join(path),
                None => Path::new(path).to_path_buf(),
            };
            Some(read_graph(&p)?)
        }
        Some(v) => Some(serde_json::from_value::<Graph>(v.clone()).map_err(|e| Error::invalid(format!("graph: {e}")))?),
    };
    match (from_file, src.graph) {
        (Some(g), Some(given)) if g != **given => Err(Error::invalid(
            "the pattern's graph differs from the graph given separately",
        )),
        (_, Some(given)) => Ok(given.clone()),
        (Some(g), None) => Ok(Arc::new(g)),
        (None, None) => Err(Error::invalid("graph: missing, and no graph given separately")),
    }
}

fn parse_common(text: &str, src: GraphSource<'_>) -> Result<(Arc<Graph>, Arc<Region>, Vec<Value>)> {
    let v: Value = serde_json::from_str(text).map_err(|e| json_error("pattern", &e))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::invalid("pattern: expected a JSON object"))?;
    let graph = resolve_graph(obj.get("graph"), src)?;
    let kind: RegionKind = serde_json::from_value(
        obj.get("region")
            .cloned()
            .ok_or_else(|| Error::invalid("region: missing"))?,
    )
    .map_err(|e| Error::invalid(format!("region: {e}")))?;
    let region = Region::new(kind)?;
    if let Some(d) = obj.get("d") {
        let d = d.as_u64().ok_or_else(|| Error::invalid("d: expected a natural number"))?;
        if d as usize != region.dim() {
            return Err(Error::invalid(format!("d = {d} but the region has dimension {}", region.dim())));
        }
    }
    let cells = flatten(&region, obj.get("cells").ok_or_else(|| Error::invalid("cells: missing"))?)?;
    Ok((graph, Arc::new(region), cells))
}

fn symbol(g: &Graph, v: &Value, k: usize) -> Result<Option<Vertex>> {
    match v {
        Value::Null => Ok(None),
        Value::String(s) => g
            .vertex(s)
            .map(Some)
            .ok_or_else(|| Error::invalid(format!("cells: entry {k}: {s:?} is not a vertex of the graph"))),
        other => Err(Error::invalid(format!("cells: entry {k}: expected a label, found {other}"))),
    }
}

pub fn parse_pattern(text: &str, src: GraphSource<'_>) -> Result<Pattern> {
    let (g, region, cells) = parse_common(text, src)?;
    let vals = cells
        .iter()
        .enumerate()
        .map(|(k, v)| symbol(&g, v, k)?.ok_or_else(|| Error::invalid(format!("cells: entry {k} is null"))))
        .collect::<Result<Vec<_>>>()?;
    Pattern::new(g, region, vals)
}

pub fn parse_partial_pattern(text: &str, src: GraphSource<'_>) -> Result<PartialPattern> {
    let (g, region, cells) = parse_common(text, src)?;
    let vals = cells
        .iter()
        .enumerate()
        .map(|(k, v)| symbol(&g, v, k))
        .collect::<Result<Vec<_>>>()?;
    PartialPattern::new(g, region, vals)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

/// Reads a pattern file; a relative graph path is resolved against the file's directory.
pub fn read_pattern(path: &Path, graph: Option<&Arc<Graph>>) -> Result<Pattern> {
    let text = read_text(path)?;
    parse_pattern(
        &text,
        GraphSource {
            graph,
            base_dir: path.parent(),
        },
    )
    .map_err(|e| prefix(path, e))
}

pub fn read_partial_pattern(path: &Path, graph: Option<&Arc<Graph>>) -> Result<PartialPattern> {
    let text = read_text(path)?;
    parse_partial_pattern(
        &text,
        GraphSource {
            graph,
            base_dir: path.parent(),
        },
    )
    .map_err(|e| prefix(path, e))
}

fn prefix(path: &Path, e: Error) -> Error {
    match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("{}: {m}", path.display())),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NO_SRC: GraphSource<'static> = GraphSource {
        graph: None,
        base_dir: None,
    };

    #[test]
    fn round_trip_box() {
        let g = Arc::new(Graph::edge());
        let p = Pattern::from_fn(g, Arc::new(Region::cube(1, 2)), |s| ((s[0] + s[1]).rem_euclid(2)) as usize).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains(r#""cells":[["a","b","a"],["b","a","b"],["a","b","a"]]"#));
        assert_eq!(parse_pattern(&text, NO_SRC).unwrap(), p);
    }

    #[test]
    fn round_trip_other_regions() {
        let g = Arc::new(Graph::cycle(5));
        for region in [Region::diamond(2, 2), Region::torus(&[5, 5]).unwrap(), Region::rect(&[2, 2, 2])] {
            let p = Pattern::from_fn(g.clone(), Arc::new(region), |s| s.iter().sum::<i64>().rem_euclid(5) as usize)
                .unwrap();
            let text = serde_json::to_string(&p).unwrap();
            assert_eq!(parse_pattern(&text, NO_SRC).unwrap(), p);
        }
    }

    #[test]
    fn partial_round_trip() {
        let g = Arc::new(Graph::edge());
        let p = Pattern::from_fn(g, Arc::new(Region::rect(&[3, 3])), |s| ((s[0] + s[1]) % 2) as usize).unwrap();
        let b = p.outer_layers(1);
        let text = serde_json::to_string(&b).unwrap();
        assert!(text.contains("null"));
        assert_eq!(parse_partial_pattern(&text, NO_SRC).unwrap(), b);
        assert!(parse_pattern(&text, NO_SRC).is_err());
    }

    #[test]
    fn diagnostics() {
        let bad = r#"{"graph":{"vertices":["a","b"],"edges":[["a","b"]]},"d":2,
            "region":{"kind":"box","origin":[0,0],"extents":[2,2]},"cells":[["a","b"],["b"]]}"#;
        let e = parse_pattern(bad, NO_SRC).unwrap_err().to_string();
        assert!(e.contains("cells[1]"), "{e}");
        let e = parse_pattern("{\"graph\": [", NO_SRC).unwrap_err().to_string();
        assert!(e.contains("line 1"), "{e}");
        let unknown = r#"{"graph":{"vertices":["a","b"],"edges":[["a","b"]]},"d":1,
            "region":{"kind":"box","origin":[0],"extents":[2]},"cells":["a","q"]}"#;
        assert!(parse_pattern(unknown, NO_SRC).unwrap_err().to_string().contains("\"q\""));
        let e = parse_graph(r#"{"vertices":["a","b"],"edges":[["a","b"],["b","a"]]}"#).unwrap_err();
        assert!(matches!(e, Error::InvalidInput(_)));
    }

    #[test]
    fn separate_graph() {
        let g = Arc::new(Graph::edge());
        let text = r#"{"d":1,"region":{"kind":"box","origin":[0],"extents":[2]},"cells":["a","b"]}"#;
        assert!(parse_pattern(text, NO_SRC).is_err());
        let src = GraphSource {
            graph: Some(&g),
            base_dir: None,
        };
        assert_eq!(parse_pattern(text, src).unwrap().cells(), &[0, 1]);
    }
}
