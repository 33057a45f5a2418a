use serde_json::{Map, Value};
use thiserror::Error;

use crate::tableau::{NodeId, Side, Tableau};

use super::parser::{parse_literal, ParseError};

#[derive(Debug, Error)]
pub enum TableauIoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("at {path}: {message}")]
    Format { path: String, message: String },
    #[error("at {path}: bad literal: {source}")]
    Literal { path: String, source: ParseError },
}

/// Reads the JSON tableau format: nested objects with an optional `lit`
/// (absent only at the root), an optional `side` (`"red"`/`"blue"`) and an
/// optional `children` array.
pub fn parse_tableau(text: &str) -> Result<Tableau, TableauIoError> {
    let value: Value = serde_json::from_str(text)?;
    let mut t = Tableau::new();
    let obj = as_object(&value, "$")?;
    if obj.contains_key("lit") {
        return Err(format_err("$", "the root must not carry a literal"));
    }
    read_children(&mut t, Tableau::ROOT, obj, "$")?;
    t.assign_targets();
    Ok(t)
}

fn format_err(path: &str, message: &str) -> TableauIoError {
    TableauIoError::Format {
        path: path.to_string(),
        message: message.to_string(),
    }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, TableauIoError> {
    v.as_object()
        .ok_or_else(|| format_err(path, "expected an object"))
}

fn read_children(
    t: &mut Tableau,
    parent: NodeId,
    obj: &Map<String, Value>,
    path: &str,
) -> Result<(), TableauIoError> {
    for key in obj.keys() {
        if !matches!(key.as_str(), "lit" | "side" | "children") {
            return Err(format_err(path, &format!("unknown key '{key}'")));
        }
    }
    let Some(children) = obj.get("children") else {
        return Ok(());
    };
    let children = children
        .as_array()
        .ok_or_else(|| format_err(path, "'children' must be an array"))?;
    for (i, child) in children.iter().enumerate() {
        let cpath = format!("{path}.children[{i}]");
        let cobj = as_object(child, &cpath)?;
        let lit_text = cobj
            .get("lit")
            .and_then(Value::as_str)
            .ok_or_else(|| format_err(&cpath, "non-root node needs a string 'lit'"))?;
        let lit = parse_literal(lit_text).map_err(|source| TableauIoError::Literal {
            path: cpath.clone(),
            source,
        })?;
        let side = match cobj.get("side") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) if s == "red" => Some(Side::Red),
            Some(Value::String(s)) if s == "blue" => Some(Side::Blue),
            Some(_) => return Err(format_err(&cpath, "'side' must be \"red\" or \"blue\"")),
        };
        let id = t.add_child(parent, lit, side, None);
        read_children(t, id, cobj, &cpath)?;
    }
    Ok(())
}

/// Writes the JSON tableau format, pretty-printed. Leaves omit `children`.
pub fn print_tableau(t: &Tableau) -> String {
    let value = node_value(t, Tableau::ROOT);
    serde_json::to_string_pretty(&value).expect("tableau JSON is always serializable")
}

fn node_value(t: &Tableau, id: NodeId) -> Value {
    let mut obj = Map::new();
    if let Some(l) = t.lit(id) {
        obj.insert("lit".into(), Value::String(l.to_string()));
    }
    if let Some(s) = t.node(id).side {
        obj.insert("side".into(), Value::String(s.name().into()));
    }
    if !t.is_leaf(id) {
        obj.insert(
            "children".into(),
            Value::Array(t.children(id).iter().map(|&c| node_value(t, c)).collect()),
        );
    }
    Value::Object(obj)
}

/// Indented one-node-per-line rendering for terminals and traces.
pub fn render_tableau(t: &Tableau) -> String {
    let mut out = String::new();
    for id in t.preorder() {
        let depth = t.depth(id);
        let label = match t.lit(id) {
            Some(l) => l.to_string(),
            None => "·".to_string(),
        };
        let side = t
            .node(id)
            .side
            .map(|s| format!(" [{s}]"))
            .unwrap_or_default();
        out.push_str(&format!("{}{label}{side}\n", "  ".repeat(depth)));
    }
    out
}
