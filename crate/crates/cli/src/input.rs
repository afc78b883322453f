//! Reading and classifying input documents.

use std::fs;
use std::io::{self, Read};

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};
use weaklp::embeddings::{BlockLayout, LevelStack};
use weaklp::{AtomicVector, DyadicStep};

use crate::CliError;

/// A parsed input object, classified by which field it carries.
#[derive(Debug)]
pub enum Input {
    /// `{"atoms": [...]}`, optionally with a `"layout"` as printed by the
    /// block-layout verbs.
    Atoms(AtomicVector, Option<BlockLayout>),
    Step(DyadicStep),
    Stack(LevelStack),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Atoms(..) => "atomic vector",
            Input::Step(_) => "dyadic step",
            Input::Stack(_) => "level stack",
        }
    }
}

/// Inline JSON if the argument starts with `{`, a file path otherwise,
/// standard input if absent.
pub fn read_source(arg: Option<&str>) -> Result<String, CliError> {
    match arg {
        Some(text) if text.trim_start().starts_with('{') => Ok(text.to_string()),
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read `{path}`: {e}"))),
        None => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
            Ok(text)
        }
    }
}

pub fn parse(text: &str) -> Result<Input, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    let Value::Object(obj) = value else {
        return Err(CliError::Input("input must be a JSON object".into()));
    };
    if obj.contains_key("levels") {
        Ok(Input::Stack(typed(Value::Object(obj), "")?))
    } else if obj.contains_key("atoms") {
        let layout = layout_field(&obj)?;
        Ok(Input::Atoms(typed(Value::Object(obj), "")?, layout))
    } else if obj.contains_key("values") {
        Ok(Input::Step(typed(Value::Object(obj), "")?))
    } else {
        Err(CliError::Input(
            "input object needs one of the fields `atoms`, `values` or `levels`".into(),
        ))
    }
}

fn layout_field(obj: &Map<String, Value>) -> Result<Option<BlockLayout>, CliError> {
    obj.get("layout").map(|l| typed(l.clone(), "layout")).transpose()
}

/// Deserializes `value`, reporting the path of the offending field.
fn typed<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner == ".") {
            (true, true) => String::new(),
            (true, false) => inner,
            (false, true) => prefix.to_string(),
            (false, false) => format!("{prefix}.{inner}"),
        };
        let reason = e.into_inner();
        if path.is_empty() {
            CliError::Input(format!("invalid input: {reason}"))
        } else {
            CliError::Input(format!("invalid field `{path}`: {reason}"))
        }
    })
}
