use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::connection::Connection;
use crate::exterior::{Form, SubmanifoldMap, VectorField};
use crate::geometry::Metric;
use crate::symbolic::{parse_with, Chart, Expr, ParseError, SamplingPolicy, SymbolTable};

/// Problems with the scenario itself, as opposed to failed checks.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("file not found: {0}")]
    FileNotFound(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },

    #[error("parse error in {context}: {source}")]
    Expression {
        context: String,
        #[source]
        source: ParseError,
    },

    #[error("validation error: {0}")]
    Validation(String),
}

impl InputError {
    pub fn kind(&self) -> &'static str {
        match self {
            InputError::FileNotFound(_) => "FileNotFound",
            InputError::Json { .. } | InputError::Expression { .. } => "ParseError",
            InputError::Validation(_) => "ValidationError",
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> InputError {
    InputError::Validation(msg.into())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    chart: Vec<String>,
    #[serde(default)]
    params: Vec<String>,
    #[serde(default)]
    functions: Vec<String>,
    #[serde(default)]
    metric: Option<Vec<Vec<String>>>,
    #[serde(default)]
    det_sign: Option<i8>,
    #[serde(default)]
    connection: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default)]
    forms: BTreeMap<String, RawForm>,
    #[serde(default)]
    fields: BTreeMap<String, RawField>,
    #[serde(default)]
    maps: BTreeMap<String, RawMap>,
    #[serde(default)]
    tasks: Vec<RawTask>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForm {
    degree: usize,
    #[serde(default)]
    components: BTreeMap<String, String>,
    #[serde(default)]
    chart: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    components: Vec<String>,
    #[serde(default)]
    chart: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    source: Vec<String>,
    map: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub(crate) struct RawTask {
    pub op: String,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub expect: Option<String>,
    #[serde(flatten)]
    pub args: Map<String, Value>,
}

/// A loaded, validated scenario: every expression parsed and every object
/// constructed.
#[derive(Debug)]
pub struct Scenario {
    pub chart: Chart,
    pub params: Vec<String>,
    pub functions: Vec<String>,
    pub metric: Option<Metric>,
    pub connection: Option<Connection>,
    pub forms: BTreeMap<String, Form>,
    pub fields: BTreeMap<String, VectorField>,
    pub maps: BTreeMap<String, SubmanifoldMap>,
    pub(crate) tasks: Vec<RawTask>,
}

impl Scenario {
    pub fn load(path: &Path, policy: &SamplingPolicy) -> Result<Scenario, InputError> {
        let text = std::fs::read_to_string(path)
            .map_err(|_| InputError::FileNotFound(path.display().to_string()))?;
        Scenario::from_json(&text, policy)
    }

    pub fn from_json(text: &str, policy: &SamplingPolicy) -> Result<Scenario, InputError> {
        let raw: RawScenario = serde_json::from_str(text).map_err(|e| {
            let message = e.to_string();
            let message = match message.rfind(" at line ") {
                Some(i) => message[..i].to_string(),
                None => message,
            };
            match e.classify() {
                serde_json::error::Category::Data => InputError::Validation(format!(
                    "line {}, column {}: {message}",
                    e.line(),
                    e.column()
                )),
                _ => InputError::Json {
                    line: e.line(),
                    column: e.column(),
                    message,
                },
            }
        })?;
        Scenario::build(raw, policy)
    }

    fn build(raw: RawScenario, policy: &SamplingPolicy) -> Result<Scenario, InputError> {
        let chart = make_chart(&raw.chart, "chart")?;
        for name in raw.params.iter().chain(&raw.functions) {
            if !crate::symbolic::is_identifier(name) {
                return Err(invalid(format!("`{name}` is not a valid identifier")));
            }
            if chart.index_of(name).is_some() {
                return Err(invalid(format!("`{name}` is both a coordinate and a parameter or function")));
            }
        }
        let mut sc = Scenario {
            chart,
            params: raw.params,
            functions: raw.functions,
            metric: None,
            connection: None,
            forms: BTreeMap::new(),
            fields: BTreeMap::new(),
            maps: BTreeMap::new(),
            tasks: raw.tasks,
        };
        let n = sc.chart.dim();
        if let Some(rows) = &raw.metric {
            let det_sign = raw
                .det_sign
                .ok_or_else(|| invalid("metric given without det_sign"))?;
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(invalid(format!("metric must be {n}x{n}")));
            }
            let g = rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, s)| sc.expr(s, &sc.chart, &format!("metric[{i}][{j}]")))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let metric = Metric::with_policy(&sc.chart, g, det_sign, policy)
                .map_err(|e| invalid(format!("metric: {e}")))?;
            sc.metric = Some(metric);
        } else if raw.det_sign.is_some() {
            return Err(invalid("det_sign given without metric"));
        }
        if let Some(gamma) = &raw.connection {
            let parsed = gamma
                .iter()
                .enumerate()
                .map(|(s, plane)| {
                    plane
                        .iter()
                        .enumerate()
                        .map(|(a, row)| {
                            row.iter()
                                .enumerate()
                                .map(|(b, e)| sc.expr(e, &sc.chart, &format!("connection[{s}][{a}][{b}]")))
                                .collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let c = Connection::new(&sc.chart, parsed).map_err(|e| invalid(format!("connection: {e}")))?;
            sc.connection = Some(c);
        }
        for (name, m) in &raw.maps {
            let source = make_chart(&m.source, &format!("maps.{name}.source"))?;
            let exprs = m
                .map
                .iter()
                .enumerate()
                .map(|(i, s)| sc.expr(s, &source, &format!("maps.{name}.map[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let phi = SubmanifoldMap::new(source, sc.chart.clone(), exprs)
                .map_err(|e| invalid(format!("maps.{name}: {e}")))?;
            sc.maps.insert(name.clone(), phi);
        }
        for (name, f) in &raw.forms {
            let chart = match &f.chart {
                Some(names) => make_chart(names, &format!("forms.{name}.chart"))?,
                None => sc.chart.clone(),
            };
            let mut comps = Vec::new();
            for (key, text) in &f.components {
                let idx = parse_index_key(key).ok_or_else(|| {
                    invalid(format!("forms.{name}: component key `{key}` is not a comma-separated index list"))
                })?;
                comps.push((idx, sc.expr(text, &chart, &format!("forms.{name}.components[{key}]"))?));
            }
            let form = Form::from_components(&chart, f.degree, comps)
                .map_err(|e| invalid(format!("forms.{name}: {e}")))?;
            sc.forms.insert(name.clone(), form);
        }
        for (name, v) in &raw.fields {
            let chart = match &v.chart {
                Some(names) => make_chart(names, &format!("fields.{name}.chart"))?,
                None => sc.chart.clone(),
            };
            let comps = v
                .components
                .iter()
                .enumerate()
                .map(|(i, s)| sc.expr(s, &chart, &format!("fields.{name}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let field = VectorField::new(&chart, comps).map_err(|e| invalid(format!("fields.{name}: {e}")))?;
            sc.fields.insert(name.clone(), field);
        }
        Ok(sc)
    }

    /// Parse `text` with the coordinates of `chart` plus the scenario's
    /// parameters and functions in scope.
    pub fn expr(&self, text: &str, chart: &Chart, context: &str) -> Result<Expr, InputError> {
        let table = SymbolTable::new(chart, &self.params, &self.functions);
        parse_with(text, &table).map_err(|source| InputError::Expression {
            context: context.to_string(),
            source,
        })
    }
}

pub(crate) fn make_chart(names: &[String], context: &str) -> Result<Chart, InputError> {
    Chart::new(names).map_err(|e| invalid(format!("{context}: {e}")))
}

fn parse_index_key(key: &str) -> Option<Vec<usize>> {
    if key.trim().is_empty() {
        return Some(Vec::new());
    }
    key.split(',').map(|s| s.trim().parse().ok()).collect()
}
