//! Readers for the FOON text formats: subgraph files, kitchen files, and
//! motion success-rate files.
//!
//! Subgraph grammar (UTF-8, TAB-separated fields, LF or CRLF endings):
//!
//! ```text
//! # comment                          ignored
//! //                                 functional-unit delimiter
//! O<TAB>object-name                  begins an object block
//! S<TAB>state-label                  adds a state to the current object
//! S<TAB>state-label<TAB>{i1,i2}      adds a state and ingredients
//! S<TAB>{i1,i2}                      adds ingredients without a state
//! M<TAB>motion-name                  the unit's single motion
//! ```
//!
//! Object blocks before the `M` line are the unit's inputs, blocks after it
//! the outputs. Record tags are matched case-insensitively on input; the
//! canonical writer always emits them uppercase. Blank lines are ignored
//! everywhere, as are lines whose first non-blank character is `#`.

use std::fmt;

use thiserror::Error;

use crate::model::{FunctionalUnit, Kitchen, MotionNode, ObjectNode};
use crate::rates::MotionRateTable;

/// What went wrong, attached to the offending physical line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    BadRecordTag,
    ObjectBeforeMotionMissing,
    MotionMissing,
    MultipleMotions,
    StateWithoutObject,
    EmptyUnitSide,
    BadRate,
    BadIngredientList,
    StrayText,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ParseErrorKind::BadRecordTag => "bad_record_tag",
            ParseErrorKind::ObjectBeforeMotionMissing => "object_before_motion_missing",
            ParseErrorKind::MotionMissing => "motion_missing",
            ParseErrorKind::MultipleMotions => "multiple_motions",
            ParseErrorKind::StateWithoutObject => "state_without_object",
            ParseErrorKind::EmptyUnitSide => "empty_unit_side",
            ParseErrorKind::BadRate => "bad_rate",
            ParseErrorKind::BadIngredientList => "bad_ingredient_list",
            ParseErrorKind::StrayText => "stray_text",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{file}:{line}: {message} ({kind})")]
pub struct ParseError {
    pub file: String,
    pub line: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    fn new(file: &str, line: usize, kind: ParseErrorKind, message: impl Into<String>) -> Self {
        ParseError {
            file: file.to_string(),
            line,
            kind,
            message: message.into(),
        }
    }
}

/// A non-fatal observation made while parsing, e.g. an overridden duplicate
/// rate line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub file: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: warning: {}", self.file, self.line, self.message)
    }
}

/// One classified physical line.
enum Record {
    Delimiter,
    Object(String),
    State {
        label: Option<String>,
        ingredients: Option<Vec<String>>,
    },
    Motion(String),
}

/// Splits an ingredient list field `{a,b,c}` into its trimmed elements.
fn parse_ingredient_field(
    field: &str,
    file: &str,
    line: usize,
) -> Result<Vec<String>, ParseError> {
    let field = field.trim();
    if !field.starts_with('{') || !field.ends_with('}') || field.len() < 2 {
        return Err(ParseError::new(
            file,
            line,
            ParseErrorKind::BadIngredientList,
            format!("expected ingredient list {{a,b,c}}, found \"{field}\""),
        ));
    }
    let inner = &field[1..field.len() - 1];
    if inner.contains(['{', '}']) {
        return Err(ParseError::new(
            file,
            line,
            ParseErrorKind::BadIngredientList,
            "nested braces in ingredient list",
        ));
    }
    Ok(inner
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::to_string)
        .collect())
}

/// Classifies a line, or returns `None` for blanks and comments.
fn classify(line: &str, file: &str, number: usize) -> Result<Option<Record>, ParseError> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    if trimmed == "//" {
        return Ok(Some(Record::Delimiter));
    }

    let fields: Vec<&str> = line.split('\t').collect();
    let tag = fields[0].trim();
    match tag.to_ascii_uppercase().as_str() {
        "O" => {
            if fields.len() != 2 || fields[1].trim().is_empty() {
                return Err(ParseError::new(
                    file,
                    number,
                    ParseErrorKind::StrayText,
                    "O record must be O<TAB>object-name",
                ));
            }
            Ok(Some(Record::Object(fields[1].to_string())))
        }
        "S" => match fields.len() {
            2 => {
                let field = fields[1].trim();
                if field.is_empty() {
                    return Err(ParseError::new(
                        file,
                        number,
                        ParseErrorKind::StrayText,
                        "S record has no state label",
                    ));
                }
                if field.starts_with('{') {
                    let ingredients = parse_ingredient_field(field, file, number)?;
                    Ok(Some(Record::State {
                        label: None,
                        ingredients: Some(ingredients),
                    }))
                } else {
                    Ok(Some(Record::State {
                        label: Some(field.to_string()),
                        ingredients: None,
                    }))
                }
            }
            3 => {
                let label = fields[1].trim();
                if label.is_empty() {
                    return Err(ParseError::new(
                        file,
                        number,
                        ParseErrorKind::StrayText,
                        "S record has no state label",
                    ));
                }
                let ingredients = parse_ingredient_field(fields[2], file, number)?;
                Ok(Some(Record::State {
                    label: Some(label.to_string()),
                    ingredients: Some(ingredients),
                }))
            }
            _ => Err(ParseError::new(
                file,
                number,
                ParseErrorKind::StrayText,
                "S record must be S<TAB>state[<TAB>{ingredients}]",
            )),
        },
        "M" => {
            if fields.len() != 2 || fields[1].trim().is_empty() {
                return Err(ParseError::new(
                    file,
                    number,
                    ParseErrorKind::StrayText,
                    "M record must be M<TAB>motion-name",
                ));
            }
            Ok(Some(Record::Motion(fields[1].to_string())))
        }
        other => Err(ParseError::new(
            file,
            number,
            ParseErrorKind::BadRecordTag,
            format!("unknown record tag \"{other}\""),
        )),
    }
}

/// An object block under construction.
struct ObjectBuilder {
    name: String,
    states: Vec<String>,
    ingredients: Vec<String>,
    line: usize,
}

impl ObjectBuilder {
    fn build(self, file: &str) -> Result<ObjectNode, ParseError> {
        ObjectNode::new(&self.name, &self.states, &self.ingredients).map_err(|e| {
            ParseError::new(file, self.line, ParseErrorKind::StrayText, e.to_string())
        })
    }
}

/// A functional unit under construction.
#[derive(Default)]
struct UnitBuilder {
    inputs: Vec<ObjectNode>,
    motion: Option<MotionNode>,
    outputs: Vec<ObjectNode>,
    current: Option<ObjectBuilder>,
}

impl UnitBuilder {
    fn is_vacant(&self) -> bool {
        self.inputs.is_empty()
            && self.motion.is_none()
            && self.outputs.is_empty()
            && self.current.is_none()
    }

    fn flush_object(&mut self, file: &str) -> Result<(), ParseError> {
        if let Some(builder) = self.current.take() {
            let node = builder.build(file)?;
            if self.motion.is_none() {
                self.inputs.push(node);
            } else {
                self.outputs.push(node);
            }
        }
        Ok(())
    }

    /// Closes the unit at a delimiter or EOF. `line` is the line to blame
    /// when the unit is incomplete.
    fn finish(mut self, file: &str, line: usize) -> Result<Option<FunctionalUnit>, ParseError> {
        self.flush_object(file)?;
        if self.is_vacant() {
            return Ok(None);
        }
        let motion = self.motion.ok_or_else(|| {
            ParseError::new(
                file,
                line,
                ParseErrorKind::MotionMissing,
                "functional unit has no M line",
            )
        })?;
        if self.outputs.is_empty() {
            return Err(ParseError::new(
                file,
                line,
                ParseErrorKind::EmptyUnitSide,
                "functional unit has no output objects",
            ));
        }
        let unit = FunctionalUnit::new(self.inputs, motion, self.outputs)
            .map_err(|e| ParseError::new(file, line, ParseErrorKind::StrayText, e.to_string()))?;
        Ok(Some(unit))
    }
}

/// Parses a subgraph file into its functional units, in file order.
///
/// `source` labels errors (usually the file path).
pub fn parse_subgraph(text: &str, source: &str) -> Result<Vec<FunctionalUnit>, ParseError> {
    let mut units = Vec::new();
    let mut builder = UnitBuilder::default();
    let mut last_line = 0;

    for (i, raw) in text.split('\n').enumerate() {
        let number = i + 1;
        if !raw.trim().is_empty() {
            last_line = number;
        }
        let record = match classify(raw, source, number)? {
            Some(r) => r,
            None => continue,
        };
        match record {
            Record::Delimiter => {
                if let Some(unit) = std::mem::take(&mut builder).finish(source, number)? {
                    units.push(unit);
                }
            }
            Record::Object(name) => {
                builder.flush_object(source)?;
                builder.current = Some(ObjectBuilder {
                    name,
                    states: Vec::new(),
                    ingredients: Vec::new(),
                    line: number,
                });
            }
            Record::State { label, ingredients } => {
                let object = builder.current.as_mut().ok_or_else(|| {
                    ParseError::new(
                        source,
                        number,
                        ParseErrorKind::StateWithoutObject,
                        "S line has no preceding O line",
                    )
                })?;
                if let Some(label) = label {
                    object.states.push(label);
                }
                if let Some(list) = ingredients {
                    object.ingredients.extend(list);
                }
            }
            Record::Motion(name) => {
                builder.flush_object(source)?;
                if builder.motion.is_some() {
                    return Err(ParseError::new(
                        source,
                        number,
                        ParseErrorKind::MultipleMotions,
                        "functional unit already has a motion",
                    ));
                }
                if builder.inputs.is_empty() {
                    return Err(ParseError::new(
                        source,
                        number,
                        ParseErrorKind::ObjectBeforeMotionMissing,
                        "M line with no input objects before it",
                    ));
                }
                builder.motion = Some(MotionNode::new(&name).map_err(|e| {
                    ParseError::new(source, number, ParseErrorKind::StrayText, e.to_string())
                })?);
            }
        }
    }

    if let Some(unit) = builder.finish(source, last_line.max(1))? {
        units.push(unit);
    }
    Ok(units)
}

/// Parses a kitchen file: object blocks only, `//` separators optional,
/// motion lines rejected. Duplicate identities collapse silently.
pub fn parse_kitchen(text: &str, source: &str) -> Result<Kitchen, ParseError> {
    let mut kitchen = Kitchen::new();
    let mut current: Option<ObjectBuilder> = None;

    let flush = |current: &mut Option<ObjectBuilder>,
                 kitchen: &mut Kitchen|
     -> Result<(), ParseError> {
        if let Some(builder) = current.take() {
            kitchen.insert(builder.build(source)?);
        }
        Ok(())
    };

    for (i, raw) in text.split('\n').enumerate() {
        let number = i + 1;
        let record = match classify(raw, source, number)? {
            Some(r) => r,
            None => continue,
        };
        match record {
            Record::Delimiter => flush(&mut current, &mut kitchen)?,
            Record::Object(name) => {
                flush(&mut current, &mut kitchen)?;
                current = Some(ObjectBuilder {
                    name,
                    states: Vec::new(),
                    ingredients: Vec::new(),
                    line: number,
                });
            }
            Record::State { label, ingredients } => {
                let object = current.as_mut().ok_or_else(|| {
                    ParseError::new(
                        source,
                        number,
                        ParseErrorKind::StateWithoutObject,
                        "S line has no preceding O line",
                    )
                })?;
                if let Some(label) = label {
                    object.states.push(label);
                }
                if let Some(list) = ingredients {
                    object.ingredients.extend(list);
                }
            }
            Record::Motion(_) => {
                return Err(ParseError::new(
                    source,
                    number,
                    ParseErrorKind::StrayText,
                    "M lines are not allowed in kitchen files",
                ));
            }
        }
    }
    flush(&mut current, &mut kitchen)?;
    Ok(kitchen)
}

/// Parses a motion success-rate file: `motion<TAB>rate` per line. Rates are
/// decimals in [0, 1]. A later line for the same motion overrides the
/// earlier one and produces a warning.
pub fn parse_motion_rates(
    text: &str,
    source: &str,
) -> Result<(MotionRateTable, Vec<ParseWarning>), ParseError> {
    let mut table = MotionRateTable::new();
    let mut warnings = Vec::new();

    for (i, raw) in text.split('\n').enumerate() {
        let number = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(ParseError::new(
                source,
                number,
                ParseErrorKind::StrayText,
                "rate record must be motion-name<TAB>rate",
            ));
        }
        let motion = MotionNode::new(fields[0]).map_err(|e| {
            ParseError::new(source, number, ParseErrorKind::StrayText, e.to_string())
        })?;
        let rate: f64 = fields[1].trim().parse().map_err(|_| {
            ParseError::new(
                source,
                number,
                ParseErrorKind::BadRate,
                format!("\"{}\" is not a decimal rate", fields[1].trim()),
            )
        })?;
        if !(0.0..=1.0).contains(&rate) {
            return Err(ParseError::new(
                source,
                number,
                ParseErrorKind::BadRate,
                format!("rate {rate} is outside [0, 1]"),
            ));
        }
        if table.stored_rate(&motion).is_some() {
            warnings.push(ParseWarning {
                file: source.to_string(),
                line: number,
                message: format!("duplicate rate for motion \"{}\"; last one wins", motion),
            });
        }
        table
            .insert(&motion, rate)
            .expect("rate already range-checked");
    }
    Ok((table, warnings))
}
