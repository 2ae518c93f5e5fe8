//! Library half of the `fano-scrolls` front end: run configuration, the
//! report document written by `classify`, and a small JSON Schema checker
//! used to validate emitted reports against the schema shipped in
//! `schema/classification-report.schema.json`.

use fano_scrolls::{classify_all_with, Classification, ClassifyError};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

/// The schema the JSON report is validated against, embedded from the copy
/// shipped in the repository.
pub const CLASSIFICATION_SCHEMA: &str =
    include_str!("../../../schema/classification-report.schema.json");

/// Configuration of a `classify` run: everything the computation depends
/// on, and nothing about where the result lands.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub bound: i64,
    pub seeds: Vec<u64>,
    pub scan_prime: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            bound: fano_scrolls::DEFAULT_BOUND,
            seeds: fano_scrolls::DEFAULT_SEEDS.to_vec(),
            scan_prime: fano_scrolls::DEFAULT_SCAN_PRIME,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("bound must be at least 10, got {0}")]
    BoundTooSmall(i64),
    #[error("at least one seed is required")]
    NoSeeds,
    #[error("scan prime must be a prime number, got {0}")]
    NotPrime(u64),
}

/// Trial-division primality check; the scan primes in play are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.bound < 10 {
            return Err(ConfigError::BoundTooSmall(self.bound));
        }
        if self.seeds.is_empty() {
            return Err(ConfigError::NoSeeds);
        }
        if !is_prime(self.scan_prime) {
            return Err(ConfigError::NotPrime(self.scan_prime));
        }
        Ok(())
    }
}

/// The document `classify` writes: the configuration, the classification it
/// produced, and the comparison against the embedded reference list.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationDocument {
    pub config: RunConfig,
    pub classification: Classification,
    pub matches_reference: bool,
}

impl ClassificationDocument {
    /// Run the full pipeline under the given configuration. The
    /// configuration is assumed validated.
    pub fn build(config: RunConfig) -> Result<Self, ClassifyError> {
        let classification = classify_all_with(config.bound, &config.seeds, config.scan_prime)?;
        let matches_reference = classification.matches_reference();
        Ok(ClassificationDocument {
            config,
            classification,
            matches_reference,
        })
    }

    /// Pretty JSON with a trailing newline. Field order is fixed by the
    /// struct definitions, so identical configurations produce identical
    /// bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Markdown rendering: a configuration header followed by the table,
    /// the accepted list, the rejection summary, and the cone section.
    pub fn to_markdown(&self) -> String {
        let seeds = self
            .config
            .seeds
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        format!(
            "# Classification run\n\nbound: {}  \nseeds: {}  \nscan prime: {}  \nmatches reference: {}\n\n{}",
            self.config.bound,
            seeds,
            self.config.scan_prime,
            self.matches_reference,
            self.classification.to_markdown()
        )
    }
}

/// Check a JSON value against a schema written in the subset of JSON Schema
/// this project uses: `type` (single name or list), `enum`, `required`,
/// `properties`, `items`, and local `$ref` pointers into `definitions`.
/// Returns every violation with a JSON-pointer-style path.
pub fn validate_schema(schema: &Value, instance: &Value) -> Result<(), Vec<String>> {
    let mut errors = Vec::new();
    check(schema, schema, instance, "$", &mut errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// Validate a serialized classification report against the shipped schema.
pub fn validate_classification_json(json: &str) -> Result<(), Vec<String>> {
    let schema: Value = serde_json::from_str(CLASSIFICATION_SCHEMA)
        .map_err(|e| vec![format!("schema is not valid JSON: {e}")])?;
    let instance: Value =
        serde_json::from_str(json).map_err(|e| vec![format!("report is not valid JSON: {e}")])?;
    validate_schema(&schema, &instance)
}

fn resolve<'a>(root: &'a Value, pointer: &str) -> Option<&'a Value> {
    let path = pointer.strip_prefix("#")?;
    if path.is_empty() {
        return Some(root);
    }
    root.pointer(path)
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                "integer"
            } else {
                "number"
            }
        }
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn matches_type(instance: &Value, name: &str) -> bool {
    match name {
        // Every integer is also a number.
        "number" => matches!(instance, Value::Number(_)),
        other => type_name(instance) == other,
    }
}

fn check(root: &Value, schema: &Value, instance: &Value, path: &str, errors: &mut Vec<String>) {
    let obj = match schema {
        Value::Object(o) => o,
        Value::Bool(true) => return,
        Value::Bool(false) => {
            errors.push(format!("{path}: schema forbids any value"));
            return;
        }
        _ => {
            errors.push(format!("{path}: malformed schema node"));
            return;
        }
    };

    if let Some(Value::String(r)) = obj.get("$ref") {
        match resolve(root, r) {
            Some(target) => check(root, target, instance, path, errors),
            None => errors.push(format!("{path}: unresolvable $ref {r}")),
        }
        return;
    }

    if let Some(ty) = obj.get("type") {
        let names: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(|v| v.as_str()).collect(),
            _ => vec![],
        };
        if !names.is_empty() && !names.iter().any(|n| matches_type(instance, n)) {
            errors.push(format!(
                "{path}: expected type {}, found {}",
                names.join(" or "),
                type_name(instance)
            ));
            return;
        }
    }

    if let Some(Value::Array(options)) = obj.get("enum") {
        if !options.iter().any(|o| o == instance) {
            errors.push(format!("{path}: value not among the permitted constants"));
        }
    }

    if let Value::Object(fields) = instance {
        if let Some(Value::Array(req)) = obj.get("required") {
            for name in req.iter().filter_map(|v| v.as_str()) {
                if !fields.contains_key(name) {
                    errors.push(format!("{path}: missing required property \"{name}\""));
                }
            }
        }
        if let Some(Value::Object(props)) = obj.get("properties") {
            for (name, sub) in props {
                if let Some(value) = fields.get(name) {
                    check(root, sub, value, &format!("{path}.{name}"), errors);
                }
            }
        }
    }

    if let Value::Array(elems) = instance {
        if let Some(items) = obj.get("items") {
            for (i, elem) in elems.iter().enumerate() {
                check(root, items, elem, &format!("{path}[{i}]"), errors);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn config_validation_catches_each_defect() {
        let ok = RunConfig::default();
        assert!(ok.validate().is_ok());
        assert_eq!(
            RunConfig {
                bound: 9,
                ..RunConfig::default()
            }
            .validate(),
            Err(ConfigError::BoundTooSmall(9))
        );
        assert_eq!(
            RunConfig {
                seeds: vec![],
                ..RunConfig::default()
            }
            .validate(),
            Err(ConfigError::NoSeeds)
        );
        assert_eq!(
            RunConfig {
                scan_prime: 100,
                ..RunConfig::default()
            }
            .validate(),
            Err(ConfigError::NotPrime(100))
        );
        assert_eq!(
            RunConfig {
                scan_prime: 1,
                ..RunConfig::default()
            }
            .validate(),
            Err(ConfigError::NotPrime(1))
        );
    }

    #[test]
    fn the_shipped_schema_parses() {
        let schema: Value = serde_json::from_str(CLASSIFICATION_SCHEMA).unwrap();
        assert_eq!(schema["type"], "object");
        assert!(schema["definitions"]["filter_step"].is_object());
    }

    #[test]
    fn the_checker_accepts_and_rejects_handmade_instances() {
        let schema = json!({
            "type": "object",
            "required": ["name", "steps"],
            "properties": {
                "name": {"type": "string"},
                "kind": {"enum": ["a", "b"]},
                "steps": {
                    "type": "array",
                    "items": {"$ref": "#/definitions/step"}
                }
            },
            "definitions": {
                "step": {
                    "type": ["object", "null"],
                    "required": ["pass"],
                    "properties": {"pass": {"type": "boolean"}}
                }
            }
        });
        let good = json!({"name": "x", "kind": "a", "steps": [{"pass": true}, null]});
        assert!(validate_schema(&schema, &good).is_ok());

        let missing = json!({"steps": []});
        let errs = validate_schema(&schema, &missing).unwrap_err();
        assert!(errs.iter().any(|e| e.contains("\"name\"")));

        let bad_enum = json!({"name": "x", "kind": "c", "steps": []});
        assert!(validate_schema(&schema, &bad_enum).is_err());

        let bad_item = json!({"name": "x", "steps": [{"pass": "yes"}]});
        let errs = validate_schema(&schema, &bad_item).unwrap_err();
        assert!(errs.iter().any(|e| e.contains("$.steps[0].pass")));

        let bad_type = json!({"name": 4, "steps": []});
        let errs = validate_schema(&schema, &bad_type).unwrap_err();
        assert!(errs[0].contains("expected type string, found integer"));
    }

    #[test]
    fn integers_satisfy_number_but_not_conversely() {
        let schema = json!({"type": "number"});
        assert!(validate_schema(&schema, &json!(3)).is_ok());
        assert!(validate_schema(&schema, &json!(3.5)).is_ok());
        let int_only = json!({"type": "integer"});
        assert!(validate_schema(&int_only, &json!(3)).is_ok());
        assert!(validate_schema(&int_only, &json!(3.5)).is_err());
    }

    #[test]
    fn a_full_run_validates_against_the_shipped_schema() {
        let doc = ClassificationDocument::build(RunConfig {
            bound: 10,
            ..RunConfig::default()
        })
        .unwrap();
        assert!(doc.matches_reference);
        let json = doc.to_json();
        if let Err(errs) = validate_classification_json(&json) {
            panic!("schema violations: {errs:?}");
        }
        let md = doc.to_markdown();
        assert!(md.contains("| d1 | d2 | d3 |"));
        assert!(md.contains("matches reference: true"));
    }
}
