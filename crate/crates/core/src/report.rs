//! Verification reports and their canonical serialization.
//!
//! Canonical JSON is byte-reproducible: keys are sorted, every integer is an
//! exact decimal string (ledger totals exceed 2^53, so JSON numbers are
//! avoided throughout), and the `runtime_ms` slot is pinned to "0" so that
//! repeated runs of the same configuration produce identical bytes; wall
//! times go to the human-readable summary instead.

use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("malformed report JSON: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportConfig {
    /// "ring" or "exterior".
    pub mode: String,
    pub s: u32,
    pub blocks: Option<Vec<u32>>,
    pub characteristic: u64,
    pub checks: Vec<String>,
    pub stack_convention: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReportDims {
    pub ambient: u64,
    pub mu_ideal: Option<u64>,
    pub annihilator: Option<u64>,
    pub generated_ideal: Option<u64>,
    pub ps_ideal: Option<u64>,
    /// Per-degree annihilator dimensions, index 0..=s (ring mode).
    pub graded: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalReport {
    pub count: u64,
    /// Indices into the enumerated generator family.
    pub indices: Vec<u64>,
    pub certified: bool,
    /// Size of the family the subset was drawn from.
    pub family_size: u64,
    /// Catalan count of the stack-sortable family at this size, reported for
    /// comparison only.
    pub catalan_reference: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    /// The equality key the witness separates.
    pub equality: String,
    /// Textual element, parseable by the element syntax.
    pub element: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerReport {
    pub z: Vec<u64>,
    pub elementary: Vec<u128>,
    pub total: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub config: ReportConfig,
    pub dims: ReportDims,
    pub equalities: BTreeMap<String, bool>,
    pub minimal: Option<MinimalReport>,
    pub witnesses: Vec<WitnessReport>,
    pub ledger: Option<LedgerReport>,
    pub runtime_ms: u64,
    /// Set when a sweep cell failed outright instead of producing dims.
    pub error: Option<String>,
}

impl VerificationReport {
    /// True when the cell ran and every computed equality held.
    pub fn all_pass(&self) -> bool {
        self.error.is_none() && self.equalities.values().all(|&b| b)
    }

    /// The canonical JSON value: sorted keys, integers as decimal strings.
    pub fn to_canonical_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("schema_version".into(), dec(SCHEMA_VERSION));

        let mut config = Map::new();
        config.insert("mode".into(), json!(self.config.mode));
        config.insert("s".into(), dec(self.config.s as u64));
        config.insert(
            "blocks".into(),
            match &self.config.blocks {
                Some(blocks) => Value::Array(blocks.iter().map(|&b| dec(b as u64)).collect()),
                None => Value::Null,
            },
        );
        config.insert("characteristic".into(), dec(self.config.characteristic));
        config.insert("checks".into(), json!(self.config.checks));
        config.insert(
            "stack_convention".into(),
            json!(self.config.stack_convention),
        );
        root.insert("config".into(), Value::Object(config));

        let mut dims = Map::new();
        dims.insert("ambient".into(), dec(self.dims.ambient));
        dims.insert("mu_ideal".into(), opt_dec(self.dims.mu_ideal));
        dims.insert("annihilator".into(), opt_dec(self.dims.annihilator));
        dims.insert("generated_ideal".into(), opt_dec(self.dims.generated_ideal));
        dims.insert("ps_ideal".into(), opt_dec(self.dims.ps_ideal));
        dims.insert(
            "graded".into(),
            match &self.dims.graded {
                Some(graded) => Value::Array(graded.iter().map(|&g| dec(g)).collect()),
                None => Value::Null,
            },
        );
        root.insert("dims".into(), Value::Object(dims));

        root.insert(
            "equalities".into(),
            Value::Object(
                self.equalities
                    .iter()
                    .map(|(k, &v)| (k.clone(), Value::Bool(v)))
                    .collect(),
            ),
        );

        root.insert(
            "minimal".into(),
            match &self.minimal {
                Some(m) => json!({
                    "count": dec(m.count),
                    "indices": m.indices.iter().map(|&i| dec(i)).collect::<Vec<_>>(),
                    "certified": m.certified,
                    "family_size": dec(m.family_size),
                    "catalan_reference": dec(m.catalan_reference),
                }),
                None => Value::Null,
            },
        );

        root.insert(
            "witnesses".into(),
            Value::Array(
                self.witnesses
                    .iter()
                    .map(|w| json!({"equality": w.equality, "element": w.element}))
                    .collect(),
            ),
        );

        root.insert(
            "ledger".into(),
            match &self.ledger {
                Some(l) => json!({
                    "z": l.z.iter().map(|&z| dec(z)).collect::<Vec<_>>(),
                    "elementary": l.elementary.iter().map(|&e| dec128(e)).collect::<Vec<_>>(),
                    "total": dec128(l.total),
                }),
                None => Value::Null,
            },
        );

        // Pinned: wall time is reported on stderr, not in canonical bytes.
        root.insert("runtime_ms".into(), dec(0));
        root.insert(
            "error".into(),
            match &self.error {
                Some(e) => json!(e),
                None => Value::Null,
            },
        );
        Value::Object(root)
    }

    /// Canonical JSON bytes: sorted keys, integers as decimal strings,
    /// trailing newline. Byte-identical across runs on identical inputs.
    pub fn to_canonical_json(&self) -> Vec<u8> {
        let mut bytes =
            serde_json::to_vec_pretty(&self.to_canonical_value()).expect("report serializes");
        bytes.push(b'\n');
        bytes
    }

    pub fn from_json(bytes: &[u8]) -> Result<VerificationReport, ReportError> {
        let value: Value =
            serde_json::from_slice(bytes).map_err(|e| ReportError::Malformed(e.to_string()))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<VerificationReport, ReportError> {
        let obj = value
            .as_object()
            .ok_or_else(|| malformed("top level is not an object"))?;
        let config_value = field(obj, "config")?;
        let config_obj = config_value
            .as_object()
            .ok_or_else(|| malformed("config is not an object"))?;
        let config = ReportConfig {
            mode: string_field(config_obj, "mode")?,
            s: parse_dec(field(config_obj, "s")?)? as u32,
            blocks: match field(config_obj, "blocks")? {
                Value::Null => None,
                Value::Array(items) => Some(
                    items
                        .iter()
                        .map(|v| parse_dec(v).map(|n| n as u32))
                        .collect::<Result<_, _>>()?,
                ),
                _ => return Err(malformed("blocks is neither null nor an array")),
            },
            characteristic: parse_dec(field(config_obj, "characteristic")?)?,
            checks: field(config_obj, "checks")?
                .as_array()
                .ok_or_else(|| malformed("checks is not an array"))?
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(String::from)
                        .ok_or_else(|| malformed("check name is not a string"))
                })
                .collect::<Result<_, _>>()?,
            stack_convention: string_field(config_obj, "stack_convention")?,
        };

        let dims_obj = field(obj, "dims")?
            .as_object()
            .ok_or_else(|| malformed("dims is not an object"))?;
        let dims = ReportDims {
            ambient: parse_dec(field(dims_obj, "ambient")?)?,
            mu_ideal: parse_opt_dec(field(dims_obj, "mu_ideal")?)?,
            annihilator: parse_opt_dec(field(dims_obj, "annihilator")?)?,
            generated_ideal: parse_opt_dec(field(dims_obj, "generated_ideal")?)?,
            ps_ideal: parse_opt_dec(field(dims_obj, "ps_ideal")?)?,
            graded: match field(dims_obj, "graded")? {
                Value::Null => None,
                Value::Array(items) => {
                    Some(items.iter().map(parse_dec).collect::<Result<_, _>>()?)
                }
                _ => return Err(malformed("graded is neither null nor an array")),
            },
        };

        let equalities = field(obj, "equalities")?
            .as_object()
            .ok_or_else(|| malformed("equalities is not an object"))?
            .iter()
            .map(|(k, v)| {
                v.as_bool()
                    .map(|b| (k.clone(), b))
                    .ok_or_else(|| malformed("equality value is not a boolean"))
            })
            .collect::<Result<BTreeMap<_, _>, _>>()?;

        let minimal = match field(obj, "minimal")? {
            Value::Null => None,
            Value::Object(m) => Some(MinimalReport {
                count: parse_dec(field(m, "count")?)?,
                indices: field(m, "indices")?
                    .as_array()
                    .ok_or_else(|| malformed("indices is not an array"))?
                    .iter()
                    .map(parse_dec)
                    .collect::<Result<_, _>>()?,
                certified: field(m, "certified")?
                    .as_bool()
                    .ok_or_else(|| malformed("certified is not a boolean"))?,
                family_size: parse_dec(field(m, "family_size")?)?,
                catalan_reference: parse_dec(field(m, "catalan_reference")?)?,
            }),
            _ => return Err(malformed("minimal is neither null nor an object")),
        };

        let witnesses = field(obj, "witnesses")?
            .as_array()
            .ok_or_else(|| malformed("witnesses is not an array"))?
            .iter()
            .map(|w| {
                let w = w
                    .as_object()
                    .ok_or_else(|| malformed("witness is not an object"))?;
                Ok(WitnessReport {
                    equality: string_field(w, "equality")?,
                    element: string_field(w, "element")?,
                })
            })
            .collect::<Result<Vec<_>, ReportError>>()?;

        let ledger = match field(obj, "ledger")? {
            Value::Null => None,
            Value::Object(l) => Some(LedgerReport {
                z: field(l, "z")?
                    .as_array()
                    .ok_or_else(|| malformed("z is not an array"))?
                    .iter()
                    .map(parse_dec)
                    .collect::<Result<_, _>>()?,
                elementary: field(l, "elementary")?
                    .as_array()
                    .ok_or_else(|| malformed("elementary is not an array"))?
                    .iter()
                    .map(parse_dec128)
                    .collect::<Result<_, _>>()?,
                total: parse_dec128(field(l, "total")?)?,
            }),
            _ => return Err(malformed("ledger is neither null nor an object")),
        };

        let error = match field(obj, "error")? {
            Value::Null => None,
            Value::String(e) => Some(e.clone()),
            _ => return Err(malformed("error is neither null nor a string")),
        };

        Ok(VerificationReport {
            config,
            dims,
            equalities,
            minimal,
            witnesses,
            ledger,
            runtime_ms: parse_dec(field(obj, "runtime_ms")?)?,
            error,
        })
    }

    pub fn csv_header() -> &'static str {
        "mode,s,blocks,characteristic,stack_convention,checks,ambient,mu_ideal,annihilator,\
         generated_ideal,ps_ideal,minimal_count,all_pass,error"
    }

    /// One summary row; fields never contain commas by construction.
    pub fn to_csv_row(&self) -> String {
        let blocks = self
            .config
            .blocks
            .as_ref()
            .map(|b| {
                b.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("x")
            })
            .unwrap_or_default();
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.config.mode,
            self.config.s,
            blocks,
            self.config.characteristic,
            self.config.stack_convention,
            self.config.checks.join("+"),
            self.dims.ambient,
            opt(self.dims.mu_ideal),
            opt(self.dims.annihilator),
            opt(self.dims.generated_ideal),
            opt(self.dims.ps_ideal),
            self.minimal
                .as_ref()
                .map(|m| m.count.to_string())
                .unwrap_or_default(),
            self.all_pass(),
            self.error
                .as_deref()
                .unwrap_or_default()
                .replace(',', ";")
        )
    }
}

fn dec(n: u64) -> Value {
    Value::String(n.to_string())
}

fn dec128(n: u128) -> Value {
    Value::String(n.to_string())
}

fn opt_dec(n: Option<u64>) -> Value {
    match n {
        Some(v) => dec(v),
        None => Value::Null,
    }
}

fn malformed(msg: &str) -> ReportError {
    ReportError::Malformed(msg.to_string())
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value, ReportError> {
    obj.get(key)
        .ok_or_else(|| malformed(&format!("missing field {key}")))
}

fn string_field(obj: &Map<String, Value>, key: &str) -> Result<String, ReportError> {
    field(obj, key)?
        .as_str()
        .map(String::from)
        .ok_or_else(|| malformed(&format!("{key} is not a string")))
}

fn parse_dec(value: &Value) -> Result<u64, ReportError> {
    value
        .as_str()
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(|| malformed("expected a decimal string"))
}

fn parse_dec128(value: &Value) -> Result<u128, ReportError> {
    value
        .as_str()
        .and_then(|s| s.parse::<u128>().ok())
        .ok_or_else(|| malformed("expected a decimal string"))
}

fn parse_opt_dec(value: &Value) -> Result<Option<u64>, ReportError> {
    match value {
        Value::Null => Ok(None),
        other => parse_dec(other).map(Some),
    }
}
