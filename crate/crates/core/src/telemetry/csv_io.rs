use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::clean::DefectKind;
use super::resample::{resample_frame, GapFill};
use super::{Channel, TelemetryError, TelemetryFrame};
use crate::time::{Timestamp, ISO_FORMAT};

/// Tokens that dataloggers and spreadsheets emit for "no reading".
const NULL_TOKENS: &[&str] = &["n/a", "na", "#n/a", "null", "none", "nan", "-", "--", "?"];

/// Maps CSV columns onto channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    #[serde(default = "default_timestamp_column")]
    pub timestamp_column: String,
    #[serde(default = "default_timestamp_format")]
    pub timestamp_format: String,
    /// CSV column name -> channel.
    pub columns: BTreeMap<String, Channel>,
}

fn default_timestamp_column() -> String {
    "timestamp".to_string()
}

fn default_timestamp_format() -> String {
    ISO_FORMAT.to_string()
}

impl Schema {
    /// Schema whose column names are the canonical channel names.
    pub fn canonical(channels: impl IntoIterator<Item = Channel>) -> Self {
        Self {
            timestamp_column: default_timestamp_column(),
            timestamp_format: default_timestamp_format(),
            columns: channels.into_iter().map(|c| (c.name().to_string(), c)).collect(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, TelemetryError> {
        let schema: Schema = toml::from_str(text).map_err(|e| TelemetryError::Schema(e.to_string()))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<(), TelemetryError> {
        if self.columns.is_empty() {
            return Err(TelemetryError::Schema("no data columns mapped".into()));
        }
        let mut seen = BTreeMap::new();
        for (col, ch) in &self.columns {
            if let Some(prev) = seen.insert(*ch, col) {
                return Err(TelemetryError::Schema(format!("columns {prev:?} and {col:?} both map to {ch}")));
            }
            if *col == self.timestamp_column {
                return Err(TelemetryError::Schema(format!("column {col:?} is both timestamp and data")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Value(f64),
    /// Empty cell: a gap, not a defect.
    Empty,
    Defect {
        kind: DefectKind,
        raw: String,
    },
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            _ => None,
        }
    }

    fn parse(raw: &str) -> Self {
        let t = raw.trim();
        if t.is_empty() {
            return Cell::Empty;
        }
        if NULL_TOKENS.contains(&t.to_ascii_lowercase().as_str()) {
            return Cell::Defect { kind: DefectKind::Null, raw: t.to_string() };
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Cell::Value(v),
            _ => Cell::Defect { kind: DefectKind::NonNumeric, raw: t.to_string() },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub column: String,
    pub channel: Channel,
    pub cell: Cell,
}

/// One CSV data row as read, before cleaning.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    /// 0-based data row index (header excluded).
    pub row: usize,
    pub timestamp: Option<Timestamp>,
    pub timestamp_raw: String,
    pub fields: Vec<Field>,
}

impl RawRecord {
    pub fn get(&self, channel: Channel) -> Option<&Cell> {
        self.fields.iter().find(|f| f.channel == channel).map(|f| &f.cell)
    }
}

/// Reads a header-first CSV. Cells that fail to parse are kept as
/// [`Cell::Defect`], never coerced.
pub fn parse_csv<R: Read>(reader: R, schema: &Schema) -> Result<Vec<RawRecord>, TelemetryError> {
    schema.validate()?;
    let mut rdr = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| TelemetryError::Io(e.to_string()))?.clone();
    let position = |name: &str| headers.iter().position(|h| h == name);
    let ts_idx = position(&schema.timestamp_column)
        .ok_or_else(|| TelemetryError::MissingTimestampColumn(schema.timestamp_column.clone()))?;
    let mut columns = Vec::with_capacity(schema.columns.len());
    for (name, channel) in &schema.columns {
        let idx = position(name).ok_or_else(|| TelemetryError::MissingColumn(name.clone()))?;
        columns.push((idx, name.clone(), *channel));
    }
    columns.sort_by_key(|(idx, _, _)| *idx);

    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| TelemetryError::Io(e.to_string()))?;
        let ts_raw = rec.get(ts_idx).unwrap_or("").to_string();
        let timestamp = Timestamp::parse_with(&ts_raw, &schema.timestamp_format).ok();
        let fields = columns
            .iter()
            .map(|(idx, name, channel)| Field {
                column: name.clone(),
                channel: *channel,
                cell: match rec.get(*idx) {
                    Some(raw) => Cell::parse(raw),
                    None => Cell::Defect { kind: DefectKind::Null, raw: String::new() },
                },
            })
            .collect();
        out.push(RawRecord { row, timestamp, timestamp_raw: ts_raw, fields });
    }
    Ok(out)
}

fn io_err(e: impl std::fmt::Display) -> TelemetryError {
    TelemetryError::Io(e.to_string())
}

/// Writes records in the schema's column layout. Defective cells are written
/// back verbatim so a re-parse reproduces them.
pub fn write_records_csv<W: Write>(
    writer: W,
    records: &[RawRecord],
    schema: &Schema,
) -> Result<(), TelemetryError> {
    let mut w = csv::Writer::from_writer(writer);
    let cols: Vec<(&String, Channel)> = schema.columns.iter().map(|(n, c)| (n, *c)).collect();
    let mut header = vec![schema.timestamp_column.clone()];
    header.extend(cols.iter().map(|(n, _)| (*n).clone()));
    w.write_record(&header).map_err(io_err)?;
    for r in records {
        let mut line = vec![match r.timestamp {
            Some(t) => chrono::DateTime::from_timestamp(t.seconds(), 0)
                .expect("timestamp in range")
                .naive_utc()
                .format(&schema.timestamp_format)
                .to_string(),
            None => r.timestamp_raw.clone(),
        }];
        for (_, ch) in &cols {
            line.push(match r.get(*ch) {
                Some(Cell::Value(v)) => v.to_string(),
                Some(Cell::Defect { raw, .. }) => raw.clone(),
                Some(Cell::Empty) | None => String::new(),
            });
        }
        w.write_record(&line).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Writes a frame as `timestamp,<channel>...` with empty cells for gaps.
pub fn write_frame_csv<W: Write>(writer: W, frame: &TelemetryFrame) -> Result<(), TelemetryError> {
    let mut w = csv::Writer::from_writer(writer);
    let series: Vec<_> = frame.iter().collect();
    let mut header = vec!["timestamp".to_string()];
    header.extend(series.iter().map(|s| s.channel().name().to_string()));
    w.write_record(&header).map_err(io_err)?;
    for i in 0..frame.len() {
        let mut line = Vec::with_capacity(series.len() + 1);
        line.push(series[0].timestamp(i).to_string());
        for s in &series {
            line.push(s.values()[i].map(|v| v.to_string()).unwrap_or_default());
        }
        w.write_record(&line).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Reads a frame written by [`write_frame_csv`]. The grid step is the
/// smallest positive spacing between consecutive timestamps, or ten
/// minutes for a single-row file.
pub fn read_frame_csv<R: Read>(mut reader: R) -> Result<TelemetryFrame, TelemetryError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes).map_err(io_err)?;
    let headers = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice())
        .headers()
        .map_err(io_err)?
        .clone();
    let mut channels = Vec::new();
    for h in headers.iter().filter(|h| *h != "timestamp") {
        channels.push(h.parse::<Channel>()?);
    }
    let schema = Schema::canonical(channels);
    let records = parse_csv(bytes.as_slice(), &schema)?;
    let step = records
        .windows(2)
        .filter_map(|w| Some(w[1].timestamp?.seconds() - w[0].timestamp?.seconds()))
        .filter(|d| *d > 0)
        .min()
        .unwrap_or(super::DEFAULT_STEP_SECONDS);
    let (frame, _) = resample_frame(&records, step, GapFill::LeaveGap, None)?;
    Ok(frame)
}
