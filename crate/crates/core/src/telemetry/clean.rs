use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::csv_io::{Cell, RawRecord};
use super::Channel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectKind {
    Null,
    NonNumeric,
    OutOfRange,
    DuplicateTimestamp,
    Gap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    pub row: usize,
    pub column: String,
    pub kind: DefectKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CleanReport {
    pub rows_total: usize,
    pub rows_dropped: usize,
    pub cells_nullified: usize,
    pub defects: Vec<Defect>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CleanPolicy {
    /// Drop any row holding a defective cell.
    DropRow,
    /// Replace defective cells by gaps and keep the row.
    #[default]
    NullifyCell,
}

/// Inclusive admissible range per channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeLimits(pub BTreeMap<Channel, (f64, f64)>);

impl Default for RangeLimits {
    fn default() -> Self {
        Self(BTreeMap::from([
            (Channel::Irradiance, (0.0, 1500.0)),
            (Channel::WindSpeed, (0.0, 40.0)),
            (Channel::LoadPower, (0.0, 8.0)),
            (Channel::DcVoltage, (30.0, 60.0)),
        ]))
    }
}

impl RangeLimits {
    pub fn contains(&self, channel: Channel, v: f64) -> bool {
        self.0.get(&channel).is_none_or(|(lo, hi)| v >= *lo && v <= *hi)
    }
}

/// Removes or blanks every defect found by [`super::parse_csv`] plus
/// out-of-range values and repeated timestamps (first occurrence wins).
///
/// Rows without a parseable timestamp are always dropped. Empty cells are
/// listed as `gap` defects but are not modifications. Row order is kept.
pub fn clean(
    records: &[RawRecord],
    policy: CleanPolicy,
    limits: &RangeLimits,
) -> (Vec<RawRecord>, CleanReport) {
    let mut report = CleanReport { rows_total: records.len(), ..Default::default() };
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(records.len());

    for rec in records {
        let Some(ts) = rec.timestamp else {
            let kind =
                if rec.timestamp_raw.trim().is_empty() { DefectKind::Null } else { DefectKind::NonNumeric };
            report.defects.push(Defect { row: rec.row, column: "timestamp".into(), kind });
            report.rows_dropped += 1;
            continue;
        };
        if !seen.insert(ts) {
            report.defects.push(Defect {
                row: rec.row,
                column: "timestamp".into(),
                kind: DefectKind::DuplicateTimestamp,
            });
            report.rows_dropped += 1;
            continue;
        }

        let mut row_defects = Vec::new();
        let mut fixed = rec.clone();
        for field in &mut fixed.fields {
            let kind = match &field.cell {
                Cell::Value(v) if limits.contains(field.channel, *v) => continue,
                Cell::Value(_) => DefectKind::OutOfRange,
                Cell::Empty => {
                    report.defects.push(Defect {
                        row: rec.row,
                        column: field.column.clone(),
                        kind: DefectKind::Gap,
                    });
                    continue;
                }
                Cell::Defect { kind, .. } => *kind,
            };
            row_defects.push(Defect { row: rec.row, column: field.column.clone(), kind });
            field.cell = Cell::Empty;
        }

        if row_defects.is_empty() {
            out.push(fixed);
            continue;
        }
        match policy {
            CleanPolicy::DropRow => report.rows_dropped += 1,
            CleanPolicy::NullifyCell => {
                report.cells_nullified += row_defects.len();
                out.push(fixed);
            }
        }
        report.defects.extend(row_defects);
    }
    (out, report)
}
