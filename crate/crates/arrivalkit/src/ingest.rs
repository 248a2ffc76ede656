//! Parsing, merging, trimming, and filtering of load-tool event logs.
//!
//! The input format is the CSV produced by the JMeter Aggregate Report
//! listener: ten comma-separated columns per row, optionally preceded by a
//! header line. The first column is the request *launch* time in Unix epoch
//! milliseconds; the toolkit treats it as the launch time throughout and
//! never tries to reconstruct launch times from completion times.

use std::collections::HashSet;
use std::io::Read;

use thiserror::Error;

/// Errors produced while reading or reshaping record sets.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("no records")]
    NoRecords,
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("merge requires at least one input set")]
    EmptyMerge,
    #[error("clock offset {offset_ms} ms drives timestamp {timestamp_ms} non-positive")]
    OffsetUnderflow { timestamp_ms: i64, offset_ms: i64 },
    #[error("trim window empty")]
    TrimWindowEmpty,
    #[error("invalid trim window: {0}")]
    InvalidWindow(String),
}

/// One launched request, as logged by the load tool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestRecord {
    /// Launch time, Unix epoch milliseconds.
    pub timestamp_ms: i64,
    /// Response time R in milliseconds.
    pub elapsed_ms: i64,
    /// Web event name.
    pub label: String,
    pub response_code: String,
    pub response_message: String,
    /// User-thread identifier, e.g. "Thread Group 1-97".
    pub thread_name: String,
    pub data_type: String,
    pub success: bool,
    pub byte_count: i64,
    /// Latency to first byte, milliseconds.
    pub first_byte_ms: i64,
}

impl RequestRecord {
    fn validate(&self) -> Result<(), String> {
        if self.timestamp_ms <= 0 {
            return Err(format!(
                "timestamp must be positive, got {}",
                self.timestamp_ms
            ));
        }
        if self.elapsed_ms < 0 {
            return Err(format!(
                "elapsed time must be non-negative, got {}",
                self.elapsed_ms
            ));
        }
        if self.first_byte_ms < 0 || self.first_byte_ms > self.elapsed_ms {
            return Err(format!(
                "first-byte time {} outside [0, {}]",
                self.first_byte_ms, self.elapsed_ms
            ));
        }
        if self.label.is_empty() {
            return Err("empty label".into());
        }
        if self.thread_name.is_empty() {
            return Err("empty thread name".into());
        }
        Ok(())
    }
}

/// An ordered set of records, sorted ascending by launch timestamp.
///
/// Ties keep their input sequence order (stable sort), so two requests
/// launched in the same millisecond stay in log order and contribute a
/// zero-millisecond gap downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordSet {
    records: Vec<RequestRecord>,
    source_count: usize,
}

impl RecordSet {
    /// Builds a set from records in any order; sorts stably by timestamp.
    pub fn new(mut records: Vec<RequestRecord>, source_count: usize) -> RecordSet {
        records.sort_by_key(|r| r.timestamp_ms);
        RecordSet {
            records,
            source_count,
        }
    }

    pub fn records(&self) -> &[RequestRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<RequestRecord> {
        self.records
    }

    /// Number of merged input files behind this set.
    pub fn source_count(&self) -> usize {
        self.source_count
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn min_timestamp(&self) -> Option<i64> {
        self.records.first().map(|r| r.timestamp_ms)
    }

    pub fn max_timestamp(&self) -> Option<i64> {
        self.records.last().map(|r| r.timestamp_ms)
    }

    /// Launch-time span (max − min), milliseconds.
    pub fn span_ms(&self) -> i64 {
        match (self.min_timestamp(), self.max_timestamp()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    pub fn timestamps(&self) -> impl Iterator<Item = i64> + '_ {
        self.records.iter().map(|r| r.timestamp_ms)
    }
}

/// Leading/trailing stretch of a test excluded from analysis, e.g. the
/// warm-up and wind-down minutes of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrimWindow {
    pub start_offset_ms: i64,
    pub end_offset_ms: i64,
}

impl TrimWindow {
    pub const ZERO: TrimWindow = TrimWindow {
        start_offset_ms: 0,
        end_offset_ms: 0,
    };

    pub fn new(start_offset_ms: i64, end_offset_ms: i64) -> Result<TrimWindow, IngestError> {
        if start_offset_ms < 0 || end_offset_ms < 0 {
            return Err(IngestError::InvalidWindow(format!(
                "offsets must be non-negative, got {start_offset_ms}/{end_offset_ms}"
            )));
        }
        Ok(TrimWindow {
            start_offset_ms,
            end_offset_ms,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.start_offset_ms == 0 && self.end_offset_ms == 0
    }
}

/// Whether the input's first line is a header row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    /// Treat the first line as a header when its first field is non-numeric.
    #[default]
    Auto,
    Present,
    Absent,
}

/// Parse behavior knobs beyond header detection.
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    pub header: HeaderMode,
    /// Map columns by (normalized) header name instead of position. Requires
    /// a header row; useful for logs saved with a different column order.
    pub map_by_name: bool,
}

// Canonical column order of the Aggregate Report listener output.
const COLUMN_COUNT: usize = 10;
const CANONICAL_COLUMNS: [&str; COLUMN_COUNT] = [
    "timestampms",
    "rms",
    "webeventname",
    "responsecode",
    "responsemessage",
    "userthread",
    "datatype",
    "success",
    "bytecount",
    "r1stbytems",
];

/// Lowercases and strips everything but letters and digits, so
/// "TimeStamp (ms)" and "timestamp_ms" normalize to the same key.
fn normalize_column(name: &str) -> String {
    name.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

fn looks_like_header(line: &str) -> bool {
    match line.split(',').next() {
        Some(first) => first.trim().parse::<i64>().is_err(),
        None => true,
    }
}

fn parse_bool(field: &str, line: usize) -> Result<bool, IngestError> {
    match field.trim().to_ascii_lowercase().as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(IngestError::MalformedRow {
            line,
            reason: format!("expected boolean success flag, got '{other}'"),
        }),
    }
}

fn parse_int(field: &str, what: &str, line: usize) -> Result<i64, IngestError> {
    field
        .trim()
        .parse::<i64>()
        .map_err(|_| IngestError::MalformedRow {
            line,
            reason: format!("non-integer {what}: '{field}'"),
        })
}

/// Parses an Aggregate Report CSV stream into a sorted [`RecordSet`].
///
/// Accepts LF or CRLF line endings. Errors name the 1-based line number of
/// the offending row; an input with no data rows is an error.
pub fn parse_log<R: Read>(input: R, header: HeaderMode) -> Result<RecordSet, IngestError> {
    parse_log_with(
        input,
        &ParseOptions {
            header,
            map_by_name: false,
        },
    )
}

pub fn parse_log_with<R: Read>(
    mut input: R,
    opts: &ParseOptions,
) -> Result<RecordSet, IngestError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;

    // Column index for each canonical field; identity unless mapping by name.
    let mut order: [usize; COLUMN_COUNT] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9];
    let mut records = Vec::new();
    let mut lines = text.lines().enumerate();

    let first_data_line = match lines.next() {
        None => return Err(IngestError::NoRecords),
        Some((idx, raw)) => {
            let line = raw.trim_end_matches('\r');
            let is_header = match opts.header {
                HeaderMode::Present => true,
                HeaderMode::Absent => false,
                HeaderMode::Auto => looks_like_header(line),
            };
            if is_header {
                if opts.map_by_name {
                    order = column_order_from_header(line, idx + 1)?;
                }
                None
            } else {
                Some((idx, line.to_string()))
            }
        }
    };

    if let Some((idx, line)) = first_data_line {
        records.push(parse_row(&line, idx + 1, &order)?);
    }
    for (idx, raw) in lines {
        let line = raw.trim_end_matches('\r');
        records.push(parse_row(line, idx + 1, &order)?);
    }

    if records.is_empty() {
        return Err(IngestError::NoRecords);
    }
    Ok(RecordSet::new(records, 1))
}

fn column_order_from_header(
    line: &str,
    line_no: usize,
) -> Result<[usize; COLUMN_COUNT], IngestError> {
    let names: Vec<String> = line.split(',').map(normalize_column).collect();
    if names.len() != COLUMN_COUNT {
        return Err(IngestError::MalformedRow {
            line: line_no,
            reason: format!(
                "expected {COLUMN_COUNT} header columns, found {}",
                names.len()
            ),
        });
    }
    let mut order = [0usize; COLUMN_COUNT];
    for (slot, canonical) in CANONICAL_COLUMNS.iter().enumerate() {
        match names.iter().position(|n| n == canonical) {
            Some(pos) => order[slot] = pos,
            None => {
                return Err(IngestError::MalformedRow {
                    line: line_no,
                    reason: format!("header is missing column '{canonical}'"),
                })
            }
        }
    }
    Ok(order)
}

fn parse_row(
    line: &str,
    line_no: usize,
    order: &[usize; COLUMN_COUNT],
) -> Result<RequestRecord, IngestError> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != COLUMN_COUNT {
        return Err(IngestError::MalformedRow {
            line: line_no,
            reason: format!("expected {COLUMN_COUNT} fields, found {}", fields.len()),
        });
    }
    let f = |slot: usize| fields[order[slot]];

    let record = RequestRecord {
        timestamp_ms: parse_int(f(0), "timestamp", line_no)?,
        elapsed_ms: parse_int(f(1), "elapsed time", line_no)?,
        label: f(2).trim().to_string(),
        response_code: f(3).trim().to_string(),
        response_message: f(4).trim().to_string(),
        thread_name: f(5).trim().to_string(),
        data_type: f(6).trim().to_string(),
        success: parse_bool(f(7), line_no)?,
        byte_count: parse_int(f(8), "byte count", line_no)?,
        first_byte_ms: parse_int(f(9), "first-byte time", line_no)?,
    };
    record
        .validate()
        .map_err(|reason| IngestError::MalformedRow {
            line: line_no,
            reason,
        })?;
    Ok(record)
}

/// Merges record sets from multiple generators, shifting each set's
/// timestamps by its user-supplied clock offset (the toolkit never estimates
/// clock skew itself). The union is re-sorted; `source_count` becomes the
/// number of inputs.
pub fn merge(sets: Vec<(RecordSet, i64)>) -> Result<RecordSet, IngestError> {
    if sets.is_empty() {
        return Err(IngestError::EmptyMerge);
    }
    let source_count = sets.len();
    let mut all = Vec::with_capacity(sets.iter().map(|(s, _)| s.len()).sum());
    for (set, offset_ms) in sets {
        for mut record in set.into_records() {
            let shifted = record.timestamp_ms + offset_ms;
            if shifted <= 0 {
                return Err(IngestError::OffsetUnderflow {
                    timestamp_ms: record.timestamp_ms,
                    offset_ms,
                });
            }
            record.timestamp_ms = shifted;
            all.push(record);
        }
    }
    Ok(RecordSet::new(all, source_count))
}

/// Drops records outside `[min_ts + start_offset, max_ts − end_offset]`
/// (inclusive on both ends), with min/max taken over the input set.
pub fn trim(set: &RecordSet, window: &TrimWindow) -> Result<RecordSet, IngestError> {
    if window.start_offset_ms < 0 || window.end_offset_ms < 0 {
        return Err(IngestError::InvalidWindow(
            "offsets must be non-negative".into(),
        ));
    }
    let (min_ts, max_ts) = match (set.min_timestamp(), set.max_timestamp()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(IngestError::TrimWindowEmpty),
    };
    let lo = min_ts + window.start_offset_ms;
    let hi = max_ts - window.end_offset_ms;
    let kept: Vec<RequestRecord> = set
        .records()
        .iter()
        .filter(|r| r.timestamp_ms >= lo && r.timestamp_ms <= hi)
        .cloned()
        .collect();
    if kept.is_empty() {
        return Err(IngestError::TrimWindowEmpty);
    }
    Ok(RecordSet::new(kept, set.source_count()))
}

/// Keeps records matching the given label and/or thread-name set; both
/// filters are conjunctive when present. An empty result is legal.
pub fn filter(
    set: &RecordSet,
    by_label: Option<&str>,
    by_threads: Option<&HashSet<String>>,
) -> RecordSet {
    let kept: Vec<RequestRecord> = set
        .records()
        .iter()
        .filter(|r| by_label.is_none_or(|l| r.label == l))
        .filter(|r| by_threads.is_none_or(|t| t.contains(&r.thread_name)))
        .cloned()
        .collect();
    RecordSet::new(kept, set.source_count())
}
