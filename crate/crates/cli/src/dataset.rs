//! Two-column `time,status` CSV datasets.

use std::io::{Read, Write};

use ltfrechet::data::KERSEY1987;
use ltfrechet::{kersey1987, CensoredSample};

use crate::error::{CliError, CliResult};

/// Loads the built-in dataset by name or parses a CSV file.
pub fn load(source: &str) -> CliResult<CensoredSample> {
    if source == KERSEY1987 {
        return Ok(kersey1987());
    }
    let file = std::fs::File::open(source)
        .map_err(|e| CliError::Usage(format!("cannot open dataset '{source}': {e}")))?;
    parse(file, source)
}

/// Parses `time,status` CSV. `status` is 1 for an event and 0 for censoring.
pub fn parse<R: Read>(reader: R, label: &str) -> CliResult<CensoredSample> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(reader);
    let err = |line: u64, message: String| CliError::Parse {
        path: label.to_string(),
        line,
        message,
    };

    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| err(1, e.to_string()))?,
        None => return Err(err(1, "empty file; expected header 'time,status'".into())),
    };
    let line_of = |r: &csv::StringRecord| r.position().map_or(0, |p| p.line());
    if header.len() != 2 || &header[0] != "time" || &header[1] != "status" {
        return Err(err(
            line_of(&header),
            format!("expected header 'time,status', found '{}'", header.iter().collect::<Vec<_>>().join(",")),
        ));
    }

    let mut times = Vec::new();
    let mut events = Vec::new();
    for record in records {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            err(line, e.to_string())
        })?;
        let line = line_of(&record);
        if record.len() != 2 {
            return Err(err(line, format!("expected 2 fields, found {}", record.len())));
        }
        let t: f64 = record[0]
            .parse()
            .map_err(|_| err(line, format!("invalid time '{}'", &record[0])))?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(err(line, format!("time must be positive and finite, got {t}")));
        }
        let event = match &record[1] {
            "1" => true,
            "0" => false,
            other => return Err(err(line, format!("status must be 0 or 1, got '{other}'"))),
        };
        times.push(t);
        events.push(event);
    }
    if times.is_empty() {
        return Err(err(line_of(&header), "no data rows".into()));
    }
    Ok(CensoredSample::new(times, events)?)
}

/// Writes the sample in the same format [`parse`] reads; values round-trip exactly.
pub fn write<W: Write>(data: &CensoredSample, out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["time", "status"]).map_err(csv_io)?;
    for (t, event) in data.iter() {
        w.write_record([t.to_string(), if event { "1" } else { "0" }.to_string()])
            .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}
