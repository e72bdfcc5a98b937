//! CSV records and JSON summaries.

use std::io::Write;

use super::run::BenchRecord;
use super::summary::BenchSummary;

/// One header line, then one row per record.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_json<W: Write>(summary: &BenchSummary, out: W) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(out, summary)
}
