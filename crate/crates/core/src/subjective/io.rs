use std::io::{Read, Write};

use super::{MosTable, ScoreMatrix};
use crate::error::{Error, Result};

/// Reads a subjects-by-sequences CSV. The header holds a label cell followed
/// by sequence ids; each row starts with the subject id. Blank cells are
/// missing ratings.
pub fn read_score_csv<R: Read>(reader: R, bounds: (f64, f64)) -> Result<ScoreMatrix> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = r.headers()?.clone();
    if header.len() < 2 {
        return Err(Error::InvalidInput(
            "score CSV needs a subject column and at least one sequence".into(),
        ));
    }
    let sequences: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut subjects = Vec::new();
    let mut scores = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let subject = rec[0].to_string();
        let row = rec
            .iter()
            .skip(1)
            .map(|cell| {
                if cell.is_empty() {
                    return Ok(None);
                }
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .map(Some)
                    .ok_or_else(|| Error::InvalidInput(format!("subject {subject}: bad score {cell:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        subjects.push(subject);
        scores.push(row);
    }
    ScoreMatrix::new(subjects, sequences, scores, bounds)
}

/// `id,mos,n` rows.
pub fn write_mos_csv<W: Write>(writer: W, table: &MosTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["id", "mos", "n"])?;
    for ((id, mos), n) in table.ids.iter().zip(&table.mos).zip(&table.counts) {
        w.write_record([id.clone(), mos.to_string(), n.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// One rejected subject id per row under a `subject` header.
pub fn write_rejected_csv<W: Write>(writer: W, subjects: &[String]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["subject"])?;
    for s in subjects {
        w.write_record([s])?;
    }
    w.flush()?;
    Ok(())
}
