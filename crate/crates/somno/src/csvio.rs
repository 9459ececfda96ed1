//! Text formats: sample CSV, band-power features, event annotations and
//! training loss.

use std::path::Path;

use somno_core::baselines::BandPowerFeatures;
use somno_core::data::{EegSample, EventAnnotation, EventKind, Label, LabeledSet};
use somno_core::SAMPLE_LEN;

use crate::error::{Error, Result};

fn parse_label(field: &str) -> Option<Label> {
    match field.trim() {
        "0" | "alert" => Some(Label::Alert),
        "1" | "drowsy" => Some(Label::Drowsy),
        _ => None,
    }
}

/// Parses rows `subject_id,label,v1,...,v384`. A leading header row starting
/// with `subject_id` is skipped; labels are `0`/`1` or `alert`/`drowsy`.
pub fn parse_samples_csv(text: &str, path: &Path) -> Result<LabeledSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::format(path, e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let err = |msg: String| Error::format(path, format!("line {line}: {msg}"));
        if record.get(0) == Some("subject_id") && samples.is_empty() {
            continue;
        }
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != SAMPLE_LEN + 2 {
            return Err(err(format!(
                "expected {} fields (subject_id, label, {SAMPLE_LEN} values), found {}",
                SAMPLE_LEN + 2,
                record.len()
            )));
        }
        let subject: u16 = record[0]
            .parse()
            .map_err(|_| err(format!("bad subject id {:?}", &record[0])))?;
        let label = parse_label(&record[1]).ok_or_else(|| err(format!("bad label {:?}", &record[1])))?;
        let values = record
            .iter()
            .skip(2)
            .enumerate()
            .map(|(j, f)| {
                f.parse::<f32>()
                    .map_err(|_| err(format!("value {} is not a number: {f:?}", j + 1)))
            })
            .collect::<Result<Vec<f32>>>()?;
        samples.push(EegSample::new(values, subject, label).map_err(|e| err(e.to_string()))?);
    }
    Ok(LabeledSet::new(samples))
}

pub fn import_csv(path: &Path) -> Result<LabeledSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_samples_csv(&text, path)
}

/// Writes values with the shortest decimal that reads back to the same `f32`.
pub fn samples_csv(set: &LabeledSet) -> String {
    let mut out = String::from("subject_id,label");
    for j in 1..=SAMPLE_LEN {
        out.push_str(&format!(",v{j}"));
    }
    out.push('\n');
    for s in &set.samples {
        out.push_str(&format!("{},{}", s.subject_id, s.label.index()));
        for v in &s.values {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

pub fn export_csv(set: &LabeledSet, path: &Path) -> Result<()> {
    write_text(path, &samples_csv(set))
}

pub fn features_csv(set: &LabeledSet, features: &[BandPowerFeatures]) -> String {
    let mut out = String::from("subject_id,label,delta,theta,alpha,beta\n");
    for (s, f) in set.samples.iter().zip(features) {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.subject_id,
            s.label.index(),
            f.delta,
            f.theta,
            f.alpha,
            f.beta
        ));
    }
    out
}

/// Event windows as 0-based half-open `[start, end)` sample positions.
pub fn annotations_csv(events: &[EventAnnotation]) -> String {
    let mut out = String::from("sample_index,event_type,start,end\n");
    for e in events {
        out.push_str(&format!(
            "{},{},{},{}\n",
            e.sample_index,
            e.kind.name(),
            e.start,
            e.end
        ));
    }
    out
}

pub fn parse_annotations_csv(text: &str, path: &Path) -> Result<Vec<EventAnnotation>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut events = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::format(path, e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let err = || Error::format(path, format!("line {line}: malformed annotation"));
        if record.len() != 4 {
            return Err(err());
        }
        let num = |i: usize| record[i].parse::<usize>().map_err(|_| err());
        let e = EventAnnotation {
            sample_index: num(0)?,
            kind: EventKind::parse(&record[1]).ok_or_else(err)?,
            start: num(2)?,
            end: num(3)?,
        };
        if e.start >= e.end || e.end > SAMPLE_LEN {
            return Err(err());
        }
        events.push(e);
    }
    Ok(events)
}

pub fn loss_csv(losses: &[f64]) -> String {
    let mut out = String::from("epoch,loss\n");
    for (i, l) in losses.iter().enumerate() {
        out.push_str(&format!("{},{l}\n", i + 1));
    }
    out
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
