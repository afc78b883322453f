//! Emitting documents as JSON or CSV.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use weaklp::embeddings::{BlockLayout, LevelStack};
use weaklp::NormTriple;
use weaklp_harness::{ChainReport, SuiteReport};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Atomic output of the block-layout verbs; accepted back as input.
#[derive(Debug, Serialize)]
pub struct LaidOut<'a> {
    pub atoms: &'a [f64],
    pub layout: &'a BlockLayout,
}

pub enum Document<'a> {
    Norms(NormTriple),
    Stack(&'a LevelStack),
    LaidOut(LaidOut<'a>),
    Suite(&'a SuiteReport),
    Chain(&'a ChainReport),
}

#[derive(Serialize)]
struct StackRow {
    level: usize,
    index: usize,
    value: f64,
}

#[derive(Serialize)]
struct AtomRow {
    index: usize,
    value: f64,
}

#[derive(Serialize)]
struct RecordRow<'a> {
    trial: usize,
    seed: u64,
    p: f64,
    inputs: &'a str,
    check: &'a str,
    value: f64,
    bound: f64,
    margin: f64,
    tolerance: f64,
    ratio: Option<f64>,
    pass: bool,
    failed_checks: String,
    measured: String,
}

#[derive(Serialize)]
struct ChainRow<'a> {
    link: &'a str,
    #[serde(rename = "N")]
    top_level: usize,
    constant: f64,
    samples: usize,
    bound: f64,
    within_bound: bool,
    no_growth: bool,
    pass: bool,
}

pub fn emit(doc: &Document, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| CliError::Input(format!("cannot write `{}`: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    let written = match format {
        Format::Json => write_json(doc, &mut sink),
        Format::Csv => write_csv(doc, &mut sink),
    };
    written
        .and_then(|()| sink.flush().map_err(|e| e.to_string()))
        .map_err(|e| CliError::Input(format!("cannot write output: {e}")))
}

fn write_json(doc: &Document, sink: &mut impl Write) -> Result<(), String> {
    let result = match doc {
        Document::Norms(n) => serde_json::to_writer_pretty(&mut *sink, n),
        Document::Stack(s) => serde_json::to_writer_pretty(&mut *sink, s),
        Document::LaidOut(l) => serde_json::to_writer_pretty(&mut *sink, l),
        Document::Suite(r) => serde_json::to_writer_pretty(&mut *sink, r),
        Document::Chain(r) => serde_json::to_writer_pretty(&mut *sink, r),
    };
    result.map_err(|e| e.to_string())?;
    writeln!(sink).map_err(|e| e.to_string())
}

fn write_csv(doc: &Document, sink: &mut impl Write) -> Result<(), String> {
    let mut w = csv::Writer::from_writer(sink);
    let result = match doc {
        Document::Norms(n) => w.serialize(n),
        Document::Stack(s) => s.levels().iter().enumerate().try_for_each(|(level, row)| {
            row.iter()
                .enumerate()
                .try_for_each(|(index, &value)| w.serialize(StackRow { level, index, value }))
        }),
        Document::LaidOut(l) => l
            .atoms
            .iter()
            .enumerate()
            .try_for_each(|(index, &value)| w.serialize(AtomRow { index, value })),
        Document::Suite(r) => r.records.iter().try_for_each(|rec| {
            w.serialize(RecordRow {
                trial: rec.trial,
                seed: rec.seed,
                p: rec.p,
                inputs: &rec.inputs,
                check: &rec.check,
                value: rec.value,
                bound: rec.bound,
                margin: rec.margin,
                tolerance: rec.tolerance,
                ratio: rec.ratio,
                pass: rec.pass,
                failed_checks: rec.failed_checks.join(";"),
                measured: rec.measured.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";"),
            })
        }),
        Document::Chain(r) => r.links.iter().try_for_each(|link| {
            link.constants.iter().try_for_each(|c| {
                w.serialize(ChainRow {
                    link: &link.link,
                    top_level: c.top_level,
                    constant: c.constant,
                    samples: c.samples,
                    bound: link.bound,
                    within_bound: link.within_bound,
                    no_growth: link.no_growth,
                    pass: link.pass,
                })
            })
        }),
    };
    result.map_err(|e| e.to_string())?;
    w.flush().map_err(|e| e.to_string())
}
