//! JSONL / CSV ingestion and JSONL serialization.
//!
//! JSONL records:
//!
//! ```text
//! journals: {"_schemas": {"wos": {"single_attribution": false}}}
//!           {"id": "J1", "categories": {"wos": ["A", "B"]}, "metric": {"2020": 2.5}}
//! papers:   {"id": "P1", "journal": "J1", "year": 2020, "doc_type": "article",
//!            "online_date": "2020-01-31", "pub_date": "2020-03-15" | "pub_month": 3,
//!            "authors": [{"key": "a1", "entities": ["E1"]}], "pages": 12, "citations": 4}
//! edges:    {"citing": "P2", "cited": "P1", "date": "2021-05-01"}
//! ```
//!
//! CSV files carry the same columns; nested values are flattened as
//! `key=v1|v2;key2=v3` (journal `categories` and `metric`, paper `authors`),
//! and the schema registry is a journal row with id `_schemas` whose
//! `categories` column reads `name=single;other=multi`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use super::{
    AuthorCredit, CitationEdge, Corpus, CorpusBuilder, DatePrecision, Journal, Origin, Paper, PaperDate, SchemaInfo,
    Strictness,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CorpusPaths {
    pub journals: PathBuf,
    pub papers: PathBuf,
    /// Without an edge file, papers must carry a `citations` column.
    pub edges: Option<PathBuf>,
}

impl CorpusPaths {
    /// `journals.jsonl`, `papers.jsonl` and (if present) `edges.jsonl` in `dir`.
    pub fn in_dir(dir: &Path) -> Self {
        let edges = dir.join("edges.jsonl");
        CorpusPaths {
            journals: dir.join("journals.jsonl"),
            papers: dir.join("papers.jsonl"),
            edges: edges.exists().then_some(edges),
        }
    }
}

pub fn load_corpus(paths: &CorpusPaths, strictness: Strictness) -> Result<Corpus> {
    let mut builder = CorpusBuilder::default();
    read_journals(&paths.journals, &mut builder)?;
    read_papers(&paths.papers, &mut builder)?;
    match &paths.edges {
        Some(edges) => read_edges(edges, &mut builder)?,
        None => builder.set_count_only(true),
    }
    builder.build(strictness)
}

#[derive(Deserialize)]
struct JournalLine {
    #[serde(rename = "_schemas")]
    schemas: Option<BTreeMap<String, SchemaInfo>>,
    id: Option<String>,
    #[serde(default)]
    categories: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    metric: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PubMonth {
    Number(u32),
    Text(String),
}

#[derive(Deserialize)]
struct PaperLine {
    id: String,
    journal: String,
    year: i32,
    doc_type: String,
    online_date: Option<String>,
    pub_date: Option<String>,
    pub_month: Option<PubMonth>,
    #[serde(default)]
    authors: Vec<AuthorCredit>,
    pages: Option<u32>,
    citations: Option<u64>,
}

#[derive(Deserialize)]
struct EdgeLine {
    citing: String,
    cited: String,
    date: Option<String>,
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn display(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// Yields (line number, deserialized record) for non-blank JSONL lines.
fn jsonl_records<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<(usize, T)>> {
    let file = display(path);
    let reader = BufReader::new(open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| Error::Parse {
            file: file.clone(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push((i + 1, record));
    }
    Ok(out)
}

/// CSV rows as header -> value maps; empty cells are dropped. Line numbers
/// count the header as line 1.
fn csv_records(path: &Path) -> Result<Vec<(usize, BTreeMap<String, String>)>> {
    let file = display(path);
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(open(path)?);
    let headers =
        reader.headers().map_err(|e| Error::Parse { file: file.clone(), line: 1, message: e.to_string() })?.clone();
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::Parse { file: file.clone(), line: i + 2, message: e.to_string() })?;
        let map = headers
            .iter()
            .zip(row.iter())
            .filter(|(_, v)| !v.trim().is_empty())
            .map(|(h, v)| (h.trim().to_string(), v.trim().to_string()))
            .collect();
        out.push((i + 2, map));
    }
    Ok(out)
}

/// `k=a|b;k2=c` -> [(k, [a, b]), (k2, [c])]
fn split_nested(text: &str) -> Vec<(String, Vec<String>)> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|part| {
            let (k, v) = part.split_once('=').unwrap_or((part, ""));
            let values = v.split('|').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
            (k.trim().to_string(), values)
        })
        .collect()
}

fn parse_err(file: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse { file: file.to_string(), line, message: message.into() }
}

fn read_journals(path: &Path, builder: &mut CorpusBuilder) -> Result<()> {
    let file = display(path);
    let lines: Vec<(usize, JournalLine)> = if is_csv(path) {
        let mut out = Vec::new();
        for (line, row) in csv_records(path)? {
            let id = row.get("id").cloned();
            let nested = row.get("categories").map(|s| split_nested(s)).unwrap_or_default();
            if id.as_deref() == Some("_schemas") {
                let mut schemas = BTreeMap::new();
                for (name, flags) in nested {
                    let single = match flags.first().map(String::as_str) {
                        Some("single") => true,
                        Some("multi") | None => false,
                        Some(other) => {
                            return Err(parse_err(
                                &file,
                                line,
                                format!("schema flag `{other}` is neither single nor multi"),
                            ))
                        }
                    };
                    schemas.insert(name, SchemaInfo { single_attribution: single });
                }
                out.push((
                    line,
                    JournalLine {
                        schemas: Some(schemas),
                        id: None,
                        categories: BTreeMap::new(),
                        metric: BTreeMap::new(),
                    },
                ));
                continue;
            }
            let mut metric = BTreeMap::new();
            for (year, values) in row.get("metric").map(|s| split_nested(s)).unwrap_or_default() {
                let value = values
                    .first()
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| parse_err(&file, line, format!("bad metric for year `{year}`")))?;
                metric.insert(year, value);
            }
            out.push((line, JournalLine { schemas: None, id, categories: nested.into_iter().collect(), metric }));
        }
        out
    } else {
        jsonl_records(path)?
    };

    for (line, record) in lines {
        if let Some(schemas) = record.schemas {
            for (name, info) in schemas {
                builder.add_schema(&name, info);
            }
            continue;
        }
        let id = record.id.ok_or_else(|| parse_err(&file, line, "journal record without `id`"))?;
        let mut metrics = BTreeMap::new();
        for (year, value) in record.metric {
            let year: i32 = year
                .trim()
                .parse()
                .map_err(|_| parse_err(&file, line, format!("metric year `{year}` is not an integer")))?;
            metrics.insert(year, value);
        }
        builder.push_journal_at(
            Journal { id, categories: record.categories, metrics },
            Origin { file: file.clone(), line },
        );
    }
    Ok(())
}

fn parse_day(value: &str, context: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(value.trim(), "%Y-%m-%d")
        .map_err(|_| Error::MalformedDate { value: value.to_string(), context: context.to_string() })
}

fn read_papers(path: &Path, builder: &mut CorpusBuilder) -> Result<()> {
    let file = display(path);
    let lines: Vec<(usize, PaperLine)> = if is_csv(path) {
        let mut out = Vec::new();
        for (line, row) in csv_records(path)? {
            let get = |k: &str| row.get(k).cloned();
            let need = |k: &str| get(k).ok_or_else(|| parse_err(&file, line, format!("missing column `{k}`")));
            let num = |k: &str| -> Result<Option<u64>> {
                get(k)
                    .map(|v| {
                        v.parse::<u64>()
                            .map_err(|_| parse_err(&file, line, format!("`{k}` is not a non-negative integer")))
                    })
                    .transpose()
            };
            let authors = get("authors")
                .map(|s| split_nested(&s).into_iter().map(|(key, entities)| AuthorCredit { key, entities }).collect())
                .unwrap_or_default();
            out.push((
                line,
                PaperLine {
                    id: need("id")?,
                    journal: need("journal")?,
                    year: need("year")?.parse().map_err(|_| parse_err(&file, line, "`year` is not an integer"))?,
                    doc_type: need("doc_type")?,
                    online_date: get("online_date"),
                    pub_date: get("pub_date"),
                    pub_month: get("pub_month").map(|m| match m.parse::<u32>() {
                        Ok(n) => PubMonth::Number(n),
                        Err(_) => PubMonth::Text(m),
                    }),
                    authors,
                    pages: num("pages")?.map(|p| p as u32),
                    citations: num("citations")?,
                },
            ));
        }
        out
    } else {
        jsonl_records(path)?
    };

    for (line, record) in lines {
        let context = format!("{file}:{line}, paper `{}`", record.id);
        let online_date = record.online_date.as_deref().map(|d| parse_day(d, &context)).transpose()?;
        let malformed = |value: String| Error::MalformedDate { value, context: context.clone() };
        let pub_date = match (record.pub_date, record.pub_month) {
            (Some(d), _) => Some(PaperDate::parse(&d).ok_or_else(|| malformed(d))?),
            (None, Some(PubMonth::Number(m))) => {
                Some(PaperDate::month(record.year, m).ok_or_else(|| malformed(m.to_string()))?)
            }
            (None, Some(PubMonth::Text(t))) => match PaperDate::parse(&t) {
                Some(d) if d.precision == DatePrecision::Month => Some(d),
                _ => return Err(malformed(t)),
            },
            (None, None) => None,
        };
        let doc_type = record.doc_type.parse().map_err(|e: Error| parse_err(&file, line, e.to_string()))?;
        if record.pages == Some(0) {
            return Err(parse_err(&file, line, "`pages` must be positive"));
        }
        builder.push_paper_at(
            Paper {
                id: record.id,
                journal: record.journal,
                year: record.year,
                doc_type,
                online_date,
                pub_date,
                authors: record.authors,
                pages: record.pages,
                citations: record.citations,
            },
            Origin { file: file.clone(), line },
        );
    }
    Ok(())
}

fn read_edges(path: &Path, builder: &mut CorpusBuilder) -> Result<()> {
    let file = display(path);
    let lines: Vec<(usize, EdgeLine)> = if is_csv(path) {
        csv_records(path)?
            .into_iter()
            .map(|(line, row)| {
                let need = |k: &str| {
                    row.get(k).cloned().ok_or_else(|| parse_err(&file, line, format!("missing column `{k}`")))
                };
                Ok((line, EdgeLine { citing: need("citing")?, cited: need("cited")?, date: row.get("date").cloned() }))
            })
            .collect::<Result<_>>()?
    } else {
        jsonl_records(path)?
    };
    for (line, record) in lines {
        let date = record
            .date
            .as_deref()
            .map(|d| parse_day(d, &format!("{file}:{line}, edge {} -> {}", record.citing, record.cited)))
            .transpose()?;
        builder.push_edge_at(
            CitationEdge { citing: record.citing, cited: record.cited, date },
            Origin { file: file.clone(), line },
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct SchemaHeader<'a> {
    #[serde(rename = "_schemas")]
    schemas: &'a BTreeMap<String, SchemaInfo>,
}

#[derive(Serialize)]
struct JournalOut<'a> {
    id: &'a str,
    categories: &'a BTreeMap<String, Vec<String>>,
    metric: &'a BTreeMap<i32, f64>,
}

#[derive(Serialize)]
struct PaperOut<'a> {
    id: &'a str,
    journal: &'a str,
    year: i32,
    doc_type: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    online_date: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub_date: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub_month: Option<String>,
    authors: &'a [AuthorCredit],
    #[serde(skip_serializing_if = "Option::is_none")]
    pages: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    citations: Option<u64>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn write_line<W: Write, T: Serialize>(out: &mut W, path: &Path, value: &T) -> Result<()> {
    let io = |source| Error::Io { path: path.to_path_buf(), source };
    serde_json::to_writer(&mut *out, value).map_err(|e| io(e.into()))?;
    out.write_all(b"\n").map_err(io)
}

/// Writes `journals.jsonl`, `papers.jsonl` and, for edge-backed corpora,
/// `edges.jsonl` into `dir`. Output is byte-stable for a given corpus.
pub fn write_jsonl(corpus: &Corpus, dir: &Path) -> Result<CorpusPaths> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    let paths = CorpusPaths {
        journals: dir.join("journals.jsonl"),
        papers: dir.join("papers.jsonl"),
        edges: corpus.has_edges().then(|| dir.join("edges.jsonl")),
    };

    let mut out = create(&paths.journals)?;
    write_line(&mut out, &paths.journals, &SchemaHeader { schemas: corpus.schemas() })?;
    for j in corpus.journals() {
        write_line(
            &mut out,
            &paths.journals,
            &JournalOut { id: &j.id, categories: &j.categories, metric: &j.metrics },
        )?;
    }
    out.flush().map_err(|source| Error::Io { path: paths.journals.clone(), source })?;

    let mut out = create(&paths.papers)?;
    for p in corpus.papers() {
        let (pub_date, pub_month) = match p.pub_date {
            Some(d) if d.precision == DatePrecision::Day => (Some(d.to_string()), None),
            Some(d) => (None, Some(format!("{:04}-{:02}", d.date.year(), d.date.month()))),
            None => (None, None),
        };
        write_line(
            &mut out,
            &paths.papers,
            &PaperOut {
                id: &p.id,
                journal: &p.journal,
                year: p.year,
                doc_type: p.doc_type.to_string(),
                online_date: p.online_date.map(|d| d.format("%Y-%m-%d").to_string()),
                pub_date,
                pub_month,
                authors: &p.authors,
                pages: p.pages,
                citations: p.citations,
            },
        )?;
    }
    out.flush().map_err(|source| Error::Io { path: paths.papers.clone(), source })?;

    if let Some(edges_path) = &paths.edges {
        let mut out = create(edges_path)?;
        for edge in corpus.edge_records() {
            write_line(&mut out, edges_path, &edge)?;
        }
        out.flush().map_err(|source| Error::Io { path: edges_path.clone(), source })?;
    }
    Ok(paths)
}
