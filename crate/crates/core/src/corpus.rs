//! Reading and writing publication-metadata exports.
//!
//! Two encodings are supported: a flat CSV with one row per publication and a
//! JSON-lines form carrying the same [`PublicationRecord`] structure. In CSV,
//! per-author data lives in parallel columns whose cells hold one `;`-separated
//! segment per author; multi-valued author fields use `|` inside a segment.
//! Both separators are therefore reserved in those cells.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{BufRead, Read, Write};
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AuthorMention, DocumentType, FunderMention, PublicationRecord};
use crate::par::{self, Execution};

/// Column names in CSV output order.
pub const COLUMNS: &[&str] = &[
    "publication_id",
    "doi",
    "pmid",
    "pmcid",
    "title",
    "abstract",
    "acknowledgements",
    "funding_statement",
    "publisher",
    "source_title",
    "issn",
    "pub_year",
    "online_year",
    "document_type",
    "authors",
    "author_ids",
    "author_orcids",
    "author_emails",
    "author_affiliations",
    "author_org_ids",
    "author_countries",
    "corresponding_author_ids",
    "funders",
    "funder_ids",
    "grant_ids",
    "times_cited",
    "fields_of_research",
    "reviewer_affiliations",
];

pub const REQUIRED_COLUMNS: &[&str] = &[
    "publication_id",
    "title",
    "publisher",
    "source_title",
    "pub_year",
    "document_type",
    "authors",
    "times_cited",
];

/// Reject the whole corpus when more than this fraction of rows fail.
pub const MAX_FAILED_FRACTION: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

impl CorpusFormat {
    /// Guess from a file extension; anything but `.jsonl`/`.ndjson` is CSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") => CorpusFormat::Jsonl,
            _ => CorpusFormat::Csv,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(CorpusFormat::Csv),
            "jsonl" | "ndjson" => Ok(CorpusFormat::Jsonl),
            other => Err(format!("unknown corpus format '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorpusWarning {
    UnknownColumn(String),
    MalformedRow { line: u64, reason: String },
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("missing required column '{0}'")]
    MissingRequiredColumn(String),
    #[error("corpus rejected: {failed} of {total} rows are malformed")]
    CorpusRejected {
        failed: usize,
        total: usize,
        warnings: Vec<CorpusWarning>,
    },
    #[error("value '{value}' in column '{column}' contains a reserved separator")]
    ReservedSeparator { column: &'static str, value: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Default)]
pub struct ParsedCorpus {
    pub records: Vec<PublicationRecord>,
    pub warnings: Vec<CorpusWarning>,
}

impl ParsedCorpus {
    pub fn malformed_rows(&self) -> usize {
        self.warnings
            .iter()
            .filter(|w| matches!(w, CorpusWarning::MalformedRow { .. }))
            .count()
    }
}

/// Parses a whole export. Malformed rows are reported as warnings unless
/// they exceed [`MAX_FAILED_FRACTION`] of the input.
pub fn parse_corpus<R: Read>(source: R, format: CorpusFormat) -> Result<ParsedCorpus, CorpusError> {
    parse_corpus_with(source, format, Execution::default())
}

pub fn parse_corpus_with<R: Read>(
    source: R,
    format: CorpusFormat,
    exec: Execution,
) -> Result<ParsedCorpus, CorpusError> {
    let (rows, mut warnings) = match format {
        CorpusFormat::Csv => parse_csv_rows(source, exec)?,
        CorpusFormat::Jsonl => parse_jsonl_rows(source, exec)?,
    };
    let total = rows.len();
    let mut records = Vec::with_capacity(total);
    let mut seen = HashSet::new();
    let mut failed = 0;
    for (line, row) in rows {
        match row {
            Ok(record) => {
                if seen.insert(record.publication_id.clone()) {
                    records.push(record);
                } else {
                    failed += 1;
                    warnings.push(CorpusWarning::MalformedRow {
                        line,
                        reason: format!("duplicate publication_id '{}'", record.publication_id),
                    });
                }
            }
            Err(reason) => {
                failed += 1;
                warnings.push(CorpusWarning::MalformedRow { line, reason });
            }
        }
    }
    if total > 0 && failed as f64 > MAX_FAILED_FRACTION * total as f64 {
        return Err(CorpusError::CorpusRejected {
            failed,
            total,
            warnings,
        });
    }
    for w in &warnings {
        warn!("{w:?}");
    }
    Ok(ParsedCorpus { records, warnings })
}

pub fn read_corpus_file(path: &std::path::Path) -> Result<ParsedCorpus, CorpusError> {
    let file = std::fs::File::open(path)?;
    parse_corpus(std::io::BufReader::new(file), CorpusFormat::from_path(path))
}

type RowResult = (u64, Result<PublicationRecord, String>);

fn parse_csv_rows<R: Read>(
    source: R,
    exec: Execution,
) -> Result<(Vec<RowResult>, Vec<CorpusWarning>), CorpusError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = reader.headers()?.clone();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut warnings = Vec::new();
    for (i, name) in headers.iter().enumerate() {
        let key = name.trim().to_ascii_lowercase();
        if COLUMNS.contains(&key.as_str()) {
            index.entry(key).or_insert(i);
        } else {
            warnings.push(CorpusWarning::UnknownColumn(name.to_string()));
        }
    }
    for &col in REQUIRED_COLUMNS {
        if !index.contains_key(col) {
            return Err(CorpusError::MissingRequiredColumn(col.to_string()));
        }
    }
    let mut raw = Vec::new();
    for result in reader.records() {
        let rec = result?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        raw.push((line, rec));
    }
    let columns = ColumnIndex(index);
    let rows = par::map_slice(exec, &raw, |(line, rec)| (*line, columns.record_from_row(rec)));
    Ok((rows, warnings))
}

fn parse_jsonl_rows<R: Read>(
    source: R,
    exec: Execution,
) -> Result<(Vec<RowResult>, Vec<CorpusWarning>), CorpusError> {
    let reader = std::io::BufReader::new(source);
    let mut lines = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if !line.trim().is_empty() {
            lines.push((i as u64 + 1, line));
        }
    }
    let rows = par::map_slice(exec, &lines, |(n, line)| {
        let parsed = serde_json::from_str::<PublicationRecord>(line)
            .map_err(|e| e.to_string())
            .and_then(|r| {
                if r.publication_id.trim().is_empty() {
                    Err("missing publication_id".to_string())
                } else {
                    Ok(r)
                }
            });
        (*n, parsed)
    });
    Ok((rows, Vec::new()))
}

struct ColumnIndex(HashMap<String, usize>);

impl ColumnIndex {
    fn cell<'a>(&self, rec: &'a csv::StringRecord, name: &str) -> &'a str {
        self.0
            .get(name)
            .and_then(|&i| rec.get(i))
            .map(str::trim)
            .unwrap_or("")
    }

    fn opt(&self, rec: &csv::StringRecord, name: &str) -> Option<String> {
        let v = self.cell(rec, name);
        (!v.is_empty()).then(|| v.to_string())
    }

    fn required<'a>(&self, rec: &'a csv::StringRecord, name: &str) -> Result<&'a str, String> {
        let v = self.cell(rec, name);
        if v.is_empty() {
            Err(format!("missing {name}"))
        } else {
            Ok(v)
        }
    }

    fn record_from_row(&self, rec: &csv::StringRecord) -> Result<PublicationRecord, String> {
        let publication_id = self.required(rec, "publication_id")?.to_string();
        let pub_year = parse_int::<i32>(self.required(rec, "pub_year")?, "pub_year")?;
        let online_year = match self.cell(rec, "online_year") {
            "" => None,
            v => Some(parse_int::<i32>(v, "online_year")?),
        };
        let document_type: DocumentType = self.required(rec, "document_type")?.parse()?;
        let times_cited = match self.cell(rec, "times_cited") {
            "" => 0,
            v => parse_int::<i64>(v, "times_cited")?,
        };

        let names = list(self.cell(rec, "authors"), ';');
        let n = names.len();
        let ids = self.per_author(rec, "author_ids", n)?;
        let orcids = self.per_author(rec, "author_orcids", n)?;
        let emails = self.per_author(rec, "author_emails", n)?;
        let affiliations = self.per_author(rec, "author_affiliations", n)?;
        let org_ids = self.per_author(rec, "author_org_ids", n)?;
        let countries = self.per_author(rec, "author_countries", n)?;
        let authors = names
            .into_iter()
            .enumerate()
            .map(|(i, raw_name)| AuthorMention {
                raw_name,
                source_researcher_id: non_empty(&ids[i]),
                orcid: non_empty(&orcids[i]),
                emails: list(&emails[i], '|'),
                affiliation_texts: list(&affiliations[i], '|'),
                org_registry_ids: list(&org_ids[i], '|'),
                countries: list(&countries[i], '|'),
            })
            .collect();

        let funder_names = list(self.cell(rec, "funders"), ';');
        let funder_ids = self.per_author(rec, "funder_ids", funder_names.len())?;
        let funders = funder_names
            .into_iter()
            .zip(funder_ids)
            .map(|(name, id)| FunderMention {
                name,
                registry_id: non_empty(&id),
            })
            .collect();

        Ok(PublicationRecord {
            publication_id,
            doi: self.opt(rec, "doi"),
            pmid: self.opt(rec, "pmid"),
            pmcid: self.opt(rec, "pmcid"),
            title: self.required(rec, "title")?.to_string(),
            abstract_text: self.opt(rec, "abstract"),
            acknowledgements: self.opt(rec, "acknowledgements"),
            funding_statement: self.opt(rec, "funding_statement"),
            publisher: self.required(rec, "publisher")?.to_string(),
            source_title: self.required(rec, "source_title")?.to_string(),
            issn: self.opt(rec, "issn"),
            pub_year,
            online_year,
            document_type,
            authors,
            corresponding_author_ids: list(self.cell(rec, "corresponding_author_ids"), ';')
                .into_iter()
                .collect(),
            funders,
            grant_ids: list(self.cell(rec, "grant_ids"), ';'),
            times_cited,
            fields_of_research: list(self.cell(rec, "fields_of_research"), ';'),
            reviewer_affiliations: self.opt(rec, "reviewer_affiliations"),
        })
    }

    /// One raw segment per author; an empty cell means "nothing for anyone".
    fn per_author(&self, rec: &csv::StringRecord, name: &str, n: usize) -> Result<Vec<String>, String> {
        let cell = self.cell(rec, name);
        if cell.is_empty() {
            return Ok(vec![String::new(); n]);
        }
        let segments: Vec<String> = cell.split(';').map(|s| s.trim().to_string()).collect();
        if segments.len() != n {
            return Err(format!(
                "column {name} has {} segments for {n} entries",
                segments.len()
            ));
        }
        Ok(segments)
    }
}

fn parse_int<T: FromStr>(v: &str, name: &str) -> Result<T, String> {
    v.parse::<T>()
        .map_err(|_| format!("{name} '{v}' is not an integer"))
}

fn non_empty(s: &str) -> Option<String> {
    let t = s.trim();
    (!t.is_empty()).then(|| t.to_string())
}

fn list(cell: &str, sep: char) -> Vec<String> {
    if cell.trim().is_empty() {
        return Vec::new();
    }
    cell.split(sep).map(|s| s.trim().to_string()).collect()
}

fn join_checked<'a, I>(column: &'static str, sep: &str, items: I) -> Result<String, CorpusError>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut out = Vec::new();
    for item in items {
        if item.contains(';') || item.contains('|') {
            return Err(CorpusError::ReservedSeparator {
                column,
                value: item.to_string(),
            });
        }
        out.push(item);
    }
    Ok(out.join(sep))
}

fn per_author_cell<F>(column: &'static str, authors: &[AuthorMention], f: F) -> Result<String, CorpusError>
where
    F: Fn(&AuthorMention) -> Vec<&str>,
{
    let segments = authors
        .iter()
        .map(|a| join_checked(column, "|", f(a)))
        .collect::<Result<Vec<_>, _>>()?;
    if segments.iter().all(String::is_empty) {
        return Ok(String::new());
    }
    Ok(segments.join(";"))
}

/// Writes records as CSV with the full column set.
pub fn write_csv<W: Write>(records: &[PublicationRecord], out: W) -> Result<(), CorpusError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in records {
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        let authors = &r.authors;
        let row = vec![
            r.publication_id.clone(),
            opt(&r.doi),
            opt(&r.pmid),
            opt(&r.pmcid),
            r.title.clone(),
            opt(&r.abstract_text),
            opt(&r.acknowledgements),
            opt(&r.funding_statement),
            r.publisher.clone(),
            r.source_title.clone(),
            opt(&r.issn),
            r.pub_year.to_string(),
            r.online_year.map(|y| y.to_string()).unwrap_or_default(),
            r.document_type.to_string(),
            join_checked("authors", ";", authors.iter().map(|a| a.raw_name.as_str()))?,
            per_author_cell("author_ids", authors, |a| {
                a.source_researcher_id.as_deref().into_iter().collect()
            })?,
            per_author_cell("author_orcids", authors, |a| a.orcid.as_deref().into_iter().collect())?,
            per_author_cell("author_emails", authors, |a| a.emails.iter().map(String::as_str).collect())?,
            per_author_cell("author_affiliations", authors, |a| {
                a.affiliation_texts.iter().map(String::as_str).collect()
            })?,
            per_author_cell("author_org_ids", authors, |a| {
                a.org_registry_ids.iter().map(String::as_str).collect()
            })?,
            per_author_cell("author_countries", authors, |a| {
                a.countries.iter().map(String::as_str).collect()
            })?,
            join_checked(
                "corresponding_author_ids",
                ";",
                r.corresponding_author_ids.iter().map(String::as_str),
            )?,
            join_checked("funders", ";", r.funders.iter().map(|f| f.name.as_str()))?,
            {
                let ids: Vec<&str> = r
                    .funders
                    .iter()
                    .map(|f| f.registry_id.as_deref().unwrap_or(""))
                    .collect();
                if ids.iter().all(|s| s.is_empty()) {
                    String::new()
                } else {
                    join_checked("funder_ids", ";", ids)?
                }
            },
            join_checked("grant_ids", ";", r.grant_ids.iter().map(String::as_str))?,
            r.times_cited.to_string(),
            join_checked("fields_of_research", ";", r.fields_of_research.iter().map(String::as_str))?,
            opt(&r.reviewer_affiliations),
        ];
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_jsonl<W: Write>(records: &[PublicationRecord], mut out: W) -> Result<(), CorpusError> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_corpus<W: Write>(
    records: &[PublicationRecord],
    format: CorpusFormat,
    out: W,
) -> Result<(), CorpusError> {
    match format {
        CorpusFormat::Csv => write_csv(records, out),
        CorpusFormat::Jsonl => write_jsonl(records, out),
    }
}

pub fn write_corpus_file(path: &std::path::Path, records: &[PublicationRecord]) -> Result<(), CorpusError> {
    let file = std::fs::File::create(path)?;
    write_corpus(records, CorpusFormat::from_path(path), std::io::BufWriter::new(file))
}

/// Publications per calendar year; years without records are absent.
pub fn per_year_counts(records: &[PublicationRecord]) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for r in records {
        *out.entry(r.pub_year).or_insert(0) += 1;
    }
    out
}

/// Distinct publishers and journals, as (publishers, source titles).
pub fn venue_counts(records: &[PublicationRecord]) -> (usize, usize) {
    let publishers: BTreeSet<&str> = records.iter().map(|r| r.publisher.as_str()).collect();
    let journals: BTreeSet<(&str, &str)> = records
        .iter()
        .filter(|r| r.document_type.is_article())
        .map(|r| (r.publisher.as_str(), r.source_title.as_str()))
        .collect();
    (publishers.len(), journals.len())
}
