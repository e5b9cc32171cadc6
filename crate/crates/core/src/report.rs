//! Tabular reports and their CSV, JSON, Markdown and SVG renderings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::funding::{FundingSummary, NewGranteeSummary};
use crate::model::{DocumentType, PublicationRecord};
use crate::network::NetworkReport;
use crate::resolve::ResearcherProfile;
use crate::screening::ScreeningReport;
use crate::temporal::ClusterSolution;
use crate::trust::CorpusTrustSummary;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unsupported format '{0}' (expected csv, json, md or svg)")]
    UnsupportedFormat(String),
    #[error("table '{table}': {row_kind} row {row} column '{column}' is {found}, expected {expected}")]
    TotalMismatch {
        table: String,
        row_kind: &'static str,
        row: usize,
        column: String,
        found: i64,
        expected: i64,
    },
    #[error("table '{0}': row width differs from header")]
    RowWidth(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    /// value and display decimals
    Real(f64, usize),
    Text(String),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn real(v: f64, decimals: usize) -> Cell {
        Cell::Real(v, decimals)
    }

    pub fn empty() -> Cell {
        Cell::Text(String::new())
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Cell::Int(_) | Cell::Real(..))
    }

    fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Real(v, _) => Some(v),
            Cell::Text(_) => None,
        }
    }

    pub fn display(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v, d) => format!("{v:.d$}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Data,
    Subtotal,
    GrandTotal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub kind: RowKind,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    /// File stem used when written to a report directory.
    pub name: String,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
}

impl ReportTable {
    pub fn new(name: &str, title: &str, columns: &[&str]) -> Self {
        ReportTable {
            name: name.to_string(),
            title: title.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, kind: RowKind, cells: Vec<Cell>) {
        self.rows.push(ReportRow { kind, cells });
    }

    pub fn data_rows(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.kind == RowKind::Data)
    }

    /// Subtotals equal their group's data rows; the grand total equals the
    /// subtotals, or the data rows when there are none.
    pub fn check_totals(&self) -> Result<(), ReportError> {
        if self.rows.iter().any(|r| r.cells.len() != self.columns.len()) {
            return Err(ReportError::RowWidth(self.name.clone()));
        }
        let width = self.columns.len();
        let has_subtotals = self.rows.iter().any(|r| r.kind == RowKind::Subtotal);
        let mut group = vec![0i64; width];
        let mut subtotal_sum = vec![0i64; width];
        let mut data_sum = vec![0i64; width];
        let mismatch = |kind: &'static str, row: usize, c: usize, found: i64, expected: i64| ReportError::TotalMismatch {
            table: self.name.clone(),
            row_kind: kind,
            row,
            column: self.columns[c].clone(),
            found,
            expected,
        };
        for (i, row) in self.rows.iter().enumerate() {
            match row.kind {
                RowKind::Data => {
                    for (c, cell) in row.cells.iter().enumerate() {
                        if let Cell::Int(v) = cell {
                            group[c] += v;
                            data_sum[c] += v;
                        }
                    }
                }
                RowKind::Subtotal => {
                    for (c, cell) in row.cells.iter().enumerate() {
                        if let Cell::Int(v) = cell {
                            if *v != group[c] {
                                return Err(mismatch("subtotal", i, c, *v, group[c]));
                            }
                            subtotal_sum[c] += v;
                        }
                    }
                    group.iter_mut().for_each(|g| *g = 0);
                }
                RowKind::GrandTotal => {
                    let expected = if has_subtotals { &subtotal_sum } else { &data_sum };
                    for (c, cell) in row.cells.iter().enumerate() {
                        if let Cell::Int(v) = cell {
                            if *v != expected[c] {
                                return Err(mismatch("grand total", i, c, *v, expected[c]));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Md,
    Svg,
}

impl Format {
    pub const ALL: [Format; 4] = [Format::Csv, Format::Json, Format::Md, Format::Svg];

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Md => "md",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = ReportError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Md),
            "svg" => Ok(Format::Svg),
            _ => Err(ReportError::UnsupportedFormat(s.to_string())),
        }
    }
}

pub fn render(table: &ReportTable, format: Format) -> Result<Vec<u8>, ReportError> {
    table.check_totals()?;
    match format {
        Format::Csv => render_csv(table),
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&JsonTable::from(table))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Md => Ok(render_md(table).into_bytes()),
        Format::Svg => Ok(render_svg(table).into_bytes()),
    }
}

fn render_csv(table: &ReportTable) -> Result<Vec<u8>, ReportError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.cells.iter().map(Cell::display))?;
    }
    w.into_inner().map_err(|e| ReportError::Io(e.into_error()))
}

#[derive(Serialize)]
struct JsonTable<'a> {
    title: &'a str,
    columns: &'a [String],
    rows: Vec<JsonRow>,
}

#[derive(Serialize)]
struct JsonRow {
    kind: RowKind,
    cells: Vec<serde_json::Value>,
}

impl<'a> From<&'a ReportTable> for JsonTable<'a> {
    fn from(t: &'a ReportTable) -> Self {
        JsonTable {
            title: &t.title,
            columns: &t.columns,
            rows: t
                .rows
                .iter()
                .map(|r| JsonRow {
                    kind: r.kind,
                    cells: r
                        .cells
                        .iter()
                        .map(|c| match c {
                            Cell::Int(v) => serde_json::Value::from(*v),
                            Cell::Real(v, _) => serde_json::Value::from(*v),
                            Cell::Text(s) => serde_json::Value::from(s.as_str()),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

fn render_md(table: &ReportTable) -> String {
    let mut out = format!("## {}\n\n", table.title);
    let header: Vec<String> = table.columns.iter().map(|c| md_escape(c)).collect();
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let align: Vec<&str> = (0..table.columns.len())
        .map(|c| {
            let numeric = table.rows.iter().any(|r| r.cells.get(c).is_some_and(Cell::is_numeric));
            if numeric { "---:" } else { "---" }
        })
        .collect();
    let _ = writeln!(out, "| {} |", align.join(" | "));
    for row in &table.rows {
        let cells: Vec<String> = row
            .cells
            .iter()
            .map(|c| {
                let s = md_escape(&c.display());
                if row.kind != RowKind::Data && !s.is_empty() {
                    format!("**{s}**")
                } else {
                    s
                }
            })
            .collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Horizontal bar chart of the first numeric column over data rows. Each bar
/// is labelled with the last non-empty text cell before that column.
fn render_svg(table: &ReportTable) -> String {
    const ROW_H: usize = 22;
    const LABEL_W: usize = 340;
    const BAR_W: f64 = 420.0;
    const TOP: usize = 48;
    let value_col = table
        .data_rows()
        .flat_map(|r| r.cells.iter().position(Cell::is_numeric))
        .min();
    let bars: Vec<(String, Cell)> = match value_col {
        Some(vc) => table
            .data_rows()
            .map(|r| {
                let label = r.cells[..vc]
                    .iter()
                    .rev()
                    .map(Cell::display)
                    .find(|s| !s.is_empty())
                    .unwrap_or_default();
                (label, r.cells[vc].clone())
            })
            .collect(),
        None => Vec::new(),
    };
    let max = bars
        .iter()
        .filter_map(|(_, c)| c.as_f64())
        .fold(0.0f64, f64::max);
    let width = LABEL_W + BAR_W as usize + 80;
    let height = TOP + ROW_H * bars.len().max(1) + 36;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="10" y="22" font-size="15" font-weight="bold">{}</text>"#,
        xml_escape(&table.title)
    );
    if let Some(vc) = value_col {
        let _ = writeln!(
            s,
            r##"<text x="{LABEL_W}" y="40" fill="#555">{}</text>"##,
            xml_escape(&table.columns[vc])
        );
    }
    for (i, (label, value)) in bars.iter().enumerate() {
        let y = TOP + i * ROW_H;
        let v = value.as_f64().unwrap_or(0.0);
        let w = if max > 0.0 { (v / max * BAR_W).max(0.0) } else { 0.0 };
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            LABEL_W - 8,
            y + 15,
            xml_escape(label)
        );
        let _ = writeln!(
            s,
            r##"<rect x="{LABEL_W}" y="{}" width="{w:.2}" height="{}" fill="#4a7ab5"/>"##,
            y + 3,
            ROW_H - 6
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}">{}</text>"#,
            LABEL_W as f64 + w + 6.0,
            y + 15,
            xml_escape(&value.display())
        );
    }
    let axis_y = TOP + ROW_H * bars.len().max(1) + 4;
    let _ = writeln!(
        s,
        r##"<line x1="{LABEL_W}" y1="{TOP}" x2="{LABEL_W}" y2="{axis_y}" stroke="#333"/>"##
    );
    s.push_str("</svg>\n");
    s
}

/// Writes every table in every format as `<dir>/<name>.<ext>` plus an
/// `index.md` listing them.
pub fn write_report_dir(dir: &Path, tables: &[ReportTable]) -> Result<(), ReportError> {
    std::fs::create_dir_all(dir)?;
    let mut index = String::from("# Report\n\n");
    for t in tables {
        for f in Format::ALL {
            std::fs::write(dir.join(format!("{}.{}", t.name, f.extension())), render(t, f)?)?;
        }
        let _ = writeln!(index, "- [{}]({}.md)", t.title, t.name);
    }
    std::fs::write(dir.join("index.md"), index)?;
    Ok(())
}

fn sort_key(s: &str) -> (String, String) {
    (s.to_lowercase(), s.to_string())
}

pub const BOOK_CHAPTERS: &str = "Book chapters";

/// Publications and citations per publisher and source title. Chapters are
/// pooled into one row per publisher. "Articles" counts research and review
/// papers; "Documents" counts everything.
pub fn publisher_rollup(records: &[PublicationRecord]) -> ReportTable {
    // (articles, documents, citations) keyed by case-folded publisher, then source
    type Tally = (i64, i64, i64);
    let mut groups: BTreeMap<(String, String), BTreeMap<(String, String), Tally>> = BTreeMap::new();
    for r in records {
        let source = if r.document_type == DocumentType::ResearchChapter {
            BOOK_CHAPTERS.to_string()
        } else {
            r.source_title.clone()
        };
        let e = groups
            .entry(sort_key(&r.publisher))
            .or_default()
            .entry(sort_key(&source))
            .or_default();
        e.0 += i64::from(r.document_type.is_article());
        e.1 += 1;
        e.2 += r.times_cited;
    }
    let mut t = ReportTable::new(
        "publishers",
        "Publications and citations by publisher and source title",
        &["Publisher", "Source title", "Articles", "Documents", "Times cited"],
    );
    let mut grand = (0, 0, 0);
    for ((_, publisher), sources) in &groups {
        let mut sub = (0, 0, 0);
        for ((_, source), &(a, d, c)) in sources {
            t.push(
                RowKind::Data,
                vec![Cell::text(publisher), Cell::text(source), Cell::Int(a), Cell::Int(d), Cell::Int(c)],
            );
            sub = (sub.0 + a, sub.1 + d, sub.2 + c);
        }
        t.push(
            RowKind::Subtotal,
            vec![
                Cell::text(format!("{publisher} Total")),
                Cell::empty(),
                Cell::Int(sub.0),
                Cell::Int(sub.1),
                Cell::Int(sub.2),
            ],
        );
        grand = (grand.0 + sub.0, grand.1 + sub.1, grand.2 + sub.2);
    }
    t.push(
        RowKind::GrandTotal,
        vec![Cell::text("Grand Total"), Cell::empty(), Cell::Int(grand.0), Cell::Int(grand.1), Cell::Int(grand.2)],
    );
    t
}

/// Integer percentages, each rounded half away from zero; the column may
/// sum to 99 or 101.
fn rounded_percentages(sizes: &[usize]) -> Vec<i64> {
    let total: usize = sizes.iter().sum();
    if total == 0 {
        return vec![0; sizes.len()];
    }
    sizes
        .iter()
        .map(|&s| (100.0 * s as f64 / total as f64).round() as i64)
        .collect()
}

/// One row per cluster, largest first, with mean raw period shares.
pub fn cluster_report(solution: &ClusterSolution) -> ReportTable {
    let w = &solution.config.windows;
    let before = format!("Before ({})", w.before);
    let during = format!("During ({})", w.during);
    let after = format!("After ({})", w.after);
    let mut t = ReportTable::new(
        "clusters",
        "Mean share of publication activity per author cluster",
        &["Cluster", &before, &during, &after, "Authors", "Percent"],
    );
    let mut clusters = solution.clusters.clone();
    clusters.sort_by(|a, b| b.size.cmp(&a.size).then(a.cluster.cmp(&b.cluster)));
    let pct = rounded_percentages(&clusters.iter().map(|c| c.size).collect::<Vec<_>>());
    for (c, p) in clusters.iter().zip(pct) {
        let mut cells = vec![Cell::text(format!("Cluster {}", c.cluster))];
        cells.extend(c.centroid.iter().map(|&v| Cell::real(v, 3)));
        cells.push(Cell::Int(c.size as i64));
        cells.push(Cell::Int(p));
        t.push(RowKind::Data, cells);
    }
    t
}

/// Authors per country; a profile with several countries counts in each and
/// is tallied in the multi-country column.
pub fn country_counts(profiles: &[ResearcherProfile]) -> ReportTable {
    let mut counts: BTreeMap<&str, (i64, i64)> = BTreeMap::new();
    for p in profiles {
        let multi = p.countries.len() > 1;
        for c in &p.countries {
            let e = counts.entry(c.as_str()).or_default();
            e.0 += 1;
            e.1 += i64::from(multi);
        }
    }
    let mut rows: Vec<(&str, (i64, i64))> = counts.into_iter().collect();
    rows.sort_by(|a, b| b.1 .0.cmp(&a.1 .0).then(a.0.cmp(b.0)));
    let mut t = ReportTable::new(
        "countries",
        "Author countries",
        &["Country", "Authors", "Multi-country authors"],
    );
    for (c, (n, m)) in rows {
        t.push(RowKind::Data, vec![Cell::text(c), Cell::Int(n), Cell::Int(m)]);
    }
    t
}

/// Publications per year, every year between the first and last present.
pub fn per_year_table(records: &[PublicationRecord]) -> ReportTable {
    let counts = crate::corpus::per_year_counts(records);
    let mut t = ReportTable::new("per_year", "Publications per year", &["Year", "Publications"]);
    if let (Some(&lo), Some(&hi)) = (counts.keys().next(), counts.keys().next_back()) {
        for y in lo..=hi {
            t.push(
                RowKind::Data,
                vec![Cell::text(y.to_string()), Cell::Int(counts.get(&y).copied().unwrap_or(0) as i64)],
            );
        }
        t.push(
            RowKind::GrandTotal,
            vec![Cell::text("Total"), Cell::Int(records.len() as i64)],
        );
    }
    t
}

pub fn screening_table(report: &ScreeningReport) -> ReportTable {
    let mut t = ReportTable::new("screening", "Screening outcome", &["Outcome", "Records"]);
    for (label, n) in [
        ("Retraction notices", report.retraction_notice_count),
        ("Excluded document type", report.doc_type_excluded_count),
        ("Reviewer affiliation only", report.reviewer_only_count),
        ("Too many authors", report.too_many_authors_count),
        ("Included", report.included_count),
    ] {
        t.push(RowKind::Data, vec![Cell::text(label), Cell::Int(n as i64)]);
    }
    t.push(RowKind::GrandTotal, vec![Cell::text("Input records"), Cell::Int(report.input_count as i64)]);
    t
}

pub fn trust_table(summary: &CorpusTrustSummary) -> ReportTable {
    let mut t = ReportTable::new(
        "unverified_funders",
        "Funders absent from the registry",
        &["Funder", "Publications"],
    );
    let mut rows: Vec<(&String, &usize)> = summary.unmatched_funder_names.iter().collect();
    rows.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    for (name, n) in rows {
        t.push(RowKind::Data, vec![Cell::text(name), Cell::Int(*n as i64)]);
    }
    t
}

pub fn new_grantee_table(summary: &NewGranteeSummary, funding: &FundingSummary) -> ReportTable {
    let mut agencies: BTreeMap<(&str, &str), (BTreeSet<&str>, i64)> = BTreeMap::new();
    let new_ids: BTreeSet<&str> = summary.researchers.iter().map(|r| r.profile_id.as_str()).collect();
    let mut seen = BTreeSet::new();
    for g in &funding.grants {
        let holders: Vec<&str> = g
            .network_researchers
            .iter()
            .map(String::as_str)
            .filter(|id| new_ids.contains(id))
            .collect();
        if holders.is_empty() || g.period == crate::compositional::Period::Before {
            continue;
        }
        let e = agencies.entry((&g.funder_name, &g.funder_country)).or_default();
        e.0.extend(holders);
        if seen.insert(&g.grant_id) {
            e.1 += g.usd_equivalent.map_or(0, |m| m.cents());
        }
    }
    let mut t = ReportTable::new(
        "new_grantees",
        "Funding agencies of researchers first funded after joining the network",
        &["Funding agency", "Country", "Researchers", "USD equivalent"],
    );
    for ((a, c), (who, cents)) in agencies {
        t.push(
            RowKind::Data,
            vec![
                Cell::text(a),
                Cell::text(c),
                Cell::Int(who.len() as i64),
                Cell::real(cents as f64 / 100.0, 2),
            ],
        );
    }
    t
}

pub fn network_table(report: &NetworkReport) -> ReportTable {
    let mut t = ReportTable::new("network", "Network and citation summary", &["Measure", "Value"]);
    let mut row = |label: &str, cell: Cell| t.push(RowKind::Data, vec![Cell::text(label), cell]);
    row("Authors", Cell::Int(report.node_count as i64));
    row("Co-authorship links", Cell::Int(report.edge_count as i64));
    row("Mean degree", Cell::real(report.mean_degree, 2));
    row("Average clustering coefficient", Cell::real(report.average_clustering, 3));
    if let Some(c) = &report.citations {
        row("Publications", Cell::Int(c.count as i64));
        row("Total citations", Cell::Int(c.total));
        row("Mean citations", Cell::real(c.mean, 2));
        row("Median citations", Cell::real(c.median, 1));
        row("Uncited publications", Cell::Int(c.uncited_count as i64));
        row("Cited fewer than 10 times", Cell::Int(c.low_cited_count as i64));
    }
    row(
        &format!("Papers with more than {} authors", report.author_counts.threshold),
        Cell::Int(report.author_counts.flagged.len() as i64),
    );
    t
}

pub fn funding_table(summary: &FundingSummary) -> ReportTable {
    let mut t = ReportTable::new("funding", "Grant funding of network researchers", &["Measure", "Value"]);
    let mut row = |label: &str, cell: Cell| t.push(RowKind::Data, vec![Cell::text(label), cell]);
    row("Funded researchers", Cell::Int(summary.funded_researcher_count as i64));
    row("Linked grants", Cell::Int(summary.grants.len() as i64));
    row("Funder countries", Cell::Int(summary.countries.len() as i64));
    row(
        &format!("USD equivalent (rates as of {})", summary.as_of),
        Cell::real(summary.usd_equivalent_total.cents() as f64 / 100.0, 2),
    );
    row("Grants without amounts", Cell::Int(summary.missing_amount_grants.len() as i64));
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(publisher: &str, source: &str, dt: DocumentType, cites: i64) -> PublicationRecord {
        let mut r = PublicationRecord::new("x", 2020, dt);
        r.publisher = publisher.into();
        r.source_title = source.into();
        r.times_cited = cites;
        r
    }

    #[test]
    fn rollup_totals_and_order() {
        let recs = vec![
            rec("Zeta", "B", DocumentType::ResearchArticle, 5),
            rec("Alpha", "Q", DocumentType::ReviewArticle, 7),
            rec("Zeta", "A", DocumentType::ResearchArticle, 1),
            rec("Zeta", "Some Book", DocumentType::ResearchChapter, 4),
        ];
        let t = publisher_rollup(&recs);
        t.check_totals().unwrap();
        let names: Vec<String> = t.rows.iter().map(|r| r.cells[1].display()).collect();
        assert_eq!(names, ["Q", "", "A", "B", BOOK_CHAPTERS, "", ""]);
        let grand = t.rows.last().unwrap();
        assert_eq!(grand.cells[2..], [Cell::Int(3), Cell::Int(4), Cell::Int(17)]);
    }

    #[test]
    fn single_paper_rollup() {
        let t = publisher_rollup(&[rec("P", "J", DocumentType::ResearchArticle, 9)]);
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[0].cells[4], Cell::Int(9));
        assert_eq!(t.rows[2].cells[4], Cell::Int(9));
    }

    #[test]
    fn totals_are_checked() {
        let mut t = ReportTable::new("t", "t", &["a", "n"]);
        t.push(RowKind::Data, vec![Cell::text("x"), Cell::Int(2)]);
        t.push(RowKind::GrandTotal, vec![Cell::text("total"), Cell::Int(3)]);
        assert!(matches!(render(&t, Format::Csv), Err(ReportError::TotalMismatch { .. })));
    }

    #[test]
    fn empty_table_renders_header_only() {
        let t = ReportTable::new("t", "Empty", &["a", "b"]);
        assert_eq!(render(&t, Format::Csv).unwrap(), b"a,b\r\n");
        assert!(String::from_utf8(render(&t, Format::Svg).unwrap()).unwrap().starts_with("<svg"));
    }

    #[test]
    fn formats() {
        assert_eq!("MD".parse::<Format>().unwrap(), Format::Md);
        assert!(matches!("pdf".parse::<Format>(), Err(ReportError::UnsupportedFormat(_))));
        let mut t = ReportTable::new("t", "A|B", &["k", "v"]);
        t.push(RowKind::Data, vec![Cell::text("a|b"), Cell::real(0.5, 3)]);
        let md = String::from_utf8(render(&t, Format::Md).unwrap()).unwrap();
        assert_eq!(md, "## A|B\n\n| k | v |\n| --- | ---: |\n| a\\|b | 0.500 |\n");
        let json = String::from_utf8(render(&t, Format::Json).unwrap()).unwrap();
        assert!(json.contains("0.5"));
    }

    #[test]
    fn percentages_round_each_cluster() {
        assert_eq!(rounded_percentages(&[202, 68, 24, 18]), vec![65, 22, 8, 6]);
        assert_eq!(rounded_percentages(&[1, 1, 1]), vec![33, 33, 33]);
    }
}
