//! Rendered tables are compared byte for byte with files under
//! `fixtures/golden`. Set `UPDATE_GOLDEN=1` to rewrite them after an
//! intentional format change.

mod common;

use std::path::PathBuf;

use papertrail::model::{DocumentType, PublicationRecord};
use papertrail::report::{
    cluster_report, per_year_table, publisher_rollup, render, write_report_dir, Cell, Format, ReportError,
    ReportTable, RowKind, BOOK_CHAPTERS,
};
use papertrail::resolve::{apply_careers, resolve};
use papertrail::screening::{screen, ScreeningCriteria};
use papertrail::temporal::{run_pipeline, PipelineConfig};

use common::{fixture, case_study};

fn check_golden(name: &str, bytes: &[u8]) {
    let path: PathBuf = fixture("golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, bytes).unwrap();
        return;
    }
    let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e} (run with UPDATE_GOLDEN=1)", path.display()));
    assert!(
        want == bytes,
        "{name} differs from golden:\n{}",
        String::from_utf8_lossy(bytes)
    );
}

fn included() -> Vec<PublicationRecord> {
    screen(&case_study().records, &ScreeningCriteria::default()).0
}

#[test]
fn publisher_rollup_matches_golden() {
    let t = publisher_rollup(&included());
    for f in Format::ALL {
        check_golden(&format!("publishers.{}", f.extension()), &render(&t, f).unwrap());
    }
}

#[test]
fn publisher_rollup_totals() {
    let records = included();
    let t = publisher_rollup(&records);
    let grand = t.rows.last().unwrap();
    assert_eq!(grand.kind, RowKind::GrandTotal);
    assert_eq!(grand.cells[3], Cell::Int(records.len() as i64));
    let cites: i64 = records.iter().map(|r| r.times_cited).sum();
    assert_eq!(grand.cells[4], Cell::Int(cites));
    let chapters = records.iter().filter(|r| r.document_type == DocumentType::ResearchChapter).count();
    let chapter_rows: Vec<_> = t.data_rows().filter(|r| r.cells[1] == Cell::text(BOOK_CHAPTERS)).collect();
    assert_eq!(chapter_rows.len(), 1);
    assert_eq!(chapter_rows[0].cells[3], Cell::Int(chapters as i64));
    assert_eq!(chapter_rows[0].cells[2], Cell::Int(0));
}

#[test]
fn cluster_report_matches_golden() {
    let f = case_study();
    let records = included();
    let mut profiles = resolve(&records, &f.merges).unwrap();
    apply_careers(&mut profiles, &f.careers);
    let solution = run_pipeline(&profiles, &PipelineConfig::default()).unwrap();
    let t = cluster_report(&solution);
    for f in Format::ALL {
        check_golden(&format!("clusters.{}", f.extension()), &render(&t, f).unwrap());
    }
    let sizes: i64 = t
        .data_rows()
        .map(|r| match r.cells[4] {
            Cell::Int(n) => n,
            _ => panic!("size is not an integer"),
        })
        .sum();
    assert_eq!(sizes as usize, solution.points.len());
}

#[test]
fn rendering_is_byte_stable() {
    let t = publisher_rollup(&included());
    for f in Format::ALL {
        assert_eq!(render(&t, f).unwrap(), render(&t.clone(), f).unwrap());
    }
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_report_dir(a.path(), std::slice::from_ref(&t)).unwrap();
    write_report_dir(b.path(), std::slice::from_ref(&t)).unwrap();
    for f in ["publishers.csv", "publishers.json", "publishers.md", "publishers.svg", "index.md"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn empty_table_renders_header_only() {
    let t = ReportTable::new("empty", "Nothing", &["A", "B"]);
    assert_eq!(render(&t, Format::Csv).unwrap(), b"A,B\r\n");
    let md = String::from_utf8(render(&t, Format::Md).unwrap()).unwrap();
    assert_eq!(md, "## Nothing\n\n| A | B |\n| --- | --- |\n");
    let json: serde_json::Value = serde_json::from_slice(&render(&t, Format::Json).unwrap()).unwrap();
    assert_eq!(json["rows"], serde_json::json!([]));
    assert!(String::from_utf8(render(&t, Format::Svg).unwrap()).unwrap().contains("</svg>"));
    assert_eq!(per_year_table(&[]).rows.len(), 0);
}

#[test]
fn per_year_svg_has_one_bar_per_year() {
    let records = included();
    let t = per_year_table(&records);
    let svg = String::from_utf8(render(&t, Format::Svg).unwrap()).unwrap();
    let bars = svg.matches("fill=\"#4a7ab5\"").count();
    assert_eq!(bars, 4);
    for y in 2019..=2022 {
        assert!(svg.contains(&format!(">{y}</text>")), "{y}");
    }
    check_golden("per_year.svg", svg.as_bytes());
}

#[test]
fn bad_totals_are_refused() {
    let mut t = ReportTable::new("t", "T", &["Label", "N"]);
    t.push(RowKind::Data, vec![Cell::text("a"), Cell::Int(2)]);
    t.push(RowKind::Data, vec![Cell::text("b"), Cell::Int(3)]);
    t.push(RowKind::GrandTotal, vec![Cell::text("Total"), Cell::Int(6)]);
    assert!(matches!(render(&t, Format::Csv), Err(ReportError::TotalMismatch { found: 6, expected: 5, .. })));
    t.push(RowKind::Data, vec![Cell::text("short")]);
    assert!(matches!(t.check_totals(), Err(ReportError::RowWidth(_))));
    assert!("xlsx".parse::<Format>().is_err());
}

#[test]
fn markdown_escapes_pipes_and_bolds_totals() {
    let mut t = ReportTable::new("t", "T", &["Label", "N"]);
    t.push(RowKind::Data, vec![Cell::text("a|b"), Cell::Int(1)]);
    t.push(RowKind::GrandTotal, vec![Cell::text("Total"), Cell::Int(1)]);
    let md = String::from_utf8(render(&t, Format::Md).unwrap()).unwrap();
    assert!(md.contains("| a\\|b | 1 |"));
    assert!(md.contains("| **Total** | **1** |"));
    assert!(md.contains("| --- | ---: |"));
}
