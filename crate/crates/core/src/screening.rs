//! Inclusion/exclusion funnel applied to a retrieved corpus.
//!
//! Rules are applied in a fixed order and the first matching rule decides a
//! record's class: retraction notice, document type, reviewer-only mention,
//! author-count cap. Everything left is included.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{DocumentType, PublicationRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreeningCriteria {
    pub phrase: String,
    pub allowed_document_types: BTreeSet<DocumentType>,
    pub max_authors: usize,
    pub exclude_reviewer_only: bool,
}

impl Default for ScreeningCriteria {
    fn default() -> Self {
        ScreeningCriteria {
            phrase: "Pharmakon Neuroscience".to_string(),
            allowed_document_types: BTreeSet::from([
                DocumentType::ResearchArticle,
                DocumentType::ReviewArticle,
                DocumentType::Editorial,
                DocumentType::ResearchChapter,
            ]),
            max_authors: 25,
            exclude_reviewer_only: true,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("screening phrase must not be empty")]
    EmptyPhrase,
    #[error("max_authors must be at least 1")]
    ZeroMaxAuthors,
}

impl ScreeningCriteria {
    pub fn validate(&self) -> Result<(), CriteriaError> {
        if self.phrase.trim().is_empty() {
            return Err(CriteriaError::EmptyPhrase);
        }
        if self.max_authors == 0 {
            return Err(CriteriaError::ZeroMaxAuthors);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScreeningClass {
    Included,
    RetractionNotice,
    DocTypeExcluded,
    ReviewerOnly,
    TooManyAuthors,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreeningReport {
    pub input_count: usize,
    pub retraction_notice_count: usize,
    pub doc_type_excluded_count: usize,
    pub reviewer_only_count: usize,
    pub too_many_authors_count: usize,
    pub included_count: usize,
}

impl ScreeningReport {
    pub fn excluded_count(&self) -> usize {
        self.retraction_notice_count
            + self.doc_type_excluded_count
            + self.reviewer_only_count
            + self.too_many_authors_count
    }

    /// Every input record is counted exactly once.
    pub fn is_partition(&self) -> bool {
        self.input_count == self.included_count + self.excluded_count()
    }

    fn count(&mut self, class: ScreeningClass) {
        self.input_count += 1;
        match class {
            ScreeningClass::Included => self.included_count += 1,
            ScreeningClass::RetractionNotice => self.retraction_notice_count += 1,
            ScreeningClass::DocTypeExcluded => self.doc_type_excluded_count += 1,
            ScreeningClass::ReviewerOnly => self.reviewer_only_count += 1,
            ScreeningClass::TooManyAuthors => self.too_many_authors_count += 1,
        }
    }
}

fn contains_folded(haystack: &str, needle_lower: &str) -> bool {
    haystack.to_lowercase().contains(needle_lower)
}

/// Whether the phrase appears in the funding statement, acknowledgements or
/// any author affiliation.
pub fn mentions_phrase(record: &PublicationRecord, phrase: &str) -> bool {
    let needle = phrase.to_lowercase();
    record
        .funding_statement
        .iter()
        .chain(record.acknowledgements.iter())
        .chain(record.authors.iter().flat_map(|a| a.affiliation_texts.iter()))
        .any(|text| contains_folded(text, &needle))
}

/// Phrase found only among the reviewers. Unknown reviewer data never qualifies.
pub fn is_reviewer_only(record: &PublicationRecord, phrase: &str) -> bool {
    match &record.reviewer_affiliations {
        Some(reviewers) => {
            contains_folded(reviewers, &phrase.to_lowercase()) && !mentions_phrase(record, phrase)
        }
        None => false,
    }
}

pub fn classify_record(record: &PublicationRecord, criteria: &ScreeningCriteria) -> ScreeningClass {
    if record.document_type == DocumentType::RetractionNotice {
        ScreeningClass::RetractionNotice
    } else if !criteria.allowed_document_types.contains(&record.document_type) {
        ScreeningClass::DocTypeExcluded
    } else if criteria.exclude_reviewer_only && is_reviewer_only(record, &criteria.phrase) {
        ScreeningClass::ReviewerOnly
    } else if record.authors.len() > criteria.max_authors {
        ScreeningClass::TooManyAuthors
    } else {
        ScreeningClass::Included
    }
}

/// Splits a corpus into the included records (input order kept) and a count report.
pub fn screen(
    records: &[PublicationRecord],
    criteria: &ScreeningCriteria,
) -> (Vec<PublicationRecord>, ScreeningReport) {
    let mut report = ScreeningReport::default();
    let mut included = Vec::new();
    for record in records {
        let class = classify_record(record, criteria);
        report.count(class);
        if class == ScreeningClass::Included {
            included.push(record.clone());
        }
    }
    debug_assert!(report.is_partition());
    (included, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AuthorMention;

    fn article(id: &str, n_authors: usize) -> PublicationRecord {
        let mut r = PublicationRecord::new(id, 2020, DocumentType::ResearchArticle);
        for i in 0..n_authors {
            r.authors.push(AuthorMention::new(format!("Author {i}")));
        }
        r.funding_statement = Some("Supported by the Pharmakon Neuroscience Research Network.".into());
        r
    }

    #[test]
    fn retraction_notice_first() {
        let mut r = article("r", 200);
        r.document_type = DocumentType::RetractionNotice;
        assert_eq!(classify_record(&r, &ScreeningCriteria::default()), ScreeningClass::RetractionNotice);
    }

    #[test]
    fn oversized_author_list() {
        let c = ScreeningCriteria::default();
        assert_eq!(classify_record(&article("a", 161), &c), ScreeningClass::TooManyAuthors);
        assert_eq!(classify_record(&article("b", 63), &c), ScreeningClass::TooManyAuthors);
        assert_eq!(classify_record(&article("c", 25), &c), ScreeningClass::Included);
        assert_eq!(classify_record(&article("d", 26), &c), ScreeningClass::TooManyAuthors);
    }

    #[test]
    fn reviewer_only() {
        let c = ScreeningCriteria::default();
        let mut r = article("a", 3);
        r.funding_statement = None;
        r.reviewer_affiliations = Some("Pharmakon Neuroscience Research Network, Dhaka".into());
        assert_eq!(classify_record(&r, &c), ScreeningClass::ReviewerOnly);
        // the phrase also appears in the record itself: not reviewer-only
        r.acknowledgements = Some("We thank PHARMAKON neuroscience colleagues".into());
        assert_eq!(classify_record(&r, &c), ScreeningClass::Included);
        // unknown reviewer data never makes a record reviewer-only
        let mut u = article("u", 3);
        u.funding_statement = None;
        assert_eq!(classify_record(&u, &c), ScreeningClass::Included);
    }

    #[test]
    fn doc_type_filter() {
        let mut r = article("o", 3);
        r.document_type = DocumentType::Other;
        assert_eq!(classify_record(&r, &ScreeningCriteria::default()), ScreeningClass::DocTypeExcluded);
    }

    #[test]
    fn empty_and_identity() {
        let c = ScreeningCriteria::default();
        let (inc, rep) = screen(&[], &c);
        assert!(inc.is_empty());
        assert_eq!(rep, ScreeningReport::default());
        let records: Vec<_> = (0..5).map(|i| article(&format!("p{i}"), 3)).collect();
        let (inc, rep) = screen(&records, &c);
        assert_eq!(inc, records);
        assert_eq!(rep.included_count, 5);
        assert_eq!(rep.excluded_count(), 0);
    }

    #[test]
    fn criteria_validation() {
        let mut c = ScreeningCriteria::default();
        assert!(c.validate().is_ok());
        c.max_authors = 0;
        assert_eq!(c.validate(), Err(CriteriaError::ZeroMaxAuthors));
        c.max_authors = 1;
        c.phrase = " ".into();
        assert_eq!(c.validate(), Err(CriteriaError::EmptyPhrase));
    }
}
