//! Domain types shared by every stage of the pipeline.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::country;
use crate::money::Money;

pub const MIN_YEAR: i32 = 1900;
pub const MAX_YEAR: i32 = 2100;

/// Bibliographic document type as exported by the metadata source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DocumentType {
    ResearchArticle,
    ReviewArticle,
    Editorial,
    ResearchChapter,
    RetractionNotice,
    Other,
}

impl DocumentType {
    pub const ALL: [DocumentType; 6] = [
        DocumentType::ResearchArticle,
        DocumentType::ReviewArticle,
        DocumentType::Editorial,
        DocumentType::ResearchChapter,
        DocumentType::RetractionNotice,
        DocumentType::Other,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DocumentType::ResearchArticle => "ResearchArticle",
            DocumentType::ReviewArticle => "ReviewArticle",
            DocumentType::Editorial => "Editorial",
            DocumentType::ResearchChapter => "ResearchChapter",
            DocumentType::RetractionNotice => "RetractionNotice",
            DocumentType::Other => "Other",
        }
    }

    /// Research and review articles, the unit the publisher rollup counts.
    pub fn is_article(&self) -> bool {
        matches!(self, DocumentType::ResearchArticle | DocumentType::ReviewArticle)
    }
}

impl fmt::Display for DocumentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DocumentType {
    type Err = String;

    /// Accepts the canonical names as well as the spaced/underscored spellings
    /// found in exports ("Research Article", "review_article", "RESEARCH_CHAPTER").
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        let ty = match folded.as_str() {
            "researcharticle" | "article" => DocumentType::ResearchArticle,
            "reviewarticle" | "review" => DocumentType::ReviewArticle,
            "editorial" => DocumentType::Editorial,
            "researchchapter" | "chapter" | "bookchapter" => DocumentType::ResearchChapter,
            "retractionnotice" | "retraction" => DocumentType::RetractionNotice,
            "other" => DocumentType::Other,
            "" => return Err("empty document type".to_string()),
            _ => return Err(format!("unknown document type '{s}'")),
        };
        Ok(ty)
    }
}

/// One author slot on a publication, as printed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AuthorMention {
    pub raw_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_researcher_id: Option<String>,
    /// ORCID-style persistent identifier, when the export carries one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orcid: Option<String>,
    #[serde(default)]
    pub emails: Vec<String>,
    #[serde(default)]
    pub affiliation_texts: Vec<String>,
    #[serde(default)]
    pub org_registry_ids: Vec<String>,
    #[serde(default)]
    pub countries: Vec<String>,
}

impl AuthorMention {
    pub fn new(raw_name: impl Into<String>) -> Self {
        AuthorMention {
            raw_name: raw_name.into(),
            ..Default::default()
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.source_researcher_id = Some(id.into());
        self
    }

    pub fn with_affiliation(mut self, text: impl Into<String>) -> Self {
        self.affiliation_texts.push(text.into());
        self
    }
}

/// A funder as linked by the metadata source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunderMention {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub registry_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub publication_id: String,
    #[serde(default)]
    pub doi: Option<String>,
    #[serde(default)]
    pub pmid: Option<String>,
    #[serde(default)]
    pub pmcid: Option<String>,
    pub title: String,
    #[serde(default)]
    pub abstract_text: Option<String>,
    #[serde(default)]
    pub acknowledgements: Option<String>,
    #[serde(default)]
    pub funding_statement: Option<String>,
    pub publisher: String,
    pub source_title: String,
    #[serde(default)]
    pub issn: Option<String>,
    pub pub_year: i32,
    #[serde(default)]
    pub online_year: Option<i32>,
    pub document_type: DocumentType,
    #[serde(default)]
    pub authors: Vec<AuthorMention>,
    #[serde(default)]
    pub corresponding_author_ids: BTreeSet<String>,
    #[serde(default)]
    pub funders: Vec<FunderMention>,
    #[serde(default)]
    pub grant_ids: Vec<String>,
    /// Signed so that corrupt exports survive parsing and surface as
    /// validation issues instead of parse failures.
    pub times_cited: i64,
    #[serde(default)]
    pub fields_of_research: Vec<String>,
    /// `None` means the reviewer affiliation is unknown, not absent.
    #[serde(default)]
    pub reviewer_affiliations: Option<String>,
}

impl PublicationRecord {
    /// Minimal valid record, handy for tests and generators.
    pub fn new(publication_id: impl Into<String>, pub_year: i32, document_type: DocumentType) -> Self {
        PublicationRecord {
            publication_id: publication_id.into(),
            doi: None,
            pmid: None,
            pmcid: None,
            title: String::new(),
            abstract_text: None,
            acknowledgements: None,
            funding_statement: None,
            publisher: String::new(),
            source_title: String::new(),
            issn: None,
            pub_year,
            online_year: None,
            document_type,
            authors: Vec::new(),
            corresponding_author_ids: BTreeSet::new(),
            funders: Vec::new(),
            grant_ids: Vec::new(),
            times_cited: 0,
            fields_of_research: Vec::new(),
            reviewer_affiliations: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OrgType {
    ResearchInstitution,
    TeachingInstitution,
    Company,
    NonAcademic,
    Unregistered,
}

impl FromStr for OrgType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        match folded.as_str() {
            "researchinstitution" | "research" | "facility" | "government" | "funder" => {
                Ok(OrgType::ResearchInstitution)
            }
            "teachinginstitution" | "education" | "university" => Ok(OrgType::TeachingInstitution),
            "company" => Ok(OrgType::Company),
            "nonacademic" | "other" => Ok(OrgType::NonAcademic),
            "unregistered" | "" => Ok(OrgType::Unregistered),
            _ => Err(format!("unknown organization type '{s}'")),
        }
    }
}

impl fmt::Display for OrgType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrgType::ResearchInstitution => "ResearchInstitution",
            OrgType::TeachingInstitution => "TeachingInstitution",
            OrgType::Company => "Company",
            OrgType::NonAcademic => "NonAcademic",
            OrgType::Unregistered => "Unregistered",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Organization {
    pub registry_id: Option<String>,
    pub name: String,
    pub org_type: OrgType,
    pub country: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrantRecord {
    pub grant_id: String,
    pub funder_name: String,
    pub funder_country: String,
    pub start_year: i32,
    /// Missing amounts still mark the holders as funded but add nothing to totals.
    pub amount: Option<Money>,
    pub currency: String,
    pub researcher_ids: BTreeSet<String>,
}

/// An invariant violation found by [`validate_record`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValidationIssue {
    EmptyPublicationId,
    YearOutOfRange { year: i32 },
    OnlineYearOutOfRange { year: i32 },
    NegativeCitations { times_cited: i64 },
    NoAuthors,
    EmptyAuthorName { index: usize },
    InvalidCountryCode { index: usize, code: String },
    DuplicatePublicationId { publication_id: String },
}

/// Every invariant violation of a single record; empty means valid.
pub fn validate_record(record: &PublicationRecord) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    if record.publication_id.trim().is_empty() {
        issues.push(ValidationIssue::EmptyPublicationId);
    }
    if !(MIN_YEAR..=MAX_YEAR).contains(&record.pub_year) {
        issues.push(ValidationIssue::YearOutOfRange { year: record.pub_year });
    }
    if let Some(year) = record.online_year {
        if !(MIN_YEAR..=MAX_YEAR).contains(&year) {
            issues.push(ValidationIssue::OnlineYearOutOfRange { year });
        }
    }
    if record.times_cited < 0 {
        issues.push(ValidationIssue::NegativeCitations {
            times_cited: record.times_cited,
        });
    }
    if record.authors.is_empty() && record.document_type != DocumentType::RetractionNotice {
        issues.push(ValidationIssue::NoAuthors);
    }
    for (index, author) in record.authors.iter().enumerate() {
        if author.raw_name.trim().is_empty() {
            issues.push(ValidationIssue::EmptyAuthorName { index });
        }
        for code in &author.countries {
            if !country::is_valid_alpha2(code) {
                issues.push(ValidationIssue::InvalidCountryCode {
                    index,
                    code: code.clone(),
                });
            }
        }
    }
    issues
}

/// Record-level issues plus corpus-level uniqueness of publication ids.
pub fn validate_corpus(records: &[PublicationRecord]) -> Vec<(usize, ValidationIssue)> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (i, record) in records.iter().enumerate() {
        out.extend(validate_record(record).into_iter().map(|issue| (i, issue)));
        if !seen.insert(record.publication_id.as_str()) {
            out.push((
                i,
                ValidationIssue::DuplicatePublicationId {
                    publication_id: record.publication_id.clone(),
                },
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn valid() -> PublicationRecord {
        let mut r = PublicationRecord::new("pub.1", 2020, DocumentType::ResearchArticle);
        r.title = "A title".into();
        r.publisher = "Elsevier".into();
        r.source_title = "Life Sciences".into();
        r.times_cited = 12;
        let mut a = AuthorMention::new("Jane Roe").with_id("ur.1");
        a.countries.push("BD".into());
        r.authors.push(a);
        r
    }

    #[test]
    fn valid_record_has_no_issues() {
        assert!(validate_record(&valid()).is_empty());
    }

    #[test]
    fn negative_citations_flagged() {
        let mut r = valid();
        r.times_cited = -1;
        assert_eq!(
            validate_record(&r),
            vec![ValidationIssue::NegativeCitations { times_cited: -1 }]
        );
    }

    #[test]
    fn year_out_of_range_flagged() {
        let mut r = valid();
        r.pub_year = 2150;
        assert_eq!(validate_record(&r), vec![ValidationIssue::YearOutOfRange { year: 2150 }]);
    }

    #[test]
    fn retraction_notice_may_lack_authors() {
        let mut r = valid();
        r.authors.clear();
        assert_eq!(validate_record(&r), vec![ValidationIssue::NoAuthors]);
        r.document_type = DocumentType::RetractionNotice;
        assert!(validate_record(&r).is_empty());
    }

    #[test]
    fn bad_country_code() {
        let mut r = valid();
        r.authors[0].countries.push("XX".into());
        assert_eq!(
            validate_record(&r),
            vec![ValidationIssue::InvalidCountryCode { index: 0, code: "XX".into() }]
        );
    }

    #[test]
    fn duplicate_ids_detected_at_corpus_level() {
        let issues = validate_corpus(&[valid(), valid()]);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].0, 1);
    }

    #[test]
    fn document_type_spellings() {
        assert_eq!("Research Article".parse::<DocumentType>(), Ok(DocumentType::ResearchArticle));
        assert_eq!("review_article".parse::<DocumentType>(), Ok(DocumentType::ReviewArticle));
        assert_eq!("Retraction Notice".parse::<DocumentType>(), Ok(DocumentType::RetractionNotice));
        assert!("Poem".parse::<DocumentType>().is_err());
        for ty in DocumentType::ALL {
            assert_eq!(ty.as_str().parse::<DocumentType>(), Ok(ty));
        }
    }
}
