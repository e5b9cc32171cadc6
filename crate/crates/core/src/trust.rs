//! Transparency trust markers: funders missing from an organization
//! registry, near-duplicate author emails and missing persistent identifiers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{OrgType, PublicationRecord};
use crate::par::{self, Execution};
use crate::resolve::{email_variant_key, ProfileIndex, ResearcherProfile};
use crate::text::fold_org_name;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("duplicate registry id '{0}'")]
    DuplicateId(String),
    #[error("registry row {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub registry_id: String,
    pub canonical_name: String,
    pub aliases: Vec<String>,
    pub country: String,
    pub org_type: OrgType,
}

/// Read-only organization registry with a folded-name lookup.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
    by_name: HashMap<String, usize>,
    by_id: HashMap<String, usize>,
}

impl Registry {
    pub fn new(entries: Vec<RegistryEntry>) -> Result<Registry, RegistryError> {
        let mut by_name = HashMap::new();
        let mut by_id = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            if e.canonical_name.trim().is_empty() {
                return Err(RegistryError::MalformedRow {
                    line: i as u64 + 2,
                    reason: "empty canonical_name".into(),
                });
            }
            if by_id.insert(e.registry_id.clone(), i).is_some() {
                return Err(RegistryError::DuplicateId(e.registry_id.clone()));
            }
            for name in std::iter::once(&e.canonical_name).chain(e.aliases.iter()) {
                let folded = fold_org_name(name);
                if !folded.is_empty() {
                    by_name.entry(folded).or_insert(i);
                }
            }
        }
        Ok(Registry {
            entries,
            by_name,
            by_id,
        })
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn lookup_name(&self, name: &str) -> Option<&RegistryEntry> {
        self.by_name.get(&fold_org_name(name)).map(|&i| &self.entries[i])
    }

    pub fn lookup_id(&self, id: &str) -> Option<&RegistryEntry> {
        self.by_id.get(id).map(|&i| &self.entries[i])
    }

    /// `registry_id,canonical_name,aliases,country,org_type` with `|`-separated aliases.
    pub fn read_csv<R: Read>(source: R) -> Result<Registry, RegistryError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
        let headers = reader.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
        let (Some(id), Some(name)) = (col("registry_id"), col("canonical_name")) else {
            return Err(RegistryError::MalformedRow {
                line: 1,
                reason: "header must contain registry_id and canonical_name".into(),
            });
        };
        let (aliases, country, org_type) = (col("aliases"), col("country"), col("org_type"));
        let mut entries = Vec::new();
        for row in reader.records() {
            let row = row?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            let get = |i: Option<usize>| i.and_then(|i| row.get(i)).unwrap_or("").to_string();
            let org_type = get(org_type)
                .parse()
                .map_err(|reason| RegistryError::MalformedRow { line, reason })?;
            entries.push(RegistryEntry {
                registry_id: get(Some(id)),
                canonical_name: get(Some(name)),
                aliases: get(aliases)
                    .split('|')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect(),
                country: get(country),
                org_type,
            });
        }
        Registry::new(entries)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), RegistryError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["registry_id", "canonical_name", "aliases", "country", "org_type"])?;
        for e in &self.entries {
            w.write_record([
                e.registry_id.as_str(),
                e.canonical_name.as_str(),
                e.aliases.join("|").as_str(),
                e.country.as_str(),
                e.org_type.to_string().as_str(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunderCandidate {
    pub name: String,
    pub location: Option<String>,
}

const DEFAULT_CUES: &[&str] = &[
    "concede the support by",
    "supported by",
    "funded by",
    "grant from",
    "support from",
    "funding from",
];

const CONNECTORS: &[&str] = &[
    "of", "for", "and", "the", "de", "da", "do", "des", "du", "la", "le", "para", "a", "e", "di",
    "del", "y", "in", "on", "und", "&",
];

const ORG_WORDS: &[&str] = &[
    "foundation", "fund", "fundação", "fundacao", "fundación", "network", "council", "agency",
    "agence", "university", "universidade", "università", "universidad", "université", "institute",
    "institut", "instituto", "ministry", "programme", "program", "research", "science", "sciences",
    "academy", "society", "trust", "centre", "center", "commission", "department", "association",
    "office", "bank", "organization", "organisation", "recherche", "ciência", "ciencia", "tecnologia",
    "school", "college", "hospital", "government", "corporation", "company", "inc", "ltd",
    "national", "federal", "authority", "initiative", "board", "nationale",
];

/// Pulls funder names out of free-text funding statements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunderExtractor {
    pub cues: Vec<String>,
}

impl Default for FunderExtractor {
    fn default() -> Self {
        FunderExtractor {
            cues: DEFAULT_CUES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

fn is_capitalized(word: &str) -> bool {
    word.chars().next().is_some_and(char::is_uppercase)
}

fn is_connector(word: &str) -> bool {
    CONNECTORS.contains(&word.to_lowercase().as_str())
}

fn is_org_like(phrase: &str) -> bool {
    let words: Vec<&str> = phrase.split_whitespace().collect();
    words.len() >= 4
        || words.iter().any(|w| {
            let folded: String = w
                .chars()
                .filter(|c| c.is_alphanumeric())
                .flat_map(char::to_lowercase)
                .collect();
            ORG_WORDS.contains(&folded.as_str())
        })
}

/// Longest run of capitalized words (connectors allowed inside) at the start
/// of `segment`, after a leading article.
fn capitalized_prefix(segment: &str) -> Option<String> {
    let mut words: Vec<&str> = segment.split_whitespace().collect();
    while words.first().is_some_and(|w| w.eq_ignore_ascii_case("the") || w.eq_ignore_ascii_case("and")) {
        words.remove(0);
    }
    if !words.first().is_some_and(|w| is_capitalized(w)) {
        return None;
    }
    let mut taken = Vec::new();
    for w in words {
        let w = w.trim_matches(|c: char| c == '"' || c == '\'' || c == '’');
        if w.chars().any(|c| c.is_ascii_digit()) {
            break;
        }
        if is_capitalized(w) || is_connector(w) {
            taken.push(w);
        } else {
            break;
        }
    }
    while taken.last().is_some_and(|w| is_connector(w)) {
        taken.pop();
    }
    (!taken.is_empty()).then(|| taken.join(" "))
}

/// Byte offset where the clause starting at `from` ends.
fn clause_end(text: &str, from: usize) -> usize {
    let bytes = text.as_bytes();
    let mut i = from;
    while i < bytes.len() {
        match bytes[i] {
            b';' | b'(' | b':' | b'\n' => return i,
            b'.' => {
                let next_is_space = bytes.get(i + 1).is_none_or(|b| b.is_ascii_whitespace());
                // "U.S." and initials do not end a clause
                let after_initial = i >= 1
                    && bytes[i - 1].is_ascii_uppercase()
                    && (i < 2 || !bytes[i - 2].is_ascii_alphabetic());
                if next_is_space && !after_initial {
                    return i;
                }
            }
            _ => {}
        }
        i += 1;
    }
    bytes.len()
}

impl FunderExtractor {
    pub fn extract(&self, text: &str) -> Vec<FunderCandidate> {
        let lower = text.to_ascii_lowercase();
        let mut hits: Vec<(usize, usize)> = Vec::new();
        for cue in &self.cues {
            let cue = cue.to_ascii_lowercase();
            if cue.is_empty() {
                continue;
            }
            let mut start = 0;
            while let Some(pos) = lower[start..].find(&cue) {
                let at = start + pos;
                let boundary_before = at == 0 || !lower.as_bytes()[at - 1].is_ascii_alphanumeric();
                if boundary_before {
                    hits.push((at, at + cue.len()));
                }
                start = at + cue.len();
            }
        }
        // earliest first, longest first at the same position; drop overlaps
        hits.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let mut cues: Vec<(usize, usize)> = Vec::new();
        for h in hits {
            if cues.last().is_none_or(|last| h.0 >= last.1) {
                cues.push(h);
            }
        }

        let mut out: Vec<FunderCandidate> = Vec::new();
        for (k, &(_, cue_end)) in cues.iter().enumerate() {
            let mut end = clause_end(text, cue_end);
            if let Some(next) = cues.get(k + 1) {
                end = end.min(next.0);
            }
            let clause = &text[cue_end..end];
            let mut clause_candidates: Vec<FunderCandidate> = Vec::new();
            for segment in clause.split(',') {
                for part in split_conjoined(segment) {
                    let Some(phrase) = capitalized_prefix(&part) else {
                        continue;
                    };
                    let continues_previous = !clause_candidates.is_empty() && !is_org_like(&phrase);
                    if continues_previous {
                        let last = clause_candidates.last_mut().expect("non-empty");
                        last.location = Some(match last.location.take() {
                            Some(loc) => format!("{loc}, {phrase}"),
                            None => phrase,
                        });
                    } else {
                        clause_candidates.push(FunderCandidate {
                            name: phrase,
                            location: None,
                        });
                    }
                }
            }
            out.extend(clause_candidates);
        }
        out
    }
}

/// Splits "A and the B" when both sides read as organization names.
fn split_conjoined(segment: &str) -> Vec<String> {
    let words: Vec<&str> = segment.split_whitespace().collect();
    let mut parts = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    let mut i = 0;
    while i < words.len() {
        if words[i].eq_ignore_ascii_case("and") && !current.is_empty() {
            let left = current.join(" ");
            let right_end = words[i + 1..]
                .iter()
                .position(|w| w.eq_ignore_ascii_case("and"))
                .map(|p| i + 1 + p)
                .unwrap_or(words.len());
            let right = words[i + 1..right_end].join(" ");
            if is_org_like(&left) && is_org_like(&right) {
                parts.push(left);
                current.clear();
                i += 1;
                continue;
            }
        }
        current.push(words[i]);
        i += 1;
    }
    if !current.is_empty() {
        parts.push(current.join(" "));
    }
    parts
}

pub fn extract_funder_mentions(funding_text: &str) -> Vec<FunderCandidate> {
    FunderExtractor::default().extract(funding_text)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunderVerification {
    /// (candidate name, registry id)
    pub matched: Vec<(String, String)>,
    pub unmatched: Vec<String>,
}

/// A candidate matches when its folded form equals a folded canonical name or alias.
pub fn verify_funders<S: AsRef<str>>(candidates: &[S], registry: &Registry) -> FunderVerification {
    let mut out = FunderVerification::default();
    for c in candidates {
        let name = c.as_ref().trim();
        match registry.lookup_name(name) {
            Some(entry) => out.matched.push((name.to_string(), entry.registry_id.clone())),
            None => out.unmatched.push(name.to_string()),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Severity {
    None,
    Low,
    High,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmailAnomaly {
    pub profile_id: String,
    pub variant_key: String,
    pub emails: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrustMarkerReport {
    pub publication_id: String,
    pub unmatched_funders: Vec<String>,
    pub matched_funders: Vec<(String, String)>,
    pub email_anomalies: Vec<EmailAnomaly>,
    pub missing_identifier_profiles: Vec<String>,
    pub severity: Severity,
}

/// Funder names for a record: extracted from the funding statement plus the
/// linked funder list, deduplicated on the folded name.
fn funder_candidates(record: &PublicationRecord, extractor: &FunderExtractor) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let extracted = record
        .funding_statement
        .as_deref()
        .map(|t| extractor.extract(t))
        .unwrap_or_default();
    for name in extracted
        .into_iter()
        .map(|c| c.name)
        .chain(record.funders.iter().map(|f| f.name.clone()))
    {
        if seen.insert(fold_org_name(&name)) {
            out.push(name);
        }
    }
    out
}

pub fn publication_trust_report(
    record: &PublicationRecord,
    registry: &Registry,
    profiles: &ProfileIndex<'_>,
    extractor: &FunderExtractor,
) -> TrustMarkerReport {
    let candidates = funder_candidates(record, extractor);
    let mut verification = FunderVerification::default();
    for name in candidates {
        let linked = record
            .funders
            .iter()
            .filter(|f| fold_org_name(&f.name) == fold_org_name(&name))
            .find_map(|f| f.registry_id.as_deref().and_then(|id| registry.lookup_id(id)));
        match linked.or_else(|| registry.lookup_name(&name)) {
            Some(entry) => verification.matched.push((name, entry.registry_id.clone())),
            None => verification.unmatched.push(name),
        }
    }

    let mut email_anomalies = Vec::new();
    let mut missing = BTreeSet::new();
    for mention in &record.authors {
        let profile_id = profiles.profile_id_or_key(mention);
        let mut by_key: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
        for e in &mention.emails {
            if let Ok(key) = email_variant_key(e) {
                by_key.entry(key).or_default().insert(e.trim());
            }
        }
        for (variant_key, raw) in by_key {
            if raw.len() >= 2 {
                email_anomalies.push(EmailAnomaly {
                    profile_id: profile_id.clone(),
                    variant_key,
                    emails: raw.into_iter().map(str::to_string).collect(),
                });
            }
        }
        let identified = match profiles.for_mention(mention) {
            Some(p) => p.has_persistent_identifier,
            None => {
                mention.orcid.is_some()
                    || mention
                        .source_researcher_id
                        .as_deref()
                        .is_some_and(|s| !s.trim().is_empty())
            }
        };
        if !identified {
            missing.insert(profile_id);
        }
    }

    let severity = if !verification.unmatched.is_empty() || !email_anomalies.is_empty() {
        Severity::High
    } else if !missing.is_empty() {
        Severity::Low
    } else {
        Severity::None
    };
    TrustMarkerReport {
        publication_id: record.publication_id.clone(),
        unmatched_funders: verification.unmatched,
        matched_funders: verification.matched,
        email_anomalies,
        missing_identifier_profiles: missing.into_iter().collect(),
        severity,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusTrustSummary {
    pub publication_count: usize,
    pub missing_identifier_author_count: usize,
    /// Unmatched funder name → number of publications naming it.
    pub unmatched_funder_names: BTreeMap<String, usize>,
    pub high_severity_publication_count: usize,
    pub low_severity_publication_count: usize,
    pub email_anomaly_count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrustAnalysis {
    pub summary: CorpusTrustSummary,
    pub publications: Vec<TrustMarkerReport>,
}

pub fn corpus_trust_summary(
    records: &[PublicationRecord],
    profiles: &[ResearcherProfile],
    registry: &Registry,
) -> CorpusTrustSummary {
    analyze_trust(records, profiles, registry, &FunderExtractor::default(), Execution::default()).summary
}

pub fn analyze_trust(
    records: &[PublicationRecord],
    profiles: &[ResearcherProfile],
    registry: &Registry,
    extractor: &FunderExtractor,
    exec: Execution,
) -> TrustAnalysis {
    let index = ProfileIndex::new(profiles);
    let reports = par::map_slice(exec, records, |r| {
        publication_trust_report(r, registry, &index, extractor)
    });

    let mut summary = CorpusTrustSummary {
        publication_count: records.len(),
        ..Default::default()
    };
    let mut display: BTreeMap<String, String> = BTreeMap::new();
    let mut missing = BTreeSet::new();
    for report in &reports {
        match report.severity {
            Severity::High => summary.high_severity_publication_count += 1,
            Severity::Low => summary.low_severity_publication_count += 1,
            Severity::None => {}
        }
        summary.email_anomaly_count += report.email_anomalies.len();
        missing.extend(report.missing_identifier_profiles.iter().cloned());
        let mut counted = BTreeSet::new();
        for name in &report.unmatched_funders {
            let folded = fold_org_name(name);
            if counted.insert(folded.clone()) {
                let shown = display.entry(folded).or_insert_with(|| name.clone()).clone();
                *summary.unmatched_funder_names.entry(shown).or_insert(0) += 1;
            }
        }
    }
    summary.missing_identifier_author_count = missing.len();
    TrustAnalysis {
        summary,
        publications: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AuthorMention, DocumentType};

    const ACKNOWLEDGEMENT: &str =
        "The authors concede the support by the Pharmakon Neuroscience Research Network, Dhaka, Bangladesh.";

    fn registry() -> Registry {
        Registry::new(vec![
            RegistryEntry {
                registry_id: "grid.419696.5".into(),
                canonical_name: "National Natural Science Foundation of China".into(),
                aliases: vec!["NSFC".into()],
                country: "CN".into(),
                org_type: OrgType::ResearchInstitution,
            },
            RegistryEntry {
                registry_id: "grid.hrzz".into(),
                canonical_name: "Croatian Science Foundation".into(),
                aliases: vec![],
                country: "HR".into(),
                org_type: OrgType::ResearchInstitution,
            },
        ])
        .unwrap()
    }

    #[test]
    fn figure_one_statement() {
        let c = extract_funder_mentions(ACKNOWLEDGEMENT);
        assert_eq!(
            c,
            vec![FunderCandidate {
                name: "Pharmakon Neuroscience Research Network".into(),
                location: Some("Dhaka, Bangladesh".into()),
            }]
        );
    }

    #[test]
    fn empty_text() {
        assert!(extract_funder_mentions("").is_empty());
    }

    #[test]
    fn two_funders_joined_by_and() {
        let c = extract_funder_mentions(
            "This work was funded by the National Natural Science Foundation of China and the Croatian Science Foundation",
        );
        let names: Vec<_> = c.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec!["National Natural Science Foundation of China", "Croatian Science Foundation"]);
    }

    #[test]
    fn and_inside_a_name_is_kept() {
        let c = extract_funder_mentions("Supported by the Ministry of Science and Technology (grant 123).");
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].name, "Ministry of Science and Technology");
    }

    #[test]
    fn multiple_cues() {
        let c = extract_funder_mentions(
            "Supported by Science Foundation Ireland. J.D. received a grant from Fundação para a Ciência e Tecnologia.",
        );
        let names: Vec<_> = c.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec!["Science Foundation Ireland", "Fundação para a Ciência e Tecnologia"]);
    }

    #[test]
    fn verification() {
        let reg = registry();
        let v = verify_funders(&["Pharmakon Neuroscience Research Network"], &reg);
        assert_eq!(v.unmatched, vec!["Pharmakon Neuroscience Research Network".to_string()]);
        let v = verify_funders(&["National Natural Science Foundation of China"], &reg);
        assert_eq!(v.matched[0].1, "grid.419696.5");
        let v = verify_funders(&["NSFC"], &reg);
        assert_eq!(v.matched[0].1, "grid.419696.5");
        let v = verify_funders(&["  the croatian science FOUNDATION "], &reg);
        assert_eq!(v.matched.len(), 1);
    }

    #[test]
    fn duplicate_registry_id() {
        let e = registry().entries()[0].clone();
        assert!(matches!(Registry::new(vec![e.clone(), e]), Err(RegistryError::DuplicateId(_))));
    }

    fn record(statement: &str, authors: Vec<AuthorMention>) -> PublicationRecord {
        let mut r = PublicationRecord::new("p", 2020, DocumentType::ResearchArticle);
        r.funding_statement = Some(statement.into());
        r.authors = authors;
        r
    }

    #[test]
    fn severities() {
        let reg = registry();
        let ex = FunderExtractor::default();
        let profiles = crate::resolve::resolve(&[], &crate::resolve::MergeMap::empty()).unwrap();
        let index = ProfileIndex::new(&profiles);
        let named = AuthorMention::new("A B").with_id("ur.1");

        let r = record(ACKNOWLEDGEMENT, vec![named.clone()]);
        assert_eq!(publication_trust_report(&r, &reg, &index, &ex).severity, Severity::High);

        let clean = record("Funded by the Croatian Science Foundation.", vec![named.clone()]);
        let rep = publication_trust_report(&clean, &reg, &index, &ex);
        assert_eq!(rep.severity, Severity::None);
        assert_eq!(rep.matched_funders.len(), 1);

        let anon = record("Funded by the Croatian Science Foundation.", vec![named.clone(), AuthorMention::new("No Id")]);
        assert_eq!(publication_trust_report(&anon, &reg, &index, &ex).severity, Severity::Low);

        let mut dup = named;
        dup.emails = vec!["pre-post@hotmail.com".into(), "pre_post@hotmail.com".into()];
        let emails = record("Funded by the Croatian Science Foundation.", vec![dup]);
        let rep = publication_trust_report(&emails, &reg, &index, &ex);
        assert_eq!(rep.severity, Severity::High);
        assert_eq!(rep.email_anomalies.len(), 1);
    }

    #[test]
    fn empty_summary() {
        assert_eq!(corpus_trust_summary(&[], &[], &registry()), CorpusTrustSummary::default());
    }
}
