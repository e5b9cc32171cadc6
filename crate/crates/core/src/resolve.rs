//! Author entity resolution.
//!
//! Every author mention is keyed by its source researcher ID, or by a
//! synthetic key derived from the folded name and first affiliation when the
//! export has none. A curated merge map groups source keys into profiles;
//! [`propose_merges`] only suggests groupings for a human to review.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::model::{AuthorMention, PublicationRecord};
use crate::text::{fold_person_text, PersonName};

/// Prefix of synthetic keys for mentions without a source researcher ID.
pub const SYNTHETIC_PREFIX: &str = "anon-";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("'{0}' is not an email address")]
pub struct NotAnEmail(pub String);

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("source id '{source_id}' is assigned to both '{first}' and '{second}'")]
    ConflictingMerge {
        source_id: String,
        first: String,
        second: String,
    },
    #[error("malformed merge map row {line}: {reason}")]
    MalformedMergeRow { line: u64, reason: String },
    #[error("malformed careers row {line}: {reason}")]
    MalformedCareerRow { line: u64, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Lowercases the address and collapses runs of `.`, `-` and `_` in the
/// local part to a single `.`, so `pre-post@x` and `pre_post@x` coincide.
pub fn email_variant_key(email: &str) -> Result<String, NotAnEmail> {
    let lower = email.trim().to_lowercase();
    let mut parts = lower.split('@');
    let (local, domain) = match (parts.next(), parts.next(), parts.next()) {
        (Some(l), Some(d), None) if !l.is_empty() && !d.is_empty() => (l, d),
        _ => return Err(NotAnEmail(email.to_string())),
    };
    let mut key = String::with_capacity(lower.len());
    let mut in_sep = false;
    for c in local.chars() {
        if matches!(c, '.' | '-' | '_') {
            if !in_sep {
                key.push('.');
            }
            in_sep = true;
        } else {
            key.push(c);
            in_sep = false;
        }
    }
    key.push('@');
    key.push_str(domain);
    Ok(key)
}

pub fn is_synthetic_key(key: &str) -> bool {
    key.starts_with(SYNTHETIC_PREFIX)
}

/// The source key a mention resolves through.
pub fn mention_key(mention: &AuthorMention) -> String {
    if let Some(id) = mention.source_researcher_id.as_deref().map(str::trim) {
        if !id.is_empty() {
            return id.to_string();
        }
    }
    let name = fold_person_text(&mention.raw_name);
    let affiliation = mention
        .affiliation_texts
        .first()
        .map(|a| fold_person_text(a))
        .unwrap_or_default();
    let digest = Sha256::digest(format!("{name}|{affiliation}").as_bytes());
    let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
    format!("{SYNTHETIC_PREFIX}{hex}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MergeProvenance {
    Curated,
    Proposed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeEntry {
    pub profile_key: String,
    pub canonical_name: String,
    pub source_ids: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeMap {
    pub entries: Vec<MergeEntry>,
    pub provenance: MergeProvenance,
}

impl MergeMap {
    pub fn empty() -> Self {
        MergeMap {
            entries: Vec::new(),
            provenance: MergeProvenance::Curated,
        }
    }

    /// source id → entry index; fails when an id sits in two entries.
    fn index(&self) -> Result<HashMap<&str, usize>, ResolveError> {
        let mut idx: HashMap<&str, usize> = HashMap::new();
        for (i, entry) in self.entries.iter().enumerate() {
            for id in &entry.source_ids {
                if let Some(&prev) = idx.get(id.as_str()) {
                    if prev != i {
                        return Err(ResolveError::ConflictingMerge {
                            source_id: id.clone(),
                            first: self.entries[prev].profile_key.clone(),
                            second: entry.profile_key.clone(),
                        });
                    }
                }
                idx.insert(id.as_str(), i);
            }
        }
        Ok(idx)
    }

    /// Reads `source_id,profile_key,canonical_name` rows; rows sharing a
    /// profile key form one entry.
    pub fn read_csv<R: Read>(source: R) -> Result<MergeMap, ResolveError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
        let headers = reader.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
        let (Some(sid), Some(pkey)) = (col("source_id"), col("profile_key")) else {
            return Err(ResolveError::MalformedMergeRow {
                line: 1,
                reason: "header must contain source_id and profile_key".into(),
            });
        };
        let cname = col("canonical_name");
        let mut by_key: BTreeMap<String, MergeEntry> = BTreeMap::new();
        let mut order = Vec::new();
        for row in reader.records() {
            let row = row?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            let source_id = row.get(sid).unwrap_or("").to_string();
            let profile_key = row.get(pkey).unwrap_or("").to_string();
            if source_id.is_empty() || profile_key.is_empty() {
                return Err(ResolveError::MalformedMergeRow {
                    line,
                    reason: "empty source_id or profile_key".into(),
                });
            }
            let name = cname.and_then(|i| row.get(i)).unwrap_or("").to_string();
            let entry = by_key.entry(profile_key.clone()).or_insert_with(|| {
                order.push(profile_key.clone());
                MergeEntry {
                    profile_key: profile_key.clone(),
                    canonical_name: String::new(),
                    source_ids: BTreeSet::new(),
                }
            });
            if entry.canonical_name.is_empty() {
                entry.canonical_name = name;
            }
            entry.source_ids.insert(source_id);
        }
        let entries = order.into_iter().filter_map(|k| by_key.remove(&k)).collect();
        let map = MergeMap {
            entries,
            provenance: MergeProvenance::Curated,
        };
        map.index()?;
        Ok(map)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ResolveError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["source_id", "profile_key", "canonical_name"])?;
        for entry in &self.entries {
            for id in &entry.source_ids {
                w.write_record([id, &entry.profile_key, &entry.canonical_name])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResearcherProfile {
    pub profile_id: String,
    pub merged_source_ids: BTreeSet<String>,
    pub canonical_name: String,
    pub has_persistent_identifier: bool,
    #[serde(default)]
    pub orcids: BTreeSet<String>,
    #[serde(default)]
    pub emails: BTreeSet<String>,
    #[serde(default)]
    pub countries: BTreeSet<String>,
    #[serde(default)]
    pub org_registry_ids: BTreeSet<String>,
    /// Distinct corpus publications this profile appears on.
    #[serde(default)]
    pub publication_ids: Vec<String>,
    /// Author-list slots attributed to this profile (counts repeats).
    #[serde(default)]
    pub mention_count: usize,
    pub pubs_by_year: BTreeMap<i32, u32>,
}

/// Lookup from source key to profile.
#[derive(Debug, Clone)]
pub struct ProfileIndex<'a> {
    profiles: &'a [ResearcherProfile],
    by_source: HashMap<&'a str, usize>,
    by_profile: HashMap<&'a str, usize>,
}

impl<'a> ProfileIndex<'a> {
    pub fn new(profiles: &'a [ResearcherProfile]) -> Self {
        let mut by_source = HashMap::new();
        let mut by_profile = HashMap::new();
        for (i, p) in profiles.iter().enumerate() {
            by_profile.insert(p.profile_id.as_str(), i);
            for id in &p.merged_source_ids {
                by_source.insert(id.as_str(), i);
            }
        }
        ProfileIndex {
            profiles,
            by_source,
            by_profile,
        }
    }

    pub fn by_source_id(&self, source_id: &str) -> Option<&'a ResearcherProfile> {
        self.by_source.get(source_id).map(|&i| &self.profiles[i])
    }

    pub fn by_profile_id(&self, profile_id: &str) -> Option<&'a ResearcherProfile> {
        self.by_profile.get(profile_id).map(|&i| &self.profiles[i])
    }

    pub fn for_mention(&self, mention: &AuthorMention) -> Option<&'a ResearcherProfile> {
        self.by_source_id(&mention_key(mention))
    }

    /// Profile id of a mention, falling back to its own source key when the
    /// mention was not part of the resolved corpus.
    pub fn profile_id_or_key(&self, mention: &AuthorMention) -> String {
        let key = mention_key(mention);
        match self.by_source.get(key.as_str()) {
            Some(&i) => self.profiles[i].profile_id.clone(),
            None => key,
        }
    }
}

#[derive(Default)]
struct SourceEvidence {
    names: BTreeMap<String, usize>,
    parsed_names: BTreeSet<PersonName>,
    email_keys: BTreeSet<String>,
    org_ids: BTreeSet<String>,
    orcids: BTreeSet<String>,
}

fn collect_evidence<'a, I>(mentions: I) -> BTreeMap<String, SourceEvidence>
where
    I: IntoIterator<Item = &'a AuthorMention>,
{
    let mut out: BTreeMap<String, SourceEvidence> = BTreeMap::new();
    for m in mentions {
        let ev = out.entry(mention_key(m)).or_default();
        *ev.names.entry(m.raw_name.trim().to_string()).or_insert(0) += 1;
        ev.parsed_names.insert(PersonName::parse(&m.raw_name));
        ev.email_keys
            .extend(m.emails.iter().filter_map(|e| email_variant_key(e).ok()));
        ev.org_ids.extend(m.org_registry_ids.iter().cloned());
        ev.orcids.extend(m.orcid.iter().cloned());
    }
    out
}

/// Most frequent spelling; ties go to the longer, then lexicographically smaller.
fn preferred_name<'a, I: IntoIterator<Item = (&'a String, &'a usize)>>(names: I) -> String {
    names
        .into_iter()
        .max_by(|(a, ca), (b, cb)| {
            ca.cmp(cb)
                .then(a.chars().count().cmp(&b.chars().count()))
                .then(b.cmp(a))
        })
        .map(|(n, _)| n.clone())
        .unwrap_or_default()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Links the roots, keeping the smaller index as representative.
    fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        lo
    }
}

/// Suggests merges between source keys that share an email variant key, or
/// share an organization registry ID and have compatible names. Groups whose
/// ORCID-style identifiers would conflict are never joined.
pub fn propose_merges(mentions: &[AuthorMention]) -> MergeMap {
    let evidence = collect_evidence(mentions);
    let keys: Vec<&String> = evidence.keys().collect();
    let evs: Vec<&SourceEvidence> = evidence.values().collect();
    let n = keys.len();
    let mut uf = UnionFind::new(n);
    let mut orcids: Vec<BTreeSet<String>> = evs.iter().map(|e| e.orcids.clone()).collect();

    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (evs[i], evs[j]);
            let shares_email = !a.email_keys.is_disjoint(&b.email_keys);
            let shares_org_and_name = !a.org_ids.is_disjoint(&b.org_ids)
                && a
                    .parsed_names
                    .iter()
                    .any(|na| b.parsed_names.iter().any(|nb| na.compatible(nb)));
            if !(shares_email || shares_org_and_name) {
                continue;
            }
            let (ri, rj) = (uf.find(i), uf.find(j));
            if ri == rj {
                continue;
            }
            let combined: BTreeSet<String> = orcids[ri].union(&orcids[rj]).cloned().collect();
            if combined.len() > 1 {
                continue;
            }
            let root = uf.union(ri, rj);
            orcids[root] = combined;
        }
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = uf.find(i);
        groups.entry(r).or_default().push(i);
    }
    let entries = groups
        .into_values()
        .filter(|members| members.len() > 1)
        .map(|members| {
            let mut names: BTreeMap<String, usize> = BTreeMap::new();
            for &m in &members {
                for (name, c) in &evs[m].names {
                    *names.entry(name.clone()).or_insert(0) += c;
                }
            }
            MergeEntry {
                profile_key: keys[members[0]].clone(),
                canonical_name: preferred_name(names.iter()),
                source_ids: members.iter().map(|&m| keys[m].clone()).collect(),
            }
        })
        .collect();
    MergeMap {
        entries,
        provenance: MergeProvenance::Proposed,
    }
}

#[derive(Default)]
struct ProfileBuilder {
    source_ids: BTreeSet<String>,
    names: BTreeMap<String, usize>,
    curated_name: Option<String>,
    orcids: BTreeSet<String>,
    emails: BTreeSet<String>,
    countries: BTreeSet<String>,
    org_ids: BTreeSet<String>,
    publications: Vec<(String, i32)>,
    mention_count: usize,
}

/// Builds one profile per curated group or unmerged source key. Profiles are
/// sorted by profile id.
pub fn resolve(
    records: &[PublicationRecord],
    curated: &MergeMap,
) -> Result<Vec<ResearcherProfile>, ResolveError> {
    let curated_index = curated.index()?;
    let observed: BTreeSet<String> = records
        .iter()
        .flat_map(|r| r.authors.iter().map(mention_key))
        .collect();
    // a curated profile key must not capture an unrelated observed source id
    for entry in &curated.entries {
        if observed.contains(&entry.profile_key) && !entry.source_ids.contains(&entry.profile_key) {
            let first = match curated_index.get(entry.profile_key.as_str()) {
                Some(&other) => curated.entries[other].profile_key.clone(),
                None => entry.profile_key.clone(),
            };
            return Err(ResolveError::ConflictingMerge {
                source_id: entry.profile_key.clone(),
                first,
                second: entry.profile_key.clone(),
            });
        }
    }

    let mut builders: BTreeMap<String, ProfileBuilder> = BTreeMap::new();
    for record in records {
        let mut seen_here = BTreeSet::new();
        for mention in &record.authors {
            let key = mention_key(mention);
            let (profile_id, curated_name) = match curated_index.get(key.as_str()) {
                Some(&i) => {
                    let e = &curated.entries[i];
                    (e.profile_key.clone(), Some(e.canonical_name.clone()))
                }
                None => (key.clone(), None),
            };
            let b = builders.entry(profile_id.clone()).or_default();
            b.source_ids.insert(key);
            if let Some(name) = curated_name.filter(|n| !n.trim().is_empty()) {
                b.curated_name = Some(name);
            }
            *b.names.entry(mention.raw_name.trim().to_string()).or_insert(0) += 1;
            b.orcids.extend(mention.orcid.iter().cloned());
            b.emails.extend(mention.emails.iter().cloned());
            b.countries.extend(mention.countries.iter().cloned());
            b.org_ids.extend(mention.org_registry_ids.iter().cloned());
            b.mention_count += 1;
            if seen_here.insert(profile_id) {
                b.publications
                    .push((record.publication_id.clone(), record.pub_year));
            }
        }
    }

    Ok(builders
        .into_iter()
        .map(|(profile_id, b)| {
            let mut pubs_by_year = BTreeMap::new();
            for (_, year) in &b.publications {
                *pubs_by_year.entry(*year).or_insert(0u32) += 1;
            }
            let has_persistent_identifier =
                !b.orcids.is_empty() || b.source_ids.iter().any(|k| !is_synthetic_key(k));
            ResearcherProfile {
                canonical_name: b.curated_name.unwrap_or_else(|| preferred_name(b.names.iter())),
                profile_id,
                merged_source_ids: b.source_ids,
                has_persistent_identifier,
                orcids: b.orcids,
                emails: b.emails,
                countries: b.countries,
                org_registry_ids: b.org_ids,
                publication_ids: b.publications.into_iter().map(|(id, _)| id).collect(),
                mention_count: b.mention_count,
                pubs_by_year,
            }
        })
        .collect())
}

/// One row of a career-history file: publications by a profile in a year.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CareerRow {
    pub profile_id: String,
    pub year: i32,
    pub count: u32,
}

pub fn read_careers_csv<R: Read>(source: R) -> Result<Vec<CareerRow>, ResolveError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let mut out = Vec::new();
    for row in reader.deserialize::<CareerRow>() {
        match row {
            Ok(r) => out.push(r),
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                return Err(ResolveError::MalformedCareerRow {
                    line,
                    reason: e.to_string(),
                });
            }
        }
    }
    Ok(out)
}

pub fn write_careers_csv<W: Write>(rows: &[CareerRow], out: W) -> Result<(), ResolveError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Folds a career history into the profiles. A career count is the author's
/// full output for that year, so it replaces the corpus count when larger.
/// Returns rows naming unknown profiles, which are skipped.
pub fn apply_careers(profiles: &mut [ResearcherProfile], careers: &[CareerRow]) -> Vec<CareerRow> {
    let positions: HashMap<String, usize> = profiles
        .iter()
        .enumerate()
        .map(|(i, p)| (p.profile_id.clone(), i))
        .collect();
    let mut unknown = Vec::new();
    for row in careers {
        match positions.get(&row.profile_id) {
            Some(&i) => {
                let slot = profiles[i].pubs_by_year.entry(row.year).or_insert(0);
                *slot = (*slot).max(row.count);
            }
            None => unknown.push(row.clone()),
        }
    }
    unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DocumentType;

    #[test]
    fn email_keys() {
        assert_eq!(
            email_variant_key("pre-post@hotmail.com").unwrap(),
            email_variant_key("pre_post@hotmail.com").unwrap()
        );
        assert_eq!(email_variant_key("a@b.org").unwrap(), "a@b.org");
        assert_eq!(
            email_variant_key("A.B@X.org").unwrap(),
            email_variant_key("a_b@x.org").unwrap()
        );
        assert_eq!(email_variant_key("a.-_b@x.org").unwrap(), "a.b@x.org");
        assert!(email_variant_key("no-at-sign").is_err());
        assert!(email_variant_key("a@b@c").is_err());
        assert!(email_variant_key("@b.org").is_err());
    }

    fn mention(name: &str, id: &str) -> AuthorMention {
        AuthorMention::new(name).with_id(id)
    }

    #[test]
    fn email_variants_proposed() {
        let mut a = mention("Md. Rahman", "ur.1");
        a.emails.push("pre-post@hotmail.com".into());
        let mut b = mention("M. Rahman", "ur.2");
        b.emails.push("pre_post@hotmail.com".into());
        let proposals = propose_merges(&[a, b]);
        assert_eq!(proposals.provenance, MergeProvenance::Proposed);
        assert_eq!(proposals.entries.len(), 1);
        assert_eq!(
            proposals.entries[0].source_ids,
            BTreeSet::from(["ur.1".to_string(), "ur.2".to_string()])
        );
    }

    #[test]
    fn no_evidence_no_proposal() {
        let mut a = mention("Ann Lee", "ur.1");
        a.emails.push("ann@x.org".into());
        a.org_registry_ids.push("grid.1".into());
        let mut b = mention("Bo Chan", "ur.2");
        b.emails.push("bo@y.org".into());
        b.org_registry_ids.push("grid.2".into());
        assert!(propose_merges(&[a, b]).entries.is_empty());
    }

    #[test]
    fn initial_plus_org_proposed() {
        let mut a = mention("J. Smith", "ur.1");
        a.org_registry_ids.push("grid.A".into());
        let mut b = mention("John Smith", "ur.2");
        b.org_registry_ids.push("grid.A".into());
        let proposals = propose_merges(&[a.clone(), b.clone()]);
        assert_eq!(proposals.entries.len(), 1);
        assert_eq!(proposals.entries[0].canonical_name, "John Smith");
        // a name match without a shared organization is not enough
        b.org_registry_ids = vec!["grid.B".into()];
        assert!(propose_merges(&[a, b]).entries.is_empty());
    }

    #[test]
    fn conflicting_orcids_block_merge() {
        let mut a = mention("J. Smith", "ur.1");
        a.org_registry_ids.push("grid.A".into());
        a.orcid = Some("0000-0001".into());
        let mut b = mention("John Smith", "ur.2");
        b.org_registry_ids.push("grid.A".into());
        b.orcid = Some("0000-0002".into());
        assert!(propose_merges(&[a, b]).entries.is_empty());
    }

    fn paper(id: &str, authors: Vec<AuthorMention>) -> PublicationRecord {
        let mut r = PublicationRecord::new(id, 2020, DocumentType::ResearchArticle);
        r.authors = authors;
        r
    }

    #[test]
    fn three_authors_three_profiles() {
        let r = paper("p1", vec![mention("A A", "1"), mention("B B", "2"), mention("C C", "3")]);
        let profiles = resolve(&[r], &MergeMap::empty()).unwrap();
        assert_eq!(profiles.len(), 3);
        for p in &profiles {
            assert_eq!(p.publication_ids, vec!["p1".to_string()]);
            assert_eq!(p.pubs_by_year, BTreeMap::from([(2020, 1)]));
        }
    }

    #[test]
    fn curated_merge_and_synthetic_ids() {
        let anon = AuthorMention::new("No Id").with_affiliation("Hotel Dhaka");
        let records = vec![
            paper("p1", vec![mention("J. Smith", "ur.1"), anon.clone()]),
            paper("p2", vec![mention("John Smith", "ur.2"), anon]),
        ];
        let curated = MergeMap {
            entries: vec![MergeEntry {
                profile_key: "smith".into(),
                canonical_name: "John Smith".into(),
                source_ids: BTreeSet::from(["ur.1".into(), "ur.2".into()]),
            }],
            provenance: MergeProvenance::Curated,
        };
        let profiles = resolve(&records, &curated).unwrap();
        assert_eq!(profiles.len(), 2);
        let anon_profile = profiles.iter().find(|p| !p.has_persistent_identifier).unwrap();
        assert!(anon_profile.profile_id.starts_with(SYNTHETIC_PREFIX));
        assert_eq!(anon_profile.publication_ids.len(), 2);
        let smith = profiles.iter().find(|p| p.profile_id == "smith").unwrap();
        assert_eq!(smith.merged_source_ids.len(), 2);
        assert_eq!(smith.pubs_by_year, BTreeMap::from([(2020, 2)]));
    }

    #[test]
    fn conflicting_curated_map() {
        let curated = MergeMap {
            entries: vec![
                MergeEntry {
                    profile_key: "a".into(),
                    canonical_name: String::new(),
                    source_ids: BTreeSet::from(["ur.1".into(), "ur.2".into()]),
                },
                MergeEntry {
                    profile_key: "b".into(),
                    canonical_name: String::new(),
                    source_ids: BTreeSet::from(["ur.2".into(), "ur.3".into()]),
                },
            ],
            provenance: MergeProvenance::Curated,
        };
        assert!(matches!(
            resolve(&[], &curated),
            Err(ResolveError::ConflictingMerge { .. })
        ));
    }

    #[test]
    fn merges_csv_round_trip() {
        let text = "source_id,profile_key,canonical_name\nur.1,P1,Jane Roe\nur.2,P1,Jane Roe\nur.3,P2,Bo Chan\n";
        let map = MergeMap::read_csv(text.as_bytes()).unwrap();
        assert_eq!(map.entries.len(), 2);
        let mut out = Vec::new();
        map.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn careers_take_the_larger_count() {
        let r = paper("p1", vec![mention("A A", "1")]);
        let mut profiles = resolve(&[r], &MergeMap::empty()).unwrap();
        let unknown = apply_careers(
            &mut profiles,
            &[
                CareerRow { profile_id: "1".into(), year: 2016, count: 3 },
                CareerRow { profile_id: "1".into(), year: 2020, count: 4 },
                CareerRow { profile_id: "zz".into(), year: 2020, count: 4 },
            ],
        );
        assert_eq!(unknown.len(), 1);
        assert_eq!(profiles[0].pubs_by_year, BTreeMap::from([(2016, 3), (2020, 4)]));
    }
}
