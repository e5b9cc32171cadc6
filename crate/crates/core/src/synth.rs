//! Seeded synthetic corpora with planted ground truth: temporal archetypes,
//! split identities, screening decoys, an unregistered funder and a grant
//! plan. The default spec mirrors the published case study.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compositional::{Period, PeriodWindows, YearRange};
use crate::funding::{write_grants_csv, FundingError, RatesTable};
use crate::model::{AuthorMention, DocumentType, FunderMention, GrantRecord, OrgType, PublicationRecord};
use crate::money::{Money, Rate};
use crate::resolve::{mention_key, CareerRow, MergeEntry, MergeMap, MergeProvenance, ResolveError};
use crate::trust::{Registry, RegistryEntry, RegistryError};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synth spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Corpus(#[from] crate::corpus::CorpusError),
    #[error(transparent)]
    Funding(#[from] FundingError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Toml(#[from] toml::ser::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRange {
    pub min: u32,
    pub max: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchetypeSpec {
    pub label: String,
    /// Expected share of career output before, during and after the network.
    pub centroid: Vec<f64>,
    pub authors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VenueSpec {
    pub publisher: String,
    pub source_title: String,
    #[serde(default = "default_doc_type")]
    pub document_type: DocumentType,
    pub papers: u32,
    pub citations: i64,
}

fn default_doc_type() -> DocumentType {
    DocumentType::ResearchArticle
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearCount {
    pub year: i32,
    pub papers: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunderRef {
    pub name: String,
    pub registry_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementSpec {
    pub text: String,
    pub papers: usize,
    #[serde(default)]
    pub funders: Vec<FunderRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoySpec {
    pub retraction_notices: usize,
    pub excluded_type: usize,
    pub reviewer_only: usize,
    /// Author counts of papers above the screening limit.
    pub oversized: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountrySpec {
    pub code: String,
    pub name: String,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrantPlan {
    pub grant_id: String,
    pub funder_name: String,
    pub funder_country: String,
    pub start_year: i32,
    pub amount: Option<String>,
    pub currency: String,
    /// Indices into the generated network authors, in archetype order.
    pub researchers: Vec<usize>,
    /// Extra holder ids outside the network.
    #[serde(default)]
    pub outside_researchers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateSpec {
    pub currency: String,
    pub units_per_usd: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub seed: u64,
    pub phrase: String,
    pub windows: PeriodWindows,
    pub career_total: CountRange,
    pub authors_per_paper: CountRange,
    pub max_authors: usize,
    pub hub_authors: usize,
    pub hub_weight: u32,
    pub authors_without_id: usize,
    pub name_variant_splits: usize,
    pub email_variant_splits: usize,
    pub email_anomaly_authors: usize,
    pub multi_country_authors: usize,
    pub orcid_share: f64,
    pub orgs_per_country: usize,
    pub rates_as_of: String,
    pub archetypes: Vec<ArchetypeSpec>,
    pub venues: Vec<VenueSpec>,
    pub corpus_years: Vec<YearCount>,
    pub statements: Vec<StatementSpec>,
    pub decoys: DecoySpec,
    pub countries: Vec<CountrySpec>,
    pub registry: Vec<RegistryEntry>,
    pub grants: Vec<GrantPlan>,
    pub rates: Vec<RateSpec>,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec::case_study()
    }
}

const GIVEN: [&str; 30] = [
    "Aisha", "Amir", "Ana", "Bilal", "Chen", "Daniela", "Elena", "Farhan", "Hana", "Ibrahim", "Irina",
    "Javier", "Kamal", "Lina", "Marco", "Mei", "Nadia", "Omar", "Priya", "Rafael", "Sara", "Tariq",
    "Wei", "Yusuf", "Zainab", "Ahmed", "Fatima", "Luca", "Nikola", "Sofia",
];
const SURNAMES: [&str; 24] = [
    "Rahman", "Hossain", "Islam", "Khan", "Ahmed", "Chowdhury", "Uddin", "Akter", "Das", "Roy",
    "Sarker", "Alam", "Karim", "Hasan", "Mahmud", "Begum", "Ali", "Siddique", "Haque", "Mia",
    "Sultana", "Bhuiyan", "Talukder", "Kabir",
];
/// Surnames used only by split identities, so name-based merge proposals
/// cannot pick up an unrelated author.
const SPLIT_SURNAMES: [&str; 12] = [
    "Okonkwo", "Haddad", "Lindqvist", "Moreau", "Tanaka", "Kowalczyk", "Ferreira", "Nakamura",
    "Oyelaran", "Petrescu", "Vukovic", "Zielinski",
];
const TOPICS: [&str; 12] = [
    "Neuroprotective effects", "Anti-inflammatory potential", "Phytochemical profiling",
    "Molecular docking", "Antioxidant activity", "Therapeutic promise", "Mechanistic insights",
    "Pharmacological evaluation", "Network pharmacology", "Nanoformulation strategies",
    "Gut-brain signalling", "Epigenetic regulation",
];
const SUBJECTS: [&str; 12] = [
    "flavonoids", "curcumin", "resveratrol", "quercetin", "berberine", "marine alkaloids",
    "polyphenols", "ginsenosides", "terpenoids", "probiotics", "melatonin", "saponins",
];
const CONTEXTS: [&str; 10] = [
    "Alzheimer's disease", "Parkinson's disease", "ischemic stroke", "depression",
    "neuropathic pain", "glioblastoma", "epilepsy", "diabetic neuropathy", "multiple sclerosis",
    "traumatic brain injury",
];

pub const NETWORK_ACKNOWLEDGEMENT: &str =
    "The authors concede the support by the Pharmakon Neuroscience Research Network, Dhaka, Bangladesh.";

fn venue(publisher: &str, source_title: &str, papers: u32, citations: i64) -> VenueSpec {
    VenueSpec {
        publisher: publisher.into(),
        source_title: source_title.into(),
        document_type: DocumentType::ResearchArticle,
        papers,
        citations,
    }
}

fn registry_entry(id: &str, name: &str, aliases: &[&str], country: &str) -> RegistryEntry {
    RegistryEntry {
        registry_id: id.into(),
        canonical_name: name.into(),
        aliases: aliases.iter().map(|a| a.to_string()).collect(),
        country: country.into(),
        org_type: OrgType::ResearchInstitution,
    }
}

#[allow(clippy::too_many_arguments)]
fn grant(id: &str, funder: &str, country: &str, year: i32, amount: Option<&str>, currency: &str, who: &[usize]) -> GrantPlan {
    GrantPlan {
        grant_id: id.into(),
        funder_name: funder.into(),
        funder_country: country.into(),
        start_year: year,
        amount: amount.map(str::to_string),
        currency: currency.into(),
        researchers: who.to_vec(),
        outside_researchers: Vec::new(),
    }
}

impl SynthSpec {
    /// Venues, archetypes, decoys, identifier gaps and grants shaped after the
    /// case study: 140 records screening down to 120, 312 authors behind 319
    /// source keys, four temporal archetypes of 202/68/24/18 authors, 30
    /// funded researchers across 13 funder countries.
    pub fn case_study() -> SynthSpec {
        let bentham = "Bentham Science Publishers";
        let els = "Elsevier";
        let fr = "Frontiers";
        let hin = "Hindawi";
        let mdpi = "MDPI";
        let sn = "Springer Nature";
        let wiley = "Wiley";
        let mut venues = vec![
            venue(bentham, "CNS & Neurological Disorders - Drug Targets", 1, 52),
            venue(bentham, "Combinatorial Chemistry & High Throughput Screening", 1, 28),
            venue(bentham, "Current Drug Targets", 1, 3),
            venue(bentham, "Current Gene Therapy", 4, 74),
            venue(bentham, "Current Neuropharmacology", 4, 108),
            venue(bentham, "Current Pharmaceutical Design", 7, 316),
            venue(bentham, "Current Protein and Peptide Science", 3, 33),
            venue(bentham, "Current Topics in Medicinal Chemistry", 4, 119),
            venue(els, "Ageing Research Reviews", 1, 139),
            venue(els, "Biotechnology Advances", 1, 42),
            venue(els, "Brain Research Bulletin", 1, 102),
            venue(els, "Current Opinion in Environmental Science & Health", 1, 0),
            venue(els, "Current Research in Pharmacology and Drug Discovery", 1, 31),
            venue(els, "Current Research in Translational Medicine", 1, 38),
            venue(els, "European Journal of Medicinal Chemistry", 1, 61),
            venue(els, "European Journal of Pharmacology", 2, 135),
            venue(els, "International Immunopharmacology", 1, 99),
            venue(els, "Journal of the Neurological Sciences", 1, 67),
            venue(els, "Life Sciences", 4, 234),
            venue(els, "Pharmacological Research", 2, 151),
            venue(els, "Phytomedicine", 2, 188),
            venue(els, "Seminars in Cancer Biology", 2, 172),
            venue(els, "The Science of The Total Environment", 3, 295),
            venue(els, "Toxicology Reports", 2, 17),
            venue(fr, "Frontiers in Cell and Developmental Biology", 3, 236),
            venue(fr, "Frontiers in Neuroscience", 1, 39),
            venue(fr, "Frontiers in Pharmacology", 5, 153),
            venue(fr, "Frontiers in Physiology", 1, 15),
            venue(hin, "Advances in Public Health", 1, 3),
            venue(hin, "Evidence-based Complementary and Alternative Medicine", 3, 50),
            venue(hin, "Journal of Nanomaterials", 1, 20),
            venue(hin, "Mediators of Inflammation", 1, 8),
            venue(hin, "Oxidative Medicine and Cellular Longevity", 2, 100),
            venue("IMR Press", "Frontiers in Bioscience-Landmark", 1, 2),
            venue(mdpi, "International Journal of Molecular Sciences", 4, 491),
            venue(mdpi, "Marine Drugs", 2, 124),
            venue(mdpi, "Molecules", 2, 712),
            venue(mdpi, "Pharmaceuticals", 1, 99),
            venue(mdpi, "Pharmacy", 1, 28),
            venue("Oxford University Press (OUP)", "Journal of Pharmacy and Pharmacology", 2, 179),
            venue("Royal Society of Chemistry (RSC)", "Natural Product Reports", 1, 13),
            venue(sn, "Community Mental Health Journal", 1, 0),
            venue(sn, "Environmental Science and Pollution Research", 8, 409),
            venue(sn, "Inflammation Research", 1, 11),
            venue(sn, "Molecular Biology Reports", 1, 11),
            venue(sn, "Molecular Neurobiology", 8, 685),
            venue(sn, "Neurochemical Research", 2, 48),
            venue(sn, "Neurotoxicity Research", 2, 108),
            venue(sn, "Pharmacological Reports", 1, 40),
            venue("Taylor & Francis", "Critical Reviews in Food Science and Nutrition", 1, 107),
            venue("Taylor & Francis", "Journal of Biomolecular Structure and Dynamics", 1, 11),
            venue(wiley, "Archiv der Pharmazie", 1, 120),
            venue(wiley, "BioMed Research International", 3, 373),
            venue(wiley, "IUBMB Life", 1, 57),
            venue(wiley, "Oxidative Medicine and Cellular Longevity", 2, 89),
            venue("Wolters Kluwer", "Neural Regeneration Research", 1, 143),
        ];
        venues.push(VenueSpec {
            publisher: sn.into(),
            source_title: "Natural Products in Neurodegeneration".into(),
            document_type: DocumentType::ResearchChapter,
            papers: 3,
            citations: 54,
        });

        let countries: Vec<CountrySpec> = [
            ("BD", "Bangladesh", 14), ("IN", "India", 6), ("PK", "Pakistan", 5), ("SA", "Saudi Arabia", 5),
            ("EG", "Egypt", 4), ("CN", "China", 4), ("IR", "Iran", 3), ("IQ", "Iraq", 2), ("MY", "Malaysia", 2),
            ("ID", "Indonesia", 1), ("KR", "South Korea", 2), ("JP", "Japan", 1), ("AU", "Australia", 2),
            ("US", "United States", 2), ("GB", "United Kingdom", 1), ("IT", "Italy", 2), ("FR", "France", 1),
            ("PT", "Portugal", 1), ("RU", "Russia", 1), ("HR", "Croatia", 1), ("IE", "Ireland", 1),
            ("DE", "Germany", 1), ("ES", "Spain", 1), ("PL", "Poland", 1), ("RO", "Romania", 2), ("TR", "Turkey", 1),
            ("NG", "Nigeria", 1), ("MA", "Morocco", 1), ("TN", "Tunisia", 1), ("DZ", "Algeria", 1),
            ("BR", "Brazil", 1), ("MX", "Mexico", 1), ("CA", "Canada", 1), ("NZ", "New Zealand", 1),
            ("TH", "Thailand", 1), ("VN", "Vietnam", 1), ("NP", "Nepal", 1), ("LK", "Sri Lanka", 1),
            ("AE", "United Arab Emirates", 1), ("JO", "Jordan", 1),
        ]
        .iter()
        .map(|&(code, name, weight)| CountrySpec {
            code: code.into(),
            name: name.into(),
            weight,
        })
        .collect();

        let registry = vec![
            registry_entry("reg.cn.nsfc", "National Natural Science Foundation of China", &["NSFC"], "CN"),
            registry_entry("reg.fr.anr", "Agence Nationale de la Recherche", &["ANR", "French National Research Agency"], "FR"),
            registry_entry("reg.hr.hrzz", "Croatian Science Foundation", &["HRZZ", "Hrvatska zaklada za znanost"], "HR"),
            registry_entry("reg.ie.sfi", "Science Foundation Ireland", &["SFI"], "IE"),
            registry_entry("reg.it.sapienza", "Sapienza University of Rome", &["Sapienza Università di Roma"], "IT"),
            registry_entry(
                "reg.pt.fct",
                "Fundação para a Ciência e a Tecnologia",
                &["Fundação para a Ciência e Tecnologia", "FCT"],
                "PT",
            ),
            registry_entry("reg.ru.rsf", "Russian Science Foundation", &["RSF"], "RU"),
            registry_entry("reg.us.nih", "National Institutes of Health", &["NIH"], "US"),
            registry_entry("reg.gb.wellcome", "Wellcome Trust", &["Wellcome"], "GB"),
            registry_entry("reg.gb.mrc", "Medical Research Council", &["MRC"], "GB"),
            registry_entry("reg.jp.jsps", "Japan Society for the Promotion of Science", &["JSPS"], "JP"),
            registry_entry("reg.kr.nrf", "National Research Foundation of Korea", &["NRF"], "KR"),
            registry_entry("reg.au.nhmrc", "National Health and Medical Research Council", &["NHMRC"], "AU"),
            registry_entry("reg.au.arc", "Australian Research Council", &["ARC"], "AU"),
            registry_entry("reg.sa.kacst", "King Abdulaziz City for Science and Technology", &["KACST"], "SA"),
            registry_entry("reg.sa.ksu", "King Saud University", &["KSU"], "SA"),
        ];

        // Nine first-time grantees after joining, seven agencies in seven
        // countries; 21 researchers funded before the network period, four of
        // them sharing one grant.
        let grants = vec![
            grant("G-NG-01", "National Natural Science Foundation of China", "CN", 2021, Some("580000"), "CNY", &[205]),
            grant("G-NG-02", "National Natural Science Foundation of China", "CN", 2023, Some("2000000"), "CNY", &[210]),
            grant("G-NG-03", "Agence Nationale de la Recherche", "FR", 2022, Some("450000"), "EUR", &[215]),
            grant("G-NG-04", "Croatian Science Foundation", "HR", 2023, Some("199000"), "EUR", &[220]),
            grant("G-NG-05", "Science Foundation Ireland", "IE", 2020, Some("600000"), "EUR", &[225]),
            grant("G-NG-06", "Sapienza University of Rome", "IT", 2024, Some("45000"), "EUR", &[230]),
            grant("G-NG-07", "Fundação para a Ciência e Tecnologia", "PT", 2021, Some("250000"), "EUR", &[10]),
            grant("G-NG-08", "Russian Science Foundation", "RU", 2022, Some("60000000"), "RUB", &[20]),
            grant("G-NG-09", "Russian Science Foundation", "RU", 2023, Some("45000000"), "RUB", &[30]),
            grant("G-SHARED", "National Institutes of Health", "US", 2017, Some("24500000"), "USD", &[40, 44, 48, 52]),
            grant("G-B-01", "National Institutes of Health", "US", 2016, Some("18750000"), "USD", &[56]),
            grant("G-B-02", "National Institutes of Health", "US", 2018, Some("9400000"), "USD", &[60]),
            grant("G-B-03", "Wellcome Trust", "GB", 2017, Some("4200000"), "GBP", &[64]),
            grant("G-B-04", "Medical Research Council", "GB", 2015, Some("2750000"), "GBP", &[68]),
            grant("G-B-05", "Japan Society for the Promotion of Science", "JP", 2018, Some("380000000"), "JPY", &[72]),
            grant("G-B-06", "Japan Society for the Promotion of Science", "JP", 2016, Some("95000000"), "JPY", &[76]),
            grant("G-B-07", "National Research Foundation of Korea", "KR", 2017, Some("2400000000"), "KRW", &[80]),
            grant("G-B-08", "National Research Foundation of Korea", "KR", 2018, Some("950000000"), "KRW", &[84]),
            grant("G-B-09", "National Health and Medical Research Council", "AU", 2016, Some("6300000"), "AUD", &[88]),
            grant("G-B-10", "Australian Research Council", "AU", 2018, Some("1150000"), "AUD", &[92]),
            grant("G-B-11", "King Abdulaziz City for Science and Technology", "SA", 2017, Some("7500000"), "SAR", &[96]),
            grant("G-B-12", "King Saud University", "SA", 2018, Some("1200000"), "SAR", &[100]),
            grant("G-B-13", "National Natural Science Foundation of China", "CN", 2016, Some("3000000"), "CNY", &[104]),
            grant("G-B-14", "Agence Nationale de la Recherche", "FR", 2018, Some("520000"), "EUR", &[108]),
            grant("G-B-15", "Russian Science Foundation", "RU", 2017, Some("24000000"), "RUB", &[112]),
            grant("G-B-16", "Fundação para a Ciência e Tecnologia", "PT", 2015, Some("180000"), "EUR", &[116]),
            grant("G-B-17", "National Institutes of Health", "US", 2018, Some("12600000"), "USD", &[120]),
            grant("G-L-01", "National Institutes of Health", "US", 2020, Some("21300000"), "USD", &[56, 60]),
            grant("G-L-02", "National Institutes of Health", "US", 2023, Some("3300000"), "USD", &[40]),
            grant("G-L-03", "Wellcome Trust", "GB", 2021, Some("1900000"), "GBP", &[64]),
            grant("G-L-04", "National Research Foundation of Korea", "KR", 2021, None, "KRW", &[80]),
            GrantPlan {
                outside_researchers: vec!["ur.099000000001".into()],
                ..grant("G-X-01", "National Institutes of Health", "US", 2019, Some("750000"), "USD", &[])
            },
        ];

        let rates = [
            ("USD", "1"), ("EUR", "0.92"), ("GBP", "0.79"), ("CNY", "7.10"), ("RUB", "90.0"),
            ("JPY", "150"), ("KRW", "1330"), ("AUD", "1.52"), ("SAR", "3.75"),
        ]
        .iter()
        .map(|&(c, r)| RateSpec {
            currency: c.into(),
            units_per_usd: r.into(),
        })
        .collect();

        SynthSpec {
            seed: 42,
            phrase: "Pharmakon Neuroscience".into(),
            windows: PeriodWindows::default(),
            career_total: CountRange { min: 120, max: 360 },
            authors_per_paper: CountRange { min: 4, max: 11 },
            max_authors: 25,
            hub_authors: 3,
            hub_weight: 14,
            authors_without_id: 29,
            name_variant_splits: 4,
            email_variant_splits: 3,
            email_anomaly_authors: 1,
            multi_country_authors: 6,
            orcid_share: 0.6,
            orgs_per_country: 3,
            rates_as_of: "2026-01-23".into(),
            archetypes: vec![
                ArchetypeSpec { label: "Publishing through time".into(), centroid: vec![0.218, 0.497, 0.285], authors: 202 },
                ArchetypeSpec { label: "Post-network continuation".into(), centroid: vec![0.0, 0.630, 0.370], authors: 68 },
                ArchetypeSpec { label: "Network-period exclusive".into(), centroid: vec![0.0, 1.0, 0.0], authors: 24 },
                ArchetypeSpec { label: "Pre-network and network period".into(), centroid: vec![0.431, 0.569, 0.0], authors: 18 },
            ],
            venues,
            corpus_years: vec![
                YearCount { year: 2019, papers: 14 },
                YearCount { year: 2020, papers: 36 },
                YearCount { year: 2021, papers: 43 },
                YearCount { year: 2022, papers: 27 },
            ],
            statements: vec![
                StatementSpec {
                    text: NETWORK_ACKNOWLEDGEMENT.into(),
                    papers: 100,
                    funders: vec![FunderRef { name: "Pharmakon Neuroscience Research Network".into(), registry_id: None }],
                },
                StatementSpec {
                    text: "This work was supported by the National Natural Science Foundation of China.".into(),
                    papers: 4,
                    funders: vec![FunderRef {
                        name: "National Natural Science Foundation of China".into(),
                        registry_id: Some("reg.cn.nsfc".into()),
                    }],
                },
                StatementSpec {
                    text: "This research was funded by King Saud University.".into(),
                    papers: 3,
                    funders: vec![FunderRef { name: "King Saud University".into(), registry_id: Some("reg.sa.ksu".into()) }],
                },
                StatementSpec {
                    text: "Supported by the National Institutes of Health.".into(),
                    papers: 3,
                    funders: vec![FunderRef { name: "National Institutes of Health".into(), registry_id: Some("reg.us.nih".into()) }],
                },
            ],
            decoys: DecoySpec {
                retraction_notices: 2,
                excluded_type: 12,
                reviewer_only: 4,
                oversized: vec![161, 63],
            },
            countries,
            registry,
            grants,
            rates,
        }
    }

    pub fn network_author_count(&self) -> usize {
        self.archetypes.iter().map(|a| a.authors).sum()
    }

    pub fn included_paper_count(&self) -> usize {
        self.venues.iter().map(|v| v.papers as usize).sum()
    }

    fn outsider_pool(&self) -> usize {
        self.decoys.oversized.iter().copied().max().unwrap_or(0).max(8)
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidSpec(m));
        self.windows
            .validate()
            .map_err(|e| SynthError::InvalidSpec(e.to_string()))?;
        if self.archetypes.is_empty() {
            return bad("no archetypes".into());
        }
        for a in &self.archetypes {
            if a.authors == 0 {
                return bad(format!("archetype '{}' has no authors", a.label));
            }
            if a.centroid.len() != 3 || a.centroid.iter().any(|v| v.is_nan() || *v < 0.0) {
                return bad(format!("archetype '{}' centroid must have three non-negative parts", a.label));
            }
            if (a.centroid.iter().sum::<f64>() - 1.0).abs() > 1e-6 {
                return bad(format!("archetype '{}' centroid does not sum to 1", a.label));
            }
        }
        let n = self.network_author_count();
        let papers = self.included_paper_count();
        let c = self.career_total;
        if c.min == 0 || c.min > c.max {
            return bad("career_total must satisfy 1 <= min <= max".into());
        }
        let a = self.authors_per_paper;
        if a.min == 0 || a.min > a.max || a.max as usize > self.max_authors {
            return bad("authors_per_paper must satisfy 1 <= min <= max <= max_authors".into());
        }
        if papers == 0 {
            return bad("venues contain no papers".into());
        }
        if papers * (a.max as usize) < n {
            return bad(format!("{papers} papers of at most {} authors cannot cover {n} authors", a.max));
        }
        if self.venues.iter().any(|v| v.citations < 0 || (v.papers == 0 && v.citations != 0)) {
            return bad("venue citations must be non-negative and belong to at least one paper".into());
        }
        if self.venues.iter().any(|v| {
            matches!(v.document_type, DocumentType::RetractionNotice | DocumentType::Other)
        }) {
            return bad("venue papers must be of an included document type".into());
        }
        let year_total: usize = self.corpus_years.iter().map(|y| y.papers as usize).sum();
        if year_total != papers {
            return bad(format!("corpus_years cover {year_total} papers, venues {papers}"));
        }
        for y in &self.corpus_years {
            let p = self.windows.classify(y.year);
            for arch in &self.archetypes {
                if y.papers > 0 && arch.centroid[p.index()] == 0.0 {
                    return bad(format!(
                        "corpus year {} falls in a period where archetype '{}' has no output",
                        y.year, arch.label
                    ));
                }
            }
        }
        if self.statements.iter().map(|s| s.papers).sum::<usize>() > papers {
            return bad("statements assigned to more papers than exist".into());
        }
        if self.decoys.oversized.iter().any(|&k| k <= self.max_authors) {
            return bad("oversized decoys must exceed max_authors".into());
        }
        let splits = self.name_variant_splits + self.email_variant_splits;
        if splits > SPLIT_SURNAMES.len() {
            return bad(format!("at most {} split identities", SPLIT_SURNAMES.len()));
        }
        if n + self.outsider_pool() > GIVEN.len() * SURNAMES.len() {
            return bad("too many authors for the name pool".into());
        }
        let holders: BTreeSet<usize> = self.grants.iter().flat_map(|g| g.researchers.iter().copied()).collect();
        if let Some(&i) = holders.iter().find(|&&i| i >= n) {
            return bad(format!("grant researcher index {i} is out of range"));
        }
        let special = self.authors_without_id + splits + self.email_anomaly_authors + self.multi_country_authors + self.hub_authors;
        if special > n - holders.len() {
            return bad("not enough authors for the requested identifier and country quirks".into());
        }
        if self.countries.is_empty() || self.orgs_per_country == 0 {
            return bad("need at least one country and organization".into());
        }
        if self.multi_country_authors > 0 && self.countries.len() < 2 {
            return bad("multi-country authors need two countries".into());
        }
        if !(0.0..=1.0).contains(&self.orcid_share) {
            return bad("orcid_share must lie in [0, 1]".into());
        }
        let rates = self.rates_table()?;
        for g in &self.grants {
            if let Some(a) = &g.amount {
                a.parse::<Money>()
                    .map_err(|e| SynthError::InvalidSpec(format!("grant {}: {e}", g.grant_id)))?;
                rates.rate(&g.currency)?;
            }
        }
        Registry::new(self.registry.clone())?;
        Ok(())
    }

    pub fn rates_table(&self) -> Result<RatesTable, SynthError> {
        let mut rates = BTreeMap::new();
        for r in &self.rates {
            let rate: Rate = r
                .units_per_usd
                .parse()
                .map_err(|e| SynthError::InvalidSpec(format!("rate {}: {e}", r.currency)))?;
            rates.insert(r.currency.to_ascii_uppercase(), rate);
        }
        Ok(RatesTable::new(self.rates_as_of.clone(), rates)?)
    }

    pub fn to_toml(&self) -> Result<String, SynthError> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(s: &str) -> Result<SynthSpec, SynthError> {
        toml::from_str(s).map_err(|e| SynthError::InvalidSpec(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthRow {
    pub profile_id: String,
    /// 1-based archetype index.
    pub archetype: usize,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    pub records: Vec<PublicationRecord>,
    pub grants: Vec<GrantRecord>,
    pub registry: Vec<RegistryEntry>,
    pub rates: RatesTable,
    pub merges: MergeMap,
    pub careers: Vec<CareerRow>,
    pub truth: Vec<TruthRow>,
}

#[derive(Debug, Clone)]
struct Person {
    given: String,
    surname: String,
    ids: Vec<String>,
    orcid: Option<String>,
    /// One email set per identity.
    emails: Vec<Vec<String>>,
    /// Raw name per identity.
    names: Vec<String>,
    affiliations: Vec<String>,
    org_ids: Vec<String>,
    countries: Vec<String>,
}

impl Person {
    fn full_name(&self) -> String {
        format!("{} {}", self.given, self.surname)
    }

    fn mention(&self, identity: usize) -> AuthorMention {
        let k = identity.min(self.names.len() - 1);
        AuthorMention {
            raw_name: self.names[k].clone(),
            source_researcher_id: self.ids.get(k.min(self.ids.len().saturating_sub(1))).cloned(),
            orcid: self.orcid.clone(),
            emails: self.emails[k.min(self.emails.len() - 1)].clone(),
            affiliation_texts: self.affiliations.clone(),
            org_registry_ids: self.org_ids.clone(),
            countries: self.countries.clone(),
        }
    }

    fn profile_id(&self) -> String {
        mention_key(&self.mention(0))
    }
}

fn org_name(country: &CountrySpec, k: usize) -> String {
    let base = match k % 3 {
        0 => format!("University of Health Sciences {}", country.name),
        1 => format!("{} Institute of Pharmaceutical Research", country.name),
        _ => format!("{} Medical College", country.name),
    };
    if k >= 3 {
        format!("{base} {}", k / 3 + 1)
    } else {
        base
    }
}

fn weighted_index(rng: &mut ChaCha8Rng, weights: &[u32]) -> usize {
    let total: u64 = weights.iter().map(|&w| u64::from(w)).sum();
    let mut x = rng.random_range(0..total);
    for (i, &w) in weights.iter().enumerate() {
        if x < u64::from(w) {
            return i;
        }
        x -= u64::from(w);
    }
    weights.len() - 1
}

/// Splits `total` into `parts` non-negative integers with random weights,
/// by largest remainder.
fn split_total(rng: &mut ChaCha8Rng, total: i64, parts: usize) -> Vec<i64> {
    if parts == 0 {
        return Vec::new();
    }
    let w: Vec<f64> = (0..parts).map(|_| 0.2 + rng.random::<f64>()).collect();
    let sum: f64 = w.iter().sum();
    let exact: Vec<f64> = w.iter().map(|x| x / sum * total as f64).collect();
    let mut out: Vec<i64> = exact.iter().map(|x| x.floor() as i64).collect();
    let mut order: Vec<usize> = (0..parts).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    let missing = total - out.iter().sum::<i64>();
    for &i in order.iter().take(missing as usize) {
        out[i] += 1;
    }
    out
}

fn unique_id(rng: &mut ChaCha8Rng, used: &mut BTreeSet<String>, prefix: &str, digits: u32) -> String {
    loop {
        let n = rng.random_range(0..10u64.pow(digits));
        let id = format!("{prefix}{n:0width$}", width = digits as usize);
        if used.insert(id.clone()) {
            return id;
        }
    }
}

fn orcid(rng: &mut ChaCha8Rng) -> String {
    let d = |rng: &mut ChaCha8Rng| rng.random_range(0..10000u32);
    format!("0000-000{}-{:04}-{:04}", rng.random_range(1..4u32), d(rng), d(rng))
}

fn title(rng: &mut ChaCha8Rng) -> String {
    format!(
        "{} of {} in {}",
        TOPICS.choose(rng).unwrap(),
        SUBJECTS.choose(rng).unwrap(),
        CONTEXTS.choose(rng).unwrap()
    )
}

fn window_range(w: &PeriodWindows, p: Period) -> YearRange {
    match p {
        Period::Before => w.before,
        Period::During => w.during,
        Period::After => w.after,
    }
}

pub fn generate_corpus(spec: &SynthSpec) -> Result<SynthOutput, SynthError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.network_author_count();

    // -- people ------------------------------------------------------------
    let mut labels = Vec::with_capacity(n);
    for (a, arch) in spec.archetypes.iter().enumerate() {
        labels.extend(std::iter::repeat_n(a, arch.authors));
    }
    let mut name_slots: Vec<usize> = (0..GIVEN.len() * SURNAMES.len()).collect();
    name_slots.shuffle(&mut rng);

    let holders: BTreeSet<usize> = spec.grants.iter().flat_map(|g| g.researchers.iter().copied()).collect();
    let mut free: Vec<usize> = (0..n).filter(|i| !holders.contains(i)).collect();
    free.shuffle(&mut rng);
    let mut take = |k: usize| -> Vec<usize> { free.drain(..k).collect() };
    let no_id: BTreeSet<usize> = take(spec.authors_without_id).into_iter().collect();
    let name_splits = take(spec.name_variant_splits);
    let email_splits = take(spec.email_variant_splits);
    let anomalies: BTreeSet<usize> = take(spec.email_anomaly_authors).into_iter().collect();
    let multi: BTreeSet<usize> = take(spec.multi_country_authors).into_iter().collect();
    let hubs = take(spec.hub_authors);

    let mut country_of: Vec<usize> = (0..n)
        .map(|i| if i < spec.countries.len() { i } else { usize::MAX })
        .collect();
    country_of.shuffle(&mut rng);
    let weights: Vec<u32> = spec.countries.iter().map(|c| c.weight).collect();
    for c in country_of.iter_mut().filter(|c| **c == usize::MAX) {
        *c = weighted_index(&mut rng, &weights);
    }

    let mut used_ids = BTreeSet::new();
    let split_index: BTreeMap<usize, usize> = name_splits
        .iter()
        .chain(email_splits.iter())
        .enumerate()
        .map(|(k, &i)| (i, k))
        .collect();
    let mut people = Vec::with_capacity(n);
    for i in 0..n {
        let slot = name_slots[i];
        let given = GIVEN[slot % GIVEN.len()].to_string();
        let surname = match split_index.get(&i) {
            Some(&k) => SPLIT_SURNAMES[k].to_string(),
            None => SURNAMES[slot / GIVEN.len()].to_string(),
        };
        let home = &spec.countries[country_of[i]];
        let org_k = rng.random_range(0..spec.orgs_per_country);
        let mut affiliations = vec![format!("Department of Pharmacology, {}, {}", org_name(home, org_k), home.name)];
        let mut org_ids = vec![format!("org.{}.{}", home.code.to_lowercase(), org_k + 1)];
        let mut countries = vec![home.code.clone()];
        if multi.contains(&i) {
            let mut other = rng.random_range(0..spec.countries.len() - 1);
            if other >= country_of[i] {
                other += 1;
            }
            let c2 = &spec.countries[other];
            let k2 = rng.random_range(0..spec.orgs_per_country);
            affiliations.push(format!("Faculty of Medicine, {}, {}", org_name(c2, k2), c2.name));
            org_ids.push(format!("org.{}.{}", c2.code.to_lowercase(), k2 + 1));
            countries.push(c2.code.clone());
        }
        let domain = format!("{}-{}.edu", home.code.to_lowercase(), org_k + 1);
        let local = format!("{}.{}", given.to_lowercase(), surname.to_lowercase());
        let full = format!("{given} {surname}");
        let (ids, names, emails, orcid_id) = if no_id.contains(&i) {
            (Vec::new(), vec![full.clone()], vec![vec![format!("{local}@{domain}")]], None)
        } else {
            let primary = unique_id(&mut rng, &mut used_ids, "ur.0", 11);
            let oid = (rng.random::<f64>() < spec.orcid_share).then(|| orcid(&mut rng));
            if name_splits.contains(&i) {
                let secondary = unique_id(&mut rng, &mut used_ids, "ur.0", 11);
                let initial = format!("{}. {surname}", &given[..1]);
                let mail = vec![format!("{local}@{domain}")];
                (vec![primary, secondary], vec![full.clone(), initial], vec![mail.clone(), mail], None)
            } else if email_splits.contains(&i) {
                let secondary = unique_id(&mut rng, &mut used_ids, "ur.0", 11);
                (
                    vec![primary, secondary],
                    vec![full.clone(), full.clone()],
                    vec![
                        vec![format!("{}-{}@hotmail.com", given.to_lowercase(), surname.to_lowercase())],
                        vec![format!("{}_{}@hotmail.com", given.to_lowercase(), surname.to_lowercase())],
                    ],
                    None,
                )
            } else if anomalies.contains(&i) {
                let g = given.to_lowercase();
                let s = surname.to_lowercase();
                (
                    vec![primary],
                    vec![full.clone()],
                    vec![vec![format!("{g}-{s}@hotmail.com"), format!("{g}_{s}@hotmail.com")]],
                    oid,
                )
            } else {
                (vec![primary], vec![full.clone()], vec![vec![format!("{local}@{domain}")]], oid)
            }
        };
        people.push(Person {
            given,
            surname,
            ids,
            orcid: orcid_id,
            emails,
            names,
            affiliations,
            org_ids,
            countries,
        });
    }

    // -- included papers ----------------------------------------------------
    let mut papers: Vec<PublicationRecord> = Vec::new();
    let mut years: Vec<i32> = spec
        .corpus_years
        .iter()
        .flat_map(|y| std::iter::repeat_n(y.year, y.papers as usize))
        .collect();
    years.shuffle(&mut rng);
    let mut review_toggle = 0usize;
    for v in &spec.venues {
        let cites = split_total(&mut rng, v.citations, v.papers as usize);
        for c in cites {
            let dt = if v.document_type == DocumentType::ResearchArticle {
                review_toggle += 1;
                if review_toggle.is_multiple_of(3) { DocumentType::ReviewArticle } else { DocumentType::ResearchArticle }
            } else {
                v.document_type
            };
            let year = years[papers.len()];
            let mut r = PublicationRecord::new(String::new(), year, dt);
            r.title = title(&mut rng);
            r.publisher = v.publisher.clone();
            r.source_title = v.source_title.clone();
            r.times_cited = c;
            r.online_year = Some(year);
            r.fields_of_research = vec!["3214 Pharmacology and Pharmaceutical Sciences".into()];
            papers.push(r);
        }
    }
    let mut statement_slots: Vec<Option<usize>> = (0..papers.len()).map(|_| None).collect();
    let mut k = 0;
    for (s, st) in spec.statements.iter().enumerate() {
        for _ in 0..st.papers {
            statement_slots[k] = Some(s);
            k += 1;
        }
    }
    statement_slots.shuffle(&mut rng);
    for (r, slot) in papers.iter_mut().zip(&statement_slots) {
        if let Some(s) = slot {
            let st = &spec.statements[*s];
            r.funding_statement = Some(st.text.clone());
            r.funders = st
                .funders
                .iter()
                .map(|f| FunderMention { name: f.name.clone(), registry_id: f.registry_id.clone() })
                .collect();
        }
    }

    // author lists: cover everyone once, then fill with hub-weighted draws
    let app = spec.authors_per_paper;
    let mut sizes: Vec<usize> = (0..papers.len())
        .map(|_| rng.random_range(app.min..=app.max) as usize)
        .collect();
    let mut p = 0;
    while sizes.iter().sum::<usize>() < n {
        if sizes[p] < app.max as usize {
            sizes[p] += 1;
        }
        p = (p + 1) % sizes.len();
    }
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); papers.len()];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut p = 0;
    for a in order {
        while lists[p].len() >= sizes[p] {
            p = (p + 1) % lists.len();
        }
        lists[p].push(a);
        p = (p + 1) % lists.len();
    }
    let author_weights: Vec<u32> = (0..n)
        .map(|i| if hubs.contains(&i) { spec.hub_weight } else { 1 })
        .collect();
    for (list, &size) in lists.iter_mut().zip(&sizes) {
        while list.len() < size {
            let a = weighted_index(&mut rng, &author_weights);
            if !list.contains(&a) {
                list.push(a);
            }
        }
    }
    for &a in name_splits.iter().chain(email_splits.iter()) {
        let count = lists.iter().filter(|l| l.contains(&a)).count();
        if count < 2 {
            let target = (0..lists.len())
                .find(|&q| !lists[q].contains(&a) && lists[q].len() < app.max as usize)
                .ok_or_else(|| SynthError::InvalidSpec("no room to place a split identity twice".into()))?;
            lists[target].push(a);
        }
    }
    let mut appearances = vec![0usize; n];
    let mut corpus_years: Vec<BTreeMap<i32, u32>> = vec![BTreeMap::new(); n];
    for (r, list) in papers.iter_mut().zip(lists.iter_mut()) {
        list.shuffle(&mut rng);
        for &a in list.iter() {
            let person = &people[a];
            r.authors.push(person.mention(appearances[a] % person.names.len()));
            appearances[a] += 1;
            *corpus_years[a].entry(r.pub_year).or_insert(0) += 1;
        }
        if let Some(id) = r.authors[0].source_researcher_id.clone() {
            r.corresponding_author_ids.insert(id);
        }
    }

    // -- decoys ----------------------------------------------------------------
    let pool = spec.outsider_pool();
    let outsiders: Vec<AuthorMention> = (0..pool)
        .map(|k| {
            let slot = name_slots[n + k];
            let c = &spec.countries[k % spec.countries.len()];
            let name = format!("{} {}", GIVEN[slot % GIVEN.len()], SURNAMES[slot / GIVEN.len()]);
            AuthorMention {
                raw_name: name,
                source_researcher_id: Some(unique_id(&mut rng, &mut used_ids, "ur.0", 11)),
                orcid: None,
                emails: Vec::new(),
                affiliation_texts: vec![format!("School of Medicine, {}, {}", org_name(c, 0), c.name)],
                org_registry_ids: vec![format!("org.{}.1", c.code.to_lowercase())],
                countries: vec![c.code.clone()],
            }
        })
        .collect();
    let decoy = |rng: &mut ChaCha8Rng, dt: DocumentType, authors: usize| {
        let year = rng.random_range(2019..=2022);
        let mut r = PublicationRecord::new(String::new(), year, dt);
        r.title = title(rng);
        let v = &spec.venues[rng.random_range(0..spec.venues.len())];
        r.publisher = v.publisher.clone();
        r.source_title = v.source_title.clone();
        r.online_year = Some(year);
        r.times_cited = rng.random_range(0..30);
        let start = rng.random_range(0..pool);
        r.authors = (0..authors).map(|k| outsiders[(start + k) % pool].clone()).collect();
        r
    };
    let mut decoys = Vec::new();
    for _ in 0..spec.decoys.retraction_notices {
        let mut r = decoy(&mut rng, DocumentType::RetractionNotice, 2);
        r.title = format!("Retraction Note: {}", r.title);
        r.times_cited = 0;
        decoys.push(r);
    }
    for _ in 0..spec.decoys.excluded_type {
        let mut r = decoy(&mut rng, DocumentType::Other, 3);
        r.funding_statement = Some(NETWORK_ACKNOWLEDGEMENT.into());
        decoys.push(r);
    }
    for _ in 0..spec.decoys.reviewer_only {
        let mut r = decoy(&mut rng, DocumentType::ResearchArticle, 4);
        r.reviewer_affiliations = Some(format!("{} Research Network, Dhaka, Bangladesh", spec.phrase));
        decoys.push(r);
    }
    for &k in &spec.decoys.oversized {
        let mut r = decoy(&mut rng, DocumentType::ResearchArticle, k);
        r.funding_statement = Some(NETWORK_ACKNOWLEDGEMENT.into());
        decoys.push(r);
    }

    let mut records: Vec<PublicationRecord> = papers.into_iter().chain(decoys).collect();
    records.shuffle(&mut rng);
    let mut used_pub = BTreeSet::new();
    for r in &mut records {
        r.publication_id = unique_id(&mut rng, &mut used_pub, "pub.1", 9);
        r.doi = Some(format!("10.5555/{}", r.publication_id));
    }

    // -- careers --------------------------------------------------------------
    let mut careers = Vec::new();
    let mut truth = Vec::new();
    for (i, person) in people.iter().enumerate() {
        let arch = &spec.archetypes[labels[i]];
        let total = rng.random_range(spec.career_total.min..=spec.career_total.max);
        let cum: Vec<f64> = arch
            .centroid
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        let mut by_year: BTreeMap<i32, u32> = BTreeMap::new();
        for _ in 0..total {
            let u = rng.random::<f64>() * cum[2];
            let period = Period::ALL[cum.iter().position(|&c| u < c).unwrap_or(2)];
            let range = window_range(&spec.windows, period);
            *by_year.entry(rng.random_range(range.start..=range.end)).or_insert(0) += 1;
        }
        for (&y, &c) in &corpus_years[i] {
            let slot = by_year.entry(y).or_insert(0);
            *slot = (*slot).max(c);
        }
        let profile_id = person.profile_id();
        careers.extend(by_year.into_iter().map(|(year, count)| CareerRow {
            profile_id: profile_id.clone(),
            year,
            count,
        }));
        truth.push(TruthRow {
            profile_id,
            archetype: labels[i] + 1,
            name: person.full_name(),
        });
    }
    careers.sort_by(|a, b| a.profile_id.cmp(&b.profile_id).then(a.year.cmp(&b.year)));
    truth.sort_by(|a, b| a.profile_id.cmp(&b.profile_id));

    let merges = MergeMap {
        entries: name_splits
            .iter()
            .chain(email_splits.iter())
            .map(|&i| MergeEntry {
                profile_key: people[i].ids[0].clone(),
                canonical_name: people[i].full_name(),
                source_ids: people[i].ids.iter().cloned().collect(),
            })
            .collect(),
        provenance: MergeProvenance::Curated,
    };

    let grants = spec
        .grants
        .iter()
        .map(|g| GrantRecord {
            grant_id: g.grant_id.clone(),
            funder_name: g.funder_name.clone(),
            funder_country: g.funder_country.clone(),
            start_year: g.start_year,
            amount: g.amount.as_ref().map(|a| a.parse().expect("validated")),
            currency: g.currency.clone(),
            researcher_ids: g
                .researchers
                .iter()
                .map(|&i| people[i].ids[0].clone())
                .chain(g.outside_researchers.iter().cloned())
                .collect(),
        })
        .collect();

    Ok(SynthOutput {
        records,
        grants,
        registry: spec.registry.clone(),
        rates: spec.rates_table()?,
        merges,
        careers,
        truth,
    })
}

pub const SYNTH_FILES: [&str; 8] = [
    "corpus.csv",
    "grants.csv",
    "registry.csv",
    "rates.csv",
    "merges.csv",
    "careers.csv",
    "truth.csv",
    "spec.toml",
];

/// Writes every generated artifact plus the effective spec into `dir`.
pub fn write_synth_dir(dir: &Path, spec: &SynthSpec, out: &SynthOutput) -> Result<(), SynthError> {
    std::fs::create_dir_all(dir)?;
    crate::corpus::write_corpus_file(&dir.join("corpus.csv"), &out.records)?;
    write_grants_csv(&out.grants, std::fs::File::create(dir.join("grants.csv"))?)?;
    Registry::new(out.registry.clone())?.write_csv(std::fs::File::create(dir.join("registry.csv"))?)?;
    out.rates.write_csv(std::fs::File::create(dir.join("rates.csv"))?)?;
    out.merges.write_csv(std::fs::File::create(dir.join("merges.csv"))?)?;
    crate::resolve::write_careers_csv(&out.careers, std::fs::File::create(dir.join("careers.csv"))?)?;
    let mut w = csv::Writer::from_path(dir.join("truth.csv"))?;
    for t in &out.truth {
        w.serialize(t)?;
    }
    w.flush()?;
    std::fs::write(dir.join("spec.toml"), spec.to_toml()?)?;
    Ok(())
}
