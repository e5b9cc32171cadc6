//! Grant exposure of network researchers: period classification, currency
//! conversion and first-time grantees.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compositional::{Period, PeriodWindows};
use crate::model::GrantRecord;
use crate::money::{nanos_to_money, AmountError, Money, Rate};
use crate::resolve::{ProfileIndex, ResearcherProfile};

pub const COMMON_CURRENCY: &str = "USD";

#[derive(Debug, Error)]
pub enum FundingError {
    #[error("no exchange rate for currency '{0}'")]
    MissingRate(String),
    #[error("rates.csv line {line}: {reason}")]
    MalformedRate { line: u64, reason: String },
    #[error("grants.csv line {line}: {reason}")]
    MalformedGrant { line: u64, reason: String },
    #[error("duplicate grant id '{0}'")]
    DuplicateGrant(String),
    #[error("rate for {COMMON_CURRENCY} must be 1, got {0}")]
    CommonRateNotOne(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Units of each currency per one US dollar, as of one date.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatesTable {
    pub as_of: String,
    pub rates: BTreeMap<String, Rate>,
}

impl RatesTable {
    pub fn new(as_of: impl Into<String>, rates: BTreeMap<String, Rate>) -> Result<RatesTable, FundingError> {
        let mut rates = rates;
        match rates.get(COMMON_CURRENCY) {
            Some(r) if *r != Rate::one() && r.as_f64() != 1.0 => {
                return Err(FundingError::CommonRateNotOne(r.to_string()))
            }
            Some(_) => {}
            None => {
                rates.insert(COMMON_CURRENCY.to_string(), Rate::one());
            }
        }
        Ok(RatesTable {
            as_of: as_of.into(),
            rates,
        })
    }

    pub fn rate(&self, currency: &str) -> Result<Rate, FundingError> {
        self.rates
            .get(&currency.trim().to_ascii_uppercase())
            .copied()
            .ok_or_else(|| FundingError::MissingRate(currency.to_string()))
    }

    /// Columns `currency, units_per_usd, as_of`.
    pub fn read_csv<R: Read>(source: R) -> Result<RatesTable, FundingError> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
        let mut rates = BTreeMap::new();
        let mut as_of: Option<String> = None;
        for row in r.records() {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line());
            let bad = |reason: String| FundingError::MalformedRate { line, reason };
            if row.len() < 2 {
                return Err(bad("expected currency,units_per_usd,as_of".into()));
            }
            let code = row[0].to_ascii_uppercase();
            if code.len() != 3 || !code.chars().all(|c| c.is_ascii_alphabetic()) {
                return Err(bad(format!("'{}' is not an ISO-4217 code", &row[0])));
            }
            let rate: Rate = row[1].parse().map_err(|e: AmountError| bad(e.to_string()))?;
            if !rate.is_positive() {
                return Err(bad("rate must be positive".into()));
            }
            let date = row.get(2).unwrap_or("").to_string();
            match &as_of {
                None => as_of = Some(date),
                Some(d) if *d != date => return Err(bad(format!("as_of '{date}' differs from '{d}'"))),
                Some(_) => {}
            }
            if rates.insert(code.clone(), rate).is_some() {
                return Err(bad(format!("duplicate currency {code}")));
            }
        }
        RatesTable::new(as_of.unwrap_or_default(), rates)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), FundingError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["currency", "units_per_usd", "as_of"])?;
        for (code, rate) in &self.rates {
            w.write_record([code.as_str(), &rate.to_string(), &self.as_of])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Columns `grant_id, funder_name, funder_country, start_year, amount,
/// currency, researcher_ids` (researchers `;`-separated, amount may be blank).
pub fn read_grants_csv<R: Read>(source: R) -> Result<Vec<GrantRecord>, FundingError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let mut out: Vec<GrantRecord> = Vec::new();
    let mut seen = BTreeSet::new();
    for row in r.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |reason: String| FundingError::MalformedGrant { line, reason };
        if row.len() != 7 {
            return Err(bad(format!("expected 7 fields, got {}", row.len())));
        }
        let start_year: i32 = row[3].parse().map_err(|_| bad(format!("bad start_year '{}'", &row[3])))?;
        let amount = if row[4].is_empty() {
            None
        } else {
            Some(row[4].parse::<Money>().map_err(|e| bad(e.to_string()))?)
        };
        let grant = GrantRecord {
            grant_id: row[0].to_string(),
            funder_name: row[1].to_string(),
            funder_country: row[2].to_string(),
            start_year,
            amount,
            currency: row[5].to_ascii_uppercase(),
            researcher_ids: row[6]
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect(),
        };
        if grant.grant_id.is_empty() {
            return Err(bad("empty grant_id".into()));
        }
        if !seen.insert(grant.grant_id.clone()) {
            return Err(FundingError::DuplicateGrant(grant.grant_id));
        }
        out.push(grant);
    }
    Ok(out)
}

pub fn write_grants_csv<W: Write>(grants: &[GrantRecord], out: W) -> Result<(), FundingError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "grant_id",
        "funder_name",
        "funder_country",
        "start_year",
        "amount",
        "currency",
        "researcher_ids",
    ])?;
    for g in grants {
        let ids: Vec<&str> = g.researcher_ids.iter().map(String::as_str).collect();
        w.write_record([
            g.grant_id.as_str(),
            &g.funder_name,
            &g.funder_country,
            &g.start_year.to_string(),
            &g.amount.map(|m| m.to_string()).unwrap_or_default(),
            &g.currency,
            &ids.join(";"),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn classify_grant_period(grant: &GrantRecord, windows: &PeriodWindows) -> Period {
    windows.classify(grant.start_year)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrantSummary {
    pub grant_id: String,
    pub funder_name: String,
    pub funder_country: String,
    pub period: Period,
    pub network_researchers: Vec<String>,
    pub usd_equivalent: Option<Money>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResearcherFunding {
    pub profile_id: String,
    pub before: Vec<String>,
    pub during_or_after: Vec<String>,
    pub funders: BTreeSet<String>,
    pub countries: BTreeSet<String>,
    pub totals_by_currency: BTreeMap<String, Money>,
    pub usd_equivalent: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundingSummary {
    pub as_of: String,
    pub windows: PeriodWindows,
    /// Only grants naming at least one network researcher.
    pub grants: Vec<GrantSummary>,
    pub researchers: Vec<ResearcherFunding>,
    pub funded_researcher_count: usize,
    pub countries: BTreeSet<String>,
    /// Each linked grant counted once.
    pub usd_equivalent_total: Money,
    /// Linked grants without an amount; totals understate true funding.
    pub missing_amount_grants: Vec<String>,
}

pub fn aggregate_funding(
    grants: &[GrantRecord],
    profiles: &[ResearcherProfile],
    rates: &RatesTable,
    windows: &PeriodWindows,
) -> Result<FundingSummary, FundingError> {
    let index = ProfileIndex::new(profiles);
    let link = |id: &str| {
        index
            .by_source_id(id)
            .or_else(|| index.by_profile_id(id))
            .map(|p| p.profile_id.clone())
    };
    let mut summaries = Vec::new();
    let mut per: BTreeMap<String, (ResearcherFunding, i128)> = BTreeMap::new();
    let mut total_nanos: i128 = 0;
    let mut countries = BTreeSet::new();
    let mut missing = Vec::new();

    let mut ordered: Vec<&GrantRecord> = grants.iter().collect();
    ordered.sort_by(|a, b| a.grant_id.cmp(&b.grant_id));
    for g in ordered {
        let holders: BTreeSet<String> = g.researcher_ids.iter().filter_map(|id| link(id)).collect();
        if holders.is_empty() {
            continue;
        }
        let nanos = match g.amount {
            Some(a) => Some(rates.rate(&g.currency)?.to_common_nanos(a)),
            None => {
                missing.push(g.grant_id.clone());
                None
            }
        };
        let period = classify_grant_period(g, windows);
        total_nanos += nanos.unwrap_or(0);
        countries.insert(g.funder_country.clone());
        for h in &holders {
            let (rf, acc) = per.entry(h.clone()).or_insert_with(|| {
                (
                    ResearcherFunding {
                        profile_id: h.clone(),
                        before: Vec::new(),
                        during_or_after: Vec::new(),
                        funders: BTreeSet::new(),
                        countries: BTreeSet::new(),
                        totals_by_currency: BTreeMap::new(),
                        usd_equivalent: Money::ZERO,
                    },
                    0,
                )
            });
            if period == Period::Before {
                rf.before.push(g.grant_id.clone());
            } else {
                rf.during_or_after.push(g.grant_id.clone());
            }
            rf.funders.insert(g.funder_name.clone());
            rf.countries.insert(g.funder_country.clone());
            if let Some(a) = g.amount {
                let t = rf.totals_by_currency.entry(g.currency.clone()).or_insert(Money::ZERO);
                *t += a;
            }
            *acc += nanos.unwrap_or(0);
        }
        summaries.push(GrantSummary {
            grant_id: g.grant_id.clone(),
            funder_name: g.funder_name.clone(),
            funder_country: g.funder_country.clone(),
            period,
            network_researchers: holders.into_iter().collect(),
            usd_equivalent: nanos.map(nanos_to_money),
        });
    }
    let researchers: Vec<ResearcherFunding> = per
        .into_values()
        .map(|(mut rf, acc)| {
            rf.usd_equivalent = nanos_to_money(acc);
            rf
        })
        .collect();
    Ok(FundingSummary {
        as_of: rates.as_of.clone(),
        windows: *windows,
        grants: summaries,
        funded_researcher_count: researchers.len(),
        researchers,
        countries,
        usd_equivalent_total: nanos_to_money(total_nanos),
        missing_amount_grants: missing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewGrantee {
    pub profile_id: String,
    pub agencies: BTreeSet<String>,
    pub countries: BTreeSet<String>,
    pub usd_total: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewGranteeSummary {
    pub researchers: Vec<NewGrantee>,
    pub agencies: BTreeSet<String>,
    pub countries: BTreeSet<String>,
    pub usd_total: Money,
}

/// Researchers with no grant before the network period and at least one
/// during or after it. Agencies, countries and totals cover the later grants.
pub fn new_grantees(summary: &FundingSummary) -> NewGranteeSummary {
    let grants: BTreeMap<&str, &GrantSummary> =
        summary.grants.iter().map(|g| (g.grant_id.as_str(), g)).collect();
    let mut researchers = Vec::new();
    let mut agencies = BTreeSet::new();
    let mut countries = BTreeSet::new();
    let mut distinct_grants = BTreeSet::new();
    for r in &summary.researchers {
        if !r.before.is_empty() || r.during_or_after.is_empty() {
            continue;
        }
        let mut g_agencies = BTreeSet::new();
        let mut g_countries = BTreeSet::new();
        let mut cents = 0i64;
        for id in &r.during_or_after {
            let g = grants[id.as_str()];
            g_agencies.insert(g.funder_name.clone());
            g_countries.insert(g.funder_country.clone());
            cents += g.usd_equivalent.map_or(0, |m| m.cents());
            distinct_grants.insert(id.as_str());
        }
        agencies.extend(g_agencies.iter().cloned());
        countries.extend(g_countries.iter().cloned());
        researchers.push(NewGrantee {
            profile_id: r.profile_id.clone(),
            agencies: g_agencies,
            countries: g_countries,
            usd_total: Money::from_cents(cents),
        });
    }
    let usd_total = Money::from_cents(
        distinct_grants
            .iter()
            .map(|id| grants[id].usd_equivalent.map_or(0, |m| m.cents()))
            .sum(),
    );
    NewGranteeSummary {
        researchers,
        agencies,
        countries,
        usd_total,
    }
}

/// Network researchers named on each grant; grants naming none map to 0.
pub fn researchers_per_grant(grants: &[GrantRecord], network_ids: &BTreeSet<String>) -> BTreeMap<String, usize> {
    grants
        .iter()
        .map(|g| {
            (
                g.grant_id.clone(),
                g.researcher_ids.iter().filter(|id| network_ids.contains(*id)).count(),
            )
        })
        .collect()
}
