mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use papertrail::compositional::PeriodWindows;
use papertrail::funding::{
    aggregate_funding, new_grantees, read_grants_csv, researchers_per_grant, write_grants_csv, FundingError,
    RatesTable,
};
use papertrail::model::GrantRecord;
use papertrail::money::Money;
use papertrail::resolve::{resolve, ResearcherProfile};
use papertrail::screening::{screen, ScreeningCriteria};

use common::case_study;

fn profile(id: &str) -> ResearcherProfile {
    ResearcherProfile {
        profile_id: id.into(),
        merged_source_ids: BTreeSet::from([id.to_string()]),
        canonical_name: id.into(),
        ..Default::default()
    }
}

fn grant(id: &str, year: i32, amount: Option<&str>, currency: &str, who: &[&str]) -> GrantRecord {
    GrantRecord {
        grant_id: id.into(),
        funder_name: format!("Funder {id}"),
        funder_country: "US".into(),
        start_year: year,
        amount: amount.map(|a| a.parse().unwrap()),
        currency: currency.into(),
        researcher_ids: who.iter().map(|s| s.to_string()).collect(),
    }
}

fn rates() -> RatesTable {
    RatesTable::read_csv(&b"currency,units_per_usd,as_of\nEUR,0.92,2026-01-23\nRUB,90.0,2026-01-23\n"[..]).unwrap()
}

#[test]
fn shared_grants_count_once_in_the_corpus_total() {
    let profiles = [profile("a"), profile("b")];
    let grants = [grant("g1", 2017, Some("1000.00"), "USD", &["a", "b"])];
    let s = aggregate_funding(&grants, &profiles, &rates(), &PeriodWindows::default()).unwrap();
    assert_eq!(s.usd_equivalent_total, Money::from_cents(100_000));
    assert!(s.researchers.iter().all(|r| r.usd_equivalent == Money::from_cents(100_000)));
    assert_eq!(s.funded_researcher_count, 2);
}

#[test]
fn conversion_rounds_once_per_total() {
    // three grants of 1 EUR: 3/0.92 = 3.2609 -> 3.26, not 3 x 1.09 = 3.27
    let profiles = [profile("a")];
    let grants: Vec<GrantRecord> =
        (0..3).map(|i| grant(&format!("g{i}"), 2020, Some("1"), "EUR", &["a"])).collect();
    let s = aggregate_funding(&grants, &profiles, &rates(), &PeriodWindows::default()).unwrap();
    assert_eq!(s.researchers[0].usd_equivalent, Money::from_cents(326));
}

#[test]
fn missing_rates_and_amounts() {
    let profiles = [profile("a")];
    let bad = [grant("g", 2020, Some("5"), "JPY", &["a"])];
    assert!(matches!(
        aggregate_funding(&bad, &profiles, &rates(), &PeriodWindows::default()),
        Err(FundingError::MissingRate(_))
    ));
    let none = [grant("g", 2020, None, "JPY", &["a"])];
    let s = aggregate_funding(&none, &profiles, &rates(), &PeriodWindows::default()).unwrap();
    assert_eq!(s.missing_amount_grants, vec!["g".to_string()]);
    assert_eq!(s.funded_researcher_count, 1);
    assert_eq!(s.usd_equivalent_total, Money::ZERO);
}

#[test]
fn new_grantees_exclude_researchers_funded_before() {
    let profiles = [profile("old"), profile("new"), profile("none")];
    let grants = [
        grant("b", 2018, Some("10"), "USD", &["old"]),
        grant("l", 2020, Some("10"), "USD", &["old"]),
        grant("n", 2023, Some("20"), "USD", &["new"]),
        grant("x", 2021, Some("99"), "USD", &["outsider"]),
    ];
    let s = aggregate_funding(&grants, &profiles, &rates(), &PeriodWindows::default()).unwrap();
    assert_eq!(s.grants.len(), 3, "unlinked grants are dropped");
    let ng = new_grantees(&s);
    assert_eq!(ng.researchers.iter().map(|r| r.profile_id.as_str()).collect::<Vec<_>>(), vec!["new"]);
    assert_eq!(ng.usd_total, Money::from_cents(2000));
}

#[test]
fn fixture_grants_round_trip_and_link() {
    let f = case_study();
    let mut buf = Vec::new();
    write_grants_csv(&f.grants, &mut buf).unwrap();
    assert_eq!(read_grants_csv(&buf[..]).unwrap(), f.grants);
    let (included, _) = screen(&f.records, &ScreeningCriteria::default());
    let profiles = resolve(&included, &f.merges).unwrap();
    let ids: BTreeSet<String> = profiles.iter().flat_map(|p| p.merged_source_ids.iter().cloned()).collect();
    let per = researchers_per_grant(&f.grants, &ids);
    assert_eq!(per["G-SHARED"], 4);
    assert_eq!(per["G-X-01"], 0);
    let s = aggregate_funding(&f.grants, &profiles, &f.rates, &PeriodWindows::default()).unwrap();
    assert_eq!(s.funded_researcher_count, 30);
    assert_eq!(s.countries.len(), 13);
}

proptest! {
    #[test]
    fn totals_are_permutation_invariant(
        amounts in prop::collection::vec((1u64..1_000_000_000, 0usize..3, 0usize..4, 2015i32..2026), 1..25),
        perm_seed in any::<u64>(),
    ) {
        let currencies = ["USD", "EUR", "RUB"];
        let people = ["p0", "p1", "p2", "p3"];
        let profiles: Vec<ResearcherProfile> = people.iter().map(|p| profile(p)).collect();
        let grants: Vec<GrantRecord> = amounts
            .iter()
            .enumerate()
            .map(|(i, &(cents, c, who, year))| {
                let amount = format!("{}.{:02}", cents / 100, cents % 100);
                grant(&format!("g{i}"), year, Some(&amount), currencies[c], &[people[who], people[(who + 1) % 4]])
            })
            .collect();
        let w = PeriodWindows::default();
        let base = aggregate_funding(&grants, &profiles, &rates(), &w).unwrap();
        let mut shuffled = grants.clone();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(perm_seed);
        rand::seq::SliceRandom::shuffle(&mut shuffled[..], &mut rng);
        let other = aggregate_funding(&shuffled, &profiles, &rates(), &w).unwrap();
        prop_assert_eq!(base.usd_equivalent_total, other.usd_equivalent_total);
        prop_assert_eq!(&base.researchers, &other.researchers);
        prop_assert_eq!(new_grantees(&base), new_grantees(&other));
    }
}
