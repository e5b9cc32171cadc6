//! Compositional data: binning publication years into periods, closing
//! counts to proportions, zero replacement and the centered log-ratio map.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par::{self, Execution};

#[derive(Debug, Error, PartialEq)]
pub enum CompositionError {
    #[error("all counts are zero")]
    AllZero,
    #[error("component {index} is not strictly positive ({value})")]
    NonPositiveComponent { index: usize, value: f64 },
    #[error("composition has no parts")]
    Empty,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WindowError {
    #[error("window '{0}' is not of the form START-END")]
    Syntax(String),
    #[error("expected three windows, got {0}")]
    WrongCount(usize),
    #[error("window {0} ends before it starts")]
    Reversed(String),
    #[error("windows must be contiguous and ordered ({0})")]
    NotContiguous(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub start: i32,
    pub end: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32) -> Self {
        YearRange { start, end }
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start, self.end)
    }
}

impl FromStr for YearRange {
    type Err = WindowError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .trim()
            .split_once('-')
            .ok_or_else(|| WindowError::Syntax(s.to_string()))?;
        let parse = |v: &str| v.trim().parse::<i32>().map_err(|_| WindowError::Syntax(s.to_string()));
        let r = YearRange::new(parse(a)?, parse(b)?);
        if r.end < r.start {
            return Err(WindowError::Reversed(s.to_string()));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Period {
    Before,
    During,
    After,
}

impl Period {
    pub const ALL: [Period; 3] = [Period::Before, Period::During, Period::After];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Three contiguous year windows. Years before the first window count as
/// `Before` and years after the last as `After`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PeriodWindows {
    pub before: YearRange,
    pub during: YearRange,
    pub after: YearRange,
}

impl Default for PeriodWindows {
    fn default() -> Self {
        PeriodWindows {
            before: YearRange::new(2015, 2018),
            during: YearRange::new(2019, 2022),
            after: YearRange::new(2023, 2025),
        }
    }
}

impl PeriodWindows {
    pub fn new(before: YearRange, during: YearRange, after: YearRange) -> Result<Self, WindowError> {
        let w = PeriodWindows { before, during, after };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<(), WindowError> {
        for r in [self.before, self.during, self.after] {
            if r.end < r.start {
                return Err(WindowError::Reversed(r.to_string()));
            }
        }
        if self.before.end + 1 != self.during.start || self.during.end + 1 != self.after.start {
            return Err(WindowError::NotContiguous(self.to_string()));
        }
        Ok(())
    }

    pub fn classify(&self, year: i32) -> Period {
        if year <= self.before.end {
            Period::Before
        } else if year <= self.during.end {
            Period::During
        } else {
            Period::After
        }
    }
}

impl fmt::Display for PeriodWindows {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.before, self.during, self.after)
    }
}

impl FromStr for PeriodWindows {
    type Err = WindowError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(WindowError::WrongCount(parts.len()));
        }
        PeriodWindows::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?)
    }
}

impl TryFrom<String> for PeriodWindows {
    type Error = WindowError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PeriodWindows> for String {
    fn from(w: PeriodWindows) -> String {
        w.to_string()
    }
}

/// Publication counts per period: `[before, during, after]`.
pub fn bin_counts(
    pubs_by_year: &BTreeMap<i32, u32>,
    windows: &PeriodWindows,
) -> Result<[u64; 3], CompositionError> {
    let mut counts = [0u64; 3];
    for (&year, &n) in pubs_by_year {
        counts[windows.classify(year).index()] += u64::from(n);
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(CompositionError::AllZero);
    }
    Ok(counts)
}

/// Non-negative parts summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition(Vec<f64>);

impl Composition {
    /// Closes counts to proportions; zeros stay zero.
    pub fn from_counts(counts: &[u64]) -> Result<Composition, CompositionError> {
        if counts.is_empty() {
            return Err(CompositionError::Empty);
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(CompositionError::AllZero);
        }
        Ok(Composition(
            counts.iter().map(|&c| c as f64 / total as f64).collect(),
        ))
    }

    /// Closes arbitrary non-negative parts.
    pub fn from_parts(parts: &[f64]) -> Result<Composition, CompositionError> {
        if parts.is_empty() {
            return Err(CompositionError::Empty);
        }
        if let Some((index, &value)) = parts.iter().enumerate().find(|(_, v)| v.is_nan() || **v < 0.0) {
            return Err(CompositionError::NonPositiveComponent { index, value });
        }
        let total: f64 = parts.iter().sum();
        if total <= 0.0 {
            return Err(CompositionError::AllZero);
        }
        Ok(Composition(parts.iter().map(|v| v / total).collect()))
    }

    pub fn parts(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|&v| v > 0.0)
    }
}

/// How zero counts are made positive before taking logs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum ZeroReplacement {
    /// Each zero becomes `delta = pseudo_count / total`, capped at half the
    /// uniform share `1 / (2 D)`; non-zero parts shrink by `1 - z * delta`.
    Multiplicative { pseudo_count: f64 },
}

impl Default for ZeroReplacement {
    fn default() -> Self {
        ZeroReplacement::Multiplicative { pseudo_count: 0.5 }
    }
}

impl ZeroReplacement {
    pub fn delta(&self, total: u64, parts: usize) -> f64 {
        match *self {
            ZeroReplacement::Multiplicative { pseudo_count } => {
                (pseudo_count / total as f64).min(0.5 / parts as f64)
            }
        }
    }
}

/// Strictly positive composition from counts; identical to plain closure
/// when no count is zero.
pub fn to_composition(counts: &[u64], strategy: ZeroReplacement) -> Result<Composition, CompositionError> {
    let raw = Composition::from_counts(counts)?;
    let zeros = counts.iter().filter(|&&c| c == 0).count();
    if zeros == 0 {
        return Ok(raw);
    }
    let total: u64 = counts.iter().sum();
    let delta = strategy.delta(total, counts.len());
    let shrink = 1.0 - zeros as f64 * delta;
    Ok(Composition(
        raw.0
            .iter()
            .map(|&p| if p == 0.0 { delta } else { p * shrink })
            .collect(),
    ))
}

/// Image of a composition under the centered log-ratio map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClrVector(Vec<f64>);

impl ClrVector {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// `z_i = ln c_i - mean_j ln c_j`.
pub fn clr(c: &Composition) -> Result<ClrVector, CompositionError> {
    if c.is_empty() {
        return Err(CompositionError::Empty);
    }
    if let Some((index, &value)) = c.0.iter().enumerate().find(|(_, v)| v.is_nan() || **v <= 0.0) {
        return Err(CompositionError::NonPositiveComponent { index, value });
    }
    let logs: Vec<f64> = c.0.iter().map(|v| v.ln()).collect();
    // centre on the first log first so equal parts map to exact zeros
    let shifted: Vec<f64> = logs.iter().map(|l| l - logs[0]).collect();
    let mean = shifted.iter().sum::<f64>() / shifted.len() as f64;
    Ok(ClrVector(shifted.into_iter().map(|l| l - mean).collect()))
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn pairwise_distance(a: &ClrVector, b: &ClrVector) -> f64 {
    euclidean(&a.0, &b.0)
}

/// Dense symmetric distance matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("diagonal entry {0} is not zero")]
    NonZeroDiagonal(usize),
    #[error("entry ({0}, {1}) is negative or not finite")]
    BadEntry(usize, usize),
}

impl DistanceMatrix {
    /// Euclidean distances between all pairs of points.
    pub fn from_points(points: &[Vec<f64>], exec: Execution) -> DistanceMatrix {
        let n = points.len();
        let mut data = vec![0.0; n * n];
        par::fill_rows(exec, &mut data, n, |i, row| {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = if i == j { 0.0 } else { euclidean(&points[i], &points[j]) };
            }
        });
        DistanceMatrix { n, data }
    }

    /// Checked construction from a row-major square matrix.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<DistanceMatrix, MatrixError> {
        if data.len() != n * n {
            return Err(MatrixError::Shape {
                expected: n * n,
                got: data.len(),
            });
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(MatrixError::NonZeroDiagonal(i));
            }
            for j in 0..n {
                let v = data[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(MatrixError::BadEntry(i, j));
                }
                if v != data[j * n + i] {
                    return Err(MatrixError::NotSymmetric(i, j));
                }
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binning() {
        let w = PeriodWindows::default();
        let m = |pairs: &[(i32, u32)]| pairs.iter().copied().collect::<BTreeMap<_, _>>();
        assert_eq!(bin_counts(&m(&[(2016, 1), (2020, 3), (2024, 1)]), &w), Ok([1, 3, 1]));
        assert_eq!(bin_counts(&m(&[(2014, 2), (2020, 1)]), &w), Ok([2, 1, 0]));
        assert_eq!(bin_counts(&m(&[(2022, 1)]), &w), Ok([0, 1, 0]));
        assert_eq!(bin_counts(&m(&[(2023, 1), (2031, 2)]), &w), Ok([0, 0, 3]));
        assert_eq!(bin_counts(&m(&[]), &w), Err(CompositionError::AllZero));
        assert_eq!(bin_counts(&m(&[(2020, 0)]), &w), Err(CompositionError::AllZero));
    }

    #[test]
    fn windows_parse_and_validate() {
        let w: PeriodWindows = "2015-2018,2019-2022,2023-2025".parse().unwrap();
        assert_eq!(w, PeriodWindows::default());
        assert_eq!(w.to_string(), "2015-2018,2019-2022,2023-2025");
        assert!(matches!(
            "2015-2018,2020-2022,2023-2025".parse::<PeriodWindows>(),
            Err(WindowError::NotContiguous(_))
        ));
        assert!(matches!("2015-2018,2019-2022".parse::<PeriodWindows>(), Err(WindowError::WrongCount(2))));
        assert!(matches!("2018-2015,2019-2022,2023-2025".parse::<PeriodWindows>(), Err(WindowError::Reversed(_))));
        assert_eq!(w.classify(2018), Period::Before);
        assert_eq!(w.classify(2022), Period::During);
        assert_eq!(w.classify(2023), Period::After);
    }

    #[test]
    fn compositions() {
        let s = ZeroReplacement::default();
        let c = to_composition(&[1, 1, 1], s).unwrap();
        assert!(c.parts().iter().all(|&p| p == 1.0 / 3.0));
        assert_eq!(to_composition(&[2, 3, 5], s).unwrap().parts(), &[0.2, 0.3, 0.5]);
        assert_eq!(to_composition(&[0, 4, 0], s).unwrap().parts(), &[0.125, 0.75, 0.125]);
        assert_eq!(to_composition(&[0, 0, 0], s), Err(CompositionError::AllZero));
    }

    #[test]
    fn single_publication_stays_positive() {
        let c = to_composition(&[0, 1, 0], ZeroReplacement::default()).unwrap();
        assert!(c.is_strictly_positive());
        assert!((c.parts().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((c.parts()[0] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn clr_values() {
        let z = clr(&Composition::from_parts(&[1.0, 1.0, 1.0]).unwrap()).unwrap();
        assert!(z.coords().iter().all(|v| v.abs() < 1e-15));
        // hand-computed from five-digit log tables
        let z = clr(&Composition::from_parts(&[0.218, 0.497, 0.285]).unwrap()).unwrap();
        let expected = [-0.36403, 0.46006, -0.09604];
        for (a, b) in z.coords().iter().zip(expected) {
            assert!((a - b).abs() < 1e-3, "{a} vs {b}");
        }
        let zero = Composition::from_counts(&[0, 1, 1]).unwrap();
        assert!(matches!(clr(&zero), Err(CompositionError::NonPositiveComponent { index: 0, .. })));
    }

    #[test]
    fn clr_permutation_equivariant() {
        let a = clr(&Composition::from_parts(&[0.1, 0.3, 0.6]).unwrap()).unwrap();
        let b = clr(&Composition::from_parts(&[0.6, 0.1, 0.3]).unwrap()).unwrap();
        assert_eq!(a.coords()[0], b.coords()[1]);
        assert_eq!(a.coords()[1], b.coords()[2]);
        assert_eq!(a.coords()[2], b.coords()[0]);
    }

    #[test]
    fn distances() {
        let a = ClrVector(vec![0.0, 0.0, 0.0]);
        let b = ClrVector(vec![1.0, -1.0, 0.0]);
        assert_eq!(pairwise_distance(&a, &a), 0.0);
        assert_eq!(pairwise_distance(&a, &b), 2f64.sqrt());
        let m = DistanceMatrix::from_points(&[vec![0.0], vec![3.0], vec![4.0]], Execution::Sequential);
        assert_eq!(m.get(0, 2), 4.0);
        assert_eq!(m.get(2, 1), 1.0);
        assert!(DistanceMatrix::from_rows(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_rows(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
    }
}
