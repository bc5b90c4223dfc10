//! Exhaustive search over prime fields for trinomials `γ + x^e2 + x^e3` with
//! many roots, reduced by the substitution orbits `x -> x^m`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, primes_between};
use crate::error::{Error, Result};
use crate::field::make_field;

pub const DEFAULT_SEARCH_LIMIT: u64 = 10_000;
pub const BRUTE_ORACLE_LIMIT: u64 = 60;

/// Exponent range: strict is `0 < e2 < e3 <= p - 2`, extended allows
/// `e3 = p - 1` (which acts as the constant 1 on units).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Strict,
    Extended,
}

impl Convention {
    fn top_exponent(self, p: u64) -> u64 {
        match self {
            Convention::Strict => p - 2,
            Convention::Extended => p - 1,
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Convention::Strict),
            "extended" => Ok(Convention::Extended),
            other => Err(Error::InvalidArgument(format!("unknown convention {other:?}"))),
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Convention::Strict => "strict",
            Convention::Extended => "extended",
        })
    }
}

/// `γ + x^e2 + x^e3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub gamma: u64,
    pub e2: u64,
    pub e3: u64,
}

impl Witness {
    fn key(&self) -> (u64, u64, u64) {
        (self.e2, self.e3, self.gamma)
    }

    /// Roots in `F_p^*` by direct evaluation with modular powering.
    pub fn count_roots(&self, p: u64) -> u64 {
        (1..p)
            .filter(|&x| {
                let v = self.gamma
                    + crate::arith::pow_mod(x, self.e2, p)
                    + crate::arith::pow_mod(x, self.e3, p);
                v.is_multiple_of(p)
            })
            .count() as u64
    }

    pub fn polynomial_text(&self) -> String {
        format!("{} + x^{} + x^{}", self.gamma, self.e2, self.e3)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub p: u64,
    pub convention: Convention,
    pub achieved_counts: BTreeSet<u64>,
    pub max_count: u64,
    pub witness: Option<Witness>,
    /// Lexicographically least witness for every achieved count.
    pub witnesses: BTreeMap<u64, Witness>,
    pub orbits_searched: u64,
}

impl ExtremalRecord {
    fn empty(p: u64, convention: Convention) -> Self {
        ExtremalRecord {
            p,
            convention,
            achieved_counts: BTreeSet::new(),
            max_count: 0,
            witness: None,
            witnesses: BTreeMap::new(),
            orbits_searched: 0,
        }
    }
}

/// Orbit representatives `(e2, e3)` with `gcd(e2, e3, p - 1) = 1`, ascending.
/// The top exponent `p - 1` stands for residue 0.
pub fn orbit_representatives(p: u64, convention: Convention) -> Vec<(u64, u64)> {
    let n = p - 1;
    let top = convention.top_exponent(p);
    if top < 2 {
        return Vec::new();
    }
    let multipliers: Vec<u64> = (1..n).filter(|&m| gcd(m, n) == 1).collect();
    let width = n as usize + 1;
    let mut seen = vec![false; width * width];
    let mut reps = Vec::new();
    for e2 in 1..top {
        for e3 in e2 + 1..=top {
            if seen[e2 as usize * width + e3 as usize] || gcd(gcd(e2, e3), n) != 1 {
                continue;
            }
            reps.push((e2, e3));
            for &m in &multipliers {
                let a = as_exponent(m * e2 % n, n);
                let b = as_exponent(m * e3 % n, n);
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                seen[lo as usize * width + hi as usize] = true;
            }
        }
    }
    reps
}

fn as_exponent(residue: u64, n: u64) -> u64 {
    if residue == 0 {
        n
    } else {
        residue
    }
}

/// Per-pair results folded across orbit representatives.
#[derive(Clone, Debug)]
struct Tally {
    best: Vec<Option<Witness>>,
}

impl Tally {
    fn new(p: u64) -> Self {
        Tally {
            best: vec![None; p as usize],
        }
    }

    fn offer(&mut self, count: u64, w: Witness) {
        let slot = &mut self.best[count as usize];
        match slot {
            Some(old) if old.key() <= w.key() => {}
            _ => *slot = Some(w),
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (count, w) in other.best.into_iter().enumerate() {
            if let Some(w) = w {
                self.offer(count as u64, w);
            }
        }
        self
    }
}

/// One counter per field value, reused across exponent pairs.
struct Histogram {
    counts: Vec<u32>,
}

impl Histogram {
    fn new(p: u64) -> Self {
        Histogram {
            counts: vec![0; p as usize],
        }
    }

    /// Counts `x in F_p^*` by `v = -(x^e2 + x^e3)`, then offers every `γ != 0`
    /// with its root count `counts[γ]`.
    fn scan(&mut self, p: u64, exp: &[u32], e2: u64, e3: u64, tally: &mut Tally) {
        let n = p - 1;
        let (s2, s3) = (e2 % n, e3 % n);
        let (mut i2, mut i3) = (0u64, 0u64);
        for _ in 0..n {
            let sum = exp[i2 as usize] as u64 + exp[i3 as usize] as u64;
            let v = (2 * p - sum) % p;
            self.counts[v as usize] += 1;
            i2 += s2;
            if i2 >= n {
                i2 -= n;
            }
            i3 += s3;
            if i3 >= n {
                i3 -= n;
            }
        }
        for gamma in 1..p {
            let c = self.counts[gamma as usize];
            tally.offer(c as u64, Witness { gamma, e2, e3 });
        }
        self.counts.fill(0);
    }
}

/// Root-count profile of the family `γ + x^e2 + x^e3` over `F_p`.
pub fn max_roots_for_prime(p: u64, convention: Convention) -> Result<ExtremalRecord> {
    max_roots_for_prime_with(p, convention, DEFAULT_SEARCH_LIMIT)
}

pub fn max_roots_for_prime_with(p: u64, convention: Convention, limit: u64) -> Result<ExtremalRecord> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > limit {
        return Err(Error::Capability(format!("p = {p} exceeds the search limit {limit}")));
    }
    if p == 2 {
        return Ok(ExtremalRecord::empty(p, convention));
    }
    let field = make_field(p, 1)?;
    let table = field.dlog_table()?;
    let exp = table.exp_slice();
    let reps = orbit_representatives(p, convention);

    const BLOCK: usize = 64;
    let tally = reps
        .par_chunks(BLOCK)
        .fold(
            || (Histogram::new(p), Tally::new(p)),
            |(mut hist, mut tally), block| {
                for &(e2, e3) in block {
                    hist.scan(p, exp, e2, e3, &mut tally);
                }
                (hist, tally)
            },
        )
        .map(|(_, tally)| tally)
        .reduce(|| Tally::new(p), Tally::merge);

    let witnesses: BTreeMap<u64, Witness> = tally
        .best
        .iter()
        .enumerate()
        .filter_map(|(c, w)| w.map(|w| (c as u64, w)))
        .collect();
    let achieved_counts: BTreeSet<u64> = witnesses.keys().copied().collect();
    let max_count = achieved_counts.last().copied().unwrap_or(0);
    let witness = witnesses.get(&max_count).copied();
    if let Some(w) = witness {
        let direct = w.count_roots(p);
        if direct != max_count || w.gamma == 0 || gcd(gcd(w.e2, w.e3), p - 1) != 1 {
            return Err(Error::Verification(format!(
                "witness {} has {direct} roots in F_{p}, expected {max_count}",
                w.polynomial_text()
            )));
        }
    }
    Ok(ExtremalRecord {
        p,
        convention,
        achieved_counts,
        max_count,
        witness,
        witnesses,
        orbits_searched: reps.len() as u64,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub p: u64,
    pub convention: Convention,
    pub max_count: u64,
    pub achieved_counts: BTreeSet<u64>,
}

/// Every trinomial `c1 + c2 x^e2 + x^e3` with nonzero coefficients and
/// `gcd(e2, e3, p - 1) = 1`, without orbit reduction or coefficient
/// normalization beyond making the top coefficient 1.
pub fn brute_oracle_max(p: u64, convention: Convention) -> Result<OracleResult> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > BRUTE_ORACLE_LIMIT {
        return Err(Error::Capability(format!(
            "brute oracle is limited to p <= {BRUTE_ORACLE_LIMIT}, got {p}"
        )));
    }
    let mut achieved = BTreeSet::new();
    if p > 2 {
        let top = convention.top_exponent(p);
        let mut counts = vec![0u64; p as usize];
        for e2 in 1..top {
            for e3 in e2 + 1..=top {
                if gcd(gcd(e2, e3), p - 1) != 1 {
                    continue;
                }
                let x2: Vec<u64> = (1..p).map(|x| crate::arith::pow_mod(x, e2, p)).collect();
                let x3: Vec<u64> = (1..p).map(|x| crate::arith::pow_mod(x, e3, p)).collect();
                for c2 in 1..p {
                    counts.iter_mut().for_each(|c| *c = 0);
                    for (a, b) in x2.iter().zip(&x3) {
                        let v = (2 * p * p - c2 * a - b) % p;
                        counts[v as usize] += 1;
                    }
                    achieved.extend(counts[1..].iter().copied());
                }
            }
        }
    }
    Ok(OracleResult {
        p,
        convention,
        max_count: achieved.last().copied().unwrap_or(0),
        achieved_counts: achieved,
    })
}

/// One JSON line of the search log.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchLogEntry {
    pub p: u64,
    pub convention: Convention,
    pub achieved_counts: BTreeSet<u64>,
    pub max_count: u64,
    pub witness: Option<Witness>,
    pub witnesses: BTreeMap<u64, Witness>,
    pub orbits_searched: u64,
    pub wall_time: f64,
}

impl SearchLogEntry {
    fn new(r: ExtremalRecord, wall_time: f64) -> Self {
        SearchLogEntry {
            p: r.p,
            convention: r.convention,
            achieved_counts: r.achieved_counts,
            max_count: r.max_count,
            witness: r.witness,
            witnesses: r.witnesses,
            orbits_searched: r.orbits_searched,
            wall_time,
        }
    }

    fn into_record(self) -> ExtremalRecord {
        ExtremalRecord {
            p: self.p,
            convention: self.convention,
            achieved_counts: self.achieved_counts,
            max_count: self.max_count,
            witness: self.witness,
            witnesses: self.witnesses,
            orbits_searched: self.orbits_searched,
        }
    }
}

/// Append-only JSON-lines checkpoint keyed by `(p, convention)`.
#[derive(Debug)]
pub struct SearchLog {
    path: Option<PathBuf>,
    records: BTreeMap<(Convention, u64), ExtremalRecord>,
}

impl SearchLog {
    pub fn in_memory() -> Self {
        SearchLog {
            path: None,
            records: BTreeMap::new(),
        }
    }

    /// Loads existing entries; a missing file is an empty log. Later
    /// duplicates of a key are ignored.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut records = BTreeMap::new();
        match File::open(&path) {
            Ok(file) => {
                for (i, line) in BufReader::new(file).lines().enumerate() {
                    let line = line.map_err(|e| Error::io(&path, e))?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let entry: SearchLogEntry = serde_json::from_str(&line).map_err(|source| {
                        Error::LogFormat {
                            path: path.clone(),
                            line: i + 1,
                            source,
                        }
                    })?;
                    let r = entry.into_record();
                    records.entry((r.convention, r.p)).or_insert(r);
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(Error::io(&path, e)),
        }
        Ok(SearchLog {
            path: Some(path),
            records,
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, p: u64, convention: Convention) -> Option<&ExtremalRecord> {
        self.records.get(&(convention, p))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records of one convention, ascending by `p`.
    pub fn records(&self, convention: Convention) -> impl Iterator<Item = &ExtremalRecord> {
        self.records
            .range((convention, 0)..=(convention, u64::MAX))
            .map(|(_, r)| r)
    }

    /// Stores a record, appending it to the file if the key is new.
    pub fn insert(&mut self, record: ExtremalRecord, wall_time: f64) -> Result<bool> {
        let key = (record.convention, record.p);
        if self.records.contains_key(&key) {
            return Ok(false);
        }
        if let Some(path) = &self.path {
            let entry = SearchLogEntry::new(record.clone(), wall_time);
            let mut line = serde_json::to_string(&entry).expect("records serialize");
            line.push('\n');
            let mut file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| Error::io(path, e))?;
            file.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))?;
        }
        self.records.insert(key, record);
        Ok(true)
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub convention: Convention,
    pub workers: usize,
    pub limit: u64,
    pub progress: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            convention: Convention::Strict,
            workers: 0,
            limit: DEFAULT_SEARCH_LIMIT,
            progress: false,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchSummary {
    pub primes: usize,
    pub computed: usize,
    pub resumed: usize,
}

/// Runs every prime in `[p_min, p_max]` not already in the log, ascending.
/// Each finished prime is appended before the next starts.
pub fn search_range(p_min: u64, p_max: u64, options: &SearchOptions, log: &mut SearchLog) -> Result<SearchSummary> {
    if p_min > p_max {
        return Err(Error::InvalidArgument(format!("empty range [{p_min}, {p_max}]")));
    }
    if p_max > options.limit {
        return Err(Error::Capability(format!(
            "p_max = {p_max} exceeds the search limit {}",
            options.limit
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let primes = primes_between(p_min, p_max);
    let mut summary = SearchSummary {
        primes: primes.len(),
        ..Default::default()
    };
    let started = Instant::now();
    let mut last_report = Instant::now();
    for (i, &p) in primes.iter().enumerate() {
        if log.get(p, options.convention).is_some() {
            summary.resumed += 1;
            continue;
        }
        let t0 = Instant::now();
        let record = pool.install(|| max_roots_for_prime_with(p, options.convention, options.limit))?;
        log.insert(record, t0.elapsed().as_secs_f64())?;
        summary.computed += 1;
        if options.progress && (last_report.elapsed().as_secs_f64() >= 2.0 || i + 1 == primes.len()) {
            eprintln!(
                "search: p = {p} ({}/{} primes, {:.1}s)",
                i + 1,
                primes.len(),
                started.elapsed().as_secs_f64()
            );
            last_report = Instant::now();
        }
    }
    Ok(summary)
}

/// Least prime `<= p_max` at which some admissible trinomial has exactly `n`
/// roots, extending the log as needed.
pub fn least_prime_with_exactly_n(
    n: u64,
    p_max: u64,
    options: &SearchOptions,
    log: &mut SearchLog,
) -> Result<(u64, Witness)> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut p = 2;
    while p <= p_max {
        let record = match log.get(p, options.convention) {
            Some(r) => r,
            None => {
                let t0 = Instant::now();
                let r = max_roots_for_prime_with(p, options.convention, options.limit)?;
                log.insert(r, t0.elapsed().as_secs_f64())?;
                log.get(p, options.convention).expect("just inserted")
            }
        };
        if let Some(w) = record.witnesses.get(&n) {
            return Ok((p, *w));
        }
        p = crate::arith::next_prime(p + 1);
    }
    Err(Error::NotFound(format!("no prime <= {p_max} has a trinomial with exactly {n} roots")))
}

/// Row of the `p_n` table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: u64,
    pub p_n: Option<u64>,
    pub witness: Option<Witness>,
}

/// `p_n` for `1 <= n <= n_max` from the records of one convention, which must
/// cover every prime up to the largest prime searched.
pub fn p_n_table(log: &SearchLog, convention: Convention, n_max: u64) -> Vec<TableRow> {
    let mut rows: Vec<TableRow> = (1..=n_max)
        .map(|n| TableRow {
            n,
            p_n: None,
            witness: None,
        })
        .collect();
    let mut open: HashSet<u64> = (1..=n_max).collect();
    for record in log.records(convention) {
        for (&n, w) in record.witnesses.range(1..=n_max) {
            if open.remove(&n) {
                let row = &mut rows[n as usize - 1];
                row.p_n = Some(record.p);
                row.witness = Some(*w);
            }
        }
        if open.is_empty() {
            break;
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_primes() {
        let r = max_roots_for_prime(3, Convention::Extended).unwrap();
        assert_eq!(r.max_count, 1);
        assert_eq!(r.witness, Some(Witness { gamma: 1, e2: 1, e3: 2 }));
        let r = max_roots_for_prime(3, Convention::Strict).unwrap();
        assert_eq!((r.max_count, r.witness, r.orbits_searched), (0, None, 0));
        let r = max_roots_for_prime(2, Convention::Extended).unwrap();
        assert!(r.achieved_counts.is_empty());
    }

    #[test]
    fn p5_has_two_roots() {
        for conv in [Convention::Strict, Convention::Extended] {
            let r = max_roots_for_prime(5, conv).unwrap();
            assert!(r.achieved_counts.contains(&2));
            assert_eq!(r.max_count, 2);
        }
        // 3 + x + x^2 vanishes at 1 and 3
        let w = Witness { gamma: 3, e2: 1, e3: 2 };
        assert_eq!(w.count_roots(5), 2);
        let r = max_roots_for_prime(5, Convention::Strict).unwrap();
        assert_eq!(r.witnesses[&2], w);
    }

    #[test]
    fn orbits_partition_pairs() {
        for p in [7u64, 13, 31, 37] {
            let n = p - 1;
            let reps = orbit_representatives(p, Convention::Extended);
            let mut covered = HashSet::new();
            let units: Vec<u64> = (1..n).filter(|&m| gcd(m, n) == 1).collect();
            let mut total = 0;
            for &(a, b) in &reps {
                let orbit: HashSet<(u64, u64)> = units
                    .iter()
                    .map(|&m| {
                        let x = as_exponent(m * a % n, n);
                        let y = as_exponent(m * b % n, n);
                        (x.min(y), x.max(y))
                    })
                    .collect();
                assert_eq!(orbit.iter().min(), Some(&(a, b)));
                total += orbit.len();
                covered.extend(orbit);
            }
            // orbits are disjoint
            assert_eq!(total, covered.len());
            let admissible: HashSet<(u64, u64)> = (1..n)
                .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
                .filter(|&(a, b)| gcd(gcd(a, b), n) == 1)
                .collect();
            assert_eq!(covered, admissible, "p = {p}");
        }
    }

    #[test]
    fn oracle_small_primes() {
        assert_eq!(brute_oracle_max(3, Convention::Extended).unwrap().max_count, 1);
        assert_eq!(brute_oracle_max(5, Convention::Strict).unwrap().max_count, 2);
        assert_eq!(brute_oracle_max(11, Convention::Strict).unwrap().max_count, 3);
        assert!(brute_oracle_max(61, Convention::Strict).unwrap_err().is_capability());
    }

    #[test]
    fn log_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.jsonl");
        let opts = SearchOptions {
            convention: Convention::Extended,
            workers: 1,
            ..Default::default()
        };
        let mut log = SearchLog::open(&path).unwrap();
        let s = search_range(3, 50, &opts, &mut log).unwrap();
        assert_eq!((s.primes, s.computed), (14, 14));
        let mut again = SearchLog::open(&path).unwrap();
        assert_eq!(again.len(), 14);
        let s = search_range(3, 50, &opts, &mut again).unwrap();
        assert_eq!((s.computed, s.resumed), (0, 14));
        assert_eq!(again.get(47, Convention::Extended), log.get(47, Convention::Extended));
        let lines = std::fs::read_to_string(&path).unwrap().lines().count();
        assert_eq!(lines, 14);
    }

    #[test]
    fn least_prime_small() {
        let mut log = SearchLog::in_memory();
        let opts = SearchOptions::default();
        assert_eq!(least_prime_with_exactly_n(4, 100, &opts, &mut log).unwrap().0, 23);
        assert_eq!(least_prime_with_exactly_n(3, 100, &opts, &mut log).unwrap().0, 11);
        assert!(matches!(
            least_prime_with_exactly_n(8, 100, &opts, &mut log),
            Err(Error::NotFound(_))
        ));
    }
}
