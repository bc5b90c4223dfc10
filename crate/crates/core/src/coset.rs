//! Coset structure of root sets inside the cyclic group `F_q^*`.
//!
//! With a generator `g`, the unique subgroup of order `d | q-1` is
//! `H_d = <g^m>`, `m = (q-1)/d`, and `x` lies in the coset `g^r H_d` exactly
//! when `dlog(x) = r (mod m)`. Everything here works on discrete-log indices.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{big_pow, divisors, factorize, floor_root, gcd, isqrt};
use crate::error::{Error, Result};
use crate::field::{Element, Field};
use crate::sparse::{RootSet, SparsePolynomial};

/// Exact minimum covers are attempted up to this many roots.
pub const EXACT_COVER_LIMIT: usize = 64;

/// `gcd(e_1, ..., e_t, q - 1)`.
pub fn delta_of(exponents: &[u64], q: u64) -> u64 {
    exponents.iter().fold(q - 1, |acc, &e| gcd(acc, e))
}

/// `delta(f)` of the canonical form of `f`.
pub fn delta(f: &SparsePolynomial) -> u64 {
    delta_of(&f.canonicalize().exponents(), f.field().q())
}

/// A coset `g^residue * H_order` of the order-`order` subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Coset {
    /// Order of the subgroup (and size of the coset).
    pub order: u64,
    /// Least discrete-log index in the coset, in `[0, (q-1)/order)`.
    pub residue: u64,
    #[serde(skip)]
    q: u64,
}

impl Coset {
    /// Index of the subgroup in `F_q^*`.
    pub fn modulus(&self) -> u64 {
        (self.q - 1) / self.order
    }

    pub fn contains_index(&self, index: u64) -> bool {
        index % self.modulus() == self.residue
    }

    pub fn contains(&self, field: &Field, x: Element) -> Result<bool> {
        if x.is_zero() {
            return Ok(false);
        }
        Ok(self.contains_index(field.dlog(x)?))
    }

    /// Discrete-log indices of the members, ascending.
    pub fn member_indices(&self) -> impl Iterator<Item = u64> {
        let (m, residue) = (self.modulus(), self.residue);
        (0..self.order).map(move |j| residue + j * m)
    }

    pub fn members(&self, field: &Field) -> Result<Vec<Element>> {
        let table = field.dlog_table()?;
        let mut out: Vec<Element> = self.member_indices().map(|i| table.power(i)).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Canonical representative `g^residue`.
    pub fn representative(&self, field: &Field) -> Element {
        field.pow_u(field.generator(), self.residue)
    }
}

/// The `(q-1)/d` cosets of the order-`d` subgroup, in residue order.
pub fn subgroup_cosets(field: &Field, d: u64) -> Result<impl Iterator<Item = Coset>> {
    let n = field.q() - 1;
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::InvalidArgument(format!("{d} does not divide q - 1 = {n}")));
    }
    let q = field.q();
    Ok((0..n / d).map(move |residue| Coset { order: d, residue, q }))
}

/// Per residue class modulo `m = (q-1)/d`: whether the whole coset lies in the
/// index set.
fn full_residues(indices: &[u64], n: u64, d: u64, counts: &mut Vec<u32>) -> Vec<u64> {
    let m = (n / d) as usize;
    counts.clear();
    counts.resize(m, 0);
    for &i in indices {
        counts[(i % m as u64) as usize] += 1;
    }
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c as u64 == d)
        .map(|(r, _)| r as u64)
        .collect()
}

/// `C(f)`: the largest coset of any subgroup of `F_q^*` inside the root set.
/// Returns 0 for an empty root set.
pub fn c_exact(z: &RootSet) -> Result<u64> {
    match z.count() {
        0 => return Ok(0),
        1 => return Ok(1),
        _ => {}
    }
    let indices = z.indices()?;
    let n = z.field.q() - 1;
    let mut counts = Vec::new();
    for d in divisors(n).into_iter().rev() {
        if d as usize > indices.len() {
            continue;
        }
        if !full_residues(&indices, n, d, &mut counts).is_empty() {
            return Ok(d);
        }
    }
    unreachable!("singletons are cosets of the trivial subgroup")
}

/// Largest `k | q-1` such that every exponent shares its residue mod `k` with
/// some other exponent; an upper bound on `C(f)`.
pub fn d_bound(exponents: &[u64], q: u64) -> Result<u64> {
    if exponents.len() < 2 {
        return Err(Error::InvalidArgument("D needs at least two exponents".into()));
    }
    let n = q - 1;
    for k in divisors(n).into_iter().rev() {
        let mut residues: Vec<u64> = exponents.iter().map(|&e| e % k).collect();
        residues.sort_unstable();
        let paired = residues.iter().enumerate().all(|(i, &r)| {
            (i > 0 && residues[i - 1] == r) || (i + 1 < residues.len() && residues[i + 1] == r)
        });
        if paired {
            return Ok(k);
        }
    }
    unreachable!("k = 1 always qualifies")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverMethod {
    Exact,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetCover {
    pub size: usize,
    pub cosets: Vec<Coset>,
    pub method: CoverMethod,
}

/// All cosets inside the index set that are maximal under inclusion.
fn maximal_cosets(indices: &[u64], q: u64) -> Vec<Coset> {
    let n = q - 1;
    let primes: Vec<u64> = factorize(n).into_iter().map(|(l, _)| l).collect();
    let mut counts = Vec::new();
    let mut full: HashMap<u64, Vec<bool>> = HashMap::new();
    for d in divisors(n) {
        if d as usize > indices.len() {
            break;
        }
        let m = (n / d) as usize;
        let mut flags = vec![false; m];
        for r in full_residues(indices, n, d, &mut counts) {
            flags[r as usize] = true;
        }
        full.insert(d, flags);
    }
    let mut out = Vec::new();
    let mut ds: Vec<u64> = full.keys().copied().collect();
    ds.sort_unstable();
    for &d in &ds {
        let flags = &full[&d];
        for (r, _) in flags.iter().enumerate().filter(|(_, &f)| f) {
            let r = r as u64;
            // a coset of H_d sits inside exactly one coset of H_{dl}
            let dominated = primes.iter().any(|&l| {
                n.is_multiple_of(d * l)
                    && full
                        .get(&(d * l))
                        .is_some_and(|up| up[(r % (n / (d * l))) as usize])
            });
            if !dominated {
                out.push(Coset { order: d, residue: r, q });
            }
        }
    }
    out
}

/// Smallest collection of cosets (of any subgroups) whose union is the root
/// set: exact branch-and-bound for small sets, greedy otherwise.
pub fn min_coset_cover(z: &RootSet) -> Result<CosetCover> {
    if z.is_empty() {
        return Ok(CosetCover {
            size: 0,
            cosets: Vec::new(),
            method: CoverMethod::Exact,
        });
    }
    let indices = z.indices()?;
    let q = z.field.q();
    let candidates = maximal_cosets(&indices, q);
    let greedy = greedy_cover(&indices, &candidates);
    if indices.len() > EXACT_COVER_LIMIT {
        let cosets: Vec<Coset> = greedy.into_iter().map(|c| candidates[c]).collect();
        return Ok(CosetCover {
            size: cosets.len(),
            cosets,
            method: CoverMethod::Greedy,
        });
    }
    let position: HashMap<u64, usize> = indices.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let masks: Vec<u64> = candidates
        .iter()
        .map(|c| {
            c.member_indices()
                .fold(0u64, |m, i| m | (1u64 << position[&i]))
        })
        .collect();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); indices.len()];
    for (ci, &mask) in masks.iter().enumerate() {
        for (bit, slot) in containing.iter_mut().enumerate() {
            if mask >> bit & 1 == 1 {
                slot.push(ci);
            }
        }
    }
    let full = if indices.len() == 64 {
        u64::MAX
    } else {
        (1u64 << indices.len()) - 1
    };
    let mut search = CoverSearch {
        masks: &masks,
        containing: &containing,
        largest: masks.iter().map(|m| m.count_ones()).max().unwrap_or(1),
        best: greedy,
        chosen: Vec::new(),
    };
    search.run(full);
    let mut best = search.best;
    best.sort_by_key(|&c| (candidates[c].residue, std::cmp::Reverse(candidates[c].order)));
    let cosets: Vec<Coset> = best.into_iter().map(|c| candidates[c]).collect();
    Ok(CosetCover {
        size: cosets.len(),
        cosets,
        method: CoverMethod::Exact,
    })
}

struct CoverSearch<'a> {
    masks: &'a [u64],
    containing: &'a [Vec<usize>],
    largest: u32,
    best: Vec<usize>,
    chosen: Vec<usize>,
}

impl CoverSearch<'_> {
    fn run(&mut self, uncovered: u64) {
        if uncovered == 0 {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        let lower = uncovered.count_ones().div_ceil(self.largest) as usize;
        if self.chosen.len() + lower >= self.best.len() {
            return;
        }
        // branch on the uncovered element with the fewest covering cosets
        let mut pivot = usize::MAX;
        let mut fewest = usize::MAX;
        let mut rest = uncovered;
        while rest != 0 {
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let options = self.containing[bit].len();
            if options < fewest {
                fewest = options;
                pivot = bit;
            }
        }
        let mut options = self.containing[pivot].clone();
        options.sort_by_key(|&c| std::cmp::Reverse((self.masks[c] & uncovered).count_ones()));
        for c in options {
            self.chosen.push(c);
            self.run(uncovered & !self.masks[c]);
            self.chosen.pop();
        }
    }
}

#[derive(PartialEq, Eq)]
struct GreedyKey {
    coverage: usize,
    residue: u64,
    order: u64,
    candidate: usize,
}

impl Ord for GreedyKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coverage
            .cmp(&other.coverage)
            .then(other.residue.cmp(&self.residue))
            .then(self.order.cmp(&other.order))
            .then(other.candidate.cmp(&self.candidate))
    }
}

impl PartialOrd for GreedyKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Largest remaining coverage first; ties by least representative index.
fn greedy_cover(indices: &[u64], candidates: &[Coset]) -> Vec<usize> {
    let position: HashMap<u64, usize> = indices.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let members: Vec<Vec<usize>> = candidates
        .iter()
        .map(|c| c.member_indices().map(|i| position[&i]).collect())
        .collect();
    let mut covered = vec![false; indices.len()];
    let mut remaining: Vec<usize> = members.iter().map(Vec::len).collect();
    let mut heap: BinaryHeap<GreedyKey> = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| GreedyKey {
            coverage: remaining[i],
            residue: c.residue,
            order: c.order,
            candidate: i,
        })
        .collect();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); indices.len()];
    for (ci, m) in members.iter().enumerate() {
        for &pos in m {
            containing[pos].push(ci);
        }
    }
    let mut left = indices.len();
    let mut chosen = Vec::new();
    while left > 0 {
        let Some(top) = heap.pop() else { break };
        if top.coverage != remaining[top.candidate] {
            if remaining[top.candidate] > 0 {
                heap.push(GreedyKey {
                    coverage: remaining[top.candidate],
                    ..top
                });
            }
            continue;
        }
        if top.coverage == 0 {
            continue;
        }
        chosen.push(top.candidate);
        for &pos in &members[top.candidate] {
            if !covered[pos] {
                covered[pos] = true;
                left -= 1;
                for &other in &containing[pos] {
                    remaining[other] -= 1;
                }
            }
        }
    }
    chosen
}

/// One evaluated bound: its real value and exact integer floor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bound {
    pub formula: String,
    pub value: f64,
    pub floor: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MaybeBound {
    Applies(Bound),
    Absent { absent: String },
}

impl MaybeBound {
    fn absent(reason: impl Into<String>) -> Self {
        MaybeBound::Absent {
            absent: reason.into(),
        }
    }

    pub fn floor(&self) -> Option<u64> {
        match self {
            MaybeBound::Applies(b) => Some(b.floor),
            MaybeBound::Absent { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosetReport {
    pub q: u64,
    pub t: usize,
    /// Nonzero roots of the canonical form.
    pub root_count: usize,
    /// `0` was a root of the polynomial as given.
    pub includes_zero: bool,
    /// Degree below `q - 1`.
    pub strict_convention: bool,
    pub delta: u64,
    /// 0 when there are no roots.
    pub c_exact: u64,
    pub d_bound: u64,
    pub cover: CosetCover,
    /// `(t-1)(q-1)/t`
    pub ks_bound: MaybeBound,
    /// `2((q-1)/delta)^((t-2)/(t-1))`, a bound on the number of cosets.
    pub bcr_coset_bound: MaybeBound,
    /// `delta * floor(1/2 + sqrt((q-1)/delta))`, trinomials.
    pub ko_bound: MaybeBound,
    /// `sqrt(q)` for trinomials, square `q`, `delta = 1`.
    pub ko_sqrt_bound: MaybeBound,
    /// `2(q-1)^((t-2)/(t-1)) C^(1/(t-1))`
    pub kelley_bound: MaybeBound,
}

/// `floor(2 * (base^(t-2) * extra)^(1/(t-1)))`, exactly.
fn kelley_floor(base: u64, extra: u64, t: u32) -> u64 {
    let k = t - 1;
    let power: BigUint = big_pow(2, k) * big_pow(base, t - 2) * BigUint::from(extra);
    floor_root(&power, k).to_u64().expect("bounded by 2q")
}

pub fn bounds_report(f: &SparsePolynomial) -> Result<CosetReport> {
    let canonical = f.canonicalize();
    let t = canonical.t();
    if t < 2 {
        return Err(Error::InvalidArgument(
            "coset bounds need at least two terms".into(),
        ));
    }
    let field = canonical.field();
    let q = field.q();
    let n = q - 1;
    let exponents = canonical.exponents();
    let z = canonical.roots_in_units()?;
    let delta = delta_of(&exponents, q);
    let c = c_exact(&z)?;
    let d = d_bound(&exponents, q)?;
    let cover = min_coset_cover(&z)?;
    let tt = t as u32;

    let g = gcd((tt as u64 - 1) * n, t as u64);
    let ks = MaybeBound::Applies(Bound {
        formula: format!("{}/{}", (t as u64 - 1) * n / g, t as u64 / g),
        value: (t as f64 - 1.0) * n as f64 / t as f64,
        floor: (t as u64 - 1) * n / t as u64,
    });

    let reduced = n / delta;
    let exponent = (t as f64 - 2.0) / (t as f64 - 1.0);
    let bcr = MaybeBound::Applies(Bound {
        formula: format!("2*{reduced}^({}/{})", t - 2, t - 1),
        value: 2.0 * (reduced as f64).powf(exponent),
        floor: kelley_floor(reduced, 1, tt),
    });

    let (ko, ko_sqrt) = if t == 3 {
        let m = isqrt(4 * reduced).div_ceil(2);
        let ko = MaybeBound::Applies(Bound {
            formula: format!("{delta}*floor(1/2+sqrt({reduced}))"),
            value: (delta * m) as f64,
            floor: delta * m,
        });
        let root = isqrt(q);
        let ko_sqrt = if root * root != q {
            MaybeBound::absent("q is not a square")
        } else if delta != 1 {
            MaybeBound::absent("delta(f) != 1")
        } else {
            MaybeBound::Applies(Bound {
                formula: format!("sqrt({q})"),
                value: root as f64,
                floor: root,
            })
        };
        (ko, ko_sqrt)
    } else {
        (
            MaybeBound::absent("trinomials only"),
            MaybeBound::absent("trinomials only"),
        )
    };

    let kelley = if c == 0 {
        MaybeBound::absent("no roots, C(f) undefined")
    } else {
        MaybeBound::Applies(Bound {
            formula: format!("2*{n}^({}/{})*{c}^(1/{})", t - 2, t - 1, t - 1),
            value: 2.0 * (n as f64).powf(exponent) * (c as f64).powf(1.0 / (t as f64 - 1.0)),
            floor: kelley_floor(n, c, tt),
        })
    };

    // the bounds assume degree < q - 1
    let strict = canonical.is_strict();
    let gate = |b: MaybeBound| {
        if strict {
            b
        } else {
            MaybeBound::absent("degree >= q - 1")
        }
    };

    Ok(CosetReport {
        q,
        t,
        root_count: z.count(),
        includes_zero: f.includes_zero(),
        strict_convention: strict,
        delta,
        c_exact: c,
        d_bound: d,
        cover,
        ks_bound: gate(ks),
        bcr_coset_bound: gate(bcr),
        ko_bound: gate(ko),
        ko_sqrt_bound: gate(ko_sqrt),
        kelley_bound: gate(kelley),
    })
}

impl CosetReport {
    /// Named bounds with their integer floors, in report order.
    pub fn root_bounds(&self) -> Vec<(&'static str, &MaybeBound)> {
        vec![
            ("ks_bound", &self.ks_bound),
            ("ko_bound", &self.ko_bound),
            ("ko_sqrt_bound", &self.ko_sqrt_bound),
            ("kelley_bound", &self.kelley_bound),
        ]
    }

    /// Every inequality the report should satisfy but does not.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, bound) in self.root_bounds() {
            if let Some(floor) = bound.floor() {
                if self.root_count as u64 > floor {
                    out.push(format!("R(f) = {} > {name} = {floor}", self.root_count));
                }
            }
        }
        if self.c_exact > self.d_bound {
            out.push(format!("C = {} > D = {}", self.c_exact, self.d_bound));
        }
        if !(self.q - 1).is_multiple_of(self.delta) {
            out.push("delta does not divide q - 1".into());
        }
        if self.c_exact > 0 && !(self.q - 1).is_multiple_of(self.c_exact) {
            out.push("C does not divide q - 1".into());
        }
        if self.cover.method == CoverMethod::Exact {
            if let Some(floor) = self.bcr_coset_bound.floor() {
                if self.cover.size as u64 > floor {
                    out.push(format!("cover {} > coset bound {floor}", self.cover.size));
                }
            }
        }
        out
    }
}
