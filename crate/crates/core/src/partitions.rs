//! Non-crossing partitions of `{1, …, n}`, their inner/outer block
//! statistics, and the counting sequences built on top of them.
//!
//! Enumeration is exhaustive and capped; it exists to cross-check the
//! counting recursions, which never enumerate.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest ground set accepted by [`enumerate_nc`].
pub const MAX_NC: usize = 14;
/// Largest (even) ground set accepted by [`enumerate_nc2`].
pub const MAX_NC2: usize = 24;

/// A non-crossing partition of `{1, …, n}`.
///
/// Stored as a restricted growth string: `labels[i - 1]` is the index of the
/// block holding `i`, with blocks numbered in order of their minimal element.
/// This is the canonical encoding; enumeration order is lexicographic on it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<u8>,
}

impl Partition {
    /// Builds a partition from arbitrary blocks of 1-based elements,
    /// validating cover, disjointness and the non-crossing condition.
    pub fn new(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n == 0 || n > MAX_NC2 {
            return Err(Error::Bound { value: n, min: 1, max: MAX_NC2 });
        }
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &e in block {
                if e == 0 || e > n {
                    return Err(Error::InvalidPartition(format!("element {e} outside 1..={n}")));
                }
                if owner[e - 1].replace(b).is_some() {
                    return Err(Error::InvalidPartition(format!("element {e} appears twice")));
                }
            }
        }
        if let Some(missing) = owner.iter().position(Option::is_none) {
            return Err(Error::InvalidPartition(format!("element {} not covered", missing + 1)));
        }
        // Relabel blocks by first appearance.
        let mut relabel: Vec<Option<u8>> = vec![None; blocks.len()];
        let mut next = 0u8;
        let labels = owner
            .into_iter()
            .map(|o| {
                let b = o.expect("covered");
                *relabel[b].get_or_insert_with(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect::<Vec<_>>();
        let p = Partition { labels };
        if !p.is_non_crossing() {
            return Err(Error::InvalidPartition("blocks cross".into()));
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Block label of each element, in restricted-growth form.
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    /// Blocks as ascending 1-based element lists, sorted by minimal element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(i + 1);
        }
        blocks
    }

    pub fn is_pair_partition(&self) -> bool {
        self.blocks().iter().all(|b| b.len() == 2)
    }

    fn is_non_crossing(&self) -> bool {
        // Two blocks cross iff the labels restricted to them alternate at
        // least four times (x y x y).
        let k = self.num_blocks();
        for x in 0..k as u8 {
            for y in x + 1..k as u8 {
                let mut runs = 0;
                let mut prev = None;
                for &l in self.labels.iter().filter(|&&l| l == x || l == y) {
                    if prev != Some(l) {
                        runs += 1;
                        prev = Some(l);
                    }
                }
                if runs >= 4 {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("(")?;
            for (j, e) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str(")")?;
        }
        f.write_str("}")
    }
}

/// Outer and inner block counts of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockClass {
    pub outer: usize,
    pub inner: usize,
}

/// Result of [`classify`]: the counts plus one flag per block (in
/// canonical block order), `true` for inner blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: BlockClass,
    pub inner: Vec<bool>,
}

/// Labels each block inner or outer. A block is inner when some other block
/// has elements on both sides of it.
pub fn classify(p: &Partition) -> Classification {
    let blocks = p.blocks();
    let inner: Vec<bool> = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let v = b[0];
            blocks
                .iter()
                .enumerate()
                .any(|(j, w)| j != i && w[0] < v && v < *w.last().unwrap())
        })
        .collect();
    let n_inner = inner.iter().filter(|&&x| x).count();
    Classification {
        class: BlockClass { outer: inner.len() - n_inner, inner: n_inner },
        inner,
    }
}

/// Depth-first generator over restricted growth strings with the
/// non-crossing condition checked at every assignment.
struct NcGenerator<'a, F: FnMut(&[u8])> {
    n: usize,
    pairs_only: bool,
    labels: Vec<u8>,
    first: Vec<usize>,
    last: Vec<usize>,
    size: Vec<usize>,
    visit: &'a mut F,
}

impl<F: FnMut(&[u8])> NcGenerator<'_, F> {
    fn open_singletons(&self) -> usize {
        self.size.iter().filter(|&&s| s == 1).count()
    }

    fn can_join(&self, block: usize, i: usize) -> bool {
        if self.pairs_only && self.size[block] != 1 {
            return false;
        }
        let last = self.last[block];
        // Any element strictly between `last` and `i` whose block started
        // before `last` would cross.
        (last + 1..i).all(|c| self.first[self.labels[c] as usize] > last)
    }

    fn run(&mut self, i: usize) {
        if i == self.n {
            if !self.pairs_only || self.open_singletons() == 0 {
                (self.visit)(&self.labels);
            }
            return;
        }
        let remaining = self.n - i;
        for block in 0..self.first.len() {
            if self.can_join(block, i) {
                let prev_last = self.last[block];
                self.labels.push(block as u8);
                self.last[block] = i;
                self.size[block] += 1;
                self.run(i + 1);
                self.size[block] -= 1;
                self.last[block] = prev_last;
                self.labels.pop();
            }
        }
        // Opening a new block; in pair mode every open singleton still needs
        // a partner among the remaining elements.
        if !self.pairs_only || self.open_singletons() + 1 < remaining {
            let block = self.first.len();
            self.labels.push(block as u8);
            self.first.push(i);
            self.last.push(i);
            self.size.push(1);
            self.run(i + 1);
            self.size.pop();
            self.last.pop();
            self.first.pop();
            self.labels.pop();
        }
    }
}

fn generate<F: FnMut(&[u8])>(n: usize, pairs_only: bool, visit: &mut F) {
    let mut gen = NcGenerator {
        n,
        pairs_only,
        labels: Vec::with_capacity(n),
        first: Vec::new(),
        last: Vec::new(),
        size: Vec::new(),
        visit,
    };
    gen.run(0);
}

/// Calls `f` on every partition of NC(n), in canonical order, without
/// materializing the whole list.
pub fn for_each_nc<F: FnMut(&Partition)>(n: usize, mut f: F) -> Result<()> {
    if n == 0 || n > MAX_NC {
        return Err(Error::Bound { value: n, min: 1, max: MAX_NC });
    }
    generate(n, false, &mut |labels: &[u8]| {
        f(&Partition { labels: labels.to_vec() })
    });
    Ok(())
}

/// All non-crossing partitions of `{1, …, n}`, `1 <= n <= 14`.
pub fn enumerate_nc(n: usize) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for_each_nc(n, |p| out.push(p.clone()))?;
    Ok(out)
}

/// All non-crossing pair partitions of `{1, …, two_n}`.
pub fn enumerate_nc2(two_n: usize) -> Result<Vec<Partition>> {
    if two_n % 2 == 1 {
        return Err(Error::Parity(two_n));
    }
    if two_n == 0 || two_n > MAX_NC2 {
        return Err(Error::Bound { value: two_n, min: 2, max: MAX_NC2 });
    }
    let mut out = Vec::new();
    generate(two_n, true, &mut |labels: &[u8]| {
        out.push(Partition { labels: labels.to_vec() })
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// `(1, 0)`
    Right,
    /// `(0, 1)`
    Up,
}

/// Lattice path from `(0, 0)` to `(n, n)` never rising above the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CatalanPath {
    steps: Vec<Step>,
}

impl CatalanPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        if steps.is_empty() || steps.len() % 2 == 1 {
            return Err(Error::InvalidPath(format!("length {} is not a positive even number", steps.len())));
        }
        let mut height = 0i64;
        for (i, s) in steps.iter().enumerate() {
            height += if *s == Step::Right { 1 } else { -1 };
            if height < 0 {
                return Err(Error::InvalidPath(format!("above the diagonal after step {}", i + 1)));
            }
        }
        if height != 0 {
            return Err(Error::InvalidPath("does not end on the diagonal".into()));
        }
        Ok(CatalanPath { steps })
    }

    pub fn n(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of points `(i, i)`, `1 <= i <= n`, visited by the path.
    pub fn diagonal_touches(&self) -> usize {
        let mut height = 0i64;
        let mut touches = 0;
        for s in &self.steps {
            height += if *s == Step::Right { 1 } else { -1 };
            if height == 0 {
                touches += 1;
            }
        }
        touches
    }
}

/// Maps a pair partition to its Catalan path: a right step where a block
/// opens, an up step where it closes.
pub fn to_catalan_path(p: &Partition) -> Result<CatalanPath> {
    if !p.is_pair_partition() {
        return Err(Error::NotPairPartition);
    }
    let mut seen = vec![false; p.num_blocks()];
    let steps = p
        .labels
        .iter()
        .map(|&l| {
            if std::mem::replace(&mut seen[l as usize], true) {
                Step::Up
            } else {
                Step::Right
            }
        })
        .collect();
    CatalanPath::new(steps)
}

/// Inverse of [`to_catalan_path`]: every up step closes the most recent
/// unmatched right step.
pub fn from_catalan_path(path: &CatalanPath) -> Partition {
    let mut open = Vec::new();
    let mut blocks = Vec::new();
    for (i, s) in path.steps.iter().enumerate() {
        match s {
            Step::Right => open.push(i + 1),
            Step::Up => {
                let a = open.pop().expect("validated path");
                blocks.push(vec![a, i + 1]);
            }
        }
    }
    Partition::new(path.steps.len(), &blocks).expect("stack matching is non-crossing")
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// The Catalan number `C(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> BigUint {
    binomial(2 * n as u64, n as u64) / (n as u64 + 1)
}

/// Number of pair partitions in NC_2(2n) with exactly `k` inner blocks,
/// `n >= 1`, `0 <= k <= n`.
pub fn count_a(n: usize, k: usize) -> Result<BigUint> {
    if n == 0 || k > n {
        return Err(Error::IndexOutOfRange { n, k });
    }
    Ok(inner_pair_table(n).swap_remove(k))
}

/// Row `a^n_0, …, a^n_n` built from `a^n_0 = 1`, `a^n_n = 0` and
/// `a^n_{k+1} = a^n_k + a^{n-1}_{k+1}`.
pub fn inner_pair_table(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one(), BigUint::zero()];
    for m in 2..=n {
        let mut next = Vec::with_capacity(m + 1);
        next.push(BigUint::one());
        for k in 0..m - 1 {
            let v = &next[k] + &row[k + 1];
            next.push(v);
        }
        next.push(BigUint::zero());
        row = next;
    }
    row
}

/// Memoized tables of `t^n_k` (partitions with `k` blocks) and `s^n_{k,l}`
/// (partitions with `k` outer and `l` inner blocks) for `n <= n_max`.
#[derive(Debug, Clone)]
pub struct NcCounts {
    n_max: usize,
    t: Vec<Vec<BigUint>>,
    s: Vec<Vec<Vec<BigUint>>>,
}

impl NcCounts {
    pub fn new(n_max: usize) -> Self {
        let t = Self::t_table(n_max);
        let s = Self::s_table(n_max, &t);
        NcCounts { n_max, t, s }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    // t[n][k] for 0 <= k <= n.
    fn t_table(n_max: usize) -> Vec<Vec<BigUint>> {
        let mut t: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        let get = |t: &Vec<Vec<BigUint>>, n: usize, k: usize| -> BigUint {
            t.get(n).and_then(|row| row.get(k)).cloned().unwrap_or_default()
        };
        for n in 1..=n_max {
            let mut row = vec![BigUint::zero(); n + 1];
            for (k, slot) in row.iter_mut().enumerate().skip(1) {
                let mut v = get(&t, n - 1, k - 1);
                for r in 2..=n {
                    for i in 1..=(r - 1).min(k) {
                        v += get(&t, r - 1, i) * get(&t, n - r, k - i);
                    }
                }
                *slot = v;
            }
            t.push(row);
        }
        t
    }

    // s[n][k][l] for 0 <= k, l <= n.
    fn s_table(n_max: usize, t: &[Vec<BigUint>]) -> Vec<Vec<Vec<BigUint>>> {
        let mut s = vec![vec![vec![BigUint::zero(); n_max + 1]; n_max + 1]; n_max + 1];
        s[0][0][0] = BigUint::one();
        for n in 1..=n_max {
            // One outer block: it must contain both 1 and n.
            if n == 1 {
                s[1][1][0] = BigUint::one();
            } else {
                for l in 0..n {
                    s[n][1][l] = t[n - 1].get(l + 1).cloned().unwrap_or_default();
                }
            }
            for k in 1..n {
                for l in 0..n {
                    let mut v = BigUint::zero();
                    for r in 1..=n {
                        for j in 0..=l {
                            if s[r][1][j].is_zero() {
                                continue;
                            }
                            v += &s[r][1][j] * &s[n - r][k][l - j];
                        }
                    }
                    s[n][k + 1][l] = v;
                }
            }
        }
        s
    }

    /// `t^n_k`; zero outside `1 <= k <= n` except `t^0_0 = 1`.
    pub fn t(&self, n: usize, k: usize) -> BigUint {
        assert!(n <= self.n_max, "table built up to {}", self.n_max);
        self.t[n].get(k).cloned().unwrap_or_default()
    }

    /// `s^n_{k,l}`; zero outside the natural domain except `s^0_{0,0} = 1`.
    pub fn s(&self, n: usize, k: usize, l: usize) -> BigUint {
        assert!(n <= self.n_max, "table built up to {}", self.n_max);
        if k > n || l > n {
            return BigUint::zero();
        }
        self.s[n][k][l].clone()
    }
}

/// Number of partitions in NC(n) with exactly `k` blocks, by recursion.
pub fn count_t(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    NcCounts::new(n).t(n, k)
}

/// Number of partitions in NC(n) with `k` outer and `l` inner blocks.
pub fn count_s(n: usize, k: usize, l: usize) -> BigUint {
    NcCounts::new(n).s(n, k, l)
}

/// Kreweras' closed form `(n-1)! n! / ((k-1)! k! (n-k)! (n-k+1)!)`,
/// evaluated as `C(n, k) C(n, k-1) / n`.
pub fn kreweras(n: usize, k: usize) -> BigUint {
    if n == 0 {
        return if k == 0 { BigUint::one() } else { BigUint::zero() };
    }
    if k == 0 || k > n {
        return BigUint::zero();
    }
    let num = binomial(n as u64, k as u64) * binomial(n as u64, k as u64 - 1);
    let (q, r) = num.div_rem(&BigUint::from(n));
    debug_assert!(r.is_zero());
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, blocks: &[&[usize]]) -> Partition {
        let blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.to_vec()).collect();
        Partition::new(n, &blocks).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn small_enumerations() {
        let one = enumerate_nc(1).unwrap();
        assert_eq!(one, vec![p(1, &[&[1]])]);
        assert_eq!(enumerate_nc(3).unwrap().len(), 5);
        assert_eq!(enumerate_nc(8).unwrap().len(), 1430);
        assert_eq!(enumerate_nc2(2).unwrap(), vec![p(2, &[&[1, 2]])]);
        let six = enumerate_nc2(6).unwrap();
        assert_eq!(six.len(), 5);
        assert!(six.contains(&p(6, &[&[1, 4], &[2, 3], &[5, 6]])));
        assert_eq!(enumerate_nc2(8).unwrap().len(), 14);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let all = enumerate_nc(7).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_bounds() {
        assert!(matches!(enumerate_nc(0), Err(Error::Bound { .. })));
        assert!(matches!(enumerate_nc(15), Err(Error::Bound { .. })));
        assert_eq!(enumerate_nc2(5), Err(Error::Parity(5)));
        assert!(matches!(enumerate_nc2(26), Err(Error::Bound { .. })));
        assert!(matches!(enumerate_nc2(0), Err(Error::Bound { .. })));
    }

    #[test]
    fn rejects_invalid_partitions() {
        assert!(Partition::new(4, &[vec![1, 3], vec![2, 4]]).is_err());
        assert!(Partition::new(3, &[vec![1, 2]]).is_err());
        assert!(Partition::new(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(Partition::new(2, &[vec![1, 2], vec![]]).is_err());
        assert!(Partition::new(5, &[vec![1, 5], vec![2, 4], vec![3]]).is_ok());
        assert!(Partition::new(5, &[vec![1, 3, 5], vec![2, 4]]).is_err());
    }

    #[test]
    fn canonicalizes_block_order() {
        let a = Partition::new(4, &[vec![4, 3], vec![2, 1]]).unwrap();
        assert_eq!(a.blocks(), vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(a.to_string(), "{(1,2),(3,4)}");
    }

    #[test]
    fn classify_examples() {
        let c = classify(&p(2, &[&[1, 2]]));
        assert_eq!(c.class, BlockClass { outer: 1, inner: 0 });
        let c = classify(&p(6, &[&[1, 4], &[2, 3], &[5, 6]]));
        assert_eq!(c.class, BlockClass { outer: 2, inner: 1 });
        assert_eq!(c.inner, vec![false, true, false]);
        let c = classify(&p(6, &[&[1, 6], &[2, 5], &[3, 4]]));
        assert_eq!(c.class, BlockClass { outer: 1, inner: 2 });
    }

    #[test]
    fn catalan_path_examples() {
        use Step::*;
        let path = to_catalan_path(&p(6, &[&[1, 4], &[2, 3], &[5, 6]])).unwrap();
        assert_eq!(path.steps(), &[Right, Right, Up, Up, Right, Up]);
        assert_eq!(path.diagonal_touches(), 2);
        assert_eq!(to_catalan_path(&p(2, &[&[1, 2]])).unwrap().steps(), &[Right, Up]);
        assert_eq!(
            to_catalan_path(&p(4, &[&[1, 2], &[3, 4]])).unwrap().steps(),
            &[Right, Up, Right, Up]
        );
        assert_eq!(to_catalan_path(&p(3, &[&[1, 2, 3]])), Err(Error::NotPairPartition));
        assert!(CatalanPath::new(vec![Up, Right]).is_err());
        assert!(CatalanPath::new(vec![Right, Right]).is_err());
    }

    #[test]
    fn catalan_path_roundtrip() {
        for n in 1..=8 {
            for pp in enumerate_nc2(2 * n).unwrap() {
                let path = to_catalan_path(&pp).unwrap();
                assert_eq!(from_catalan_path(&path), pp);
                assert_eq!(path.diagonal_touches(), classify(&pp).class.outer);
            }
        }
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), big(1));
        assert_eq!(catalan(3), big(5));
        assert_eq!(catalan(10), big(16796));
        for n in 1..20 {
            let rec: BigUint = (1..=n).map(|k| catalan(k - 1) * catalan(n - k)).sum();
            assert_eq!(catalan(n), rec);
        }
    }

    #[test]
    fn inner_pair_counts() {
        for n in 1..12 {
            assert_eq!(count_a(n, 0).unwrap(), big(1));
            assert_eq!(count_a(n, n).unwrap(), big(0));
        }
        assert_eq!(count_a(3, 1).unwrap(), big(2));
        assert_eq!(count_a(3, 2).unwrap(), big(2));
        let row: Vec<BigUint> = (0..=4).map(|k| count_a(4, k).unwrap()).collect();
        assert_eq!(row, [1u64, 3, 5, 5, 0].map(big).to_vec());
        assert!(count_a(3, 4).is_err());
        assert!(count_a(0, 0).is_err());
    }

    #[test]
    fn first_return_decomposition() {
        let a = |n: usize, k: usize| count_a(n, k).unwrap();
        for n in 3..=10 {
            for k in 0..=n - 3 {
                let rhs: BigUint = (1..=k + 2).map(|l| a(l, l - 1) * a(n - l, k + 2 - l)).sum();
                assert_eq!(a(n, k + 1), rhs, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn block_count_examples() {
        assert_eq!(count_t(0, 0), big(1));
        assert_eq!(count_t(3, 0), big(0));
        assert_eq!(count_t(3, 2), big(3));
        assert_eq!(count_t(4, 2), big(6));
        assert_eq!(kreweras(3, 2), big(3));
        assert_eq!(count_s(0, 0, 0), big(1));
        assert_eq!(count_s(2, 1, 0), big(1));
        assert_eq!(count_s(3, 1, 1), big(1));
        assert_eq!(count_s(3, 0, 0), big(0));
    }

    #[test]
    fn outer_inner_counts_sum_to_catalan() {
        let tables = NcCounts::new(12);
        for n in 0..=12 {
            let mut total = BigUint::zero();
            for k in 0..=n {
                for l in 0..=n {
                    total += tables.s(n, k, l);
                }
            }
            assert_eq!(total, catalan(n), "n={n}");
        }
    }
}
