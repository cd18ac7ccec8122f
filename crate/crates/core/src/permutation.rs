//! The symmetric group `S_N` as used for indexing Bethe coefficients.
//!
//! Permutations are stored in one-line notation, `Q = (Q(1) … Q(N))`, with
//! 1-based images. Composition is function composition, `(QR)(i) = Q(R(i))`,
//! so right multiplication by the transposition `T_i` swaps the entries at
//! positions `i` and `i + 1`.
//!
//! Coefficient vectors are laid out in descending order under
//! [`Permutation::compare`]: `Q > Q'` when the first non-zero entry of
//! `Q(N) − Q'(N), Q(N−1) − Q'(N−1), …` is positive. For `N = 3` this gives
//! `(123), (213), (132), (312), (231), (321)`. Ranks are 1-based and the
//! identity always has rank 1.
//!
//! Ranking, unranking and the transposition words all follow the same
//! recursion: every `Q ∈ S_m` factors uniquely as `Q = C_n · R` where
//! `C_n = T_{m−n} T_{m−n+1} ⋯ T_{m−1}` cycles the last `n + 1` values,
//! `n = m − Q(m)`, and `R` fixes `m`. The rank of `Q` is then
//! `n·(m−1)! + rank(R)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Largest `N` for which [`SymmetricGroup`] tables are built (8! = 40320).
pub const MAX_GROUP_N: usize = 8;

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidPermutation { images, n });
            }
            seen[v - 1] = true;
        }
        if n == 0 {
            return Err(Error::InvalidPermutation { images, n });
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "S_0 is not supported");
        Permutation { images: (1..=n).collect() }
    }

    /// `T_i`, exchanging `i` and `i + 1` (`1 ≤ i < n`).
    pub fn transposition(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::SiteOutOfRange { n, site: i });
        }
        let mut p = Self::identity(n);
        p.images.swap(i - 1, i);
        Ok(p)
    }

    /// Number of points `N`.
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `Q(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `self ∘ other`: `other` is applied first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        check_same_size(self.len(), other.len())?;
        Ok(Permutation { images: other.images.iter().map(|&r| self.images[r - 1]).collect() })
    }

    /// `Q T_i`, i.e. `Q` with positions `i` and `i + 1` swapped.
    pub fn times_transposition(&self, i: usize) -> Result<Permutation> {
        if i == 0 || i >= self.len() {
            return Err(Error::SiteOutOfRange { n: self.len(), site: i });
        }
        let mut images = self.images.clone();
        images.swap(i - 1, i);
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v - 1] = i + 1;
        }
        Permutation { images }
    }

    /// Number of pairs `a < b` with `Q(a) > Q(b)`.
    pub fn inversions(&self) -> usize {
        let n = self.len();
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.images[a] > self.images[b] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `+1` for even, `−1` for odd permutations.
    pub fn sign(&self) -> i32 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// The same permutation in `S_n`, `n ≥ N`, padded with fixed points.
    pub fn embed(&self, n: usize) -> Result<Permutation> {
        if n < self.len() {
            return Err(Error::SizeMismatch { expected: self.len(), found: n });
        }
        let mut images = self.images.clone();
        images.extend(self.len() + 1..=n);
        Ok(Permutation { images })
    }

    /// Ordering of the coefficient layout; errors on different `N`.
    pub fn compare(&self, other: &Permutation) -> Result<Ordering> {
        check_same_size(self.len(), other.len())?;
        Ok(self.order_within(other))
    }

    fn order_within(&self, other: &Permutation) -> Ordering {
        for (a, b) in self.images.iter().rev().zip(other.images.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                unequal => return unequal,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order: by `N` first, then the layout order within `S_N`.
impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.order_within(other))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.len() <= 9;
        write!(f, "(")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 && !compact {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `(312)`, `312` or comma separated `3,1,2`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let bad = || Error::InvalidInput(format!("cannot parse permutation `{s}`"));
        let images: Vec<usize> = if body.contains(',') {
            body.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            body.chars().map(|ch| ch.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_>>()?
        };
        Permutation::new(images)
    }
}

fn check_same_size(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::SizeMismatch { expected: a, found: b });
    }
    Ok(())
}

/// 1-based position of a permutation in the layout order of `S_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermutationRank {
    n_particles: usize,
    index: usize,
}

impl PermutationRank {
    pub fn new(n_particles: usize, index: usize) -> Result<Self> {
        let max = factorial(n_particles);
        if n_particles == 0 || index == 0 || index > max {
            return Err(Error::RankOutOfRange { n: n_particles, index, max });
        }
        Ok(PermutationRank { n_particles, index })
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    /// 1-based index.
    pub fn index(&self) -> usize {
        self.index
    }

    /// 0-based offset into coefficient vectors.
    pub fn offset(&self) -> usize {
        self.index - 1
    }
}

/// Splits `Q ∈ S_m` into `n = m − Q(m)` and the reduced `R ∈ S_{m−1}`.
fn peel_last(images: &[usize]) -> (usize, Vec<usize>) {
    let m = images.len();
    let last = images[m - 1];
    let reduced = images[..m - 1].iter().map(|&v| if v > last { v - 1 } else { v }).collect();
    (m - last, reduced)
}

pub fn rank(q: &Permutation) -> PermutationRank {
    let n_particles = q.len();
    let mut images = q.images.clone();
    let mut index = 1;
    while images.len() > 1 {
        let m = images.len();
        let (n, reduced) = peel_last(&images);
        index += n * factorial(m - 1);
        images = reduced;
    }
    PermutationRank { n_particles, index }
}

pub fn unrank(r: PermutationRank) -> Permutation {
    // digits n_m for m = N, N-1, ..., 2
    let mut digits = Vec::with_capacity(r.n_particles);
    let mut rest = r.index - 1;
    for m in (2..=r.n_particles).rev() {
        let block = factorial(m - 1);
        digits.push(rest / block);
        rest %= block;
    }
    let mut images = vec![1];
    for (m, &n) in (2..=r.n_particles).zip(digits.iter().rev()) {
        let last = m - n;
        for v in images.iter_mut() {
            if *v >= last {
                *v += 1;
            }
        }
        images.push(last);
    }
    Permutation { images }
}

/// Transposition word `[i₁, …, i_L]` with `T_{i₁} T_{i₂} ⋯ T_{i_L} = Q`.
pub fn decompose(q: &Permutation) -> Vec<usize> {
    let mut word = Vec::new();
    let mut images = q.images.clone();
    while images.len() > 1 {
        let m = images.len();
        let (n, reduced) = peel_last(&images);
        word.extend(m - n..m);
        images = reduced;
    }
    word
}

/// Product `T_{w₁} T_{w₂} ⋯` in `S_n`.
pub fn compose_word(n: usize, word: &[usize]) -> Result<Permutation> {
    let mut p = Permutation::identity(n);
    for &i in word {
        p = p.times_transposition(i)?;
    }
    Ok(p)
}

/// `S_N` with its elements in layout order and right-multiplication tables
/// for every `T_i`. Built once per `N` and shared read-only.
#[derive(Debug)]
pub struct SymmetricGroup {
    n: usize,
    elements: Vec<Permutation>,
    right_t: Vec<Vec<usize>>,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUP_N {
            return Err(Error::UnsupportedSize { n, min: 1, max: MAX_GROUP_N });
        }
        let order = factorial(n);
        let elements: Vec<Permutation> =
            (1..=order).map(|index| unrank(PermutationRank { n_particles: n, index })).collect();
        let right_t = (1..n)
            .map(|i| {
                elements
                    .iter()
                    .map(|q| rank(&q.times_transposition(i).expect("site in range")).offset())
                    .collect()
            })
            .collect();
        Ok(SymmetricGroup { n, elements, right_t })
    }

    /// Cached group for `n`.
    pub fn shared(n: usize) -> Result<Arc<SymmetricGroup>> {
        static CACHE: [OnceLock<Arc<SymmetricGroup>>; MAX_GROUP_N + 1] = [const { OnceLock::new() }; MAX_GROUP_N + 1];
        if n == 0 || n > MAX_GROUP_N {
            return Err(Error::UnsupportedSize { n, min: 1, max: MAX_GROUP_N });
        }
        Ok(CACHE[n].get_or_init(|| Arc::new(SymmetricGroup::new(n).expect("size checked"))).clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N!`.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Element at 0-based offset.
    pub fn element(&self, offset: usize) -> &Permutation {
        &self.elements[offset]
    }

    /// 0-based offset of `q`.
    pub fn offset_of(&self, q: &Permutation) -> Result<usize> {
        check_same_size(self.n, q.len())?;
        Ok(rank(q).offset())
    }

    /// Offsets of `Q T_i` for every `Q`, indexed by the offset of `Q`.
    pub fn right_transposition(&self, i: usize) -> Result<&[usize]> {
        if i == 0 || i >= self.n {
            return Err(Error::SiteOutOfRange { n: self.n, site: i });
        }
        Ok(&self.right_t[i - 1])
    }
}

/// Right regular representation `(R̂)_{Q,Q'} = δ_{Q', QR}`, stored as the
/// column index of the single 1 in each row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularRepMatrix {
    targets: Vec<usize>,
}

impl RegularRepMatrix {
    /// Matrix order `N!`.
    pub fn order(&self) -> usize {
        self.targets.len()
    }

    /// 0-based column of the 1 in 0-based `row`.
    pub fn target(&self, row: usize) -> usize {
        self.targets[row]
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        u8::from(self.targets[row] == col)
    }

    /// `(R̂A)(Q) = A(QR)`.
    pub fn apply<T: Clone>(&self, a: &[T]) -> Result<Vec<T>> {
        check_same_size(self.order(), a.len())?;
        Ok(self.targets.iter().map(|&t| a[t].clone()).collect())
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.order();
        DMatrix::from_fn(n, n, |r, c| f64::from(self.entry(r, c)))
    }
}

pub fn regular_rep(r: &Permutation) -> Result<RegularRepMatrix> {
    let group = SymmetricGroup::shared(r.len())?;
    let targets = group
        .elements()
        .iter()
        .map(|q| rank(&q.compose(r).expect("same size")).offset())
        .collect();
    Ok(RegularRepMatrix { targets })
}
