//! Bit vectors over F_2^n, coordinate subsets, and the code families used
//! throughout the crate.
//!
//! Coordinate `i` of a vector is bit `i` of its integer encoding. In the
//! textual form (`"1011001"`) character `i` is coordinate `i`, so the string
//! reads from coordinate 0 on the left. Projections onto a subset re-index the
//! kept coordinates densely in increasing coordinate order.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

/// Largest blocklength representable by [`BitVector`].
pub const MAX_DIM: usize = 128;

/// Largest dimension for operations that materialize a length-2^n array.
pub const DENSE_MAX_DIM: usize = 24;

/// Largest log2 |C| for which codewords are enumerated.
pub const MAX_LOG_CODE_SIZE: usize = 24;

#[inline]
pub(crate) fn low_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Gathers the bits of `bits` selected by `mask` into the low positions,
/// preserving their order.
#[inline]
pub fn gather_bits(bits: u128, mask: u128) -> u128 {
    let mut out = 0u128;
    let mut m = mask;
    let mut pos = 0;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if bits & low != 0 {
            out |= 1u128 << pos;
        }
        pos += 1;
        m &= m - 1;
    }
    out
}

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        Err(Error::DimensionTooLarge { n, max: MAX_DIM })
    } else {
        Ok(())
    }
}

/// A vector in F_2^n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    n: usize,
    bits: u128,
}

impl BitVector {
    pub fn new(n: usize, bits: u128) -> Result<Self> {
        check_dim(n)?;
        if bits & !low_mask(n) != 0 {
            return Err(invalid(format!(
                "encoding {bits:#x} does not fit in {n} bits"
            )));
        }
        Ok(Self { n, bits })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn ones(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            n,
            bits: low_mask(n),
        })
    }

    #[inline]
    pub(crate) fn from_raw(n: usize, bits: u128) -> Self {
        debug_assert!(bits & !low_mask(n) == 0);
        Self { n, bits }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.n && (self.bits >> i) & 1 == 1
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn add(&self, other: &BitVector) -> Result<BitVector> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            bits: self.bits ^ other.bits,
        })
    }

    pub fn distance(&self, other: &BitVector) -> Result<usize> {
        Ok(self.add(other)?.weight())
    }

    pub fn complement(&self) -> BitVector {
        Self {
            n: self.n,
            bits: !self.bits & low_mask(self.n),
        }
    }

    /// Restriction to the coordinates in `subset`, as a vector in F_2^|S|.
    pub fn project(&self, subset: &SubsetMask) -> Result<BitVector> {
        if self.n != subset.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: subset.n,
            });
        }
        Ok(Self {
            n: subset.len(),
            bits: gather_bits(self.bits, subset.mask),
        })
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        check_dim(n)?;
        let mut bits = 0u128;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1u128 << i,
                other => {
                    return Err(invalid(format!(
                        "unexpected character {other:?} in bit string"
                    )))
                }
            }
        }
        Ok(Self { n, bits })
    }
}

/// A subset S of the coordinates [n].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    n: usize,
    mask: u128,
}

impl SubsetMask {
    pub fn new(n: usize, mask: u128) -> Result<Self> {
        check_dim(n)?;
        if mask & !low_mask(n) != 0 {
            return Err(invalid(format!("mask {mask:#x} does not fit in {n} bits")));
        }
        Ok(Self { n, mask })
    }

    pub fn full(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            n,
            mask: low_mask(n),
        })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn from_coords(n: usize, coords: &[usize]) -> Result<Self> {
        let mut mask = 0u128;
        for &c in coords {
            if c >= n {
                return Err(invalid(format!("coordinate {c} outside [0, {n})")));
            }
            mask |= 1u128 << c;
        }
        Self::new(n, mask)
    }

    #[inline]
    pub(crate) fn from_raw(n: usize, mask: u128) -> Self {
        Self { n, mask }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    /// |S|.
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && (self.mask >> i) & 1 == 1
    }

    pub fn complement(&self) -> SubsetMask {
        Self {
            n: self.n,
            mask: !self.mask & low_mask(self.n),
        }
    }

    /// Coordinates of S in increasing order.
    pub fn coords(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| self.contains(i))
    }
}

/// Rank over GF(2) of a matrix given as rows packed into integers.
pub fn rank_gf2(rows: &[u128]) -> usize {
    let mut basis = XorBasis::default();
    rows.iter().filter(|&&r| basis.insert(r)).count()
}

/// Incremental row-echelon basis keyed by leading bit.
#[derive(Clone, Debug, Default)]
pub(crate) struct XorBasis {
    pivots: Vec<u128>,
}

impl XorBasis {
    /// Returns true when `v` was independent of the basis.
    pub(crate) fn insert(&mut self, mut v: u128) -> bool {
        for &p in &self.pivots {
            let lead = 127 - p.leading_zeros();
            if (v >> lead) & 1 == 1 {
                v ^= p;
            }
        }
        if v == 0 {
            return false;
        }
        let lead = 127 - v.leading_zeros();
        let at = self
            .pivots
            .iter()
            .position(|&p| 127 - p.leading_zeros() < lead)
            .unwrap_or(self.pivots.len());
        self.pivots.insert(at, v);
        true
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// The code families available from [`make_code`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeKind {
    Repetition(usize),
    /// Even-weight code of length n.
    Parity(usize),
    Hamming74,
    ReedMuller {
        r: usize,
        m: usize,
    },
    RandomLinear {
        n: usize,
        k: usize,
        seed: u64,
    },
    Explicit(Vec<BitVector>),
    FullSpace(usize),
    /// The code consisting of the zero word alone.
    Single(usize),
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeKind::Repetition(n) => write!(f, "repetition({n})"),
            CodeKind::Parity(n) => write!(f, "parity({n})"),
            CodeKind::Hamming74 => write!(f, "hamming74"),
            CodeKind::ReedMuller { r, m } => write!(f, "reed_muller({r},{m})"),
            CodeKind::RandomLinear { n, k, seed } => write!(f, "random_linear({n},{k},{seed})"),
            CodeKind::Explicit(words) => write!(f, "explicit({})", words.len()),
            CodeKind::FullSpace(n) => write!(f, "full_space({n})"),
            CodeKind::Single(n) => write!(f, "single({n})"),
        }
    }
}

impl FromStr for CodeKind {
    type Err = Error;

    /// Parses the family syntax produced by `Display`, e.g. `reed_muller(1,3)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let close = s
                    .strip_suffix(')')
                    .ok_or_else(|| invalid(format!("missing ')' in code spec {s:?}")))?;
                (&s[..open], &close[open + 1..])
            }
            None => (s, ""),
        };
        let nums: Vec<u64> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| {
                    a.trim()
                        .parse::<u64>()
                        .map_err(|e| invalid(format!("bad argument {a:?} in {s:?}: {e}")))
                })
                .collect::<Result<_>>()?
        };
        let arity = |k: usize| -> Result<()> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(invalid(format!(
                    "{name} expects {k} argument(s), got {}",
                    nums.len()
                )))
            }
        };
        let kind = match name {
            "repetition" => {
                arity(1)?;
                CodeKind::Repetition(nums[0] as usize)
            }
            "parity" => {
                arity(1)?;
                CodeKind::Parity(nums[0] as usize)
            }
            "hamming74" => {
                arity(0)?;
                CodeKind::Hamming74
            }
            "reed_muller" => {
                arity(2)?;
                CodeKind::ReedMuller {
                    r: nums[0] as usize,
                    m: nums[1] as usize,
                }
            }
            "random_linear" => {
                arity(3)?;
                CodeKind::RandomLinear {
                    n: nums[0] as usize,
                    k: nums[1] as usize,
                    seed: nums[2],
                }
            }
            "full_space" => {
                arity(1)?;
                CodeKind::FullSpace(nums[0] as usize)
            }
            "single" => {
                arity(1)?;
                CodeKind::Single(nums[0] as usize)
            }
            other => return Err(invalid(format!("unknown code family {other:?}"))),
        };
        Ok(kind)
    }
}

/// A binary code: a nonempty set of codewords in F_2^n, sorted by encoding.
#[derive(Clone, Debug, PartialEq)]
pub struct Code {
    id: String,
    n: usize,
    words: Vec<u128>,
    generator: Option<Vec<u128>>,
}

impl Code {
    /// Builds the linear code spanned by `rows`. Dependent rows are allowed;
    /// the code then has 2^rank codewords.
    pub fn from_generator(n: usize, rows: Vec<u128>, id: impl Into<String>) -> Result<Self> {
        check_dim(n)?;
        if n == 0 {
            return Err(invalid("blocklength must be at least 1"));
        }
        if let Some(r) = rows.iter().find(|&&r| r & !low_mask(n) != 0) {
            return Err(invalid(format!(
                "generator row {r:#x} does not fit in {n} bits"
            )));
        }
        let mut basis = XorBasis::default();
        let independent: Vec<u128> = rows.iter().copied().filter(|&r| basis.insert(r)).collect();
        let k = independent.len();
        if k > MAX_LOG_CODE_SIZE {
            return Err(invalid(format!(
                "code dimension {k} too large to enumerate (max {MAX_LOG_CODE_SIZE})"
            )));
        }
        // Gray-code walk over the span.
        let mut words = Vec::with_capacity(1usize << k);
        let mut current = 0u128;
        words.push(current);
        for step in 1u64..(1u64 << k) {
            current ^= independent[step.trailing_zeros() as usize];
            words.push(current);
        }
        words.sort_unstable();
        Ok(Self {
            id: id.into(),
            n,
            words,
            generator: Some(rows),
        })
    }

    /// Builds a code from an explicit codeword list. Duplicates are rejected.
    pub fn from_codewords(n: usize, mut words: Vec<u128>, id: impl Into<String>) -> Result<Self> {
        check_dim(n)?;
        if n == 0 {
            return Err(invalid("blocklength must be at least 1"));
        }
        if words.is_empty() {
            return Err(invalid("a code needs at least one codeword"));
        }
        if let Some(w) = words.iter().find(|&&w| w & !low_mask(n) != 0) {
            return Err(invalid(format!("codeword {w:#x} does not fit in {n} bits")));
        }
        words.sort_unstable();
        if words.windows(2).any(|p| p[0] == p[1]) {
            return Err(invalid("duplicate codeword"));
        }
        Ok(Self {
            id: id.into(),
            n,
            words,
            generator: None,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Blocklength.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    /// log2 |C| in bits.
    pub fn log_size(&self) -> f64 {
        (self.words.len() as f64).log2()
    }

    /// Normalized rate log2 |C| / n.
    pub fn rate(&self) -> f64 {
        self.log_size() / self.n as f64
    }

    /// Raw codeword encodings in increasing order.
    pub fn words(&self) -> &[u128] {
        &self.words
    }

    pub fn codewords(&self) -> impl Iterator<Item = BitVector> + '_ {
        self.words
            .iter()
            .map(move |&w| BitVector::from_raw(self.n, w))
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        v.dim() == self.n && self.words.binary_search(&v.bits()).is_ok()
    }

    pub fn generator(&self) -> Option<&[u128]> {
        self.generator.as_deref()
    }

    pub fn is_linear(&self) -> bool {
        self.generator.is_some()
    }

    /// Reads a generator-matrix file: one row per line, characters '0'/'1'.
    pub fn read_generator_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let (n, rows) = parse_bit_rows(&text)?;
        Self::from_generator(n, rows, format!("generator:{}", path.display()))
    }

    /// Reads an explicit codeword list: one codeword per line.
    pub fn read_codeword_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let (n, rows) = parse_bit_rows(&text)?;
        Self::from_codewords(n, rows, format!("codewords:{}", path.display()))
    }
}

/// Parses newline-separated bit strings of a common length. A single trailing
/// newline is accepted; blank lines elsewhere and any other character are not.
pub fn parse_bit_rows(text: &str) -> Result<(usize, Vec<u128>)> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let body = body.strip_suffix('\r').unwrap_or(body);
    if body.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "empty input".into(),
        });
    }
    let mut n = None;
    let mut rows = Vec::new();
    for (idx, raw) in body.split('\n').enumerate() {
        let line = idx + 1;
        let row = raw.strip_suffix('\r').unwrap_or(raw);
        if row.is_empty() {
            return Err(Error::Parse {
                line,
                message: "blank line".into(),
            });
        }
        let v: BitVector = row.parse().map_err(|e: Error| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        match n {
            None => n = Some(v.dim()),
            Some(expected) if expected != v.dim() => {
                return Err(Error::Parse {
                    line,
                    message: format!("row has length {}, expected {expected}", v.dim()),
                })
            }
            _ => {}
        }
        rows.push(v.bits());
    }
    Ok((n.unwrap_or(0), rows))
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(invalid(msg()))
    }
}

fn bits_of(s: &str) -> u128 {
    s.parse::<BitVector>().expect("static bit string").bits()
}

/// Constructs a code from one of the built-in families.
pub fn make_code(kind: CodeKind) -> Result<Code> {
    let id = kind.to_string();
    match kind {
        CodeKind::Repetition(n) => {
            require((1..=MAX_DIM).contains(&n), || {
                format!("repetition length {n} out of range")
            })?;
            Code::from_generator(n, vec![low_mask(n)], id)
        }
        CodeKind::Parity(n) => {
            require((2..=MAX_DIM).contains(&n), || {
                format!("parity length {n} out of range")
            })?;
            require(n - 1 <= MAX_LOG_CODE_SIZE, || {
                format!("parity({n}) has too many codewords")
            })?;
            let last = 1u128 << (n - 1);
            let rows = (0..n - 1).map(|i| (1u128 << i) | last).collect();
            Code::from_generator(n, rows, id)
        }
        CodeKind::Hamming74 => {
            let rows = ["1000110", "0100101", "0010011", "0001111"]
                .iter()
                .map(|s| bits_of(s))
                .collect();
            Code::from_generator(7, rows, id)
        }
        CodeKind::ReedMuller { r, m } => {
            require(m <= 7, || {
                format!("reed_muller m = {m} gives n > {MAX_DIM}")
            })?;
            require(r <= m, || {
                format!("reed_muller order r = {r} exceeds m = {m}")
            })?;
            let n = 1usize << m;
            let mut monomials: Vec<usize> =
                (0..n).filter(|t| t.count_ones() as usize <= r).collect();
            monomials.sort_by_key(|t| (t.count_ones(), *t));
            let rows = monomials
                .into_iter()
                .map(|t| {
                    (0..n)
                        .filter(|&j| j & t == t)
                        .fold(0u128, |acc, j| acc | (1u128 << j))
                })
                .collect();
            Code::from_generator(n, rows, id)
        }
        CodeKind::RandomLinear { n, k, seed } => {
            require((1..=MAX_DIM).contains(&n), || {
                format!("random_linear length {n} out of range")
            })?;
            require(k >= 1 && k <= n, || {
                format!("random_linear dimension {k} not in [1, {n}]")
            })?;
            require(k <= MAX_LOG_CODE_SIZE, || {
                format!("random_linear dimension {k} too large to enumerate")
            })?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut basis = XorBasis::default();
            let mut rows = Vec::with_capacity(k);
            while rows.len() < k {
                let row = rng.gen::<u128>() & low_mask(n);
                if basis.insert(row) {
                    rows.push(row);
                }
            }
            Code::from_generator(n, rows, id)
        }
        CodeKind::Explicit(list) => {
            let first = list
                .first()
                .ok_or_else(|| invalid("explicit code needs at least one codeword"))?;
            let n = first.dim();
            if let Some(bad) = list.iter().find(|v| v.dim() != n) {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: bad.dim(),
                });
            }
            Code::from_codewords(n, list.iter().map(|v| v.bits()).collect(), id)
        }
        CodeKind::FullSpace(n) => {
            require((1..=MAX_LOG_CODE_SIZE).contains(&n), || {
                format!("full_space({n}) out of range")
            })?;
            Code::from_generator(n, (0..n).map(|i| 1u128 << i).collect(), id)
        }
        CodeKind::Single(n) => {
            require((1..=MAX_DIM).contains(&n), || {
                format!("single({n}) out of range")
            })?;
            Code::from_generator(n, Vec::new(), id)
        }
    }
}
