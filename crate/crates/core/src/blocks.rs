//! The word triangle `B(n,k)` over `{a, b}` and its generalization over the
//! alphabet `{a_0, ..., a_N0}`.
//!
//! Words have binomial length, so every query here descends the recursion
//! `B(n,k) = B(n-1,k-1) B(n-1,k)` instead of materializing the word. Only
//! [`materialize`] builds letters, and only below a caller-supplied cap.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, PascalRows};

/// Default cap on materialized words.
pub const DEFAULT_WORD_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockId {
    n: u32,
    k: u32,
}

impl BlockId {
    /// Classical block: `n >= 1`, `0 <= k <= n`.
    pub fn new(n: i64, k: i64) -> Result<Self> {
        Self::with_min_level(n, k, 1)
    }

    /// Block of the generalized triangle with base line `n0`.
    pub fn generalized(n0: u32, n: i64, k: i64) -> Result<Self> {
        Self::with_min_level(n, k, n0.max(1))
    }

    fn with_min_level(n: i64, k: i64, min_n: u32) -> Result<Self> {
        if n < min_n as i64 || k < 0 || k > n || n > u32::MAX as i64 {
            return Err(Error::InvalidBlock { n, k, min_n });
        }
        Ok(BlockId {
            n: n as u32,
            k: k as u32,
        })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn is_edge(self) -> bool {
        self.k == 0 || self.k == self.n
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({},{})", self.n, self.k)
    }
}

/// A letter `a_index`. In the classical alphabet index 0 is `a` and 1 is `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    pub const A: Letter = Letter(0);
    pub const B: Letter = Letter(1);

    pub fn index(self) -> u32 {
        self.0
    }

    /// `a` or `b`; only meaningful for the two-letter alphabet.
    pub fn symbol(self) -> char {
        if self.0 == 0 {
            'a'
        } else {
            'b'
        }
    }

    /// `+1` for `a`, `-1` for `b`.
    pub fn increment(self) -> i32 {
        if self.0 == 0 {
            1
        } else {
            -1
        }
    }
}

pub fn block_length(id: BlockId) -> BigUint {
    binomial(id.n as u64, id.k as i64)
}

fn check_position(pos: &BigUint, len: &BigUint, allow_zero: bool) -> Result<()> {
    if pos > len || (!allow_zero && pos.is_zero()) {
        return Err(Error::OutOfRange {
            pos: pos.clone(),
            len: len.clone(),
        });
    }
    Ok(())
}

/// The `pos`-th letter (1-based) of `B(n,k)`.
pub fn letter_at(id: BlockId, pos: &BigUint) -> Result<Letter> {
    check_position(pos, &block_length(id), false)?;
    let (mut n, mut k) = (id.n as u64, id.k as u64);
    let mut pos = pos.clone();
    while k != 0 && k != n {
        let left = binomial(n - 1, k as i64 - 1);
        if pos <= left {
            k -= 1;
        } else {
            pos -= left;
        }
        n -= 1;
    }
    Ok(if k == 0 { Letter::A } else { Letter::B })
}

/// Visits the letters of `B(n,k)` in order.
pub fn for_each_letter(id: BlockId, mut visit: impl FnMut(Letter)) {
    let mut stack = vec![(id.n, id.k)];
    while let Some((n, k)) = stack.pop() {
        if k == 0 {
            visit(Letter::A);
        } else if k == n {
            visit(Letter::B);
        } else {
            stack.push((n - 1, k));
            stack.push((n - 1, k - 1));
        }
    }
}

fn check_cap(len: &BigUint, cap: u64) -> Result<()> {
    if *len > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            len: len.clone(),
            cap,
        });
    }
    Ok(())
}

pub fn materialize_letters(id: BlockId, cap: u64) -> Result<Vec<Letter>> {
    let len = block_length(id);
    check_cap(&len, cap)?;
    let mut out = Vec::with_capacity(usize::try_from(&len).unwrap_or(0));
    for_each_letter(id, |l| out.push(l));
    Ok(out)
}

/// The full word as a string over `{a, b}`.
pub fn materialize(id: BlockId, cap: u64) -> Result<String> {
    Ok(materialize_letters(id, cap)?
        .into_iter()
        .map(Letter::symbol)
        .collect())
}

/// The word as `+1/-1` increments.
pub fn increments(id: BlockId, cap: u64) -> Result<Vec<i32>> {
    Ok(materialize_letters(id, cap)?
        .into_iter()
        .map(Letter::increment)
        .collect())
}

/// Number of `a` in `B(n,k)`: `C(n-1,k)`.
pub fn count_a(id: BlockId) -> BigUint {
    binomial(id.n as u64 - 1, id.k as i64)
}

/// Number of `a` among the first `pos` letters.
pub fn count_a_prefix(id: BlockId, pos: &BigUint) -> Result<BigUint> {
    check_position(pos, &block_length(id), true)?;
    let (mut n, mut k) = (id.n as u64, id.k as u64);
    let mut pos = pos.clone();
    let mut acc = BigUint::zero();
    while !pos.is_zero() {
        if k == 0 {
            acc += pos;
            break;
        }
        if k == n {
            break;
        }
        let left = binomial(n - 1, k as i64 - 1);
        if pos >= left {
            // B(n-1,k-1) is complete; n - 1 >= 1 here
            acc += binomial(n - 2, k as i64 - 1);
            pos -= left;
        } else {
            k -= 1;
        }
        n -= 1;
    }
    Ok(acc)
}

/// `#a - #b` in `B(n,k)`, i.e. `2 C(n-1,k) - C(n,k)`.
pub fn height(id: BlockId) -> BigInt {
    BigInt::from(count_a(id)) * 2 - BigInt::from(block_length(id))
}

/// Letter counts of the generalized triangle: `len(N0,k) = 1`, unit edges,
/// Pascal recursion inside.
pub struct LetterLengths {
    n0: u32,
    rows: PascalRows,
}

impl LetterLengths {
    fn new(n0: u32) -> Self {
        LetterLengths {
            n0,
            rows: PascalRows::new(n0 as u64, vec![BigUint::one(); n0 as usize + 1]),
        }
    }

    pub fn n0(&self) -> u32 {
        self.n0
    }

    pub fn get(&self, n: u32, k: i64) -> BigUint {
        if n < self.n0 || k < 0 || k > n as i64 {
            return BigUint::zero();
        }
        self.rows.row(n as u64)[k as usize].clone()
    }
}

static LETTER_LENGTHS: OnceLock<Mutex<HashMap<u32, Arc<LetterLengths>>>> = OnceLock::new();

/// Memoized letter-length table for base line `n0`.
pub fn letter_lengths(n0: u32) -> Arc<LetterLengths> {
    let map = LETTER_LENGTHS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = map.lock().unwrap();
    Arc::clone(
        map.entry(n0)
            .or_insert_with(|| Arc::new(LetterLengths::new(n0))),
    )
}

/// Number of letters of `B^{n0}(n,k)`.
pub fn generalized_letter_length(n0: u32, id: BlockId) -> BigUint {
    letter_lengths(n0).get(id.n, id.k as i64)
}

/// The `pos`-th letter (1-based, counted in letters) of `B^{n0}(n,k)`.
pub fn generalized_letter_at(n0: u32, id: BlockId, pos: &BigUint) -> Result<Letter> {
    if id.n < n0 {
        return Err(Error::InvalidBlock {
            n: id.n as i64,
            k: id.k as i64,
            min_n: n0,
        });
    }
    let table = letter_lengths(n0);
    check_position(pos, &table.get(id.n, id.k as i64), false)?;
    let (mut n, mut k) = (id.n, id.k);
    let mut pos = pos.clone();
    loop {
        if n == n0 {
            return Ok(Letter(k));
        }
        if k == 0 {
            return Ok(Letter(0));
        }
        if k == n {
            return Ok(Letter(n0));
        }
        let left = table.get(n - 1, k as i64 - 1);
        if pos <= left {
            k -= 1;
        } else {
            pos -= left;
        }
        n -= 1;
    }
}

/// Visits the letters of `B^{n0}(n,k)` in order.
pub fn for_each_generalized_letter(n0: u32, id: BlockId, mut visit: impl FnMut(Letter)) {
    let mut stack = vec![(id.n, id.k)];
    while let Some((n, k)) = stack.pop() {
        if n <= n0 {
            visit(Letter(k));
        } else if k == 0 {
            visit(Letter(0));
        } else if k == n {
            visit(Letter(n0));
        } else {
            stack.push((n - 1, k));
            stack.push((n - 1, k - 1));
        }
    }
}

pub fn materialize_generalized(n0: u32, id: BlockId, cap: u64) -> Result<Vec<Letter>> {
    let len = generalized_letter_length(n0, id);
    check_cap(&len, cap)?;
    let mut out = Vec::new();
    for_each_generalized_letter(n0, id, |l| out.push(l));
    Ok(out)
}
