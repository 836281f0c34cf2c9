//! The Conway recursive sequence `C(j) = C(C(j-1)) + C(j - C(j-1))` and its
//! link with the word triangle: its increments spell the blocks line by line.

use crate::blocks::{block_length, materialize, BlockId};
use crate::error::{Error, Result};

/// Memoized values `C(1..=len)`.
#[derive(Clone, Debug)]
pub struct ConwaySeq {
    // values[0] is unused
    values: Vec<u32>,
}

impl ConwaySeq {
    pub fn new(len: usize) -> Self {
        let mut seq = ConwaySeq {
            values: vec![0, 1, 1],
        };
        seq.extend_to(len);
        seq
    }

    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn extend_to(&mut self, len: usize) {
        self.values.reserve(len.saturating_sub(self.len()));
        for j in self.values.len()..=len {
            let prev = self.values[j - 1] as usize;
            let v = self.values[prev] + self.values[j - prev];
            self.values.push(v);
        }
    }

    /// `C(j)` for `j >= 1`, extending the table on demand.
    pub fn get(&mut self, j: usize) -> Result<u32> {
        if j == 0 {
            return Err(Error::param("the sequence starts at j = 1"));
        }
        self.extend_to(j);
        Ok(self.values[j])
    }

    pub fn values(&self) -> &[u32] {
        &self.values[1..]
    }
}

pub fn conway(j: usize) -> Result<u32> {
    ConwaySeq::new(j.max(2)).get(j)
}

/// `D(j) = 2 (C(j) - C(j-1)) - 1` for `j = 3..=j_max`.
pub fn d_sequence(j_max: usize) -> Result<Vec<i8>> {
    if j_max < 3 {
        return Err(Error::param("j_max must be at least 3"));
    }
    let seq = ConwaySeq::new(j_max);
    let v = seq.values();
    Ok((3..=j_max)
        .map(|j| if v[j - 1] > v[j - 2] { 1 } else { -1 })
        .collect())
}

/// First disagreement between `D` and `B_{1,0} B_{1,1} B_{2,0} ...` through line `lines`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcatMismatch {
    pub j: usize,
    pub block: BlockId,
}

/// Checks that `(D(j))_{j>=3}` concatenates the blocks of lines `1..=lines`,
/// with `a -> +1`, `b -> -1`.
pub fn verify_concatenation(lines: u32) -> Result<std::result::Result<usize, ConcatMismatch>> {
    if lines == 0 || lines > 24 {
        return Err(Error::param("lines must be in 1..=24"));
    }
    let total: usize = (1usize << (lines + 1)) - 2;
    let d = d_sequence(total + 2)?;
    let mut j = 3;
    for n in 1..=lines {
        for k in 0..=n {
            let id = BlockId::new(n as i64, k as i64)?;
            let word = materialize(id, 1 << 24)?;
            for c in word.chars() {
                let expected = if c == 'a' { 1 } else { -1 };
                if d[j - 3] != expected {
                    return Ok(Err(ConcatMismatch { j, block: id }));
                }
                j += 1;
            }
        }
    }
    Ok(Ok(j - 3))
}

/// `B_{n,k}` rebuilt by cutting `B_{n-1,k-1}` after each `a` and `B_{n-1,k}`
/// after each `b`, then interleaving the pieces starting from the left word.
pub fn interleave(n: u32, k: u32, cap: u64) -> Result<String> {
    if !(0 < k && k < n) {
        return Err(Error::param("interleaving needs 0 < k < n"));
    }
    let id = BlockId::new(n as i64, k as i64)?;
    let len = block_length(id);
    if len > cap.into() {
        return Err(Error::CapExceeded { len, cap });
    }
    let left = materialize(BlockId::new(n as i64 - 1, k as i64 - 1)?, cap)?;
    let right = materialize(BlockId::new(n as i64 - 1, k as i64)?, cap)?;
    let lp: Vec<&str> = left.split_inclusive('a').collect();
    let rp: Vec<&str> = right.split_inclusive('b').collect();
    let mut out = String::with_capacity(left.len() + right.len());
    for i in 0..lp.len().max(rp.len()) {
        out.push_str(lp.get(i).copied().unwrap_or(""));
        out.push_str(rp.get(i).copied().unwrap_or(""));
    }
    Ok(out)
}

/// The pieces of the left and right words, for display.
pub fn interleave_pieces(n: u32, k: u32, cap: u64) -> Result<(Vec<String>, Vec<String>)> {
    interleave(n, k, cap)?;
    let left = materialize(BlockId::new(n as i64 - 1, k as i64 - 1)?, cap)?;
    let right = materialize(BlockId::new(n as i64 - 1, k as i64)?, cap)?;
    let cut = |w: &str, at: char| {
        let mut pieces: Vec<String> = w.split_inclusive(at).map(str::to_string).collect();
        if w.ends_with(at) || w.is_empty() {
            pieces.push(String::new());
        }
        pieces
    };
    Ok((cut(&left, 'a'), cut(&right, 'b')))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::height;
    use num_bigint::BigInt;

    #[test]
    fn conway_examples() {
        let mut seq = ConwaySeq::new(12);
        assert_eq!(seq.get(1).unwrap(), 1);
        assert_eq!(seq.get(2).unwrap(), 1);
        assert_eq!(seq.get(3).unwrap(), 2);
        assert_eq!(seq.get(4).unwrap(), 2);
        assert_eq!(seq.values()[..12], [1, 1, 2, 2, 3, 4, 4, 4, 5, 6, 7, 7]);
        assert!(seq.get(0).is_err());
    }

    #[test]
    fn increments_are_zero_or_one() {
        let seq = ConwaySeq::new(1 << 20);
        assert!(seq
            .values()
            .windows(2)
            .all(|w| w[1] - w[0] <= 1 && w[1] >= w[0]));
    }

    #[test]
    fn d_matches_increments() {
        let seq = ConwaySeq::new(100);
        let d = d_sequence(100).unwrap();
        for (i, &v) in d.iter().enumerate() {
            let j = i + 3;
            let inc = seq.values()[j - 1] - seq.values()[j - 2];
            assert_eq!(v as i32, 2 * inc as i32 - 1);
        }
        assert!(d_sequence(2).is_err());
    }

    #[test]
    fn d_concatenates_blocks() {
        assert_eq!(
            verify_concatenation(6).unwrap(),
            Ok(2 + 4 + 8 + 16 + 32 + 64)
        );
        assert_eq!(verify_concatenation(14).unwrap().unwrap(), (1 << 15) - 2);
    }

    #[test]
    fn segment_sums_are_heights() {
        let d = d_sequence(2 + (1 << 11)).unwrap();
        let mut j = 0;
        for n in 1..=10u32 {
            for k in 0..=n {
                let id = BlockId::new(n as i64, k as i64).unwrap();
                let len: usize = (&block_length(id)).try_into().unwrap();
                let sum: i64 = d[j..j + len].iter().map(|&v| v as i64).sum();
                assert_eq!(BigInt::from(sum), height(id));
                j += len;
            }
        }
    }

    #[test]
    fn interleave_examples() {
        assert_eq!(interleave(4, 2, 1 << 20).unwrap(), "aababb");
        assert_eq!(interleave(2, 1, 1 << 20).unwrap(), "ab");
        let (l, r) = interleave_pieces(4, 2, 1 << 20).unwrap();
        assert_eq!(l, ["a", "a", "b"]);
        assert_eq!(r, ["ab", "b", ""]);
        assert!(interleave(4, 0, 1 << 20).is_err());
        assert!(matches!(
            interleave(20, 10, 1000),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn interleave_equals_concatenation() {
        for n in 2..=14u32 {
            for k in 1..n {
                let id = BlockId::new(n as i64, k as i64).unwrap();
                assert_eq!(
                    interleave(n, k, 1 << 20).unwrap(),
                    materialize(id, 1 << 20).unwrap()
                );
            }
        }
    }
}
