//! Cutting-and-stacking model of the Pascal-adic transformation on `[0,1)`.
//!
//! At level `n` the unit interval is cut into `2^n` dyadic intervals grouped
//! into towers `tau(n,0..=n)`, `tau(n,k)` having `C(n,k)` rungs. A point is
//! a finite binary expansion; its tower index at level `n` is the sum of its
//! first `n` digits and its rung index follows from a digit recursion, so `T`
//! can act on points far beyond the levels where towers could be listed.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curves::CurveSamples;
use crate::dyadicg::DyadicFunction;
use crate::error::{Error, Result};
use crate::exactnum::{binomial, Rational};

/// Default highest level for explicit tower listings.
pub const DEFAULT_TOWER_CAP: u32 = 22;

/// A dyadic interval `[j 2^-d, (j+1) 2^-d)` given by its `d` leading binary digits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    digits: Vec<u8>,
}

impl Point {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::param("a point needs at least one digit"));
        }
        if digits.iter().any(|&d| d > 1) {
            return Err(Error::param("digits must be 0 or 1"));
        }
        Ok(Point { digits })
    }

    /// Parses a binary expansion such as `0.0110` (the leading `0.` is optional).
    pub fn parse_binary(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s.strip_prefix("0.").unwrap_or(s);
        let digits = body
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("not a binary expansion: {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Point::new(digits)
    }

    /// The point `index / 2^depth`.
    pub fn from_index(index: u64, depth: usize) -> Result<Self> {
        if depth == 0 || depth > 64 || (depth < 64 && index >> depth != 0) {
            return Err(Error::param(format!(
                "index {index} does not fit depth {depth}"
            )));
        }
        Point::new(
            (0..depth)
                .map(|i| ((index >> (depth - 1 - i)) & 1) as u8)
                .collect(),
        )
    }

    pub fn zeros(depth: usize) -> Self {
        Point {
            digits: vec![0; depth.max(1)],
        }
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Integer formed by the first `n <= 64` digits.
    pub fn prefix_index(&self, n: usize) -> u64 {
        self.digits[..n]
            .iter()
            .fold(0u64, |acc, &d| (acc << 1) | d as u64)
    }

    /// Left end point of the represented interval.
    pub fn to_rational(&self) -> Rational {
        let num = self
            .digits
            .iter()
            .fold(BigUint::zero(), |acc, &d| (acc << 1u32) + d as u32);
        Rational::new(num.into(), (BigUint::one() << self.depth()).into())
    }

    pub fn to_f64(&self) -> f64 {
        self.digits
            .iter()
            .enumerate()
            .take(60)
            .map(|(i, &d)| d as f64 * 0.5f64.powi(i as i32 + 1))
            .sum()
    }

    fn extend(&mut self, extra: impl IntoIterator<Item = u8>) {
        self.digits.extend(extra);
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0.")?;
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Tower `tau(n,k)`: rung `r` is the interval with index `rungs[r]` at width `2^-n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tower {
    pub n: u32,
    pub k: u32,
    pub rungs: Vec<u64>,
}

impl Tower {
    pub fn height(&self) -> usize {
        self.rungs.len()
    }
}

/// Explicit towers at level `n`, built by cutting and stacking: `tau(n+1,k)`
/// is the right half-column of `tau(n,k-1)` under the left half-column of `tau(n,k)`.
pub fn build_towers(n: u32, cap: u32) -> Result<Vec<Tower>> {
    if n == 0 {
        return Err(Error::param("tower level must be at least 1"));
    }
    if n > cap {
        return Err(Error::CapExceeded {
            len: BigUint::one() << n,
            cap: 1u64 << cap.min(63),
        });
    }
    let mut level: Vec<Vec<u64>> = vec![vec![0], vec![1]];
    for _ in 1..n {
        let mut next = Vec::with_capacity(level.len() + 1);
        for k in 0..=level.len() {
            let mut rungs = Vec::new();
            if k > 0 {
                rungs.extend(level[k - 1].iter().map(|&r| 2 * r + 1));
            }
            if k < level.len() {
                rungs.extend(level[k].iter().map(|&r| 2 * r));
            }
            next.push(rungs);
        }
        level = next;
    }
    Ok(level
        .into_iter()
        .enumerate()
        .map(|(k, rungs)| Tower {
            n,
            k: k as u32,
            rungs,
        })
        .collect())
}

/// `k_n(x)`: sum of the first `n` digits, the index of the level-`n` tower containing `x`.
pub fn tower_index(x: &Point, n: usize) -> Result<u32> {
    if n == 0 || n > x.depth() {
        return Err(Error::param(format!(
            "level {n} outside 1..={} for this point",
            x.depth()
        )));
    }
    Ok(x.digits[..n].iter().map(|&d| d as u32).sum())
}

/// Walks levels `1..=depth`, yielding `(n, k_n, rung index)`.
pub fn levels(x: &Point) -> impl Iterator<Item = (usize, u32, BigUint)> + '_ {
    let mut k = 0u32;
    let mut r = BigUint::zero();
    x.digits.iter().enumerate().map(move |(i, &d)| {
        let n = i + 1;
        if n > 1 && d == 0 && k > 0 {
            // upper part of tau(n,k): above the copy of tau(n-1,k-1)
            r += binomial(n as u64 - 1, k as i64 - 1);
        }
        k += d as u32;
        (n, k, r.clone())
    })
}

/// Height of `x` inside its level-`n` tower.
pub fn rung_index(x: &Point, n: usize) -> Result<BigUint> {
    tower_index(x, n)?;
    Ok(levels(x).nth(n - 1).unwrap().2)
}

/// Leading `n` digits of the rung `r` of `tau(n,k)`; inverse of the digit recursion.
pub fn encode_rung(n: usize, k: u32, r: &BigUint) -> Result<Vec<u8>> {
    if n == 0 || k as usize > n || *r >= binomial(n as u64, k as i64) {
        return Err(Error::param(format!("no rung {r} in tau({n},{k})")));
    }
    let mut digits = vec![0u8; n];
    let (mut k, mut r) = (k, r.clone());
    for level in (2..=n).rev() {
        let lower = binomial(level as u64 - 1, k as i64 - 1);
        if r < lower {
            digits[level - 1] = 1;
            k -= 1;
        } else {
            r -= lower;
        }
    }
    digits[0] = k as u8;
    Ok(digits)
}

/// One step of the transformation: at the first level where `x` is not on
/// the top rung, move to the same relative position in the next rung.
pub fn apply_t(x: &Point) -> Result<Point> {
    for (n, k, r) in levels(x) {
        let next = r + 1u32;
        if next < binomial(n as u64, k as i64) {
            let mut digits = encode_rung(n, k, &next)?;
            digits.extend_from_slice(&x.digits[n..]);
            return Ok(Point { digits });
        }
    }
    Err(Error::UndefinedAtDepth { depth: x.depth() })
}

fn bernoulli_digit(p: &Rational, rng: &mut ChaCha8Rng) -> Result<u8> {
    let num = p.numer().to_u64();
    let den = p.denom().to_u64();
    match (num, den) {
        (Some(num), Some(den)) => Ok((rng.gen_range(0..den) < num) as u8),
        _ => Err(Error::param(
            "p must have a numerator and denominator below 2^64",
        )),
    }
}

fn check_probability(p: &Rational) -> Result<()> {
    if *p <= Rational::zero() || *p >= Rational::one() {
        return Err(Error::param("p must lie strictly between 0 and 1"));
    }
    Ok(())
}

/// A `mu_p`-distributed point: i.i.d. digits equal to 1 with probability `p`.
pub fn sample_mu_p(p: &Rational, depth: usize, rng: &mut ChaCha8Rng) -> Result<Point> {
    check_probability(p)?;
    let digits = (0..depth.max(1))
        .map(|_| bernoulli_digit(p, rng))
        .collect::<Result<Vec<u8>>>()?;
    Point::new(digits)
}

pub fn sample_mu_p_seeded(p: &Rational, depth: usize, seed: u64) -> Result<Point> {
    sample_mu_p(p, depth, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `mu_p` of the dyadic interval with the given leading digits.
pub fn mu_p_interval(p: &Rational, digits: &[u8]) -> Rational {
    let q = Rational::one() - p;
    digits.iter().fold(
        Rational::one(),
        |acc, &d| {
            if d == 1 {
                acc * p
            } else {
                acc * &q
            }
        },
    )
}

/// How an orbit obtains digits beyond the current depth.
#[derive(Clone, Debug)]
pub enum Extension {
    /// Never deepen.
    Fixed,
    /// Append zeros, up to `max_depth` digits.
    Zeros { max_depth: usize },
    /// Append seeded Bernoulli(`p`) digits, up to `max_depth` digits.
    Bernoulli {
        p: Rational,
        seed: u64,
        max_depth: usize,
    },
}

const EXTENSION_CHUNK: usize = 16;

/// Iterates `x, Tx, T^2 x, ...`, deepening the point on demand.
pub struct Orbit {
    point: Point,
    extension: Extension,
    rng: Option<ChaCha8Rng>,
}

impl Orbit {
    pub fn new(x: Point, extension: Extension) -> Self {
        let rng = match &extension {
            Extension::Bernoulli { seed, .. } => Some(ChaCha8Rng::seed_from_u64(*seed)),
            _ => None,
        };
        Orbit {
            point: x,
            extension,
            rng,
        }
    }

    pub fn point(&self) -> &Point {
        &self.point
    }

    /// Deepens the current point by one chunk; false when the policy forbids it.
    fn deepen(&mut self) -> Result<bool> {
        let depth = self.point.depth();
        match &self.extension {
            Extension::Fixed => Ok(false),
            Extension::Zeros { max_depth } => {
                let extra = EXTENSION_CHUNK.min(max_depth.saturating_sub(depth));
                self.point.extend(std::iter::repeat_n(0, extra));
                Ok(extra > 0)
            }
            Extension::Bernoulli { p, max_depth, .. } => {
                let extra = EXTENSION_CHUNK.min(max_depth.saturating_sub(depth));
                let p = p.clone();
                let rng = self.rng.as_mut().unwrap();
                let digits = (0..extra)
                    .map(|_| bernoulli_digit(&p, rng))
                    .collect::<Result<Vec<u8>>>()?;
                self.point.extend(digits);
                Ok(extra > 0)
            }
        }
    }

    /// Makes sure the point has at least `depth` digits.
    pub fn ensure_depth(&mut self, depth: usize) -> Result<()> {
        while self.point.depth() < depth {
            if !self.deepen()? {
                return Err(Error::param(format!(
                    "point has {} digits, {depth} needed",
                    self.point.depth()
                )));
            }
        }
        Ok(())
    }

    pub fn advance(&mut self) -> Result<()> {
        loop {
            match apply_t(&self.point) {
                Ok(next) => {
                    self.point = next;
                    return Ok(());
                }
                Err(err @ Error::UndefinedAtDepth { .. }) => {
                    if !self.deepen()? {
                        return Err(err);
                    }
                }
                Err(other) => return Err(other),
            }
        }
    }
}

/// Ergodic sums `F(j) = sum_{i<j} g(T^i x)` for `j = 0..=len`.
pub fn orbit_sums(
    g: &DyadicFunction,
    x: &Point,
    len: usize,
    extension: &Extension,
) -> Result<Vec<Rational>> {
    let mut orbit = Orbit::new(x.clone(), extension.clone());
    orbit.ensure_depth(g.level() as usize)?;
    let mut sums = Vec::with_capacity(len + 1);
    sums.push(Rational::zero());
    for j in 0..len {
        let v = g.value_at(orbit.point())?;
        sums.push(&sums[j] + v);
        if j + 1 < len {
            orbit.advance()?;
        }
    }
    Ok(sums)
}

/// Letters (`a` for the left half, `b` for the right half) along the first `len` orbit points.
pub fn orbit_letters(x: &Point, len: usize, extension: &Extension) -> Result<String> {
    let mut orbit = Orbit::new(x.clone(), extension.clone());
    let mut out = String::with_capacity(len);
    for j in 0..len {
        out.push(if orbit.point().digits()[0] == 0 {
            'a'
        } else {
            'b'
        });
        if j + 1 < len {
            orbit.advance()?;
        }
    }
    Ok(out)
}

/// Renormalized pointwise curve: `(F(j) - (j/len) F(len)) / R` at `t = j/len`,
/// with `R` the largest absolute numerator (or 1 when that is zero).
pub fn orbit_curve(
    g: &DyadicFunction,
    x: &Point,
    len: usize,
    extension: &Extension,
) -> Result<CurveSamples> {
    if len == 0 {
        return Err(Error::param("orbit length must be at least 1"));
    }
    let sums = orbit_sums(g, x, len, extension)?;
    let total = &sums[len];
    let ell = Rational::from_integer(len.into());
    let numerators: Vec<Rational> = sums
        .iter()
        .enumerate()
        .map(|(j, f)| f - Rational::from_integer(j.into()) / &ell * total)
        .collect();
    let r = numerators
        .iter()
        .map(|v| {
            if *v < Rational::zero() {
                -v.clone()
            } else {
                v.clone()
            }
        })
        .max()
        .unwrap();
    let r = if r.is_zero() { Rational::one() } else { r };
    let ts = (0..=len)
        .map(|j| Rational::from_integer(j.into()) / &ell)
        .collect();
    let values = numerators.into_iter().map(|v| v / &r).collect();
    CurveSamples::new(ts, values)
}

/// Smallest level `n` in `n_min..=n_max` where the height of `x` in its tower
/// is below `1/s` of the tower height.
pub fn find_subsequence(x: &Point, s: u32, n_min: usize, n_max: usize) -> Result<Option<usize>> {
    if s == 0 {
        return Err(Error::param("s must be positive"));
    }
    if n_max > x.depth() {
        return Err(Error::param(format!(
            "n_max {n_max} exceeds point depth {}",
            x.depth()
        )));
    }
    let s = BigUint::from(s);
    Ok(levels(x)
        .take(n_max)
        .skip(n_min.saturating_sub(1))
        .find(|(n, k, r)| r * &s < binomial(*n as u64, *k as i64))
        .map(|(n, _, _)| n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{materialize, BlockId};
    use crate::exactnum::rat;
    use std::collections::HashMap;

    /// (interval index) -> (k, rung) from the explicit listing.
    fn locate(n: u32) -> HashMap<u64, (u32, usize)> {
        let mut map = HashMap::new();
        for t in build_towers(n, DEFAULT_TOWER_CAP).unwrap() {
            for (r, &idx) in t.rungs.iter().enumerate() {
                map.insert(idx, (t.k, r));
            }
        }
        map
    }

    #[test]
    fn build_towers_examples() {
        let t2 = build_towers(2, 22).unwrap();
        assert_eq!(
            t2.iter().map(Tower::height).collect::<Vec<_>>(),
            vec![1, 2, 1]
        );
        assert_eq!(t2[1].rungs, vec![1, 2]);
        let t1 = build_towers(1, 22).unwrap();
        assert_eq!(t1[0].rungs, vec![0]);
        let t3 = build_towers(3, 22).unwrap();
        assert_eq!(t3[1].rungs, vec![1, 2, 4]);
        assert!(matches!(
            build_towers(23, 22),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn towers_partition_each_level() {
        for n in 1..=12u32 {
            let towers = build_towers(n, 22).unwrap();
            let mut seen = vec![0u8; 1 << n];
            for t in &towers {
                assert_eq!(BigUint::from(t.height()), binomial(n as u64, t.k as i64));
                for &r in &t.rungs {
                    seen[r as usize] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1), "level {n}");
        }
    }

    #[test]
    fn apply_t_examples() {
        let quarter = Point::parse_binary("0.01").unwrap();
        assert_eq!(apply_t(&quarter).unwrap().to_rational(), rat(1, 2));
        let x = Point::parse_binary("0.011").unwrap();
        assert_eq!(apply_t(&x).unwrap().to_rational(), rat(5, 8));
        for depth in 1..40 {
            let mut d = vec![0u8; depth];
            d[0] = 1;
            let half = Point::new(d).unwrap();
            assert!(matches!(
                apply_t(&half),
                Err(Error::UndefinedAtDepth { depth: got }) if got == depth
            ));
        }
    }

    #[test]
    fn tower_index_examples() {
        let x = Point::parse_binary("0.011").unwrap();
        assert_eq!(tower_index(&x, 3).unwrap(), 2);
        assert!(locate(3)[&3].0 == 2);
        let z = Point::zeros(30);
        assert!((1..=30).all(|n| tower_index(&z, n).unwrap() == 0));
        let half = Point::parse_binary("0.100").unwrap();
        assert_eq!(tower_index(&half, 1).unwrap(), 1);
    }

    #[test]
    fn rung_index_examples() {
        for idx in 0..1u64 {
            let x = Point::from_index(idx, 2).unwrap();
            assert_eq!(rung_index(&x, 2).unwrap(), BigUint::zero());
        }
        let half = Point::parse_binary("0.10").unwrap();
        assert_eq!(rung_index(&half, 2).unwrap(), BigUint::one());
        let quarter = Point::parse_binary("0.01").unwrap();
        assert_eq!(rung_index(&quarter, 2).unwrap(), BigUint::zero());
    }

    #[test]
    fn digit_rule_matches_tower_search() {
        for n in 1..=12u32 {
            let map = locate(n);
            for idx in 0..(1u64 << 12) {
                let x = Point::from_index(idx, 12).unwrap();
                let (k, r) = map[&x.prefix_index(n as usize)];
                assert_eq!(tower_index(&x, n as usize).unwrap(), k);
                assert_eq!(rung_index(&x, n as usize).unwrap(), BigUint::from(r));
            }
        }
    }

    #[test]
    fn encode_inverts_digit_rule() {
        for n in 1..=10u32 {
            for t in build_towers(n, 22).unwrap() {
                for (r, &idx) in t.rungs.iter().enumerate() {
                    let digits = encode_rung(n as usize, t.k, &BigUint::from(r)).unwrap();
                    assert_eq!(Point::new(digits).unwrap().prefix_index(n as usize), idx);
                }
            }
        }
    }

    #[test]
    fn t_climbs_one_rung() {
        for n in 1..=10u32 {
            let map = locate(n);
            for t in build_towers(n, 22).unwrap() {
                for r in 0..t.height() - 1 {
                    let x = Point::from_index(t.rungs[r], n as usize).unwrap();
                    let y = apply_t(&x).unwrap();
                    assert_eq!(map[&y.prefix_index(n as usize)], (t.k, r + 1));
                    // a translation: the offset is the difference of the rung intervals
                    let shift = Rational::new(
                        (t.rungs[r + 1] as i64 - t.rungs[r] as i64).into(),
                        (1i64 << n).into(),
                    );
                    assert_eq!(y.to_rational() - x.to_rational(), shift);
                }
            }
        }
    }

    #[test]
    fn mu_p_examples() {
        let p = rat(2, 7);
        assert_eq!(mu_p_interval(&p, &[1]), p);
        for n in 1..=12usize {
            let total: Rational = (0..1u64 << n)
                .map(|i| mu_p_interval(&p, Point::from_index(i, n).unwrap().digits()))
                .sum();
            assert_eq!(total, Rational::one());
        }
        for n0 in 1..=8u32 {
            for t in build_towers(n0, 22).unwrap() {
                let expected = crate::exactnum::pow(&p, t.k)
                    * crate::exactnum::pow(&(Rational::one() - &p), n0 - t.k);
                for &idx in &t.rungs {
                    let x = Point::from_index(idx, n0 as usize).unwrap();
                    assert_eq!(mu_p_interval(&p, x.digits()), expected);
                }
            }
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let p = rat(1, 2);
        let a = sample_mu_p_seeded(&p, 64, 7).unwrap();
        let b = sample_mu_p_seeded(&p, 64, 7).unwrap();
        assert_eq!(a, b);
        assert!(sample_mu_p_seeded(&rat(3, 2), 4, 0).is_err());
    }

    #[test]
    fn k_n_law_of_large_numbers() {
        let p = rat(1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let points: Vec<Point> = (0..1000)
            .map(|_| sample_mu_p(&p, 400, &mut rng).unwrap())
            .collect();
        let mean_dev = |n: usize| {
            points
                .iter()
                .map(|x| (tower_index(x, n).unwrap() as f64 / n as f64 - 1.0 / 3.0).abs())
                .sum::<f64>()
                / points.len() as f64
        };
        assert!(mean_dev(400) < mean_dev(50));
    }

    #[test]
    fn orbit_from_tower_base_spells_block() {
        for n in 1..=12u32 {
            for t in build_towers(n, 22).unwrap() {
                let x = Point::from_index(t.rungs[0], n as usize).unwrap();
                let word = orbit_letters(&x, t.height(), &Extension::Fixed).unwrap();
                let expected =
                    materialize(BlockId::new(n as i64, t.k as i64).unwrap(), 1 << 20).unwrap();
                assert_eq!(word, expected);
            }
        }
    }

    #[test]
    fn orbit_curve_trivial_length() {
        let g = DyadicFunction::ab_indicator();
        let c = orbit_curve(&g, &Point::zeros(4), 1, &Extension::Fixed).unwrap();
        assert_eq!(c.values(), &[Rational::zero(), Rational::zero()]);
    }

    #[test]
    fn orbit_extends_digits_on_demand() {
        let g = DyadicFunction::ab_indicator();
        // 0.1 is on a top rung at depth 1; zero padding reaches undefined forever
        let x = Point::parse_binary("0.1").unwrap();
        let err = orbit_sums(&g, &x, 3, &Extension::Zeros { max_depth: 64 }).unwrap_err();
        assert!(matches!(err, Error::UndefinedAtDepth { .. }));
        // 0.01 sits on a top rung at depth 1 only; its image 1/2 is top forever
        let y = Point::parse_binary("0.01").unwrap();
        let sums = orbit_sums(&g, &y, 2, &Extension::Fixed).unwrap();
        assert_eq!(
            sums,
            vec![Rational::zero(), Rational::one(), Rational::zero()]
        );
        let err = orbit_sums(&g, &y, 3, &Extension::Zeros { max_depth: 64 }).unwrap_err();
        assert_eq!(err, Error::UndefinedAtDepth { depth: 64 });
        let z = Point::parse_binary("0.01").unwrap();
        let s = rat(1, 2);
        let ext = Extension::Bernoulli {
            p: s,
            seed: 3,
            max_depth: 256,
        };
        let a = orbit_sums(&g, &z, 50, &ext).unwrap();
        let b = orbit_sums(&g, &z, 50, &ext).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn find_subsequence_examples() {
        let z = Point::zeros(10);
        assert_eq!(find_subsequence(&z, 1, 1, 10).unwrap(), Some(1));
        assert_eq!(find_subsequence(&z, 7, 1, 10).unwrap(), Some(1));
        // 1/2 climbs to the top of tau(n,1) for every n >= 2
        let mut d = vec![0u8; 64];
        d[0] = 1;
        let half = Point::new(d).unwrap();
        assert_eq!(find_subsequence(&half, 2, 2, 64).unwrap(), None);
        assert_eq!(find_subsequence(&half, 1, 2, 64).unwrap(), Some(2));
        assert!(find_subsequence(&half, 1, 2, 65).is_err());
    }
}
