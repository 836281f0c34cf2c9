//! Exact arithmetic substrate.
//!
//! Integers and rationals come from `num-bigint` / `num-rational`; this module
//! adds the memoized binomial table, parsing/formatting helpers and a small
//! polynomial type with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default number of Pascal rows kept in the shared cache.
pub const DEFAULT_BINOMIAL_ROWS: u64 = 1024;

/// Lazily extended Pascal-type rows: row `base_level` is given, row `n + 1`
/// has unit end points and interior entries `row[n][j-1] + row[n][j]`.
pub(crate) struct PascalRows {
    base_level: u64,
    rows: RwLock<Vec<Arc<[BigUint]>>>,
}

impl PascalRows {
    pub(crate) fn new(base_level: u64, base_row: Vec<BigUint>) -> Self {
        PascalRows {
            base_level,
            rows: RwLock::new(vec![Arc::from(base_row)]),
        }
    }

    pub(crate) fn row(&self, n: u64) -> Arc<[BigUint]> {
        assert!(
            n >= self.base_level,
            "row {n} below base level {}",
            self.base_level
        );
        let idx = (n - self.base_level) as usize;
        {
            let rows = self.rows.read().unwrap();
            if let Some(r) = rows.get(idx) {
                return Arc::clone(r);
            }
        }
        let mut rows = self.rows.write().unwrap();
        while rows.len() <= idx {
            let prev = rows.last().unwrap();
            let mut next = Vec::with_capacity(prev.len() + 1);
            next.push(BigUint::one());
            for w in prev.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigUint::one());
            rows.push(Arc::from(next));
        }
        Arc::clone(&rows[idx])
    }

    fn cached_levels(&self) -> u64 {
        self.rows.read().unwrap().len() as u64
    }

    fn overwrite(&self, n: u64, k: usize, value: BigUint) {
        let idx = (n - self.base_level) as usize;
        self.row(n);
        let mut rows = self.rows.write().unwrap();
        let mut row: Vec<BigUint> = rows[idx].to_vec();
        row[k] = value;
        rows[idx] = Arc::from(row);
    }
}

/// Binomial coefficients with cached rows up to `n_max` and the
/// multiplicative formula beyond.
pub struct BinomialTable {
    n_max: u64,
    rows: PascalRows,
}

impl BinomialTable {
    pub fn new(n_max: u64) -> Self {
        BinomialTable {
            n_max,
            rows: PascalRows::new(0, vec![BigUint::one()]),
        }
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Row `n` of Pascal's triangle, or `None` when `n` is beyond the cache.
    pub fn row(&self, n: u64) -> Option<Arc<[BigUint]>> {
        (n <= self.n_max).then(|| self.rows.row(n))
    }

    pub fn get(&self, n: u64, k: i64) -> BigUint {
        if k < 0 || k as u64 > n {
            return BigUint::zero();
        }
        let k = k as u64;
        if n <= self.n_max {
            return self.rows.row(n)[k as usize].clone();
        }
        multiplicative(n, k)
    }

    /// Number of rows currently materialized.
    pub fn cached_rows(&self) -> u64 {
        self.rows.cached_levels()
    }

    /// Replace one cached entry. Only used to check that the self-test notices.
    #[doc(hidden)]
    pub fn inject_fault(&self, n: u64, k: u64) {
        assert!(n <= self.n_max && k <= n);
        let old = self.get(n, k as i64);
        self.rows.overwrite(n, k as usize, old + 1u32);
    }
}

fn multiplicative(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

static TABLE: OnceLock<BinomialTable> = OnceLock::new();

/// The process-wide binomial table.
pub fn binomial_table() -> &'static BinomialTable {
    TABLE.get_or_init(|| BinomialTable::new(DEFAULT_BINOMIAL_ROWS))
}

/// C(n,k), zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    binomial_table().get(n, k)
}

pub fn binomial_int(n: u64, k: i64) -> BigInt {
    BigInt::from(binomial(n, k))
}

pub fn binomial_rational(n: u64, k: i64) -> Rational {
    Rational::from_integer(binomial_int(n, k))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn from_biguint(v: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(v.clone()))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // to_f64 only fails on overflow
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::Parse(format!("not a finite number: {v}")))
}

/// Parses `"a/b"`, an integer, or a plain decimal such as `"-0.25"` or
/// `"1.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(digits);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `r^e` for a small exponent.
pub fn pow(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

/// Polynomial in one variable with exact rational coefficients; index = power.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The polynomial `p`.
    pub fn var() -> Self {
        Polynomial::from_ints(&[0, 1])
    }

    /// `p - r`
    pub fn linear_root(r: &Rational) -> Self {
        Polynomial::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, p: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * p + c)
    }

    pub fn sign_at(&self, p: &Rational) -> i32 {
        let v = self.eval(p);
        match v.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Polynomial::constant(Rational::one()), |acc, _| &acc * self)
    }

    /// Synthetic division by `p - r`: returns quotient and remainder.
    pub fn div_linear(&self, r: &Rational) -> (Polynomial, Rational) {
        if self.coeffs.is_empty() {
            return (Polynomial::zero(), Rational::zero());
        }
        let mut quot = vec![Rational::zero(); self.coeffs.len() - 1];
        let mut carry = Rational::zero();
        for i in (0..self.coeffs.len()).rev() {
            carry = &self.coeffs[i] + carry * r;
            if i > 0 {
                quot[i - 1] = carry.clone();
            }
        }
        (Polynomial::new(quot), carry)
    }

    /// Multiplicity of `r` as a root; `None` for the zero polynomial.
    pub fn root_multiplicity(&self, r: &Rational) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut mult = 0;
        let mut cur = self.clone();
        loop {
            let (q, rem) = cur.div_linear(r);
            if !rem.is_zero() {
                return Some(mult);
            }
            mult += 1;
            cur = q;
        }
    }

    /// Clears denominators, returning the primitive integer polynomial with
    /// positive leading coefficient and the factor used.
    pub fn primitive_part(&self) -> (Vec<BigInt>, Rational) {
        if self.is_zero() {
            return (Vec::new(), Rational::one());
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (prim, Rational::new(lcm, g))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = format_rational(&c.abs());
            let sep = match (first, c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            match i {
                0 => write!(f, "{sep}{mag}")?,
                1 => write!(f, "{sep}{mag}*p")?,
                _ => write!(f, "{sep}{mag}*p^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pascal_brute(n: u64, k: u64) -> BigUint {
        // independent recursion without the cache
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        row[k as usize].clone()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        for n in 0..50 {
            assert_eq!(binomial(n, 0), BigUint::one());
        }
        assert_eq!(binomial(10, 4), pascal_brute(10, 4));
        assert_eq!(binomial(10, 4), BigUint::from(210u32));
        assert_eq!(binomial(5, -1), BigUint::zero());
        assert_eq!(binomial(5, 6), BigUint::zero());
    }

    #[test]
    fn cached_and_multiplicative_agree() {
        let small = BinomialTable::new(64);
        for n in [65u64, 100, 333] {
            for k in [0i64, 1, 7, (n / 2) as i64, n as i64 - 3, n as i64] {
                assert_eq!(small.get(n, k), binomial(n, k), "C({n},{k})");
            }
        }
    }

    #[test]
    fn pascal_identity_up_to_10000() {
        let t = binomial_table();
        for n in 1..=t.n_max() {
            let row = t.row(n).unwrap();
            let prev = t.row(n - 1).unwrap();
            for k in 1..n as usize {
                assert_eq!(row[k], &prev[k - 1] + &prev[k]);
            }
        }
        // beyond the cache, spot-check rows up to 10000
        for n in [1500u64, 4000, 10000] {
            for k in [1i64, 17, (n / 3) as i64, (n / 2) as i64] {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn symmetry_up_to_2000() {
        for n in (0..=2000u64).step_by(7) {
            for k in (0..=n).step_by(13) {
                assert_eq!(binomial(n, k as i64), binomial(n, (n - k) as i64));
            }
        }
    }

    #[test]
    fn fault_injection_changes_entry() {
        let t = BinomialTable::new(16);
        t.inject_fault(10, 3);
        assert_eq!(t.get(10, 3), BigUint::from(121u32));
        assert_eq!(t.get(10, 4), BigUint::from(210u32));
    }

    #[test]
    fn poly_eval_examples() {
        let p = Polynomial::from_ints(&[0, 2, -2]);
        assert_eq!(p.eval(&rat(1, 2)), rat(1, 2));
        assert_eq!(p.eval(&rat(1, 3)), rat(4, 9));
        let q = Polynomial::from_ints(&[7, 3, 5]);
        assert_eq!(q.eval(&Rational::zero()), int(7));
    }

    #[test]
    fn poly_sign_examples() {
        let p = Polynomial::from_ints(&[0, 2, -2]);
        assert_eq!(p.sign_at(&rat(1, 2)), 1);
        assert_eq!(Polynomial::zero().sign_at(&rat(1, 7)), 0);
        assert_eq!(Polynomial::from_ints(&[1, -2]).sign_at(&rat(3, 4)), -1);
    }

    #[test]
    fn root_multiplicity_of_powers() {
        let half = rat(1, 2);
        let base = Polynomial::from_ints(&[1, -2]);
        for e in 0..6 {
            let p = &base.pow(e) * &Polynomial::from_ints(&[3, 1]);
            assert_eq!(p.root_multiplicity(&half), Some(e as usize));
        }
        assert_eq!(Polynomial::zero().root_multiplicity(&half), None);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-1").unwrap(), int(-1));
        assert_eq!(parse_rational("0.4").unwrap(), rat(2, 5));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&rat(-3, 6)), "-1/2");
        assert_eq!(format_rational(&int(4)), "4");
    }

    #[test]
    fn primitive_part_normalizes() {
        let p = Polynomial::new(vec![rat(1, 2), rat(-1, 3)]);
        let (ints, _) = p.primitive_part();
        assert_eq!(ints, vec![BigInt::from(-3), BigInt::from(2)]);
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..30).prop_map(|(a, b)| rat(a, b))
    }

    proptest! {
        #[test]
        fn rational_field_laws(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            // always reduced
            let s = &a + &b;
            prop_assert!(s.denom().is_positive());
            prop_assert!(s.numer().gcd(s.denom()).is_one());
        }

        #[test]
        fn poly_mul_evaluates_pointwise(
            a in proptest::collection::vec(-9i64..9, 0..5),
            b in proptest::collection::vec(-9i64..9, 0..5),
            x in small_rat(),
        ) {
            let pa = Polynomial::from_ints(&a);
            let pb = Polynomial::from_ints(&b);
            prop_assert_eq!((&pa * &pb).eval(&x), pa.eval(&x) * pb.eval(&x));
            prop_assert_eq!((&pa - &pb).eval(&x), pa.eval(&x) - pb.eval(&x));
        }
    }
}
