//! Ergodic-sum curves of the basic blocks: `F_{n,k}`, its renormalization
//! `phi_{n,k}`, the versions `F^g`, `R^g`, `phi^g` for a dyadic observable,
//! and the triangular arrays the curves are compatible with.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::blocks::{count_a_prefix, height, BlockId};
use crate::dyadicg::{DyadicFunction, TowerProfile};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, binomial_rational, from_biguint, to_f64, Rational};
use crate::selfaffine::TriangularArray;

/// A piecewise-linear curve given by its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSamples {
    ts: Vec<Rational>,
    values: Vec<Rational>,
}

impl CurveSamples {
    /// Needs at least two strictly increasing abscissae starting at 0.
    pub fn new(ts: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if ts.len() != values.len() || ts.len() < 2 {
            return Err(Error::param(
                "need at least two samples, as many values as abscissae",
            ));
        }
        if !ts[0].is_zero() {
            return Err(Error::param("samples must start at t = 0"));
        }
        if ts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("abscissae must be strictly increasing"));
        }
        Ok(CurveSamples { ts, values })
    }

    pub fn ts(&self) -> &[Rational] {
        &self.ts
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn end(&self) -> &Rational {
        self.ts.last().unwrap()
    }

    /// Exact linear interpolation between the vertices.
    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        if t.is_negative() || t > self.end() {
            return Err(Error::param("t outside the sampled interval"));
        }
        match self.ts.binary_search(t) {
            Ok(i) => Ok(self.values[i].clone()),
            Err(i) => {
                let (t0, t1) = (&self.ts[i - 1], &self.ts[i]);
                let (v0, v1) = (&self.values[i - 1], &self.values[i]);
                Ok(v0 + (t - t0) / (t1 - t0) * (v1 - v0))
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CurveSamples {
            ts: self.ts.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn to_f64_pairs(&self) -> Vec<(f64, f64)> {
        self.ts
            .iter()
            .zip(&self.values)
            .map(|(t, v)| (to_f64(t), to_f64(v)))
            .collect()
    }

    /// Sup distance on the union of both vertex sets and a `2^grid_bits` dyadic grid.
    pub fn sup_distance(&self, other: &CurveSamples, grid_bits: u32) -> Result<f64> {
        if self.end() != other.end() {
            return Err(Error::param("curves live on different intervals"));
        }
        let mut points: Vec<Rational> = dyadic_grid(grid_bits)
            .into_iter()
            .map(|t| t * self.end())
            .chain(self.ts.iter().cloned())
            .chain(other.ts.iter().cloned())
            .collect();
        points.sort();
        points.dedup();
        sup_distance(
            |t| self.eval(t).map(|v| to_f64(&v)),
            |t| other.eval(t).map(|v| to_f64(&v)),
            &points,
        )
    }
}

/// `j / 2^bits` for `j = 0..=2^bits`.
pub fn dyadic_grid(bits: u32) -> Vec<Rational> {
    let den = BigInt::one() << bits;
    (0..=1u64 << bits)
        .map(|j| Rational::new(j.into(), den.clone()))
        .collect()
}

/// `max |f(t) - g(t)|` over the given points, evaluated in parallel.
pub fn sup_distance(
    f: impl Fn(&Rational) -> Result<f64> + Sync,
    g: impl Fn(&Rational) -> Result<f64> + Sync,
    points: &[Rational],
) -> Result<f64> {
    let diffs = points
        .par_iter()
        .map(|t| Ok((f(t)? - g(t)?).abs()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(diffs.into_iter().fold(0.0, f64::max))
}

/// Splits `t * len` into integer part and fraction.
fn scaled_position(t: &Rational, len: &BigUint) -> Result<(BigUint, Rational)> {
    if t.is_negative() || *t > Rational::one() {
        return Err(Error::param("t must lie in [0,1]"));
    }
    let pos = t * from_biguint(len);
    let (q, r) = pos.numer().div_rem(pos.denom());
    let frac = Rational::new(r, pos.denom().clone());
    Ok((q.to_biguint().unwrap(), frac))
}

/// `F_{n,k}(l) = #a - #b` among the first `l` letters.
pub fn eval_f(id: BlockId, pos: &BigUint) -> Result<BigInt> {
    let a = count_a_prefix(id, pos)?;
    Ok(BigInt::from(a) * 2 - BigInt::from(pos.clone()))
}

/// Denominator of the renormalization of `F_{n,k}`: the detrended value at
/// the end of `B_{n-1,k-1}`, equal to `C(n-1,k-1) 2(n-k) / (n(n-1))`.
pub fn phi_denominator(id: BlockId) -> Result<Rational> {
    let (n, k) = (id.n(), id.k());
    if n < 2 || k == 0 || k == n {
        return Err(Error::DegenerateDenominator { n, k });
    }
    let c = binomial_rational(n as u64 - 1, k as i64 - 1);
    Ok(c * Rational::new((2 * (n - k)).into(), (n as u64 * (n as u64 - 1)).into()))
}

/// `phi_{n,k}` ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct BlockCurve {
    id: BlockId,
    len: BigUint,
    total: Rational,
    denom: Rational,
}

impl BlockCurve {
    pub fn new(id: BlockId) -> Result<Self> {
        Ok(BlockCurve {
            id,
            len: binomial(id.n() as u64, id.k() as i64),
            total: Rational::from_integer(height(id)),
            denom: phi_denominator(id)?,
        })
    }

    pub fn id(&self) -> BlockId {
        self.id
    }

    pub fn denominator(&self) -> &Rational {
        &self.denom
    }

    /// `F_{n,k}(t C(n,k))` with linear interpolation.
    pub fn f_at(&self, t: &Rational) -> Result<Rational> {
        let (pos, frac) = scaled_position(t, &self.len)?;
        let left = Rational::from_integer(eval_f(self.id, &pos)?);
        if frac.is_zero() {
            return Ok(left);
        }
        let right = Rational::from_integer(eval_f(self.id, &(pos + 1u32))?);
        Ok(&left + frac * (right - &left))
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        Ok((self.f_at(t)? - t * &self.total) / &self.denom)
    }

    /// All `C(n,k) + 1` vertices.
    pub fn vertices(&self) -> Result<CurveSamples> {
        let len: u64 = (&self.len).try_into().map_err(|_| Error::CapExceeded {
            len: self.len.clone(),
            cap: u64::MAX,
        })?;
        let letters = crate::blocks::increments(self.id, len)?;
        let lenr = Rational::from_integer(len.into());
        let mut f = 0i64;
        let mut ts = vec![Rational::zero()];
        let mut values = vec![Rational::zero()];
        for (j, inc) in letters.into_iter().enumerate() {
            f += inc as i64;
            let t = Rational::new((j as i64 + 1).into(), len.into());
            values.push((Rational::from_integer(f.into()) - &t * &self.total) / &self.denom);
            ts.push(t);
        }
        debug_assert_eq!(ts.last(), Some(&(lenr.clone() / lenr)));
        CurveSamples::new(ts, values)
    }
}

pub fn phi(id: BlockId, t: &Rational) -> Result<Rational> {
    BlockCurve::new(id)?.eval(t)
}

/// `F^g_{n,k}(l)`: sums of `g` over complete sub-blocks plus a partial
/// rung sum inside the final letter.
pub fn eval_fg_with(profile: &TowerProfile, id: BlockId, pos: &BigUint) -> Result<Rational> {
    let n0 = profile.level();
    let (mut n, mut k) = (id.n(), id.k() as i64);
    if n < n0 {
        return Err(Error::InvalidBlock {
            n: n as i64,
            k,
            min_n: n0,
        });
    }
    let len = binomial(n as u64, k);
    if *pos > len {
        return Err(Error::OutOfRange {
            pos: pos.clone(),
            len,
        });
    }
    let sums = profile.sums();
    let mut pos = pos.clone();
    let mut acc = Rational::zero();
    while n > n0 {
        if pos.is_zero() {
            return Ok(acc);
        }
        let left = binomial(n as u64 - 1, k - 1);
        if !left.is_zero() && pos <= left {
            k -= 1;
        } else {
            acc += sums.lifted(n - 1, k - 1);
            pos -= left;
        }
        n -= 1;
    }
    let j: usize = (&pos).try_into().expect("within one letter");
    Ok(acc + profile.partial(k as u32, j))
}

pub fn eval_fg(g: &DyadicFunction, id: BlockId, pos: &BigUint) -> Result<Rational> {
    eval_fg_with(&TowerProfile::new(g)?, id, pos)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenormMode {
    /// Every breakpoint accounted for; the value is exact.
    ExactScan,
    /// Sub-blocks below the array depth treated as straight segments.
    ArrayApprox,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenormConstant {
    pub value: Rational,
    pub mode: RenormMode,
    /// Zero in exact mode; otherwise an uncertified estimate.
    pub error_bound: Rational,
}

#[derive(Clone, Copy, Debug)]
pub struct RenormOptions {
    /// Blocks with at most this many breakpoints are always resolved exactly.
    pub cap: u64,
    /// Array depth used beyond the cap.
    pub depth: usize,
}

impl Default for RenormOptions {
    fn default() -> Self {
        RenormOptions {
            cap: 1 << 24,
            depth: 40,
        }
    }
}

/// Running extremes of `F(j) - j s` across one sub-block, relative to its start.
#[derive(Clone)]
struct Span {
    hi: Rational,
    lo: Rational,
    /// `F(end) - len s`
    drift: Rational,
}

impl Span {
    fn empty() -> Self {
        Span {
            hi: Rational::zero(),
            lo: Rational::zero(),
            drift: Rational::zero(),
        }
    }

    fn straight(drift: Rational) -> Self {
        Span {
            hi: drift.clone().max(Rational::zero()),
            lo: drift.clone().min(Rational::zero()),
            drift,
        }
    }

    fn concat(left: &Span, right: &Span) -> Span {
        Span {
            hi: left.hi.clone().max(&left.drift + &right.hi),
            lo: left.lo.clone().min(&left.drift + &right.lo),
            drift: &left.drift + &right.drift,
        }
    }
}

/// `R^g_{n,k} = max_t |F(tC) - t F(C)|`, or 1 when that vanishes.
///
/// The maximum sits on an integer breakpoint; it is found by combining
/// per-sub-block extremes up the array of sub-blocks instead of visiting
/// the `C(n,k)` breakpoints one by one.
pub fn renorm_rg(g: &DyadicFunction, id: BlockId, opts: &RenormOptions) -> Result<RenormConstant> {
    renorm_rg_with(&TowerProfile::new(g)?, id, opts)
}

pub fn renorm_rg_with(
    profile: &TowerProfile,
    id: BlockId,
    opts: &RenormOptions,
) -> Result<RenormConstant> {
    let n0 = profile.level();
    let (n, k) = (id.n(), id.k() as i64);
    if n < n0 {
        return Err(Error::InvalidBlock {
            n: n as i64,
            k,
            min_n: n0,
        });
    }
    let sums = profile.sums();
    let len = binomial(n as u64, k);
    let slope = sums.lifted(n, k) / from_biguint(&len);
    let full = (n - n0) as usize;
    let depth = if len <= BigUint::from(opts.cap) {
        full
    } else {
        opts.depth.min(full)
    };

    let cell = |i: usize, j: usize| -> Option<(u32, i64)> {
        let (nn, kk) = ((n as usize - i) as u32, k - i as i64 + j as i64);
        (kk >= 0 && kk <= nn as i64).then_some((nn, kk))
    };
    let drift = |nn: u32, kk: i64| sums.lifted(nn, kk) - binomial_rational(nn as u64, kk) * &slope;

    let mut line: Vec<Span> = (0..=depth)
        .into_par_iter()
        .map(|j| match cell(depth, j) {
            None => Span::empty(),
            Some((nn, kk)) if depth == full => {
                let mut span = Span::empty();
                for (step, partial) in profile.partials(kk as u32).iter().enumerate() {
                    let v = partial - Rational::from_integer(step.into()) * &slope;
                    span.hi = span.hi.max(v.clone());
                    span.lo = span.lo.min(v.clone());
                    span.drift = v;
                }
                debug_assert_eq!(nn, n0);
                span
            }
            Some((nn, kk)) => Span::straight(drift(nn, kk)),
        })
        .collect();
    let error_bound = if depth == full {
        Rational::zero()
    } else {
        line.iter()
            .map(|s| s.drift.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    };
    for i in (0..depth).rev() {
        line = (0..=i)
            .into_par_iter()
            .map(|j| match cell(i, j) {
                None => Span::empty(),
                Some(_) => Span::concat(&line[j], &line[j + 1]),
            })
            .collect();
    }
    let top = &line[0];
    let max = top.hi.clone().max(-top.lo.clone());
    Ok(RenormConstant {
        value: if max.is_zero() { Rational::one() } else { max },
        mode: if depth == full {
            RenormMode::ExactScan
        } else {
            RenormMode::ArrayApprox
        },
        error_bound,
    })
}

/// `phi^g_{n,k}` ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct GCurve {
    profile: TowerProfile,
    id: BlockId,
    len: BigUint,
    total: Rational,
    renorm: RenormConstant,
}

impl GCurve {
    pub fn new(g: &DyadicFunction, id: BlockId, opts: &RenormOptions) -> Result<Self> {
        let profile = TowerProfile::new(g)?;
        let renorm = renorm_rg_with(&profile, id, opts)?;
        Ok(GCurve {
            len: binomial(id.n() as u64, id.k() as i64),
            total: profile.sums().lifted(id.n(), id.k() as i64),
            profile,
            id,
            renorm,
        })
    }

    pub fn renorm(&self) -> &RenormConstant {
        &self.renorm
    }

    pub fn f_at(&self, t: &Rational) -> Result<Rational> {
        let (pos, frac) = scaled_position(t, &self.len)?;
        let left = eval_fg_with(&self.profile, self.id, &pos)?;
        if frac.is_zero() {
            return Ok(left);
        }
        let right = eval_fg_with(&self.profile, self.id, &(pos + 1u32))?;
        Ok(&left + frac * (right - &left))
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        Ok((self.f_at(t)? - t * &self.total) / &self.renorm.value)
    }
}

pub fn phi_g(g: &DyadicFunction, id: BlockId, t: &Rational) -> Result<Rational> {
    GCurve::new(g, id, &RenormOptions::default())?.eval(t)
}

/// Samples `t = j / samples` of a curve given as a function.
pub fn sample_curve(
    f: impl Fn(&Rational) -> Result<Rational> + Sync,
    samples: usize,
) -> Result<CurveSamples> {
    if samples == 0 {
        return Err(Error::param("samples must be positive"));
    }
    let ts: Vec<Rational> = (0..=samples)
        .map(|j| Rational::new(j.into(), samples.into()))
        .collect();
    let values = ts.par_iter().map(&f).collect::<Result<Vec<_>>>()?;
    CurveSamples::new(ts, values)
}

/// Array whose cell `(i,j)` is the sub-block `(n-i, k-i+j)`: width
/// `C(n-i,k-i+j)/C(n,k)` and detrended sum `(h_{n-i,k-i+j} - x h_{n,k}) / denom`.
fn sub_block_array(
    n: u32,
    k: i64,
    m: usize,
    h: impl Fn(u32, i64) -> Rational,
    denom: &Rational,
) -> Result<TriangularArray> {
    let len = binomial_rational(n as u64, k);
    let total = h(n, k);
    let lines = (0..=m)
        .map(|i| {
            (0..=i)
                .map(|j| {
                    let (nn, kk) = (n - i as u32, k - i as i64 + j as i64);
                    let x = binomial_rational(nn as u64, kk) / &len;
                    let y = (h(nn, kk) - &x * &total) / denom;
                    (x, y)
                })
                .collect()
        })
        .collect();
    TriangularArray::from_lines(lines)
}

/// `A^m_{n,k}` for the classical block, normalized like `phi_{n,k}`.
pub fn block_array(id: BlockId, m: usize) -> Result<TriangularArray> {
    let (n, k) = (id.n(), id.k() as i64);
    let denom = phi_denominator(id)?;
    if m >= n as usize {
        return Err(Error::param(format!(
            "array depth {m} must be below n = {n}"
        )));
    }
    let h = |nn: u32, kk: i64| {
        if kk < 0 || kk > nn as i64 {
            Rational::zero()
        } else {
            Rational::from_integer(height(BlockId::new(nn as i64, kk).unwrap()))
        }
    };
    sub_block_array(n, k, m, h, &denom)
}

/// `A^{g,m}_{n,k}`, normalized by the given `R^g`.
pub fn g_array_with(
    g: &DyadicFunction,
    id: BlockId,
    m: usize,
    renorm: &Rational,
) -> Result<TriangularArray> {
    let n0 = g.level();
    if (id.n() as usize) < n0 as usize + m {
        return Err(Error::param(format!("array depth {m} exceeds n - N0")));
    }
    let sums = crate::dyadicg::tower_sums(g);
    sub_block_array(
        id.n(),
        id.k() as i64,
        m,
        |nn, kk| sums.lifted(nn, kk),
        renorm,
    )
}

pub fn g_array(g: &DyadicFunction, id: BlockId, m: usize) -> Result<TriangularArray> {
    let r = renorm_rg(g, id, &RenormOptions::default())?;
    g_array_with(g, id, m, &r.value)
}
