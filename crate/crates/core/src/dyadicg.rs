//! Observables measurable with respect to the dyadic partition of level `N0`:
//! tower sums, the diagnostic polynomial `P^g`, the covariance identity,
//! cohomology to a constant, and the transition family.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::BlockId;
use crate::curves::{g_array_with, renorm_rg, RenormOptions};
use crate::error::{Error, Result};
use crate::exactnum::{
    binomial, binomial_rational, format_rational, parse_rational, Polynomial, Rational,
};
use crate::towers::{build_towers, Point, DEFAULT_TOWER_CAP};

/// Largest supported partition level.
pub const MAX_LEVEL: u32 = 20;

/// A step function on `[0,1)` constant on the `2^level` dyadic intervals.
/// `values[j]` is the value on `[j 2^-level, (j+1) 2^-level)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicFunction {
    level: u32,
    values: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct DyadicFile {
    level: u32,
    values: Vec<String>,
}

impl DyadicFunction {
    pub fn new(level: u32, values: Vec<Rational>) -> Result<Self> {
        if level == 0 || level > MAX_LEVEL {
            return Err(Error::param(format!("level must be in 1..={MAX_LEVEL}")));
        }
        if values.len() != 1 << level {
            return Err(Error::param(format!(
                "level {level} needs {} values, got {}",
                1u64 << level,
                values.len()
            )));
        }
        Ok(DyadicFunction { level, values })
    }

    pub fn from_fn(level: u32, f: impl FnMut(u64) -> Rational) -> Result<Self> {
        if level == 0 || level > MAX_LEVEL {
            return Err(Error::param(format!("level must be in 1..={MAX_LEVEL}")));
        }
        DyadicFunction::new(level, (0..1u64 << level).map(f).collect())
    }

    pub fn constant(level: u32, c: Rational) -> Result<Self> {
        DyadicFunction::from_fn(level, |_| c.clone())
    }

    /// `1_[0,1/2) - 1_[1/2,1)`, the observable that reads `a`/`b` letters.
    pub fn ab_indicator() -> Self {
        DyadicFunction::from_ints(1, &[1, -1]).unwrap()
    }

    pub fn from_ints(level: u32, values: &[i64]) -> Result<Self> {
        DyadicFunction::new(
            level,
            values
                .iter()
                .map(|&v| Rational::from_integer(v.into()))
                .collect(),
        )
    }

    /// Random values `a/b` with `|a| <= 6`, `1 <= b <= 4`.
    pub fn random_small(level: u32, rng: &mut impl Rng) -> Result<Self> {
        DyadicFunction::from_fn(level, |_| {
            Rational::new(
                rng.gen_range(-6i64..=6).into(),
                rng.gen_range(1i64..=4).into(),
            )
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, index: u64) -> &Rational {
        &self.values[index as usize]
    }

    pub fn value_at(&self, x: &Point) -> Result<&Rational> {
        let level = self.level as usize;
        if x.depth() < level {
            return Err(Error::param(format!(
                "point has {} digits, g needs {level}",
                x.depth()
            )));
        }
        Ok(self.value(x.prefix_index(level)))
    }

    /// The same function viewed on the partition one level finer.
    pub fn lift(&self) -> Result<Self> {
        DyadicFunction::from_fn(self.level + 1, |j| self.values[(j >> 1) as usize].clone())
    }

    pub fn add_constant(&self, c: &Rational) -> Self {
        DyadicFunction {
            level: self.level,
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DyadicFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let values = file
            .values
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        DyadicFunction::new(file.level, values)
    }

    pub fn to_json(&self) -> String {
        let file = DyadicFile {
            level: self.level,
            values: self.values.iter().map(format_rational).collect(),
        };
        serde_json::to_string(&file).expect("serializable")
    }
}

/// Ergodic sums `h_l` of `g` over the towers `tau(N0, l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSums {
    level: u32,
    h: Vec<Rational>,
}

impl TowerSums {
    pub fn new(level: u32, h: Vec<Rational>) -> Result<Self> {
        if h.len() != level as usize + 1 {
            return Err(Error::param("need level+1 tower sums"));
        }
        Ok(TowerSums { level, h })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn h(&self) -> &[Rational] {
        &self.h
    }

    /// `h^g_{n,k} = sum_j h_j C(n-N0, k-j)`, the sum of `g` over `tau(n,k)`.
    pub fn lifted(&self, n: u32, k: i64) -> Rational {
        if n < self.level || k < 0 || k > n as i64 {
            return Rational::zero();
        }
        let top = (n - self.level) as u64;
        let total: Rational = self
            .h
            .iter()
            .enumerate()
            .filter(|(_, h)| !h.is_zero())
            .map(|(j, h)| h * binomial_rational(top, k - j as i64))
            .sum();
        total
    }

    /// `Some(C)` when `h_l = C * C(N0, l)` for every `l`.
    pub fn proportional_constant(&self) -> Option<Rational> {
        let c = self.h[0].clone();
        self.h
            .iter()
            .enumerate()
            .all(|(l, h)| *h == &c * binomial_rational(self.level as u64, l as i64))
            .then_some(c)
    }
}

/// Rung sums: the rungs of `tau(N0, l)` are exactly the intervals whose
/// first `N0` digits sum to `l`.
pub fn tower_sums(g: &DyadicFunction) -> TowerSums {
    let mut h = vec![Rational::zero(); g.level as usize + 1];
    for (j, v) in g.values.iter().enumerate() {
        h[j.count_ones() as usize] += v;
    }
    TowerSums { level: g.level, h }
}

/// Values of `g` along each tower, rung by rung, with prefix sums.
#[derive(Clone, Debug)]
pub struct TowerProfile {
    sums: TowerSums,
    prefix: Vec<Vec<Rational>>,
}

impl TowerProfile {
    pub fn new(g: &DyadicFunction) -> Result<Self> {
        let towers = build_towers(g.level, DEFAULT_TOWER_CAP)?;
        let prefix = towers
            .iter()
            .map(|t| {
                let mut acc = vec![Rational::zero()];
                for &r in &t.rungs {
                    let next = acc.last().unwrap() + g.value(r);
                    acc.push(next);
                }
                acc
            })
            .collect();
        Ok(TowerProfile {
            sums: tower_sums(g),
            prefix,
        })
    }

    pub fn level(&self) -> u32 {
        self.sums.level
    }

    pub fn sums(&self) -> &TowerSums {
        &self.sums
    }

    /// Sum of `g` over the first `j` rungs of `tau(N0, l)`.
    pub fn partial(&self, l: u32, j: usize) -> &Rational {
        &self.prefix[l as usize][j]
    }

    /// All partial sums of tower `l`, from `0` to its full height.
    pub fn partials(&self, l: u32) -> &[Rational] {
        &self.prefix[l as usize]
    }
}

/// `P^g(p) = sum_l h_l p^l (1-p)^(N0-l) (N0 p - l)`.
pub fn polynomial_pg(g: &DyadicFunction) -> Polynomial {
    polynomial_from_sums(&tower_sums(g))
}

pub fn polynomial_from_sums(sums: &TowerSums) -> Polynomial {
    let n0 = sums.level;
    let p = Polynomial::var();
    let q = Polynomial::from_ints(&[1, -1]);
    sums.h
        .iter()
        .enumerate()
        .filter(|(_, h)| !h.is_zero())
        .fold(Polynomial::zero(), |acc, (l, h)| {
            let linear = Polynomial::new(vec![
                Rational::from_integer(BigInt::from(-(l as i64))),
                Rational::from_integer(n0.into()),
            ]);
            let term = &(&p.pow(l as u32) * &q.pow(n0 - l as u32)) * &linear;
            acc + term.scale(h)
        })
}

/// `-cov(g, X_1 + ... + X_N0)` under `mu_p`, computed interval by interval.
pub fn covariance_pg(g: &DyadicFunction) -> Polynomial {
    let n0 = g.level;
    let p = Polynomial::var();
    let q = Polynomial::from_ints(&[1, -1]);
    let mut e_g = Polynomial::zero();
    let mut e_gs = Polynomial::zero();
    for (j, v) in g.values.iter().enumerate() {
        let s = j.count_ones();
        let mass = &p.pow(s) * &q.pow(n0 - s);
        e_g = e_g + mass.scale(v);
        e_gs = e_gs + mass.scale(&(v * Rational::from_integer(s.into())));
    }
    let e_s = p.scale(&Rational::from_integer(n0.into()));
    -&(e_gs - &e_g * &e_s)
}

/// Outcome of testing whether `g = C + f - f o T` with `f` bounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cohomology {
    Cohomologous {
        constant: Rational,
        transfer: DyadicFunction,
    },
    NotCohomologous,
}

/// Tower sums proportional to binomial coefficients characterize functions
/// cohomologous to a constant; the transfer function is built rung by rung.
pub fn cohomology_test(g: &DyadicFunction) -> Result<Cohomology> {
    let Some(c) = tower_sums(g).proportional_constant() else {
        return Ok(Cohomology::NotCohomologous);
    };
    let mut f = vec![Rational::zero(); g.values.len()];
    for tower in build_towers(g.level, DEFAULT_TOWER_CAP)? {
        let mut acc = Rational::zero();
        for &r in &tower.rungs {
            f[r as usize] = -acc.clone();
            acc += g.value(r) - &c;
        }
    }
    Ok(Cohomology::Cohomologous {
        constant: c,
        transfer: DyadicFunction::new(g.level, f)?,
    })
}

/// `g_N0(x) = (-1)^(digit sum)`, constant on each rung of `tau(N0, l)`,
/// so that `h_l = (-1)^l C(N0, l)`.
pub fn transition_family(n0: u32) -> Result<DyadicFunction> {
    DyadicFunction::from_fn(n0, |j| {
        Rational::from_integer(if j.count_ones() % 2 == 0 { 1 } else { -1 }.into())
    })
}

fn transition_sums(n0: u32) -> TowerSums {
    let h = (0..=n0)
        .map(|l| {
            let b = BigInt::from(binomial(n0 as u64, l as i64));
            Rational::from_integer(if l % 2 == 0 { b } else { -b })
        })
        .collect();
    TowerSums { level: n0, h }
}

/// `S_N0(n,k) = h^{g_N0}_{n,k} / C(n,k)`.
pub fn s_ratio(n0: u32, n: u32, k: u32) -> Result<Rational> {
    if n0 == 0 || n < n0 || k > n {
        return Err(Error::param(format!(
            "need 1 <= N0 <= n and k <= n, got ({n0},{n},{k})"
        )));
    }
    Ok(transition_sums(n0).lifted(n, k as i64) / binomial_rational(n as u64, k as i64))
}

/// Numerator of `y_{i,0}` along `(2k,k)` for `g_N0`:
/// `h_{2k-i,k-i} - x_{i,0} h_{2k,k}` with `x_{i,0} = C(2k-i,k-i)/C(2k,k)`.
pub fn transition_numerator(n0: u32, k: u32, i: u32) -> Result<Rational> {
    if n0 == 0 || i > k || 2 * k < n0 + i {
        return Err(Error::param(format!(
            "need 2k - i >= N0 and i <= k, got ({n0},{k},{i})"
        )));
    }
    let sums = transition_sums(n0);
    let n = 2 * k;
    let x =
        binomial_rational((n - i) as u64, (k - i) as i64) / binomial_rational(n as u64, k as i64);
    Ok(sums.lifted(n - i, (k - i) as i64) - x * sums.lifted(n, k as i64))
}

/// Line-wise maxima of the `y` entries of the g-array at `(nbar, kbar)`, and
/// the geometric ratio fitted to them over lines `5..=25`.
#[derive(Clone, Debug)]
pub struct DecayProfile {
    pub maxima: Vec<(usize, f64)>,
    pub fitted_ratio: f64,
}

pub fn gamma_decay_profile(
    g: &DyadicFunction,
    nbar: u32,
    kbar: u32,
    delta: f64,
    lines: usize,
) -> Result<DecayProfile> {
    if matches!(cohomology_test(g)?, Cohomology::Cohomologous { .. }) {
        return Err(Error::param(
            "g is cohomologous to a constant; the renormalization is degenerate",
        ));
    }
    let (n, k) = (nbar as f64, kbar as f64);
    if !(delta > 0.0 && 2.0 * delta * n <= k && k <= (1.0 - 2.0 * delta) * n) {
        return Err(Error::param(
            "need 2 delta nbar <= kbar <= (1 - 2 delta) nbar",
        ));
    }
    let id = BlockId::generalized(g.level, nbar as i64, kbar as i64)?;
    let depth = lines.min((nbar - g.level) as usize);
    let r = renorm_rg(g, id, &RenormOptions::default())?;
    let array = g_array_with(g, id, depth, &r.value)?;
    let maxima: Vec<(usize, f64)> = array
        .lines()
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let m = line.iter().map(|(_, y)| y.abs()).max().unwrap();
            (i, m.to_f64().unwrap_or(f64::NAN))
        })
        .collect();
    Ok(DecayProfile {
        fitted_ratio: fit_ratio(&maxima, 5, 25),
        maxima,
    })
}

/// Least-squares slope of `ln(value)` against the line index, exponentiated.
fn fit_ratio(points: &[(usize, f64)], lo: usize, hi: usize) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(i, v)| (lo..=hi).contains(i) && *v > 0.0)
        .map(|&(i, v)| (i as f64, v.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxy / sxx).exp()
}
