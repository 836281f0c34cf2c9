//! The acceptance suite: sixteen end-to-end checks, each with a runtime
//! budget. Shared by the `acceptance` test target and `pascal-adic selftest`.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blocks::{count_a, height, materialize, materialize_generalized, BlockId};
use crate::conway::{interleave, verify_concatenation, ConwaySeq};
use crate::curves::{
    block_array, dyadic_grid, eval_fg_with, renorm_rg, BlockCurve, GCurve, RenormOptions,
};
use crate::dyadicg::{
    cohomology_test, covariance_pg, gamma_decay_profile, polynomial_pg, transition_family,
    transition_numerator, Cohomology, DyadicFunction, TowerProfile,
};
use crate::error::Result;
use crate::exactnum::{binomial_rational, from_biguint, int, rat, to_f64, Polynomial, Rational};
use crate::selfaffine::{
    canonical_array, eval_mp, renormalized_tail_array, transition_array, AffineMap2, Side,
};
use crate::towers::{
    apply_t, build_towers, find_subsequence, orbit_curve, orbit_letters, orbit_sums, rung_index,
    sample_mu_p, tower_index, Extension, Point,
};

pub const DEFAULT_SEED: u64 = 1;

/// Verdict and a one-line explanation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub budget: Duration,
    run: fn(u64) -> Result<Outcome>,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub id: u32,
    pub name: &'static str,
    pub outcome: Outcome,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CheckReport {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    pub fn passed(&self) -> bool {
        self.outcome.passed && self.within_budget()
    }

    /// `PASS`/`FAIL` line; timings are left out when `timed` is false so
    /// that reports are reproducible.
    pub fn line(&self, timed: bool) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut out = format!(
            "{verdict} {:>2} {}: {}",
            self.id, self.name, self.outcome.detail
        );
        if timed {
            out += &format!(
                " [{:.3}s / {}s]",
                self.elapsed.as_secs_f64(),
                self.budget.as_secs_f64()
            );
        }
        if !self.within_budget() {
            out += " (over budget)";
        }
        out
    }
}

pub fn checks() -> Vec<Check> {
    let ms = Duration::from_millis;
    let s = Duration::from_secs;
    vec![
        Check {
            id: 1,
            name: "golden word",
            budget: ms(1),
            run: golden_word,
        },
        Check {
            id: 2,
            name: "height identity",
            budget: s(5),
            run: height_identity,
        },
        Check {
            id: 3,
            name: "blancmange oracle",
            budget: s(5),
            run: blancmange_oracle,
        },
        Check {
            id: 4,
            name: "canonical array and split",
            budget: s(1),
            run: canonical_split,
        },
        Check {
            id: 5,
            name: "array convergence rate",
            budget: s(30),
            run: array_rate,
        },
        Check {
            id: 6,
            name: "block curve trend",
            budget: s(60),
            run: block_curve_trend,
        },
        Check {
            id: 7,
            name: "orbit identification",
            budget: s(10),
            run: orbit_identification,
        },
        Check {
            id: 8,
            name: "coboundary",
            budget: s(10),
            run: coboundary,
        },
        Check {
            id: 9,
            name: "P^g machinery",
            budget: s(10),
            run: pg_machinery,
        },
        Check {
            id: 10,
            name: "R^g scaling",
            budget: s(60),
            run: rg_scaling,
        },
        Check {
            id: 11,
            name: "transition asymptotics",
            budget: s(30),
            run: transition_asymptotics,
        },
        Check {
            id: 12,
            name: "tail-array convergence",
            budget: s(5),
            run: tail_array,
        },
        Check {
            id: 13,
            name: "conway sequence",
            budget: s(20),
            run: conway_checks,
        },
        Check {
            id: 14,
            name: "tower oracles",
            budget: s(20),
            run: tower_oracles,
        },
        Check {
            id: 15,
            name: "small heights recur",
            budget: s(30),
            run: small_heights,
        },
        Check {
            id: 16,
            name: "g-array decay",
            budget: s(10),
            run: g_array_decay,
        },
    ]
}

pub fn run_check(check: &Check, seed: u64) -> CheckReport {
    let start = Instant::now();
    let outcome = (check.run)(seed).unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
    CheckReport {
        id: check.id,
        name: check.name,
        outcome,
        elapsed: start.elapsed(),
        budget: check.budget,
    }
}

pub fn run_all(seed: u64) -> Vec<CheckReport> {
    checks().iter().map(|c| run_check(c, seed)).collect()
}

fn block(n: u32, k: u32) -> Result<BlockId> {
    BlockId::new(n as i64, k as i64)
}

fn golden_word(_: u64) -> Result<Outcome> {
    let word = materialize(block(6, 3)?, 64)?;
    Ok(Outcome::new(
        word == "aaabaababbaababbabbb",
        format!("B(6,3) = {word}"),
    ))
}

fn height_identity(_: u64) -> Result<Outcome> {
    // binomials from the textbook product, independent of the cached table
    let choose = |n: u32, k: i64| -> BigUint {
        if k < 0 || k > n as i64 {
            BigUint::zero()
        } else {
            num_integer::binomial(BigUint::from(n), BigUint::from(k as u64))
        }
    };
    for n in 1..=30u32 {
        for k in 0..=n {
            let id = block(n, k)?;
            let c = choose(n, k as i64);
            let expected_a = choose(n - 1, k as i64);
            let expected_h =
                from_biguint(&c) * Rational::new((n as i64 - 2 * k as i64).into(), n.into());
            let (a, h) = if n <= 16 {
                let word = materialize(id, 1 << 16)?;
                let a = word.bytes().filter(|&c| c == b'a').count();
                let b = word.len() - a;
                if BigUint::from(word.len()) != c {
                    return Ok(Outcome::new(
                        false,
                        format!("|B({n},{k})| = {} != C({n},{k})", word.len()),
                    ));
                }
                (
                    BigUint::from(a),
                    Rational::from_integer((a as i64 - b as i64).into()),
                )
            } else {
                (count_a(id), Rational::from_integer(height(id)))
            };
            if a != expected_a || h != expected_h {
                return Ok(Outcome::new(false, format!("mismatch at ({n},{k})")));
            }
        }
    }
    Ok(Outcome::new(true, "465 blocks, enumerated up to n = 16"))
}

/// `2 sum_{n<=60} 2^-n dist(2^n t, Z)`.
fn doubled_takagi(t: &Rational) -> f64 {
    let mut x = t.clone();
    let mut acc = Rational::zero();
    let mut w = Rational::one();
    for _ in 0..=60 {
        let frac = &x - x.floor();
        let dist = frac.clone().min(Rational::one() - &frac);
        acc += &w * dist;
        x *= int(2);
        w /= int(2);
    }
    2.0 * to_f64(&acc)
}

fn blancmange_oracle(_: u64) -> Result<Outcome> {
    let p = rat(1, 2);
    let mut worst = 0.0f64;
    let mut grid_max = f64::MIN;
    for t in dyadic_grid(12) {
        let v = eval_mp(&p, &t, 1e-9)?;
        worst = worst.max((v - doubled_takagi(&t)).abs());
        grid_max = grid_max.max(v);
    }
    let third = eval_mp(&p, &rat(1, 3), 1e-10)?;
    let passed = worst <= 1e-8 && (grid_max - 4.0 / 3.0).abs() <= 1e-8;
    Ok(Outcome::new(
        passed,
        format!(
            "max deviation {worst:.3e}; grid max {grid_max:.12} (4/3 - {:.3e}); M(1/3) = {third:.12}",
            4.0 / 3.0 - grid_max
        ),
    ))
}

fn canonical_split(_: u64) -> Result<Outcome> {
    let a = canonical_array(&rat(1, 2), 3)?;
    let labels = [rat(3, 4), rat(1, 4), rat(-1, 4), rat(-3, 4)];
    let line_ok = a.lines()[3].len() == 4
        && a.lines()[3]
            .iter()
            .zip(&labels)
            .all(|((x, y), l)| *x == rat(1, 8) && y == l);
    if !line_ok {
        return Ok(Outcome::new(
            false,
            "line 3 of the p = 1/2 array differs from the labels",
        ));
    }
    for p in [rat(1, 3), rat(2, 5)] {
        let l = AffineMap2::alpha(Side::L, &p)?;
        let r = AffineMap2::alpha(Side::R, &p)?;
        for m in 1..=8 {
            let (left, right) = canonical_array(&p, m)?.split()?;
            let prev = canonical_array(&p, m - 1)?.breakpoints();
            let images: Vec<_> = prev.iter().map(|q| l.apply(q)).collect();
            let (x1, y1) = left.get(0, 0).clone();
            let glued: Vec<_> = right
                .breakpoints()
                .into_iter()
                .map(|(t, v)| (t + &x1, v + &y1))
                .collect();
            let r_images: Vec<_> = prev.iter().map(|q| r.apply(q)).collect();
            if left.breakpoints() != images || glued != r_images {
                return Ok(Outcome::new(
                    false,
                    format!("split mismatch at p = {p}, m = {m}"),
                ));
            }
        }
    }
    Ok(Outcome::new(
        true,
        "line 3 matches; split halves are the alpha images for m <= 8",
    ))
}

fn array_rate(_: u64) -> Result<Outcome> {
    let dev = |n: u32| -> Result<Vec<Rational>> {
        let a = block_array(block(n, n / 2)?, 6)?;
        Ok((0..=6)
            .map(|i| (&a.get(i, 0).0 - rat(1, 1 << i)).abs() * int(n as i64))
            .collect())
    };
    let (d1, d2) = (dev(5000)?, dev(10000)?);
    let mut ratios = Vec::new();
    let mut passed = true;
    for (i, (a, b)) in d1.iter().zip(&d2).enumerate() {
        if a.is_zero() && b.is_zero() {
            ratios.push(format!("i={i}: 0/0"));
            continue;
        }
        if a.is_zero() || b.is_zero() {
            passed = false;
            ratios.push(format!("i={i}: one side zero"));
            continue;
        }
        let ratio = to_f64(&(a / b));
        passed &= (0.4..=2.5).contains(&ratio);
        ratios.push(format!("i={i}: {ratio:.4}"));
    }
    Ok(Outcome::new(passed, ratios.join(", ")))
}

fn block_curve_trend(_: u64) -> Result<Outcome> {
    let grid = dyadic_grid(9);
    let mut parts = Vec::new();
    let mut passed = true;
    for p in [rat(1, 2), rat(4, 5)] {
        let mut dists = Vec::new();
        for n in [40u32, 80, 160, 320] {
            let k = (&p * int(n as i64)).floor().to_integer().to_u32().unwrap();
            let curve = BlockCurve::new(block(n, k)?)?;
            let mut d = 0.0f64;
            for t in &grid {
                d = d.max((to_f64(&curve.eval(t)?) - eval_mp(&p, t, 1e-10)?).abs());
            }
            dists.push(d);
        }
        passed &= dists.windows(2).all(|w| w[1] < w[0]);
        let shown: Vec<String> = dists.iter().map(|d| format!("{d:.4}")).collect();
        parts.push(format!("p={p}: {}", shown.join(" > ")));
    }
    Ok(Outcome::new(passed, parts.join("; ")))
}

fn orbit_identification(seed: u64) -> Result<Outcome> {
    for n in 1..=12u32 {
        for t in build_towers(n, 22)? {
            let x = Point::from_index(t.rungs[0], n as usize)?;
            let word = orbit_letters(&x, t.height(), &Extension::Fixed)?;
            if word != materialize(block(n, t.k)?, 1 << 12)? {
                return Ok(Outcome::new(
                    false,
                    format!("orbit letters differ from B({n},{})", t.k),
                ));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DyadicFunction::random_small(3, &mut rng)?;
    let profile = TowerProfile::new(&g)?;
    let mut compared = 0usize;
    for n in 3..=12u32 {
        for t in build_towers(n, 22)? {
            let id = BlockId::generalized(3, n as i64, t.k as i64)?;
            let x = Point::from_index(t.rungs[0], n as usize)?;
            let len = t.height();
            let sums = orbit_sums(&g, &x, len, &Extension::Fixed)?;
            for (j, s) in sums.iter().enumerate() {
                if *s != eval_fg_with(&profile, id, &BigUint::from(j))? {
                    return Ok(Outcome::new(
                        false,
                        format!("ergodic sums differ in ({n},{})", t.k),
                    ));
                }
            }
            let orbit = orbit_curve(&g, &x, len, &Extension::Fixed)?;
            let curve = GCurve::new(&g, id, &RenormOptions::default())?;
            let mut ratio: Option<Rational> = None;
            for (s, v) in orbit.ts().iter().zip(orbit.values()) {
                let w = curve.eval(s)?;
                if v.is_zero() != w.is_zero() {
                    return Ok(Outcome::new(
                        false,
                        format!("zero pattern differs in ({n},{})", t.k),
                    ));
                }
                if v.is_zero() {
                    continue;
                }
                let q = w / v;
                match &ratio {
                    None => ratio = Some(q),
                    Some(r) if *r != q => {
                        return Ok(Outcome::new(
                            false,
                            format!("no common scale in ({n},{})", id.k()),
                        ));
                    }
                    _ => {}
                }
            }
            compared += 1;
        }
    }
    Ok(Outcome::new(
        true,
        format!("letters match for n <= 12; {compared} g-curves equal up to one constant"),
    ))
}

fn coboundary(_: u64) -> Result<Outcome> {
    let g = DyadicFunction::from_ints(2, &[0, 1, -1, 0])?;
    let profile = TowerProfile::new(&g)?;
    let mut worst = Rational::zero();
    for n in 2..=20u32 {
        for k in 0..=n {
            let id = BlockId::generalized(2, n as i64, k as i64)?;
            let mut acc = Rational::zero();
            for letter in materialize_generalized(2, id, 1 << 20)? {
                let partials = profile.partials(letter.index());
                for v in partials {
                    worst = worst.max((&acc + v).abs());
                }
                acc += partials.last().unwrap();
            }
        }
    }
    if worst > Rational::one() {
        return Ok(Outcome::new(false, format!("max |F^g| = {worst}")));
    }
    let Cohomology::Cohomologous { constant, transfer } = cohomology_test(&g)? else {
        return Ok(Outcome::new(false, "not detected as a coboundary"));
    };
    if !constant.is_zero() {
        return Ok(Outcome::new(false, format!("constant {constant} != 0")));
    }
    let mut verified = 0;
    for idx in 0..256u64 {
        let x = Point::from_index(idx, 8)?;
        let Ok(tx) = apply_t(&x) else { continue };
        if transfer.value_at(&x)? - transfer.value_at(&tx)? != *g.value_at(&x)? {
            return Ok(Outcome::new(false, format!("f - f(T) != g at {x}")));
        }
        verified += 1;
    }
    Ok(Outcome::new(
        true,
        format!("max |F^g| = {worst} over n <= 20; C = 0; transfer verified at {verified} points"),
    ))
}

fn pg_machinery(seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..50u32 {
        let g = DyadicFunction::random_small(1 + i % 6, &mut rng)?;
        if polynomial_pg(&g) != covariance_pg(&g) {
            return Ok(Outcome::new(
                false,
                format!("covariance differs for sample {i}"),
            ));
        }
    }
    let g1 = polynomial_pg(&transition_family(1)?);
    if g1 != Polynomial::from_ints(&[0, 2, -2]) {
        return Ok(Outcome::new(false, format!("P of g_1 is {g1:?}")));
    }
    for n0 in 1..=7u32 {
        let m = polynomial_pg(&transition_family(n0)?).root_multiplicity(&rat(1, 2));
        if m != Some(n0 as usize - 1) {
            return Ok(Outcome::new(
                false,
                format!("N0 = {n0}: multiplicity {m:?}"),
            ));
        }
    }
    Ok(Outcome::new(
        true,
        "50 random g agree; P(g_1) = 2p(1-p); multiplicities N0-1 for N0 <= 7",
    ))
}

fn rg_scaling(_: u64) -> Result<Outcome> {
    let g = DyadicFunction::ab_indicator();
    let mut values = Vec::new();
    for n in [50u32, 100, 200, 400] {
        let r = renorm_rg(&g, block(n, n / 2)?, &RenormOptions::default())?;
        values.push(to_f64(
            &(r.value * int(n as i64) / binomial_rational(n as u64, (n / 2) as i64)),
        ));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    Ok(Outcome::new(
        hi < 2.0 * lo,
        format!("n R / C = {}", shown.join(", ")),
    ))
}

fn transition_asymptotics(_: u64) -> Result<Outcome> {
    let k = 2000u32;
    let scale = binomial_rational(2 * k as u64, k as i64);
    let mut passed = true;
    let mut even = Vec::new();
    for i in 2..=6u32 {
        let v = transition_numerator(2, k, i)? * int(1 << i) * int(4 * (k as i64).pow(2))
            / &scale
            / int((i * (i - 1)) as i64);
        let v = to_f64(&v);
        passed &= (0.95..=1.05).contains(&v);
        even.push(format!("{v:.4}"));
    }
    let mut odd = Vec::new();
    for i in 1..=6u32 {
        let v = transition_numerator(3, k, i)? * int(1 << i) * int((k as i64).pow(2))
            / &scale
            / int(i as i64);
        let v = to_f64(&v);
        passed &= v < 0.0 && (v / -0.75 - 1.0).abs() <= 0.1;
        odd.push(format!("{v:.4}"));
    }
    Ok(Outcome::new(
        passed,
        format!(
            "N0=2 ratios {}; N0=3 coefficients {} (expected -0.75)",
            even.join(" "),
            odd.join(" ")
        ),
    ))
}

fn tail_array(_: u64) -> Result<Outcome> {
    let tail = renormalized_tail_array(&transition_array(52)?, 40)?;
    let p = rat(1, 2);
    let mut d = 0.0f64;
    for (t, v) in tail.breakpoints() {
        d = d.max((0.75 * eval_mp(&p, &t, 1e-10)? - to_f64(&v)).abs());
    }
    Ok(Outcome::new(
        d <= 1e-2,
        format!("sup distance {d:.4} at i0 = 40, m = 12"),
    ))
}

fn conway_checks(_: u64) -> Result<Outcome> {
    if let Err(m) = verify_concatenation(14)? {
        return Ok(Outcome::new(
            false,
            format!(
                "D differs at j = {} in B({},{})",
                m.j,
                m.block.n(),
                m.block.k()
            ),
        ));
    }
    for n in 2..=14u32 {
        for k in 1..n {
            if interleave(n, k, 1 << 14)? != materialize(block(n, k)?, 1 << 14)? {
                return Ok(Outcome::new(
                    false,
                    format!("interleave differs at ({n},{k})"),
                ));
            }
        }
    }
    let seq = ConwaySeq::new(1 << 20);
    if !seq
        .values()
        .windows(2)
        .all(|w| w[1] == w[0] || w[1] == w[0] + 1)
    {
        return Ok(Outcome::new(false, "an increment outside {0,1}"));
    }
    Ok(Outcome::new(
        true,
        "concatenation through line 14; interleaving n <= 14; increments to 2^20",
    ))
}

fn tower_oracles(_: u64) -> Result<Outcome> {
    let depth = 12usize;
    // (n, interval index) -> (k, rung)
    let mut located: HashMap<(usize, u64), (u32, usize)> = HashMap::new();
    for n in 1..=depth as u32 {
        for t in build_towers(n, 22)? {
            for (r, &start) in t.rungs.iter().enumerate() {
                located.insert((n as usize, start), (t.k, r));
            }
        }
    }
    for idx in 0..1u64 << depth {
        let x = Point::from_index(idx, depth)?;
        for n in 1..=depth {
            let (k, r) = located[&(n, x.prefix_index(n))];
            if tower_index(&x, n)? != k || rung_index(&x, n)? != BigUint::from(r) {
                return Ok(Outcome::new(
                    false,
                    format!("digit rule disagrees at {x}, n = {n}"),
                ));
            }
        }
    }
    let mut steps = 0usize;
    for n in 1..=10u32 {
        for t in build_towers(n, 22)? {
            for r in 0..t.height() - 1 {
                let x = Point::from_index(t.rungs[r], n as usize)?;
                let y = apply_t(&x)?;
                if y.depth() != n as usize || y.prefix_index(n as usize) != t.rungs[r + 1] {
                    return Ok(Outcome::new(false, format!("T does not climb at {x}")));
                }
                steps += 1;
            }
        }
    }
    Ok(Outcome::new(
        true,
        format!("4096 points x 12 levels; {steps} rung steps"),
    ))
}

fn small_heights(seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = rat(1, 2);
    let mut hits = 0;
    for _ in 0..100 {
        let x = sample_mu_p(&p, 400, &mut rng)?;
        if find_subsequence(&x, 5, 100, 400)?.is_some() {
            hits += 1;
        }
    }
    Ok(Outcome::new(
        hits >= 95,
        format!("{hits}/100 samples reach height < C/5 at some n in 100..=400"),
    ))
}

fn g_array_decay(_: u64) -> Result<Outcome> {
    let profile = gamma_decay_profile(&DyadicFunction::ab_indicator(), 200, 100, 0.1, 25)?;
    let at = |i: usize| {
        profile
            .maxima
            .iter()
            .find(|(l, _)| *l == i)
            .map(|(_, v)| *v)
    };
    let (Some(m5), Some(m25)) = (at(5), at(25)) else {
        return Ok(Outcome::new(false, "missing lines"));
    };
    Ok(Outcome::new(
        m5 >= 10.0 * m25,
        format!(
            "line 5 max {m5:.4e}, line 25 max {m25:.4e}, ratio {:.2}",
            m5 / m25
        ),
    ))
}
