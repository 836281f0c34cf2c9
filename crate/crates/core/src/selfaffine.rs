//! Triangular arrays and their polygonal curves, the affine maps
//! `alpha_L`, `alpha_R` and the self-affine curve `M_p` they generate.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::curves::CurveSamples;
use crate::error::{Error, Result};
use crate::exactnum::{pow, to_f64, Rational};

/// Ascending triangular array: line `i` holds `i+1` displacement pairs `(x, y)`
/// with `x[i][j] = x[i+1][j] + x[i+1][j+1]` and likewise for `y`.
/// Widths may be zero (empty sub-blocks), never negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularArray {
    lines: Vec<Vec<(Rational, Rational)>>,
}

impl TriangularArray {
    /// Validates shape, non-negative widths and the additive property.
    pub fn from_lines(lines: Vec<Vec<(Rational, Rational)>>) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::param("an array needs at least one line"));
        }
        for (i, line) in lines.iter().enumerate() {
            if line.len() != i + 1 {
                return Err(Error::param(format!(
                    "line {i} must have {} entries",
                    i + 1
                )));
            }
            if line.iter().any(|(x, _)| x.is_negative()) {
                return Err(Error::param(format!("negative width on line {i}")));
            }
        }
        if lines[0][0].0.is_zero() {
            return Err(Error::param("total width must be positive"));
        }
        let array = TriangularArray { lines };
        if let Some((i, j)) = array.additive_violation() {
            return Err(Error::param(format!(
                "additive property fails at ({i},{j})"
            )));
        }
        Ok(array)
    }

    /// Rebuilds the array from the pairs `(x[i][0], y[i][0])`.
    pub fn from_lower_left(side: Vec<(Rational, Rational)>) -> Result<Self> {
        if side.is_empty() {
            return Err(Error::param("empty side"));
        }
        let mut lines: Vec<Vec<(Rational, Rational)>> = vec![vec![side[0].clone()]];
        for (i, first) in side.into_iter().enumerate().skip(1) {
            let prev = &lines[i - 1];
            let mut line = Vec::with_capacity(i + 1);
            line.push(first);
            for parent in prev {
                let left = line.last().unwrap();
                line.push((&parent.0 - &left.0, &parent.1 - &left.1));
            }
            lines.push(line);
        }
        TriangularArray::from_lines(lines)
    }

    /// Rebuilds the array from the pairs `(x[i][i], y[i][i])`.
    pub fn from_lower_right(side: Vec<(Rational, Rational)>) -> Result<Self> {
        if side.is_empty() {
            return Err(Error::param("empty side"));
        }
        let mut lines: Vec<Vec<(Rational, Rational)>> = vec![vec![side[0].clone()]];
        for (i, last) in side.into_iter().enumerate().skip(1) {
            let prev = &lines[i - 1];
            let mut rev = Vec::with_capacity(i + 1);
            rev.push(last);
            for parent in prev.iter().rev() {
                let right = rev.last().unwrap();
                rev.push((&parent.0 - &right.0, &parent.1 - &right.1));
            }
            rev.reverse();
            lines.push(rev);
        }
        TriangularArray::from_lines(lines)
    }

    pub fn lines(&self) -> &[Vec<(Rational, Rational)>] {
        &self.lines
    }

    /// Index of the top line.
    pub fn depth(&self) -> usize {
        self.lines.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> &(Rational, Rational) {
        &self.lines[i][j]
    }

    pub fn width(&self) -> &Rational {
        &self.lines[0][0].0
    }

    pub fn lower_left(&self) -> Vec<(Rational, Rational)> {
        self.lines.iter().map(|l| l[0].clone()).collect()
    }

    pub fn additive_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.depth() {
            for j in 0..=i {
                let (x, y) = &self.lines[i][j];
                let (xl, yl) = &self.lines[i + 1][j];
                let (xr, yr) = &self.lines[i + 1][j + 1];
                if *x != xl + xr || *y != yl + yr {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// `(B, C)`: line `i` of `B` (of `C`) is the first (last) `i+1` pairs of line `i+1`.
    pub fn split(&self) -> Result<(TriangularArray, TriangularArray)> {
        if self.depth() == 0 {
            return Err(Error::param("cannot split a one-line array"));
        }
        let left = (1..self.lines.len())
            .map(|i| self.lines[i][..i].to_vec())
            .collect();
        let right = (1..self.lines.len())
            .map(|i| self.lines[i][1..].to_vec())
            .collect();
        Ok((
            TriangularArray { lines: left },
            TriangularArray { lines: right },
        ))
    }

    /// Sub-array whose line `i` is `(i0+i, j0..=j0+i)`, for `lines` lines.
    pub fn subarray(&self, i0: usize, j0: usize, lines: usize) -> Result<Self> {
        if j0 > i0 || lines == 0 || i0 + lines > self.lines.len() {
            return Err(Error::param("sub-array outside the array"));
        }
        TriangularArray::from_lines(
            (0..lines)
                .map(|i| self.lines[i0 + i][j0..=j0 + i].to_vec())
                .collect(),
        )
    }

    /// `phi_A` at every bound of the `2^m`-interval subdivision, left to right.
    /// Zero-width cells contribute no new bound.
    pub fn breakpoints(&self) -> Vec<(Rational, Rational)> {
        let mut out = vec![(Rational::zero(), Rational::zero())];
        self.push_bounds(0, 0, &Rational::zero(), &Rational::zero(), &mut out);
        out
    }

    fn push_bounds(
        &self,
        i: usize,
        j: usize,
        t: &Rational,
        v: &Rational,
        out: &mut Vec<(Rational, Rational)>,
    ) {
        let (x, y) = &self.lines[i][j];
        if x.is_zero() {
            return;
        }
        if i == self.depth() {
            out.push((t + x, v + y));
            return;
        }
        self.push_bounds(i + 1, j, t, v, out);
        let (xl, yl) = &self.lines[i + 1][j];
        self.push_bounds(i + 1, j + 1, &(t + xl), &(v + yl), out);
    }

    pub fn polyline(&self) -> Result<CurveSamples> {
        let (ts, values) = self.breakpoints().into_iter().unzip();
        CurveSamples::new(ts, values)
    }

    /// Exact `phi_A(t)` for `0 <= t <= width`, in `O(depth)` steps.
    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        if t.is_negative() || t > self.width() {
            return Err(Error::param("t outside the array's interval"));
        }
        let (mut start, mut value, mut j) = (Rational::zero(), Rational::zero(), 0);
        for i in 0..self.depth() {
            let (xl, yl) = &self.lines[i + 1][j];
            if *t > &start + xl {
                start += xl;
                value += yl;
                j += 1;
            }
        }
        let (x, y) = &self.lines[self.depth()][j];
        if x.is_zero() {
            return Ok(value);
        }
        Ok(value + (t - start) / x * y)
    }

    /// Largest and smallest value of `phi_A` over its bounds.
    pub fn extrema(&self) -> (Rational, Rational) {
        let m = self.depth();
        let mut hi: Vec<Rational> = self.lines[m]
            .iter()
            .map(|(_, y)| y.clone().max(Rational::zero()))
            .collect();
        let mut lo: Vec<Rational> = self.lines[m]
            .iter()
            .map(|(_, y)| y.clone().min(Rational::zero()))
            .collect();
        for i in (0..m).rev() {
            let line = &self.lines[i + 1];
            hi = (0..=i)
                .map(|j| hi[j].clone().max(&line[j].1 + &hi[j + 1]))
                .collect();
            lo = (0..=i)
                .map(|j| lo[j].clone().min(&line[j].1 + &lo[j + 1]))
                .collect();
        }
        (hi.swap_remove(0), lo.swap_remove(0))
    }

    fn map(&self, f: impl Fn(&Rational, &Rational) -> (Rational, Rational)) -> Self {
        TriangularArray {
            lines: self
                .lines
                .iter()
                .map(|l| l.iter().map(|(x, y)| f(x, y)).collect())
                .collect(),
        }
    }

    /// Standard renormalization: width 1, endpoint value 0 (linear trend
    /// removed), largest absolute bound value 1.
    pub fn renormalized(&self) -> Self {
        let w = self.width().clone();
        let slope = &self.lines[0][0].1 / &w;
        let detrended = self.map(|x, y| (x / &w, y - x * &slope));
        let (hi, lo) = detrended.extrema();
        let scale = hi.max(-lo);
        if scale.is_zero() {
            return detrended;
        }
        detrended.map(|x, y| (x.clone(), y / &scale))
    }
}

/// `A_p^m`: lower-left side `x = p^i`, `y = i p^(i-1)`.
pub fn canonical_array(p: &Rational, m: usize) -> Result<TriangularArray> {
    check_p(p)?;
    TriangularArray::from_lower_left(
        (0..=m as u32)
            .map(|i| {
                let y = if i == 0 {
                    Rational::zero()
                } else {
                    Rational::from_integer(i.into()) * pow(p, i - 1)
                };
                (pow(p, i), y)
            })
            .collect(),
    )
}

/// `A'_{1/2}`: lower-left side `x = 2^-i`, `y = i(i-1) 2^-(i-2)`.
pub fn transition_array(m: usize) -> Result<TriangularArray> {
    family_array(&Rational::new(1.into(), 2.into()), 1, m)
}

/// Lower-left side `x = p^i`, `y = i(i-1)...(i-s) p^(i-s-1)`.
pub fn family_array(p: &Rational, s: u32, m: usize) -> Result<TriangularArray> {
    check_p(p)?;
    if s == 0 {
        return Err(Error::param("s must be at least 1"));
    }
    TriangularArray::from_lower_left(
        (0..=m as u32)
            .map(|i| {
                let y = if i <= s {
                    Rational::zero()
                } else {
                    let falling: i64 = (i - s..=i).map(|v| v as i64).product();
                    Rational::from_integer(falling.into()) * pow(p, i - s - 1)
                };
                (pow(p, i), y)
            })
            .collect(),
    )
}

/// Renormalized sub-array of `a` starting at `(i0, 0)` and running to its top line.
pub fn renormalized_tail_array(a: &TriangularArray, i0: usize) -> Result<TriangularArray> {
    let lines = a.lines.len().checked_sub(i0).filter(|&l| l > 0);
    let lines = lines.ok_or_else(|| Error::param("i0 beyond the array"))?;
    Ok(a.subarray(i0, 0, lines)?.renormalized())
}

/// Mirror image: the sub-array starting at `(i0, i0)`.
pub fn renormalized_right_tail_array(a: &TriangularArray, i0: usize) -> Result<TriangularArray> {
    let lines = a.lines.len().checked_sub(i0).filter(|&l| l > 0);
    let lines = lines.ok_or_else(|| Error::param("i0 beyond the array"))?;
    Ok(a.subarray(i0, i0, lines)?.renormalized())
}

fn check_p(p: &Rational) -> Result<()> {
    if !p.is_positive() || *p >= Rational::one() {
        return Err(Error::param("p must lie strictly between 0 and 1"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    L,
    R,
}

/// `(x, y) -> (a x + b y + e, c x + d y + f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap2 {
    pub linear: [[Rational; 2]; 2],
    pub shift: [Rational; 2],
}

impl AffineMap2 {
    /// `alpha_L(x,y) = (p x, p y + x)`, `alpha_R(x,y) = ((1-p) x + p, (1-p) y - x + 1)`.
    pub fn alpha(side: Side, p: &Rational) -> Result<Self> {
        check_p(p)?;
        let (zero, one) = (Rational::zero(), Rational::one());
        let q = &one - p;
        Ok(match side {
            Side::L => AffineMap2 {
                linear: [[p.clone(), zero.clone()], [one, p.clone()]],
                shift: [zero.clone(), zero],
            },
            Side::R => AffineMap2 {
                linear: [[q.clone(), zero], [-one.clone(), q]],
                shift: [p.clone(), one],
            },
        })
    }

    pub fn apply(&self, pt: &(Rational, Rational)) -> (Rational, Rational) {
        let [[a, b], [c, d]] = &self.linear;
        let (x, y) = pt;
        (
            a * x + b * y + &self.shift[0],
            c * x + d * y + &self.shift[1],
        )
    }

    /// The linear part only, acting on displacements.
    pub fn apply_linear(&self, v: &(Rational, Rational)) -> (Rational, Rational) {
        let [[a, b], [c, d]] = &self.linear;
        (a * &v.0 + b * &v.1, c * &v.0 + d * &v.1)
    }
}

pub fn apply_alpha(
    side: Side,
    p: &Rational,
    pt: &(Rational, Rational),
) -> Result<(Rational, Rational)> {
    Ok(AffineMap2::alpha(side, p)?.apply(pt))
}

/// Number of descent levels so that `q^m / (1 - q) < eps`, `q = max(p, 1-p)`.
pub fn mp_levels(p: &Rational, eps: f64) -> usize {
    let p = to_f64(p);
    let q = p.max(1.0 - p);
    let m = ((eps * (1.0 - q)).ln() / q.ln()).ceil();
    m.max(0.0) as usize + 2
}

/// `M_p(t)` within `eps`, descending the maps exactly in rationals.
/// A point `t <= p` (scaled) takes the left branch.
pub fn eval_mp(p: &Rational, t: &Rational, eps: f64) -> Result<f64> {
    check_p(p)?;
    if t.is_negative() || *t > Rational::one() || eps.is_nan() || eps <= 0.0 {
        return Err(Error::param("need 0 <= t <= 1 and eps > 0"));
    }
    let q = Rational::one() - p;
    let (pf, qf) = (to_f64(p), to_f64(&q));
    // M(t) = offset + scale * M(u)
    let (mut offset, mut scale) = (0.0f64, 1.0f64);
    let mut u = t.clone();
    for _ in 0..mp_levels(p, eps) {
        if u.is_zero() || u.is_one() {
            break;
        }
        if u <= *p {
            // M(p v) = p M(v) + v
            u = &u / p;
            offset += scale * u.to_f64().unwrap();
            scale *= pf;
        } else {
            // M(p + q v) = q M(v) - v + 1
            u = (&u - p) / &q;
            offset += scale * (1.0 - u.to_f64().unwrap());
            scale *= qf;
        }
    }
    Ok(offset)
}

/// Samples of `M_p` at `j / samples`, `j = 0..=samples`.
pub fn sample_mp(p: &Rational, samples: usize, eps: f64) -> Result<CurveSamples> {
    if samples == 0 {
        return Err(Error::param("samples must be positive"));
    }
    let ts: Vec<Rational> = (0..=samples)
        .map(|j| Rational::new(j.into(), samples.into()))
        .collect();
    let values = ts
        .iter()
        .map(|t| eval_mp(p, t, eps).and_then(crate::exactnum::from_f64))
        .collect::<Result<Vec<_>>>()?;
    CurveSamples::new(ts, values)
}

/// Whether `f` agrees with `phi_A` within `tol` at every bound of the array.
pub fn compatible_with(
    f: impl Fn(&Rational) -> Result<f64>,
    a: &TriangularArray,
    tol: f64,
) -> Result<bool> {
    for (t, v) in a.breakpoints() {
        if (f(&t)? - to_f64(&v)).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the interpolated samples agree with `phi_A` within `tol` at every bound.
pub fn compatible(samples: &CurveSamples, a: &TriangularArray, tol: f64) -> Result<bool> {
    if samples.ts().last() != Some(a.width()) {
        return Err(Error::param("samples must cover [0, x00]"));
    }
    if tol == 0.0 {
        return Ok(a
            .breakpoints()
            .iter()
            .all(|(t, v)| samples.eval(t).is_ok_and(|s| s == *v)));
    }
    compatible_with(|t| samples.eval(t).map(|v| to_f64(&v)), a, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    fn pair(x: Rational, y: Rational) -> (Rational, Rational) {
        (x, y)
    }

    /// Twice the Takagi function, an independent series oracle.
    fn takagi2(t: f64) -> f64 {
        (0..60)
            .map(|n| {
                let s = t * 2f64.powi(n);
                (s - s.round()).abs() / 2f64.powi(n)
            })
            .sum::<f64>()
            * 2.0
    }

    #[test]
    fn alpha_examples() {
        let p = rat(2, 5);
        let c1 = apply_alpha(Side::L, &p, &pair(int(1), int(0))).unwrap();
        let c2 = apply_alpha(Side::R, &p, &pair(int(0), int(0))).unwrap();
        assert_eq!(c1, pair(rat(2, 5), int(1)));
        assert_eq!(c1, c2);
        for p in [rat(1, 3), rat(1, 2), rat(9, 10)] {
            let o = pair(int(0), int(0));
            assert_eq!(apply_alpha(Side::L, &p, &o).unwrap(), o);
            let e = pair(int(1), int(0));
            assert_eq!(apply_alpha(Side::R, &p, &e).unwrap(), e);
        }
        assert!(apply_alpha(Side::L, &int(1), &pair(int(0), int(0))).is_err());
    }

    #[test]
    fn canonical_array_examples() {
        let a = canonical_array(&rat(1, 2), 3).unwrap();
        assert_eq!(a.get(0, 0), &pair(int(1), int(0)));
        assert_eq!(
            a.lines()[3],
            vec![
                pair(rat(1, 8), rat(3, 4)),
                pair(rat(1, 8), rat(1, 4)),
                pair(rat(1, 8), rat(-1, 4)),
                pair(rat(1, 8), rat(-3, 4)),
            ]
        );
        assert_eq!(
            a.lines()[1],
            vec![pair(rat(1, 2), int(1)), pair(rat(1, 2), int(-1))]
        );
        assert_eq!(a.lines()[2][1], pair(rat(1, 4), int(0)));
        assert_eq!(
            canonical_array(&rat(3, 7), 0).unwrap().get(0, 0),
            &pair(int(1), int(0))
        );
    }

    #[test]
    fn canonical_lines_propagate_by_linear_parts() {
        for p in [rat(1, 3), rat(2, 5), rat(1, 2)] {
            let a = canonical_array(&p, 8).unwrap();
            let l = AffineMap2::alpha(Side::L, &p).unwrap();
            let r = AffineMap2::alpha(Side::R, &p).unwrap();
            for i in 0..8 {
                for j in 0..=i {
                    assert_eq!(a.get(i + 1, j), &l.apply_linear(a.get(i, j)));
                    assert_eq!(a.get(i + 1, j + 1), &r.apply_linear(a.get(i, j)));
                }
            }
        }
    }

    #[test]
    fn polyline_examples() {
        let one = TriangularArray::from_lines(vec![vec![pair(int(1), int(0))]]).unwrap();
        assert_eq!(
            one.breakpoints(),
            vec![pair(int(0), int(0)), pair(int(1), int(0))]
        );
        let a1 = canonical_array(&rat(1, 2), 1).unwrap();
        assert_eq!(a1.breakpoints()[1], pair(rat(1, 2), int(1)));
        let a3 = canonical_array(&rat(1, 2), 3).unwrap();
        let values: Vec<Rational> = a3.breakpoints().into_iter().map(|b| b.1).collect();
        let expected = [
            int(0),
            rat(3, 4),
            int(1),
            rat(5, 4),
            int(1),
            rat(5, 4),
            int(1),
            rat(3, 4),
            int(0),
        ];
        assert_eq!(values, expected);
        let ts: Vec<Rational> = a3.breakpoints().into_iter().map(|b| b.0).collect();
        assert!(ts.iter().enumerate().all(|(j, t)| *t == rat(j as i64, 8)));
    }

    #[test]
    fn eval_matches_breakpoints_and_interpolates() {
        let a = canonical_array(&rat(2, 5), 6).unwrap();
        let bps = a.breakpoints();
        for (t, v) in &bps {
            assert_eq!(&a.eval(t).unwrap(), v);
        }
        for w in bps.windows(2) {
            let mid = (&w[0].0 + &w[1].0) / int(2);
            assert_eq!(a.eval(&mid).unwrap(), (&w[0].1 + &w[1].1) / int(2));
        }
    }

    #[test]
    fn lower_right_reconstruction() {
        let a = canonical_array(&rat(1, 3), 7).unwrap();
        let side: Vec<_> = a
            .lines()
            .iter()
            .map(|l| l.last().unwrap().clone())
            .collect();
        assert_eq!(TriangularArray::from_lower_right(side).unwrap(), a);
    }

    #[test]
    fn split_examples() {
        let a =
            TriangularArray::from_lower_left(vec![pair(int(1), int(0)), pair(rat(1, 3), int(2))])
                .unwrap();
        let (b, c) = a.split().unwrap();
        assert_eq!(b.lines(), &[vec![pair(rat(1, 3), int(2))]]);
        assert_eq!(c.lines(), &[vec![pair(rat(2, 3), int(-2))]]);
        assert!(b.split().is_err());
    }

    #[test]
    fn split_of_canonical_is_alpha_images() {
        for p in [rat(1, 3), rat(2, 5)] {
            let l = AffineMap2::alpha(Side::L, &p).unwrap();
            let r = AffineMap2::alpha(Side::R, &p).unwrap();
            for m in 1..=8 {
                let (b, c) = canonical_array(&p, m).unwrap().split().unwrap();
                let prev = canonical_array(&p, m - 1).unwrap().breakpoints();
                let left: Vec<_> = prev.iter().map(|q| l.apply(q)).collect();
                assert_eq!(b.breakpoints(), left);
                let (x1, y1) = b.get(0, 0).clone();
                let right: Vec<_> = prev.iter().map(|q| r.apply(q)).collect();
                let glued: Vec<_> = c
                    .breakpoints()
                    .into_iter()
                    .map(|(t, v)| (t + &x1, v + &y1))
                    .collect();
                assert_eq!(glued, right);
            }
        }
    }

    /// Widths `p^j (1-p)^(i-j)` (all positive) with a random `y` side.
    fn random_array() -> impl Strategy<Value = TriangularArray> {
        (1i64..10, prop::collection::vec((-9i64..9, 1i64..9), 2..=7)).prop_map(|(pn, ys)| {
            let p = rat(pn, 10);
            let side = ys
                .iter()
                .enumerate()
                .map(|(i, &(yn, yd))| (pow(&p, i as u32), rat(yn, yd)))
                .collect();
            TriangularArray::from_lower_left(side).unwrap()
        })
    }

    proptest! {
        #[test]
        fn gluing_identity(a in random_array()) {
            let (b, c) = a.split().unwrap();
            let x1 = b.width().clone();
            let y_end = b.eval(&x1).unwrap();
            for (t, v) in a.breakpoints() {
                let expected = if t <= x1 {
                    b.eval(&t).unwrap()
                } else {
                    &y_end + c.eval(&(&t - &x1)).unwrap()
                };
                prop_assert_eq!(v, expected);
            }
            prop_assert!(a.additive_violation().is_none());
        }

        #[test]
        fn extrema_bracket_every_bound(a in random_array()) {
            let (hi, lo) = a.extrema();
            let bps = a.breakpoints();
            prop_assert!(bps.iter().all(|(_, v)| *v <= hi && *v >= lo));
            prop_assert!(bps.iter().any(|(_, v)| *v == hi));
            prop_assert!(bps.iter().any(|(_, v)| *v == lo));
        }
    }

    #[test]
    fn mp_examples() {
        assert_eq!(eval_mp(&rat(1, 2), &rat(1, 2), 1e-9).unwrap(), 1.0);
        for p in [rat(1, 3), rat(2, 5), rat(4, 5)] {
            assert_eq!(eval_mp(&p, &int(0), 1e-9).unwrap(), 0.0);
            assert_eq!(eval_mp(&p, &int(1), 1e-9).unwrap(), 0.0);
            assert!((eval_mp(&p, &p, 1e-9).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((eval_mp(&rat(1, 2), &rat(1, 4), 1e-9).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mp_half_is_doubled_takagi() {
        let p = rat(1, 2);
        for j in 0..=512 {
            let t = rat(j, 512);
            let v = eval_mp(&p, &t, 1e-9).unwrap();
            assert!((v - takagi2(j as f64 / 512.0)).abs() < 1e-8, "t = {j}/512");
        }
        let third = eval_mp(&p, &rat(1, 3), 1e-10).unwrap();
        assert!((third - 4.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn mp_self_affinity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let eps = 1e-8;
        for p in [rat(1, 3), rat(2, 5), rat(3, 4)] {
            let q = Rational::one() - &p;
            for _ in 0..256 {
                let t = rat(rng.gen_range(0..=100_000), 100_000);
                let m = eval_mp(&p, &t, eps).unwrap();
                let left = eval_mp(&p, &(&p * &t), eps).unwrap();
                assert!((left - (to_f64(&p) * m + to_f64(&t))).abs() <= 2.0 * eps);
                let right = eval_mp(&p, &(&q * &t + &p), eps).unwrap();
                assert!((right - (to_f64(&q) * m - to_f64(&t) + 1.0)).abs() <= 2.0 * eps);
            }
        }
    }

    #[test]
    fn canonical_arrays_are_compatible_with_mp() {
        let p = rat(1, 2);
        let samples = sample_mp(&p, 4096, 1e-10).unwrap();
        for m in 0..=8 {
            let a = canonical_array(&p, m).unwrap();
            assert!(compatible(&samples, &a, 1e-8).unwrap());
        }
        for p in [rat(1, 3), rat(3, 5)] {
            let a = canonical_array(&p, 7).unwrap();
            assert!(compatible_with(|t| eval_mp(&p, t, 1e-10), &a, 1e-8).unwrap());
        }
        assert!(!compatible(&samples, &canonical_array(&rat(1, 3), 3).unwrap(), 1e-8).unwrap());
        let a = canonical_array(&rat(2, 7), 5).unwrap();
        assert!(compatible(&a.polyline().unwrap(), &a, 0.0).unwrap());
    }

    #[test]
    fn polylines_increase_with_depth() {
        for p in [rat(1, 2), rat(1, 3)] {
            let fine = canonical_array(&p, 9).unwrap();
            let mut prev: Option<Vec<Rational>> = None;
            for m in 0..=9 {
                let a = canonical_array(&p, m).unwrap();
                let vals: Vec<Rational> = fine
                    .breakpoints()
                    .iter()
                    .map(|(t, _)| a.eval(t).unwrap())
                    .collect();
                if let Some(prev) = &prev {
                    assert!(vals.iter().zip(prev).all(|(v, w)| v >= w));
                }
                prev = Some(vals);
            }
        }
    }

    #[test]
    fn transition_array_examples() {
        let a = transition_array(6).unwrap();
        assert_eq!(a.get(2, 0), &pair(rat(1, 4), int(2)));
        assert!(a.get(0, 0).1.is_zero() && a.get(1, 0).1.is_zero());
        assert_eq!(family_array(&rat(1, 2), 1, 6).unwrap(), a);
        let f2 = family_array(&rat(1, 3), 2, 5).unwrap();
        assert_eq!(f2.get(3, 0).1, int(6));
        assert_eq!(f2.get(4, 0).1, int(24) * rat(1, 3));
    }

    #[test]
    fn tail_arrays() {
        let a = transition_array(20).unwrap();
        let t0 = renormalized_tail_array(&a, 0).unwrap();
        assert_eq!(t0, a.renormalized());
        let (hi, lo) = t0.extrema();
        assert_eq!(hi.max(-lo), int(1));
        // distance to +-M/|M| shrinks roughly like 1/i0
        let dist = |i0: usize, sign: f64| {
            let a = transition_array(i0 + 10).unwrap();
            let tail = if sign > 0.0 {
                renormalized_tail_array(&a, i0).unwrap()
            } else {
                renormalized_right_tail_array(&a, i0).unwrap()
            };
            tail.breakpoints()
                .iter()
                .map(|(t, v)| {
                    (sign * 0.75 * eval_mp(&rat(1, 2), t, 1e-10).unwrap() - to_f64(v)).abs()
                })
                .fold(0.0, f64::max)
        };
        for sign in [1.0, -1.0] {
            let (d20, d40, d160) = (dist(20, sign), dist(40, sign), dist(160, sign));
            assert!(d160 < d40 && d40 < d20);
            assert!(d160 < 1e-2 && d40 < 3e-2, "{d40} {d160}");
        }
    }
}
