//! Deterministic optimization substrate: box projection, bounded and
//! half-bounded 1-D maximization, finite-difference gradients and projected
//! gradient ascent.
//!
//! Every routine is a pure function of its arguments. Objective values are
//! checked for finiteness on every evaluation and a non-finite value aborts
//! the search with [`Error::NonFinite`].

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Upper bound on the number of points in the coarse scan of [`maximize_1d`].
///
/// Long ranges (the truncated half-lines) get a coarser spacing than
/// `grid_step`; golden-section refinement recovers the precision.
pub const MAX_SCAN_POINTS: usize = 4096;

const GOLDEN_ITERATIONS: usize = 200;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// A closed interval `[lo, hi]`, or `[lo, +inf)` when `hi` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: Option<f64>,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi: Some(hi) })
    }

    pub fn unbounded_above(lo: f64) -> Result<Self> {
        if !lo.is_finite() {
            return Err(Error::InvalidInterval { lo, hi: f64::INFINITY });
        }
        Ok(Self { lo, hi: None })
    }

    /// `[0, +inf)`.
    pub fn nonnegative() -> Self {
        Self { lo: 0.0, hi: None }
    }

    /// Builds from an optional upper end, `None` meaning unbounded.
    pub fn from_parts(lo: f64, hi: Option<f64>) -> Result<Self> {
        match hi {
            Some(h) => Self::new(lo, h),
            None => Self::unbounded_above(lo),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> Option<f64> {
        self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_some()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && self.hi.is_none_or(|h| x <= h)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        let x = x.max(self.lo);
        match self.hi {
            Some(h) => x.min(h),
            None => x,
        }
    }

    /// Upper end used when a finite range is needed: `hi`, or the truncation
    /// cap for an unbounded interval.
    pub fn truncated_hi(&self, cap: f64) -> f64 {
        match self.hi {
            Some(h) => h,
            None if cap > self.lo => cap,
            None => self.lo + cap,
        }
    }
}

/// A nonempty product of intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct BoxSet {
    intervals: Vec<Interval>,
}

impl BoxSet {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidGame("a box needs at least one coordinate".into()));
        }
        Ok(Self { intervals })
    }

    pub fn uniform(interval: Interval, dim: usize) -> Result<Self> {
        Self::new(vec![interval; dim])
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim()
            && self.intervals.iter().zip(point).all(|(iv, &x)| iv.contains(x))
    }

    pub fn is_bounded(&self) -> bool {
        self.intervals.iter().all(Interval::is_bounded)
    }

    /// Concatenates boxes coordinate-wise.
    pub fn product<'a>(boxes: impl IntoIterator<Item = &'a BoxSet>) -> Result<Self> {
        Self::new(boxes.into_iter().flat_map(|b| b.intervals.iter().copied()).collect())
    }
}

impl TryFrom<Vec<Interval>> for BoxSet {
    type Error = Error;
    fn try_from(v: Vec<Interval>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BoxSet> for Vec<Interval> {
    fn from(b: BoxSet) -> Self {
        b.intervals
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub grid_step: f64,
    pub max_iterations: usize,
    pub truncation_cap: f64,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            grid_step: 1e-2,
            max_iterations: 500,
            truncation_cap: 1e3,
            tolerance: 1e-6,
            seed: 0,
        }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if !(self.grid_step > 0.0 && self.grid_step.is_finite()) {
            return Err(Error::InvalidBudget("grid_step must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidBudget("max_iterations must be positive"));
        }
        if !(self.truncation_cap > 0.0 && self.truncation_cap.is_finite()) {
            return Err(Error::InvalidBudget("truncation_cap must be positive"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidBudget("tolerance must be positive"));
        }
        Ok(())
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

fn finite_1d(f: &impl Fn(f64) -> f64, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: vec![x], value: v })
    }
}

fn finite_nd(f: &impl Fn(&[f64]) -> f64, x: &[f64]) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: x.to_vec(), value: v })
    }
}

/// Coordinate-wise clamp of `point` into `bounds`.
pub fn project_box(point: &[f64], bounds: &BoxSet) -> Result<Vec<f64>> {
    check_dim(bounds.dim(), point.len())?;
    Ok(point
        .iter()
        .zip(bounds.intervals())
        .map(|(&x, iv)| iv.clamp(x))
        .collect())
}

/// `n + 1` evenly spaced points from `lo` to `hi` inclusive, `n` chosen so the
/// spacing does not exceed `step`. Endpoints are hit exactly.
pub fn grid_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let n = ((hi - lo) / step - 1e-9).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    (0..=n)
        .map(|k| if k == n { hi } else { lo + k as f64 * h })
        .collect()
}

/// Maximizes a continuous function over an interval.
///
/// A coarse scan (spacing `grid_step`, or coarser when the range would need
/// more than [`MAX_SCAN_POINTS`]) locates the best bracket, which golden
/// section then refines. Unbounded intervals are truncated at
/// `truncation_cap`, doubled while `f` is still increasing at the cap.
/// Ties go to the smaller argument.
pub fn maximize_1d(
    f: impl Fn(f64) -> f64,
    interval: Interval,
    budget: &SearchBudget,
) -> Result<(f64, f64)> {
    budget.validate()?;
    let lo = interval.lo();
    let hi = match interval.hi() {
        Some(h) => h,
        None => {
            let mut cap = interval.truncated_hi(budget.truncation_cap);
            for _ in 0..budget.max_iterations {
                let back = (cap - budget.grid_step).max(lo);
                if finite_1d(&f, cap)? > finite_1d(&f, back)? {
                    cap = lo + 2.0 * (cap - lo);
                } else {
                    break;
                }
            }
            cap
        }
    };
    if hi <= lo {
        return Ok((lo, finite_1d(&f, lo)?));
    }

    let mut step = budget.grid_step;
    if (hi - lo) / step > MAX_SCAN_POINTS as f64 {
        step = (hi - lo) / MAX_SCAN_POINTS as f64;
    }
    let xs = grid_points(lo, hi, step);
    let mut best_k = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (k, &x) in xs.iter().enumerate() {
        let v = finite_1d(&f, x)?;
        if v > best_v {
            best_v = v;
            best_k = k;
        }
    }
    let a = xs[best_k.saturating_sub(1)];
    let b = xs[(best_k + 1).min(xs.len() - 1)];
    let (gx, gv) = golden_section_max(&f, a, b)?;
    if gv > best_v || (gv == best_v && gx < xs[best_k]) {
        Ok((gx, gv))
    } else {
        Ok((xs[best_k], best_v))
    }
}

fn golden_section_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = finite_1d(f, c)?;
    let mut fd = finite_1d(f, d)?;
    for _ in 0..GOLDEN_ITERATIONS {
        if (b - a) <= 1e-13 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        // `>=` keeps the left part on ties so the smaller argmax wins.
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = finite_1d(f, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = finite_1d(f, d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Central differences with step `1e-6 * max(1, |x_i|)`, switching to a
/// one-sided difference when the central stencil would leave the box.
pub fn finite_diff_gradient(
    f: impl Fn(&[f64]) -> f64,
    point: &[f64],
    bounds: &BoxSet,
) -> Result<Vec<f64>> {
    check_dim(bounds.dim(), point.len())?;
    let f0 = finite_nd(&f, point)?;
    let mut probe = point.to_vec();
    let mut grad = Vec::with_capacity(point.len());
    for (i, iv) in bounds.intervals().iter().enumerate() {
        let x = point[i];
        let h = 1e-6 * x.abs().max(1.0);
        let up_ok = iv.contains(x + h);
        let down_ok = iv.contains(x - h);
        let g = match (down_ok, up_ok) {
            (true, true) => {
                probe[i] = x + h;
                let fp = finite_nd(&f, &probe)?;
                probe[i] = x - h;
                let fm = finite_nd(&f, &probe)?;
                (fp - fm) / (2.0 * h)
            }
            (false, true) => {
                probe[i] = x + h;
                (finite_nd(&f, &probe)? - f0) / h
            }
            (true, false) => {
                probe[i] = x - h;
                (f0 - finite_nd(&f, &probe)?) / h
            }
            // Degenerate coordinate narrower than the stencil.
            (false, false) => 0.0,
        };
        probe[i] = x;
        grad.push(g);
    }
    Ok(grad)
}

/// Projected gradient ascent with backtracking.
///
/// Each iteration starts from step 1 and halves until the projected step
/// strictly improves `f`. Stops when the iterate moves less than the
/// tolerance (sup norm), when no improving step exists, or after
/// `max_iterations`. The returned value is never below `f(start)`.
pub fn projected_gradient_ascent(
    f: impl Fn(&[f64]) -> f64,
    bounds: &BoxSet,
    start: &[f64],
    budget: &SearchBudget,
) -> Result<(Vec<f64>, f64)> {
    budget.validate()?;
    let mut x = project_box(start, bounds)?;
    let mut fx = finite_nd(&f, &x)?;
    let mut trial = vec![0.0; x.len()];
    for _ in 0..budget.max_iterations {
        let grad = finite_diff_gradient(&f, &x, bounds)?;
        if grad.iter().all(|g| *g == 0.0) {
            break;
        }
        let mut eta = 1.0;
        let mut accepted = None;
        while eta > 1e-16 {
            for ((t, xi), (gi, iv)) in trial
                .iter_mut()
                .zip(&x)
                .zip(grad.iter().zip(bounds.intervals()))
            {
                *t = iv.clamp(xi + eta * gi);
            }
            let ft = finite_nd(&f, &trial)?;
            if ft > fx {
                accepted = Some(ft);
                break;
            }
            eta *= 0.5;
        }
        let Some(ft) = accepted else { break };
        let change = x
            .iter()
            .zip(&trial)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x.copy_from_slice(&trial);
        fx = ft;
        if change < budget.tolerance {
            break;
        }
    }
    Ok((x, fx))
}

/// Sup-norm distance.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(ivs: &[(f64, Option<f64>)]) -> BoxSet {
        BoxSet::new(ivs.iter().map(|&(lo, hi)| Interval::from_parts(lo, hi).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn projection_examples() {
        let bx = b(&[(0.0, None), (0.0, Some(3.0))]);
        assert_eq!(project_box(&[-1.0, 5.0], &bx).unwrap(), vec![0.0, 3.0]);
        let quad = b(&[(0.0, None), (0.0, None)]);
        assert_eq!(project_box(&[1.0, 2.0], &quad).unwrap(), vec![1.0, 2.0]);
        assert_eq!(project_box(&[7.0], &b(&[(0.0, Some(4.0))])).unwrap(), vec![4.0]);
        assert!(matches!(
            project_box(&[1.0], &quad),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn interval_rejects_bad_ends() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NEG_INFINITY, 1.0).is_err());
        assert!(Interval::unbounded_above(f64::NAN).is_err());
        assert!(BoxSet::new(vec![]).is_err());
    }

    #[test]
    fn maximize_half_line_quadratic() {
        // d/ds (6s - s^2/3) = 0 at s = 9, value 27.
        let (x, v) =
            maximize_1d(|s| 6.0 * s - s * s / 3.0, Interval::nonnegative(), &SearchBudget::default())
                .unwrap();
        assert!((x - 9.0).abs() < 1e-6, "{x}");
        assert!((v - 27.0).abs() < 1e-9);
    }

    #[test]
    fn maximize_half_line_quartic() {
        // 144 - t^3/12 = 0 at t = 12.
        let (x, v) = maximize_1d(
            |t| 144.0 * t - t.powi(4) / 48.0,
            Interval::nonnegative(),
            &SearchBudget::default(),
        )
        .unwrap();
        assert!((x - 12.0).abs() < 1e-4, "{x}");
        assert!((v - 1296.0).abs() < 1e-6);
    }

    #[test]
    fn maximize_bounded_parabola() {
        let (x, v) = maximize_1d(
            |x| -(x - 2.0) * (x - 2.0),
            Interval::new(0.0, 10.0).unwrap(),
            &SearchBudget::default(),
        )
        .unwrap();
        assert!((x - 2.0).abs() < 1e-6);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn maximize_expands_past_cap() {
        let budget = SearchBudget::default();
        let (x, _) = maximize_1d(|x| -(x - 5000.0).powi(2), Interval::nonnegative(), &budget).unwrap();
        assert!((x - 5000.0).abs() < 1e-4, "{x}");
    }

    #[test]
    fn maximize_breaks_ties_low() {
        let (x, v) =
            maximize_1d(|_| 1.0, Interval::new(-3.0, 3.0).unwrap(), &SearchBudget::default()).unwrap();
        assert_eq!(x, -3.0);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn maximize_reports_nonfinite() {
        let err = maximize_1d(|x| 1.0 / (x - 0.5), Interval::new(0.0, 1.0).unwrap(), &SearchBudget {
            grid_step: 0.25,
            ..Default::default()
        })
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn gradient_examples() {
        let bx = b(&[(0.0, None), (0.0, None)]);
        let g = finite_diff_gradient(|p| p[0] * p[1], &[2.0, 3.0], &bx).unwrap();
        assert!((g[0] - 3.0).abs() < 1e-4 && (g[1] - 2.0).abs() < 1e-4);

        let half = b(&[(0.0, None)]);
        let g = finite_diff_gradient(|p| -(p[0] - 1.0).powi(2), &[0.0], &half).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-4);

        let g = finite_diff_gradient(|_| 4.5, &[1.0, 7.0], &bx).unwrap();
        assert_eq!(g, vec![0.0, 0.0]);
    }

    #[test]
    fn gradient_upper_boundary_is_backward() {
        let bx = b(&[(0.0, Some(1.0))]);
        let g = finite_diff_gradient(|p| p[0] * p[0], &[1.0], &bx).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-4);
    }

    #[test]
    fn ascent_examples() {
        let budget = SearchBudget::default();
        let sq = b(&[(0.0, Some(10.0)), (0.0, Some(10.0))]);
        let (x, _) = projected_gradient_ascent(
            |p| -(p[0] - 2.0).powi(2) - (p[1] - 3.0).powi(2),
            &sq,
            &[0.0, 0.0],
            &budget,
        )
        .unwrap();
        assert!(sup_distance(&x, &[2.0, 3.0]) < 1e-4, "{x:?}");

        let (x, _) =
            projected_gradient_ascent(|p| -p[0] * p[0], &b(&[(1.0, Some(5.0))]), &[5.0], &budget)
                .unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);

        // 8x - 4x^2 peaks at x = 1.
        let (x, v) = projected_gradient_ascent(
            |p| 8.0 * p[0] - 4.0 * p[0] * p[0],
            &b(&[(0.0, None)]),
            &[0.0],
            &budget,
        )
        .unwrap();
        assert!((x[0] - 1.0).abs() < 1e-4, "{x:?}");
        assert!((v - 4.0).abs() < 1e-6);
    }

    #[test]
    fn grid_points_hit_endpoints() {
        let g = grid_points(0.0, 5.0, 0.01);
        assert_eq!(g.len(), 501);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 1.0);
        assert_eq!(g[200], 2.0);
        assert_eq!(*g.last().unwrap(), 5.0);
    }

    #[test]
    fn deterministic_outputs() {
        let f = |x: f64| (x + 1.0).sqrt() - 0.3 * x;
        let budget = SearchBudget::default();
        let a = maximize_1d(f, Interval::nonnegative(), &budget).unwrap();
        let c = maximize_1d(f, Interval::nonnegative(), &budget).unwrap();
        assert_eq!(a.0.to_bits(), c.0.to_bits());
        assert_eq!(a.1.to_bits(), c.1.to_bits());
    }

    fn sample_box() -> impl Strategy<Value = BoxSet> {
        prop::collection::vec((-50.0..50.0f64, prop::option::of(0.0..40.0f64)), 1..5).prop_map(|v| {
            BoxSet::new(
                v.into_iter()
                    .map(|(lo, w)| Interval::from_parts(lo, w.map(|w| lo + w)).unwrap())
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn projection_is_idempotent_and_inside(bx in sample_box(), raw in prop::collection::vec(-200.0..200.0f64, 4)) {
            let p = &raw[..bx.dim()];
            let once = project_box(p, &bx).unwrap();
            prop_assert!(bx.contains(&once));
            prop_assert_eq!(project_box(&once, &bx).unwrap(), once.clone());
            if bx.contains(p) {
                prop_assert_eq!(once, p.to_vec());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn maximize_beats_fine_grid_on_concave(a in 0.1..5.0f64, c in -3.0..12.0f64, k in 0.0..2.0f64, hi in 1.0..15.0f64) {
            // -a (x - c)^2 + k sqrt(x + 1) is concave on [0, hi].
            let f = |x: f64| -a * (x - c).powi(2) + k * (x + 1.0).sqrt();
            let budget = SearchBudget::default();
            let iv = Interval::new(0.0, hi).unwrap();
            let (_, v) = maximize_1d(f, iv, &budget).unwrap();
            let fine = grid_points(0.0, hi, budget.grid_step / 10.0)
                .into_iter()
                .map(f)
                .fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(v >= fine - budget.tolerance);
        }

        #[test]
        fn ascent_never_loses_value(c0 in -2.0..8.0f64, c1 in -2.0..8.0f64, s0 in 0.0..6.0f64, s1 in 0.0..6.0f64) {
            let bx = b(&[(0.0, Some(6.0)), (0.0, Some(6.0))]);
            let f = |p: &[f64]| -(p[0] - c0).powi(2) - 2.0 * (p[1] - c1).powi(2) + p[0] * p[1] * 0.1;
            let budget = SearchBudget::default();
            let (x, v) = projected_gradient_ascent(f, &bx, &[s0, s1], &budget).unwrap();
            prop_assert!(bx.contains(&x));
            prop_assert!(v >= f(&[s0, s1]) - budget.tolerance);
        }
    }
}
