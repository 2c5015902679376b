//! Exact (M, R) corner points for every scheme, lower convex envelopes via
//! memory sharing, regime comparisons, and subpacketization tables, with CSV
//! and JSON emission. All correctness-path arithmetic is exact rational.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::json;

use crate::combin::{binom, log10_binom_big};
use crate::error::{Error, Result};
use crate::scheme::baselines::{bl1_exact_t_limit, bl1_tradeoff_point, OverflowPolicy, VirtualUserParams};
use crate::scheme::SchemeId;

pub type Rat = BigRational;

fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

fn binom_rat(a: i64, b: i64) -> Rat {
    Rat::from_integer(BigInt::from(binom(a, b)))
}

/// Subpacketization level; Baseline 1's C(KÑ, t) is reported in log form
/// because it is doubly exponential in N.
#[derive(Clone, PartialEq, Debug)]
pub enum Subpacketization {
    Exact(BigUint),
    Log10(f64),
}

impl Subpacketization {
    pub fn csv_field(&self) -> String {
        match self {
            Subpacketization::Exact(v) => v.to_string(),
            Subpacketization::Log10(v) => format!("log10:{v:.6}"),
        }
    }
}

/// One exact memory-load corner with provenance.
#[derive(Clone, PartialEq, Debug)]
pub struct TradeoffPoint {
    pub scheme: SchemeId,
    /// The t parameter behind the point, where one exists.
    pub t: Option<i64>,
    pub m: Rat,
    pub r: Rat,
    pub subpacketization: Subpacketization,
    /// False flags analytic-only points with no executable scheme behind
    /// them in this crate.
    pub operational: bool,
    /// False when the load was evaluated in floating log-space.
    pub exact: bool,
}

/// PK corner at parameter t: (1 + t(N−1)/K, (C(K,t+1) − C(K−r,t+1))/C(K,t))
/// with r = min(K, N).
pub fn pk_tradeoff_point(k: usize, n: usize, t: usize) -> TradeoffPoint {
    let (ki, ni, ti) = (k as i64, n as i64, t as i64);
    let r_dim = ki.min(ni);
    let m = rat_int(1) + rat_frac(ti * (ni - 1), ki);
    let r = (binom_rat(ki, ti + 1) - binom_rat(ki - r_dim, ti + 1)) / binom_rat(ki, ti);
    TradeoffPoint {
        scheme: SchemeId::Pk,
        t: Some(ti),
        m,
        r,
        subpacketization: Subpacketization::Exact(binom(ki, ti)),
        operational: true,
        exact: true,
    }
}

/// Baseline 2 corner: PK memory with r' = min(K', N) in the load.
pub fn bl2_tradeoff_point(k: usize, k_prime: usize, n: usize, t: usize) -> TradeoffPoint {
    let (ki, ni, ti) = (k as i64, n as i64, t as i64);
    let r_dim = (k_prime as i64).min(ni);
    let m = rat_int(1) + rat_frac(ti * (ni - 1), ki);
    let r = (binom_rat(ki, ti + 1) - binom_rat(ki - r_dim, ti + 1)) / binom_rat(ki, ti);
    TradeoffPoint {
        scheme: SchemeId::Bl2,
        t: Some(ti),
        m,
        r,
        subpacketization: Subpacketization::Exact(binom(ki, ti)),
        operational: true,
        exact: true,
    }
}

/// Foresight benchmark: the PK point with K replaced by K'.
pub fn foresight_point(k_prime: usize, n: usize, t: usize) -> TradeoffPoint {
    let mut p = pk_tradeoff_point(k_prime, n, t);
    p.scheme = SchemeId::Foresight;
    p.operational = false;
    p
}

/// New Scheme 1 corner at t: memory via the surplus-key count
/// η_t = [C(K',t) − C(K−1,t−1)]⁺, load over the active set only.
pub fn new1_tradeoff_point(k: usize, k_prime: usize, n: usize, t: usize) -> TradeoffPoint {
    let (ki, kpi, ni, ti) = (k as i64, k_prime as i64, n as i64, t as i64);
    let l = binom_rat(kpi, ti);
    let own = binom_rat(ki - 1, ti - 1);
    let eta = (l.clone() - own.clone()).max(Rat::zero());
    let m = (rat_int(ni) * own + eta) / l.clone();
    let r_dim = kpi.min(ni);
    let r = (binom_rat(kpi, ti + 1) - binom_rat(kpi - r_dim, ti + 1)) / l;
    TradeoffPoint {
        scheme: SchemeId::New1,
        t: Some(ti),
        m,
        r,
        subpacketization: Subpacketization::Exact(binom(kpi, ti)),
        operational: true,
        exact: true,
    }
}

/// New Scheme 2 segment endpoints: (N − (N−1)/K', 1/K') and (N, 0). Only the
/// first has an executable scheme behind it; the second is the trivial
/// full-cache point.
pub fn new2_tradeoff_segment(k_prime: usize, n: usize) -> (TradeoffPoint, TradeoffPoint) {
    let (kpi, ni) = (k_prime as i64, n as i64);
    let corner = TradeoffPoint {
        scheme: SchemeId::New2,
        t: Some(kpi - 1),
        m: rat_int(ni) - rat_frac(ni - 1, kpi),
        r: rat_frac(1, kpi),
        subpacketization: Subpacketization::Exact(BigUint::from(k_prime)),
        operational: true,
        exact: true,
    };
    let full = TradeoffPoint {
        scheme: SchemeId::New2,
        t: Some(kpi),
        m: rat_int(ni),
        r: Rat::zero(),
        subpacketization: Subpacketization::Exact(BigUint::one()),
        operational: false,
        exact: true,
    };
    (corner, full)
}

/// The uncoded line R(M) = N − M contributes the trivial corners (0, N) and
/// (N, 0), available to every scheme by time sharing.
pub fn uncoded_points(n: usize) -> Vec<TradeoffPoint> {
    let ni = n as i64;
    let mk = |m: Rat, r: Rat| TradeoffPoint {
        scheme: SchemeId::Uncoded,
        t: None,
        m,
        r,
        subpacketization: Subpacketization::Exact(BigUint::one()),
        operational: false,
        exact: true,
    };
    vec![mk(Rat::zero(), rat_int(ni)), mk(rat_int(ni), Rat::zero())]
}

/// Options constraining Baseline 1 enumeration, whose full t range [0, KÑ]
/// is astronomically long for realistic q^N.
#[derive(Clone, Copy, Debug)]
pub struct Bl1Options {
    pub t_cap: u64,
    pub policy: OverflowPolicy,
}

impl Default for Bl1Options {
    fn default() -> Self {
        Bl1Options { t_cap: 512, policy: OverflowPolicy::default() }
    }
}

pub fn bl1_points(k: usize, n: usize, q: u64, opts: Bl1Options) -> Result<Vec<TradeoffPoint>> {
    let params = VirtualUserParams::new(k, n, q);
    let budget = match opts.policy {
        OverflowPolicy::Exact { max_digits } => bl1_exact_t_limit(k, n, q, max_digits),
        OverflowPolicy::LogSpace => u64::MAX,
    };
    let t_end = params
        .t_max
        .to_u64()
        .unwrap_or(u64::MAX)
        .min(opts.t_cap)
        .min(budget);
    (0..=t_end)
        .map(|t| bl1_tradeoff_point(k, n, q, t, opts.policy))
        .collect()
}

/// All corner points of one scheme for the given system, plus the trivial
/// endpoints where the theorem statements include them.
pub fn scheme_points(
    id: SchemeId,
    k: usize,
    k_prime: usize,
    n: usize,
    q: u64,
) -> Result<Vec<TradeoffPoint>> {
    match id {
        SchemeId::Pk => Ok((0..=k).map(|t| pk_tradeoff_point(k, n, t)).collect()),
        SchemeId::Bl2 => Ok((0..=k).map(|t| bl2_tradeoff_point(k, k_prime, n, t)).collect()),
        SchemeId::Foresight => Ok((0..=k_prime).map(|t| foresight_point(k_prime, n, t)).collect()),
        SchemeId::New1 => Ok((0..=k_prime).map(|t| new1_tradeoff_point(k, k_prime, n, t)).collect()),
        SchemeId::New2 => {
            let (a, b) = new2_tradeoff_segment(k_prime, n);
            Ok(vec![a, b])
        }
        SchemeId::Uncoded => Ok(uncoded_points(n)),
        SchemeId::Bl1 => bl1_points(k, n, q, Bl1Options::default()),
    }
}

/// Lower convex envelope corners: strictly increasing in M, non-increasing
/// in R, convex.
#[derive(Clone, PartialEq, Debug)]
pub struct Curve {
    pub corners: Vec<(Rat, Rat)>,
}

/// Lower convex envelope of a point set under memory sharing (convex
/// combinations) and memory padding (more cache can only help). Dominated
/// and collinear points are absorbed.
pub fn lower_envelope(points: &[(Rat, Rat)]) -> Curve {
    assert!(!points.is_empty(), "envelope of an empty point set");
    let mut pts: Vec<(Rat, Rat)> = points.to_vec();
    pts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    pts.dedup_by(|next, prev| {
        if next.0 == prev.0 {
            // same memory: keep the smaller load (sorted order guarantees it)
            true
        } else {
            false
        }
    });
    // monotone-chain lower hull: slopes strictly increase along the hull
    let mut hull: Vec<(Rat, Rat)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            // slope(a,b) >= slope(b,p)  <=>  pop b
            let lhs = (&b.1 - &a.1) * (&p.0 - &b.0);
            let rhs = (&p.1 - &b.1) * (&b.0 - &a.0);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // memory padding: once the minimum load is reached the curve stays flat
    let min_r = hull.iter().map(|(_, r)| r.clone()).min().expect("nonempty hull");
    let cut = hull.iter().position(|(_, r)| *r == min_r).expect("min exists");
    let max_m = hull.last().expect("nonempty").0.clone();
    hull.truncate(cut + 1);
    if hull.last().expect("nonempty").0 < max_m {
        hull.push((max_m, min_r));
    }
    Curve { corners: hull }
}

impl Curve {
    pub fn min_m(&self) -> &Rat {
        &self.corners.first().expect("nonempty curve").0
    }

    pub fn max_m(&self) -> &Rat {
        &self.corners.last().expect("nonempty curve").0
    }

    /// Piecewise-linear interpolation at memory m.
    pub fn evaluate(&self, m: &Rat) -> Result<Rat> {
        if m < self.min_m() || m > self.max_m() {
            return Err(Error::OutOfRange);
        }
        let idx = self.corners.partition_point(|(cm, _)| cm <= m);
        if idx > 0 && self.corners[idx - 1].0 == *m {
            return Ok(self.corners[idx - 1].1.clone());
        }
        let (m1, r1) = &self.corners[idx - 1];
        let (m2, r2) = &self.corners[idx];
        Ok(r1 + (r2 - r1) * (m - m1) / (m2 - m1))
    }

    /// Exact convexity and monotonicity checks on the corner list.
    pub fn is_convex_non_increasing(&self) -> bool {
        let mono = self
            .corners
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[0].1 >= w[1].1);
        let convex = self.corners.windows(3).all(|w| {
            let lhs = (&w[1].1 - &w[0].1) * (&w[2].0 - &w[1].0);
            let rhs = (&w[2].1 - &w[1].1) * (&w[1].0 - &w[0].0);
            lhs < rhs
        });
        mono && convex
    }
}

/// Exact equality of two piecewise-linear curves on [lo, hi]: both are
/// linear between the union of their breakpoints, so agreement at every
/// breakpoint plus the interval ends settles it.
pub fn curves_equal_on(a: &Curve, b: &Curve, lo: &Rat, hi: &Rat) -> Result<bool> {
    let mut probes: Vec<Rat> = vec![lo.clone(), hi.clone()];
    for (m, _) in a.corners.iter().chain(b.corners.iter()) {
        if m > lo && m < hi {
            probes.push(m.clone());
        }
    }
    for m in probes {
        if a.evaluate(&m)? != b.evaluate(&m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when curve a is pointwise ≤ curve b on [lo, hi].
pub fn curve_dominates_on(a: &Curve, b: &Curve, lo: &Rat, hi: &Rat) -> Result<bool> {
    let mut probes: Vec<Rat> = vec![lo.clone(), hi.clone()];
    for (m, _) in a.corners.iter().chain(b.corners.iter()) {
        if m > lo && m < hi {
            probes.push(m.clone());
        }
    }
    for m in probes {
        if a.evaluate(&m)? > b.evaluate(&m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Envelope of one scheme's points together with the trivial uncoded
/// corners, which time sharing always makes available.
pub fn scheme_envelope(id: SchemeId, k: usize, k_prime: usize, n: usize, q: u64) -> Result<Curve> {
    let mut pts: Vec<(Rat, Rat)> = scheme_points(id, k, k_prime, n, q)?
        .into_iter()
        .map(|p| (p.m, p.r))
        .collect();
    pts.extend(uncoded_points(n).into_iter().map(|p| (p.m, p.r)));
    Ok(lower_envelope(&pts))
}

/// The "new scheme" curve of the figures: the hull over Theorems 3 and 4
/// corners plus the trivial points.
pub fn combined_new_envelope(k: usize, k_prime: usize, n: usize) -> Curve {
    let mut pts: Vec<(Rat, Rat)> = (0..=k_prime)
        .map(|t| {
            let p = new1_tradeoff_point(k, k_prime, n, t);
            (p.m, p.r)
        })
        .collect();
    let (c, f) = new2_tradeoff_segment(k_prime, n);
    pts.push((c.m, c.r));
    pts.push((f.m, f.r));
    pts.extend(uncoded_points(n).into_iter().map(|p| (p.m, p.r)));
    lower_envelope(&pts)
}

/// Which curve is lowest at each grid memory value.
pub struct RegimeRow {
    pub m: Rat,
    pub loads: Vec<(SchemeId, Rat)>,
    pub best: SchemeId,
}

pub fn compare_regimes(curves: &[(SchemeId, Curve)], grid: &[Rat]) -> Result<Vec<RegimeRow>> {
    let mut rows = Vec::with_capacity(grid.len());
    for m in grid {
        let mut loads = Vec::with_capacity(curves.len());
        for (id, c) in curves {
            loads.push((*id, c.evaluate(m)?));
        }
        let best = loads
            .iter()
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("at least one curve")
            .0;
        rows.push(RegimeRow { m: m.clone(), loads, best });
    }
    Ok(rows)
}

/// Uniform rational grid over [0, N] with the given number of steps.
pub fn memory_grid(n: usize, steps: usize) -> Vec<Rat> {
    (0..=steps)
        .map(|i| rat_frac(n as i64 * i as i64, steps as i64))
        .collect()
}

/// Per-t subpacketization of every scheme; Baseline 1 in log10 form.
pub struct SubpacketizationRow {
    pub t: usize,
    pub pk: BigUint,
    pub bl2: BigUint,
    pub new1: Option<BigUint>,
    pub new2: BigUint,
    pub bl1_log10: f64,
}

pub fn subpacketization_table(
    k: usize,
    k_prime: usize,
    n: usize,
    q: u64,
    t_max: usize,
) -> Vec<SubpacketizationRow> {
    let params = VirtualUserParams::new(k, n, q);
    let big_k_ntilde = &params.ntilde * BigUint::from(k);
    (0..=t_max.min(k))
        .map(|t| SubpacketizationRow {
            t,
            pk: binom(k as i64, t as i64),
            bl2: binom(k as i64, t as i64),
            new1: (t <= k_prime).then(|| binom(k_prime as i64, t as i64)),
            new2: BigUint::from(k_prime),
            bl1_log10: log10_binom_big(&big_k_ntilde, t as u64),
        })
        .collect()
}

/// CSV with the schema: scheme,t,M_num,M_den,R_num,R_den,L,operational.
pub fn points_to_csv(points: &[TradeoffPoint]) -> String {
    let mut out = String::from("scheme,t,M_num,M_den,R_num,R_den,L,operational\n");
    for p in points {
        let t = p.t.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            p.scheme.name(),
            t,
            p.m.numer(),
            p.m.denom(),
            p.r.numer(),
            p.r.denom(),
            p.subpacketization.csv_field(),
            p.operational
        ));
    }
    out
}

pub fn envelope_to_csv(id: SchemeId, curve: &Curve) -> String {
    let mut out = String::new();
    for (m, r) in &curve.corners {
        out.push_str(&format!(
            "{}-envelope,,{},{},{},{},,\n",
            id.name(),
            m.numer(),
            m.denom(),
            r.numer(),
            r.denom()
        ));
    }
    out
}

pub fn point_to_json(p: &TradeoffPoint) -> serde_json::Value {
    let l = match &p.subpacketization {
        Subpacketization::Exact(v) => json!({ "exact": v.to_string() }),
        Subpacketization::Log10(v) => json!({ "log10": v }),
    };
    json!({
        "scheme": p.scheme.name(),
        "t": p.t,
        "M": { "num": p.m.numer().to_string(), "den": p.m.denom().to_string() },
        "R": { "num": p.r.numer().to_string(), "den": p.r.denom().to_string() },
        "L": l,
        "operational": p.operational,
        "exact": p.exact,
    })
}

pub fn rational_to_json(r: &Rat) -> serde_json::Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

/// Remark 2's memory chain for New Scheme 1 at t ≥ 1:
/// M ≥ 1 + (t/K')(C(K−1,t−1)/C(K'−1,t−1))(N−1) ≥ 1 + (t/K')(N−1).
pub fn remark2_chain_holds(k: usize, k_prime: usize, n: usize, t: usize) -> bool {
    let p = new1_tradeoff_point(k, k_prime, n, t);
    if t == 0 {
        return p.m == rat_int(1);
    }
    let (ki, kpi, ni, ti) = (k as i64, k_prime as i64, n as i64, t as i64);
    let ratio = binom_rat(ki - 1, ti - 1) / binom_rat(kpi - 1, ti - 1);
    let mid = rat_int(1) + rat_frac(ti, kpi) * ratio * rat_int(ni - 1);
    let low = rat_int(1) + rat_frac(ti * (ni - 1), kpi);
    p.m >= mid && mid >= low
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pk_corner_examples() {
        let p = pk_tradeoff_point(6, 3, 1);
        assert_eq!(p.m, rat_frac(4, 3));
        assert_eq!(p.r, rat_int(2));
        // (K, N, K) -> (N, 0)
        let end = pk_tradeoff_point(5, 3, 5);
        assert_eq!(end.m, rat_int(3));
        assert_eq!(end.r, Rat::zero());
        // (K, N, 0) -> (1, r)
        let zero = pk_tradeoff_point(5, 3, 0);
        assert_eq!(zero.m, rat_int(1));
        assert_eq!(zero.r, rat_int(3));
    }

    #[test]
    fn worked_example_corners() {
        let p1 = new1_tradeoff_point(6, 3, 3, 1);
        assert_eq!((p1.m, p1.r), (rat_frac(5, 3), rat_int(1)));
        let p2 = new1_tradeoff_point(6, 3, 3, 2);
        assert_eq!((p2.m, p2.r), (rat_int(5), rat_frac(1, 3)));
        let p0 = new1_tradeoff_point(6, 3, 3, 0);
        assert_eq!((p0.m, p0.r), (rat_int(1), rat_int(3)));
        let (c, f) = new2_tradeoff_segment(3, 3);
        assert_eq!((c.m, c.r), (rat_frac(7, 3), rat_frac(1, 3)));
        assert_eq!((f.m, f.r), (rat_int(3), Rat::zero()));
        let b = bl2_tradeoff_point(6, 3, 3, 1);
        assert_eq!((b.m, b.r), (rat_frac(4, 3), rat_int(2)));
    }

    #[test]
    fn new1_collapses_to_bl2_when_all_users_active() {
        for t in 0..=4 {
            let a = new1_tradeoff_point(4, 4, 2, t);
            let b = bl2_tradeoff_point(4, 4, 2, t);
            assert_eq!((a.m, a.r), (b.m, b.r), "t = {t}");
        }
    }

    #[test]
    fn new2_corner_meets_new1_only_for_k_equal_kprime() {
        let (c, _) = new2_tradeoff_segment(4, 3);
        let same = new1_tradeoff_point(4, 4, 3, 3);
        assert_eq!((c.m.clone(), c.r.clone()), (same.m, same.r));
        let hot = new1_tradeoff_point(6, 3, 3, 2);
        let (c63, _) = new2_tradeoff_segment(3, 3);
        assert_ne!((hot.m, hot.r), (c63.m, c63.r));
    }

    #[test]
    fn new2_collapses_in_memory_for_single_file() {
        let (c, f) = new2_tradeoff_segment(4, 1);
        assert_eq!(c.m, rat_int(1));
        assert_eq!(c.r, rat_frac(1, 4));
        assert_eq!(f.m, rat_int(1));
        assert_eq!(f.r, Rat::zero());
    }

    #[test]
    fn envelope_basics() {
        let seg = lower_envelope(&[(rat_int(0), rat_int(3)), (rat_int(3), rat_int(0))]);
        assert_eq!(seg.corners.len(), 2);
        // collinear middle point absorbed
        let tri = lower_envelope(&[
            (rat_int(0), rat_int(2)),
            (rat_int(1), rat_int(1)),
            (rat_int(2), rat_int(0)),
        ]);
        assert_eq!(tri.corners.len(), 2);
        // dominated point ignored
        let dom = lower_envelope(&[
            (rat_int(0), rat_int(2)),
            (rat_int(1), rat_int(2)),
            (rat_int(2), rat_int(0)),
        ]);
        assert_eq!(dom.corners, vec![(rat_int(0), rat_int(2)), (rat_int(2), rat_int(0))]);
        assert!(dom.is_convex_non_increasing());
    }

    #[test]
    fn envelope_flattens_past_the_minimum_load() {
        // a point with M > N and R above the minimum must not resurface
        let c = lower_envelope(&[
            (rat_int(1), rat_int(3)),
            (rat_int(3), Rat::zero()),
            (rat_int(5), rat_frac(1, 3)),
        ]);
        assert_eq!(*c.max_m(), rat_int(5));
        assert_eq!(c.evaluate(&rat_int(4)).unwrap(), Rat::zero());
    }

    #[test]
    fn evaluate_on_curve() {
        let c = lower_envelope(&[(rat_int(0), rat_int(3)), (rat_int(3), rat_int(0))]);
        assert_eq!(c.evaluate(&rat_int(0)).unwrap(), rat_int(3));
        assert_eq!(c.evaluate(&rat_frac(3, 2)).unwrap(), rat_frac(3, 2));
        assert_eq!(c.evaluate(&rat_int(3)).unwrap(), Rat::zero());
        assert!(matches!(c.evaluate(&rat_int(4)), Err(Error::OutOfRange)));
    }

    #[test]
    fn combined_new_envelope_for_worked_example() {
        // corners (0,3), (1,3) collapses, (5/3,1), (7/3,1/3), (3,0)
        let c = combined_new_envelope(6, 3, 3);
        assert!(c.is_convex_non_increasing());
        assert!(c.corners.contains(&(rat_frac(5, 3), rat_int(1))));
        assert!(c.corners.contains(&(rat_frac(7, 3), rat_frac(1, 3))));
        assert!(c.corners.contains(&(rat_int(3), Rat::zero())));
        assert_eq!(c.evaluate(&rat_int(0)).unwrap(), rat_int(3));
        // the dominated (5, 1/3) corner of new1 t=2 must not lift the tail
        assert_eq!(c.evaluate(&rat_int(3)).unwrap(), Rat::zero());
    }

    #[test]
    fn foresight_matches_new_envelope_at_both_ends_for_6_3_3() {
        let new = combined_new_envelope(6, 3, 3);
        let fs = scheme_envelope(SchemeId::Foresight, 6, 3, 3, 2).unwrap();
        let lo_end = rat_int(1) + rat_frac(2, 3);
        assert!(curves_equal_on(&new, &fs, &Rat::zero(), &lo_end).unwrap());
        let hi_start = rat_int(3) - rat_frac(2, 3);
        assert!(curves_equal_on(&new, &fs, &hi_start, &rat_int(3)).unwrap());
    }

    #[test]
    fn a_baseline_beats_the_new_schemes_somewhere_on_6_3_3() {
        // Baseline 1 (virtual users) wins in the small-memory regime here.
        let new = combined_new_envelope(6, 3, 3);
        let bl1 = scheme_envelope(SchemeId::Bl1, 6, 3, 3, 2).unwrap();
        let grid = memory_grid(3, 48);
        let mut bl1_wins = false;
        for m in &grid {
            if bl1.evaluate(m).unwrap() < new.evaluate(m).unwrap() {
                bl1_wins = true;
                break;
            }
        }
        assert!(bl1_wins, "expected Baseline 1 to beat the new envelope somewhere");
    }

    #[test]
    fn remark2_chain_small_sweep() {
        for k in 1..=8 {
            for kp in 1..=k {
                for t in 0..=kp {
                    for n in 1..=4 {
                        assert!(remark2_chain_holds(k, kp, n, t), "k={k} kp={kp} n={n} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn subpacketization_rows() {
        let rows = subpacketization_table(30, 25, 20, 2, 8);
        for r in &rows {
            if let Some(n1) = &r.new1 {
                assert!(n1 <= &r.pk, "C(K',t) <= C(K,t) at t={}", r.t);
            }
            assert_eq!(r.new2, BigUint::from(25u32));
        }
        // BL1 log-scale value for (6,3,3,q=2,t=1): log10 C(42,1)
        let rows6 = subpacketization_table(6, 3, 3, 2, 2);
        assert!((rows6[1].bl1_log10 - 42f64.log10()).abs() < 1e-9);
    }

    #[test]
    fn csv_schema() {
        let pts = vec![new1_tradeoff_point(6, 3, 3, 1)];
        let csv = points_to_csv(&pts);
        assert!(csv.starts_with("scheme,t,M_num,M_den,R_num,R_den,L,operational\n"));
        assert!(csv.contains("new1,1,5,3,1,1,3,true"));
    }

    #[test]
    fn compare_regimes_all_tie_at_zero_memory() {
        let curves = vec![
            (SchemeId::Bl2, scheme_envelope(SchemeId::Bl2, 6, 3, 3, 2).unwrap()),
            (SchemeId::New1, combined_new_envelope(6, 3, 3)),
            (SchemeId::Uncoded, scheme_envelope(SchemeId::Uncoded, 6, 3, 3, 2).unwrap()),
        ];
        let rows = compare_regimes(&curves, &[Rat::zero()]).unwrap();
        for (_, load) in &rows[0].loads {
            assert_eq!(*load, rat_int(3));
        }
    }
}
