//! Subset families Ω_G^t in lexicographic order with ranking/unranking, and
//! exact binomial coefficients with the zero convention C(a,b) = 0 unless
//! a ≥ b ≥ 0.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// C(a, b) as an exact big integer; 0 whenever a ≥ b ≥ 0 fails.
pub fn binom(a: i64, b: i64) -> BigUint {
    if !(a >= b && b >= 0) {
        return BigUint::zero();
    }
    let (a, b) = (a as u64, b as u64);
    let b = b.min(a - b);
    let mut acc = BigUint::from(1u64);
    for i in 0..b {
        acc = acc * BigUint::from(a - i) / BigUint::from(i + 1);
    }
    acc
}

/// C(a, b) as u128 for index arithmetic at desk scale; the same zero
/// convention as [`binom`]. Panics on overflow, which cannot happen for the
/// subset sizes this crate manipulates operationally.
pub fn binom_u128(a: i64, b: i64) -> u128 {
    if !(a >= b && b >= 0) {
        return 0;
    }
    let (a, b) = (a as u128, b as u128);
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc.checked_mul(a - i).expect("binomial overflow") / (i + 1);
    }
    acc
}

pub fn binom_usize(a: usize, b: usize) -> usize {
    usize::try_from(binom_u128(a as i64, b as i64)).expect("binomial exceeds usize")
}

/// C(a, b) for a big upper index (Baseline 1 uses a = KÑ); 0 when a < b.
pub fn binom_big(a: &BigUint, b: u64) -> BigUint {
    if *a < BigUint::from(b) {
        return BigUint::zero();
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..b {
        acc = acc * (a - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

/// log10 C(a, b) in floating point, for report-only subpacketization tables;
/// NEG_INFINITY encodes C(a, b) = 0.
pub fn log10_binom_big(a: &BigUint, b: u64) -> f64 {
    use num_traits::ToPrimitive;
    if *a < BigUint::from(b) {
        return f64::NEG_INFINITY;
    }
    let af = a.to_f64().unwrap_or(f64::MAX);
    let mut acc = 0f64;
    for i in 0..b {
        acc += (af - i as f64).log10() - ((i + 1) as f64).log10();
    }
    acc
}

/// The ground set [k] = {1, …, k}.
pub fn ground_set(k: usize) -> Vec<usize> {
    (1..=k).collect()
}

fn validate_ground(ground: &[usize]) -> Result<()> {
    if ground.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NotASubset);
    }
    Ok(())
}

/// All t-subsets of `ground` in lexicographic order.
pub fn enumerate_subsets(ground: &[usize], t: usize) -> Result<Vec<Vec<usize>>> {
    validate_ground(ground)?;
    if t > ground.len() {
        return Err(Error::SizeTooLarge { t, ground: ground.len() });
    }
    let n = ground.len();
    let count = binom_usize(n, t);
    let mut out = Vec::with_capacity(count);
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        out.push(idx.iter().map(|&i| ground[i]).collect());
        // advance to the next t-combination of [0, n)
        let mut i = t;
        loop {
            if i == 0 {
                debug_assert_eq!(out.len(), count);
                return Ok(out);
            }
            i -= 1;
            if idx[i] != i + n - t {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Like [`enumerate_subsets`] but yields the empty family when t exceeds the
/// ground size, matching the binomial zero convention. Scheme code iterating
/// Ω^{t+1} uses this form.
pub fn subsets_or_empty(ground: &[usize], t: usize) -> Vec<Vec<usize>> {
    if t > ground.len() {
        Vec::new()
    } else {
        enumerate_subsets(ground, t).expect("ground validated by caller")
    }
}

/// 0-based position of `s` in the lexicographic enumeration of its size class.
pub fn rank_subset(ground: &[usize], s: &[usize]) -> Result<usize> {
    validate_ground(ground)?;
    let n = ground.len() as i64;
    let t = s.len() as i64;
    let mut positions = Vec::with_capacity(s.len());
    for (i, x) in s.iter().enumerate() {
        if i > 0 && s[i - 1] >= *x {
            return Err(Error::NotASubset);
        }
        let p = ground.binary_search(x).map_err(|_| Error::NotASubset)?;
        positions.push(p as i64);
    }
    let mut rank: u128 = 0;
    let mut prev = -1i64;
    for (i, &p) in positions.iter().enumerate() {
        for j in prev + 1..p {
            rank += binom_u128(n - 1 - j, t - 1 - i as i64);
        }
        prev = p;
    }
    Ok(usize::try_from(rank).expect("rank exceeds usize"))
}

/// Inverse of [`rank_subset`] for the same ordering.
pub fn unrank_subset(ground: &[usize], t: usize, rank: usize) -> Result<Vec<usize>> {
    validate_ground(ground)?;
    let n = ground.len();
    if t > n {
        return Err(Error::SizeTooLarge { t, ground: n });
    }
    let max = binom_u128(n as i64, t as i64);
    if (rank as u128) >= max {
        return Err(Error::RankOutOfRange {
            rank,
            max: usize::try_from(max.saturating_sub(1)).unwrap_or(usize::MAX),
        });
    }
    let mut remaining = rank as u128;
    let mut out = Vec::with_capacity(t);
    let mut j = 0i64;
    for i in 0..t as i64 {
        loop {
            let block = binom_u128(n as i64 - 1 - j, t as i64 - 1 - i);
            if remaining < block {
                out.push(ground[j as usize]);
                j += 1;
                break;
            }
            remaining -= block;
            j += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values_and_zero_convention() {
        assert_eq!(binom(6, 3), BigUint::from(20u32));
        assert_eq!(binom(3, 5), BigUint::zero());
        assert_eq!(binom(0, 0), BigUint::from(1u32));
        assert_eq!(binom(5, -1), BigUint::zero());
        assert_eq!(binom(-1, -2), BigUint::zero());
        assert_eq!(binom_u128(6, 3), 20);
    }

    #[test]
    fn pascal_identity_up_to_64() {
        for a in 1..=64i64 {
            for b in 0..=a {
                assert_eq!(binom(a, b), binom(a - 1, b - 1) + binom(a - 1, b));
            }
        }
    }

    #[test]
    fn paper_ordering_for_omega_2_of_3() {
        let subs = enumerate_subsets(&[1, 2, 3], 2).unwrap();
        assert_eq!(subs, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(rank_subset(&[1, 2, 3], &[1, 3]).unwrap(), 1);
        assert_eq!(unrank_subset(&[1, 2, 3], 2, 2).unwrap(), vec![2, 3]);
    }

    #[test]
    fn enumeration_edges() {
        assert_eq!(enumerate_subsets(&[1, 2, 3], 0).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(
            enumerate_subsets(&[1, 2, 3, 4], 4).unwrap(),
            vec![vec![1, 2, 3, 4]]
        );
        assert!(matches!(
            enumerate_subsets(&[1, 2], 3),
            Err(Error::SizeTooLarge { .. })
        ));
        assert!(subsets_or_empty(&[1, 2], 3).is_empty());
    }

    #[test]
    fn rank_unrank_bijection_on_6_choose_3() {
        let ground = ground_set(6);
        let subs = enumerate_subsets(&ground, 3).unwrap();
        assert_eq!(subs.len(), 20);
        for (r, s) in subs.iter().enumerate() {
            assert_eq!(rank_subset(&ground, s).unwrap(), r);
            assert_eq!(&unrank_subset(&ground, 3, r).unwrap(), s);
        }
        // strictly increasing lexicographic order
        for w in subs.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn rank_errors() {
        assert!(matches!(
            rank_subset(&[1, 2, 3], &[4]),
            Err(Error::NotASubset)
        ));
        assert!(matches!(
            unrank_subset(&[1, 2, 3], 2, 3),
            Err(Error::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn non_contiguous_ground_set() {
        // delivery enumerates Ω over active sets like {1, 2, 4}
        let subs = enumerate_subsets(&[1, 2, 4], 2).unwrap();
        assert_eq!(subs, vec![vec![1, 2], vec![1, 4], vec![2, 4]]);
        assert_eq!(rank_subset(&[1, 2, 4], &[2, 4]).unwrap(), 2);
    }
}
