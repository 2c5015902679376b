//! Baseline schemes for the hotplug model.
//!
//! Baseline 2 runs the PK scheme over all K users, assigning offline users a
//! fictitious demand. Baseline 1 (virtual users) is analytic-only: the
//! operational construction lives in an external reference and its
//! subpacketization C(KÑ, t) is unaffordable, so only its (M, R) expression
//! is evaluated here.
//!
//! Fictitious demands: the server picks, for each offline user j, the demand
//! that makes the broadcast masked row a copy of the first active user's row
//! (it knows p_j, so any masked row is reachable). Copies keep the masked
//! matrix rank equal to that of the active rows, which is what Theorem 2's
//! r' = min(K', N) message count requires; an all-zero fictitious demand
//! would leave q_j = p_j uniform and inflate the rank to min(K, N).

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::combin::{binom_big, binom_usize, ground_set, log10_binom_big};
use crate::error::{Error, Result};
use crate::library::Library;
use crate::tradeoff::{Subpacketization, TradeoffPoint};

use super::pk::{man_delivery_structure, man_placement_all_users};
use super::{
    CacheContent, DeliveryStructure, MaskedDemand, Scheme, SchemeConfig, SchemeId,
};

/// Baseline 2: PK placement over all K users, delivery over Ω^{t+1}_{[K]}
/// with fictitious masked rows for offline users.
pub struct Bl2Scheme;

impl Scheme for Bl2Scheme {
    fn id(&self) -> SchemeId {
        SchemeId::Bl2
    }

    fn validate(&self, cfg: &SchemeConfig) -> Result<()> {
        cfg.validate_basic()?;
        if cfg.t > cfg.k {
            return Err(Error::BadT { t: cfg.t, min: 0, max: cfg.k });
        }
        Ok(())
    }

    fn subpacketization(&self, cfg: &SchemeConfig) -> Result<usize> {
        self.validate(cfg)?;
        Ok(binom_usize(cfg.k, cfg.t))
    }

    fn place_with_keys(
        &self,
        cfg: &SchemeConfig,
        lib: &Library,
        keys: &[Vec<u64>],
    ) -> Result<Vec<CacheContent>> {
        self.validate(cfg)?;
        man_placement_all_users(cfg, lib, keys)
    }

    fn masked_demands(
        &self,
        cfg: &SchemeConfig,
        active: &[usize],
        demands: &[Vec<u64>],
        p_active: &[Vec<u64>],
    ) -> Result<Vec<MaskedDemand>> {
        let field = cfg.field()?;
        let mut active_rows = Vec::with_capacity(active.len());
        for ((&user, d), p) in active.iter().zip(demands).zip(p_active) {
            active_rows.push(MaskedDemand { user, q: field.add_vec(p, d) });
        }
        let fictitious = active_rows[0].q.clone();
        let mut all = Vec::with_capacity(cfg.k);
        for user in 1..=cfg.k {
            match active_rows.iter().find(|m| m.user == user) {
                Some(m) => all.push(m.clone()),
                None => all.push(MaskedDemand { user, q: fictitious.clone() }),
            }
        }
        Ok(all)
    }

    fn delivery_structure(&self, cfg: &SchemeConfig, active: &[usize]) -> Result<DeliveryStructure> {
        self.validate(cfg)?;
        let field = cfg.field()?;
        let _ = active;
        let all = ground_set(cfg.k);
        man_delivery_structure(&field, cfg.k, cfg.t, &all, all.clone())
    }
}

/// Parameters of the virtual-users extension: Ñ = (q^N − 1)/(q − 1) distinct
/// non-zero demand directions, t ranging over [0, K·Ñ].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VirtualUserParams {
    pub ntilde: BigUint,
    pub t_max: BigUint,
}

impl VirtualUserParams {
    pub fn new(k: usize, n: usize, q: u64) -> Self {
        let qn = BigUint::from(q).pow(n as u32);
        let ntilde = (qn - 1u32) / BigUint::from(q - 1);
        let t_max = &ntilde * BigUint::from(k);
        VirtualUserParams { ntilde, t_max }
    }
}

/// How to evaluate Baseline 1 points whose binomials outgrow exact
/// arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OverflowPolicy {
    /// Exact rationals, refusing once the estimated digit count exceeds the
    /// budget.
    Exact { max_digits: u64 },
    /// Floating log-space evaluation of the load (memory stays exact).
    LogSpace,
}

impl Default for OverflowPolicy {
    fn default() -> Self {
        OverflowPolicy::Exact { max_digits: 20_000 }
    }
}

/// (M, R) of Baseline 1 at parameter t:
/// M = tN/(ÑK), R = (C(KÑ, t+1) − C(KÑ−Ñ, t+1)) / C(KÑ, t).
pub fn bl1_tradeoff_point(
    k: usize,
    n: usize,
    q: u64,
    t: u64,
    policy: OverflowPolicy,
) -> Result<TradeoffPoint> {
    let params = VirtualUserParams::new(k, n, q);
    let a = &params.ntilde * BigUint::from(k); // KÑ
    if BigUint::from(t) > params.t_max {
        return Err(Error::BadT { t: t as usize, min: 0, max: usize::MAX });
    }
    let m = BigRational::new(
        (BigUint::from(t) * BigUint::from(n)).into(),
        (&a).clone().into(),
    );
    let b = &a - &params.ntilde; // KÑ − Ñ
    let log10_subpack = log10_binom_big(&a, t);

    let digits_needed = ((t + 1) as f64 * (a.to_f64().unwrap_or(f64::MAX).log10().max(1.0))) as u64;
    let (r, exact) = match policy {
        OverflowPolicy::Exact { max_digits } => {
            if digits_needed > max_digits {
                return Err(Error::DigitBudget { estimated: digits_needed, budget: max_digits });
            }
            let num = binom_big(&a, t + 1);
            let sub = binom_big(&b, t + 1);
            debug_assert!(num >= sub);
            let den = binom_big(&a, t);
            (BigRational::new((num - sub).into(), den.into()), true)
        }
        OverflowPolicy::LogSpace => {
            let la1 = log10_binom_big(&a, t + 1);
            let lb1 = log10_binom_big(&b, t + 1);
            let la0 = log10_binom_big(&a, t);
            let ratio = 10f64.powf(la1 - la0);
            let correction = if lb1 == f64::NEG_INFINITY {
                1.0
            } else {
                1.0 - 10f64.powf(lb1 - la1)
            };
            let approx = ratio * correction;
            let r = BigRational::from_float(approx)
                .unwrap_or_else(BigRational::zero);
            (r, false)
        }
    };
    Ok(TradeoffPoint {
        scheme: SchemeId::Bl1,
        t: Some(t as i64),
        m,
        r,
        subpacketization: Subpacketization::Log10(log10_subpack),
        operational: false,
        exact,
    })
}

/// Largest t for which the default exact policy stays within budget; the
/// full range [0, KÑ] is astronomically long for realistic q^N.
pub fn bl1_exact_t_limit(k: usize, n: usize, q: u64, max_digits: u64) -> u64 {
    let params = VirtualUserParams::new(k, n, q);
    let a = (&params.ntilde * BigUint::from(k)).to_f64().unwrap_or(f64::MAX);
    let per_t = a.log10().max(1.0);
    let by_digits = (max_digits as f64 / per_t) as u64;
    params
        .t_max
        .to_u64()
        .map(|tm| tm.min(by_digits))
        .unwrap_or(by_digits)
}
