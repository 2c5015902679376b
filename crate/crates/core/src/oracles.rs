//! Independent ground-truth verifiers.
//!
//! The correctness oracle runs place/deliver/decode and compares every active
//! user's output against the directly evaluated demanded function. The
//! privacy oracle enumerates all demand and key realizations exhaustively,
//! builds the exact joint distribution of (d_{I\B}, view) with integer
//! counts, and checks factorization — mutual information is zero iff the
//! joint factorizes, so no logarithms are needed and the verdict is exact.
//!
//! The colluders' view is (X, d_B, Z_B) with X = multicast symbols plus the
//! broadcast masked demands and the sent-pattern, and Z_B's variable parts:
//! privacy-key symbols and the key vectors p_B themselves (colluders know
//! their own randomness). MAN content is a fixed function of the library the
//! oracle conditions on, so it adds nothing to the view.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;

use crate::combin::enumerate_subsets;
use crate::combin::ground_set;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::library::{demanded_function, unit_vector, Library};
use crate::scheme::{prune_messages, Scheme, SchemeConfig, SchemeId};
use crate::tradeoff::Rat;

/// Cap on exhaustive enumeration; the CLI overrides it via HOTPLUG_BUDGET.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EnumerationBudget {
    pub max_tuples: u128,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_tuples: 10_000_000 }
    }
}

/// Per-user outcome of the correctness oracle; failures carry the first
/// mismatching subfile slot.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UserCheck {
    pub user: usize,
    pub ok: bool,
    pub mismatch_slot: Option<usize>,
}

/// Places, delivers, decodes, and compares against the demanded function.
/// Failures are data, not errors.
pub fn correctness_oracle(
    scheme: &dyn Scheme,
    cfg: &SchemeConfig,
    lib: &Library,
    active: &[usize],
    demands: &[Vec<u64>],
    seed: u64,
) -> Result<Vec<UserCheck>> {
    let caches = scheme.place(cfg, lib, seed)?;
    let payload = scheme.deliver(cfg, lib, &caches, active, demands)?;
    let mut out = Vec::with_capacity(active.len());
    for (i, &u) in active.iter().enumerate() {
        let want = demanded_function(&demands[i], lib)?;
        match scheme.decode(cfg, &caches[u - 1], &payload, &demands[i]) {
            Ok(got) => {
                let slot = got.iter().zip(&want).position(|(a, b)| a != b);
                out.push(UserCheck { user: u, ok: slot.is_none(), mismatch_slot: slot });
            }
            Err(Error::Undecodable { slot }) => {
                out.push(UserCheck { user: u, ok: false, mismatch_slot: Some(slot) });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// A pair of probabilities that should coincide under independence but do
/// not; probabilities are exact counts over the enumerated tuples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrivacyWitness {
    pub joint_count: u128,
    pub demand_count: u128,
    pub view_count: u128,
    pub total: u128,
}

/// Exact verdict of the privacy condition for one (I, B) pair.
#[derive(Clone, PartialEq, Debug)]
pub struct PrivacyReport {
    pub scheme: SchemeId,
    pub cfg: SchemeConfig,
    pub active: Vec<usize>,
    pub collusion: Vec<usize>,
    pub tuples: u128,
    /// True iff the joint distribution of (d_{I\B}, view) factorizes, i.e.
    /// the conditional mutual information is exactly zero.
    pub independent: bool,
    /// Exact total-variation distance between joint and product.
    pub tv_distance: Rat,
    pub witness: Option<PrivacyWitness>,
}

impl PrivacyReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "scheme": self.scheme.name(),
            "config": {
                "K": self.cfg.k, "Kp": self.cfg.k_prime, "N": self.cfg.n,
                "q": self.cfg.q, "t": self.cfg.t,
            },
            "active": self.active,
            "collusion": self.collusion,
            "tuples": self.tuples.to_string(),
            "independent": self.independent,
            "tv_distance": {
                "num": self.tv_distance.numer().to_string(),
                "den": self.tv_distance.denom().to_string(),
            },
            "witness": self.witness.as_ref().map(|w| json!({
                "joint_count": w.joint_count.to_string(),
                "demand_count": w.demand_count.to_string(),
                "view_count": w.view_count.to_string(),
                "total": w.total.to_string(),
            })),
        })
    }
}

/// How the oracle conditions on the library realization.
pub enum LibraryConditioning<'a> {
    /// Verify independence for this fixed realization; X and Z_B are
    /// deterministic given (F, d, p), so per-realization independence for
    /// the realizations of interest is the privacy statement.
    Fixed(&'a Library),
    /// Exact averaging: enumerate every library realization too and require
    /// independence in each slice (the conditional MI is the weighted sum).
    AverageAll { n: usize, l: usize },
}

/// Exhaustively enumerates (d_I, p_I) — and the library too in averaging
/// mode — and reports whether d_{I\B} is independent of the colluders' view.
/// `keyless` zeroes every key vector, the broken-scheme control that must
/// come back dependent.
pub fn privacy_oracle(
    scheme: &dyn Scheme,
    cfg: &SchemeConfig,
    conditioning: LibraryConditioning<'_>,
    active: &[usize],
    collusion: &[usize],
    budget: EnumerationBudget,
    keyless: bool,
) -> Result<PrivacyReport> {
    scheme.validate(cfg)?;
    crate::scheme::validate_active(cfg, active)?;
    if collusion.is_empty() || collusion.iter().any(|u| !active.contains(u)) {
        return Err(Error::ConfigMismatch("collusion set must be a nonempty subset of I".into()));
    }
    match conditioning {
        LibraryConditioning::Fixed(lib) => {
            privacy_fixed(scheme, cfg, lib, active, collusion, budget, keyless)
        }
        LibraryConditioning::AverageAll { n, l } => {
            let field = cfg.field()?;
            let lib_space = (cfg.q as u128)
                .checked_pow((n * l) as u32)
                .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: budget.max_tuples })?;
            let per_slice = tuple_count(cfg, keyless)?;
            let needed = lib_space
                .checked_mul(per_slice)
                .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: budget.max_tuples })?;
            if needed > budget.max_tuples {
                return Err(Error::BudgetExceeded { needed, budget: budget.max_tuples });
            }
            let mut combined: Option<PrivacyReport> = None;
            for code in 0..lib_space {
                let mut rest = code;
                let mut rows = vec![vec![0u64; l]; n];
                for row in rows.iter_mut() {
                    for v in row.iter_mut() {
                        *v = (rest % cfg.q as u128) as u64;
                        rest /= cfg.q as u128;
                    }
                }
                let lib = Library::from_rows(field, rows)?;
                let slice =
                    privacy_fixed(scheme, cfg, &lib, active, collusion, budget, keyless)?;
                combined = Some(match combined {
                    None => slice,
                    Some(mut acc) => {
                        acc.tuples += slice.tuples;
                        acc.independent &= slice.independent;
                        acc.tv_distance += slice.tv_distance;
                        if acc.witness.is_none() {
                            acc.witness = slice.witness;
                        }
                        acc
                    }
                });
            }
            let mut report = combined.expect("at least one library realization");
            // average the summed slice distances into the conditional TV
            report.tv_distance /= BigRational::from_integer(BigInt::from(lib_space));
            Ok(report)
        }
    }
}

fn tuple_count(cfg: &SchemeConfig, keyless: bool) -> Result<u128> {
    let per_matrix = (cfg.q as u128)
        .checked_pow((cfg.n * cfg.k_prime) as u32)
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: 0 })?;
    if keyless {
        Ok(per_matrix)
    } else {
        per_matrix
            .checked_mul(per_matrix)
            .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: 0 })
    }
}

fn privacy_fixed(
    scheme: &dyn Scheme,
    cfg: &SchemeConfig,
    lib: &Library,
    active: &[usize],
    collusion: &[usize],
    budget: EnumerationBudget,
    keyless: bool,
) -> Result<PrivacyReport> {
    let field = cfg.field()?;
    let q = cfg.q as u128;
    let n = cfg.n;
    let kp = cfg.k_prime;
    let needed = tuple_count(cfg, keyless)?;
    if needed > budget.max_tuples {
        return Err(Error::BudgetExceeded { needed, budget: budget.max_tuples });
    }

    let structure = scheme.delivery_structure(cfg, active)?;
    if structure.messages.len() > 64 {
        return Err(Error::BudgetExceeded { needed: u128::MAX, budget: budget.max_tuples });
    }
    // F·b per message term: the symbol contribution of user j is <q_j, u>
    let term_vectors: Vec<Vec<(usize, Vec<u64>)>> = structure
        .messages
        .iter()
        .map(|msg| {
            msg.terms
                .iter()
                .map(|(user, b)| {
                    let u = (0..n)
                        .map(|i| field.dot(&lib.symbols().row(i), b))
                        .collect::<Vec<u64>>();
                    (*user, u)
                })
                .collect()
        })
        .collect();

    // key-record symbols are linear in p: probe placements with unit keys
    let mut key_probe: Vec<Vec<Vec<u64>>> = Vec::with_capacity(n);
    for i in 0..n {
        let keys: Vec<Vec<u64>> = (0..cfg.k).map(|_| unit_vector(n, i)).collect();
        let caches = scheme.place_with_keys(cfg, lib, &keys)?;
        key_probe.push(
            collusion
                .iter()
                .map(|&u| caches[u - 1].keys.iter().map(|r| r.symbol).collect())
                .collect(),
        );
    }
    let key_counts: Vec<usize> = key_probe[0].iter().map(Vec::len).collect();

    let free: Vec<usize> = active.iter().copied().filter(|u| !collusion.contains(u)).collect();
    let active_pos: HashMap<usize, usize> =
        active.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let d_space: usize = (q.pow((n * free.len()) as u32)) as usize;

    // joint[view] = counts per d_{I\B} value
    let mut joint: HashMap<Vec<u64>, Vec<u64>> = HashMap::new();
    let mut d_marginal = vec![0u64; d_space];

    let per_matrix = q.pow((n * kp) as u32);
    let p_range = if keyless { 1 } else { per_matrix };
    let mut d_rows = vec![vec![0u64; n]; kp];
    let mut p_rows = vec![vec![0u64; n]; kp];
    let mut cross_checked = false;
    for d_code in 0..per_matrix {
        decode_rows(d_code, q as u64, &mut d_rows);
        let dkey = {
            let mut acc: usize = 0;
            for &u in free.iter().rev() {
                let row = &d_rows[active_pos[&u]];
                for &v in row.iter().rev() {
                    acc = acc * q as usize + v as usize;
                }
            }
            acc
        };
        for p_code in 0..p_range {
            decode_rows(p_code, q as u64, &mut p_rows);
            let masked = scheme.masked_demands(cfg, active, &d_rows, &p_rows)?;
            let sent = prune_messages(&field, &structure, &masked)?;
            let mut view: Vec<u64> = Vec::with_capacity(
                structure.messages.len() + masked.len() * n + collusion.len() * (2 * n + 2),
            );
            // sent-pattern and symbols in one: 0 = unsent, else symbol + 1
            let mut slots = vec![0u64; structure.messages.len()];
            for &idx in &sent {
                let mut sym = 0u64;
                for (user, u) in &term_vectors[idx] {
                    let qrow = masked
                        .iter()
                        .find(|m| m.user == *user)
                        .expect("masked row exists for every term user");
                    sym = field.add(&sym, &field.dot(&qrow.q, u));
                }
                slots[idx] = sym + 1;
            }
            view.extend_from_slice(&slots);
            for m in &masked {
                view.extend_from_slice(&m.q);
            }
            for (ci, &u) in collusion.iter().enumerate() {
                let pos = active_pos[&u];
                view.extend_from_slice(&d_rows[pos]);
                view.extend_from_slice(&p_rows[pos]);
                for rec in 0..key_counts[ci] {
                    let mut sym = 0u64;
                    for (i, probe) in key_probe.iter().enumerate() {
                        sym = field.add(&sym, &field.mul(&p_rows[pos][i], &probe[ci][rec]));
                    }
                    view.push(sym);
                }
            }
            if !cross_checked {
                cross_check_view(scheme, cfg, lib, active, &d_rows, &p_rows, &slots)?;
                cross_checked = true;
            }
            joint.entry(view).or_insert_with(|| vec![0u64; d_space])[dkey] += 1;
            d_marginal[dkey] += 1;
        }
    }

    let total: u128 = needed;
    let mut independent = true;
    let mut tv_num = num_bigint::BigUint::zero();
    for counts in joint.values() {
        let view_count: u128 = counts.iter().map(|&c| c as u128).sum();
        for (dk, &c) in counts.iter().enumerate() {
            let lhs = c as u128 * total;
            let rhs = d_marginal[dk] as u128 * view_count;
            if lhs != rhs {
                independent = false;
            }
            tv_num += num_bigint::BigUint::from(lhs.abs_diff(rhs));
        }
    }
    // witness picked by smallest view key so reports are byte-identical
    // across runs despite hash-map iteration order
    let mut witness = None;
    if !independent {
        let mut views: Vec<(&Vec<u64>, &Vec<u64>)> = joint.iter().collect();
        views.sort_by(|a, b| a.0.cmp(b.0));
        'outer: for (_, counts) in views {
            let view_count: u128 = counts.iter().map(|&c| c as u128).sum();
            for (dk, &c) in counts.iter().enumerate() {
                let lhs = c as u128 * total;
                let rhs = d_marginal[dk] as u128 * view_count;
                if lhs != rhs {
                    witness = Some(PrivacyWitness {
                        joint_count: c as u128,
                        demand_count: d_marginal[dk] as u128,
                        view_count,
                        total,
                    });
                    break 'outer;
                }
            }
        }
    }
    let tv_distance = Rat::new(
        BigInt::from(tv_num),
        BigInt::from(2u8) * BigInt::from(total) * BigInt::from(total),
    );
    Ok(PrivacyReport {
        scheme: scheme.id(),
        cfg: *cfg,
        active: active.to_vec(),
        collusion: collusion.to_vec(),
        tuples: total,
        independent,
        tv_distance,
        witness,
    })
}

/// Little-endian base-q digits into row-major (user, coordinate) order.
fn decode_rows(code: u128, q: u64, rows: &mut [Vec<u64>]) {
    let mut rest = code;
    for row in rows.iter_mut() {
        for v in row.iter_mut() {
            *v = (rest % q as u128) as u64;
            rest /= q as u128;
        }
    }
}

/// One-shot fidelity check: the fast enumeration path must produce exactly
/// the symbols the real place/deliver pipeline produces.
fn cross_check_view(
    scheme: &dyn Scheme,
    cfg: &SchemeConfig,
    lib: &Library,
    active: &[usize],
    d_rows: &[Vec<u64>],
    p_rows: &[Vec<u64>],
    slots: &[u64],
) -> Result<()> {
    let mut keys = vec![vec![0u64; cfg.n]; cfg.k];
    for (i, &u) in active.iter().enumerate() {
        keys[u - 1] = p_rows[i].clone();
    }
    let caches = scheme.place_with_keys(cfg, lib, &keys)?;
    let payload = scheme.deliver(cfg, lib, &caches, active, d_rows)?;
    let structure = scheme.delivery_structure(cfg, active)?;
    let mut expected = vec![0u64; structure.messages.len()];
    for mc in &payload.multicasts {
        let idx = structure
            .messages
            .iter()
            .position(|m| m.subset == mc.subset)
            .expect("payload subset in structure");
        expected[idx] = mc.symbol + 1;
    }
    if expected != slots {
        return Err(Error::ConfigMismatch(
            "privacy oracle fast path disagrees with deliver()".into(),
        ));
    }
    Ok(())
}

/// Measured worst-case load: the maximum over active sets and demand
/// matrices of (multicast symbols)/L. Demands are enumerated exhaustively
/// within budget; above it, the maximum is taken over rank-stratified masked
/// targets, which reach every achievable leader rank.
pub fn worst_case_load_measured(
    scheme: &dyn Scheme,
    cfg: &SchemeConfig,
    lib: &Library,
    seed: u64,
    budget: EnumerationBudget,
) -> Result<Rat> {
    let field = cfg.field()?;
    let l = scheme.subpacketization(cfg)?;
    let caches = scheme.place(cfg, lib, seed)?;
    let exhaustive_cost = (cfg.q as u128).checked_pow((cfg.n * cfg.k_prime) as u32);
    let mut worst: Option<Rat> = None;
    for active in enumerate_subsets(&ground_set(cfg.k), cfg.k_prime)? {
        let counts: Vec<usize> = match exhaustive_cost {
            Some(cost) if cost <= budget.max_tuples => {
                let mut out = Vec::new();
                let mut d_rows = vec![vec![0u64; cfg.n]; cfg.k_prime];
                for code in 0..cost {
                    decode_rows(code, cfg.q, &mut d_rows);
                    let payload = scheme.deliver(cfg, lib, &caches, &active, &d_rows)?;
                    out.push(payload.multicast_count());
                }
                out
            }
            _ => {
                let mut out = Vec::new();
                for rank in 0..=cfg.k_prime.min(cfg.n) {
                    let demands: Vec<Vec<u64>> = active
                        .iter()
                        .enumerate()
                        .map(|(i, &u)| {
                            let target = if i < rank {
                                unit_vector(cfg.n, i)
                            } else if rank > 0 {
                                unit_vector(cfg.n, 0)
                            } else {
                                vec![0u64; cfg.n]
                            };
                            field.sub_vec(&target, &caches[u - 1].p)
                        })
                        .collect();
                    let payload = scheme.deliver(cfg, lib, &caches, &active, &demands)?;
                    out.push(payload.multicast_count());
                }
                out
            }
        };
        for c in counts {
            let load = Rat::new(BigInt::from(c), BigInt::from(l));
            if worst.as_ref().map_or(true, |w| load > *w) {
                worst = Some(load);
            }
        }
    }
    Ok(worst.expect("at least one active set"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{Bl2Scheme, NewScheme1, NewScheme2, PkScheme};

    fn lib_for(scheme: &dyn Scheme, cfg: &SchemeConfig, seed: u64) -> Library {
        let field = cfg.field().unwrap();
        let l = scheme.subpacketization(cfg).unwrap();
        let mut rng = crate::rng::seeded_rng(seed, crate::rng::STREAM_LIBRARY);
        Library::random(field, cfg.n, l, &mut rng)
    }

    #[test]
    fn correctness_oracle_passes_and_detects_sabotage() {
        let cfg = SchemeConfig { k: 3, k_prime: 3, n: 2, q: 2, t: 1 };
        let lib = lib_for(&PkScheme, &cfg, 1);
        let active = ground_set(3);
        let demands = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let checks =
            correctness_oracle(&PkScheme, &cfg, &lib, &active, &demands, 7).unwrap();
        assert!(checks.iter().all(|c| c.ok));

        // sabotage: drop one multicast symbol
        let caches = PkScheme.place(&cfg, &lib, 7).unwrap();
        let mut payload = PkScheme.deliver(&cfg, &lib, &caches, &active, &demands).unwrap();
        assert!(!payload.multicasts.is_empty());
        payload.multicasts.remove(0);
        let mut failed = false;
        for (i, &u) in active.iter().enumerate() {
            match PkScheme.decode(&cfg, &caches[u - 1], &payload, &demands[i]) {
                Err(Error::Undecodable { .. }) => failed = true,
                Ok(got) => {
                    if got != demanded_function(&demands[i], &lib).unwrap() {
                        failed = true;
                    }
                }
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(failed, "dropping a multicast must break someone");
    }

    #[test]
    fn privacy_zero_for_pk_tiny_and_positive_for_keyless() {
        let cfg = SchemeConfig { k: 2, k_prime: 2, n: 2, q: 2, t: 1 };
        let lib = lib_for(&PkScheme, &cfg, 2);
        let active = vec![1, 2];
        let report = privacy_oracle(
            &PkScheme,
            &cfg,
            LibraryConditioning::Fixed(&lib),
            &active,
            &[1],
            EnumerationBudget::default(),
            false,
        )
        .unwrap();
        assert!(report.independent, "PK must be private: {report:?}");
        assert!(report.tv_distance.is_zero());

        let broken = privacy_oracle(
            &PkScheme,
            &cfg,
            LibraryConditioning::Fixed(&lib),
            &active,
            &[1],
            EnumerationBudget::default(),
            true,
        )
        .unwrap();
        assert!(!broken.independent, "keyless mutant must leak");
        assert!(broken.witness.is_some());
        assert!(broken.tv_distance > Rat::zero());
    }

    #[test]
    fn privacy_degenerate_full_collusion_is_trivially_zero() {
        let cfg = SchemeConfig { k: 2, k_prime: 2, n: 2, q: 2, t: 1 };
        let lib = lib_for(&PkScheme, &cfg, 3);
        let report = privacy_oracle(
            &PkScheme,
            &cfg,
            LibraryConditioning::Fixed(&lib),
            &[1, 2],
            &[1, 2],
            EnumerationBudget::default(),
            false,
        )
        .unwrap();
        assert!(report.independent);
    }

    #[test]
    fn privacy_budget_guard() {
        let cfg = SchemeConfig { k: 6, k_prime: 3, n: 3, q: 101, t: 1 };
        let lib = lib_for(&NewScheme1, &cfg, 4);
        let err = privacy_oracle(
            &NewScheme1,
            &cfg,
            LibraryConditioning::Fixed(&lib),
            &[1, 2, 3],
            &[1],
            EnumerationBudget { max_tuples: 1000 },
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn privacy_mi_symmetric_under_user_relabeling() {
        // bl2 on K=3, K'=2: active {1,2} with B={1} vs active {2,3} with
        // B={2} are the same instance under the relabeling 1->2, 2->3.
        let cfg = SchemeConfig { k: 3, k_prime: 2, n: 2, q: 2, t: 1 };
        let lib = Library::from_rows(cfg.field().unwrap(), vec![vec![1, 0, 1], vec![0, 1, 1]])
            .unwrap();
        let a = privacy_oracle(
            &Bl2Scheme,
            &cfg,
            LibraryConditioning::Fixed(&lib),
            &[1, 2],
            &[1],
            EnumerationBudget::default(),
            false,
        )
        .unwrap();
        let b = privacy_oracle(
            &Bl2Scheme,
            &cfg,
            LibraryConditioning::Fixed(&lib),
            &[2, 3],
            &[2],
            EnumerationBudget::default(),
            false,
        )
        .unwrap();
        assert_eq!(a.independent, b.independent);
        assert_eq!(a.tv_distance, b.tv_distance);
    }

    #[test]
    fn privacy_averaged_over_all_libraries_tiny() {
        let cfg = SchemeConfig { k: 2, k_prime: 2, n: 2, q: 2, t: 1 };
        let report = privacy_oracle(
            &PkScheme,
            &cfg,
            LibraryConditioning::AverageAll { n: 2, l: 2 },
            &[1, 2],
            &[2],
            EnumerationBudget::default(),
            false,
        )
        .unwrap();
        assert!(report.independent);
        assert!(report.tv_distance.is_zero());
    }

    #[test]
    fn measured_worst_case_loads_match_formulas() {
        // new1 (6,3,3,t=1): R = 1
        let cfg1 = SchemeConfig { k: 6, k_prime: 3, n: 3, q: 7, t: 1 };
        let lib1 = lib_for(&NewScheme1, &cfg1, 5);
        let w1 = worst_case_load_measured(
            &NewScheme1,
            &cfg1,
            &lib1,
            11,
            EnumerationBudget { max_tuples: 1000 },
        )
        .unwrap();
        assert_eq!(w1, Rat::new(BigInt::from(1), BigInt::from(1)));

        // new2 (5,2,2): R = 1/2 for every instance
        let cfg2 = SchemeConfig { k: 5, k_prime: 2, n: 2, q: 17, t: 1 };
        let lib2 = lib_for(&NewScheme2, &cfg2, 6);
        let w2 = worst_case_load_measured(
            &NewScheme2,
            &cfg2,
            &lib2,
            12,
            EnumerationBudget::default(),
        )
        .unwrap();
        assert_eq!(w2, Rat::new(BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn bl2_rank_deficient_demands_stay_below_worst_case() {
        let cfg = SchemeConfig { k: 4, k_prime: 2, n: 3, q: 5, t: 1 };
        let lib = lib_for(&Bl2Scheme, &cfg, 7);
        let caches = Bl2Scheme.place(&cfg, &lib, 13).unwrap();
        let field = cfg.field().unwrap();
        let active = vec![1, 3];
        // rank-1 masked target
        let q_target = vec![unit_vector(3, 0), unit_vector(3, 0)];
        let demands: Vec<Vec<u64>> = active
            .iter()
            .enumerate()
            .map(|(i, &u)| field.sub_vec(&q_target[i], &caches[u - 1].p))
            .collect();
        let payload = Bl2Scheme.deliver(&cfg, &lib, &caches, &active, &demands).unwrap();
        let worst = worst_case_load_measured(
            &Bl2Scheme,
            &cfg,
            &lib,
            13,
            EnumerationBudget { max_tuples: 1 },
        )
        .unwrap();
        let l = Bl2Scheme.subpacketization(&cfg).unwrap();
        let rank1_load = Rat::new(BigInt::from(payload.multicast_count()), BigInt::from(l));
        assert!(rank1_load < worst);
    }
}
