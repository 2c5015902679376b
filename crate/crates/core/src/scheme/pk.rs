//! The privacy keys (PK) scheme for the classic model K' = K: uncoded MAN
//! placement plus privacy keys T(p_j, e_W), masked-demand delivery, and
//! leader-based pruning.
//!
//! Pruning note: leaders are selected from the masked demand matrix q, not
//! from the raw demands. The multicasts form an SLFR delivery for the public
//! "demands" q_j, so the dependence structure that makes omitted messages
//! recoverable is governed by the q-rows; each user then strips its cached
//! key T(p_v, e_W) from the recovered T(q_v, e_W). Pruning on the raw demand
//! rank breaks decodability for realizations where a key vector falls into
//! the demand span.

use crate::combin::{binom_usize, ground_set, rank_subset, subsets_or_empty};
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::library::{functional_of, unit_vector, Library};

use super::{
    CacheContent, CacheRecord, DeliveryStructure, MaskedDemand, MessageStructure, PruneRule,
    Scheme, SchemeConfig, SchemeId,
};

pub struct PkScheme;

/// MAN placement over all K users plus privacy keys, shared by the PK scheme
/// and Baseline 2: user j stores T(e_i, e_{{j}∪Q}) for Q ∈ Ω^{t-1}_{[K]\{j}}
/// and T(p_j, e_W) for W ∈ Ω^t_{[K]\{j}}.
pub(crate) fn man_placement_all_users(
    cfg: &SchemeConfig,
    lib: &Library,
    keys: &[Vec<u64>],
) -> Result<Vec<CacheContent>> {
    let field = cfg.field()?;
    let l = binom_usize(cfg.k, cfg.t);
    check_library(cfg, lib, l)?;
    check_keys(cfg, keys)?;
    let all = ground_set(cfg.k);
    let mut caches = Vec::with_capacity(cfg.k);
    for j in 1..=cfg.k {
        let others: Vec<usize> = all.iter().copied().filter(|&u| u != j).collect();
        let mut man = Vec::new();
        if cfg.t >= 1 {
            for q_set in subsets_or_empty(&others, cfg.t - 1) {
                let mut w: Vec<usize> = q_set.clone();
                w.push(j);
                w.sort_unstable();
                let col = rank_subset(&all, &w)?;
                for i in 0..cfg.n {
                    let functional =
                        functional_of(&unit_vector(cfg.n, i), &unit_vector(l, col), &field);
                    man.push(CacheRecord::realize(functional, lib));
                }
            }
        }
        let p = keys[j - 1].clone();
        let mut key_records = Vec::new();
        for w in subsets_or_empty(&others, cfg.t) {
            let col = rank_subset(&all, &w)?;
            let functional = functional_of(&p, &unit_vector(l, col), &field);
            key_records.push(CacheRecord::realize(functional, lib));
        }
        caches.push(CacheContent { user: j, man, keys: key_records, p });
    }
    Ok(caches)
}

pub(crate) fn check_library(cfg: &SchemeConfig, lib: &Library, l: usize) -> Result<()> {
    if lib.num_files() != cfg.n || lib.subpacketization() != l || lib.field().modulus() != cfg.q {
        return Err(Error::ConfigMismatch(format!(
            "library is {}x{} over GF({}), scheme needs {}x{} over GF({})",
            lib.num_files(),
            lib.subpacketization(),
            lib.field().modulus(),
            cfg.n,
            l,
            cfg.q
        )));
    }
    Ok(())
}

pub(crate) fn check_keys(cfg: &SchemeConfig, keys: &[Vec<u64>]) -> Result<()> {
    if keys.len() != cfg.k || keys.iter().any(|p| p.len() != cfg.n) {
        return Err(Error::ConfigMismatch(format!(
            "need {} key vectors of length {}",
            cfg.k, cfg.n
        )));
    }
    if keys.iter().flatten().any(|&v| v >= cfg.q) {
        return Err(Error::ConfigMismatch("key entry outside [0, q)".into()));
    }
    Ok(())
}

/// Ω^{t+1} multicast structure with e-vector columns, over the given ground
/// set, pruned by leaders of `leader_ground`'s masked rows. Shared with
/// Baseline 2 (same structure, different active handling).
pub(crate) fn man_delivery_structure(
    field: &Gf,
    k: usize,
    t: usize,
    message_ground: &[usize],
    leader_ground: Vec<usize>,
) -> Result<DeliveryStructure> {
    let _ = field;
    let all = ground_set(k);
    let l = binom_usize(k, t);
    let mut messages = Vec::new();
    for s in subsets_or_empty(message_ground, t + 1) {
        let mut terms = Vec::with_capacity(s.len());
        for &j in &s {
            let rest: Vec<usize> = s.iter().copied().filter(|&u| u != j).collect();
            let col = rank_subset(&all, &rest)?;
            terms.push((j, unit_vector(l, col)));
        }
        messages.push(MessageStructure { subset: s, terms });
    }
    Ok(DeliveryStructure { messages, prune: PruneRule::LeaderIntersection { ground: leader_ground } })
}

impl Scheme for PkScheme {
    fn id(&self) -> SchemeId {
        SchemeId::Pk
    }

    fn validate(&self, cfg: &SchemeConfig) -> Result<()> {
        cfg.validate_basic()?;
        if cfg.k_prime != cfg.k {
            return Err(Error::ConfigMismatch(format!(
                "PK scheme needs K' = K, got K' = {}, K = {}",
                cfg.k_prime, cfg.k
            )));
        }
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
        if active.len() != cfg.k {
            return Err(Error::ConfigMismatch("PK delivery needs all K users active".into()));
        }
        Ok(active
            .iter()
            .zip(demands.iter().zip(p_active))
            .map(|(&user, (d, p))| MaskedDemand { user, q: field.add_vec(p, d) })
            .collect())
    }

    fn delivery_structure(&self, cfg: &SchemeConfig, active: &[usize]) -> Result<DeliveryStructure> {
        self.validate(cfg)?;
        let field = cfg.field()?;
        let _ = active;
        let all = ground_set(cfg.k);
        man_delivery_structure(&field, cfg.k, cfg.t, &all, all.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::{bilinear, demanded_function};
    use crate::matrix::Matrix;
    use crate::scheme::{check_placement_soundness, select_leaders};

    fn cfg(k: usize, n: usize, q: u64, t: usize) -> SchemeConfig {
        SchemeConfig { k, k_prime: k, n, q, t }
    }

    fn setup(cfg: &SchemeConfig, seed: u64) -> (Library, Vec<CacheContent>) {
        let field = cfg.field().unwrap();
        let l = PkScheme.subpacketization(cfg).unwrap();
        let mut rng = crate::rng::seeded_rng(seed, crate::rng::STREAM_LIBRARY);
        let lib = Library::random(field, cfg.n, l, &mut rng);
        let caches = PkScheme.place(cfg, &lib, seed).unwrap();
        (lib, caches)
    }

    #[test]
    fn placement_k2_n2_t1_matches_listing() {
        let cfg = cfg(2, 2, 5, 1);
        let (lib, caches) = setup(&cfg, 1);
        // user 1: subfiles F_{1,{1}}, F_{2,{1}} plus one key T(p_1, e_{{2}})
        let u1 = &caches[0];
        assert_eq!(u1.man.len(), 2);
        assert_eq!(u1.keys.len(), 1);
        assert_eq!(u1.man[0].symbol, lib.symbol(0, 0));
        assert_eq!(u1.man[1].symbol, lib.symbol(1, 0));
        let key_expect = bilinear(&u1.p, &unit_vector(2, 1), &lib).unwrap();
        assert_eq!(u1.keys[0].symbol, key_expect);
        // M = 1 + t(N-1)/K = 3/2; stored/L = 3/2
        assert_eq!(u1.stored_symbols(), 3);
        assert!(check_placement_soundness(&caches, &lib));
    }

    #[test]
    fn placement_memory_at_extremes() {
        // t = 0: a single key symbol, M = 1
        let c0 = cfg(3, 2, 2, 0);
        let (_, caches) = setup(&c0, 2);
        for c in &caches {
            assert_eq!(c.man.len(), 0);
            assert_eq!(c.keys.len(), 1);
        }
        // t = K: the full library, M = N
        let ck = cfg(3, 2, 2, 3);
        let (_, caches) = setup(&ck, 3);
        for c in &caches {
            assert_eq!(c.man.len(), 2);
            assert_eq!(c.keys.len(), 0);
        }
    }

    #[test]
    fn memory_counting_matches_closed_form() {
        for (k, n, t) in [(4, 3, 0), (4, 3, 1), (4, 3, 2), (4, 3, 3), (4, 3, 4), (6, 3, 1)] {
            let cfg = cfg(k, n, 5, t);
            let (_, caches) = setup(&cfg, 7);
            let l = binom_usize(k, t);
            // stored / L == 1 + t(N-1)/K  <=>  K * stored == (K + t(N-1)) * L
            let stored = caches[0].stored_symbols();
            assert_eq!(k * stored, (k + t * (n - 1)) * l, "k={k} n={n} t={t}");
        }
    }

    #[test]
    fn delivery_count_with_full_rank_masked_rows() {
        // (K, N, t) = (6, 3, 1): 12 multicasts when the masked rows have rank
        // r = min(K, N) = 3, matching (C(K,t+1) - C(K-r,t+1)) = 15 - 3.
        let cfg = cfg(6, 3, 7, 1);
        let (lib, caches) = setup(&cfg, 4);
        let active = ground_set(6);
        // force q = p + d to hit the generic full-rank case
        let field = cfg.field().unwrap();
        let q_target: Vec<Vec<u64>> =
            (0..6).map(|i| unit_vector(3, i % 3)).collect();
        let demands: Vec<Vec<u64>> = (0..6)
            .map(|i| field.sub_vec(&q_target[i], &caches[i].p))
            .collect();
        let payload = PkScheme.deliver(&cfg, &lib, &caches, &active, &demands).unwrap();
        assert_eq!(payload.multicast_count(), 12);

        // rank-1 masked rows: only subsets meeting the single leader are sent
        let q_flat: Vec<Vec<u64>> = (0..6).map(|_| unit_vector(3, 0)).collect();
        let demands_flat: Vec<Vec<u64>> = (0..6)
            .map(|i| field.sub_vec(&q_flat[i], &caches[i].p))
            .collect();
        let payload = PkScheme.deliver(&cfg, &lib, &caches, &active, &demands_flat).unwrap();
        // C(6,2) - C(5,2) = 15 - 10 = 5 subsets meet a fixed singleton
        assert_eq!(payload.multicast_count(), 5);
        for mc in &payload.multicasts {
            assert!(mc.subset.contains(&1));
        }
    }

    #[test]
    fn delivery_t_equals_k_sends_nothing() {
        let cfg = cfg(3, 2, 2, 3);
        let (lib, caches) = setup(&cfg, 5);
        let active = ground_set(3);
        let demands = vec![unit_vector(2, 0), unit_vector(2, 1), unit_vector(2, 0)];
        let payload = PkScheme.deliver(&cfg, &lib, &caches, &active, &demands).unwrap();
        assert_eq!(payload.multicast_count(), 0);
        // and yet everyone decodes from cache alone
        for (i, &u) in active.iter().enumerate() {
            let out = PkScheme.decode(&cfg, &caches[u - 1], &payload, &demands[i]).unwrap();
            assert_eq!(out, demanded_function(&demands[i], &lib).unwrap());
        }
    }

    #[test]
    fn decode_all_exhaustive_small_instance() {
        // (q, K, N, t) = (2, 3, 2, 1): all 64 demand matrices, every user
        let cfg = cfg(3, 2, 2, 1);
        let (lib, caches) = setup(&cfg, 6);
        let active = ground_set(3);
        for code in 0..64u32 {
            let demands: Vec<Vec<u64>> = (0..3)
                .map(|j| vec![(code >> (2 * j)) as u64 & 1, (code >> (2 * j + 1)) as u64 & 1])
                .collect();
            let payload = PkScheme.deliver(&cfg, &lib, &caches, &active, &demands).unwrap();
            for (i, &u) in active.iter().enumerate() {
                let got = PkScheme.decode(&cfg, &caches[u - 1], &payload, &demands[i]).unwrap();
                assert_eq!(got, demanded_function(&demands[i], &lib).unwrap());
            }
        }
    }

    #[test]
    fn omitted_multicasts_lie_in_sent_plus_cache_span() {
        let cfg = cfg(4, 2, 3, 1);
        let (lib, caches) = setup(&cfg, 8);
        let field = cfg.field().unwrap();
        let active = ground_set(4);
        let demands = vec![
            unit_vector(2, 0),
            unit_vector(2, 0),
            unit_vector(2, 1),
            unit_vector(2, 1),
        ];
        let payload = PkScheme.deliver(&cfg, &lib, &caches, &active, &demands).unwrap();
        let structure = PkScheme.delivery_structure(&cfg, &active).unwrap();
        let sent: Vec<&Vec<usize>> = payload.multicasts.iter().map(|m| &m.subset).collect();
        let sent_funcs = PkScheme.multicast_functionals(&cfg, &payload).unwrap();
        if sent.len() == structure.messages.len() {
            return; // full-rank realization, nothing pruned
        }
        let (leaders, _) = select_leaders(
            &field,
            &payload.masked.iter().map(|m| m.q.clone()).collect::<Vec<_>>(),
        );
        assert!(!leaders.is_empty());
        for msg in &structure.messages {
            if sent.contains(&&msg.subset) {
                continue;
            }
            let omitted =
                crate::scheme::message_functional(&field, &cfg, msg, &payload.masked).unwrap();
            for cache in &caches {
                let mut cols: Vec<Vec<u64>> =
                    sent_funcs.iter().map(|f| f.coeffs().to_vec()).collect();
                cols.extend(cache.records().map(|r| r.functional.coeffs().to_vec()));
                let basis = Matrix::from_cols(field, cols).unwrap();
                assert!(
                    basis.in_span(omitted.coeffs()),
                    "omitted {:?} unreachable for user {}",
                    msg.subset,
                    cache.user
                );
            }
        }
    }
}
