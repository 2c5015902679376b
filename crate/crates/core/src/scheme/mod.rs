//! The scheme contract shared by every caching scheme: configuration, cache
//! and payload types, leader selection on masked demands, and the generic
//! span-based decoder.
//!
//! Delivery is factored through [`DeliveryStructure`]: a scheme lists, per
//! potential multicast subset S, the coefficient column b_{S,j} of every term
//! T(q_j, b_{S,j}), plus a pruning rule. The default `deliver`, the receiver
//! side `multicast_functionals`, and the exact oracles all consume the same
//! structure, so what is verified is what ships.

pub mod baselines;
pub mod new1;
pub mod new2;
pub mod pk;

use serde::{Deserialize, Serialize};

use crate::combin::{ground_set, rank_subset};
use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::library::{functional_of, Functional, Library};
use crate::matrix::Matrix;
use crate::rng::seeded_rng;

pub use baselines::Bl2Scheme;
pub use new1::NewScheme1;
pub use new2::NewScheme2;
pub use pk::PkScheme;

/// Scheme and curve identifiers. `Bl1`, `Foresight`, and `Uncoded` are
/// analytic curves only; the rest have operational place/deliver/decode.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeId {
    Pk,
    Bl1,
    Bl2,
    New1,
    New2,
    Foresight,
    Uncoded,
}

impl SchemeId {
    pub fn is_operational(self) -> bool {
        matches!(self, SchemeId::Pk | SchemeId::Bl2 | SchemeId::New1 | SchemeId::New2)
    }

    pub fn parse(s: &str) -> Option<SchemeId> {
        match s.to_ascii_lowercase().as_str() {
            "pk" => Some(SchemeId::Pk),
            "bl1" => Some(SchemeId::Bl1),
            "bl2" => Some(SchemeId::Bl2),
            "new1" => Some(SchemeId::New1),
            "new2" => Some(SchemeId::New2),
            "foresight" | "fs" => Some(SchemeId::Foresight),
            "uncoded" => Some(SchemeId::Uncoded),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Pk => "pk",
            SchemeId::Bl1 => "bl1",
            SchemeId::Bl2 => "bl2",
            SchemeId::New1 => "new1",
            SchemeId::New2 => "new2",
            SchemeId::Foresight => "foresight",
            SchemeId::Uncoded => "uncoded",
        }
    }
}

/// System parameters of a (K, K', N) hotplug instance over GF(q) with MAN
/// parameter t.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SchemeConfig {
    /// Total users K.
    pub k: usize,
    /// Active users K' at delivery.
    pub k_prime: usize,
    /// Files N.
    pub n: usize,
    /// Prime field modulus.
    pub q: u64,
    /// MAN parameter t (ignored by schemes without one).
    pub t: usize,
}

impl SchemeConfig {
    pub fn field(&self) -> Result<Gf> {
        Gf::new(self.q)
    }

    pub fn validate_basic(&self) -> Result<()> {
        if self.k_prime == 0 || self.k_prime > self.k {
            return Err(Error::ConfigMismatch(format!(
                "need 1 <= K' <= K, got K' = {}, K = {}",
                self.k_prime, self.k
            )));
        }
        if self.n == 0 {
            return Err(Error::ConfigMismatch("need at least one file".into()));
        }
        self.field()?;
        Ok(())
    }
}

/// One cached symbol together with the linear functional of the file symbols
/// it realizes.
#[derive(Clone, PartialEq, Debug)]
pub struct CacheRecord {
    pub functional: Functional,
    pub symbol: u64,
}

impl CacheRecord {
    pub fn realize(functional: Functional, lib: &Library) -> CacheRecord {
        let symbol = functional.evaluate(lib);
        CacheRecord { functional, symbol }
    }
}

/// Cache of one user: MAN-like coded subfiles, privacy-key symbols, and the
/// private key vector p_j (local randomness, not counted against memory).
#[derive(Clone, PartialEq, Debug)]
pub struct CacheContent {
    pub user: usize,
    pub man: Vec<CacheRecord>,
    pub keys: Vec<CacheRecord>,
    pub p: Vec<u64>,
}

impl CacheContent {
    /// Symbols counted against the memory budget M·L.
    pub fn stored_symbols(&self) -> usize {
        self.man.len() + self.keys.len()
    }

    pub fn records(&self) -> impl Iterator<Item = &CacheRecord> {
        self.man.iter().chain(self.keys.iter())
    }
}

/// Masked demand q_j = p_j + d_j broadcast for user j.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MaskedDemand {
    pub user: usize,
    pub q: Vec<u64>,
}

/// One multicast symbol, tagged with its subset and the subset's rank in
/// Ω^{|S|}_{[K]} (lexicographic).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Multicast {
    pub subset: Vec<usize>,
    pub rank: usize,
    pub symbol: u64,
}

/// The broadcast: active set, masked demands, and multicast symbols.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DeliveryPayload {
    pub active: Vec<usize>,
    pub masked: Vec<MaskedDemand>,
    pub multicasts: Vec<Multicast>,
    /// Placement seed, recorded for reproducibility when known.
    pub placement_seed: Option<u64>,
}

impl DeliveryPayload {
    pub fn masked_row(&self, user: usize) -> Option<&[u64]> {
        self.masked.iter().find(|m| m.user == user).map(|m| m.q.as_slice())
    }

    /// Multicast symbol count; load in file units is this divided by L.
    pub fn multicast_count(&self) -> usize {
        self.multicasts.len()
    }

    /// Field symbols spent on the masked-demand header (the paper's R
    /// excludes these in the limit NK/B -> 0).
    pub fn header_symbols(&self) -> usize {
        self.masked.iter().map(|m| m.q.len()).sum()
    }
}

/// Structure of the potential multicasts for one active set.
#[derive(Clone, Debug)]
pub struct DeliveryStructure {
    pub messages: Vec<MessageStructure>,
    pub prune: PruneRule,
}

/// X_S = Σ_{(j, b)} T(q_j, b) over the listed terms.
#[derive(Clone, Debug)]
pub struct MessageStructure {
    pub subset: Vec<usize>,
    pub terms: Vec<(usize, Vec<u64>)>,
}

/// Which of the potential messages are sent.
#[derive(Clone, Debug)]
pub enum PruneRule {
    /// Send every message (schemes with a single multicast).
    SendAll,
    /// Send X_S iff S meets the leader set of the masked rows of `ground`,
    /// leaders being the first maximal independent row set by user id.
    LeaderIntersection { ground: Vec<usize> },
}

/// Greedy leader selection: scans rows in order and keeps those that grow the
/// rank. Returns (0-based indices of the kept rows, rank).
pub fn select_leaders(field: &Gf, rows: &[Vec<u64>]) -> (Vec<usize>, usize) {
    let mut leaders = Vec::new();
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for b in &basis {
            let lead = b.iter().position(|x| *x != 0).expect("basis rows nonzero");
            if v[lead] != 0 {
                let factor = field.mul(&v[lead], &field.inv(&b[lead]).expect("nonzero lead"));
                for (x, y) in v.iter_mut().zip(b) {
                    *x = field.sub(x, &field.mul(&factor, y));
                }
            }
        }
        if v.iter().any(|x| *x != 0) {
            leaders.push(i);
            basis.push(v);
        }
    }
    let rank = leaders.len();
    (leaders, rank)
}

/// Applies a prune rule given the broadcast masked demands; returns the
/// indices of the messages to send.
pub fn prune_messages(
    field: &Gf,
    structure: &DeliveryStructure,
    masked: &[MaskedDemand],
) -> Result<Vec<usize>> {
    match &structure.prune {
        PruneRule::SendAll => Ok((0..structure.messages.len()).collect()),
        PruneRule::LeaderIntersection { ground } => {
            let mut rows = Vec::with_capacity(ground.len());
            for u in ground {
                let row = masked
                    .iter()
                    .find(|m| m.user == *u)
                    .ok_or_else(|| Error::ConfigMismatch(format!("no masked row for user {u}")))?;
                rows.push(row.q.clone());
            }
            let (leader_idx, _rank) = select_leaders(field, &rows);
            let leader_ids: Vec<usize> = leader_idx.iter().map(|&i| ground[i]).collect();
            Ok(structure
                .messages
                .iter()
                .enumerate()
                .filter(|(_, m)| m.subset.iter().any(|u| leader_ids.contains(u)))
                .map(|(i, _)| i)
                .collect())
        }
    }
}

/// Span-based decoding: expresses d ⊗ e_ℓ for every subfile slot ℓ as a
/// combination of the knowledge functionals and combines the realized
/// symbols accordingly. Complete for linear schemes: a slot outside the span
/// is genuinely undecodable.
pub fn generic_decode(
    field: &Gf,
    n: usize,
    l: usize,
    knowledge: &[(Functional, u64)],
    d: &[u64],
) -> Result<Vec<u64>> {
    let cols: Vec<Vec<u64>> = knowledge.iter().map(|(f, _)| f.coeffs().to_vec()).collect();
    let a = Matrix::from_cols(*field, cols)?;
    let a = if knowledge.is_empty() { Matrix::zero(*field, n * l, 0) } else { a };
    let mut targets = Vec::with_capacity(l);
    for slot in 0..l {
        let mut e = vec![0u64; l];
        e[slot] = 1;
        targets.push(functional_of(d, &e, field).coeffs().to_vec());
    }
    let sols = a.solve_many(&targets)?;
    let mut out = Vec::with_capacity(l);
    for (slot, sol) in sols.into_iter().enumerate() {
        let x = sol.ok_or(Error::Undecodable { slot })?;
        let mut sym = 0u64;
        for (xi, (_, s)) in x.iter().zip(knowledge) {
            sym = field.add(&sym, &field.mul(xi, s));
        }
        out.push(sym);
    }
    Ok(out)
}

/// Draws the per-user key vectors p_1, …, p_K from the placement stream of
/// the given seed.
pub fn draw_keys(field: &Gf, k: usize, n: usize, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = seeded_rng(seed, crate::rng::STREAM_KEYS);
    (0..k).map(|_| field.sample_vec(&mut rng, n)).collect()
}

/// The operational scheme contract.
pub trait Scheme {
    fn id(&self) -> SchemeId;

    /// Checks config admissibility for this scheme.
    fn validate(&self, cfg: &SchemeConfig) -> Result<()>;

    /// Subfiles per file for this config.
    fn subpacketization(&self, cfg: &SchemeConfig) -> Result<usize>;

    /// Deterministic placement given every user's key vector p_j.
    fn place_with_keys(
        &self,
        cfg: &SchemeConfig,
        lib: &Library,
        keys: &[Vec<u64>],
    ) -> Result<Vec<CacheContent>>;

    /// The masked demands broadcast by the server. `active` is sorted,
    /// `demands` and `p_active` align with it. Schemes delivering over all K
    /// users (pk, bl2) return K rows; the rest return the active rows.
    fn masked_demands(
        &self,
        cfg: &SchemeConfig,
        active: &[usize],
        demands: &[Vec<u64>],
        p_active: &[Vec<u64>],
    ) -> Result<Vec<MaskedDemand>>;

    /// Multicast structure for an active set.
    fn delivery_structure(&self, cfg: &SchemeConfig, active: &[usize]) -> Result<DeliveryStructure>;

    /// Placement with keys drawn from a seed.
    fn place(&self, cfg: &SchemeConfig, lib: &Library, seed: u64) -> Result<Vec<CacheContent>> {
        let field = cfg.field()?;
        let keys = draw_keys(&field, cfg.k, cfg.n, seed);
        self.place_with_keys(cfg, lib, &keys)
    }

    /// Builds the broadcast for the given active set and demand matrix.
    fn deliver(
        &self,
        cfg: &SchemeConfig,
        lib: &Library,
        caches: &[CacheContent],
        active: &[usize],
        demands: &[Vec<u64>],
    ) -> Result<DeliveryPayload> {
        let field = cfg.field()?;
        validate_active(cfg, active)?;
        validate_demands(cfg, active, demands)?;
        if caches.len() != cfg.k {
            return Err(Error::ConfigMismatch(format!(
                "expected {} caches, got {}",
                cfg.k,
                caches.len()
            )));
        }
        let p_active: Vec<Vec<u64>> = active.iter().map(|&u| caches[u - 1].p.clone()).collect();
        let masked = self.masked_demands(cfg, active, demands, &p_active)?;
        let structure = self.delivery_structure(cfg, active)?;
        let sent = prune_messages(&field, &structure, &masked)?;
        let all_users = ground_set(cfg.k);
        let mut multicasts = Vec::with_capacity(sent.len());
        for idx in sent {
            let msg = &structure.messages[idx];
            let functional = message_functional(&field, cfg, msg, &masked)?;
            let symbol = functional.evaluate(lib);
            multicasts.push(Multicast {
                subset: msg.subset.clone(),
                rank: rank_subset(&all_users, &msg.subset)?,
                symbol,
            });
        }
        Ok(DeliveryPayload { active: active.to_vec(), masked, multicasts, placement_seed: None })
    }

    /// Reconstructs, from public information only, the functional of each
    /// multicast in the payload (in payload order).
    fn multicast_functionals(
        &self,
        cfg: &SchemeConfig,
        payload: &DeliveryPayload,
    ) -> Result<Vec<Functional>> {
        let field = cfg.field()?;
        let structure = self.delivery_structure(cfg, &payload.active)?;
        payload
            .multicasts
            .iter()
            .map(|mc| {
                let msg = structure
                    .messages
                    .iter()
                    .find(|m| m.subset == mc.subset)
                    .ok_or_else(|| {
                        Error::ConfigMismatch(format!("unknown multicast subset {:?}", mc.subset))
                    })?;
                message_functional(&field, cfg, msg, &payload.masked)
            })
            .collect()
    }

    /// Decodes the demanded function for the cache's owner, who must be
    /// active in the payload.
    fn decode(
        &self,
        cfg: &SchemeConfig,
        cache: &CacheContent,
        payload: &DeliveryPayload,
        d: &[u64],
    ) -> Result<Vec<u64>> {
        let field = cfg.field()?;
        if !payload.active.contains(&cache.user) {
            return Err(Error::ConfigMismatch(format!(
                "user {} is not in the active set",
                cache.user
            )));
        }
        let l = self.subpacketization(cfg)?;
        let functionals = self.multicast_functionals(cfg, payload)?;
        let mut knowledge: Vec<(Functional, u64)> = cache
            .records()
            .map(|r| (r.functional.clone(), r.symbol))
            .collect();
        knowledge.extend(
            functionals
                .into_iter()
                .zip(&payload.multicasts)
                .map(|(f, mc)| (f, mc.symbol)),
        );
        generic_decode(&field, cfg.n, l, &knowledge, d)
    }
}

/// X_S's functional Σ_j q_j ⊗ b_{S,j} from the broadcast masked demands.
pub(crate) fn message_functional(
    field: &Gf,
    cfg: &SchemeConfig,
    msg: &MessageStructure,
    masked: &[MaskedDemand],
) -> Result<Functional> {
    let l = msg
        .terms
        .first()
        .map(|(_, b)| b.len())
        .ok_or_else(|| Error::ConfigMismatch("multicast with no terms".into()))?;
    let mut acc = Functional::zero(cfg.n, l);
    for (user, b) in &msg.terms {
        let q = masked
            .iter()
            .find(|m| m.user == *user)
            .ok_or_else(|| Error::ConfigMismatch(format!("no masked row for user {user}")))?;
        acc.add_assign(&functional_of(&q.q, b, field), field);
    }
    Ok(acc)
}

pub(crate) fn validate_active(cfg: &SchemeConfig, active: &[usize]) -> Result<()> {
    if active.len() != cfg.k_prime {
        return Err(Error::ConfigMismatch(format!(
            "active set has {} users, K' = {}",
            active.len(),
            cfg.k_prime
        )));
    }
    if active.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ConfigMismatch("active set must be strictly increasing".into()));
    }
    if active.iter().any(|&u| u == 0 || u > cfg.k) {
        return Err(Error::ConfigMismatch("active user id outside [K]".into()));
    }
    Ok(())
}

pub(crate) fn validate_demands(
    cfg: &SchemeConfig,
    active: &[usize],
    demands: &[Vec<u64>],
) -> Result<()> {
    if demands.len() != active.len() {
        return Err(Error::ConfigMismatch(format!(
            "{} demand rows for {} active users",
            demands.len(),
            active.len()
        )));
    }
    if demands.iter().any(|d| d.len() != cfg.n) {
        return Err(Error::ConfigMismatch("demand row length differs from N".into()));
    }
    if demands.iter().flatten().any(|&v| v >= cfg.q) {
        return Err(Error::ConfigMismatch("demand entry outside [0, q)".into()));
    }
    Ok(())
}

/// Factory for operational schemes.
pub fn scheme_by_id(id: SchemeId) -> Result<Box<dyn Scheme>> {
    match id {
        SchemeId::Pk => Ok(Box::new(PkScheme)),
        SchemeId::Bl2 => Ok(Box::new(Bl2Scheme)),
        SchemeId::New1 => Ok(Box::new(NewScheme1)),
        SchemeId::New2 => Ok(Box::new(NewScheme2)),
        other => Err(Error::ConfigMismatch(format!(
            "scheme '{}' is analytic-only; it cannot be simulated",
            other.name()
        ))),
    }
}

/// Checks that every cached record's symbol equals its functional evaluated
/// on the library (placement soundness).
pub fn check_placement_soundness(caches: &[CacheContent], lib: &Library) -> bool {
    caches
        .iter()
        .flat_map(|c| c.records())
        .all(|r| r.functional.evaluate(lib) == r.symbol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::demanded_function;

    #[test]
    fn leader_selection_examples() {
        let f = Gf::new(3).unwrap();
        // [e1; e2; e1+e2] -> rank 2, first two rows lead
        let rows = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let (leaders, rank) = select_leaders(&f, &rows);
        assert_eq!((leaders, rank), (vec![0, 1], 2));

        let zero = vec![vec![0, 0], vec![0, 0]];
        assert_eq!(select_leaders(&f, &zero), (vec![], 0));

        let units = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let f5 = Gf::new(5).unwrap();
        assert_eq!(select_leaders(&f5, &units).1, 3);
    }

    #[test]
    fn generic_decode_full_library_rows() {
        let f = Gf::new(5).unwrap();
        let lib = Library::from_rows(f, vec![vec![1, 2, 3], vec![4, 0, 1]]).unwrap();
        // knowledge = every file row  =>  any demand decodes
        let mut knowledge = Vec::new();
        for n in 0..2 {
            for l in 0..3 {
                let func = functional_of(
                    &crate::library::unit_vector(2, n),
                    &crate::library::unit_vector(3, l),
                    &f,
                );
                let sym = func.evaluate(&lib);
                knowledge.push((func, sym));
            }
        }
        for d in [[1u64, 0], [0, 1], [3, 4], [0, 0]] {
            let got = generic_decode(&f, 2, 3, &knowledge, &d).unwrap();
            assert_eq!(got, demanded_function(&d, &lib).unwrap());
        }
    }

    #[test]
    fn generic_decode_empty_knowledge() {
        let f = Gf::new(5).unwrap();
        let err = generic_decode(&f, 2, 2, &[], &[1, 0]).unwrap_err();
        assert!(matches!(err, Error::Undecodable { slot: 0 }));
        // zero demand needs nothing
        let got = generic_decode(&f, 2, 2, &[], &[0, 0]).unwrap();
        assert_eq!(got, vec![0, 0]);
    }

    #[test]
    fn masking_is_uniform_for_every_fixed_demand() {
        // q_j = p_j + d_j is a bijection of p_j, so the histogram over all p
        // is flat for every fixed d.
        let f = Gf::new(3).unwrap();
        let n = 2usize;
        let total = 9usize;
        for d_idx in 0..total {
            let d = vec![(d_idx / 3) as u64, (d_idx % 3) as u64];
            let mut hist = vec![0usize; total];
            for p_idx in 0..total {
                let p = vec![(p_idx / 3) as u64, (p_idx % 3) as u64];
                let q = f.add_vec(&p, &d);
                hist[(q[0] * 3 + q[1]) as usize] += 1;
            }
            assert!(hist.iter().all(|&c| c == 1), "masking not uniform for d {d:?} with n={n}");
        }
    }
}
