//! New Scheme 1: MDS-coded subfiles at subpacketization C(K', t).
//!
//! Files are split into C(K', t) subfiles and coded with a C(K', t) × C(K, t)
//! MDS generator G (Vandermonde on points 1..C(K,t), so q must exceed
//! C(K, t)). User j stores the MAN-like coded subfiles T(e_i, g_{{j}∪Q}) plus
//! η_t = [C(K',t) − C(K−1,t−1)]⁺ surplus privacy keys T(p_j, ξ_{j,ℓ}); every
//! other key T(p_j, g_T) is locally derivable because any C(K', t) columns of
//! G span the coded space.
//!
//! Delivery runs over Ω^{t+1} of the active set with leader pruning on the
//! masked rows, giving C(K',t+1) − C(K',t+1 of the non-leader remainder)
//! multicasts. The same machinery covers t = 0: G degenerates to [1], each
//! user caches the single key ⟨p_j, F⟩, and delivery sends leader singletons,
//! so the worst-case load is min(K', N) at M = 1.

use serde::Serialize;

use crate::combin::{binom_usize, ground_set, rank_subset, subsets_or_empty};
use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::library::{functional_of, unit_vector, Library};
use crate::matrix::Matrix;

use super::pk::{check_keys, check_library};
use super::{
    CacheContent, CacheRecord, DeliveryStructure, MaskedDemand, MessageStructure, PruneRule,
    Scheme, SchemeConfig, SchemeId,
};

pub struct NewScheme1;

/// The MDS generator and its subset-to-column assignment.
pub struct MdsPlan {
    field: Gf,
    k: usize,
    t: usize,
    /// Coded subpacketization C(K', t) = number of rows of G.
    pub l: usize,
    /// C(K, t) columns, one per T ∈ Ω^t_{[K]} in lexicographic order.
    pub cols: usize,
    g: Matrix<Gf>,
    points: Vec<u64>,
}

impl MdsPlan {
    pub fn build(cfg: &SchemeConfig) -> Result<MdsPlan> {
        if cfg.t > cfg.k_prime {
            return Err(Error::BadT { t: cfg.t, min: 0, max: cfg.k_prime });
        }
        let field = cfg.field()?;
        let l = binom_usize(cfg.k_prime, cfg.t);
        let cols = binom_usize(cfg.k, cfg.t);
        if (cols as u64) >= cfg.q {
            return Err(Error::FieldTooSmall { needed: cols as u64 + 1, q: cfg.q });
        }
        let points: Vec<u64> = (1..=cols as u64).collect();
        let g = Matrix::vandermonde(field, &points, l)?;
        let plan = MdsPlan { field, k: cfg.k, t: cfg.t, l, cols, g, points };
        // cheap exhaustive confirmation at desk scale; wider instances are
        // checked through verify()
        if cols <= 20 {
            plan.g.verify_mds(20, 0, 0)?;
        }
        Ok(plan)
    }

    /// Column index assigned to subset T (its lexicographic rank).
    pub fn column_for_subset(&self, subset: &[usize]) -> Result<usize> {
        rank_subset(&ground_set(self.k), subset)
    }

    pub fn column(&self, idx: usize) -> Vec<u64> {
        self.g.col(idx)
    }

    pub fn generator(&self) -> &Matrix<Gf> {
        &self.g
    }

    /// Full MDS verification: exhaustive for at most 20 columns, seeded
    /// sampling above.
    pub fn verify(&self, samples: usize, seed: u64) -> Result<()> {
        self.g.verify_mds(20, samples, seed)
    }

    /// Reproducibility summary: the prime and the evaluation points pin the
    /// generator down exactly.
    pub fn summary(&self) -> MdsPlanSummary {
        MdsPlanSummary {
            q: self.field.modulus(),
            rows: self.l,
            points: self.points.clone(),
            t: self.t,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MdsPlanSummary {
    pub q: u64,
    pub rows: usize,
    pub t: usize,
    pub points: Vec<u64>,
}

/// Surplus privacy keys of one user: η_t = [C(K',t) − C(K−1,t−1)]⁺ extra
/// columns, drawn from {g_T : j ∉ T} and linearly independent of the user's
/// own MAN columns.
pub struct SurplusKeySpec {
    pub eta: usize,
    /// Column indices into G.
    pub columns: Vec<usize>,
}

/// Column indices of the user's own MAN content, {j} ∪ Q over Q in
/// lexicographic order.
fn own_columns(plan: &MdsPlan, user: usize) -> Result<Vec<usize>> {
    if plan.t == 0 {
        return Ok(Vec::new());
    }
    let others: Vec<usize> = (1..=plan.k).filter(|&u| u != user).collect();
    let mut cols = Vec::new();
    for q_set in subsets_or_empty(&others, plan.t - 1) {
        let mut w = q_set;
        w.push(user);
        w.sort_unstable();
        cols.push(plan.column_for_subset(&w)?);
    }
    Ok(cols)
}

/// Greedy surplus selection: scan g_T with j ∉ T in lexicographic order,
/// keeping columns that grow the rank of own ∪ selected, until η_t are found.
/// The MDS property guarantees success.
pub fn surplus_keys(plan: &MdsPlan, user: usize) -> Result<SurplusKeySpec> {
    let own = own_columns(plan, user)?;
    let eta = plan.l.saturating_sub(own.len());
    let mut span = IncrementalSpan::new(plan.field);
    for &c in &own {
        span.insert(plan.column(c));
    }
    let mut columns = Vec::with_capacity(eta);
    if eta > 0 {
        let others: Vec<usize> = (1..=plan.k).filter(|&u| u != user).collect();
        for t_set in subsets_or_empty(&others, plan.t) {
            if columns.len() == eta {
                break;
            }
            let c = plan.column_for_subset(&t_set)?;
            if span.insert(plan.column(c)) {
                columns.push(c);
            }
        }
    }
    if columns.len() != eta || span.rank() != plan.l.min(own.len() + eta) {
        return Err(Error::KeyBasisDeficient { user });
    }
    Ok(SurplusKeySpec { eta, columns })
}

/// Incremental row-style span tracker over GF(q).
struct IncrementalSpan {
    field: Gf,
    rows: Vec<Vec<u64>>,
}

impl IncrementalSpan {
    fn new(field: Gf) -> Self {
        IncrementalSpan { field, rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces v against the basis; true iff it adds a new dimension.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let f = &self.field;
        for b in &self.rows {
            let lead = b.iter().position(|x| *x != 0).expect("basis rows nonzero");
            if v[lead] != 0 {
                let factor = f.mul(&v[lead], &f.inv(&b[lead]).expect("nonzero lead"));
                for (x, y) in v.iter_mut().zip(b) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        if v.iter().any(|x| *x != 0) {
            self.rows.push(v);
            true
        } else {
            false
        }
    }
}

/// Recomputes every privacy key T(p_j, g_T), T ∈ Ω^t_{[K]}, from the user's
/// cache alone: keys for own columns come from the MAN content and p_j, the
/// rest by solving g_T against the own ∪ ξ column basis. Returns symbols in
/// column order. Fails with KeyBasisDeficient only if the construction is
/// broken.
pub fn derive_all_keys(cfg: &SchemeConfig, cache: &CacheContent) -> Result<Vec<u64>> {
    let plan = MdsPlan::build(cfg)?;
    let field = plan.field;
    let user = cache.user;
    let own = own_columns(&plan, user)?;
    let spec = surplus_keys(&plan, user)?;
    debug_assert_eq!(cache.keys.len(), spec.eta);

    // symbol of T(p_j, g_c) for the user's own MAN columns:
    // Σ_n p_n · T(e_n, g_c), the man records being (Q outer, file inner)
    let mut basis_cols = Vec::new();
    let mut basis_syms = Vec::new();
    for (qi, &c) in own.iter().enumerate() {
        let mut s = 0u64;
        for i in 0..cfg.n {
            let rec = &cache.man[qi * cfg.n + i];
            s = field.add(&s, &field.mul(&cache.p[i], &rec.symbol));
        }
        basis_cols.push(plan.column(c));
        basis_syms.push(s);
    }
    for (kix, &c) in spec.columns.iter().enumerate() {
        basis_cols.push(plan.column(c));
        basis_syms.push(cache.keys[kix].symbol);
    }

    let basis = Matrix::from_cols(field, basis_cols)?;
    let targets: Vec<Vec<u64>> = (0..plan.cols).map(|c| plan.column(c)).collect();
    let sols = basis.solve_many(&targets)?;
    let mut out = Vec::with_capacity(plan.cols);
    for sol in sols {
        let x = sol.ok_or(Error::KeyBasisDeficient { user })?;
        let mut s = 0u64;
        for (xi, sym) in x.iter().zip(&basis_syms) {
            s = field.add(&s, &field.mul(xi, sym));
        }
        out.push(s);
    }
    Ok(out)
}

impl Scheme for NewScheme1 {
    fn id(&self) -> SchemeId {
        SchemeId::New1
    }

    fn validate(&self, cfg: &SchemeConfig) -> Result<()> {
        cfg.validate_basic()?;
        if cfg.t > cfg.k_prime {
            return Err(Error::BadT { t: cfg.t, min: 0, max: cfg.k_prime });
        }
        let cols = binom_usize(cfg.k, cfg.t);
        if (cols as u64) >= cfg.q {
            return Err(Error::FieldTooSmall { needed: cols as u64 + 1, q: cfg.q });
        }
        Ok(())
    }

    fn subpacketization(&self, cfg: &SchemeConfig) -> Result<usize> {
        self.validate(cfg)?;
        Ok(binom_usize(cfg.k_prime, cfg.t))
    }

    fn place_with_keys(
        &self,
        cfg: &SchemeConfig,
        lib: &Library,
        keys: &[Vec<u64>],
    ) -> Result<Vec<CacheContent>> {
        self.validate(cfg)?;
        let plan = MdsPlan::build(cfg)?;
        check_library(cfg, lib, plan.l)?;
        check_keys(cfg, keys)?;
        let field = plan.field;
        let mut caches = Vec::with_capacity(cfg.k);
        for j in 1..=cfg.k {
            let p = keys[j - 1].clone();
            let mut man = Vec::new();
            for &c in &own_columns(&plan, j)? {
                let b = plan.column(c);
                for i in 0..cfg.n {
                    let functional = functional_of(&unit_vector(cfg.n, i), &b, &field);
                    man.push(CacheRecord::realize(functional, lib));
                }
            }
            let spec = surplus_keys(&plan, j)?;
            let mut key_records = Vec::with_capacity(spec.eta);
            for &c in &spec.columns {
                let functional = functional_of(&p, &plan.column(c), &field);
                key_records.push(CacheRecord::realize(functional, lib));
            }
            caches.push(CacheContent { user: j, man, keys: key_records, p });
        }
        Ok(caches)
    }

    fn masked_demands(
        &self,
        cfg: &SchemeConfig,
        active: &[usize],
        demands: &[Vec<u64>],
        p_active: &[Vec<u64>],
    ) -> Result<Vec<MaskedDemand>> {
        let field = cfg.field()?;
        Ok(active
            .iter()
            .zip(demands.iter().zip(p_active))
            .map(|(&user, (d, p))| MaskedDemand { user, q: field.add_vec(p, d) })
            .collect())
    }

    fn delivery_structure(&self, cfg: &SchemeConfig, active: &[usize]) -> Result<DeliveryStructure> {
        self.validate(cfg)?;
        let plan = MdsPlan::build(cfg)?;
        let mut messages = Vec::new();
        for s in subsets_or_empty(active, cfg.t + 1) {
            let mut terms = Vec::with_capacity(s.len());
            for &j in &s {
                let rest: Vec<usize> = s.iter().copied().filter(|&u| u != j).collect();
                let c = plan.column_for_subset(&rest)?;
                terms.push((j, plan.column(c)));
            }
            messages.push(MessageStructure { subset: s, terms });
        }
        Ok(DeliveryStructure {
            messages,
            prune: PruneRule::LeaderIntersection { ground: active.to_vec() },
        })
    }
}
