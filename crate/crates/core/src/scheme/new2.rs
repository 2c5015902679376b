//! New Scheme 2: subpacketization K', one multicast symbol per delivery.
//!
//! Each user j has a K' × (K'−1) generator G_j plus an auxiliary column ξ_j.
//! The family must satisfy: Condition 1, [G_j | ξ_j] full rank; Condition 2,
//! [G_j | φ_{I,j}] full rank; Condition 3, the stacked [G_1, …, G_K] is MDS
//! (any K' of its columns invertible), which forces every per-active-set
//! stack [G_j : j ∈ I] to be MDS as well. The single symbol
//! X_I = Σ_{j∈I} T(q_j, φ_{I,j}) uses combining vectors φ_{I,j} lying in
//! every other active user's column span but outside user j's.
//!
//! φ is computed through dual vectors: h_v spans the left null space of G_v,
//! so colspan(G_v) = {x : h_v·x = 0} and φ_{I,j} is the one-dimensional null
//! space of the stacked {h_v : v ∈ I\{j}}. This is a (K'−1) × K' system
//! instead of the K'(K'−2) × (K'−1)² stacked block system; the witnesses
//! x_{v,j} with φ_{I,j} = G_v x_{v,j} are still produced.

use serde::Serialize;

use crate::combin::{enumerate_subsets, ground_set};
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::library::{functional_of, unit_vector, Library};
use crate::matrix::Matrix;

use super::pk::{check_keys, check_library};
use super::{
    CacheContent, CacheRecord, DeliveryStructure, MaskedDemand, MessageStructure, PruneRule,
    Scheme, SchemeConfig, SchemeId,
};

pub struct NewScheme2;

/// Per-user generator matrices, auxiliary columns, and dual vectors.
pub struct UserGeneratorFamily {
    field: Gf,
    k: usize,
    k_prime: usize,
    g: Vec<Matrix<Gf>>,
    xi: Vec<Vec<u64>>,
    h: Vec<Vec<u64>>,
}

impl UserGeneratorFamily {
    /// Vandermonde family: user j's columns sit on points
    /// (j−1)(K'−1)+1 … j(K'−1) and ξ_j on the fresh point K(K'−1)+j, so the
    /// whole collection is one distinct-point Vandermonde system and
    /// Conditions 1 and 3 hold by construction. Both are still checked.
    pub fn build(cfg: &SchemeConfig) -> Result<UserGeneratorFamily> {
        let field = cfg.field()?;
        let (k, kp) = (cfg.k, cfg.k_prime);
        if kp == 0 {
            return Err(Error::ConfigMismatch("K' must be at least 1".into()));
        }
        let max_point = (k * (kp - 1) + k) as u64;
        if cfg.q <= max_point {
            return Err(Error::FieldTooSmall { needed: max_point + 1, q: cfg.q });
        }
        let mut g = Vec::with_capacity(k);
        let mut xi = Vec::with_capacity(k);
        let mut h = Vec::with_capacity(k);
        for j in 1..=k {
            let start = ((j - 1) * (kp - 1) + 1) as u64;
            let points: Vec<u64> = (start..start + (kp - 1) as u64).collect();
            let gj = Matrix::vandermonde(field, &points, kp)?;
            let xi_point = (k * (kp - 1) + j) as u64;
            let xij = Matrix::vandermonde(field, &[xi_point], kp)?.col(0);
            let left = gj.left_null_space();
            if left.cols() != 1 {
                return Err(Error::ConditionViolated {
                    condition: 3,
                    detail: format!("G_{j} does not have a one-dimensional left null space"),
                });
            }
            let hj = left.col(0);
            g.push(gj);
            xi.push(xij);
            h.push(hj);
        }
        let family = UserGeneratorFamily { field, k, k_prime: kp, g, xi, h };
        family.check_condition_1()?;
        // stacked-family MDS (Condition 3); sampled confirmation above the
        // exhaustive bound happens in verify_conditions
        if k * (kp - 1) <= 20 {
            family.check_condition_3_global(0, 0)?;
        }
        Ok(family)
    }

    pub fn generator(&self, user: usize) -> &Matrix<Gf> {
        &self.g[user - 1]
    }

    pub fn auxiliary(&self, user: usize) -> &[u64] {
        &self.xi[user - 1]
    }

    pub fn dual(&self, user: usize) -> &[u64] {
        &self.h[user - 1]
    }

    fn check_condition_1(&self) -> Result<()> {
        for j in 1..=self.k {
            let stacked = self
                .generator(j)
                .hstack(&Matrix::from_cols(self.field, vec![self.xi[j - 1].clone()])?)?;
            if stacked.rank() != self.k_prime {
                return Err(Error::ConditionViolated {
                    condition: 1,
                    detail: format!("[G_{j} | xi_{j}] is rank deficient"),
                });
            }
        }
        Ok(())
    }

    fn stacked_all(&self) -> Result<Matrix<Gf>> {
        let mut acc = self.g[0].clone();
        for gj in &self.g[1..] {
            acc = acc.hstack(gj)?;
        }
        Ok(acc)
    }

    fn check_condition_3_global(&self, samples: usize, seed: u64) -> Result<()> {
        if self.k_prime == 1 {
            return Ok(()); // generators are empty; nothing to stack
        }
        self.stacked_all()?.verify_mds(20, samples, seed).map_err(|e| match e {
            Error::MdsViolation { columns } => Error::ConditionViolated {
                condition: 3,
                detail: format!("stacked family columns {columns:?} are dependent"),
            },
            other => other,
        })
    }

    /// Exhaustive condition suite: Condition 1, the global stacked MDS, and
    /// for every active set both the per-set stacked MDS and the φ
    /// construction (Condition 2 and uniqueness).
    pub fn verify_conditions(&self, samples: usize, seed: u64) -> Result<()> {
        self.check_condition_1()?;
        self.check_condition_3_global(samples, seed)?;
        for active in enumerate_subsets(&ground_set(self.k), self.k_prime)? {
            if self.k_prime > 1 {
                let mut acc = self.generator(active[0]).clone();
                for &j in &active[1..] {
                    acc = acc.hstack(self.generator(j))?;
                }
                acc.verify_mds(20, samples, seed).map_err(|e| match e {
                    Error::MdsViolation { columns } => Error::ConditionViolated {
                        condition: 3,
                        detail: format!("stack over I = {active:?}: columns {columns:?} dependent"),
                    },
                    other => other,
                })?;
            }
            compute_phi(self, &active)?;
        }
        Ok(())
    }

    pub fn summary(&self) -> FamilySummary {
        FamilySummary {
            q: self.field.modulus(),
            k: self.k,
            k_prime: self.k_prime,
            generator_points: (1..=self.k)
                .map(|j| {
                    let start = ((j - 1) * (self.k_prime - 1) + 1) as u64;
                    (start..start + (self.k_prime - 1) as u64).collect()
                })
                .collect(),
            auxiliary_points: (1..=self.k)
                .map(|j| (self.k * (self.k_prime - 1) + j) as u64)
                .collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FamilySummary {
    pub q: u64,
    pub k: usize,
    pub k_prime: usize,
    pub generator_points: Vec<Vec<u64>>,
    pub auxiliary_points: Vec<u64>,
}

/// The combining vectors for one active set.
pub struct PhiAssignment {
    pub active: Vec<usize>,
    /// (user j, φ_{I,j}) in active-set order.
    pub phi: Vec<(usize, Vec<u64>)>,
    /// ((v, j), x_{v,j}) with φ_{I,j} = G_v · x_{v,j} for v ∈ I \ {j}.
    pub witnesses: Vec<((usize, usize), Vec<u64>)>,
}

impl PhiAssignment {
    pub fn phi_for(&self, user: usize) -> Option<&[u64]> {
        self.phi.iter().find(|(u, _)| *u == user).map(|(_, v)| v.as_slice())
    }
}

/// φ_{I,j} = the null space of the stacked duals {h_v : v ∈ I\{j}}, which
/// must be one-dimensional; Condition 2 requires h_j·φ ≠ 0.
pub fn compute_phi(family: &UserGeneratorFamily, active: &[usize]) -> Result<PhiAssignment> {
    let field = family.field;
    if active.len() != family.k_prime {
        return Err(Error::ConfigMismatch(format!(
            "active set has {} users, K' = {}",
            active.len(),
            family.k_prime
        )));
    }
    let mut phi = Vec::with_capacity(active.len());
    let mut witnesses = Vec::new();
    for &j in active {
        let rows: Vec<Vec<u64>> = active
            .iter()
            .filter(|&&v| v != j)
            .map(|&v| family.dual(v).to_vec())
            .collect();
        let stacked = if rows.is_empty() {
            Matrix::zero(field, 0, family.k_prime)
        } else {
            Matrix::from_rows(field, rows)?
        };
        let ns = stacked.null_space();
        if ns.cols() != 1 {
            return Err(Error::DegeneratePhi(format!(
                "null space for user {j} in I = {active:?} has dimension {}",
                ns.cols()
            )));
        }
        let phi_j = ns.col(0);
        if field.dot(family.dual(j), &phi_j) == 0 {
            return Err(Error::DegeneratePhi(format!(
                "phi for user {j} in I = {active:?} falls inside colspan(G_{j})"
            )));
        }
        for &v in active.iter().filter(|&&v| v != j) {
            let x = family.generator(v).solve(&phi_j).map_err(|_| {
                Error::DegeneratePhi(format!("phi for user {j} not in colspan(G_{v})"))
            })?;
            witnesses.push(((v, j), x));
        }
        phi.push((j, phi_j));
    }
    Ok(PhiAssignment { active: active.to_vec(), phi, witnesses })
}

impl Scheme for NewScheme2 {
    fn id(&self) -> SchemeId {
        SchemeId::New2
    }

    fn validate(&self, cfg: &SchemeConfig) -> Result<()> {
        cfg.validate_basic()?;
        let max_point = (cfg.k * (cfg.k_prime - 1) + cfg.k) as u64;
        if cfg.q <= max_point {
            return Err(Error::FieldTooSmall { needed: max_point + 1, q: cfg.q });
        }
        Ok(())
    }

    fn subpacketization(&self, cfg: &SchemeConfig) -> Result<usize> {
        self.validate(cfg)?;
        Ok(cfg.k_prime)
    }

    fn place_with_keys(
        &self,
        cfg: &SchemeConfig,
        lib: &Library,
        keys: &[Vec<u64>],
    ) -> Result<Vec<CacheContent>> {
        self.validate(cfg)?;
        let family = UserGeneratorFamily::build(cfg)?;
        check_library(cfg, lib, cfg.k_prime)?;
        check_keys(cfg, keys)?;
        let field = family.field;
        let mut caches = Vec::with_capacity(cfg.k);
        for j in 1..=cfg.k {
            let p = keys[j - 1].clone();
            let gj = family.generator(j);
            let mut man = Vec::new();
            for l in 0..cfg.k_prime - 1 {
                let b = gj.col(l);
                for i in 0..cfg.n {
                    let functional = functional_of(&unit_vector(cfg.n, i), &b, &field);
                    man.push(CacheRecord::realize(functional, lib));
                }
            }
            let key_functional = functional_of(&p, family.auxiliary(j), &field);
            let key_records = vec![CacheRecord::realize(key_functional, lib)];
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
        let family = UserGeneratorFamily::build(cfg)?;
        let assignment = compute_phi(&family, active)?;
        let terms = assignment.phi.clone();
        Ok(DeliveryStructure {
            messages: vec![MessageStructure { subset: active.to_vec(), terms }],
            prune: PruneRule::SendAll,
        })
    }
}
