//! Central tower plans, nilpotent groups as products of their Sylow
//! subgroups, and the ramification bounds.
//!
//! A tower plan decomposes the realization of G into layers following the
//! lower central series: layer 1 realizes G^ab as a split extension (one
//! ramified prime per cyclic factor), layers 2..c-1 are cyclic Frattini
//! steps costing one extra prime each, and layer c is free (the final
//! solution need not satisfy the Scholz conditions, so removing ramification
//! suffices). The predicted count d(G) + sum_(i=2..c-1) d(G_i/G_(i+1)) is
//! exactly the bound the certificates must realize.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::pcgroup::{PcGroup, PcGroupJson, ENUMERATION_LIMIT};
use super::series::{series_report, SeriesReport};
use crate::field::FieldData;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Split,
    Frattini,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerStep {
    pub layer: usize,
    pub kind: StepKind,
    /// Cyclic kernel orders of this layer, ascending invariant factors.
    pub kernel_cyclic_orders: Vec<u64>,
    /// True exactly for layers 2..c-1; layer 1 primes are the base d(G)
    /// conductors and layer c needs no new prime.
    pub costs_extra_prime: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralTowerPlan {
    pub steps: Vec<TowerStep>,
    pub predicted_prime_count: u32,
}

fn plan_from_layers(layer_invariants: &[Vec<u64>]) -> CentralTowerPlan {
    let c = layer_invariants.len();
    let mut steps = Vec::new();
    let mut predicted = 0u32;
    for (idx, kernels) in layer_invariants.iter().enumerate() {
        let layer = idx + 1;
        let costs = layer >= 2 && layer <= c.saturating_sub(1);
        if layer == 1 {
            predicted += kernels.len() as u32;
        } else if costs {
            predicted += kernels.len() as u32;
        }
        steps.push(TowerStep {
            layer,
            kind: if layer == 1 { StepKind::Split } else { StepKind::Frattini },
            kernel_cyclic_orders: kernels.clone(),
            costs_extra_prime: costs,
        });
    }
    CentralTowerPlan {
        steps,
        predicted_prime_count: predicted,
    }
}

/// Tower plan for a single l-group.
pub fn central_tower_plan(g: &PcGroup) -> Result<CentralTowerPlan> {
    let report = series_report(g)?;
    Ok(plan_from_layers(&report.kernel_invariants))
}

/// A nilpotent group as the product of its Sylow subgroups (distinct odd
/// primes; the trivial group is the empty product).
#[derive(Debug, Clone)]
pub struct NilpotentGroup {
    sylows: BTreeMap<u64, PcGroup>,
    series: BTreeMap<u64, SeriesReport>,
}

/// JSON wire form: a single pc-presentation or {"sylows": [...]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupJson {
    Product { sylows: Vec<PcGroupJson> },
    Single(PcGroupJson),
}

impl NilpotentGroup {
    pub fn new(sylows: Vec<PcGroup>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut series = BTreeMap::new();
        for g in sylows {
            if g.num_gens() == 0 {
                continue;
            }
            let l = g.prime();
            if map.contains_key(&l) {
                return Err(Error::Domain(format!("two Sylow subgroups for the prime {l}")));
            }
            series.insert(l, series_report(&g)?);
            map.insert(l, g);
        }
        Ok(NilpotentGroup {
            sylows: map,
            series,
        })
    }

    pub fn single(g: PcGroup) -> Result<Self> {
        NilpotentGroup::new(vec![g])
    }

    pub fn from_json(json: &GroupJson) -> Result<Self> {
        match json {
            GroupJson::Single(pc) => NilpotentGroup::single(PcGroup::from_json(pc)?),
            GroupJson::Product { sylows } => NilpotentGroup::new(
                sylows
                    .iter()
                    .map(PcGroup::from_json)
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson::Product {
            sylows: self.sylows.values().map(|g| g.to_json()).collect(),
        }
    }

    pub fn sylows(&self) -> &BTreeMap<u64, PcGroup> {
        &self.sylows
    }

    pub fn sylow_series(&self) -> &BTreeMap<u64, SeriesReport> {
        &self.series
    }

    pub fn is_trivial(&self) -> bool {
        self.sylows.is_empty()
    }

    pub fn order(&self) -> BigInt {
        let mut o = BigInt::one();
        for g in self.sylows.values() {
            o *= BigInt::from(g.order());
        }
        o
    }

    /// Product of the primes dividing |G| (the paper's a).
    pub fn radical(&self) -> u64 {
        self.sylows.keys().product()
    }

    pub fn primes(&self) -> Vec<u64> {
        self.sylows.keys().copied().collect()
    }

    /// Minimal N with exponent(G) dividing a^N componentwise: max over l of
    /// v_l(exponent of the Sylow l-subgroup).
    pub fn exponent_n(&self) -> u32 {
        self.series
            .iter()
            .map(|(l, r)| {
                let mut n = 0u32;
                let mut e = r.exponent;
                while e > 1 {
                    e /= l;
                    n += 1;
                }
                n
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_abelian(&self) -> bool {
        self.series.values().all(|r| r.class_c <= 1)
    }

    /// Nilpotency class: max over the Sylow subgroups.
    pub fn class_c(&self) -> usize {
        self.series.values().map(|r| r.class_c).max().unwrap_or(0)
    }

    /// d(G) = max over l of d(G_l) (coprime direct product).
    pub fn d(&self) -> u32 {
        self.series.values().map(|r| r.d).max().unwrap_or(0)
    }

    /// d(G_i/G_(i+1)) for the product group: max over l (zero past c_l).
    pub fn layer_rank(&self, layer: usize) -> u32 {
        self.series
            .values()
            .map(|r| {
                if layer <= r.class_c {
                    r.quotient_ranks[layer - 1]
                } else {
                    0
                }
            })
            .max()
            .unwrap_or(0)
    }

    /// Invariant factors of G_i/G_(i+1) for the product group: the per-l
    /// factor lists aligned largest-with-largest and multiplied.
    pub fn layer_invariants(&self, layer: usize) -> Vec<u64> {
        let rank = self.layer_rank(layer) as usize;
        let mut factors_desc = vec![1u64; rank];
        for r in self.series.values() {
            if layer > r.class_c {
                continue;
            }
            let invs = &r.kernel_invariants[layer - 1];
            for (t, &f) in invs.iter().rev().enumerate() {
                factors_desc[t] *= f;
            }
        }
        factors_desc.reverse();
        factors_desc
    }

    /// Merged tower plan over all Sylow subgroups.
    pub fn tower_plan(&self) -> CentralTowerPlan {
        let c = self.class_c();
        let layers: Vec<Vec<u64>> = (1..=c).map(|i| self.layer_invariants(i)).collect();
        plan_from_layers(&layers)
    }

    /// Sum over the middle layers of d(G_i/G_(i+1)).
    pub fn middle_layer_sum(&self) -> u32 {
        let c = self.class_c();
        (2..c).map(|i| self.layer_rank(i)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFormula {
    /// Theorem-level exact value for abelian groups: d(G).
    AbelianExact,
    /// d(G) + (r+s) + sum of middle-layer ranks.
    Standard,
    /// max_l n_l + (r+s), used when some ideal class has order l^2.
    Fallback,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: u32,
    pub formula: BoundFormula,
    pub d: u32,
    pub middle_layer_sum: u32,
    pub r: u32,
    pub s: u32,
    pub per_l_rank: BTreeMap<u64, u32>,
}

/// The minimal-ramification upper bound for G over the field described by
/// `field`: d(G) for abelian G, d(G) + (r+s) + sum_(i=2..c-1) d(G_i/G_(i+1))
/// in general, degrading to max_l n_l + (r+s) when K has an ideal class of
/// order l^2 for some l dividing |G|. Nonabelian G requires
/// gcd(|G|, |mu_K|) = 1.
pub fn paper_bound(g: &NilpotentGroup, field: &FieldData) -> Result<BoundReport> {
    let s = field.unit_rank();
    let mut per_l_rank = BTreeMap::new();
    for &l in &g.primes() {
        per_l_rank.insert(l, field.l_rank(l));
    }
    let r = per_l_rank.values().copied().max().unwrap_or(0);
    let d = g.d();
    if g.is_abelian() {
        return Ok(BoundReport {
            bound: d,
            formula: BoundFormula::AbelianExact,
            d,
            middle_layer_sum: 0,
            r,
            s,
            per_l_rank,
        });
    }
    let mu = field.torsion_order();
    for &l in &g.primes() {
        if mu % l == 0 {
            return Err(Error::TorsionClash { l });
        }
    }
    let fallback = g.primes().iter().any(|&l| field.has_order_l2_class(l));
    if fallback {
        let max_n = g
            .sylows()
            .values()
            .map(|syl| syl.num_gens() as u32)
            .max()
            .unwrap_or(0);
        return Ok(BoundReport {
            bound: max_n + r + s,
            formula: BoundFormula::Fallback,
            d,
            middle_layer_sum: g.middle_layer_sum(),
            r,
            s,
            per_l_rank,
        });
    }
    let middle = g.middle_layer_sum();
    Ok(BoundReport {
        bound: d + r + s + middle,
        formula: BoundFormula::Standard,
        d,
        middle_layer_sum: middle,
        r,
        s,
        per_l_rank,
    })
}

/// Boston's conjectural value max(1, d(G^ab)).
pub fn boston_bound(g: &NilpotentGroup) -> u32 {
    g.d().max(1)
}

/// The family of Theorem-level central extensions by the Schur multiplicator:
/// relatively free groups on n generators with x_i^l = 1 and all commutators
/// central.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sgl3Family {
    pub n: u32,
    pub l: u64,
    /// Ramified-prime count of the minimal realization.
    pub expected_ram: u32,
    /// Degree of the central class field over the abelian layer: l^(n(n-1)/2).
    #[serde(with = "crate::cli::bigint_string")]
    pub center_order: BigInt,
    /// The multiplicator of G/Z(G) is elementary abelian of this rank and is
    /// isomorphic to the center.
    pub multiplicator_rank: u32,
    pub multiplicator_structure: String,
}

pub fn sgl3_family(n: u32, l: u64) -> Result<Sgl3Family> {
    if n < 1 {
        return Err(Error::Domain(format!("family needs n >= 1, got {n}")));
    }
    if !crate::arith::is_prime_u64(l) || l == 2 {
        return Err(Error::Domain(format!("family needs an odd prime, got {l}")));
    }
    let rank = n * (n - 1) / 2;
    Ok(Sgl3Family {
        n,
        l,
        expected_ram: n,
        center_order: BigInt::from(l).pow(rank),
        multiplicator_rank: rank,
        multiplicator_structure: if rank == 0 {
            "trivial".to_string()
        } else {
            format!("(Z/{l})^{rank}")
        },
    })
}

/// The concrete group of the family, when it fits the engine.
pub fn sgl3_group(n: u32, l: u64) -> Result<PcGroup> {
    let family = sgl3_family(n, l)?;
    let gens = (family.n + family.multiplicator_rank) as usize;
    let mut order = BigInt::one();
    for _ in 0..gens {
        order *= BigInt::from(l);
    }
    if order > BigInt::from(ENUMERATION_LIMIT) {
        return Err(Error::Domain(format!(
            "group of order {order} exceeds the enumeration limit"
        )));
    }
    let powers = vec![vec![]; gens];
    let mut commutators = Vec::new();
    let mut z_index = family.n as usize;
    for i in 0..family.n as usize {
        for j in (i + 1)..family.n as usize {
            commutators.push((j, i, vec![(z_index, 1i64)]));
            z_index += 1;
        }
    }
    PcGroup::new(l, gens, powers, commutators)
}
