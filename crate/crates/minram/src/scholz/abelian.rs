//! Scholz-condition checks for abelian layers and the Frattini-step prime
//! search.
//!
//! The abelian layer over Q is a composite of cyclic fields of prime
//! conductor; the Scholz conditions there reduce to (i) conductor
//! congruences mod l^N, (ii) mutual splitting between the factor fields
//! (power-residue symmetry between conductors), and (iii) trivial
//! decomposition at S_0 (every S_0 prime splits completely in every factor).
//! A middle-layer Frattini step chooses the least prime at which every
//! S-unit of Q for S = S_0 u Ram u T is an l^e-th power residue and which is
//! 1 mod the merged congruence modulus; that is the splits-completely
//! condition in the Kummer closure the existence lemmas consume.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::{is_prime_u64, legendre};
use crate::cyclotomic::{realize_abelian, AbelianRealization};
use crate::field::FieldData;
use crate::quadfield::QuadField;
use crate::{Error, Result};

use super::{Condition, ExceptionalSet, ScholzConstraints};

/// Pass/fail report of individually listed conditions.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ConditionReport {
    pub conditions: Vec<Condition>,
    pub all_pass: bool,
}

/// Congruence modulus for a conductor of cyclic factor order b: the product
/// of l^N over tower primes l dividing b.
pub fn factor_modulus(b: u64, c: &ScholzConstraints) -> u64 {
    let mut m = 1u64;
    for &l in &c.tower_primes {
        if b % l == 0 {
            m *= l.pow(c.n);
        }
    }
    m
}

/// The full Scholz condition list for an abelian realization over Q,
/// evaluated condition by condition:
///
/// (i) every conductor is 1 mod its factor's congruence modulus;
/// (ii) for every ordered pair i != j, q_i is a b_j-th power residue mod q_j
///      (q_i splits completely in the other factor fields);
/// (iii) every finite S_0 prime is a b_j-th power residue mod q_j.
pub fn check_scholz_abelian(
    real: &AbelianRealization,
    c: &ScholzConstraints,
) -> Result<ConditionReport> {
    let bs = &real.invariant_factors;
    let qs: Vec<u64> = real.specs.iter().map(|s| s.conductor).collect();
    let mut conditions = Vec::new();
    for (i, &q) in qs.iter().enumerate() {
        conditions.push(Condition::congruence(q, 1, factor_modulus(bs[i], c)));
    }
    for (i, &qi) in qs.iter().enumerate() {
        for (j, &qj) in qs.iter().enumerate() {
            if i == j {
                continue;
            }
            conditions.push(Condition::residue(qi as i64, bs[j], qj)?);
        }
    }
    for &s in &c.s0 {
        for (j, &qj) in qs.iter().enumerate() {
            if s == qj {
                conditions.push(Condition {
                    kind: super::CondKind::PowerResidue,
                    args: vec![s as i64, bs[j] as i64, qj as i64],
                    holds: false,
                });
            } else {
                conditions.push(Condition::residue(s as i64, bs[j], qj)?);
            }
        }
    }
    let all_pass = conditions.iter().all(|c| c.holds);
    Ok(ConditionReport {
        conditions,
        all_pass,
    })
}

/// Realize an abelian l-group (or, in merged mode, a product over the tower
/// primes) with the Scholz conditions threaded into the conductor scan, then
/// re-verify the result in full.
pub fn find_scholz_abelian(
    factors: &[u64],
    c: &ScholzConstraints,
    limit: u64,
) -> Result<(AbelianRealization, ConditionReport)> {
    let real = realize_abelian(factors, Some(c), limit)?;
    let report = check_scholz_abelian(&real, c)?;
    if !report.all_pass {
        return Err(Error::Verification(
            "scan produced a realization that fails its own Scholz re-check".into(),
        ));
    }
    Ok((real, report))
}

/// Everything a step-condition generator needs besides the step's own data.
pub struct PlannerContext<'a> {
    pub constraints: &'a ScholzConstraints,
    pub quad: Option<&'a QuadField>,
    pub exceptional: &'a ExceptionalSet,
}

impl<'a> PlannerContext<'a> {
    pub fn new(
        field: &'a FieldData,
        constraints: &'a ScholzConstraints,
        exceptional: &'a ExceptionalSet,
    ) -> Self {
        PlannerContext {
            constraints,
            quad: field.quad().map(|cl| &cl.field),
            exceptional,
        }
    }

    fn t_primes(&self) -> Vec<u64> {
        self.exceptional.prime_values().into_iter().collect()
    }
}

/// Deterministic condition list for the idx-th split-layer conductor, given
/// all conductors (mutual conditions are attached to the later step).
pub fn split_step_conditions(
    ctx: &PlannerContext,
    invariants: &[u64],
    conductors: &[u64],
    idx: usize,
) -> Result<Vec<Condition>> {
    let b = invariants[idx];
    let q = conductors[idx];
    let c = ctx.constraints;
    let mut conds = vec![Condition::congruence(q, 1, factor_modulus(b, c))];
    if let Some(quad) = ctx.quad {
        conds.push(Condition::residue(quad.discriminant(), 2, q)?);
    }
    for &s in &c.s0 {
        conds.push(Condition::residue(s as i64, b, q)?);
    }
    for j in 0..idx {
        conds.push(Condition::residue(conductors[j] as i64, b, q)?);
        conds.push(Condition::residue(q as i64, invariants[j], conductors[j])?);
    }
    for t in ctx.t_primes() {
        conds.push(Condition::residue(t as i64, b, q)?);
    }
    if let Some(quad) = ctx.quad {
        for gov in ctx.exceptional.governing.values() {
            for gen in &gov.kummer_generators {
                conds.push(Condition::quad_residue(quad, gen.x, gen.y, gov.l, q)?);
            }
        }
    }
    Ok(conds)
}

/// Deterministic condition list for a Frattini repair prime q serving the
/// given active towers (l -> kernel exponent e, meaning kernel order l^e).
pub fn frattini_step_conditions(
    ctx: &PlannerContext,
    active: &BTreeMap<u64, u32>,
    ramified: &BTreeSet<u64>,
    q: u64,
) -> Result<Vec<Condition>> {
    let c = ctx.constraints;
    let mut conds = vec![Condition::congruence(q, 1, c.congruence_modulus())];
    if let Some(quad) = ctx.quad {
        conds.push(Condition::residue(quad.discriminant(), 2, q)?);
    }
    for (&l, &e) in active {
        let le = l.pow(e);
        conds.push(Condition::residue(-1, le, q)?);
        for &s in &c.s0 {
            conds.push(Condition::residue(s as i64, le, q)?);
        }
        for &u in ramified {
            conds.push(Condition::residue(u as i64, le, q)?);
        }
        for t in ctx.t_primes() {
            conds.push(Condition::residue(t as i64, le, q)?);
        }
    }
    if let Some(quad) = ctx.quad {
        for gov in ctx.exceptional.governing.values() {
            for gen in &gov.kummer_generators {
                conds.push(Condition::quad_residue(quad, gen.x, gen.y, gov.l, q)?);
            }
        }
    }
    Ok(conds)
}

#[derive(Debug, Clone)]
pub struct FrattiniStep {
    pub prime: u64,
    pub conditions: Vec<Condition>,
}

/// Least prime outside S = S_0 u Ram u T (and `avoid`) satisfying the merged
/// congruence and the full residue family of the active towers.
pub fn frattini_step_prime(
    ctx: &PlannerContext,
    active: &BTreeMap<u64, u32>,
    ramified: &BTreeSet<u64>,
    avoid: &BTreeSet<u64>,
    limit: u64,
) -> Result<FrattiniStep> {
    let c = ctx.constraints;
    for (&l, &e) in active {
        if e > c.n {
            return Err(Error::Domain(format!(
                "kernel exponent {l}^{e} exceeds l^N with N = {}",
                c.n
            )));
        }
    }
    let modulus = c.congruence_modulus();
    let t_set = ctx.exceptional.prime_values();
    let mut q = 1 + modulus;
    while q <= limit {
        if is_prime_u64(q)
            && !c.s0.contains(&q)
            && !ramified.contains(&q)
            && !t_set.contains(&q)
            && !avoid.contains(&q)
            && ctx.quad.map_or(true, |k| legendre(k.discriminant(), q) == 1)
        {
            let conds = frattini_step_conditions(ctx, active, ramified, q)?;
            if conds.iter().all(|c| c.holds) {
                return Ok(FrattiniStep {
                    prime: q,
                    conditions: conds,
                });
            }
        }
        q += modulus;
    }
    Err(Error::SearchLimit {
        what: format!("Frattini repair prime for towers {:?}", active),
        bound: limit,
    })
}
