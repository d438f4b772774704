//! Scholz-condition machinery: governing fields, exceptional sets, the
//! split/Frattini prime searches, and machine-checkable certificates.
//!
//! Every search condition this module imposes is recorded as a [`Condition`]
//! — a congruence or a power-residue assertion with concrete operands — so a
//! verifier can replay the entire construction with pure arithmetic.

mod abelian;
mod certificate;

pub use abelian::{check_scholz_abelian, find_scholz_abelian, frattini_step_prime, ConditionReport, FrattiniStep};
pub use certificate::{build_certificate, per_l_restriction, verify_certificate, CertStep, Justification, ScholzCertificate, VerifyReport};

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, legendre, power_residue_u64, primes_from};
use crate::field::FieldData;
use crate::quadfield::{ideal_power_generator, QuadField};
use crate::{Error, Result};

/// The ambient constraints for Scholz searches: the tower primes (all l
/// dividing the group order), the global exponent N (l^N is divisible by the
/// exponent of every Sylow subgroup), the base set S_0 of rational primes
/// with prescribed trivial decomposition, and the primes ramified so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScholzConstraints {
    pub tower_primes: BTreeSet<u64>,
    pub n: u32,
    pub s0: BTreeSet<u64>,
    pub ramified: BTreeSet<u64>,
}

impl ScholzConstraints {
    pub fn single(l: u64, n: u32, s0: BTreeSet<u64>) -> Self {
        ScholzConstraints {
            tower_primes: [l].into_iter().collect(),
            n,
            s0,
            ramified: BTreeSet::new(),
        }
    }

    /// prod over tower primes of l^N; the merged congruence modulus.
    pub fn congruence_modulus(&self) -> u64 {
        self.tower_primes
            .iter()
            .map(|l| l.pow(self.n))
            .product::<u64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CondKind {
    Congruence,
    PowerResidue,
}

/// One replayable arithmetic assertion.
///
/// * congruence: args = [value, residue, modulus], asserting
///   value = residue (mod modulus);
/// * power_residue: args = [a, m, q], asserting that a is an m-th power
///   residue mod q iff `holds`;
/// * power_residue with args = [x, y, m, q]: the base is the quadratic
///   integer x + y*omega, mapped into the residue field at the fixed prime
///   above q first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub kind: CondKind,
    pub args: Vec<i64>,
    pub holds: bool,
}

impl Condition {
    pub fn congruence(value: u64, residue: u64, modulus: u64) -> Self {
        let holds = value % modulus == residue % modulus;
        Condition {
            kind: CondKind::Congruence,
            args: vec![value as i64, residue as i64, modulus as i64],
            holds,
        }
    }

    pub fn residue(a: i64, m: u64, q: u64) -> Result<Self> {
        let holds = power_residue_u64(a, m, q)?;
        Ok(Condition {
            kind: CondKind::PowerResidue,
            args: vec![a, m as i64, q as i64],
            holds,
        })
    }

    pub fn quad_residue(field: &QuadField, x: i64, y: i64, m: u64, q: u64) -> Result<Self> {
        let img = field.residue_class(&BigInt::from(x), &BigInt::from(y), q)?;
        let holds = power_residue_u64(img as i64, m, q)?;
        Ok(Condition {
            kind: CondKind::PowerResidue,
            args: vec![x, y, m as i64, q as i64],
            holds,
        })
    }

    /// Re-evaluate the assertion from its operands.
    pub fn evaluate(&self, quad: Option<&QuadField>) -> Result<bool> {
        match self.kind {
            CondKind::Congruence => {
                let [value, residue, modulus] = self.args[..] else {
                    return Err(Error::Verification(
                        "congruence condition needs 3 args".into(),
                    ));
                };
                if modulus <= 0 {
                    return Err(Error::Verification("congruence modulus must be positive".into()));
                }
                Ok(value.rem_euclid(modulus) == residue.rem_euclid(modulus))
            }
            CondKind::PowerResidue => match self.args[..] {
                [a, m, q] => {
                    if m <= 0 || q <= 0 {
                        return Err(Error::Verification("bad power_residue args".into()));
                    }
                    power_residue_u64(a, m as u64, q as u64)
                }
                [x, y, m, q] => {
                    let field = quad.ok_or_else(|| {
                        Error::Verification(
                            "quadratic-integer condition in a certificate without a quadratic field"
                                .into(),
                        )
                    })?;
                    let img = field.residue_class(&BigInt::from(x), &BigInt::from(y), q as u64)?;
                    power_residue_u64(img as i64, m as u64, q as u64)
                }
                _ => Err(Error::Verification("power_residue condition needs 3 or 4 args".into())),
            },
        }
    }
}

/// Kummer data of the governing field Omega_l = K(mu_(l^N), l^N-th roots of
/// units, l-th roots of the a_j): over Q both generator families are empty;
/// over imaginary quadratic K the units contribute only torsion (s = 0) and
/// the a_j are generators of l-th powers of an l-torsion basis of the class
/// group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerGenerator {
    pub x: i64,
    pub y: i64,
    pub norm: u64,
    pub root_exponent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoverningFieldDescription {
    pub l: u64,
    pub n: u32,
    pub kummer_generators: Vec<KummerGenerator>,
}

impl GoverningFieldDescription {
    pub fn rank(&self) -> u32 {
        self.kummer_generators.len() as u32
    }
}

/// Describe Omega_l for the given field. Errors when zeta_l lies in K.
pub fn governing_field(field: &FieldData, l: u64, n: u32) -> Result<GoverningFieldDescription> {
    if !is_prime_u64(l) || l == 2 {
        return Err(Error::Domain(format!("governing field needs an odd prime, got {l}")));
    }
    if n == 0 {
        return Err(Error::Domain("exponent N must be >= 1".into()));
    }
    if field.torsion_order() % l == 0 {
        return Err(Error::TorsionClash { l });
    }
    match field {
        FieldData::Rationals => Ok(GoverningFieldDescription {
            l,
            n,
            kummer_generators: vec![],
        }),
        FieldData::Quadratic(cl) => {
            let mut kummer_generators = Vec::new();
            for form in cl.l_torsion_basis(l) {
                let gen = ideal_power_generator(cl, &form, l)?;
                kummer_generators.push(KummerGenerator {
                    x: gen.x,
                    y: gen.y,
                    norm: gen.norm,
                    root_exponent: l,
                });
            }
            Ok(GoverningFieldDescription {
                l,
                n,
                kummer_generators,
            })
        }
        FieldData::Custom { .. } => Err(Error::Domain(
            "governing-field data is only computed over Q and imaginary quadratic fields".into(),
        )),
    }
}

/// One exceptional prime with its replay-verified Frobenius conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalPrime {
    /// 1-based index j: the j-th Kummer generator is a non-residue here,
    /// every other one is a residue.
    pub index: usize,
    pub q: u64,
    pub conditions: Vec<Condition>,
}

/// The combined exceptional set T across all tower primes: |T| = s + max r_l
/// primes, each split in K and in K(mu_(a^N)), with the prescribed diagonal
/// residue pattern on the Kummer generators of every governing field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalSet {
    pub primes: Vec<ExceptionalPrime>,
    pub r: u32,
    pub s: u32,
    pub per_l_rank: BTreeMap<u64, u32>,
    pub governing: BTreeMap<u64, GoverningFieldDescription>,
}

impl ExceptionalSet {
    pub fn empty() -> Self {
        ExceptionalSet {
            primes: vec![],
            r: 0,
            s: 0,
            per_l_rank: BTreeMap::new(),
            governing: BTreeMap::new(),
        }
    }

    pub fn prime_values(&self) -> BTreeSet<u64> {
        self.primes.iter().map(|p| p.q).collect()
    }
}

/// The condition list for the index-j exceptional prime at q (deterministic;
/// shared between search and replay).
pub fn exceptional_prime_conditions(
    quad: &QuadField,
    governing: &BTreeMap<u64, GoverningFieldDescription>,
    modulus: u64,
    index: usize,
    q: u64,
) -> Result<Vec<Condition>> {
    let mut conds = Vec::new();
    conds.push(Condition::congruence(q, 1, modulus));
    // split in K: D a square mod q
    conds.push(Condition::residue(quad.discriminant(), 2, q)?);
    for (_, gov) in governing.iter() {
        for (k, gen) in gov.kummer_generators.iter().enumerate() {
            conds.push(Condition::quad_residue(
                quad,
                gen.x,
                gen.y,
                gov.l,
                q,
            )?);
            let _ = k;
        }
    }
    let _ = index;
    Ok(conds)
}

/// Required truth pattern matching [`exceptional_prime_conditions`]: all true
/// except the diagonal generator (global position `index`) which must be a
/// non-residue.
pub fn exceptional_required_pattern(
    governing: &BTreeMap<u64, GoverningFieldDescription>,
    index: usize,
) -> Vec<bool> {
    let mut pattern = vec![true, true]; // congruence, split-in-K
    for (_, gov) in governing.iter() {
        for k in 0..gov.kummer_generators.len() {
            pattern.push(k + 1 != index);
        }
    }
    pattern
}

/// Search for the combined exceptional set. Over Q the set is empty; over an
/// imaginary quadratic field the j-th prime is the least prime, outside
/// `avoid` and the previously chosen ones, that splits completely in
/// K(mu_(a^N)) and realizes the diagonal pattern on the Kummer generators.
pub fn find_exceptional_set(
    field: &FieldData,
    tower_primes: &BTreeSet<u64>,
    n: u32,
    avoid: &BTreeSet<u64>,
    limit: u64,
) -> Result<ExceptionalSet> {
    if field.is_rationals() {
        return Ok(ExceptionalSet::empty());
    }
    let quad = field
        .quad()
        .ok_or_else(|| Error::Domain("exceptional sets are computed over Q and imaginary quadratic fields".into()))?;
    let mut governing = BTreeMap::new();
    let mut per_l_rank = BTreeMap::new();
    for &l in tower_primes {
        let gov = governing_field(field, l, n)?;
        per_l_rank.insert(l, gov.rank());
        governing.insert(l, gov);
    }
    let r = per_l_rank.values().copied().max().unwrap_or(0);
    let s = field.unit_rank(); // 0 over imaginary quadratic
    debug_assert_eq!(s, 0);
    let modulus: u64 = tower_primes.iter().map(|l| l.pow(n)).product();
    let mut primes = Vec::new();
    let mut chosen: BTreeSet<u64> = BTreeSet::new();
    for index in 1..=(r as usize) {
        let pattern = exceptional_required_pattern(&governing, index);
        let mut found = None;
        for q in primes_from(2).take_while(|&q| q <= limit) {
            if q % modulus != 1 || avoid.contains(&q) || chosen.contains(&q) {
                continue;
            }
            if legendre(quad.field.discriminant(), q) != 1 {
                continue;
            }
            let conds =
                exceptional_prime_conditions(&quad.field, &governing, modulus, index, q)?;
            if conds.iter().map(|c| c.holds).eq(pattern.iter().copied()) {
                found = Some(ExceptionalPrime {
                    index,
                    q,
                    conditions: conds,
                });
                break;
            }
        }
        let prime = found.ok_or(Error::SearchLimit {
            what: format!("exceptional prime (index {index})"),
            bound: limit,
        })?;
        chosen.insert(prime.q);
        primes.push(prime);
    }
    Ok(ExceptionalSet {
        primes,
        r,
        s,
        per_l_rank,
        governing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn governing_over_q_is_empty() {
        let q = FieldData::rationals();
        let gov = governing_field(&q, 3, 2).unwrap();
        assert!(gov.kummer_generators.is_empty());
        assert_eq!(gov.rank(), 0);
    }

    #[test]
    fn governing_over_minus_23() {
        let k = FieldData::quadratic(-23).unwrap();
        let gov = governing_field(&k, 3, 1).unwrap();
        assert_eq!(gov.rank(), 1);
        let gen = &gov.kummer_generators[0];
        assert_eq!(gen.norm, 8);
        assert_eq!(gen.root_exponent, 3);
        assert_eq!((gen.x, gen.y), (-2, 1));
    }

    #[test]
    fn governing_torsion_clash() {
        let k = FieldData::quadratic(-3).unwrap();
        assert!(matches!(
            governing_field(&k, 3, 1),
            Err(Error::TorsionClash { l: 3 })
        ));
        // l = 5 over Q(sqrt(-3)) is fine
        assert!(governing_field(&k, 5, 1).is_ok());
    }

    #[test]
    fn exceptional_set_over_q_is_empty() {
        let q = FieldData::rationals();
        for primes in [vec![3u64], vec![3, 5], vec![7]] {
            for n in 1..=2 {
                let set = find_exceptional_set(
                    &q,
                    &primes.iter().copied().collect(),
                    n,
                    &BTreeSet::new(),
                    1_000_000,
                )
                .unwrap();
                assert!(set.primes.is_empty());
                assert_eq!(set.r, 0);
            }
        }
    }

    #[test]
    fn exceptional_set_minus_23() {
        let k = FieldData::quadratic(-23).unwrap();
        let towers: BTreeSet<u64> = [3].into_iter().collect();
        let set = find_exceptional_set(&k, &towers, 1, &BTreeSet::new(), 1_000_000).unwrap();
        assert_eq!(set.r, 1);
        assert_eq!(set.primes.len(), 1);
        let p = &set.primes[0];
        // conditions: q = 1 mod 3, D square mod q, a_1 not a cube at q
        assert_eq!(p.conditions.len(), 3);
        assert!(p.conditions[0].holds && p.conditions[1].holds);
        assert!(!p.conditions[2].holds);
        assert_eq!(p.q % 3, 1);
        // replay every condition
        let quad = k.quad().unwrap().field;
        for c in &p.conditions {
            assert_eq!(c.evaluate(Some(&quad)).unwrap(), c.holds);
        }
    }

    #[test]
    fn exceptional_set_merged_3_5() {
        let k = FieldData::quadratic(-23).unwrap();
        let towers: BTreeSet<u64> = [3, 5].into_iter().collect();
        let set = find_exceptional_set(&k, &towers, 1, &BTreeSet::new(), 10_000_000).unwrap();
        // r = max(r_3, r_5) = max(1, 0) = 1, merged congruence mod 15
        assert_eq!(set.r, 1);
        assert_eq!(set.per_l_rank[&3], 1);
        assert_eq!(set.per_l_rank[&5], 0);
        assert_eq!(set.primes.len(), 1);
        let p = &set.primes[0];
        assert_eq!(p.q % 15, 1);
        assert_eq!(p.conditions[0].args[2], 15);
    }

    #[test]
    fn condition_evaluation() {
        let c = Condition::congruence(19, 1, 9);
        assert!(c.holds);
        assert!(c.evaluate(None).unwrap());
        let c = Condition::residue(2, 3, 31).unwrap();
        assert!(c.holds);
        let c = Condition::residue(2, 5, 31).unwrap();
        assert!(!c.holds);
        assert!(!c.evaluate(None).unwrap());
        // tampered args change the verdict
        let mut c = Condition::residue(2, 3, 31).unwrap();
        c.args[0] = 3; // 3 is not a cube mod 31
        assert!(!c.evaluate(None).unwrap());
    }
}
