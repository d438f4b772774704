//! Library-side command runners for the `minram` binary, plus shared JSON
//! helpers. The binary only parses arguments and dispatches here, so every
//! behavior is available (and tested) as a library call.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::certify::{frobenius_statistics, verify_realization, RamificationReport};
use crate::cyclotomic::{realize_abelian, AbelianRealization};
use crate::field::{FieldData, FieldDataJson};
use crate::group::{boston_bound, paper_bound, GroupJson, NilpotentGroup};
use crate::scholz::{
    build_certificate, check_scholz_abelian, find_exceptional_set, find_scholz_abelian,
    verify_certificate, ExceptionalSet, ScholzCertificate, ScholzConstraints, VerifyReport,
};
use crate::{Result, SCHEMA};

/// Serialize BigInt as a decimal string so JSON stays exact and readable.
pub mod bigint_string {
    use super::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        BigInt::from_str(&text).map_err(serde::de::Error::custom)
    }
}

/// Envelope for all CLI output: schema tag, the echoed inputs, the payload,
/// and the elapsed wall time. The payload alone is the deterministic part.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommandResult {
    pub schema: String,
    pub command: String,
    pub inputs: Value,
    pub payload: Value,
    pub elapsed_ms: u64,
}

pub fn run_command(command: &str, inputs: Value, f: impl FnOnce() -> Result<Value>) -> Result<CommandResult> {
    let start = Instant::now();
    let payload = f()?;
    Ok(CommandResult {
        schema: SCHEMA.to_string(),
        command: command.to_string(),
        inputs,
        payload,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

pub fn bound_payload(group: &GroupJson, field: &FieldDataJson) -> Result<Value> {
    let g = NilpotentGroup::from_json(group)?;
    let f = FieldData::from_json(field)?;
    let report = paper_bound(&g, &f)?;
    let boston = boston_bound(&g);
    let series: Value = g
        .sylow_series()
        .iter()
        .map(|(l, r)| (l.to_string(), serde_json::to_value(r).unwrap()))
        .collect::<serde_json::Map<String, Value>>()
        .into();
    Ok(json!({
        "order": g.order().to_string(),
        "series": series,
        "tower_plan": g.tower_plan(),
        "paper_bound": report,
        "boston_bound": boston,
    }))
}

pub fn realize_abelian_payload(
    factors: &[u64],
    scholz: Option<(u64, u32)>,
    limit: u64,
) -> Result<Value> {
    let (realization, scholz_report) = match scholz {
        None => (realize_abelian(factors, None, limit)?, None),
        Some((l, n)) => {
            let constraints = ScholzConstraints::single(l, n, [l].into_iter().collect());
            let (real, report) = find_scholz_abelian(factors, &constraints, limit)?;
            (real, Some(report))
        }
    };
    let certification = verify_realization(&realization)?;
    Ok(json!({
        "realization": realization,
        "certification": certification,
        "scholz_report": scholz_report,
    }))
}

pub fn certificate_payload(group: &GroupJson, field: &FieldDataJson, limit: u64) -> Result<ScholzCertificate> {
    let g = NilpotentGroup::from_json(group)?;
    let f = FieldData::from_json(field)?;
    build_certificate(&g, &f, limit)
}

pub fn exceptional_set_payload(
    field: &FieldDataJson,
    primes: &[u64],
    n: u32,
    limit: u64,
) -> Result<ExceptionalSet> {
    let f = FieldData::from_json(field)?;
    let towers: BTreeSet<u64> = primes.iter().copied().collect();
    find_exceptional_set(&f, &towers, n, &BTreeSet::new(), limit)
}

pub fn scholz_search_payload(factors: &[u64], n: u32, limit: u64) -> Result<Value> {
    // S_0 = the primes of the tower (over Q the class number is 1, so no
    // class-representative primes enter).
    let mut towers = BTreeSet::new();
    for &f in factors {
        let mut rest = f;
        let mut d = 2;
        while d * d <= rest {
            if rest % d == 0 {
                towers.insert(d);
                while rest % d == 0 {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            towers.insert(rest);
        }
    }
    let constraints = ScholzConstraints {
        tower_primes: towers.clone(),
        n,
        s0: towers,
        ramified: BTreeSet::new(),
    };
    let (realization, report) = find_scholz_abelian(factors, &constraints, limit)?;
    Ok(json!({
        "realization": realization,
        "conditions": report,
    }))
}

pub fn certify_payload(realization: &AbelianRealization) -> Result<RamificationReport> {
    verify_realization(realization)
}

pub fn verify_payload(cert: &ScholzCertificate) -> Result<VerifyReport> {
    verify_certificate(cert)
}

pub fn frobenius_payload(conductor: u64, degree: u64, bound: u64) -> Result<Value> {
    let spec = crate::cyclotomic::CyclicFieldSpec::new(conductor, degree)?;
    let report = frobenius_statistics(&spec, bound)?;
    Ok(serde_json::to_value(report).unwrap())
}

/// Re-check an explicit realization against single-l Scholz constraints.
pub fn scholz_check_payload(real: &AbelianRealization, l: u64, n: u32) -> Result<Value> {
    let constraints = ScholzConstraints::single(l, n, [l].into_iter().collect());
    let report = check_scholz_abelian(real, &constraints)?;
    Ok(serde_json::to_value(report).unwrap())
}
