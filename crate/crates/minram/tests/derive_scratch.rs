// Scratch driver used to compute the frozen regression constants; prints
// everything the integration suites pin down.

use std::collections::BTreeSet;

use minram::field::FieldData;
use minram::group::{sgl3_group, NilpotentGroup, PcGroup};
use minram::scholz::{
    build_certificate, find_exceptional_set, find_scholz_abelian, ScholzConstraints,
};

fn h27() -> PcGroup {
    PcGroup::new(3, 3, vec![vec![], vec![], vec![]], vec![(1, 0, vec![(2, 1)])]).unwrap()
}

fn wreath() -> PcGroup {
    PcGroup::new(
        3,
        4,
        vec![vec![], vec![], vec![], vec![]],
        vec![(1, 0, vec![(2, 1)]), (2, 0, vec![(3, 1)])],
    )
    .unwrap()
}

#[test]
fn derive_constants() {
    let s0: BTreeSet<u64> = [3].into_iter().collect();
    let c = ScholzConstraints::single(3, 1, s0.clone());
    let (real, _) = find_scholz_abelian(&[3, 3], &c, 10_000_000).unwrap();
    println!("scholz (3,3) N=1 pair: {:?}", real.ramified_primes);

    let c3 = ScholzConstraints::single(3, 3, s0.clone());
    let (real, _) = find_scholz_abelian(&[3], &c3, 10_000_000).unwrap();
    println!("scholz (3) N=3: {:?}", real.ramified_primes);

    let q = FieldData::rationals();
    let cert = build_certificate(&NilpotentGroup::single(h27()).unwrap(), &q, 1_000_000).unwrap();
    println!(
        "H27/Q cert: total={:?} bound={} steps={:?}",
        cert.total_ramified,
        cert.bound,
        cert.steps
            .iter()
            .map(|s| (s.layer, format!("{:?}", s.justification), s.prime))
            .collect::<Vec<_>>()
    );

    let cert = build_certificate(
        &NilpotentGroup::single(sgl3_group(3, 3).unwrap()).unwrap(),
        &q,
        10_000_000,
    )
    .unwrap();
    println!("sgl3(3,3)/Q cert: total={:?} bound={}", cert.total_ramified, cert.bound);

    let cert = build_certificate(&NilpotentGroup::single(wreath()).unwrap(), &q, 10_000_000).unwrap();
    println!(
        "wreath/Q cert: total={:?} bound={} steps={:?}",
        cert.total_ramified,
        cert.bound,
        cert.steps
            .iter()
            .map(|s| (s.layer, format!("{:?}", s.justification), s.prime))
            .collect::<Vec<_>>()
    );

    let z5 = PcGroup::new(5, 1, vec![vec![]], vec![]).unwrap();
    let merged = NilpotentGroup::new(vec![h27(), z5]).unwrap();
    let cert = build_certificate(&merged, &q, 10_000_000).unwrap();
    println!(
        "H27 x Z5 cert: total={:?} bound={} steps={:?}",
        cert.total_ramified,
        cert.bound,
        cert.steps
            .iter()
            .map(|s| (s.layer, s.kernel_order, s.prime, s.conditions.len()))
            .collect::<Vec<_>>()
    );

    let k = FieldData::quadratic(-23).unwrap();
    let towers: BTreeSet<u64> = [3].into_iter().collect();
    let exc = find_exceptional_set(&k, &towers, 1, &BTreeSet::new(), 10_000_000).unwrap();
    println!(
        "exceptional -23 l=3 N=1: {:?}",
        exc.primes.iter().map(|p| (p.index, p.q)).collect::<Vec<_>>()
    );

    let cert = build_certificate(&NilpotentGroup::single(h27()).unwrap(), &k, 10_000_000).unwrap();
    println!(
        "H27/-23 cert: total={:?} bound={} formula={:?} steps={:?}",
        cert.total_ramified,
        cert.bound,
        cert.bound_formula,
        cert.steps
            .iter()
            .map(|s| (s.layer, format!("{:?}", s.justification), s.prime, s.conditions.len()))
            .collect::<Vec<_>>()
    );

    let k199 = FieldData::quadratic(-199).unwrap();
    let cert = build_certificate(&NilpotentGroup::single(h27()).unwrap(), &k199, 10_000_000).unwrap();
    println!(
        "H27/-199 fallback cert: total={:?} bound={} formula={:?} steps={:?}",
        cert.total_ramified,
        cert.bound,
        cert.bound_formula,
        cert.steps
            .iter()
            .map(|s| (s.layer, format!("{:?}", s.justification), s.prime, s.conditions.len()))
            .collect::<Vec<_>>()
    );

    let exc35 = find_exceptional_set(
        &FieldData::quadratic(-23).unwrap(),
        &[3, 5].into_iter().collect(),
        1,
        &BTreeSet::new(),
        10_000_000,
    )
    .unwrap();
    println!(
        "exceptional -23 l=3,5 N=1: {:?}",
        exc35.primes.iter().map(|p| (p.index, p.q)).collect::<Vec<_>>()
    );

    let poly19 = minram::cyclotomic::gaussian_period_poly(19, 9).unwrap();
    println!("period poly (19,9): {:?}", poly19.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
}
