//! Independent verification of constructed fields: exact discriminants,
//! ramified primes via the Dedekind criterion, and empirical
//! character-Frobenius agreement.
//!
//! Nothing here reuses the construction path: discriminants come from the
//! subresultant PRS, ramification from factoring mod p plus the index test,
//! and the Frobenius statistics from actual polynomial factorizations, so a
//! bad realization cannot certify itself.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, primes_from};
use crate::cyclotomic::{AbelianRealization, CyclicFieldSpec};
use crate::poly::{
    char_poly_of_element, discriminant, factor_degrees, squarefree_decomposition, ModPoly, Poly,
};
use crate::{Error, Result};

/// Exact discriminant of a monic squarefree integer polynomial.
pub fn poly_discriminant(f: &Poly) -> Result<BigInt> {
    discriminant(f)
}

/// The rational primes ramified in Q[x]/(f) for monic irreducible f.
///
/// For each p dividing disc(f), f mod p has a repeated factor; p ramifies
/// iff p divides the field discriminant. The Dedekind criterion decides
/// whether p divides the index [O_K : Z[x]]: if not, p ramifies. If it does,
/// quadratics are settled exactly via the fundamental discriminant and odd
/// p-valuation of disc(f) still forces ramification; anything else is
/// flagged inconclusive, never guessed.
pub fn ramified_primes(f: &Poly) -> Result<BTreeSet<u64>> {
    if !f.is_monic() {
        return Err(Error::Domain("ramification analysis needs a monic polynomial".into()));
    }
    if f.degree() == 0 {
        return Err(Error::Domain("constant polynomial".into()));
    }
    check_irreducible(f)?;
    let disc = discriminant(f)?;
    let mut primes: Vec<u64> = Vec::new();
    for p in factorize(&disc.abs())? {
        let p = u64::try_from(p).map_err(|_| {
            Error::Domain("discriminant prime exceeds u64 (outside desk scale)".into())
        })?;
        if primes.last() != Some(&p) {
            primes.push(p);
        }
    }
    let mut ramified = BTreeSet::new();
    for p in primes {
        if dedekind_ramified(f, p, &disc)? {
            ramified.insert(p);
        }
    }
    Ok(ramified)
}

/// Irreducibility screen: a single full-degree factor mod some good prime
/// certifies irreducibility; otherwise the intersection of possible factor
/// degrees over many primes plus a rational-root check must rule everything
/// out, else the result is flagged inconclusive.
fn check_irreducible(f: &Poly) -> Result<()> {
    let n = f.degree();
    if n == 1 {
        return Ok(());
    }
    // possible degrees of a monic factor, as a bitset
    let mut possible: u128 = !0u128;
    let mut tested = 0;
    for p in primes_from(2) {
        if tested >= 25 {
            break;
        }
        let fp = ModPoly::from_int_poly(f, p);
        if fp.degree() != n {
            continue;
        }
        let df = fp.derivative();
        if fp.gcd(&df).degree() != 0 {
            continue; // p | disc, skip
        }
        tested += 1;
        let degs = factor_degrees(&fp);
        if degs.len() == 1 {
            return Ok(());
        }
        // subset sums of the factor degrees
        let mut sums: u128 = 1;
        for d in degs {
            sums |= sums << d;
        }
        possible &= sums;
        let interior = possible & !(1u128 | (1u128 << n));
        if interior == 0 {
            return Ok(());
        }
    }
    // rational root check settles degree-1 factors
    if possible & 2 != 0 {
        let c0 = f.coeffs()[0].clone();
        if c0.is_zero() {
            return Err(Error::Domain("polynomial has the rational root 0".into()));
        }
        for div in factorize(&c0.abs())?
            .iter()
            .fold(vec![BigInt::one()], |mut acc, p| {
                let mut more = Vec::new();
                for a in &acc {
                    more.push(a * p);
                }
                acc.extend(more);
                acc
            })
        {
            for root in [div.clone(), -div.clone()] {
                if f.eval(&root).is_zero() {
                    return Err(Error::Domain(format!("polynomial has the rational root {root}")));
                }
            }
        }
    }
    let interior = possible & !(1u128 | (1u128 << n) | 2);
    if interior == 0 {
        Ok(())
    } else {
        Err(Error::Inconclusive(format!(
            "could not certify irreducibility of a degree-{n} polynomial"
        )))
    }
}

/// Dedekind's criterion at p for monic f with p | disc(f).
fn dedekind_ramified(f: &Poly, p: u64, disc: &BigInt) -> Result<bool> {
    let fp = ModPoly::from_int_poly(f, p);
    debug_assert_eq!(fp.degree(), f.degree());
    let decomposition = squarefree_decomposition(&fp);
    let repeated = decomposition.iter().any(|(_, m)| *m > 1);
    if !repeated {
        // impossible for p | disc of a monic polynomial; treat as unramified
        return Ok(false);
    }
    // radical g, cofactor h = f/g mod p
    let mut g = ModPoly::one(p);
    for (fac, _) in &decomposition {
        g = g.mul(fac);
    }
    let h = fp.exact_div(&g);
    // T = (lift(g) * lift(h) - f) / p over Z
    let g_lift = lift(&g);
    let h_lift = lift(&h);
    let gh = g_lift.mul(&h_lift);
    let t_coeffs: Vec<BigInt> = gh
        .coeffs()
        .iter()
        .zip(f.coeffs().iter().chain(std::iter::repeat(&BigInt::zero())))
        .map(|(a, b)| {
            let num = a - b;
            let (q, r) = num.div_rem(&BigInt::from(p));
            debug_assert!(r.is_zero(), "g*h = f (mod p) must hold");
            q
        })
        .collect();
    let t_bar = ModPoly::from_int_poly(&Poly::new(t_coeffs), p);
    let gcd1 = t_bar.gcd(&g);
    let gcd_full = gcd1.gcd(&h);
    if gcd_full.degree() == 0 {
        // p does not divide the index, so p | disc(f) means p | disc(K)
        return Ok(true);
    }
    // p divides the index [O_K : Z[theta]]
    if f.degree() == 2 {
        // settle exactly: field discriminant of Q(sqrt(disc))
        let d_k = fundamental_discriminant(disc);
        return Ok((&d_k % BigInt::from(p)).is_zero());
    }
    let mut v = 0u32;
    let mut rest = disc.abs();
    let pb = BigInt::from(p);
    while (&rest % &pb).is_zero() {
        rest /= &pb;
        v += 1;
    }
    if v % 2 == 1 {
        // odd valuation cannot be absorbed by the index square
        return Ok(true);
    }
    // Change the generator: if theta' = h(theta) generates the field and
    // Z[theta'] has p-free index, ramification is read off from disc of the
    // new minimal polynomial. A p-free discriminant settles it immediately.
    for h in generator_candidates() {
        let Ok(g) = char_poly_of_element(f, &h) else { continue };
        let Ok(disc_g) = discriminant(&g) else { continue };
        if !(&disc_g % &pb).is_zero() {
            return Ok(false);
        }
        let gp = ModPoly::from_int_poly(&g, p);
        if gp.degree() != g.degree() {
            continue;
        }
        if index_free_at_p(&g, p) {
            return Ok(true);
        }
    }
    Err(Error::Inconclusive(format!(
        "Dedekind criterion: p = {p} divides the index for every generator tried"
    )))
}

/// Deterministic small family of generator changes y -> h(y).
fn generator_candidates() -> Vec<Poly> {
    vec![
        Poly::from_i64(&[0, 0, 1]),     // y^2
        Poly::from_i64(&[0, 1, 1]),     // y^2 + y
        Poly::from_i64(&[0, -1, 1]),    // y^2 - y
        Poly::from_i64(&[0, 0, 0, 1]),  // y^3
        Poly::from_i64(&[0, 1, 0, 1]),  // y^3 + y
        Poly::from_i64(&[0, 0, 1, 1]),  // y^3 + y^2
        Poly::from_i64(&[0, 1, 2]),     // 2y^2 + y
        Poly::from_i64(&[0, 2, 1, 1]),  // y^3 + y^2 + 2y
        Poly::from_i64(&[0, -1, 1, 1]), // y^3 + y^2 - y
    ]
}

/// Basic Dedekind index test on a monic squarefree-mod-p polynomial: true
/// iff p does not divide [O_K : Z[root of g]].
fn index_free_at_p(g: &Poly, p: u64) -> bool {
    let gp = ModPoly::from_int_poly(g, p);
    let decomposition = squarefree_decomposition(&gp);
    let mut rad = ModPoly::one(p);
    for (fac, _) in &decomposition {
        rad = rad.mul(fac);
    }
    let cof = gp.exact_div(&rad);
    let rad_lift = lift(&rad);
    let cof_lift = lift(&cof);
    let gh = rad_lift.mul(&cof_lift);
    let t_coeffs: Vec<BigInt> = gh
        .coeffs()
        .iter()
        .zip(g.coeffs().iter().chain(std::iter::repeat(&BigInt::zero())))
        .map(|(a, b)| {
            let num = a - b;
            let (q, r) = num.div_rem(&BigInt::from(p));
            debug_assert!(r.is_zero());
            q
        })
        .collect();
    let t_bar = ModPoly::from_int_poly(&Poly::new(t_coeffs), p);
    t_bar.gcd(&rad).gcd(&cof).degree() == 0
}

fn lift(f: &ModPoly) -> Poly {
    Poly::new(f.coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

/// Fundamental discriminant attached to a nonzero integer: divide out the
/// largest square, then adjust to be = 0 or 1 mod 4.
fn fundamental_discriminant(d: &BigInt) -> BigInt {
    let mut sf = BigInt::one();
    let factors = factorize(&d.abs()).expect("positive integer");
    let mut i = 0;
    while i < factors.len() {
        if i + 1 < factors.len() && factors[i] == factors[i + 1] {
            i += 2;
        } else {
            sf *= &factors[i];
            i += 1;
        }
    }
    if d.is_negative() {
        sf = -sf;
    }
    if sf.mod_floor(&BigInt::from(4)).is_one() {
        sf
    } else {
        sf * 4
    }
}

/// Ramified primes of the field cut out by a cyclic field spec, with a
/// decisive fallback for common inessential discriminant divisors (primes
/// p < b that split completely divide every index, so no generator change
/// can help): verify the polynomial identity f(P(x)) = 0 mod Phi_q, where
/// P is the explicit Gaussian-period expression. A verified root inside
/// Q(mu_q) proves every p != q unramified (disc Phi_q = +/- q^(q-2)), and a
/// nontrivial everywhere-unramified field would contradict the Minkowski
/// bound, so the ramified set is exactly {q}.
pub fn ramified_primes_cyclic(spec: &CyclicFieldSpec) -> Result<BTreeSet<u64>> {
    let f = spec.poly();
    match ramified_primes(&f) {
        Ok(r) => Ok(r),
        Err(Error::Inconclusive(_)) => {
            if spec.degree < 2 {
                return Ok(BTreeSet::new());
            }
            verify_cyclotomic_membership(spec)?;
            Ok([spec.conductor].into_iter().collect())
        }
        Err(e) => Err(e),
    }
}

/// Check f(P(x)) = 0 (mod Phi_q) for P(x) = sum of x^t over the index-b
/// subgroup of (Z/q)^*; exact integer polynomial arithmetic throughout.
pub fn verify_cyclotomic_membership(spec: &CyclicFieldSpec) -> Result<()> {
    let q = spec.conductor;
    let b = spec.degree;
    let f = spec.poly();
    let phi_q = Poly::new(vec![BigInt::one(); q as usize]);
    // P = sum over H = <g^b> of x^t
    let g = crate::arith::primitive_root(q)?;
    let step = crate::arith::pow_mod(g, b, q);
    let mut coeffs = vec![BigInt::zero(); q as usize];
    let mut t = 1u64;
    loop {
        coeffs[t as usize] += BigInt::one();
        t = (t as u128 * step as u128 % q as u128) as u64;
        if t == 1 {
            break;
        }
    }
    let period = Poly::new(coeffs);
    // Horner evaluation of f at the period, reduced mod Phi_q
    let mut acc = Poly::zero();
    for c in f.coeffs().iter().rev() {
        acc = crate::poly::reduce_mod_monic_pub(&acc.mul(&period), &phi_q);
        acc = Poly::new(
            acc.coeffs()
                .iter()
                .enumerate()
                .map(|(i, v)| if i == 0 { v + c } else { v.clone() })
                .collect(),
        );
    }
    if acc.is_zero() {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "polynomial is not the minimal polynomial of the conductor-{q} period"
        )))
    }
}

/// Per-polynomial ramification data inside a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyReport {
    pub poly: Vec<String>,
    pub poly_disc: String,
    /// Conductor-discriminant value q^(b-1), present for fields this tool
    /// built.
    pub field_disc: Option<String>,
    pub ramified_primes: BTreeSet<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RamificationReport {
    pub per_polynomial: Vec<PolyReport>,
    pub ramified_primes: BTreeSet<u64>,
    pub expected: BTreeSet<u64>,
    pub verdict: bool,
    /// Factorization cycle types observed over p < 200, keyed like "1,1,3".
    pub frobenius_sample: BTreeMap<String, u32>,
}

/// Certify an abelian realization: each factor field must ramify exactly at
/// its conductor, the union must have size d, and the conductor-discriminant
/// value must divide the polynomial discriminant.
pub fn verify_realization(real: &AbelianRealization) -> Result<RamificationReport> {
    let mut per_polynomial = Vec::new();
    let mut union = BTreeSet::new();
    let mut verdict = true;
    let mut frobenius_sample = BTreeMap::new();
    for spec in &real.specs {
        let f = spec.poly();
        let disc = poly_discriminant(&f)?;
        let ram = ramified_primes_cyclic(spec)?;
        let field_disc = BigInt::from(spec.conductor).pow(spec.degree as u32 - 1);
        if !(&disc % &field_disc).is_zero() {
            verdict = false;
        }
        if ram != [spec.conductor].into_iter().collect::<BTreeSet<u64>>() {
            verdict = false;
        }
        union.extend(ram.iter().copied());
        per_polynomial.push(PolyReport {
            poly: spec.defining_poly.clone(),
            poly_disc: disc.to_string(),
            field_disc: Some(field_disc.to_string()),
            ramified_primes: ram,
        });
        let stats = frobenius_statistics(spec, 200)?;
        for (k, v) in stats.pattern_counts {
            *frobenius_sample.entry(k).or_insert(0) += v;
        }
        if stats.mismatches != 0 {
            verdict = false;
        }
    }
    let expected = real.ramified_primes.clone();
    if union != expected || union.len() != real.invariant_factors.len() {
        verdict = false;
    }
    Ok(RamificationReport {
        per_polynomial,
        ramified_primes: union,
        expected,
        verdict,
        frobenius_sample,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrobeniusReport {
    pub conductor: u64,
    pub degree: u64,
    pub primes_tested: u32,
    /// Primes whose factorization pattern disagreed with the character
    /// order; must be zero.
    pub mismatches: u32,
    pub split_count: u32,
    pub split_density: f64,
    pub pattern_counts: BTreeMap<String, u32>,
}

/// Factor the defining polynomial mod every prime p < bound (p != q) and
/// compare the residue degrees against the order of chi(p). An empirical
/// Chebotarev check: the split density should approach 1/b.
pub fn frobenius_statistics(spec: &CyclicFieldSpec, bound: u64) -> Result<FrobeniusReport> {
    if bound < 100 {
        return Err(Error::Domain("statistics need bound >= 100".into()));
    }
    let f = spec.poly();
    let q = spec.conductor;
    let b = spec.degree;
    let primes: Vec<u64> = primes_from(2).take_while(|&p| p < bound).filter(|&p| p != q).collect();
    let rows: Vec<(u64, Vec<usize>, u64)> = primes
        .par_iter()
        .map(|&p| {
            let fp = ModPoly::from_int_poly(&f, p);
            let degs = factor_degrees(&fp);
            let ord = spec.character.value_order(p).expect("p != q");
            (p, degs, ord)
        })
        .collect();
    let mut mismatches = 0;
    let mut split_count = 0;
    let mut pattern_counts: BTreeMap<String, u32> = BTreeMap::new();
    for (_, degs, ord) in &rows {
        let expected: Vec<usize> = std::iter::repeat(*ord as usize)
            .take((b / ord) as usize)
            .collect();
        if degs != &expected {
            mismatches += 1;
        }
        if *ord == 1 {
            split_count += 1;
        }
        let key = degs
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",");
        *pattern_counts.entry(key).or_insert(0) += 1;
    }
    let primes_tested = rows.len() as u32;
    Ok(FrobeniusReport {
        conductor: q,
        degree: b,
        primes_tested,
        mismatches,
        split_count,
        split_density: split_count as f64 / primes_tested as f64,
        pattern_counts,
    })
}

/// Ramified primes of an arbitrary user polynomial plus its discriminant —
/// the `certify` surface for polynomials this tool did not build (no
/// conductor-discriminant claims).
pub fn analyze_polynomial(coeffs: &[BigInt]) -> Result<PolyReport> {
    let f = Poly::new(coeffs.to_vec());
    let disc = poly_discriminant(&f)?;
    let ram = ramified_primes(&f)?;
    Ok(PolyReport {
        poly: f.coeffs().iter().map(|c| c.to_string()).collect(),
        poly_disc: disc.to_string(),
        field_disc: None,
        ramified_primes: ram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn discriminant_examples() {
        let f = Poly::from_i64(&[-1, -2, 1, 1]);
        assert_eq!(poly_discriminant(&f).unwrap(), BigInt::from(49));
        let f = Poly::from_i64(&[1, 0, 1]);
        assert_eq!(poly_discriminant(&f).unwrap(), BigInt::from(-4));
        let f = Poly::from_i64(&[1, 1]);
        assert_eq!(poly_discriminant(&f).unwrap(), BigInt::from(1));
    }

    #[test]
    fn ramified_prime_examples() {
        // x^3 + x^2 - 2x - 1: disc 49, ramified exactly at 7
        let f = Poly::from_i64(&[-1, -2, 1, 1]);
        assert_eq!(ramified_primes(&f).unwrap(), [7].into_iter().collect());
        // x^2 + 1: ramified at 2
        let f = Poly::from_i64(&[1, 0, 1]);
        assert_eq!(ramified_primes(&f).unwrap(), [2].into_iter().collect());
        // x^2 - 5: disc 20, but 2 divides the index; field disc is 5
        let f = Poly::from_i64(&[-5, 0, 1]);
        assert_eq!(ramified_primes(&f).unwrap(), [5].into_iter().collect());
        // x^2 - 2: disc 8, field disc 8: 2 ramifies
        let f = Poly::from_i64(&[-2, 0, 1]);
        assert_eq!(ramified_primes(&f).unwrap(), [2].into_iter().collect());
        // reducible inputs are rejected
        let f = Poly::from_i64(&[-1, 0, 1]);
        assert!(ramified_primes(&f).is_err());
    }

    #[test]
    fn fundamental_discriminants() {
        assert_eq!(fundamental_discriminant(&BigInt::from(20)), BigInt::from(5));
        assert_eq!(fundamental_discriminant(&BigInt::from(8)), BigInt::from(8));
        assert_eq!(fundamental_discriminant(&BigInt::from(-4)), BigInt::from(-4));
        assert_eq!(fundamental_discriminant(&BigInt::from(-23)), BigInt::from(-23));
        assert_eq!(fundamental_discriminant(&BigInt::from(12)), BigInt::from(12));
    }

    #[test]
    fn verify_3_9_realization() {
        let real = crate::cyclotomic::realize_abelian(&[3, 9], None, 1_000_000).unwrap();
        let report = verify_realization(&real).unwrap();
        assert!(report.verdict);
        assert_eq!(report.ramified_primes, [7, 19].into_iter().collect());
        // per-factor checks
        assert_eq!(report.per_polynomial[0].ramified_primes, [7].into_iter().collect());
        assert_eq!(report.per_polynomial[1].ramified_primes, [19].into_iter().collect());
        assert_eq!(report.per_polynomial[1].field_disc.as_deref(), Some("16983563041"));
        // tampering flips the verdict
        let mut bad = real.clone();
        bad.ramified_primes = [7].into_iter().collect();
        let report = verify_realization(&bad).unwrap();
        assert!(!report.verdict);
    }

    #[test]
    fn gaussian_periods_ramify_only_at_conductor() {
        for (q, b) in [(7u64, 3u64), (19, 9), (13, 4), (31, 5), (3, 2)] {
            let spec = CyclicFieldSpec::new(q, b).unwrap();
            assert_eq!(
                ramified_primes_cyclic(&spec).unwrap(),
                [q].into_iter().collect(),
                "q={q} b={b}"
            );
        }
        // membership check rejects a tampered polynomial
        let mut spec = CyclicFieldSpec::new(13, 4).unwrap();
        spec.defining_poly[0] = "4".into();
        assert!(verify_cyclotomic_membership(&spec).is_err());
    }

    #[test]
    fn frobenius_statistics_7_3() {
        let spec = CyclicFieldSpec::new(7, 3).unwrap();
        let report = frobenius_statistics(&spec, 200).unwrap();
        assert_eq!(report.mismatches, 0);
        assert!((report.split_density - 1.0 / 3.0).abs() < 0.15);
        // split exactly at p = +/-1 mod 7
        for p in primes_from(2).take_while(|&p| p < 200) {
            if p == 7 {
                continue;
            }
            let split = p % 7 == 1 || p % 7 == 6;
            let ord = spec.character.value_order(p).unwrap();
            assert_eq!(ord == 1, split, "p={p}");
        }
        assert!(frobenius_statistics(&spec, 50).is_err());
    }
}
