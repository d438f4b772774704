//! Dirichlet characters, Gaussian-period minimal polynomials, and explicit
//! abelian realizations over Q.
//!
//! The degree-b subfield of Q(mu_q), q prime with q = 1 (mod b), is generated
//! by the Gaussian period eta = sum of zeta_q^t over the index-b subgroup H
//! of (Z/q)^*. Its minimal polynomial is computed exactly: periods are
//! integer vectors of zeta-power coefficients, products are index-addition
//! convolutions, power sums are reduced with sum_i zeta^i = 0, and the
//! characteristic polynomial comes out of Newton's identities with an
//! integrality check at every division.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, pow_mod, primitive_root};
use crate::poly::Poly;
use crate::scholz::ScholzConstraints;
use crate::{Error, Result};

/// A character (Z/q)^* -> mu_b of prime conductor q and exact order b,
/// defined by chi(g^k) = zeta_b^k for the least primitive root g.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletCharacter {
    pub conductor: u64,
    pub order: u64,
    pub generator: u64,
}

impl DirichletCharacter {
    pub fn new(conductor: u64, order: u64) -> Result<Self> {
        if !is_prime_u64(conductor) {
            return Err(Error::Domain(format!("conductor {conductor} must be prime")));
        }
        if order == 0 || (conductor - 1) % order != 0 {
            return Err(Error::Domain(format!(
                "order {order} must divide q-1 = {}",
                conductor - 1
            )));
        }
        Ok(DirichletCharacter {
            conductor,
            order,
            generator: primitive_root(conductor)?,
        })
    }

    /// chi(n) as the exponent k with chi(n) = zeta_b^k, via a baby-step
    /// giant-step discrete index against the stored primitive root.
    pub fn value(&self, n: u64) -> Result<u64> {
        let q = self.conductor;
        let n = n % q;
        if n == 0 {
            return Err(Error::Domain(format!("q = {q} divides the argument")));
        }
        let dlog = bsgs_dlog(self.generator, n, q).expect("primitive root generates");
        Ok(dlog % self.order)
    }

    /// Multiplicative order of chi(n) in mu_b.
    pub fn value_order(&self, n: u64) -> Result<u64> {
        let k = self.value(n)?;
        Ok(self.order / self.order.gcd(&k))
    }
}

/// Discrete log of h base g mod prime q (baby-step giant-step).
fn bsgs_dlog(g: u64, h: u64, q: u64) -> Option<u64> {
    let m = (q as f64).sqrt().ceil() as u64 + 1;
    let mut table = std::collections::HashMap::new();
    let mut cur = 1u64;
    for j in 0..m {
        table.entry(cur).or_insert(j);
        cur = (cur as u128 * g as u128 % q as u128) as u64;
    }
    // g^(-m)
    let gm_inv = pow_mod(pow_mod(g, m, q), q - 2, q);
    let mut gamma = h % q;
    for i in 0..=m {
        if let Some(&j) = table.get(&gamma) {
            return Some((i * m + j) % (q - 1));
        }
        gamma = (gamma as u128 * gm_inv as u128 % q as u128) as u64;
    }
    None
}

/// A conductor-q, degree-b cyclic field: character plus Gaussian-period
/// defining polynomial (monic, irreducible; field discriminant q^(b-1)).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicFieldSpec {
    pub conductor: u64,
    pub degree: u64,
    pub character: DirichletCharacter,
    /// Coefficients ascending (constant term first); monic.
    pub defining_poly: Vec<String>,
}

impl CyclicFieldSpec {
    pub fn new(conductor: u64, degree: u64) -> Result<Self> {
        let character = DirichletCharacter::new(conductor, degree)?;
        let poly = gaussian_period_poly(conductor, degree)?;
        Ok(CyclicFieldSpec {
            conductor,
            degree,
            character,
            defining_poly: poly.coeffs().iter().map(|c| c.to_string()).collect(),
        })
    }

    pub fn poly(&self) -> Poly {
        Poly::new(
            self.defining_poly
                .iter()
                .map(|s| s.parse::<BigInt>().expect("stored coefficient"))
                .collect(),
        )
    }
}

/// Exact minimal polynomial of the Gaussian period of degree b and prime
/// conductor q (requires b | q-1). Coefficients ascending.
pub fn gaussian_period_poly(q: u64, b: u64) -> Result<Poly> {
    if !is_prime_u64(q) {
        return Err(Error::Domain(format!("conductor {q} must be prime")));
    }
    if b == 0 || (q - 1) % b != 0 {
        return Err(Error::Domain(format!("degree {b} must divide q-1 = {}", q - 1)));
    }
    let g = primitive_root(q)?;
    let qs = q as usize;
    // eta_0 = sum over H = <g^b> of zeta^t, as a coefficient vector.
    let mut eta0 = vec![BigInt::zero(); qs];
    {
        let step = pow_mod(g, b, q);
        let mut t = 1u64;
        loop {
            eta0[t as usize] += BigInt::one();
            t = (t as u128 * step as u128 % q as u128) as u64;
            if t == 1 {
                break;
            }
        }
    }
    // Galois action zeta -> zeta^(g^j) permutes indices; summing eta_0^k over
    // the b automorphisms gives the k-th power sum of all periods.
    let mut power_sums: Vec<BigInt> = vec![BigInt::zero()]; // p_0 unused
    let mut cur = eta0.clone();
    for k in 1..=b {
        if k > 1 {
            cur = convolve_mod_q(&cur, &eta0, qs);
        }
        let mut total = vec![BigInt::zero(); qs];
        let mut gj = 1u64;
        for _ in 0..b {
            for (t, coeff) in cur.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let idx = (t as u128 * gj as u128 % q as u128) as usize;
                total[idx] += coeff;
            }
            gj = (gj as u128 * g as u128 % q as u128) as u64;
        }
        power_sums.push(rational_value(&total)?);
    }
    // Newton's identities: k e_k = sum_(i=1..k) (-1)^(i-1) e_(k-i) p_i.
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=b as usize {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &power_sums[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(Error::Domain(
                "Newton's identities produced a non-integral coefficient".into(),
            ));
        }
        e.push(quot);
    }
    // f(x) = prod (x - eta_j) = sum (-1)^k e_k x^(b-k)
    let mut coeffs = vec![BigInt::zero(); b as usize + 1];
    for (k, ek) in e.iter().enumerate() {
        let sign = if k % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        coeffs[b as usize - k] = sign * ek;
    }
    Ok(Poly::new(coeffs))
}

/// A vector is a rational integer iff all coefficients of zeta^1..zeta^(q-1)
/// agree; the value is then c_0 - c_1 (using 1 + zeta + ... + zeta^(q-1) = 0).
fn rational_value(v: &[BigInt]) -> Result<BigInt> {
    let c = &v[1];
    if v.iter().skip(2).any(|x| x != c) {
        return Err(Error::Domain(
            "Galois-stable sum failed to be rational (internal invariant)".into(),
        ));
    }
    Ok(&v[0] - c)
}

/// Cyclic convolution of zeta-coefficient vectors (index addition mod q).
fn convolve_mod_q(a: &[BigInt], b: &[BigInt], q: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); q];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let idx = (i + j) % q;
            out[idx] += ai * bj;
        }
    }
    out
}

/// Least prime q not in `avoid` with q = 1 (mod b) and q = 1 (mod m) for
/// every extra modulus m.
pub fn find_conductor(
    b: u64,
    avoid: &BTreeSet<u64>,
    extra_congruence: &[u64],
    limit: u64,
) -> Result<u64> {
    if b < 2 {
        return Err(Error::Domain(format!("cyclic factor order must be >= 2, got {b}")));
    }
    let mut modulus = b;
    for &m in extra_congruence {
        modulus = modulus.lcm(&m);
    }
    let mut q = 1 + modulus;
    while q <= limit {
        if is_prime_u64(q) && !avoid.contains(&q) {
            return Ok(q);
        }
        q += modulus;
    }
    Err(Error::SearchLimit {
        what: format!("prime = 1 (mod {modulus}) avoiding {avoid:?}"),
        bound: limit,
    })
}

/// An abelian group realized as a composite of cyclic fields of pairwise
/// distinct prime conductors: exactly d primes ramify.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianRealization {
    /// Invariant factors, ascending (b_1 | b_2 | ... | b_d).
    pub invariant_factors: Vec<u64>,
    pub specs: Vec<CyclicFieldSpec>,
    pub ramified_primes: BTreeSet<u64>,
}

/// Canonicalize an arbitrary factor list into invariant factors (ascending).
pub fn invariant_factors(factors: &[u64]) -> Result<Vec<u64>> {
    let mut nontrivial: Vec<u64> = factors.iter().copied().filter(|&f| f > 1).collect();
    if nontrivial.is_empty() {
        return Err(Error::Domain("abelian group must be nontrivial".into()));
    }
    nontrivial.sort_unstable();
    // per-prime power parts, each sorted descending
    let mut per_prime: Vec<(u64, Vec<u64>)> = Vec::new();
    for &f in &nontrivial {
        let parts = crate::arith::factorize(&BigInt::from(f))?;
        let mut i = 0;
        while i < parts.len() {
            let p = u64::try_from(parts[i].clone()).unwrap();
            let mut power = 1u64;
            while i < parts.len() && parts[i] == BigInt::from(p) {
                power *= p;
                i += 1;
            }
            match per_prime.iter_mut().find(|(pp, _)| *pp == p) {
                Some((_, list)) => list.push(power),
                None => per_prime.push((p, vec![power])),
            }
        }
    }
    for (_, list) in per_prime.iter_mut() {
        list.sort_unstable_by(|a, b| b.cmp(a));
    }
    let d = per_prime.iter().map(|(_, l)| l.len()).max().unwrap();
    let mut desc = vec![1u64; d];
    for (_, list) in &per_prime {
        for (t, &part) in list.iter().enumerate() {
            desc[t] *= part;
        }
    }
    desc.reverse();
    Ok(desc)
}

/// Realize a finite abelian group over Q. Conductors are chosen as the least
/// qualifying primes, factor by factor (ascending invariant factors); with
/// Scholz constraints the congruence q = 1 (mod l^N per prime l dividing the
/// factor) and the mutual power-residue conditions are threaded into the
/// scan.
pub fn realize_abelian(
    factors: &[u64],
    constraints: Option<&ScholzConstraints>,
    limit: u64,
) -> Result<AbelianRealization> {
    let invariants = invariant_factors(factors)?;
    if let Some(c) = constraints {
        for &b in &invariants {
            if b % 2 == 0 {
                return Err(Error::Domain(format!(
                    "Scholz mode requires odd factor orders, got {b}"
                )));
            }
            let mut rest = b;
            while rest > 1 {
                let p = smallest_prime_factor(rest);
                if !c.tower_primes.contains(&p) {
                    return Err(Error::Domain(format!(
                        "factor {b} involves prime {p} outside the Scholz tower set {:?}",
                        c.tower_primes
                    )));
                }
                while rest % p == 0 {
                    rest /= p;
                }
            }
        }
    }
    let mut chosen: Vec<u64> = Vec::new();
    let mut specs = Vec::new();
    for (idx, &b) in invariants.iter().enumerate() {
        let avoid: BTreeSet<u64> = chosen.iter().copied().collect();
        let q = match constraints {
            None => find_conductor(b, &avoid, &[], limit)?,
            Some(c) => scan_scholz_conductor(b, idx, &invariants, &chosen, c, limit)?,
        };
        chosen.push(q);
        specs.push(CyclicFieldSpec::new(q, b)?);
    }
    Ok(AbelianRealization {
        invariant_factors: invariants,
        specs,
        ramified_primes: chosen.into_iter().collect(),
    })
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

/// The Scholz-threaded conductor scan for factor b_idx: congruence
/// q = 1 (mod prod_(l | b) l^N), every prime of S_0 a b-th power residue at
/// q, and mutual splitting with all previously chosen conductors.
fn scan_scholz_conductor(
    b: u64,
    idx: usize,
    invariants: &[u64],
    chosen: &[u64],
    c: &ScholzConstraints,
    limit: u64,
) -> Result<u64> {
    let mut modulus = b;
    let mut rest = b;
    while rest > 1 {
        let p = smallest_prime_factor(rest);
        modulus = modulus.lcm(&p.pow(c.n));
        while rest % p == 0 {
            rest /= p;
        }
    }
    let mut q = 1 + modulus;
    while q <= limit {
        if is_prime_u64(q) && !chosen.contains(&q) && !c.s0.contains(&q) {
            let mut ok = true;
            // S_0 primes split completely in the new factor field.
            for &p in &c.s0 {
                if p != q && !crate::arith::power_residue_u64(p as i64, b, q)? {
                    ok = false;
                    break;
                }
            }
            // mutual splitting with earlier conductors
            if ok {
                for (j, &qj) in chosen.iter().enumerate() {
                    let bj = invariants[j];
                    if !crate::arith::power_residue_u64(qj as i64, b, q)?
                        || !crate::arith::power_residue_u64(q as i64, bj, qj)?
                    {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(q);
            }
        }
        q += modulus;
    }
    Err(Error::SearchLimit {
        what: format!("Scholz conductor for factor {b} (index {idx})"),
        bound: limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductor_scan() {
        let none = BTreeSet::new();
        assert_eq!(find_conductor(9, &none, &[], 1_000_000).unwrap(), 19);
        assert_eq!(find_conductor(3, &none, &[], 1_000_000).unwrap(), 7);
        let avoid: BTreeSet<u64> = [19].into_iter().collect();
        assert_eq!(find_conductor(3, &avoid, &[], 1_000_000).unwrap(), 7);
        // extra congruence modulus 9 forces q = 1 (mod 9)
        assert_eq!(find_conductor(3, &none, &[9], 1_000_000).unwrap(), 19);
        assert_eq!(find_conductor(2, &none, &[], 1_000_000).unwrap(), 3);
        // limit failure is loud
        assert!(matches!(
            find_conductor(9, &none, &[], 10),
            Err(Error::SearchLimit { .. })
        ));
    }

    #[test]
    fn period_poly_7_3() {
        let f = gaussian_period_poly(7, 3).unwrap();
        // x^3 + x^2 - 2x - 1
        assert_eq!(
            f.coeffs(),
            &[
                BigInt::from(-1),
                BigInt::from(-2),
                BigInt::from(1),
                BigInt::from(1)
            ]
        );
    }

    #[test]
    fn period_poly_b_equals_1() {
        // the period over the whole group is -1, so the polynomial is x + 1
        let f = gaussian_period_poly(7, 1).unwrap();
        assert_eq!(f.coeffs(), &[BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn period_poly_quadratic_subfield() {
        // degree-2 subfield of Q(mu_3) is Q(sqrt(-3)): x^2 + x + 1
        let f = gaussian_period_poly(3, 2).unwrap();
        assert_eq!(f.coeffs(), &[BigInt::one(), BigInt::one(), BigInt::one()]);
        // degree-2 subfield of Q(mu_5) is Q(sqrt(5)): x^2 + x - 1
        let f = gaussian_period_poly(5, 2).unwrap();
        assert_eq!(f.coeffs(), &[BigInt::from(-1), BigInt::one(), BigInt::one()]);
        // full cyclotomic polynomial when b = q - 1
        let f = gaussian_period_poly(7, 6).unwrap();
        assert_eq!(f.coeffs().len(), 7);
        assert!(f.coeffs().iter().all(|c| c.is_one()));
    }

    /// Independent route: expand prod_j (x - eta_j) directly with polynomial
    /// coefficients living in Z[zeta], then read off rational coefficients.
    fn period_poly_by_product(q: u64, b: u64) -> Poly {
        let g = primitive_root(q).unwrap();
        let qs = q as usize;
        let mut periods: Vec<Vec<BigInt>> = Vec::new();
        for j in 0..b {
            let mut v = vec![BigInt::zero(); qs];
            let step = pow_mod(g, b, q);
            let start = pow_mod(g, j, q);
            let mut t = start;
            loop {
                v[t as usize] += BigInt::one();
                t = (t as u128 * step as u128 % q as u128) as u64;
                if t == start {
                    break;
                }
            }
            periods.push(v);
        }
        // poly coefficients in Z[zeta]: start with [1]
        let mut coeffs: Vec<Vec<BigInt>> = vec![{
            let mut one = vec![BigInt::zero(); qs];
            one[0] = BigInt::one();
            one
        }];
        for eta in &periods {
            // multiply by (x - eta)
            let mut next: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); qs]; coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                // x * c
                for (i, v) in c.iter().enumerate() {
                    next[k + 1][i] += v;
                }
                // -eta * c
                let prod = convolve_mod_q(c, eta, qs);
                for (i, v) in prod.iter().enumerate() {
                    next[k][i] -= v;
                }
            }
            coeffs = next;
        }
        Poly::new(
            coeffs
                .iter()
                .map(|v| rational_value(v).expect("coefficient must be rational"))
                .collect(),
        )
    }

    #[test]
    fn newton_route_matches_product_route() {
        for (q, b) in [(7u64, 3u64), (7, 2), (11, 5), (13, 3), (13, 4), (19, 9), (19, 3), (31, 5)] {
            assert_eq!(
                gaussian_period_poly(q, b).unwrap(),
                period_poly_by_product(q, b),
                "q={q} b={b}"
            );
        }
    }

    #[test]
    fn character_values() {
        // chi of order 3 mod 7 with g = 3: chi(3) = 1, chi(6) = 0 (6 = 3^3),
        // chi(1) = 0.
        let chi = DirichletCharacter::new(7, 3).unwrap();
        assert_eq!(chi.generator, 3);
        assert_eq!(chi.value(3).unwrap(), 1);
        assert_eq!(chi.value(6).unwrap(), 0);
        assert_eq!(chi.value(1).unwrap(), 0);
        assert!(chi.value(7).is_err());
        // multiplicativity
        for a in 1..7u64 {
            for b in 1..7u64 {
                let lhs = chi.value(a * b % 7).unwrap();
                let rhs = (chi.value(a).unwrap() + chi.value(b).unwrap()) % 3;
                assert_eq!(lhs, rhs);
            }
        }
        // kernel = cubes mod 7 = {1, 6}
        let kernel: Vec<u64> = (1..7).filter(|&n| chi.value(n).unwrap() == 0).collect();
        assert_eq!(kernel, vec![1, 6]);
    }

    #[test]
    fn invariant_factor_canonicalization() {
        assert_eq!(invariant_factors(&[3, 9]).unwrap(), vec![3, 9]);
        assert_eq!(invariant_factors(&[9, 3]).unwrap(), vec![3, 9]);
        assert_eq!(invariant_factors(&[2]).unwrap(), vec![2]);
        assert_eq!(invariant_factors(&[3, 5]).unwrap(), vec![15]);
        assert_eq!(invariant_factors(&[3, 3, 5]).unwrap(), vec![3, 15]);
        assert_eq!(invariant_factors(&[4, 6]).unwrap(), vec![2, 12]);
        assert!(invariant_factors(&[]).is_err());
        assert!(invariant_factors(&[1, 1]).is_err());
    }

    #[test]
    fn realize_3_9() {
        let real = realize_abelian(&[3, 9], None, 1_000_000).unwrap();
        assert_eq!(real.invariant_factors, vec![3, 9]);
        let conductors: Vec<u64> = real.specs.iter().map(|s| s.conductor).collect();
        assert_eq!(conductors, vec![7, 19]);
        assert_eq!(real.ramified_primes, [7, 19].into_iter().collect());
    }

    #[test]
    fn realize_z2() {
        let real = realize_abelian(&[2], None, 1_000_000).unwrap();
        assert_eq!(real.specs[0].conductor, 3);
        let poly = real.specs[0].poly();
        assert_eq!(poly.coeffs(), &[BigInt::one(), BigInt::one(), BigInt::one()]);
        assert!(realize_abelian(&[], None, 1_000_000).is_err());
    }

    #[test]
    fn character_frobenius_agreement() {
        // Factorization degree pattern of the defining polynomial mod p must
        // match the order of chi(p), for every unramified p < 200.
        use crate::poly::{factor_degrees, ModPoly};
        for (q, b) in [(7u64, 3u64), (19, 9)] {
            let spec = CyclicFieldSpec::new(q, b).unwrap();
            let f = spec.poly();
            for p in crate::arith::primes_from(2).take_while(|&p| p < 200) {
                if p == q {
                    continue;
                }
                let fp = ModPoly::from_int_poly(&f, p);
                if fp.degree() != f.degree() {
                    continue;
                }
                let degs = factor_degrees(&fp);
                let ord = spec.character.value_order(p).unwrap();
                let expected: Vec<usize> =
                    std::iter::repeat(ord as usize).take((b / ord) as usize).collect();
                assert_eq!(degs, expected, "q={q} b={b} p={p}");
                // split-completely agreement with the Euler criterion
                let split = degs.iter().all(|&dd| dd == 1);
                assert_eq!(
                    split,
                    crate::arith::power_residue_u64(p as i64, b, q).unwrap(),
                    "split test q={q} p={p}"
                );
            }
        }
    }
}
