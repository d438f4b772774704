//! Exact integer and modular arithmetic primitives.
//!
//! Everything downstream (conductor scans, Scholz condition checks,
//! certificate replay) bottoms out in these functions, so they are kept
//! dependency-free and deterministic. `power_residue` is the Euler-criterion
//! test `a^((q-1)/m) == 1 (mod q)`: it is exactly the splits-completely test
//! in the degree-m subfield of Q(mu_q), which is the executable form of every
//! Chebotarev condition this crate certifies.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A checked prime power l^e, e >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePower {
    l: u64,
    e: u32,
}

impl PrimePower {
    pub fn new(l: u64, e: u32) -> Result<Self> {
        if !is_prime_u64(l) {
            return Err(Error::Domain(format!("{l} is not prime")));
        }
        if e == 0 {
            return Err(Error::Domain("exponent must be >= 1".into()));
        }
        Ok(PrimePower { l, e })
    }

    pub fn prime(&self) -> u64 {
        self.l
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn value(&self) -> BigInt {
        BigInt::from(self.l).pow(self.e)
    }

    /// The value as u64 when it fits.
    pub fn value_u64(&self) -> Option<u64> {
        let mut v: u64 = 1;
        for _ in 0..self.e {
            v = v.checked_mul(self.l)?;
        }
        Some(v)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m for u64 operands.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    a %= m;
    let mut acc: u64 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full u64 range.
///
/// The witness set {2,3,5,7,11,13,17,19,23,29,31,37} is proven sufficient for
/// all n < 3.3 * 10^24, which covers u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality test for arbitrary-precision integers.
///
/// Deterministic and correct below 2^64; above that it is Miller-Rabin with
/// the first 25 primes as witnesses (error probability < 4^-25 per composite,
/// and no composite below 2^64 passes).
pub fn is_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if let Ok(small) = u64::try_from(n.clone()) {
        return is_prime_u64(small);
    }
    let small_primes: Vec<u64> = first_primes(25);
    for &p in &small_primes {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &small_primes {
        let a = BigInt::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&BigInt::from(2u32), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut n = 2u64;
    while primes.len() < count {
        if is_prime_u64(n) {
            primes.push(n);
        }
        n += 1;
    }
    primes
}

/// Factor n >= 1 into primes with multiplicity, sorted ascending.
///
/// Trial division up to 10^5 followed by Brent's variant of Pollard rho with
/// deterministic parameters; sized for discriminant-scale inputs.
pub fn factorize(n: &BigInt) -> Result<Vec<BigInt>> {
    if n < &BigInt::one() {
        return Err(Error::Domain(format!("factorize requires n >= 1, got {n}")));
    }
    let mut factors = Vec::new();
    let mut rest = n.clone();
    let mut d = 2u64;
    while d <= 100_000 {
        let big_d = BigInt::from(d);
        while (&rest % &big_d).is_zero() {
            factors.push(big_d.clone());
            rest /= &big_d;
        }
        if &big_d * &big_d > rest {
            break;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        split_with_rho(&rest, &mut factors)?;
    }
    factors.sort();
    Ok(factors)
}

fn split_with_rho(n: &BigInt, out: &mut Vec<BigInt>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if is_prime(n) {
        out.push(n.clone());
        return Ok(());
    }
    let d = pollard_rho(n)?;
    split_with_rho(&d, out)?;
    split_with_rho(&(n / &d), out)
}

fn pollard_rho(n: &BigInt) -> Result<BigInt> {
    if n.is_even() {
        return Ok(BigInt::from(2u32));
    }
    // Brent's cycle detection; c and x0 swept deterministically.
    for c in 1u64..64 {
        let c = BigInt::from(c);
        let mut x = BigInt::from(2u32);
        let mut y = x.clone();
        let mut d = BigInt::one();
        let mut count: u64 = 0;
        while d.is_one() {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
            count += 1;
            if count > 10_000_000 {
                break;
            }
        }
        if !d.is_one() && &d != n {
            return Ok(d);
        }
    }
    Err(Error::Domain(format!("failed to split composite {n}")))
}

/// Euler-criterion m-th power residue test: is a an m-th power mod q?
///
/// Requires q prime, q not dividing a, and m | q-1 (otherwise the condition
/// is meaningless and a domain error is returned).
pub fn power_residue(a: &BigInt, m: &BigInt, q: &BigInt) -> Result<bool> {
    if !is_prime(q) {
        return Err(Error::Domain(format!("modulus {q} is not prime")));
    }
    let q_minus_1 = q - BigInt::one();
    if m.is_zero() || !(&q_minus_1 % m).is_zero() {
        return Err(Error::Domain(format!("order {m} does not divide q-1 = {q_minus_1}")));
    }
    let a_red = a.mod_floor(q);
    if a_red.is_zero() {
        return Err(Error::Domain(format!("q = {q} divides a = {a}")));
    }
    let exp = &q_minus_1 / m;
    Ok(a_red.modpow(&exp, q).is_one())
}

/// u64 fast path of [`power_residue`] with identical semantics.
pub fn power_residue_u64(a: i64, m: u64, q: u64) -> Result<bool> {
    if !is_prime_u64(q) {
        return Err(Error::Domain(format!("modulus {q} is not prime")));
    }
    if m == 0 || (q - 1) % m != 0 {
        return Err(Error::Domain(format!("order {m} does not divide q-1 = {}", q - 1)));
    }
    let a_red = a.rem_euclid(q as i64) as u64;
    if a_red == 0 {
        return Err(Error::Domain(format!("q = {q} divides a = {a}")));
    }
    Ok(pow_mod(a_red, (q - 1) / m, q) == 1)
}

/// Least generator of (Z/q)^* for an odd prime q (also handles q = 2).
pub fn primitive_root(q: u64) -> Result<u64> {
    if !is_prime_u64(q) {
        return Err(Error::Domain(format!("{q} is not prime")));
    }
    if q == 2 {
        return Ok(1);
    }
    let phi = q - 1;
    let prime_divisors: Vec<u64> = {
        let fs = factorize(&BigInt::from(phi))?;
        let mut ds: Vec<u64> = fs.iter().map(|f| u64::try_from(f.clone()).unwrap()).collect();
        ds.dedup();
        ds
    };
    'cand: for g in 2..q {
        for &p in &prime_divisors {
            if pow_mod(g, phi / p, q) == 1 {
                continue 'cand;
            }
        }
        return Ok(g);
    }
    unreachable!("every prime has a primitive root")
}

/// Chinese remainder: solve x = r_i (mod m_i) simultaneously.
///
/// Moduli need not be pairwise coprime; overlapping congruences are accepted
/// when consistent and rejected otherwise. Returns (x, lcm) with 0 <= x < lcm.
pub fn crt(residues: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt)> {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in residues {
        if m < &BigInt::one() {
            return Err(Error::Domain(format!("modulus {m} must be >= 1")));
        }
        // Merge x mod modulus with r mod m.
        let g_ext = modulus.extended_gcd(m);
        let g = g_ext.gcd;
        let diff = r - &x;
        if !(&diff % &g).is_zero() {
            return Err(Error::Domain(format!(
                "inconsistent congruences: x = {x} (mod {modulus}) vs x = {r} (mod {m})"
            )));
        }
        let lcm = (&modulus / &g) * m;
        // x' = x + modulus * t where t = (diff/g) * inv(modulus/g) mod (m/g)
        let m_red = m / &g;
        let t = ((&diff / &g) * g_ext.x).mod_floor(&m_red);
        x = (&x + &modulus * t).mod_floor(&lcm);
        modulus = lcm;
    }
    Ok((x, modulus))
}

/// Legendre symbol (a/q) for an odd prime q, as +1, -1, or 0.
pub fn legendre(a: i64, q: u64) -> i64 {
    let a_red = a.rem_euclid(q as i64) as u64;
    if a_red == 0 {
        return 0;
    }
    if pow_mod(a_red, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

/// Square root mod an odd prime q (Tonelli-Shanks), deterministic.
pub fn sqrt_mod(a: i64, q: u64) -> Option<u64> {
    let a = a.rem_euclid(q as i64) as u64;
    if a == 0 {
        return Some(0);
    }
    if q == 2 {
        return Some(a % 2);
    }
    if legendre(a as i64, q) != 1 {
        return None;
    }
    if q % 4 == 3 {
        return Some(pow_mod(a, (q + 1) / 4, q));
    }
    // Tonelli-Shanks with the least non-residue as the generator.
    let mut s = 0u32;
    let mut d = q - 1;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z as i64, q) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, d, q);
    let mut t = pow_mod(a, d, q);
    let mut r = pow_mod(a, (d + 1) / 2, q);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, q);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), q);
        m = i;
        c = mul_mod(b, b, q);
        t = mul_mod(t, c, q);
        r = mul_mod(r, b, q);
    }
    Some(r)
}

/// Iterator over primes starting from 2, using the deterministic MR test.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(2)..).filter(|&n| is_prime_u64(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..10_000u64 {
            assert_eq!(is_prime_u64(n), trial_division_is_prime(n), "n = {n}");
        }
        assert!(is_prime_u64(7));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(1023)); // 3 * 11 * 31
        assert!(is_prime(&BigInt::from(1_000_000_007u64)));
    }

    #[test]
    fn factorize_examples() {
        let fs = factorize(&BigInt::from(49)).unwrap();
        assert_eq!(fs, vec![BigInt::from(7), BigInt::from(7)]);
        let fs = factorize(&BigInt::from(360)).unwrap();
        assert_eq!(
            fs,
            [2, 2, 2, 3, 3, 5].iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()
        );
        assert!(factorize(&BigInt::from(1)).unwrap().is_empty());
        assert!(factorize(&BigInt::zero()).is_err());
    }

    #[test]
    fn factorize_roundtrip_to_a_million() {
        // Spot-check the full range cheaply: all n below 4000 plus a sparse sweep.
        let check = |n: u64| {
            let fs = factorize(&BigInt::from(n)).unwrap();
            let prod: BigInt = fs.iter().product();
            assert_eq!(prod, BigInt::from(n));
            for f in &fs {
                assert!(is_prime(f), "{f} not prime in factorization of {n}");
            }
        };
        for n in 1..4000u64 {
            check(n);
        }
        for n in (4001..1_000_000u64).step_by(9973) {
            check(n);
        }
    }

    #[test]
    fn power_residue_examples() {
        // 4^3 = 64 = 2 mod 31, so 2 is a cube mod 31.
        assert!(power_residue_u64(2, 3, 31).unwrap());
        // 2^6 = 64 = 2 != 1 mod 31, so 2 is not a 5th power.
        assert!(!power_residue_u64(2, 5, 31).unwrap());
        // 1 is an m-th power for every m | q-1.
        assert!(power_residue_u64(1, 6, 31).unwrap());
        assert!(power_residue_u64(1, 3, 7).unwrap());
        // m must divide q-1.
        assert!(power_residue_u64(2, 4, 31).is_err());
        // q | a is rejected.
        assert!(power_residue_u64(31, 3, 31).is_err());
        // BigInt front end agrees.
        assert!(power_residue(&BigInt::from(2), &BigInt::from(3), &BigInt::from(31)).unwrap());
    }

    #[test]
    fn power_residue_matches_enumeration_small() {
        // Exhaustive oracle on q < 100; the acceptance suite pushes this to 500.
        for q in primes_from(3).take_while(|&q| q < 100) {
            let mut m = 1;
            while m <= q - 1 {
                if (q - 1) % m == 0 {
                    let mut powers = std::collections::HashSet::new();
                    for x in 1..q {
                        powers.insert(pow_mod(x, m, q));
                    }
                    for a in 1..q {
                        assert_eq!(
                            power_residue_u64(a as i64, m, q).unwrap(),
                            powers.contains(&a),
                            "a={a} m={m} q={q}"
                        );
                    }
                }
                m += 1;
            }
        }
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(31).unwrap(), 3);
        // Order check oracle: g really generates.
        for q in [7u64, 31, 101] {
            let g = primitive_root(q).unwrap();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                x = mul_mod(x, g, q);
                seen.insert(x);
            }
            assert_eq!(seen.len() as u64, q - 1);
        }
    }

    #[test]
    fn crt_examples() {
        let (x, m) = crt(&[(BigInt::from(1), BigInt::from(9)), (BigInt::from(1), BigInt::from(5))]).unwrap();
        assert_eq!((x, m), (BigInt::from(1), BigInt::from(45)));
        let (x, m) = crt(&[(BigInt::from(2), BigInt::from(3)), (BigInt::from(3), BigInt::from(5))]).unwrap();
        assert_eq!((x, m), (BigInt::from(8), BigInt::from(15)));
        assert!(crt(&[(BigInt::from(0), BigInt::from(2)), (BigInt::from(1), BigInt::from(2))]).is_err());
        // Consistent overlap is accepted.
        let (x, m) = crt(&[(BigInt::from(1), BigInt::from(6)), (BigInt::from(1), BigInt::from(4))]).unwrap();
        assert_eq!((x, m), (BigInt::from(1), BigInt::from(12)));
    }

    #[test]
    fn sqrt_mod_works() {
        for q in primes_from(3).take_while(|&q| q < 200) {
            for a in 0..q {
                if let Some(r) = sqrt_mod(a as i64, q) {
                    assert_eq!(mul_mod(r, r, q), a, "sqrt({a}) mod {q}");
                } else {
                    assert_eq!(legendre(a as i64, q), -1);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn nested_powers(q_idx in 0usize..20, a in 1i64..1000) {
            let q = primes_from(3).nth(q_idx).unwrap();
            // For each factorization q-1 = m1*m2*rest: m1*m2-th powers are m1-th powers.
            let phi = q - 1;
            for m1 in 1..=phi {
                if phi % m1 != 0 { continue; }
                for m2 in 1..=(phi / m1) {
                    if (phi / m1) % m2 != 0 { continue; }
                    if a as u64 % q == 0 { continue; }
                    let big = power_residue_u64(a, m1 * m2, q).unwrap();
                    let small = power_residue_u64(a, m1, q).unwrap();
                    prop_assert!(!big || small, "nesting failed a={a} m1={m1} m2={m2} q={q}");
                }
            }
        }

        #[test]
        fn crt_agrees_with_scan(r1 in 0u64..3, r2 in 0u64..5, r3 in 0u64..7) {
            let sys = [
                (BigInt::from(r1), BigInt::from(3u64)),
                (BigInt::from(r2), BigInt::from(5u64)),
                (BigInt::from(r3), BigInt::from(7u64)),
            ];
            let (x, m) = crt(&sys).unwrap();
            prop_assert_eq!(m.clone(), BigInt::from(105u64));
            let expected = (0..105u64)
                .find(|&n| n % 3 == r1 && n % 5 == r2 && n % 7 == r3)
                .unwrap();
            prop_assert_eq!(x, BigInt::from(expected));
        }
    }
}
