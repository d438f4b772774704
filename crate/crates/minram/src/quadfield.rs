//! Imaginary quadratic fields via binary quadratic forms.
//!
//! Class groups are computed by enumerating reduced positive definite forms
//! (a, b, c) of discriminant D = b^2 - 4ac < 0 and composing them with
//! Dirichlet composition. A form (a, b, c) corresponds to the ideal
//! [a, (-b + sqrt(D))/2] of norm a; generators of l-th powers of order-l
//! classes are recovered by bounded enumeration of the norm form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{crt, is_prime_u64, sqrt_mod};
use crate::{Error, Result};

/// An imaginary quadratic field given by its fundamental discriminant D < 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadField {
    disc: i64,
}

fn squarefree(n: u64) -> bool {
    let mut n = n;
    let mut d = 2u64;
    while d * d <= n {
        if n % (d * d) == 0 {
            return false;
        }
        while n % d == 0 {
            n /= d;
        }
        d += 1;
    }
    true
}

impl QuadField {
    pub fn new(disc: i64) -> Result<Self> {
        if disc >= 0 {
            return Err(Error::Domain(format!("discriminant must be negative, got {disc}")));
        }
        if disc < -1_000_000 {
            return Err(Error::Domain(format!("|D| <= 10^6 supported, got {disc}")));
        }
        let fundamental = if disc.rem_euclid(4) == 1 {
            squarefree(disc.unsigned_abs())
        } else if disc % 4 == 0 {
            let m = disc / 4;
            let mm = m.rem_euclid(4);
            (mm == 2 || mm == 3) && squarefree(m.unsigned_abs())
        } else {
            false
        };
        if !fundamental {
            return Err(Error::Domain(format!("{disc} is not a fundamental discriminant")));
        }
        Ok(QuadField { disc })
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    /// |mu_K|: 6 for Q(sqrt(-3)), 4 for Q(i), 2 otherwise.
    pub fn torsion_order(&self) -> u64 {
        match self.disc {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    /// Norm of x + y*omega where omega is (1+sqrt(D))/2 or sqrt(D/4).
    pub fn norm(&self, x: &BigInt, y: &BigInt) -> BigInt {
        if self.disc.rem_euclid(4) == 1 {
            // x^2 + xy + y^2 (1-D)/4
            let c = BigInt::from((1 - self.disc) / 4);
            x * x + x * y + y * y * c
        } else {
            let m = BigInt::from(self.disc / 4);
            x * x - y * y * m
        }
    }

    /// Image of omega in O_K/q for a split or ramified rational prime q:
    /// the least root of omega's minimal polynomial mod q. Inert q is an
    /// error (the residue field there is F_q^2).
    pub fn omega_residue(&self, q: u64) -> Result<u64> {
        if !is_prime_u64(q) {
            return Err(Error::Domain(format!("{q} is not prime")));
        }
        if self.disc.rem_euclid(4) == 1 {
            // t^2 - t + (1-D)/4 = 0
            let c = (1 - self.disc) / 4;
            if q < 100 {
                for t in 0..q {
                    let v = (t as i128 * t as i128 - t as i128 + c as i128).rem_euclid(q as i128);
                    if v == 0 {
                        return Ok(t);
                    }
                }
                return Err(Error::InertPrime { q });
            }
            let s = sqrt_mod(self.disc.rem_euclid(q as i64), q).ok_or(Error::InertPrime { q })?;
            let inv2 = crate::arith::pow_mod(2, q - 2, q);
            let r1 = ((1 + s as u128) * inv2 as u128 % q as u128) as u64;
            let r2 = ((1 + (q - s) as u128) * inv2 as u128 % q as u128) as u64;
            Ok(r1.min(r2))
        } else {
            let m = self.disc / 4;
            if q < 100 {
                for t in 0..q {
                    let v = (t as i128 * t as i128 - m as i128).rem_euclid(q as i128);
                    if v == 0 {
                        return Ok(t);
                    }
                }
                return Err(Error::InertPrime { q });
            }
            let s = sqrt_mod(m.rem_euclid(q as i64), q).ok_or(Error::InertPrime { q })?;
            Ok(s.min(q - s))
        }
    }

    /// Image of x + y*omega in the residue field at the fixed prime above q.
    pub fn residue_class(&self, x: &BigInt, y: &BigInt, q: u64) -> Result<u64> {
        let norm = self.norm(x, y);
        if (&norm % BigInt::from(q)).is_zero() {
            return Err(Error::Domain(format!("q = {q} divides Norm({x} + {y}w) = {norm}")));
        }
        let qb = BigInt::from(q);
        if y.is_zero() {
            return Ok(u64::try_from(x.mod_floor(&qb)).unwrap());
        }
        let t = self.omega_residue(q)?;
        let img = (x + y * BigInt::from(t)).mod_floor(&qb);
        Ok(u64::try_from(img).unwrap())
    }
}

/// A primitive positive definite binary quadratic form ax^2 + bxy + cy^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        let d = self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128;
        i64::try_from(d).expect("discriminant overflow")
    }

    pub fn principal(disc: i64) -> QuadForm {
        if disc.rem_euclid(4) == 1 {
            QuadForm::new(1, 1, (1 - disc) / 4)
        } else {
            QuadForm::new(1, 0, -disc / 4)
        }
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        if !(b.abs() <= a && a <= c) {
            return false;
        }
        if (b.abs() == a || a == c) && b < 0 {
            return false;
        }
        true
    }

    /// Reduce to the canonical representative of the class.
    pub fn reduce(&self) -> QuadForm {
        let mut a = self.a as i128;
        let mut b = self.b as i128;
        let mut c = self.c as i128;
        loop {
            if c < a {
                std::mem::swap(&mut a, &mut c);
                b = -b;
            }
            if b.abs() > a {
                // b -> b - 2ka into (-a, a]
                let twoa = 2 * a;
                let mut b_new = b.rem_euclid(twoa);
                if b_new > a {
                    b_new -= twoa;
                }
                let k = (b - b_new) / twoa;
                // c' = c - k*(b + b_new)/2... keep exact: c' = (b_new^2 - D)/(4a)
                let d = b * b - 4 * a * c;
                c = (b_new * b_new - d) / (4 * a);
                b = b_new;
                let _ = k;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
                continue;
            }
            if b.abs() == a && b < 0 {
                b = -b;
                // c unchanged: (a, -a, c) ~ (a, a, c)
                continue;
            }
            break;
        }
        QuadForm {
            a: a as i64,
            b: b as i64,
            c: c as i64,
        }
    }

    pub fn inverse(&self) -> QuadForm {
        QuadForm::new(self.a, -self.b, self.c).reduce()
    }

    /// Dirichlet composition followed by reduction.
    pub fn compose(&self, other: &QuadForm) -> QuadForm {
        let d = self.discriminant();
        debug_assert_eq!(d, other.discriminant());
        let (a1, b1) = (self.a as i128, self.b as i128);
        let (a2, b2) = (other.a as i128, other.b as i128);
        let s = (b1 + b2) / 2;
        let e = gcd3(a1, a2, s);
        let a3 = a1 / e * (a2 / e);
        // B = b1 (mod 2a1/e), B = b2 (mod 2a2/e), sB = (b1 b2 + D)/2 (mod 2a1a2/e)
        let m1 = 2 * a1 / e;
        let m2 = 2 * a2 / e;
        let m3 = 2 * a1 * a2 / e;
        let t3 = (b1 * b2 + d as i128) / 2;
        // reduce the third congruence: g = gcd(s, m3) must divide t3
        let mut system: Vec<(BigInt, BigInt)> = vec![
            (BigInt::from(b1), BigInt::from(m1)),
            (BigInt::from(b2), BigInt::from(m2)),
        ];
        if s != 0 {
            let g = gcd2(s.abs(), m3);
            debug_assert_eq!(t3 % g, 0, "composition congruence not solvable");
            let m3r = m3 / g;
            let sr = BigInt::from(s / g);
            let t3r = BigInt::from(t3 / g);
            let m3rb = BigInt::from(m3r);
            // B = t3r * sr^-1 (mod m3r)
            let inv = mod_inverse(&sr, &m3rb);
            system.push(((t3r * inv).mod_floor(&m3rb), m3rb));
        }
        let (b_sol, _) = crt(&system).expect("composition congruences are consistent");
        let two_a3 = BigInt::from(2 * a3);
        let b3 = b_sol.mod_floor(&two_a3);
        let b3 = i128::try_from(b3).expect("B overflow");
        let num = b3 * b3 - d as i128;
        debug_assert_eq!(num % (4 * a3), 0);
        let c3 = num / (4 * a3);
        let composed = QuadForm {
            a: a3 as i64,
            b: b3 as i64,
            c: c3 as i64,
        };
        debug_assert_eq!(composed.discriminant(), d);
        composed.reduce()
    }

    pub fn pow(&self, e: u64) -> QuadForm {
        let d = self.discriminant();
        let mut acc = QuadForm::principal(d);
        let mut base = self.reduce();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }
}

fn gcd2(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn gcd3(a: i128, b: i128, c: i128) -> i128 {
    gcd2(gcd2(a, b), c)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

use num_traits::One;

/// The class group of an imaginary quadratic field, as reduced forms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadClassGroup {
    pub field: QuadField,
    /// All reduced forms, sorted by (a, b, c).
    pub forms: Vec<QuadForm>,
    /// Class number.
    pub h: u64,
    /// Invariant factors of the class group, ascending (b_1 | b_2 | ...).
    pub invariants: Vec<u64>,
}

/// Enumerate all reduced forms of discriminant D and read off the group.
pub fn class_group(disc: i64) -> Result<QuadClassGroup> {
    let field = QuadField::new(disc)?;
    let abs_d = disc.unsigned_abs() as i64;
    let mut forms = Vec::new();
    let b_max = ((abs_d as f64 / 3.0).sqrt() as i64) + 1;
    let parity = disc.rem_euclid(2);
    let mut b = parity;
    while b <= b_max {
        let n = (b * b + abs_d) / 4;
        if (b * b - disc) % 4 == 0 {
            let mut a = if b == 0 { 1 } else { b };
            if a == 0 {
                a = 1;
            }
            while a * a <= n {
                if a > 0 && n % a == 0 {
                    let c = n / a;
                    if b <= a && a <= c {
                        let f = QuadForm::new(a, b, c);
                        if f.is_reduced() {
                            forms.push(f);
                        }
                        if b > 0 && b < a && a < c {
                            let f = QuadForm::new(a, -b, c);
                            if f.is_reduced() {
                                forms.push(f);
                            }
                        }
                    }
                }
                a += 1;
            }
        }
        b += 2;
    }
    forms.sort();
    let h = forms.len() as u64;
    let invariants = class_invariants(&forms, h, disc)?;
    Ok(QuadClassGroup {
        field,
        forms,
        h,
        invariants,
    })
}

/// Invariant factors from element-order counting: for each prime p | h the
/// counts |{x : x^(p^k) = 1}| determine the p-power exponents.
fn class_invariants(forms: &[QuadForm], h: u64, disc: i64) -> Result<Vec<u64>> {
    if h == 1 {
        return Ok(vec![]);
    }
    let principal = QuadForm::principal(disc).reduce();
    let h_factors = crate::arith::factorize(&BigInt::from(h))?;
    let mut primes: Vec<u64> = h_factors
        .iter()
        .map(|f| u64::try_from(f.clone()).unwrap())
        .collect();
    primes.dedup();
    // exponents[p] = multiset of p-power exponents of the invariant factors
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let mut counts = vec![1u64]; // k = 0: only identity
        let mut k = 0u32;
        loop {
            k += 1;
            let pk = p.checked_pow(k).unwrap();
            let count = forms
                .iter()
                .filter(|f| f.pow(pk) == principal)
                .count() as u64;
            counts.push(count);
            // saturated when count equals the full p-part
            if counts[k as usize] == counts[(k - 1) as usize] {
                counts.pop();
                break;
            }
        }
        // r_k = #(invariant factors with exponent >= k) = log_p(counts[k]/counts[k-1])
        let mut exps: Vec<u32> = Vec::new();
        for k in 1..counts.len() {
            let ratio = counts[k] / counts[k - 1];
            let mut r = 0u32;
            let mut v = ratio;
            while v > 1 {
                debug_assert_eq!(v % p, 0);
                v /= p;
                r += 1;
            }
            // r factors have exponent >= k
            for j in 0..r {
                if exps.len() <= j as usize {
                    exps.push(0);
                }
                exps[j as usize] = k as u32;
            }
        }
        per_prime.push((p, exps));
    }
    // Align largest-with-largest across primes: factor t (descending) gets
    // product of p^(exps[t]) over all p.
    let num_factors = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors_desc: Vec<u64> = vec![1; num_factors];
    for (p, exps) in &per_prime {
        for (t, &e) in exps.iter().enumerate() {
            factors_desc[t] *= p.pow(e);
        }
    }
    factors_desc.retain(|&f| f > 1);
    factors_desc.reverse();
    Ok(factors_desc)
}

impl QuadClassGroup {
    /// dim_F_l of the l-torsion subgroup.
    pub fn l_rank(&self, l: u64) -> u32 {
        self.invariants.iter().filter(|&&b| b % l == 0).count() as u32
    }

    /// True iff some ideal class has order l^2, i.e. l^2 divides an
    /// invariant factor.
    pub fn has_order_l2_class(&self, l: u64) -> bool {
        self.invariants.iter().any(|&b| b % (l * l) == 0)
    }

    pub fn principal(&self) -> QuadForm {
        QuadForm::principal(self.field.discriminant()).reduce()
    }

    /// Order of a class under composition.
    pub fn class_order(&self, f: &QuadForm) -> u64 {
        let principal = self.principal();
        let mut ord = 1u64;
        let mut acc = f.reduce();
        while acc != principal {
            acc = acc.compose(f);
            ord += 1;
        }
        ord
    }

    /// A deterministic F_l-basis of the l-torsion subgroup Cl(K)[l], as
    /// reduced forms of order exactly l (smallest forms first).
    pub fn l_torsion_basis(&self, l: u64) -> Vec<QuadForm> {
        let rank = self.l_rank(l) as usize;
        let principal = self.principal();
        let mut basis: Vec<QuadForm> = Vec::new();
        let mut subgroup: Vec<QuadForm> = vec![principal];
        for f in &self.forms {
            if basis.len() == rank {
                break;
            }
            if f.pow(l) != principal || *f == principal {
                continue;
            }
            if subgroup.contains(f) {
                continue;
            }
            basis.push(*f);
            // extend subgroup to <subgroup, f>
            let mut bigger = Vec::new();
            for s in &subgroup {
                let mut acc = *s;
                for _ in 0..l {
                    bigger.push(acc);
                    acc = acc.compose(f);
                }
            }
            bigger.sort();
            bigger.dedup();
            subgroup = bigger;
        }
        debug_assert_eq!(basis.len(), rank);
        basis
    }
}

/// A generator of the principal ideal (ideal of the class)^l, as x + y*omega.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealPowerGenerator {
    pub class_form: QuadForm,
    pub l: u64,
    pub x: i64,
    pub y: i64,
    pub norm: u64,
}

/// Recover a generator a_j with (a_j) = (ideal of the class)^l by solving the
/// norm equation Norm(x + y*omega) = a^l over the lattice. The generator is
/// normalized to minimal non-negative y, then minimal x.
pub fn ideal_power_generator(
    cl: &QuadClassGroup,
    form: &QuadForm,
    l: u64,
) -> Result<IdealPowerGenerator> {
    let form = form.reduce();
    let order = cl.class_order(&form);
    if order != l {
        return Err(Error::Domain(format!(
            "class of {form:?} has order {order}, expected exactly {l}"
        )));
    }
    let disc = cl.field.discriminant();
    let target: i128 = (form.a as i128).pow(l as u32);
    let abs_d = disc.unsigned_abs() as i128;
    let mut solutions: Vec<(i64, i64)> = Vec::new();
    if disc.rem_euclid(4) == 1 {
        // (2x + y)^2 + |D| y^2 = 4 a^l
        let four_t = 4 * target;
        let y_max = isqrt(four_t / abs_d);
        for y in 0..=y_max {
            let rem = four_t - abs_d * y * y;
            let s = isqrt(rem);
            if s * s != rem {
                continue;
            }
            for sign in [1i128, -1] {
                let num = sign * s - y;
                if num.rem_euclid(2) == 0 {
                    solutions.push(((num / 2) as i64, y as i64));
                }
                if s == 0 {
                    break;
                }
            }
        }
    } else {
        // x^2 + |m| y^2 = a^l
        let m_abs = (disc / 4).unsigned_abs() as i128;
        let y_max = isqrt(target / m_abs);
        for y in 0..=y_max {
            let rem = target - m_abs * y * y;
            let s = isqrt(rem);
            if s * s != rem {
                continue;
            }
            solutions.push((s as i64, y as i64));
            if s != 0 {
                solutions.push((-(s as i64), y as i64));
            }
        }
    }
    solutions.sort_by_key(|&(x, y)| (y, x));
    solutions.dedup();
    let (x, y) = *solutions.first().ok_or_else(|| {
        Error::Domain(format!("no element of norm {target} found (class order check passed?)"))
    })?;
    let norm = cl.field.norm(&BigInt::from(x), &BigInt::from(y));
    debug_assert_eq!(norm, BigInt::from(target));
    Ok(IdealPowerGenerator {
        class_form: form,
        l,
        x,
        y,
        norm: u64::try_from(norm.abs()).map_err(|_| Error::Domain("norm overflow".into()))?,
    })
}

fn isqrt(n: i128) -> i128 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
