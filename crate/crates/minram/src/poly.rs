//! Dense integer polynomials, exact resultants via the subresultant PRS, and
//! factorization over prime fields.
//!
//! Coefficients are stored ascending (constant term first), matching the JSON
//! wire format used in certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::pow_mod;
use crate::{Error, Result};

/// Integer polynomial, coefficients ascending, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        Poly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly(vec![BigInt::zero()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_zero()
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn leading(&self) -> &BigInt {
        self.0.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn derivative(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::zero();
        }
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Pseudo-remainder: rem(lc(d)^(deg n - deg d + 1) * n, d), exact over Z.
    fn pseudo_rem(&self, d: &Poly) -> Poly {
        let mut r = self.clone();
        let dd = d.degree();
        let lc_d = d.leading().clone();
        let mut scale_left = (self.degree() - dd + 1) as i64;
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let lc_r = r.leading().clone();
            // r = lc_d * r - lc_r * x^shift * d
            let mut coeffs = vec![BigInt::zero(); r.0.len()];
            for (i, c) in r.0.iter().enumerate() {
                coeffs[i] = c * &lc_d;
            }
            for (i, c) in d.0.iter().enumerate() {
                coeffs[i + shift] -= c * &lc_r;
            }
            r = Poly::new(coeffs);
            scale_left -= 1;
        }
        // degree can drop by more than one per step; make up the missing
        // lc(d) factors so r = lc(d)^(delta+1) * self mod d exactly
        if scale_left > 0 && !r.is_zero() {
            let factor = lc_d.pow(scale_left as u32);
            r = Poly::new(r.0.iter().map(|c| c * &factor).collect());
        }
        r
    }

    fn exact_div_scalar(&self, k: &BigInt) -> Poly {
        Poly::new(
            self.0
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(k);
                    assert!(r.is_zero(), "non-exact scalar division in subresultant PRS");
                    q
                })
                .collect(),
        )
    }

    /// Positive gcd of the coefficients.
    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
        }
        if g.is_zero() {
            BigInt::one()
        } else {
            g
        }
    }
}

/// Resultant of two integer polynomials via the subresultant PRS
/// (fraction-free, exact); sign conventions follow the Sylvester matrix.
pub fn resultant(f: &Poly, g: &Poly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    if f.degree() < g.degree() {
        let sign = if (f.degree() * g.degree()) % 2 == 1 { -1 } else { 1 };
        return BigInt::from(sign) * resultant(g, f);
    }
    if g.degree() == 0 {
        return g.leading().pow(f.degree() as u32);
    }
    let a_cont = f.content();
    let b_cont = g.content();
    let mut a = f.exact_div_scalar(&a_cont);
    let mut b = g.exact_div_scalar(&b_cont);
    let t = a_cont.pow(g.degree() as u32) * b_cont.pow(f.degree() as u32);
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    let mut sign = BigInt::one();
    loop {
        let delta = (a.degree() - b.degree()) as u32;
        if a.degree() % 2 == 1 && b.degree() % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        if r.is_zero() {
            // common factor of positive degree
            return BigInt::zero();
        }
        let denom = &gg * h.pow(delta);
        b = r.exact_div_scalar(&denom);
        gg = a.leading().clone();
        // h = g^delta h^(1-delta), kept exact
        if delta >= 1 {
            let num = gg.pow(delta);
            h = if delta == 1 {
                num
            } else {
                let (q, rem) = num.div_rem(&h.pow(delta - 1));
                assert!(rem.is_zero(), "subresultant h update must be exact");
                q
            };
        }
        if b.degree() == 0 {
            // res = sign * t * lc(b)^deg(a) / h^(deg(a)-1)
            let da = a.degree() as u32;
            let num = b.leading().pow(da);
            let den = h.pow(da - 1);
            let (q, rem) = num.div_rem(&den);
            assert!(rem.is_zero(), "subresultant final step must be exact");
            return sign * t * q;
        }
    }
}

/// Newton's identities: turn power sums p_1..p_n into the monic degree-n
/// polynomial with those root power sums. Every division by k must be exact
/// (integrality check), which holds exactly when the roots are algebraic
/// integers closed under conjugation.
pub fn poly_from_power_sums(power_sums: &[BigInt]) -> Result<Poly> {
    let n = power_sums.len();
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &power_sums[i - 1];
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
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (k, ek) in e.iter().enumerate() {
        let sign = if k % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        coeffs[n - k] = sign * ek;
    }
    Ok(Poly::new(coeffs))
}

/// Reduce a polynomial modulo a monic f (exact integer arithmetic).
pub fn reduce_mod_monic_pub(g: &Poly, f: &Poly) -> Poly {
    reduce_mod_monic(g, f)
}

fn reduce_mod_monic(g: &Poly, f: &Poly) -> Poly {
    debug_assert!(f.is_monic());
    let n = f.degree();
    let mut coeffs = g.0.clone();
    while coeffs.len() > n {
        let lead = coeffs.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let shift = coeffs.len() - n;
        for (i, c) in f.0.iter().take(n).enumerate() {
            coeffs[i + shift] -= &lead * c;
        }
    }
    Poly::new(coeffs)
}

/// Traces Tr(y^m) in Q[y]/(f) for m = 0..max, by the Newton recurrences on
/// the coefficients of monic f.
fn power_traces(f: &Poly, max: usize) -> Vec<BigInt> {
    let n = f.degree();
    let a = |i: usize| -> BigInt { f.0[i].clone() }; // coefficient of y^i
    let mut t: Vec<BigInt> = vec![BigInt::from(n as i64)];
    for m in 1..=max {
        let mut sum = BigInt::zero();
        for i in 1..m.min(n + 1) {
            sum += a(n - i) * &t[m - i];
        }
        if m <= n {
            sum += BigInt::from(m as i64) * a(n - m);
        }
        t.push(-sum);
    }
    t
}

/// Characteristic polynomial of the element h(y) in Q[y]/(f) for monic f:
/// integer power sums via traces, then Newton's identities. If h(y)
/// generates the field this is its minimal polynomial.
pub fn char_poly_of_element(f: &Poly, h: &Poly) -> Result<Poly> {
    if !f.is_monic() || f.degree() == 0 {
        return Err(Error::Domain("char_poly_of_element needs a monic nonconstant modulus".into()));
    }
    let n = f.degree();
    let traces = power_traces(f, n.saturating_sub(1).max(1));
    let h_red = reduce_mod_monic(h, f);
    let mut power_sums = Vec::with_capacity(n);
    let mut cur = Poly::new(vec![BigInt::one()]);
    for _ in 1..=n {
        cur = reduce_mod_monic(&cur.mul(&h_red), f);
        let mut p = BigInt::zero();
        for (m, c) in cur.0.iter().enumerate() {
            p += c * &traces[m];
        }
        power_sums.push(p);
    }
    poly_from_power_sums(&power_sums)
}

/// Discriminant of a monic squarefree integer polynomial.
///
/// disc(f) = (-1)^(n(n-1)/2) res(f, f'); a zero resultant means f has a
/// repeated rational factor and is rejected.
pub fn discriminant(f: &Poly) -> Result<BigInt> {
    if f.degree() == 0 {
        return Err(Error::Domain("discriminant of a constant".into()));
    }
    if !f.is_monic() {
        return Err(Error::Domain("discriminant requires a monic polynomial".into()));
    }
    if f.degree() == 1 {
        return Ok(BigInt::one());
    }
    let res = resultant(f, &f.derivative());
    if res.is_zero() {
        return Err(Error::Domain("polynomial is not squarefree".into()));
    }
    let n = f.degree();
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
    Ok(BigInt::from(sign) * res)
}

// ---------------------------------------------------------------------------
// Polynomials over F_p
// ---------------------------------------------------------------------------

/// Monic-or-zero polynomial mod p, coefficients ascending in [0, p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        ModPoly { p, coeffs }
    }

    pub fn from_int_poly(f: &Poly, p: u64) -> Self {
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| u64::try_from(c.mod_floor(&BigInt::from(p))).unwrap())
            .collect();
        ModPoly::new(p, coeffs)
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: vec![0] }
    }

    pub fn one(p: u64) -> Self {
        ModPoly { p, coeffs: vec![1] }
    }

    pub fn x(p: u64) -> Self {
        ModPoly { p, coeffs: vec![0, 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let idx = i + j;
                out[idx] = (out[idx] + self.mulmod(a, b)) % self.p;
            }
        }
        ModPoly::new(self.p, out)
    }

    /// Remainder of self divided by a nonzero divisor.
    pub fn rem(&self, d: &ModPoly) -> ModPoly {
        assert!(!d.is_zero());
        let p = self.p;
        let dd = d.degree();
        let mut r = self.coeffs.clone();
        let lc_inv = pow_mod(*d.coeffs.last().unwrap(), p - 2, p);
        while r.len() > dd {
            let lead = *r.last().unwrap();
            if lead != 0 {
                let factor = self.mulmod(lead, lc_inv);
                let shift = r.len() - 1 - dd;
                for (i, &dc) in d.coeffs.iter().enumerate() {
                    let sub = self.mulmod(factor, dc);
                    r[i + shift] = (r[i + shift] + p - sub) % p;
                }
            }
            r.pop();
        }
        ModPoly::new(p, r)
    }

    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn make_monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = *self.coeffs.last().unwrap();
        if lc == 1 {
            return self.clone();
        }
        let inv = pow_mod(lc, self.p - 2, self.p);
        ModPoly::new(
            self.p,
            self.coeffs.iter().map(|&c| self.mulmod(c, inv)).collect(),
        )
    }

    /// Exact quotient (panics if division is not exact; internal use).
    pub fn exact_div(&self, d: &ModPoly) -> ModPoly {
        assert!(!d.is_zero());
        let p = self.p;
        let dd = d.degree();
        let mut r = self.coeffs.clone();
        let lc_inv = pow_mod(*d.coeffs.last().unwrap(), p - 2, p);
        let mut q = vec![0u64; r.len().saturating_sub(dd).max(1)];
        while r.len() > dd {
            let lead = *r.last().unwrap();
            if lead != 0 {
                let factor = self.mulmod(lead, lc_inv);
                let shift = r.len() - 1 - dd;
                q[shift] = factor;
                for (i, &dc) in d.coeffs.iter().enumerate() {
                    let sub = self.mulmod(factor, dc);
                    r[i + shift] = (r[i + shift] + p - sub) % p;
                }
            }
            r.pop();
        }
        assert!(r.iter().all(|&c| c == 0), "non-exact polynomial division");
        ModPoly::new(p, q)
    }

    /// self^e mod m.
    pub fn pow_mod(&self, e: u64, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut e = e;
        let mut acc = ModPoly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> ModPoly {
        if self.degree() == 0 {
            return ModPoly::zero(self.p);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mulmod(c, (i as u64) % self.p))
            .collect();
        ModPoly::new(self.p, coeffs)
    }

    /// p-th root of a polynomial in x^p (valid over F_p since a^p = a).
    fn pth_root(&self) -> ModPoly {
        let p = self.p as usize;
        let coeffs = self.coeffs.iter().step_by(p).cloned().collect();
        ModPoly::new(self.p, coeffs)
    }
}

/// Squarefree decomposition over F_p: returns (g_i, multiplicity) pairs with
/// f = prod g_i^(m_i), each g_i monic squarefree, pairwise coprime.
pub fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, u32)> {
    let mut out = Vec::new();
    sqfree_rec(&f.make_monic(), 1, &mut out);
    out.sort_by(|a, b| (a.1, &a.0.coeffs).cmp(&(b.1, &b.0.coeffs)));
    out
}

fn sqfree_rec(f: &ModPoly, mult: u32, out: &mut Vec<(ModPoly, u32)>) {
    if f.degree() == 0 {
        return;
    }
    let df = f.derivative();
    if df.is_zero() {
        // f = g(x^p) = (p-th root)^p
        let root = f.pth_root();
        sqfree_rec(&root, mult * f.p as u32, out);
        return;
    }
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c);
    // w carries each factor not killed by the derivative exactly once.
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y);
        if fac.degree() > 0 {
            out.push((fac, mult * i));
        }
        w = y.clone();
        c = c.exact_div(&y);
        i += 1;
    }
    if c.degree() > 0 {
        sqfree_rec(&c, mult, out);
    }
}

/// Distinct-degree decomposition of a monic squarefree polynomial: returns
/// (product of irreducible factors of degree d, d) pairs, d ascending.
pub fn distinct_degree(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.make_monic();
    let p = f.p;
    let mut h = ModPoly::x(p);
    let mut d = 0usize;
    while f.degree() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p, &f);
        let mut diff = h.clone();
        // h - x
        {
            let mut coeffs = diff.coeffs.clone();
            if coeffs.len() < 2 {
                coeffs.resize(2, 0);
            }
            coeffs[1] = (coeffs[1] + p - 1) % p;
            diff = ModPoly::new(p, coeffs);
        }
        let g = f.gcd(&diff);
        if g.degree() > 0 {
            out.push((g.clone(), d));
            f = f.exact_div(&g);
            h = h.rem(&f);
        }
    }
    if f.degree() > 0 {
        let d = f.degree();
        out.push((f, d));
    }
    out
}

/// Degree multiset of the irreducible factors of a squarefree f, ascending.
pub fn factor_degrees(f: &ModPoly) -> Vec<usize> {
    let mut degs = Vec::new();
    for (prod, d) in distinct_degree(f) {
        for _ in 0..prod.degree() / d {
            degs.push(d);
        }
    }
    degs.sort();
    degs
}

/// Full factorization of a monic squarefree polynomial into irreducibles via
/// distinct-degree then deterministic equal-degree splitting.
pub fn factor_squarefree(f: &ModPoly) -> Vec<ModPoly> {
    let mut out = Vec::new();
    for (prod, d) in distinct_degree(f) {
        split_equal_degree(&prod, d, &mut out);
    }
    out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
    out
}

fn split_equal_degree(f: &ModPoly, d: usize, out: &mut Vec<ModPoly>) {
    if f.degree() == d {
        out.push(f.make_monic());
        return;
    }
    let p = f.p;
    assert!(p > 2, "equal-degree splitting implemented for odd p");
    // (p^d - 1) / 2 as big exponent: exponentiate in stages to stay in u64.
    // Try shifts x+c deterministically until the gcd splits.
    for c in 0..p {
        let base = ModPoly::new(p, vec![c, 1]);
        let t = pow_pd_half(&base, p, d as u32, f);
        let mut tm1 = t.clone();
        tm1.coeffs[0] = (tm1.coeffs[0] + p - 1) % p;
        let tm1 = ModPoly::new(p, tm1.coeffs);
        let g = f.gcd(&tm1);
        if g.degree() > 0 && g.degree() < f.degree() {
            let h = f.exact_div(&g);
            split_equal_degree(&g, d, out);
            split_equal_degree(&h, d, out);
            return;
        }
    }
    unreachable!("deterministic equal-degree sweep exhausted F_p without splitting");
}

/// base^((p^d - 1)/2) mod f, computed as repeated Frobenius steps so the
/// exponent never materializes: a^((p^d-1)/2) = (a^(p^(d-1)) * ... * a)^((p-1)/2).
fn pow_pd_half(base: &ModPoly, p: u64, d: u32, f: &ModPoly) -> ModPoly {
    // norm = a^(1 + p + p^2 + ... + p^(d-1)) mod f
    let mut acc = base.rem(f);
    let mut frob = base.rem(f);
    for _ in 1..d {
        frob = frob.pow_mod(p, f);
        acc = acc.mul(&frob).rem(f);
    }
    acc.pow_mod((p - 1) / 2, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sylvester-matrix resultant via fraction-free Bareiss elimination —
    /// an independent route used to check the subresultant PRS.
    fn sylvester_resultant(f: &Poly, g: &Poly) -> BigInt {
        let n = f.degree();
        let m = g.degree();
        if n == 0 {
            return f.leading().pow(m as u32);
        }
        if m == 0 {
            return g.leading().pow(n as u32);
        }
        let size = n + m;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..m {
            for (k, c) in f.coeffs().iter().rev().enumerate() {
                mat[row][row + k] = c.clone();
            }
        }
        for row in 0..n {
            for (k, c) in g.coeffs().iter().rev().enumerate() {
                mat[m + row][row + k] = c.clone();
            }
        }
        // Bareiss
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..size - 1 {
            if mat[k][k].is_zero() {
                let swap = (k + 1..size).find(|&r| !mat[r][k].is_zero());
                match swap {
                    Some(r) => {
                        mat.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let num = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                    let (q, r) = num.div_rem(&prev);
                    assert!(r.is_zero());
                    mat[i][j] = q;
                }
                mat[i][k] = BigInt::zero();
            }
            prev = mat[k][k].clone();
        }
        sign * mat[size - 1][size - 1].clone()
    }

    #[test]
    fn discriminant_examples() {
        // x^3 + x^2 - 2x - 1 -> 49
        let f = Poly::from_i64(&[-1, -2, 1, 1]);
        assert_eq!(discriminant(&f).unwrap(), BigInt::from(49));
        // x^2 + 1 -> -4
        let f = Poly::from_i64(&[1, 0, 1]);
        assert_eq!(discriminant(&f).unwrap(), BigInt::from(-4));
        // x + 1 -> 1
        let f = Poly::from_i64(&[1, 1]);
        assert_eq!(discriminant(&f).unwrap(), BigInt::from(1));
        // x^2 - 5 -> 20
        let f = Poly::from_i64(&[-5, 0, 1]);
        assert_eq!(discriminant(&f).unwrap(), BigInt::from(20));
        // non-squarefree rejected
        let f = Poly::from_i64(&[1, 2, 1]);
        assert!(discriminant(&f).is_err());
    }

    #[test]
    fn discriminant_matches_closed_forms() {
        // monic quadratic x^2 + bx + c: disc = b^2 - 4c
        for b in -5i64..=5 {
            for c in -5i64..=5 {
                if b * b == 4 * c {
                    continue;
                }
                let f = Poly::from_i64(&[c, b, 1]);
                assert_eq!(discriminant(&f).unwrap(), BigInt::from(b * b - 4 * c));
            }
        }
        // depressed cubic x^3 + px + q: disc = -4p^3 - 27q^2
        for p in -4i64..=4 {
            for q in -4i64..=4 {
                let d = -4 * p * p * p - 27 * q * q;
                if d == 0 {
                    continue;
                }
                let f = Poly::from_i64(&[q, p, 0, 1]);
                assert_eq!(discriminant(&f).unwrap(), BigInt::from(d));
            }
        }
    }

    #[test]
    fn subresultant_matches_sylvester() {
        // Deterministic sweep of small polynomials, both routes must agree.
        let polys = [
            Poly::from_i64(&[1, 2, 3, 1]),
            Poly::from_i64(&[-1, 0, 1]),
            Poly::from_i64(&[4, -3, 0, 0, 1]),
            Poly::from_i64(&[2, 1]),
            Poly::from_i64(&[-7, 0, 0, 2, 5]),
            Poly::from_i64(&[3, 3, 3]),
        ];
        for f in &polys {
            for g in &polys {
                if f.is_zero() || g.is_zero() {
                    continue;
                }
                assert_eq!(
                    resultant(f, g),
                    sylvester_resultant(f, g),
                    "f={:?} g={:?}",
                    f,
                    g
                );
            }
        }
    }

    #[test]
    fn modpoly_factor_roundtrip() {
        // (x^2+1)(x+3)(x+5) mod 7
        let p = 7;
        let f = ModPoly::new(p, vec![1, 0, 1])
            .mul(&ModPoly::new(p, vec![3, 1]))
            .mul(&ModPoly::new(p, vec![5, 1]));
        let factors = factor_squarefree(&f);
        assert_eq!(factors.len(), 3);
        let mut prod = ModPoly::one(p);
        for fac in &factors {
            prod = prod.mul(fac);
        }
        assert_eq!(prod, f.make_monic());
        // x^2+1 splits mod 5 but not mod 7
        let f7 = ModPoly::new(7, vec![1, 0, 1]);
        assert_eq!(factor_degrees(&f7), vec![2]);
        let f5 = ModPoly::new(5, vec![1, 0, 1]);
        assert_eq!(factor_degrees(&f5), vec![1, 1]);
    }

    #[test]
    fn squarefree_decomposition_works() {
        // (x+1)^3 (x+2) mod 5
        let p = 5;
        let a = ModPoly::new(p, vec![1, 1]);
        let f = a.mul(&a).mul(&a).mul(&ModPoly::new(p, vec![2, 1]));
        let dec = squarefree_decomposition(&f);
        assert_eq!(dec.len(), 2);
        assert!(dec.contains(&(ModPoly::new(p, vec![2, 1]), 1)));
        assert!(dec.contains(&(ModPoly::new(p, vec![1, 1]), 3)));
        // (x+1)^5 mod 5 exercises the p-th power path
        let mut f = ModPoly::one(p);
        for _ in 0..5 {
            f = f.mul(&a);
        }
        let dec = squarefree_decomposition(&f);
        assert_eq!(dec, vec![(ModPoly::new(p, vec![1, 1]), 5)]);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn prs_equals_bareiss(coeffs1 in proptest::collection::vec(-9i64..=9, 2..6),
                              coeffs2 in proptest::collection::vec(-9i64..=9, 2..6)) {
            let f = Poly::from_i64(&coeffs1);
            let g = Poly::from_i64(&coeffs2);
            prop_assume!(!f.is_zero() && !g.is_zero());
            prop_assume!(f.degree() >= 1 && g.degree() >= 1);
            prop_assert_eq!(resultant(&f, &g), sylvester_resultant(&f, &g));
        }
    }
}
