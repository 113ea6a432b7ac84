//! Arithmetic in F_p and its extensions F_{p^k}.
//!
//! Extensions are realized directly as F_p[x]/(h) with h the first monic
//! irreducible of degree k in a fixed deterministic scan, since only the
//! absolute trace down to F_p is ever needed — no compatible embeddings
//! between different k.  Elements are coefficient vectors of length k,
//! reduced mod p.  All products go through u128 intermediates, so any odd
//! prime p < 2⁶⁴ is safe.

use crate::{Error, Result};

/// Deterministic primality test by trial division (inputs here are small).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= p {
        if p % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// Require p to be an odd prime.
pub fn validate_odd_prime(p: u64) -> Result<()> {
    if !is_prime(p) || p == 2 {
        return Err(Error::InvalidInput(format!("p = {p} is not an odd prime")));
    }
    Ok(())
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + (p - b) as u128;
    (s % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

// --- dense little-endian polynomials over F_p (internal helpers) ---

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &mut Vec<u64>, m: &[u64], p: u64) {
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while a.len() > dm {
        let da = a.len() - 1;
        let factor = mul_mod(a[da], lead_inv, p);
        if factor != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = da - dm + i;
                a[idx] = sub_mod(a[idx], mul_mod(factor, mc, p), p);
            }
        }
        a.pop();
        poly_trim(a);
        if a.is_empty() {
            return;
        }
    }
}

fn poly_mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = add_mod(prod[i + j], mul_mod(ai, bj, p), p);
        }
    }
    poly_trim(&mut prod);
    poly_rem(&mut prod, m, p);
    prod
}

/// u ↦ u^p mod m (one Frobenius step) by square-and-multiply on exponent p.
fn poly_frobenius(u: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = u.to_vec();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_rem(&acc, &base, m, p);
        }
        base = poly_mul_rem(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let mut r = x.clone();
        poly_rem(&mut r, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = inv_mod(lead, p);
        for c in &mut x {
            *c = mul_mod(*c, li, p);
        }
    }
    x
}

fn prime_divisors(mut k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= k {
        if k % f == 0 {
            out.push(f);
            while k % f == 0 {
                k /= f;
            }
        }
        f += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

/// Is the monic polynomial f (little-endian, degree k) irreducible over F_p?
/// Tests x^{p^k} ≡ x (mod f) and gcd(x^{p^{k/t}} − x, f) = 1 for every prime
/// t | k.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = (f.len() - 1) as u64;
    if k == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut u = {
        let mut v = x.clone();
        poly_rem(&mut v, f, p);
        v
    };
    for _ in 0..k {
        u = poly_frobenius(&u, f, p);
    }
    // u = x^{p^k} mod f must equal x mod f
    let mut x_red = x.clone();
    poly_rem(&mut x_red, f, p);
    if u != x_red {
        return false;
    }
    for t in prime_divisors(k) {
        let mut v = x_red.clone();
        for _ in 0..k / t {
            v = poly_frobenius(&v, f, p);
        }
        // gcd(v − x, f) must be 1
        let mut diff = vec![0u64; v.len().max(x_red.len())];
        for (i, c) in diff.iter_mut().enumerate() {
            let vc = v.get(i).copied().unwrap_or(0);
            let xc = x_red.get(i).copied().unwrap_or(0);
            *c = sub_mod(vc, xc, p);
        }
        poly_trim(&mut diff);
        let g = poly_gcd(&diff, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible of degree k over F_p, scanning the non-leading
/// coefficient vector (c₀,…,c_{k−1}) in counting order — c₀ varies fastest,
/// i.e. candidates are ordered by the integer value Σ cᵢ pⁱ.  Deterministic;
/// existence is guaranteed.  Returns the full little-endian coefficient
/// vector of length k+1 with the leading 1.
pub fn find_irreducible(p: u64, k: usize) -> Result<Vec<u64>> {
    validate_odd_prime(p)?;
    if k == 0 {
        return Err(Error::InvalidInput("extension degree k must be ≥ 1".into()));
    }
    let mut tail = vec![0u64; k];
    loop {
        let mut f = tail.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return Ok(f);
        }
        let mut carry = 0usize;
        while carry < k {
            tail[carry] += 1;
            if tail[carry] < p {
                break;
            }
            tail[carry] = 0;
            carry += 1;
        }
        if carry == k {
            return Err(Error::Internal(format!(
                "no monic irreducible of degree {k} over F_{p} found"
            )));
        }
    }
}

/// An extension field F_{p^k} = F_p[x]/(h) with h monic irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionField {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
    order: u128,
}

/// An element of an [`ExtensionField`]: k residues mod p, low degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coeffs: Vec<u64>,
}

impl ExtensionField {
    /// Build F_{p^k} with the deterministic modulus from [`find_irreducible`].
    pub fn new(p: u64, k: usize) -> Result<ExtensionField> {
        let modulus = find_irreducible(p, k)?;
        let mut order: u128 = 1;
        for _ in 0..k {
            order = order
                .checked_mul(p as u128)
                .ok_or_else(|| Error::InvalidInput(format!("p^k overflows: p={p}, k={k}")))?;
        }
        Ok(ExtensionField { p, k, modulus, order })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// p^k.
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.k] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_prime(1)
    }

    /// Embed a residue c ∈ F_p as a constant polynomial.
    pub fn from_prime(&self, c: u64) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = c % self.p;
        FieldElement { coeffs }
    }

    /// Element from arbitrary little-endian coefficients (reduced here).
    pub fn element(&self, coeffs: &[u64]) -> FieldElement {
        let mut v: Vec<u64> = coeffs.iter().map(|&c| c % self.p).collect();
        poly_trim(&mut v);
        if v.len() > self.k {
            poly_rem(&mut v, &self.modulus, self.p);
        }
        v.resize(self.k, 0);
        FieldElement { coeffs: v }
    }

    pub fn is_zero(&self, z: &FieldElement) -> bool {
        z.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| add_mod(x, y, self.p))
            .collect();
        FieldElement { coeffs }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let prod = poly_mul_rem(&a.coeffs, &b.coeffs, &self.modulus, self.p);
        let mut coeffs = prod;
        coeffs.resize(self.k, 0);
        FieldElement { coeffs }
    }

    /// z^e by square-and-multiply; e up to p^k − 1 and beyond.
    pub fn pow(&self, z: &FieldElement, mut e: u128) -> FieldElement {
        let mut acc = self.one();
        let mut base = z.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via z^{p^k − 2}; zero is rejected.
    pub fn inv(&self, z: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(z) {
            return Err(Error::InvalidInput("inversion of zero".into()));
        }
        Ok(self.pow(z, self.order - 2))
    }

    /// Absolute trace z + z^p + … + z^{p^{k−1}} ∈ F_p.  The sum is
    /// Frobenius-fixed, hence a constant polynomial; asserted.
    pub fn absolute_trace(&self, z: &FieldElement) -> u64 {
        let mut acc = z.clone();
        let mut frob = z.clone();
        for _ in 1..self.k {
            frob = self.pow(&frob, self.p as u128);
            acc = self.add(&acc, &frob);
        }
        assert!(
            acc.coeffs[1..].iter().all(|&c| c == 0),
            "trace is not in the prime field — modulus bug"
        );
        acc.coeffs[0]
    }

    /// The element whose coefficient vector are the base-p digits of val
    /// (c₀ = val mod p).  val < p^k.
    pub fn element_from_index(&self, mut val: u128) -> FieldElement {
        assert!(val < self.order, "index out of range");
        let mut coeffs = vec![0u64; self.k];
        for c in &mut coeffs {
            *c = (val % self.p as u128) as u64;
            val /= self.p as u128;
        }
        FieldElement { coeffs }
    }

    /// All p^k − 1 nonzero elements, in coefficient-vector counting order
    /// (index 1, 2, …, p^k − 1 with c₀ the fastest-varying digit).
    pub fn enumerate_nonzero(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.order).map(move |val| self.element_from_index(val))
    }
}
