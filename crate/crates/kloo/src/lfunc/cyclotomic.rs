//! Exact arithmetic in Z[ζ_p] on the integral power basis 1, ζ, …, ζ^{p−2}.
//!
//! Products are convolved and then folded back onto the basis with
//! ζ^{p−1} = −(1 + ζ + … + ζ^{p−2}), applied to the highest exponent first.
//! Coefficients are arbitrary-precision integers; division is only ever the
//! exact kind and asserts divisibility instead of truncating.

use crate::{Error, Result};
use num::bigint::BigInt;
use num::traits::Zero;

/// An element Σ c_j ζ_p^j, j = 0..p−2, with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicInteger {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInteger {
    /// Zero in Z[ζ_p].
    pub fn zero(p: u64) -> CyclotomicInteger {
        CyclotomicInteger { p, coeffs: vec![BigInt::zero(); (p - 1) as usize] }
    }

    /// Element from power-basis coefficients (length exactly p−1).
    pub fn new(p: u64, coeffs: Vec<BigInt>) -> Result<CyclotomicInteger> {
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::InvalidInput(format!(
                "expected {} power-basis coefficients, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CyclotomicInteger { p, coeffs })
    }

    /// The rational integer c.
    pub fn from_int(p: u64, c: i64) -> CyclotomicInteger {
        let mut z = CyclotomicInteger::zero(p);
        z.coeffs[0] = BigInt::from(c);
        z
    }

    /// Σ_c N_c ζ^c for counts N_0..N_{p−1}, reduced to the power basis:
    /// the ζ^{p−1} relation folds the last count into all the others, so
    /// coefficient j becomes N_j − N_{p−1}.
    pub fn from_counts(p: u64, counts: &[u64]) -> Result<CyclotomicInteger> {
        if counts.len() != p as usize {
            return Err(Error::InvalidInput(format!(
                "expected {} trace-value counts, got {}",
                p,
                counts.len()
            )));
        }
        let last = BigInt::from(counts[p as usize - 1]);
        let coeffs = counts[..p as usize - 1]
            .iter()
            .map(|&c| BigInt::from(c) - &last)
            .collect();
        Ok(CyclotomicInteger { p, coeffs })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_same(&self, other: &CyclotomicInteger) -> Result<()> {
        if self.p != other.p {
            return Err(Error::InvalidInput(format!(
                "mixed cyclotomic orders {} and {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &CyclotomicInteger) -> Result<CyclotomicInteger> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CyclotomicInteger { p: self.p, coeffs })
    }

    pub fn sub(&self, other: &CyclotomicInteger) -> Result<CyclotomicInteger> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CyclotomicInteger { p: self.p, coeffs })
    }

    pub fn neg(&self) -> CyclotomicInteger {
        CyclotomicInteger { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> CyclotomicInteger {
        CyclotomicInteger { p: self.p, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Product, folded back to the power basis.
    pub fn mul(&self, other: &CyclotomicInteger) -> Result<CyclotomicInteger> {
        self.check_same(other)?;
        let len = (self.p - 1) as usize;
        let mut conv = vec![BigInt::zero(); 2 * len - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                conv[i + j] += a * b;
            }
        }
        // ζ^e = −Σ_{j=0}^{p−2} ζ^{e−(p−1)+j}, highest exponent first.
        for e in (len..conv.len()).rev() {
            if conv[e].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut conv[e], BigInt::zero());
            for j in 0..len {
                conv[e - len + j] -= &c;
            }
        }
        conv.truncate(len);
        Ok(CyclotomicInteger { p: self.p, coeffs: conv })
    }

    /// Exact division by a rational integer m; errors if any coefficient is
    /// not divisible (the caller's theory said it would be).
    pub fn div_exact(&self, m: i64) -> Result<CyclotomicInteger> {
        if m == 0 {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        let m_big = BigInt::from(m);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (j, c) in self.coeffs.iter().enumerate() {
            if (c % &m_big).is_zero() {
                coeffs.push(c / &m_big);
            } else {
                return Err(Error::Internal(format!(
                    "coefficient {c} of ζ^{j} is not divisible by {m}"
                )));
            }
        }
        Ok(CyclotomicInteger { p: self.p, coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta_pow(p: u64, e: u64) -> CyclotomicInteger {
        let mut z = CyclotomicInteger::from_int(p, 1);
        let mut zeta = CyclotomicInteger::zero(p);
        zeta.coeffs[1] = BigInt::from(1);
        for _ in 0..e {
            z = z.mul(&zeta).unwrap();
        }
        z
    }

    #[test]
    fn test_basis_products() {
        // ζ^a · ζ^b with a+b ≤ p−2 stays a basis monomial
        let za = zeta_pow(5, 1);
        let zb = zeta_pow(5, 2);
        let prod = za.mul(&zb).unwrap();
        assert_eq!(prod, zeta_pow(5, 3));
    }

    #[test]
    fn test_reduction_rule() {
        // p=3: ζ + ζ² = −1
        let z = zeta_pow(3, 1).add(&zeta_pow(3, 2)).unwrap();
        assert_eq!(z, CyclotomicInteger::from_int(3, -1));
        // any p: 1 + ζ + … + ζ^{p−2} = −ζ^{p−1}
        for p in [3u64, 5, 7] {
            let all_ones =
                CyclotomicInteger::new(p, vec![BigInt::from(1); (p - 1) as usize]).unwrap();
            assert_eq!(all_ones.neg(), zeta_pow(p, p - 1));
        }
    }

    #[test]
    fn test_zeta_order() {
        for p in [3u64, 5, 7, 11] {
            assert_eq!(zeta_pow(p, p), CyclotomicInteger::from_int(p, 1), "ζ has order p");
            assert_eq!(zeta_pow(p, p + 1), zeta_pow(p, 1));
        }
    }

    #[test]
    fn test_from_counts() {
        // counts (0,1,1) for p=3: ζ + ζ² = −1
        let s = CyclotomicInteger::from_counts(3, &[0, 1, 1]).unwrap();
        assert_eq!(s, CyclotomicInteger::from_int(3, -1));
        assert!(CyclotomicInteger::from_counts(3, &[1, 2]).is_err());
    }

    #[test]
    fn test_div_exact() {
        let z = CyclotomicInteger::from_int(5, 6).scale(&BigInt::from(2));
        assert_eq!(z.div_exact(4).unwrap(), CyclotomicInteger::from_int(5, 3));
        assert!(CyclotomicInteger::from_int(5, 3).div_exact(2).is_err());
        assert!(CyclotomicInteger::from_int(5, 3).div_exact(0).is_err());
    }

    #[test]
    fn test_mixed_orders_rejected() {
        let a = CyclotomicInteger::from_int(3, 1);
        let b = CyclotomicInteger::from_int(5, 1);
        assert!(a.add(&b).is_err());
        assert!(a.mul(&b).is_err());
    }
}
