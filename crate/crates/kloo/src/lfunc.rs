//! The brute-force verification oracle.
//!
//! S_k = Σ_{x ∈ (F_{p^k}*)^n} ζ_p^{Tr(F̄(λ̄,x))} is computed by honest
//! enumeration: a generator g of F_{p^k}* gives a trace table
//! T[e] = Tr(g^e), after which each point x = (g^{e₁},…,g^{eₙ}) contributes
//! Σᵢ T[aᵢeᵢ mod N] + λ̄·T[(N − Σᵢ dᵢeᵢ) mod N] to the count of its trace
//! value (the λ̄ factor moves outside the trace by F_p-linearity).  Newton's
//! identities then turn S_1..S_D into the L-polynomial coefficients
//! A_0..A_D over Z[ζ_p], whose exact (1−ζ_p)-adic valuations feed the
//! Newton polygon.

pub mod cyclotomic;

use crate::ffield::ExtensionField;
use crate::lattice::KloostermanFamily;
use crate::polygon::{newton_polygon, Polygon, Valuation};
use crate::{rat, Error, Result};
use cyclotomic::CyclotomicInteger;
use num::bigint::BigInt;
use num::traits::Zero;

/// Default budget: refuse any S_k needing more than 10⁸ point evaluations.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// The L-polynomial P = L^{(−1)^{n−1}} = Π (1 − αᵢT) = Σ A_m T^m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    /// D = |𝓑|.
    pub degree: usize,
    /// A_0..A_D with A_0 = 1.
    pub coeffs: Vec<CyclotomicInteger>,
    /// (−1)^{n−1}: which power of L the coefficients describe.
    pub sign: i8,
}

/// (p^k − 1)^n, or None on overflow.
pub fn points_needed(p: u64, k: usize, n: usize) -> Option<u128> {
    let mut q: u128 = 1;
    for _ in 0..k {
        q = q.checked_mul(p as u128)?;
    }
    let base = q - 1;
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.checked_mul(base)?;
    }
    Some(total)
}

fn check_budget(p: u64, k: usize, n: usize, budget: u128) -> Result<u128> {
    match points_needed(p, k, n) {
        Some(needed) if needed <= budget => Ok(needed),
        Some(needed) => Err(Error::BudgetExceeded { needed, budget }),
        None => Err(Error::BudgetExceeded { needed: u128::MAX, budget }),
    }
}

fn validate_family_inputs(family: &KloostermanFamily, p: u64, lambda: u64) -> Result<()> {
    crate::ffield::validate_odd_prime(p)?;
    if family.a().iter().chain(family.d()).any(|&x| x as u64 % p == 0) {
        return Err(Error::Degenerate(format!("p = {p} divides some aᵢ or dᵢ")));
    }
    if lambda % p == 0 {
        return Err(Error::InvalidInput(format!("λ̄ = {lambda} is 0 in F_{p}")));
    }
    Ok(())
}

/// Trace table for F_{p^k}: T[e] = Tr(g^e) with g the first generator of
/// the multiplicative group in enumeration order.
struct TraceTable {
    n_order: u64,
    traces: Vec<u16>,
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= m {
        if m % f == 0 {
            out.push(f);
            while m % f == 0 {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn build_trace_table(p: u64, k: usize) -> Result<TraceTable> {
    if p >= 1 << 16 {
        return Err(Error::InvalidInput(format!("p = {p} too large for the trace table")));
    }
    let field = ExtensionField::new(p, k)?;
    let n_order_u128 = field.order() - 1;
    let n_order = u64::try_from(n_order_u128)
        .map_err(|_| Error::InvalidInput(format!("p^{k} − 1 does not fit u64")))?;
    let factors = prime_factors(n_order);
    let generator = field
        .enumerate_nonzero()
        .find(|z| factors.iter().all(|&t| field.pow(z, (n_order / t) as u128) != field.one()))
        .ok_or_else(|| Error::Internal("no generator found in F_{p^k}*".into()))?;
    let mut traces = Vec::with_capacity(n_order as usize);
    let mut power = field.one();
    for _ in 0..n_order {
        traces.push(field.absolute_trace(&power) as u16);
        power = field.mul(&power, &generator);
    }
    if power != field.one() {
        return Err(Error::Internal("generator order mismatch: g^N ≠ 1".into()));
    }
    Ok(TraceTable { n_order, traces })
}

/// The exponential sum S_k as an element of Z[ζ_p]: counts per trace value,
/// folded once into the power basis.  The count total is asserted to be
/// (p^k − 1)^n.
pub fn exponential_sum(
    family: &KloostermanFamily,
    p: u64,
    lambda: u64,
    k: usize,
    budget: u128,
) -> Result<CyclotomicInteger> {
    validate_family_inputs(family, p, lambda)?;
    if k == 0 {
        return Err(Error::InvalidInput("k must be ≥ 1".into()));
    }
    let needed = check_budget(p, k, family.n(), budget)?;
    let table = build_trace_table(p, k)?;
    let counts = count_trace_values(family, p, lambda, &table);
    let total: u128 = counts.iter().map(|&c| c as u128).sum();
    assert_eq!(total, needed, "trace-value counts must cover every point");
    CyclotomicInteger::from_counts(p, &counts)
}

fn count_trace_values(
    family: &KloostermanFamily,
    p: u64,
    lambda: u64,
    table: &TraceTable,
) -> Vec<u64> {
    let n = family.n();
    let nn = table.n_order;
    let a: Vec<u64> = family.a().iter().map(|&x| x as u64 % nn).collect();
    let d: Vec<u64> = family.d().iter().map(|&x| x as u64 % nn).collect();
    let lam = lambda % p;
    let mut counts = vec![0u64; p as usize];
    let mut e = vec![0u64; n];
    loop {
        let mut t: u64 = 0;
        let mut s: u64 = 0;
        for i in 0..n {
            t += table.traces[((a[i] as u128 * e[i] as u128) % nn as u128) as usize] as u64;
            s = ((s as u128 + d[i] as u128 * e[i] as u128) % nn as u128) as u64;
        }
        t += lam * table.traces[((nn - s) % nn) as usize] as u64;
        counts[(t % p) as usize] += 1;

        let mut i = 0;
        while i < n {
            e[i] += 1;
            if e[i] < nn {
                break;
            }
            e[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    counts
}

/// S_1..S_{k_max}, budget-checked on the largest k first so an over-budget
/// request fails before any work.
pub fn exponential_sums(
    family: &KloostermanFamily,
    p: u64,
    lambda: u64,
    k_max: usize,
    budget: u128,
) -> Result<Vec<CyclotomicInteger>> {
    validate_family_inputs(family, p, lambda)?;
    check_budget(p, k_max, family.n(), budget)?;
    (1..=k_max).map(|k| exponential_sum(family, p, lambda, k, budget)).collect()
}

/// Newton's identities: with power sums p_k = (−1)^n S_k and A_0 = 1,
/// m·A_m = −Σ_{i=1}^{m} p_i·A_{m−i}.  Every division by m must be exact —
/// a non-integral A_m signals wrong sums or a wrong degree.
pub fn newton_identities(sums: &[CyclotomicInteger], n: usize) -> Result<LPolynomial> {
    if sums.is_empty() {
        return Err(Error::InvalidInput("need at least S_1".into()));
    }
    let p = sums[0].p();
    if sums.iter().any(|s| s.p() != p) {
        return Err(Error::InvalidInput("mixed cyclotomic orders in sums".into()));
    }
    let degree = sums.len();
    let power_sums: Vec<CyclotomicInteger> =
        sums.iter().map(|s| if n % 2 == 0 { s.clone() } else { s.neg() }).collect();
    let mut coeffs = vec![CyclotomicInteger::from_int(p, 1)];
    for m in 1..=degree {
        let mut acc = CyclotomicInteger::zero(p);
        for i in 1..=m {
            acc = acc.add(&power_sums[i - 1].mul(&coeffs[m - i])?)?;
        }
        coeffs.push(acc.neg().div_exact(m as i64)?);
    }
    Ok(LPolynomial { degree, coeffs, sign: if n % 2 == 1 { 1 } else { -1 } })
}

/// ord_q of z ∈ Z[ζ_p] with q = p: substitute ζ = 1 − u in the
/// representing polynomial, so z = Σ b_m u^m with u the uniformizer 1 − ζ;
/// then ord_π(z) = min over nonzero b_m of ((p−1)·ord_p(b_m) + m), which is
/// exact because the candidates are pairwise distinct mod p−1, and
/// ord_q = ord_π/(p−1).  Zero maps to infinity.
pub fn pi_adic_valuation(z: &CyclotomicInteger) -> Valuation {
    if z.is_zero() {
        return Valuation::Infinite;
    }
    let p = z.p();
    let len = (p - 1) as usize;
    // b_m = ±Σ_{j≥m} C(j,m)·c_j; the sign (−1)^m does not affect ord_p
    let mut best: Option<i64> = None;
    for m in 0..len {
        let mut binom = BigInt::from(1); // C(m, m)
        let mut b = BigInt::zero();
        for j in m..len {
            if j > m {
                // C(j,m) = C(j−1,m)·j/(j−m)
                binom = binom * BigInt::from(j as i64) / BigInt::from((j - m) as i64);
            }
            b += &binom * &z.coeffs()[j];
        }
        if b.is_zero() {
            continue;
        }
        let mut ord_p: i64 = 0;
        let p_big = BigInt::from(p);
        while (&b % &p_big).is_zero() {
            b /= &p_big;
            ord_p += 1;
        }
        let candidate = (p as i64 - 1) * ord_p + m as i64;
        best = Some(match best {
            None => candidate,
            Some(cur) => cur.min(candidate),
        });
    }
    match best {
        Some(v) => Valuation::Finite(rat(v, p as i64 - 1)),
        None => Valuation::Infinite,
    }
}

/// The degree of the L-polynomial, |𝓑|, as a usize.
pub fn l_degree(family: &KloostermanFamily) -> Result<usize> {
    usize::try_from(family.basis_cardinality_formula())
        .map_err(|_| Error::InvalidInput("basis cardinality exceeds usize".into()))
}

/// Full pipeline: S_1..S_D → Newton identities → valuations → lower hull.
pub fn newton_polygon_bruteforce(
    family: &KloostermanFamily,
    p: u64,
    lambda: u64,
    budget: u128,
) -> Result<Polygon> {
    let lp = l_polynomial(family, p, lambda, budget)?;
    let points: Vec<(u64, Valuation)> = lp
        .coeffs
        .iter()
        .enumerate()
        .map(|(m, a)| (m as u64, pi_adic_valuation(a)))
        .collect();
    newton_polygon(&points)
}

/// S_1..S_D assembled into the L-polynomial.
pub fn l_polynomial(
    family: &KloostermanFamily,
    p: u64,
    lambda: u64,
    budget: u128,
) -> Result<LPolynomial> {
    let degree = l_degree(family)?;
    let sums = exponential_sums(family, p, lambda, degree, budget)?;
    newton_identities(&sums, family.n())
}

/// Predict S_{D+1} from A_1..A_D via the power-sum recurrence
/// p_{D+1} = −Σ_{i=1}^{D} A_i·p_{D+1−i} (A_{D+1} = 0 for a degree-D
/// polynomial) and compare with the brute-force value.
pub fn consistency_check_extra_sum(
    family: &KloostermanFamily,
    p: u64,
    lambda: u64,
    budget: u128,
) -> Result<bool> {
    let degree = l_degree(family)?;
    let n = family.n();
    check_budget(p, degree + 1, n, budget)?;
    let sums = exponential_sums(family, p, lambda, degree + 1, budget)?;
    let lp = newton_identities(&sums[..degree], n)?;
    let power_sums: Vec<CyclotomicInteger> =
        sums.iter().map(|s| if n % 2 == 0 { s.clone() } else { s.neg() }).collect();
    let mut acc = CyclotomicInteger::zero(p);
    for i in 1..=degree {
        acc = acc.add(&lp.coeffs[i].mul(&power_sums[degree + 1 - i - 1])?)?;
    }
    let predicted_power_sum = acc.neg();
    let predicted_s = if n % 2 == 0 { predicted_power_sum.clone() } else { predicted_power_sum.neg() };
    Ok(predicted_s == sums[degree])
}
