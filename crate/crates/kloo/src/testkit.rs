//! Independent oracles for tests.
//!
//! Everything here recomputes results along a different path from the main
//! implementation: reduction via row-reduced relation lattices instead of
//! the constructive rewriter, weights via exact linear programming over the
//! generator rays, invariant factors via gcds of minors, and exponential
//! sums via per-point field arithmetic with direct ζ-power accumulation.
//! Compiled only for tests (feature `testkit`).

use crate::ffield::ExtensionField;
use crate::graded::{graded_multiply, jacobian_term, GradedElement};
use crate::lattice::KloostermanFamily;
use crate::lfunc::cyclotomic::CyclotomicInteger;
use crate::{rat, Error, LatticePoint, Rat, Result};
use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

// ---------------------------------------------------------------------------
// Reduction oracle: row-reduce the weight-graded relation lattice.
// ---------------------------------------------------------------------------

type LevelKey = (Vec<i64>, Vec<i64>, u64, u64, Rat);

struct Level {
    cols: Vec<LatticePoint>,
    col_index: HashMap<LatticePoint, usize>,
    /// Echelon rows, each normalized to pivot coefficient 1, with their
    /// pivot column; sorted by pivot column.
    rows: Vec<(usize, Vec<u64>)>,
    basis_start: usize,
}

/// Reduces monomials to 𝓑 by linear algebra: the relations of one weight
/// level are {F̄_l ⋆ x^u : w(u) = W − 1}; row-reducing them with non-𝓑
/// columns first must pivot on every non-𝓑 column (that is the span
/// statement, asserted here), after which eliminating e_v leaves the unique
/// 𝓑-supported residual.  Levels are cached per (family, p, λ̄, W).
pub struct ReductionOracle {
    cache: HashMap<LevelKey, Level>,
}

impl Default for ReductionOracle {
    fn default() -> Self {
        Self::new()
    }
}

/// All lattice points of weight exactly `target` (every such point
/// satisfies |uᵢ| ≤ ceil(target)·max(aᵢ, dᵢ) coordinatewise).
fn weight_level_points(family: &KloostermanFamily, target: Rat) -> Vec<LatticePoint> {
    if target < Rat::zero() {
        return Vec::new();
    }
    let cap = target.ceil().to_integer();
    let bounds: Vec<i64> = family
        .a()
        .iter()
        .zip(family.d())
        .map(|(&ai, &di)| cap * ai.max(di))
        .collect();
    let mut out = Vec::new();
    let mut u = vec![0i64; family.n()];
    fn visit(
        family: &KloostermanFamily,
        bounds: &[i64],
        target: Rat,
        u: &mut Vec<i64>,
        idx: usize,
        out: &mut Vec<LatticePoint>,
    ) {
        if idx == bounds.len() {
            if family.weight(u) == target {
                out.push(u.clone());
            }
            return;
        }
        for x in -bounds[idx]..=bounds[idx] {
            u[idx] = x;
            visit(family, bounds, target, u, idx + 1, out);
        }
        u[idx] = 0;
    }
    visit(family, &bounds, target, &mut u, 0, &mut out);
    out
}

impl ReductionOracle {
    pub fn new() -> ReductionOracle {
        ReductionOracle { cache: HashMap::new() }
    }

    fn level(
        &mut self,
        family: &KloostermanFamily,
        p: u64,
        lambda: u64,
        weight: Rat,
    ) -> Result<&Level> {
        let key: LevelKey = (family.a().to_vec(), family.d().to_vec(), p, lambda, weight);
        if !self.cache.contains_key(&key) {
            let level = build_level(family, p, lambda, weight)?;
            self.cache.insert(key.clone(), level);
        }
        Ok(self.cache.get(&key).expect("just inserted"))
    }

    /// Express x^v as a combination of basis monomials.
    pub fn reduce(
        &mut self,
        family: &KloostermanFamily,
        p: u64,
        lambda: u64,
        v: &[i64],
    ) -> Result<Vec<(u64, LatticePoint)>> {
        let weight = family.weight(v);
        let level = self.level(family, p, lambda, weight)?;
        let vi = *level
            .col_index
            .get(v)
            .ok_or_else(|| Error::Internal(format!("{v:?} missing from its weight level")))?;
        let mut residual = vec![0u64; level.cols.len()];
        residual[vi] = 1;
        for (pivot, row) in &level.rows {
            let c = residual[*pivot];
            if c != 0 {
                for (x, r) in residual.iter_mut().zip(row) {
                    *x = (*x + (p - c % p) % p * r) % p;
                }
            }
        }
        for (i, &c) in residual.iter().enumerate() {
            if i < level.basis_start && c != 0 {
                return Err(Error::Internal(format!(
                    "oracle left a non-basis residual at {:?}",
                    level.cols[i]
                )));
            }
        }
        Ok(level
            .cols
            .iter()
            .zip(&residual)
            .skip(level.basis_start)
            .filter(|(_, &c)| c != 0)
            .map(|(w, &c)| (c, w.clone()))
            .collect())
    }
}

fn build_level(
    family: &KloostermanFamily,
    p: u64,
    lambda: u64,
    weight: Rat,
) -> Result<Level> {
    // Columns: non-𝓑 points of this weight first, then 𝓑 points.
    let points = weight_level_points(family, weight);
    let mut cols: Vec<LatticePoint> =
        points.iter().filter(|u| !family.in_basis(u)).cloned().collect();
    let basis_start = cols.len();
    cols.extend(points.iter().filter(|u| family.in_basis(u)).cloned());
    let col_index: HashMap<LatticePoint, usize> =
        cols.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();

    // Generators: every F̄_l ⋆ x^u with w(u) = W − 1.
    let mut rows: Vec<(usize, Vec<u64>)> = Vec::new();
    let shift_points = weight_level_points(family, weight - Rat::one());
    for u in &shift_points {
        for l in 1..=family.n() {
            let rel = jacobian_term(family, p, lambda, l)?;
            let mon = GradedElement::monomial(family, p, lambda, 1, u)?;
            let g = graded_multiply(&rel, &mon)?;
            if g.is_zero() {
                continue;
            }
            let mut row = vec![0u64; cols.len()];
            for (term, &c) in g.terms() {
                let idx = *col_index.get(term).ok_or_else(|| {
                    Error::Internal(format!("relation term {term:?} escaped its weight level"))
                })?;
                row[idx] = (row[idx] + c) % p;
            }
            // Eliminate against existing echelon rows, then install.
            for (pivot, prow) in &rows {
                let c = row[*pivot];
                if c != 0 {
                    for (x, r) in row.iter_mut().zip(prow) {
                        *x = (*x + (p - c) % p * r) % p;
                    }
                }
            }
            if let Some(pivot) = row.iter().position(|&c| c != 0) {
                let inv = mod_inverse(row[pivot], p);
                for x in row.iter_mut() {
                    *x = *x * inv % p;
                }
                rows.push((pivot, row));
                rows.sort_by_key(|(c, _)| *c);
            }
        }
    }
    // Back-substitute to reduced echelon form so elimination in pivot order
    // is exact.
    for i in (0..rows.len()).rev() {
        let (pivot, row) = rows[i].clone();
        for (_, other) in rows.iter_mut().take(i) {
            let c = other[pivot];
            if c != 0 {
                for (x, r) in other.iter_mut().zip(&row) {
                    *x = (*x + (p - c) % p * r) % p;
                }
            }
        }
    }
    // Span statement: every non-basis column must be a pivot.
    for idx in 0..basis_start {
        if !rows.iter().any(|(pivot, _)| *pivot == idx) {
            return Err(Error::Internal(format!(
                "non-basis monomial {:?} is not eliminable at its weight level",
                cols[idx]
            )));
        }
    }
    Ok(Level { cols, col_index, rows, basis_start })
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// Weight oracle: exact linear program over the generator rays.
// ---------------------------------------------------------------------------

/// min Σ αᵢ subject to Σ αᵢ·Vᵢ = v, αᵢ ≥ 0, over V = {A₁,…,Aₙ, γ},
/// by enumerating subsets with a unique solution (every LP optimum is
/// attained at such a basic solution).
pub fn lp_weight(family: &KloostermanFamily, v: &[i64]) -> Rat {
    let n = family.n();
    let mut generators: Vec<LatticePoint> = (0..n).map(|i| family.support_vector(i)).collect();
    generators.push(family.gamma());

    let mut best: Option<Rat> = if v.iter().all(|&x| x == 0) { Some(Rat::zero()) } else { None };
    for mask in 1u32..(1 << generators.len()) {
        let chosen: Vec<usize> =
            (0..generators.len()).filter(|i| mask & (1 << i) != 0).collect();
        if let Some(alphas) = solve_unique(&generators, &chosen, v) {
            if alphas.iter().all(|a| *a >= Rat::zero()) {
                let total: Rat = alphas.iter().copied().sum();
                best = Some(match best {
                    None => total,
                    Some(b) => b.min(total),
                });
            }
        }
    }
    best.expect("the generator rays cover the lattice")
}

/// Solve Σ_{i ∈ chosen} αᵢ·Vᵢ = v exactly; None unless the solution exists
/// and is unique (columns independent).
fn solve_unique(generators: &[LatticePoint], chosen: &[usize], v: &[i64]) -> Option<Vec<Rat>> {
    let n = v.len();
    let m = chosen.len();
    // Augmented matrix n×(m+1) over Rat.
    let mut mat: Vec<Vec<Rat>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rat> =
                chosen.iter().map(|&c| rat(generators[c][r], 1)).collect();
            row.push(rat(v[r], 1));
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r0 = 0usize;
    for c in 0..m {
        let pivot = (r0..n).find(|&r| mat[r][c] != Rat::zero());
        match pivot {
            None => return None, // dependent columns: not a unique solution
            Some(pr) => {
                mat.swap(r0, pr);
                let inv = mat[r0][c];
                for x in mat[r0].iter_mut() {
                    *x = *x / inv;
                }
                for r in 0..n {
                    if r != r0 && mat[r][c] != Rat::zero() {
                        let f = mat[r][c];
                        let top = mat[r0].clone();
                        for (x, t) in mat[r].iter_mut().zip(&top) {
                            *x = *x - f * *t;
                        }
                    }
                }
                pivot_rows.push(r0);
                r0 += 1;
            }
        }
    }
    // Consistency: remaining rows must have zero RHS.
    for r in r0..n {
        if mat[r][m] != Rat::zero() {
            return None;
        }
    }
    Some((0..m).map(|c| mat[pivot_rows[c]][m]).collect())
}

// ---------------------------------------------------------------------------
// Invariant factors via gcds of minors.
// ---------------------------------------------------------------------------

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn minor_det(m: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> BigInt {
    let k = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| BigInt::from(m[r][c])).collect())
        .collect();
    // Fraction-free elimination.
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for t in 0..k {
        if a[t][t].is_zero() {
            match (t + 1..k).find(|&r| !a[r][t].is_zero()) {
                Some(r) => {
                    a.swap(t, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in t + 1..k {
            for j in t + 1..k {
                let num = &a[i][j] * &a[t][t] - &a[i][t] * &a[t][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[t][t].clone();
    }
    let d = a[k - 1][k - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Invariant factors by the elementary-divisor formula s_k = D_k/D_{k−1},
/// where D_k is the gcd of all k×k minors (D_0 = 1).  Requires a square
/// nonsingular matrix.
pub fn invariant_factors_via_minors(m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.len();
    let mut d_prev = BigInt::one();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let mut g = BigInt::zero();
        for rows in combinations(n, k) {
            for cols in combinations(n, k) {
                let det = minor_det(m, &rows, &cols);
                g = gcd_big(&g, &det);
            }
        }
        assert!(!g.is_zero(), "singular matrix passed to the minors oracle");
        let s = (&g / &d_prev).abs();
        out.push(s.to_i64().expect("invariant factor fits i64"));
        d_prev = g;
    }
    out
}

fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.abs();
    let mut y = b.abs();
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

// ---------------------------------------------------------------------------
// Slow exponential sum: per-point field arithmetic, direct ζ accumulation.
// ---------------------------------------------------------------------------

/// S_k by the definition: for every x ∈ (F_{p^k}*)^n evaluate
/// F̄(λ̄, x) = Σ xᵢ^{aᵢ} + λ̄·Π xᵢ^{−dᵢ} in the field, take the absolute
/// trace, and add ζ^t directly to the coefficient vector (with
/// ζ^{p−1} = −1 − ζ − … − ζ^{p−2} for t = p−1).
pub fn slow_exponential_sum(
    family: &KloostermanFamily,
    p: u64,
    lambda: u64,
    k: usize,
) -> Result<CyclotomicInteger> {
    crate::ffield::validate_odd_prime(p)?;
    if lambda % p == 0 {
        return Err(Error::InvalidInput("λ̄ must be nonzero".into()));
    }
    let field = ExtensionField::new(p, k)?;
    let elements: Vec<_> = field.enumerate_nonzero().collect();
    let n = family.n();
    let lam = field.from_prime(lambda);
    let mut coeffs = vec![BigInt::zero(); (p - 1) as usize];
    let mut idx = vec![0usize; n];
    loop {
        let mut value = field.zero();
        let mut product = lam.clone();
        for i in 0..n {
            let x = &elements[idx[i]];
            value = field.add(&value, &field.pow(x, family.a()[i] as u128));
            let xinv = field.inv(x)?;
            product = field.mul(&product, &field.pow(&xinv, family.d()[i] as u128));
        }
        value = field.add(&value, &product);
        let t = field.absolute_trace(&value) as usize;
        if t < (p - 1) as usize {
            coeffs[t] += 1;
        } else {
            for c in coeffs.iter_mut() {
                *c -= 1;
            }
        }
        let mut i = 0;
        while i < n {
            idx[i] += 1;
            if idx[i] < elements.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    CyclotomicInteger::new(p, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(a: &[i64], d: &[i64]) -> KloostermanFamily {
        KloostermanFamily::new(a.to_vec(), d.to_vec()).unwrap()
    }

    #[test]
    fn test_lp_weight_matches_closed_form() {
        for (a, d) in [(vec![1i64, 2], vec![1i64, 1]), (vec![1, 1], vec![1, 2]), (vec![2], vec![3])]
        {
            let f = fam(&a, &d);
            let range = 4i64;
            let mut points = Vec::new();
            if f.n() == 1 {
                for x in -range..=range {
                    points.push(vec![x]);
                }
            } else {
                for x in -range..=range {
                    for y in -range..=range {
                        points.push(vec![x, y]);
                    }
                }
            }
            for v in points {
                assert_eq!(lp_weight(&f, &v), f.weight(&v), "a={a:?} d={d:?} v={v:?}");
            }
        }
    }

    #[test]
    fn test_minors_oracle_known_values() {
        assert_eq!(invariant_factors_via_minors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(invariant_factors_via_minors(&[vec![1, -1], vec![0, -1]]), vec![1, 1]);
        assert_eq!(
            invariant_factors_via_minors(&[vec![2, 0, 0], vec![0, 4, 0], vec![0, 0, 8]]),
            vec![2, 4, 8]
        );
    }

    #[test]
    fn test_slow_sum_hand_value() {
        // a=(1), d=(1), p=3, k=1: S₁ = ζ + ζ² = −1.
        let f = fam(&[1], &[1]);
        let s = slow_exponential_sum(&f, 3, 1, 1).unwrap();
        assert_eq!(s, CyclotomicInteger::from_int(3, -1));
    }

    #[test]
    fn test_oracle_reduce_basic() {
        let f = fam(&[1], &[1]);
        let mut oracle = ReductionOracle::new();
        // x^{−1} ≡ λ̄⁻¹·x^{1}
        assert_eq!(oracle.reduce(&f, 3, 1, &[-1]).unwrap(), vec![(1, vec![1])]);
        assert_eq!(oracle.reduce(&f, 3, 2, &[-1]).unwrap(), vec![(2, vec![1])]);
        // basis points are fixed
        assert_eq!(oracle.reduce(&f, 3, 1, &[1]).unwrap(), vec![(1, vec![1])]);
        assert_eq!(oracle.reduce(&f, 3, 1, &[0]).unwrap(), vec![(1, vec![0])]);
    }
}
