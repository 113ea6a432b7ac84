//! The associated graded ring and constructive reduction to the basis 𝓑.
//!
//! Monomials multiply by x^u·x^{u′} = x^{u+u′} when u and u′ are cofacial
//! and 0 otherwise.  The relation elements F̄_l = a_l·x^{A_l} − d_l·λ̄·x^γ
//! generate the ideal modulo which every monomial is congruent to a
//! combination of basis monomials; `reduce_monomial` carries that out
//! constructively.  Every rewrite step builds its relation through the
//! honest graded product and then solves for x^v inside it, so a wrong
//! cofaciality judgement surfaces as a structural error instead of a wrong
//! coefficient.

use crate::lattice::KloostermanFamily;
use crate::{Error, LatticePoint, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// An element of the graded ring over F_p with parameter λ̄ ∈ F_p*:
/// a finite sum of monomials with nonzero residue coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedElement {
    family: KloostermanFamily,
    p: u64,
    lambda: u64,
    terms: BTreeMap<LatticePoint, u64>,
}

/// Result of reducing a monomial: a combination supported on 𝓑, the number
/// of rewrite applications, and a human-readable log of the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub combination: Vec<(u64, LatticePoint)>,
    pub steps: u64,
    pub log: Vec<String>,
}

fn validate_context(family: &KloostermanFamily, p: u64, lambda: u64) -> Result<()> {
    crate::ffield::validate_odd_prime(p)?;
    if lambda % p == 0 {
        return Err(Error::InvalidInput(format!("λ̄ = {lambda} is 0 in F_{p}")));
    }
    let _ = family;
    Ok(())
}

impl GradedElement {
    /// The zero element.
    pub fn zero(family: &KloostermanFamily, p: u64, lambda: u64) -> Result<GradedElement> {
        validate_context(family, p, lambda)?;
        Ok(GradedElement { family: family.clone(), p, lambda: lambda % p, terms: BTreeMap::new() })
    }

    /// The single monomial coeff·x^v.
    pub fn monomial(
        family: &KloostermanFamily,
        p: u64,
        lambda: u64,
        coeff: u64,
        v: &[i64],
    ) -> Result<GradedElement> {
        let mut e = GradedElement::zero(family, p, lambda)?;
        if v.len() != family.n() {
            return Err(Error::InvalidInput(format!(
                "exponent vector has length {}, expected {}",
                v.len(),
                family.n()
            )));
        }
        if coeff % p != 0 {
            e.terms.insert(v.to_vec(), coeff % p);
        }
        Ok(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> &BTreeMap<LatticePoint, u64> {
        &self.terms
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn family(&self) -> &KloostermanFamily {
        &self.family
    }

    fn same_context(&self, other: &GradedElement) -> bool {
        self.family == other.family && self.p == other.p && self.lambda == other.lambda
    }

    fn add_term(&mut self, v: &[i64], c: u64) {
        let entry = self.terms.entry(v.to_vec()).or_insert(0);
        *entry = (*entry + c) % self.p;
        if *entry == 0 {
            self.terms.remove(v);
        }
    }

    /// self + c·other (c reduced mod p).
    pub fn add_scaled(&self, other: &GradedElement, c: u64) -> Result<GradedElement> {
        if !self.same_context(other) {
            return Err(Error::InvalidInput("mismatched families in graded addition".into()));
        }
        let mut out = self.clone();
        let c = c % self.p;
        for (v, coeff) in &other.terms {
            out.add_term(v, (coeff * c) % self.p);
        }
        Ok(out)
    }
}

/// Distributive product with the cofacial-or-zero monomial rule.
pub fn graded_multiply(e1: &GradedElement, e2: &GradedElement) -> Result<GradedElement> {
    if !e1.same_context(e2) {
        return Err(Error::InvalidInput("mismatched families in graded product".into()));
    }
    let mut out = GradedElement::zero(&e1.family, e1.p, e1.lambda)?;
    for (u, c1) in &e1.terms {
        for (u2, c2) in &e2.terms {
            if e1.family.cofacial(u, u2) {
                let sum: LatticePoint = u.iter().zip(u2).map(|(&a, &b)| a + b).collect();
                out.add_term(&sum, (c1 * c2) % e1.p);
            }
        }
    }
    Ok(out)
}

/// The relation element F̄_l = a_l·x^{A_l} − d_l·λ̄·x^γ (l is 1-based).
pub fn jacobian_term(
    family: &KloostermanFamily,
    p: u64,
    lambda: u64,
    l: usize,
) -> Result<GradedElement> {
    validate_context(family, p, lambda)?;
    if l == 0 || l > family.n() {
        return Err(Error::InvalidInput(format!("index l = {l} out of range 1..={}", family.n())));
    }
    let (al, dl) = (family.a()[l - 1] as u64, family.d()[l - 1] as u64);
    if al % p == 0 || dl % p == 0 {
        return Err(Error::Degenerate(format!("p = {p} divides a_{l} or d_{l}")));
    }
    let mut e = GradedElement::zero(family, p, lambda)?;
    e.add_term(&family.support_vector(l - 1), al % p);
    let neg = (p - (dl * (lambda % p)) % p) % p;
    e.add_term(&family.gamma(), neg);
    Ok(e)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p odd prime, a ≢ 0
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

fn render_point(v: &[i64]) -> String {
    let mut s = String::from("(");
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{x}");
    }
    s.push(')');
    s
}

/// One rewrite: a relation element known to lie in the ideal, a description
/// for the log, and the monomial x^v it must contain.
struct Step {
    relation: GradedElement,
    description: String,
}

struct Reducer<'f> {
    family: &'f KloostermanFamily,
    p: u64,
    lambda: u64,
}

impl<'f> Reducer<'f> {
    /// F̄_l ⋆ x^u (l 1-based).
    fn shifted_relation(&self, l: usize, u: &[i64]) -> Result<GradedElement> {
        let rel = jacobian_term(self.family, self.p, self.lambda, l)?;
        let mon = GradedElement::monomial(self.family, self.p, self.lambda, 1, u)?;
        graded_multiply(&rel, &mon)
    }

    /// d_{i0}·(F̄_{j0} ⋆ x^u) − d_{j0}·(F̄_{i0} ⋆ x^u); the γ parts cancel
    /// identically, leaving at most the two A-shifted monomials.
    fn combo_relation(&self, j0: usize, i0: usize, u: &[i64]) -> Result<GradedElement> {
        let d = self.family.d();
        let g_j = self.shifted_relation(j0, u)?;
        let g_i = self.shifted_relation(i0, u)?;
        let zero = GradedElement::zero(self.family, self.p, self.lambda)?;
        let first = zero.add_scaled(&g_j, d[i0 - 1] as u64 % self.p)?;
        first.add_scaled(&g_i, (self.p - d[j0 - 1] as u64 % self.p) % self.p)
    }

    fn in_box(&self, v: &[i64]) -> bool {
        v.iter()
            .zip(self.family.a().iter().zip(self.family.d()))
            .all(|(&vi, (&ai, &di))| -di < vi && vi <= ai)
    }

    /// The in-box rewrite: pick the defect pair set, the dominant upper
    /// index j₀ (largest index attaining max (v_j−a_j)/d_j), the companion
    /// i₀ (least index attaining min vᵢ/dᵢ), and combine the two shifted
    /// relations at u = v − A_{j₀}.
    fn box_step(&self, v: &[i64]) -> Result<Step> {
        let n = self.family.n();
        let (a, d) = (self.family.a(), self.family.d());
        // Violated pair constraints, split by which side fails (1-based pairs i<j).
        let mut upper = Vec::new(); // (i,j): v_j·dᵢ ≥ d_j·vᵢ + a_j·dᵢ
        let mut lower = Vec::new(); // (i,j): d_j·(vᵢ−aᵢ) > dᵢ·v_j
        for i in 0..n {
            for j in i + 1..n {
                if v[j] * d[i] >= d[j] * v[i] + a[j] * d[i] {
                    upper.push((i + 1, j + 1));
                }
                if d[j] * (v[i] - a[i]) > d[i] * v[j] {
                    lower.push((i + 1, j + 1));
                }
            }
        }
        // J: indices appearing on the large side of a violated constraint.
        let mut j_set: Vec<usize> = Vec::new();
        for j in 1..=n {
            let hit = upper.iter().any(|&(_, jj)| jj == j) || lower.iter().any(|&(ii, _)| ii == j);
            if hit {
                j_set.push(j);
            }
        }
        if j_set.is_empty() {
            return Err(Error::Internal(format!(
                "monomial {} is outside 𝓑 but no pair constraint is violated",
                render_point(v)
            )));
        }
        // j₀: largest index in J attaining max (v_j − a_j)/d_j.
        let mut j0 = j_set[0];
        for &j in &j_set[1..] {
            // (v_j−a_j)/d_j ≥ (v_{j0}−a_{j0})/d_{j0} ⇔ cross-multiplied
            if (v[j - 1] - a[j - 1]) * d[j0 - 1] >= (v[j0 - 1] - a[j0 - 1]) * d[j - 1] {
                j0 = j;
            }
        }
        // I: partners of j₀ among the violated pairs.
        let mut i_set: Vec<usize> = Vec::new();
        for i in 1..=n {
            let hit = upper.iter().any(|&(ii, jj)| ii == i && jj == j0)
                || lower.iter().any(|&(ii, jj)| ii == j0 && jj == i);
            if hit {
                i_set.push(i);
            }
        }
        if i_set.is_empty() {
            return Err(Error::Internal(format!(
                "dominant index {j0} of {} has no violated partner",
                render_point(v)
            )));
        }
        // i₀: least index in I attaining min vᵢ/dᵢ.
        let mut i0 = i_set[0];
        for &i in &i_set[1..] {
            if v[i - 1] * d[i0 - 1] < v[i0 - 1] * d[i - 1] {
                i0 = i;
            }
        }
        let u: LatticePoint = v
            .iter()
            .enumerate()
            .map(|(idx, &x)| x - if idx == j0 - 1 { a[j0 - 1] } else { 0 })
            .collect();
        let relation = self.combo_relation(j0, i0, &u)?;
        let description = format!(
            "d_{i0}·(F̄_{j0} ⋆ x^{u}) − d_{j0}·(F̄_{i0} ⋆ x^{u})",
            u = render_point(&u)
        );
        Ok(Step { relation, description })
    }

    /// Rewrite for v in the nonnegative orthant with some v_j > a_j: shift
    /// down by A_j; when some coordinate is zero, combine with that index so
    /// the γ parts cancel and the monomial moves to v − A_j + A_k.
    fn orthant_step(&self, v: &[i64]) -> Result<Step> {
        let a = self.family.a();
        let j = v
            .iter()
            .zip(a)
            .position(|(&vi, &ai)| vi > ai)
            .ok_or_else(|| {
                Error::Internal(format!(
                    "orthant monomial {} has no coordinate above its cap",
                    render_point(v)
                ))
            })?
            + 1;
        let u: LatticePoint = v
            .iter()
            .enumerate()
            .map(|(idx, &x)| x - if idx == j - 1 { a[j - 1] } else { 0 })
            .collect();
        match v.iter().position(|&vi| vi == 0) {
            None => {
                let relation = self.shifted_relation(j, &u)?;
                let description = format!("F̄_{j} ⋆ x^{}", render_point(&u));
                Ok(Step { relation, description })
            }
            Some(k0) => {
                let k = k0 + 1;
                let relation = self.combo_relation(j, k, &u)?;
                let description = format!(
                    "d_{k}·(F̄_{j} ⋆ x^{u}) − d_{j}·(F̄_{k} ⋆ x^{u})",
                    u = render_point(&u)
                );
                Ok(Step { relation, description })
            }
        }
    }

    /// Rewrite for v with a negative coordinate and some v_j > a_j: a
    /// single shifted relation moves the monomial to v − A_j + γ.
    fn upper_shift_step(&self, v: &[i64]) -> Result<Step> {
        let a = self.family.a();
        let j = v.iter().zip(a).position(|(&vi, &ai)| vi > ai).expect("caller checked") + 1;
        let u: LatticePoint = v
            .iter()
            .enumerate()
            .map(|(idx, &x)| x - if idx == j - 1 { a[j - 1] } else { 0 })
            .collect();
        let relation = self.shifted_relation(j, &u)?;
        let description = format!("F̄_{j} ⋆ x^{}", render_point(&u));
        Ok(Step { relation, description })
    }

    /// Rewrite for v at or below a box floor (some v_k ≤ −d_k, no upper
    /// violations): shift by −γ at the steepest index, the least k
    /// attaining min v_j/d_j, moving the monomial to v − γ + A_k.
    fn floor_shift_step(&self, v: &[i64]) -> Result<Step> {
        let d = self.family.d();
        let mut k = 1usize;
        for j in 2..=self.family.n() {
            if v[j - 1] * d[k - 1] < v[k - 1] * d[j - 1] {
                k = j;
            }
        }
        if v[k - 1] > -d[k - 1] {
            return Err(Error::Internal(format!(
                "floor rewrite chosen for {} but no coordinate reaches its floor",
                render_point(v)
            )));
        }
        let u: LatticePoint = v.iter().zip(d).map(|(&x, &di)| x + di).collect();
        let relation = self.shifted_relation(k, &u)?;
        let description = format!("F̄_{k} ⋆ x^{}", render_point(&u));
        Ok(Step { relation, description })
    }

    fn choose_step(&self, v: &[i64]) -> Result<Step> {
        if self.in_box(v) {
            self.box_step(v)
        } else if v.iter().all(|&vi| vi >= 0) {
            self.orthant_step(v)
        } else if v.iter().zip(self.family.a()).any(|(&vi, &ai)| vi > ai) {
            self.upper_shift_step(v)
        } else {
            self.floor_shift_step(v)
        }
    }
}

/// Reduce x^v to a combination of basis monomials modulo the relations.
/// Every step solves for x^v inside an honestly computed relation element;
/// the running state is a single monomial throughout, and the step budget
/// 64·(n + Σ(aᵢ+dᵢ))·max(1, Σ|vᵢ|) is purely defensive.
pub fn reduce_monomial(
    family: &KloostermanFamily,
    p: u64,
    lambda: u64,
    v: &[i64],
) -> Result<ReductionResult> {
    validate_context(family, p, lambda)?;
    if v.len() != family.n() {
        return Err(Error::InvalidInput(format!(
            "exponent vector has length {}, expected {}",
            v.len(),
            family.n()
        )));
    }
    if family.a().iter().chain(family.d()).any(|&x| x as u64 % p == 0) {
        return Err(Error::Degenerate(format!("p = {p} divides some aᵢ or dᵢ")));
    }

    let reducer = Reducer { family, p, lambda: lambda % p };
    let spread: i64 = family.a().iter().sum::<i64>() + family.d().iter().sum::<i64>();
    let size: i64 = v.iter().map(|&x| x.abs()).sum();
    let budget = 64u64 * (family.n() as i64 + spread) as u64 * size.max(1) as u64;

    let mut coeff = 1u64;
    let mut point = v.to_vec();
    let mut steps = 0u64;
    let mut log = Vec::new();

    while !family.in_basis(&point) {
        if steps >= budget {
            return Err(Error::Internal(format!(
                "step budget {budget} exhausted reducing {}",
                render_point(v)
            )));
        }
        let step = reducer.choose_step(&point)?;
        // Solve for x^point inside the relation: relation ≡ 0 means
        // α·x^point + rest ≡ 0, so x^point ≡ −α⁻¹·rest.
        let alpha = *step.relation.terms().get(&point).ok_or_else(|| {
            Error::Internal(format!(
                "relation {} does not contain x^{}",
                step.description,
                render_point(&point)
            ))
        })?;
        let rest: Vec<(LatticePoint, u64)> = step
            .relation
            .terms()
            .iter()
            .filter(|(w, _)| w.as_slice() != point.as_slice())
            .map(|(w, c)| (w.clone(), *c))
            .collect();
        if rest.len() > 1 {
            return Err(Error::Internal(format!(
                "relation {} leaves {} residual terms, expected at most 1",
                step.description,
                rest.len()
            )));
        }
        steps += 1;
        match rest.first() {
            None => {
                log.push(format!(
                    "x^{} ≡ 0 via {}",
                    render_point(&point),
                    step.description
                ));
                coeff = 0;
                break;
            }
            Some((w, c)) => {
                // x^point ≡ (−c/α)·x^w
                let factor = (p - c % p) % p * inv_mod(alpha, p) % p;
                coeff = coeff * factor % p;
                log.push(format!(
                    "x^{} ≡ {}·x^{} via {}",
                    render_point(&point),
                    factor,
                    render_point(w),
                    step.description
                ));
                point = w.clone();
                if coeff == 0 {
                    break;
                }
            }
        }
    }

    let combination = if coeff == 0 {
        Vec::new()
    } else {
        assert!(family.in_basis(&point), "reduction left the basis invariant unsatisfied");
        vec![(coeff, point)]
    };
    Ok(ReductionResult { combination, steps, log })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(a: &[i64], d: &[i64]) -> KloostermanFamily {
        KloostermanFamily::new(a.to_vec(), d.to_vec()).unwrap()
    }

    #[test]
    fn test_graded_multiply_examples() {
        let f = fam(&[1, 1], &[1, 1]);
        let m = |c: u64, v: &[i64]| GradedElement::monomial(&f, 3, 1, c, v).unwrap();

        let prod = graded_multiply(&m(1, &[1, 0]), &m(1, &[0, 1])).unwrap();
        assert_eq!(prod, m(1, &[1, 1]));

        // (1,0) lies on the closed face through A₁ and γ, so the product
        // with x^γ survives: w((1,0)) + w(γ) = 2 = w((0,−1)) exactly.
        let prod = graded_multiply(&m(1, &[1, 0]), &m(1, &[-1, -1])).unwrap();
        assert_eq!(prod, m(1, &[0, -1]));

        // a strictly positive point only sits over Δ₀ and misses γ
        let prod = graded_multiply(&m(1, &[1, 1]), &m(1, &[-1, -1])).unwrap();
        assert!(prod.is_zero());

        let one = m(1, &[0, 0]);
        for v in [[2i64, -1], [-3, -2], [0, 5]] {
            assert_eq!(graded_multiply(&one, &m(2, &v)).unwrap(), m(2, &v));
        }
    }

    #[test]
    fn test_graded_multiply_rejects_mismatch() {
        let f = fam(&[1, 1], &[1, 1]);
        let g = fam(&[1, 2], &[1, 1]);
        let e1 = GradedElement::monomial(&f, 3, 1, 1, &[0, 0]).unwrap();
        let e2 = GradedElement::monomial(&g, 3, 1, 1, &[0, 0]).unwrap();
        let e3 = GradedElement::monomial(&f, 3, 2, 1, &[0, 0]).unwrap();
        assert!(graded_multiply(&e1, &e2).is_err());
        assert!(graded_multiply(&e1, &e3).is_err());
    }

    #[test]
    fn test_jacobian_term_examples() {
        let f = fam(&[1, 1], &[1, 1]);
        let j1 = jacobian_term(&f, 3, 1, 1).unwrap();
        let expected: Vec<(LatticePoint, u64)> =
            vec![(vec![-1, -1], 2), (vec![1, 0], 1)];
        assert_eq!(j1.terms().iter().map(|(v, &c)| (v.clone(), c)).collect::<Vec<_>>(), expected);

        let g = fam(&[2, 3], &[1, 1]);
        let j2 = jacobian_term(&g, 7, 2, 2).unwrap();
        let expected: Vec<(LatticePoint, u64)> =
            vec![(vec![-1, -1], 5), (vec![0, 3], 3)];
        assert_eq!(j2.terms().iter().map(|(v, &c)| (v.clone(), c)).collect::<Vec<_>>(), expected);

        let h = fam(&[1], &[1]);
        let j3 = jacobian_term(&h, 5, 1, 1).unwrap();
        let expected: Vec<(LatticePoint, u64)> = vec![(vec![-1], 4), (vec![1], 1)];
        assert_eq!(j3.terms().iter().map(|(v, &c)| (v.clone(), c)).collect::<Vec<_>>(), expected);

        assert!(jacobian_term(&fam(&[3, 1], &[1, 1]), 3, 1, 1).is_err());
        assert!(jacobian_term(&h, 5, 1, 0).is_err());
        assert!(jacobian_term(&h, 5, 1, 2).is_err());
        assert!(jacobian_term(&h, 5, 5, 1).is_err());
    }

    #[test]
    fn test_reduce_basis_identity() {
        let f = fam(&[1, 2], &[1, 1]);
        for v in f.enumerate_basis().points {
            let r = reduce_monomial(&f, 3, 1, &v).unwrap();
            assert_eq!(r.combination, vec![(1, v.clone())]);
            assert_eq!(r.steps, 0);
        }
    }

    #[test]
    fn test_reduce_single_relation_n1() {
        // x^{−1} ≡ λ̄⁻¹·x^{1} via F̄₁ ⋆ x^{0}
        let f = fam(&[1], &[1]);
        let r = reduce_monomial(&f, 3, 1, &[-1]).unwrap();
        assert_eq!(r.combination, vec![(1, vec![1])]);
        assert_eq!(r.steps, 1);
        // with λ̄ = 2: coefficient a₁/(d₁λ̄) = 2⁻¹ = 2 mod 3
        let r = reduce_monomial(&f, 3, 2, &[-1]).unwrap();
        assert_eq!(r.combination, vec![(2, vec![1])]);
    }

    #[test]
    fn test_reduce_annihilation() {
        // (2,1) with a=(1,1): v−A₁ = (1,1) is not cofacial with γ, so the
        // shifted relation has a single term and x^v ≡ 0.
        let f = fam(&[1, 1], &[1, 1]);
        let r = reduce_monomial(&f, 3, 1, &[2, 1]).unwrap();
        assert!(r.combination.is_empty());
        assert!(r.steps >= 1);
    }

    #[test]
    fn test_reduce_deep_negative_n1() {
        let f = fam(&[1], &[1]);
        // v < −d₁ annihilates; v = −d₁ maps to x^{a₁}
        let r = reduce_monomial(&f, 5, 1, &[-3]).unwrap();
        assert!(r.combination.is_empty());
        let r = reduce_monomial(&f, 5, 1, &[7]).unwrap();
        assert!(r.combination.is_empty());
    }

    #[test]
    fn test_reduce_rejects_bad_input() {
        let f = fam(&[1, 1], &[1, 1]);
        assert!(matches!(reduce_monomial(&f, 3, 3, &[0, 0]), Err(Error::InvalidInput(_))));
        assert!(matches!(reduce_monomial(&f, 3, 1, &[0]), Err(Error::InvalidInput(_))));
        assert!(matches!(reduce_monomial(&f, 4, 1, &[0, 0]), Err(Error::InvalidInput(_))));
        let g = fam(&[3, 1], &[1, 1]);
        assert!(matches!(reduce_monomial(&g, 3, 1, &[0, 0]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn test_reduce_idempotent_and_in_basis() {
        let f = fam(&[1, 2], &[2, 1]);
        for p in [3u64, 5] {
            for lambda in 1..p {
                for v1 in -3i64..=3 {
                    for v2 in -3i64..=3 {
                        let r = reduce_monomial(&f, p, lambda, &[v1, v2]).unwrap();
                        for (c, w) in &r.combination {
                            assert!(*c > 0 && *c < p);
                            assert!(f.in_basis(w), "({v1},{v2}) escaped to {w:?}");
                            let again = reduce_monomial(&f, p, lambda, w).unwrap();
                            assert_eq!(again.combination, vec![(1, w.clone())]);
                            assert_eq!(again.steps, 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn test_reduce_single_term_in_box() {
        // Inputs inside the box −dᵢ < vᵢ ≤ aᵢ reduce to at most one term.
        let f = fam(&[2, 3], &[1, 2]);
        for v1 in 0i64..=2 {
            for v2 in -1i64..=3 {
                let r = reduce_monomial(&f, 5, 2, &[v1, v2]).unwrap();
                assert!(r.combination.len() <= 1, "({v1},{v2}) gave {:?}", r.combination);
            }
        }
    }

    #[test]
    fn test_reduce_weight_homogeneous_chain() {
        // Relations preserve weight, so any nonzero result has w equal to
        // the input's weight.
        let f = fam(&[1, 2], &[1, 1]);
        for v1 in -4i64..=4 {
            for v2 in -4i64..=4 {
                let v = vec![v1, v2];
                let r = reduce_monomial(&f, 3, 1, &v).unwrap();
                if let Some((_, w)) = r.combination.first() {
                    assert_eq!(f.weight(w), f.weight(&v), "weight drift at {v:?}");
                }
            }
        }
    }
}
