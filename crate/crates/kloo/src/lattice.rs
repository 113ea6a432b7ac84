//! Family parameters, the weight function on the cone decomposition of Zⁿ,
//! the monomial basis 𝓑, and the counting/bijection combinatorics that prove
//! `|𝓑| = Π aᵢ + Σ_j d_j Π_{i≠j} aᵢ`.
//!
//! Geometry in brief: the Newton polytope Δ of F̄ is the convex hull of the
//! support vectors A₁ = a₁e₁, …, Aₙ = aₙeₙ and γ = (−d₁,…,−dₙ) together with
//! the origin.  Its codimension-1 faces avoiding the origin are Δ₀ (spanned by
//! the Aᵢ) and Δ₁,…,Δₙ (face Δ_k spanned by γ and the Aᵢ with i ≠ k).  The
//! corresponding closed cones
//!
//! ```text
//! C(Δ₀) = {u : uᵢ ≥ 0 ∀i},
//! C(Δ_k) = {u : u_k ≤ 0, u_j − (d_j/d_k)u_k ≥ 0 ∀j ≠ k}
//! ```
//!
//! cover Zⁿ, and on each cone the weight w(u) — the smallest c ≥ 0 with
//! u ∈ c·Δ — is given by a closed-form rational expression.  Two points are
//! cofacial when some cone contains both; that relation drives the graded
//! multiplication in [`crate::graded`].

use crate::{rat, Error, LatticePoint, Rat, Result};
use num::integer::lcm;
use num::traits::Zero;

/// The exponent data (n, a₁..aₙ, d₁..dₙ) of the family
/// F̄(λ̄, x) = Σᵢ xᵢ^{aᵢ} + λ̄·Πᵢ xᵢ^{−dᵢ}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KloostermanFamily {
    a: Vec<i64>,
    d: Vec<i64>,
}

/// Largest admitted exponent; keeps every i64 product in this module far
/// from overflow.
const MAX_EXPONENT: i64 = 1 << 20;

impl KloostermanFamily {
    pub fn new(a: Vec<i64>, d: Vec<i64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidInput("need at least one variable".into()));
        }
        if a.len() != d.len() {
            return Err(Error::InvalidInput(format!(
                "exponent lists have different lengths ({} vs {})",
                a.len(),
                d.len()
            )));
        }
        for (name, list) in [("a", &a), ("d", &d)] {
            if let Some(&bad) = list.iter().find(|&&x| x < 1 || x > MAX_EXPONENT) {
                return Err(Error::InvalidInput(format!(
                    "exponent {name} entry {bad} out of range [1, {MAX_EXPONENT}]"
                )));
            }
        }
        Ok(KloostermanFamily { a, d })
    }

    /// Number of variables n.
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    /// Support vector A_{i+1} = a_{i+1}·e_{i+1} (0-based index).
    pub fn support_vector(&self, i: usize) -> LatticePoint {
        let mut v = vec![0; self.n()];
        v[i] = self.a[i];
        v
    }

    /// The pole support vector γ = (−d₁, …, −dₙ).
    pub fn gamma(&self) -> LatticePoint {
        self.d.iter().map(|&di| -di).collect()
    }

    /// e* = lcm(a₁,d₁) for n = 1 and lcm(a₁..aₙ)·lcm(d₁..dₙ) for n ≥ 2.
    ///
    /// Every weight denominator divides e*, so Hodge slopes live in (1/e*)Z.
    pub fn e_star(&self) -> i64 {
        let lcm_a = self.a.iter().copied().fold(1i64, lcm);
        let lcm_d = self.d.iter().copied().fold(1i64, lcm);
        if self.n() == 1 {
            lcm(self.a[0], self.d[0])
        } else {
            lcm_a * lcm_d
        }
    }

    /// All k ∈ {0,…,n} with v ∈ C(Δ_k).  Nonempty: the cones cover Zⁿ.
    pub fn cone_membership(&self, v: &[i64]) -> Vec<usize> {
        assert_eq!(v.len(), self.n(), "point has wrong dimension");
        let mut cones = Vec::new();
        if v.iter().all(|&vi| vi >= 0) {
            cones.push(0);
        }
        for k in 0..self.n() {
            // v_k ≤ 0 and v_j − (d_j/d_k)v_k ≥ 0 for all j ≠ k, cleared of
            // denominators (d_k > 0).
            if v[k] <= 0
                && (0..self.n()).all(|j| j == k || v[j] * self.d[k] >= self.d[j] * v[k])
            {
                cones.push(k + 1);
            }
        }
        assert!(!cones.is_empty(), "cones failed to cover {v:?}");
        cones
    }

    /// True iff u and v lie in a common closed cone C(Δ_k).
    ///
    /// The zero vector belongs to every cone, so it is automatically cofacial
    /// with everything — needed so multiplication by constants is identity.
    pub fn cofacial(&self, u: &[i64], v: &[i64]) -> bool {
        let cu = self.cone_membership(u);
        let cv = self.cone_membership(v);
        cu.iter().any(|k| cv.contains(k))
    }

    fn weight_formula(&self, cone: usize, v: &[i64]) -> Rat {
        if cone == 0 {
            return (0..self.n()).map(|i| rat(v[i], self.a[i])).sum();
        }
        let k = cone - 1;
        // w(v) = −v_k·(1 + Σᵢ dᵢ/aᵢ − d_k/a_k)/d_k + Σ_{i≠k} vᵢ/aᵢ
        let mut factor = rat(1, 1);
        for i in 0..self.n() {
            if i != k {
                factor += rat(self.d[i], self.a[i]);
            }
        }
        let mut w = rat(-v[k], self.d[k]) * factor;
        for i in 0..self.n() {
            if i != k {
                w += rat(v[i], self.a[i]);
            }
        }
        w
    }

    /// The weight w(v): the smallest c ≥ 0 with v ∈ c·Δ.
    ///
    /// Evaluates the closed-form expression of every cone containing v and
    /// asserts they agree — points on cone boundaries satisfy several
    /// formulas, and a disagreement would mean a transcription error.
    pub fn weight(&self, v: &[i64]) -> Rat {
        let cones = self.cone_membership(v);
        let w = self.weight_formula(cones[0], v);
        for &k in &cones[1..] {
            let w2 = self.weight_formula(k, v);
            assert_eq!(w, w2, "weight formulas disagree on {v:?} (cones {cones:?})");
        }
        assert!(w >= Rat::zero(), "negative weight {w} at {v:?}");
        w
    }

    /// ⌈x/y⌉ for y > 0.
    fn ceil_div(x: i64, y: i64) -> i64 {
        debug_assert!(y > 0);
        x.div_euclid(y) + i64::from(x.rem_euclid(y) != 0)
    }

    /// Admissible range for coordinate j given the previous coordinates,
    /// intersecting the box −d_j < v_j ≤ a_j with every active pair
    /// constraint (i, j):
    ///
    /// ```text
    /// (d_j/d_i)(v_i − a_i) ≤ v_j < (d_j/d_i)v_i + a_j .
    /// ```
    ///
    /// `pair_limit` is the number of leading coordinates among which pair
    /// constraints apply: n for 𝓑, n−1 for 𝓐.
    fn coord_range(&self, prefix: &[i64], j: usize, pair_limit: usize) -> (i64, i64) {
        let mut lo = -self.d[j] + 1;
        let mut hi = self.a[j];
        if j < pair_limit {
            for i in 0..j {
                lo = lo.max(Self::ceil_div(self.d[j] * (prefix[i] - self.a[i]), self.d[i]));
                hi = hi.min(Self::ceil_div(self.d[j] * prefix[i] + self.d[i] * self.a[j], self.d[i]) - 1);
            }
        }
        (lo, hi)
    }

    fn visit_points(&self, pair_limit: usize, f: &mut dyn FnMut(&[i64])) {
        let mut prefix = Vec::with_capacity(self.n());
        self.visit_rec(pair_limit, &mut prefix, f);
    }

    fn visit_rec(&self, pair_limit: usize, prefix: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        let j = prefix.len();
        if j == self.n() {
            f(prefix);
            return;
        }
        let (lo, hi) = self.coord_range(prefix, j, pair_limit);
        for vj in lo..=hi {
            prefix.push(vj);
            self.visit_rec(pair_limit, prefix, f);
            prefix.pop();
        }
    }

    /// Count of the point set visited by [`Self::visit_points`], with the
    /// last level counted as a closed range instead of iterated.
    fn count_points(&self, pair_limit: usize) -> u64 {
        let mut prefix = Vec::with_capacity(self.n());
        self.count_rec(pair_limit, &mut prefix)
    }

    fn count_rec(&self, pair_limit: usize, prefix: &mut Vec<i64>) -> u64 {
        let j = prefix.len();
        let (lo, hi) = self.coord_range(prefix, j, pair_limit);
        if j == self.n() - 1 {
            return (hi - lo + 1).max(0) as u64;
        }
        let mut total = 0;
        for vj in lo..=hi {
            prefix.push(vj);
            total += self.count_rec(pair_limit, prefix);
            prefix.pop();
        }
        total
    }

    /// Membership test for 𝓑 without enumerating.
    pub fn in_basis(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.n());
        let n = self.n();
        for i in 0..n {
            if v[i] <= -self.d[i] || v[i] > self.a[i] {
                return false;
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                // (d_j/d_i)(v_i − a_i) ≤ v_j < (d_j/d_i)v_i + a_j, cleared.
                if self.d[j] * (v[i] - self.a[i]) > self.d[i] * v[j] {
                    return false;
                }
                if self.d[i] * v[j] >= self.d[j] * v[i] + self.d[i] * self.a[j] {
                    return false;
                }
            }
        }
        true
    }

    /// Enumerate 𝓑 in lexicographic order with weights attached.
    ///
    /// Asserts the counting identity |𝓑| = Π aᵢ + Σ_j d_j Π_{i≠j} aᵢ.
    pub fn enumerate_basis(&self) -> BasisSet {
        let mut points = Vec::new();
        self.visit_points(self.n(), &mut |v| points.push(v.to_vec()));
        assert_eq!(
            points.len() as u64,
            self.basis_cardinality_formula(),
            "basis count disagrees with the closed formula for a={:?} d={:?}",
            self.a,
            self.d
        );
        let weights = points.iter().map(|v| self.weight(v)).collect();
        BasisSet { points, weights }
    }

    /// |𝓑| computed by the shared range recursion, without materializing
    /// points or weights.
    pub fn basis_count(&self) -> u64 {
        self.count_points(self.n())
    }

    /// Π aᵢ + Σ_j d_j Π_{i≠j} aᵢ  (= a₁ + d₁ for n = 1).
    pub fn basis_cardinality_formula(&self) -> u64 {
        let prod: u64 = self.a.iter().map(|&x| x as u64).product();
        let mixed: u64 = (0..self.n())
            .map(|j| {
                self.d[j] as u64
                    * (0..self.n())
                        .filter(|&i| i != j)
                        .map(|i| self.a[i] as u64)
                        .product::<u64>()
            })
            .sum();
        prod + mixed
    }

    fn require_n_at_least_2(&self) -> Result<()> {
        if self.n() < 2 {
            return Err(Error::InvalidInput(
                "set enumeration requires n ≥ 2 (for n = 1 the basis is the interval (−d₁, a₁])".into(),
            ));
        }
        Ok(())
    }

    /// 𝓐: box points satisfying the pair inequalities among the first n−1
    /// coordinates only.
    pub fn enumerate_a(&self) -> Result<Vec<LatticePoint>> {
        self.require_n_at_least_2()?;
        let mut points = Vec::new();
        self.visit_points(self.n() - 1, &mut |v| points.push(v.to_vec()));
        Ok(points)
    }

    /// 𝓐₀ = 𝓐 \ 𝓑.
    pub fn enumerate_a0(&self) -> Result<Vec<LatticePoint>> {
        Ok(self.enumerate_a()?.into_iter().filter(|v| !self.in_basis(v)).collect())
    }

    /// True iff some i ≤ n−1 has vₙ ≥ (dₙ/dᵢ)vᵢ + aₙ.
    fn tbar_condition(&self, v: &[i64]) -> bool {
        let n = self.n();
        (0..n - 1).any(|i| v[n - 1] * self.d[i] >= self.d[n - 1] * v[i] + self.a[n - 1] * self.d[i])
    }

    /// True iff some i ≤ n−1 has (dₙ/dᵢ)(vᵢ − aᵢ) > vₙ.
    fn s_condition(&self, v: &[i64]) -> bool {
        let n = self.n();
        (0..n - 1).any(|i| self.d[n - 1] * (v[i] - self.a[i]) > v[n - 1] * self.d[i])
    }

    /// True iff aₙ − dₙ < vₙ ≤ aₙ and some i ≤ n−1 has −dᵢ < vᵢ ≤ 0.
    fn m_condition(&self, v: &[i64]) -> bool {
        let n = self.n();
        self.a[n - 1] - self.d[n - 1] < v[n - 1]
            && v[n - 1] <= self.a[n - 1]
            && (0..n - 1).any(|i| -self.d[i] < v[i] && v[i] <= 0)
    }

    /// 𝓣̄: members of 𝓐 violating the upper pair bound against coordinate n.
    pub fn enumerate_t_bar(&self) -> Result<Vec<LatticePoint>> {
        Ok(self.enumerate_a()?.into_iter().filter(|v| self.tbar_condition(v)).collect())
    }

    /// 𝓢: members of 𝓐 violating the lower pair bound against coordinate n.
    pub fn enumerate_s(&self) -> Result<Vec<LatticePoint>> {
        Ok(self.enumerate_a()?.into_iter().filter(|v| self.s_condition(v)).collect())
    }

    /// 𝓜: members of 𝓐 with aₙ−dₙ < vₙ ≤ aₙ and some vᵢ ∈ (−dᵢ, 0], i ≤ n−1.
    pub fn enumerate_m(&self) -> Result<Vec<LatticePoint>> {
        Ok(self.enumerate_a()?.into_iter().filter(|v| self.m_condition(v)).collect())
    }

    /// 𝓣: members of 𝓜 with vₙ < (dₙ/d_j)v_j + aₙ for every j ≤ n−1.
    pub fn enumerate_t(&self) -> Result<Vec<LatticePoint>> {
        Ok(self
            .enumerate_a()?
            .into_iter()
            .filter(|v| self.m_condition(v) && !self.tbar_condition(v))
            .collect())
    }

    /// dₙ·Σ_{j≤n−1} d_j·Π_{i≠j, i≤n−1} aᵢ, the closed form for |𝓜|.
    pub fn m_cardinality_formula(&self) -> u64 {
        let n = self.n();
        self.d[n - 1] as u64
            * (0..n - 1)
                .map(|j| {
                    self.d[j] as u64
                        * (0..n - 1)
                            .filter(|&i| i != j)
                            .map(|i| self.a[i] as u64)
                            .product::<u64>()
                })
                .sum::<u64>()
    }

    /// ψ(v) = v + A_{i₀} − Aₙ for v ∈ 𝓣, where i₀ is the least index
    /// i ≤ n−1 with −dᵢ < vᵢ ≤ 0 attaining min vᵢ/dᵢ.
    pub fn psi(&self, v: &[i64]) -> Result<LatticePoint> {
        self.require_n_at_least_2()?;
        let in_t = v.len() == self.n()
            && self.in_a_set(v)
            && self.m_condition(v)
            && !self.tbar_condition(v);
        if !in_t {
            return Err(Error::InvalidInput(format!("{v:?} is not in 𝓣")));
        }
        let n = self.n();
        let mut i0 = None;
        for i in 0..n - 1 {
            if -self.d[i] < v[i] && v[i] <= 0 {
                // keep the least index attaining the strict minimum of vᵢ/dᵢ
                match i0 {
                    None => i0 = Some(i),
                    Some(best) => {
                        if v[i] * self.d[best] < v[best] * self.d[i] {
                            i0 = Some(i);
                        }
                    }
                }
            }
        }
        let i0 = i0.expect("𝓣 membership guarantees a qualifying index");
        let mut out = v.to_vec();
        out[i0] += self.a[i0];
        out[n - 1] -= self.a[n - 1];
        Ok(out)
    }

    /// φ(u) = u − A_{j₀} + Aₙ for u ∈ 𝓢, where j₀ is the largest index
    /// j ≤ n−1 with (dₙ/d_j)(u_j − a_j) > uₙ attaining max (u_j − a_j)/d_j.
    pub fn phi(&self, u: &[i64]) -> Result<LatticePoint> {
        self.require_n_at_least_2()?;
        let in_s = u.len() == self.n() && self.in_a_set(u) && self.s_condition(u);
        if !in_s {
            return Err(Error::InvalidInput(format!("{u:?} is not in 𝓢")));
        }
        let n = self.n();
        let mut j0 = None;
        for j in 0..n - 1 {
            if self.d[n - 1] * (u[j] - self.a[j]) > u[n - 1] * self.d[j] {
                // keep the largest index attaining the maximum of (u_j−a_j)/d_j
                match j0 {
                    None => j0 = Some(j),
                    Some(best) => {
                        if (u[j] - self.a[j]) * self.d[best] >= (u[best] - self.a[best]) * self.d[j] {
                            j0 = Some(j);
                        }
                    }
                }
            }
        }
        let j0 = j0.expect("𝓢 membership guarantees a qualifying index");
        let mut out = u.to_vec();
        out[j0] -= self.a[j0];
        out[n - 1] += self.a[n - 1];
        Ok(out)
    }

    /// Membership test for 𝓐 without enumerating.
    fn in_a_set(&self, v: &[i64]) -> bool {
        let n = self.n();
        for i in 0..n {
            if v[i] <= -self.d[i] || v[i] > self.a[i] {
                return false;
            }
        }
        for j in 0..n - 1 {
            for i in 0..j {
                if self.d[j] * (v[i] - self.a[i]) > self.d[i] * v[j] {
                    return false;
                }
                if self.d[i] * v[j] >= self.d[j] * v[i] + self.d[i] * self.a[j] {
                    return false;
                }
            }
        }
        true
    }
}

/// The basis 𝓑 with the weight of each point, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSet {
    pub points: Vec<LatticePoint>,
    pub weights: Vec<Rat>,
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
