//! Ordinarity criteria via face matrices and Smith normal forms.
//!
//! Each closed codimension-one face of the polytope that avoids the origin
//! carries an n×n integer matrix whose columns are the support vectors lying
//! on that face: Δ₀ has columns A₁,…,Aₙ and Δ_j (j ≥ 1) replaces A_j by γ.
//! The last invariant factor sₙ of each face matrix controls ordinarity:
//! if p ≡ 1 (mod sₙ(Δ_j)) for every face, the Newton polygon meets the
//! Hodge polygon.  The coarser sufficient condition p ≡ 1 (mod e*) implies
//! the facial one.  Both are sufficient only — a negative answer means
//! "unknown", never "not ordinary".

use crate::lattice::KloostermanFamily;
use crate::polygon::SlopeSequence;
use crate::{rat, Error, Rat, Result};
use num::bigint::BigInt;
use num::integer::gcd;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::Integer;
use std::collections::BTreeSet;

/// Integer matrix of one closed face: columns are the support vectors on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceMatrix {
    /// Face index j ∈ {0,…,n}.
    pub face: usize,
    /// Row-major n×n matrix; column c holds one support vector.
    pub matrix: Vec<Vec<i64>>,
}

/// Diagonal of a Smith normal form: s₁ | s₂ | … | sₙ, all positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFactors {
    pub s: Vec<i64>,
}

/// Matrix of the face Δ_j.  For j = 0 the columns are A₁,…,Aₙ (a diagonal
/// matrix); for j ≥ 1 the columns are the Aᵢ with i ≠ j in index order and
/// γ in place of column j.
pub fn face_matrix(family: &KloostermanFamily, j: usize) -> Result<FaceMatrix> {
    let n = family.n();
    if j > n {
        return Err(Error::InvalidInput(format!("face index {j} out of range 0..={n}")));
    }
    let mut matrix = vec![vec![0i64; n]; n];
    for c in 0..n {
        let column = if j >= 1 && c == j - 1 { family.gamma() } else { family.support_vector(c) };
        for (r, row) in matrix.iter_mut().enumerate() {
            row[c] = column[r];
        }
    }
    Ok(FaceMatrix { face: j, matrix })
}

/// Exact determinant by fraction-free (Bareiss) elimination.
fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for jj in k + 1..n {
                let num = &a[i][jj] * &a[k][k] - &a[i][k] * &a[k][jj];
                a[i][jj] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Smith normal form diagonal of a nonsingular square integer matrix, as
/// positive invariant factors with s₁ | s₂ | … | sₙ.
///
/// Pivoting is deterministic: at each stage the smallest-magnitude nonzero
/// entry of the trailing block (first hit in row-major scan order) becomes
/// the pivot; rows and columns are cleared with floor-division quotients,
/// and a divisibility fix-up adds an offending row into the pivot row.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Result<InvariantFactors> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("matrix must be square and nonempty".into()));
    }
    let det = determinant(m);
    if det.is_zero() {
        return Err(Error::InvalidInput("matrix is singular".into()));
    }
    let mut w: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for jj in t..n {
                    if !w[i][jj].is_zero() {
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => w[i][jj].abs() < w[bi][bj].abs(),
                        };
                        if better {
                            best = Some((i, jj));
                        }
                    }
                }
            }
            let (pi, pj) =
                best.ok_or_else(|| Error::Internal("zero block in a nonsingular matrix".into()))?;
            if pi != t {
                w.swap(pi, t);
            }
            if pj != t {
                for row in w.iter_mut() {
                    row.swap(pj, t);
                }
            }

            let mut disturbed = false;
            for i in t + 1..n {
                if !w[i][t].is_zero() {
                    let q = w[i][t].div_floor(&w[t][t]);
                    for jj in t..n {
                        let delta = &q * &w[t][jj];
                        w[i][jj] = &w[i][jj] - delta;
                    }
                    if !w[i][t].is_zero() {
                        disturbed = true;
                    }
                }
            }
            for jj in t + 1..n {
                if !w[t][jj].is_zero() {
                    let q = w[t][jj].div_floor(&w[t][t]);
                    for i in t..n {
                        let delta = &q * &w[i][t];
                        w[i][jj] = &w[i][jj] - delta;
                    }
                    if !w[t][jj].is_zero() {
                        disturbed = true;
                    }
                }
            }
            if disturbed {
                continue;
            }

            let offender = (t + 1..n)
                .find(|&i| (t + 1..n).any(|jj| !(&w[i][jj] % &w[t][t]).is_zero()));
            if let Some(i) = offender {
                for jj in t..n {
                    w[t][jj] = &w[t][jj] + &w[i][jj];
                }
                continue;
            }
            break;
        }
    }

    let mut s = Vec::with_capacity(n);
    for (t, row) in w.iter().enumerate() {
        let v = row[t].abs();
        let vi = v
            .to_i64()
            .ok_or_else(|| Error::Internal("invariant factor exceeds i64".into()))?;
        s.push(vi);
    }
    for pair in s.windows(2) {
        assert!(pair[1] % pair[0] == 0, "divisibility chain broken: {} ∤ {}", pair[0], pair[1]);
    }
    let product: BigInt = s.iter().map(|&x| BigInt::from(x)).product();
    assert_eq!(product, det.abs(), "Π invariant factors must equal |det|");
    Ok(InvariantFactors { s })
}

/// Last invariant factor sₙ(Δ_j) for every face j = 0,…,n.
pub fn face_last_invariants(family: &KloostermanFamily) -> Vec<i64> {
    (0..=family.n())
        .map(|j| {
            let fm = face_matrix(family, j).expect("face index in range");
            let inv = smith_normal_form(&fm.matrix).expect("face matrix is nonsingular");
            *inv.s.last().expect("n ≥ 1")
        })
        .collect()
}

/// Nondegeneracy of the family at p: true iff p ∤ Π aᵢdᵢ, equivalently
/// gcd(p, det M(Δ_j)) = 1 for every face.  Requires p an odd prime.
pub fn is_nondegenerate(family: &KloostermanFamily, p: u64) -> Result<bool> {
    crate::ffield::validate_odd_prime(p)?;
    let p = p as i64;
    let all_coprime = family
        .a()
        .iter()
        .chain(family.d().iter())
        .all(|&x| x % p != 0);
    Ok(all_coprime)
}

fn require_nondegenerate(family: &KloostermanFamily, p: u64) -> Result<()> {
    if !is_nondegenerate(family, p)? {
        return Err(Error::Degenerate(format!("p = {p} divides some aᵢ or dᵢ")));
    }
    Ok(())
}

/// Sufficient ordinarity condition via e*: true iff p ≡ 1 (mod e*).
/// Errors if the family is degenerate at p.
pub fn ordinary_sufficient_estar(family: &KloostermanFamily, p: u64) -> Result<bool> {
    require_nondegenerate(family, p)?;
    Ok(p as i64 % family.e_star() == 1 % family.e_star())
}

/// Sufficient ordinarity condition via faces: true iff p ≡ 1 (mod sₙ(Δ_j))
/// for every face j.  Implied by [`ordinary_sufficient_estar`], since each
/// sₙ(Δ_j) divides d_j·lcm of the other aᵢ, which divides e*.
pub fn ordinary_sufficient_faces(family: &KloostermanFamily, p: u64) -> Result<bool> {
    require_nondegenerate(family, p)?;
    Ok(face_last_invariants(family)
        .iter()
        .all(|&sn| p as i64 % sn == 1 % sn))
}

/// Explicit slope sequence {Σ uᵢ/aᵢ : 0 ≤ uᵢ ≤ aᵢ} for the special shape
/// dᵢ = 1 with pairwise coprime aᵢ; every slope has multiplicity one and the
/// count equals the basis cardinality.  Returns None when the shape
/// hypotheses fail.
pub fn coprime_slopes(family: &KloostermanFamily) -> Option<SlopeSequence> {
    if family.d().iter().any(|&di| di != 1) {
        return None;
    }
    let a = family.a();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if gcd(a[i], a[j]) != 1 {
                return None;
            }
        }
    }
    let mut slopes = BTreeSet::new();
    let mut u = vec![0i64; a.len()];
    loop {
        let s: Rat = u.iter().zip(a).map(|(&ui, &ai)| rat(ui, ai)).sum();
        slopes.insert(s);
        let mut carry = 0;
        while carry < a.len() {
            u[carry] += 1;
            if u[carry] <= a[carry] {
                break;
            }
            u[carry] = 0;
            carry += 1;
        }
        if carry == a.len() {
            break;
        }
    }
    assert_eq!(
        slopes.len() as u64,
        family.basis_cardinality_formula(),
        "slope set cardinality must match the basis cardinality"
    );
    Some(SlopeSequence { entries: slopes.into_iter().map(|s| (s, 1)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::hodge_polygon;
    use num::integer::lcm;

    fn fam(a: &[i64], d: &[i64]) -> KloostermanFamily {
        KloostermanFamily::new(a.to_vec(), d.to_vec()).unwrap()
    }

    /// lcm of a list of positive integers.
    fn lcm_all(xs: &[i64]) -> i64 {
        xs.iter().fold(1i64, |acc, &x| lcm(acc, x))
    }

    #[test]
    fn test_face_matrix_examples() {
        let f = fam(&[1, 2], &[1, 1]);
        assert_eq!(face_matrix(&f, 0).unwrap().matrix, vec![vec![1, 0], vec![0, 2]]);
        assert_eq!(face_matrix(&f, 1).unwrap().matrix, vec![vec![-1, 0], vec![-1, 2]]);
        assert_eq!(face_matrix(&f, 2).unwrap().matrix, vec![vec![1, -1], vec![0, -1]]);
        assert!(face_matrix(&f, 3).is_err());
    }

    #[test]
    fn test_face_matrix_determinants() {
        for (a, d) in [
            (vec![1, 2], vec![1, 1]),
            (vec![2, 3], vec![1, 5]),
            (vec![3, 1, 2], vec![2, 2, 1]),
            (vec![4], vec![3]),
        ] {
            let f = fam(&a, &d);
            let n = f.n();
            let det0 = determinant(&face_matrix(&f, 0).unwrap().matrix);
            let prod_a: i64 = a.iter().product();
            assert_eq!(det0.abs(), BigInt::from(prod_a));
            for j in 1..=n {
                let det = determinant(&face_matrix(&f, j).unwrap().matrix);
                let expected: i64 =
                    d[j - 1] * a.iter().enumerate().filter(|&(i, _)| i != j - 1).map(|(_, &x)| x).product::<i64>();
                assert_eq!(det.abs(), BigInt::from(expected), "face {j} of a={a:?} d={d:?}");
            }
        }
    }

    #[test]
    fn test_smith_normal_form_examples() {
        assert_eq!(smith_normal_form(&[vec![2, 0], vec![0, 3]]).unwrap().s, vec![1, 6]);
        assert_eq!(smith_normal_form(&[vec![1, -1], vec![0, -1]]).unwrap().s, vec![1, 1]);
        // diagonal of a family: sₙ = lcm of the diagonal
        for a in [vec![2, 3], vec![4, 6], vec![2, 3, 4], vec![6, 10, 15]] {
            let n = a.len();
            let m: Vec<Vec<i64>> = (0..n)
                .map(|r| (0..n).map(|c| if r == c { a[r] } else { 0 }).collect())
                .collect();
            let s = smith_normal_form(&m).unwrap().s;
            assert_eq!(*s.last().unwrap(), lcm_all(&a), "diag {a:?}");
        }
    }

    #[test]
    fn test_smith_normal_form_rejects_bad_input() {
        assert!(smith_normal_form(&[vec![1, 2], vec![2, 4]]).is_err());
        assert!(smith_normal_form(&[vec![1, 2]]).is_err());
        assert!(smith_normal_form(&[]).is_err());
    }

    #[test]
    fn test_smith_normal_form_against_minors_oracle() {
        // Deterministic pseudo-random integer matrices, entries in [−9, 9].
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 19) as i64 - 9
        };
        for n in 1..=5usize {
            let mut checked = 0;
            while checked < 8 {
                let m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
                if determinant(&m).is_zero() {
                    continue;
                }
                let s = smith_normal_form(&m).unwrap().s;
                assert_eq!(s, crate::testkit::invariant_factors_via_minors(&m), "matrix {m:?}");
                checked += 1;
            }
        }
    }

    #[test]
    fn test_is_nondegenerate() {
        assert!(is_nondegenerate(&fam(&[1, 2], &[1, 1]), 3).unwrap());
        assert!(!is_nondegenerate(&fam(&[3, 1], &[1, 1]), 3).unwrap());
        assert!(is_nondegenerate(&fam(&[2, 3], &[1, 5]), 7).unwrap());
        assert!(is_nondegenerate(&fam(&[2, 3], &[1, 5]), 5).is_ok());
        assert!(!is_nondegenerate(&fam(&[2, 3], &[1, 5]), 5).unwrap());
        assert!(is_nondegenerate(&fam(&[1], &[1]), 2).is_err());
        assert!(is_nondegenerate(&fam(&[1], &[1]), 9).is_err());
        assert!(is_nondegenerate(&fam(&[1], &[1]), 1).is_err());
    }

    #[test]
    fn test_ordinary_sufficient_estar() {
        assert!(ordinary_sufficient_estar(&fam(&[1, 2], &[1, 1]), 3).unwrap());
        assert!(ordinary_sufficient_estar(&fam(&[2, 3], &[1, 1]), 7).unwrap());
        assert!(!ordinary_sufficient_estar(&fam(&[3], &[1]), 5).unwrap());
        // degenerate input is an error, not a false
        assert!(matches!(
            ordinary_sufficient_estar(&fam(&[3, 1], &[1, 1]), 3),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn test_ordinary_sufficient_faces() {
        let f = fam(&[1, 2], &[1, 1]);
        assert_eq!(face_last_invariants(&f), vec![2, 2, 1]);
        assert!(ordinary_sufficient_faces(&f, 3).unwrap());

        let g = fam(&[1, 1], &[1, 1]);
        assert_eq!(face_last_invariants(&g), vec![1, 1, 1]);
        for p in [3u64, 5, 7, 11, 13] {
            assert!(ordinary_sufficient_faces(&g, p).unwrap());
        }

        let h = fam(&[3], &[2]);
        assert_eq!(face_last_invariants(&h), vec![3, 2]);
        assert!(!ordinary_sufficient_faces(&h, 5).unwrap());
    }

    #[test]
    fn test_faces_weaker_than_estar() {
        // A family where the facial condition holds but the e* one fails.
        let f = fam(&[4, 2], &[2, 2]);
        assert_eq!(f.e_star(), 8);
        assert_eq!(face_last_invariants(&f), vec![4, 2, 4]);
        assert!(!ordinary_sufficient_estar(&f, 5).unwrap());
        assert!(ordinary_sufficient_faces(&f, 5).unwrap());
    }

    #[test]
    fn test_estar_implies_faces() {
        let families = [
            (vec![1, 2], vec![1, 1]),
            (vec![2, 3], vec![1, 5]),
            (vec![2, 2], vec![1, 1]),
            (vec![3], vec![2]),
            (vec![1, 1, 2], vec![1, 2, 1]),
        ];
        for (a, d) in families {
            let f = fam(&a, &d);
            for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
                if !is_nondegenerate(&f, p).unwrap() {
                    continue;
                }
                if ordinary_sufficient_estar(&f, p).unwrap() {
                    assert!(
                        ordinary_sufficient_faces(&f, p).unwrap(),
                        "a={a:?} d={d:?} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn test_face_invariant_divisibility() {
        for (a, d) in [
            (vec![1, 2], vec![1, 1]),
            (vec![2, 3], vec![1, 5]),
            (vec![3, 1, 2], vec![2, 2, 1]),
            (vec![4, 2], vec![2, 2]),
            (vec![5], vec![3]),
        ] {
            let f = fam(&a, &d);
            let sn = face_last_invariants(&f);
            assert_eq!(sn[0], lcm_all(&a), "sₙ(Δ₀) = lcm(a) for a={a:?}");
            for j in 1..=f.n() {
                let others: Vec<i64> = a
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j - 1)
                    .map(|(_, &x)| x)
                    .collect();
                let bound = d[j - 1] * if others.is_empty() { 1 } else { lcm_all(&others) };
                assert_eq!(bound % sn[j], 0, "sₙ(Δ_{j}) | d_j·lcm(rest) for a={a:?} d={d:?}");
            }
        }
    }

    #[test]
    fn test_coprime_slopes_examples() {
        let s = coprime_slopes(&fam(&[1, 2], &[1, 1])).unwrap();
        assert_eq!(
            s.entries,
            vec![
                (rat(0, 1), 1),
                (rat(1, 2), 1),
                (rat(1, 1), 1),
                (rat(3, 2), 1),
                (rat(2, 1), 1)
            ]
        );
        let s = coprime_slopes(&fam(&[2, 3], &[1, 1])).unwrap();
        assert_eq!(s.entries.len(), 11);
        assert_eq!(s.total(), 11);
        assert!(coprime_slopes(&fam(&[2, 2], &[1, 1])).is_none());
        assert!(coprime_slopes(&fam(&[1, 2], &[1, 2])).is_none());
    }

    #[test]
    fn test_coprime_slopes_match_basis_weights() {
        for a in [vec![1], vec![3], vec![1, 2], vec![2, 3], vec![1, 1, 2]] {
            let d = vec![1; a.len()];
            let f = fam(&a, &d);
            let slopes = coprime_slopes(&f).expect("hypotheses hold").expanded();
            let hodge = hodge_polygon(&f.enumerate_basis()).slope_sequence().expanded();
            assert_eq!(slopes, hodge, "a={a:?}");
        }
    }
}
