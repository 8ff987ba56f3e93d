//! Abelianization via integer Smith normal form of the relation matrix.
//! Detects surjections onto ℤ, the cheap and fully general infiniteness
//! certificate.
//!
//! Arbitrary-precision integers throughout: naive SNF pivoting can blow
//! up intermediate entries even on small matrices.

use crate::presentation::Presentation;
use crate::word::Word;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A dense rectangular matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flatten().map(|&v| BigInt::from(v)).collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.data.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if at(&m, k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !at(&m, i, k).is_zero());
                match swap {
                    Some(i) => {
                        for j in 0..n {
                            m.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (at(&m, i, j) * at(&m, k, k) - at(&m, i, k) * at(&m, k, j)) / &prev;
                    m[i * n + j] = v;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = at(&m, k, k);
        }
        sign * at(&m, n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + q * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + q * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// Smith normal form `u · m · v = d` with `u`, `v` unimodular and `d`
/// diagonal with the divisibility chain d₁ | d₂ | ….
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SmithForm {
    /// The full diagonal of length `min(rows, cols)`, nonnegative,
    /// nonzero entries first.
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Computes the Smith normal form. Pivot choice is the smallest nonzero
/// absolute value, ties broken by row-major position, so the row and
/// column transforms are deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let limit = rows.min(cols);

    let pivot = |d: &IntMatrix, k: usize| -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let e = d.get(i, j);
                if e.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if d.get(bi, bj).abs() <= e.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    };

    let mut k = 0;
    while k < limit {
        let Some((pi, pj)) = pivot(&d, k) else { break };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);
        if d.get(k, k).is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }

        // Clear column and row k. Truncated quotients leave remainders
        // strictly smaller than the pivot, so re-pivoting terminates.
        let mut clean = true;
        for i in k + 1..rows {
            if !d.get(i, k).is_zero() {
                let q = -(d.get(i, k) / d.get(k, k));
                d.add_row(i, k, &q);
                u.add_row(i, k, &q);
                if !d.get(i, k).is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        for j in k + 1..cols {
            if !d.get(k, j).is_zero() {
                let q = -(d.get(k, j) / d.get(k, k));
                d.add_col(j, k, &q);
                v.add_col(j, k, &q);
                if !d.get(k, j).is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }

        // Divisibility: fold a non-divisible entry into row k and redo.
        let dk = d.get(k, k).clone();
        let mut fixed = true;
        'scan: for i in k + 1..rows {
            for j in k + 1..cols {
                if !(d.get(i, j) % &dk).is_zero() {
                    let one = BigInt::one();
                    d.add_row(k, i, &one);
                    u.add_row(k, i, &one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            k += 1;
        }
    }

    let diagonal: Vec<BigInt> = (0..limit).map(|i| d.get(i, i).clone()).collect();
    SmithForm { diagonal, u, v, d }
}

/// The |relators| × |generators| matrix of exponent sums.
pub fn relation_matrix(p: &Presentation) -> IntMatrix {
    let mut m = IntMatrix::zeros(p.relator_count(), p.generator_count());
    for (i, r) in p.relators().iter().enumerate() {
        for (j, e) in r.exponent_sums(p.generator_count()).iter().enumerate() {
            m.set(i, j, BigInt::from(*e));
        }
    }
    m
}

/// Invariant factors of the abelianization: torsion d₁ | d₂ | … (each
/// > 1) and the free rank.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    /// Order of the abelianization when finite.
    pub fn finite_order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().product())
    }
}

pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    let snf = smith_normal_form(&relation_matrix(p));
    let torsion = snf.diagonal.iter().filter(|d| **d > BigInt::one()).cloned().collect();
    AbelianInvariants { torsion, free_rank: p.generator_count() - snf.rank() }
}

/// True iff the abelianization has free rank ≥ 1, i.e. the group surjects
/// onto ℤ. This certifies the group is infinite and acts on a tree
/// without a global fixed point.
pub fn maps_onto_z(p: &Presentation) -> bool {
    abelian_invariants(p).free_rank >= 1
}

/// True iff `w` has nonzero image in the abelianization of the group
/// presented by `p` (torsion coordinates included). A nonzero image
/// witnesses `w ≠ 1` in the group itself.
pub fn nonzero_in_abelianization(p: &Presentation, w: &Word) -> bool {
    let n = p.generator_count();
    let snf = smith_normal_form(&relation_matrix(p));
    // With u·m·v = d, the change of basis e ↦ e·v carries the relation
    // lattice onto the diagonal lattice ⊕ dᵢℤ.
    let e = w.exponent_sums(n);
    let mut coords = vec![BigInt::zero(); n];
    for (j, c) in coords.iter_mut().enumerate() {
        for (i, &ei) in e.iter().enumerate() {
            *c += BigInt::from(ei) * snf.v.get(i, j);
        }
    }
    for (j, c) in coords.iter().enumerate() {
        let modulus = if j < snf.diagonal.len() { snf.diagonal[j].clone() } else { BigInt::zero() };
        let nonzero = if modulus.is_zero() { !c.is_zero() } else { !(c % &modulus).is_zero() };
        if nonzero {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_presentation;
    use proptest::prelude::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Independent oracle: the product d₁⋯dₖ equals the gcd of all k×k
    /// minors (determinantal divisors), computed by brute enumeration.
    fn snf_diagonal_oracle(m: &IntMatrix) -> Vec<BigInt> {
        fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
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
            let mut out = Vec::new();
            rec(0, n, k, &mut Vec::new(), &mut out);
            out
        }
        fn gcd(a: BigInt, b: BigInt) -> BigInt {
            use num_integer::Integer;
            a.gcd(&b)
        }
        let limit = m.rows().min(m.cols());
        let mut divisors = vec![BigInt::one()];
        for k in 1..=limit {
            let mut g = BigInt::zero();
            for rows in combinations(m.rows(), k) {
                for cols in combinations(m.cols(), k) {
                    let mut sub = IntMatrix::zeros(k, k);
                    for (a, &i) in rows.iter().enumerate() {
                        for (b, &j) in cols.iter().enumerate() {
                            sub.set(a, b, m.get(i, j).clone());
                        }
                    }
                    g = gcd(g, sub.determinant());
                }
            }
            divisors.push(g.abs());
        }
        let mut diag = Vec::with_capacity(limit);
        for k in 1..=limit {
            if divisors[k].is_zero() {
                diag.push(BigInt::zero());
            } else {
                diag.push(&divisors[k] / &divisors[k - 1]);
            }
        }
        diag
    }

    fn check_snf(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        // u·m·v = d with unimodular transforms.
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d);
        assert_eq!(snf.u.determinant().abs(), bi(1));
        assert_eq!(snf.v.determinant().abs(), bi(1));
        // Divisibility chain, nonnegative entries, zeros trailing.
        for w in snf.diagonal.windows(2) {
            assert!(w[0] >= BigInt::zero());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
        assert_eq!(snf.diagonal, snf_diagonal_oracle(m));
    }

    #[test]
    fn snf_simple_diagonal() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal, vec![bi(2), bi(0)]);
        check_snf(&m);
    }

    #[test]
    fn snf_dihedral_relation_matrix() {
        let m = IntMatrix::from_rows(&[vec![4, 0], vec![0, 2], vec![-2, 0]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal, vec![bi(2), bi(2)]);
        check_snf(&m);
    }

    #[test]
    fn snf_neumann_relation_matrix() {
        let m = IntMatrix::from_rows(&[vec![0, -1], vec![-1, 0]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal, vec![bi(1), bi(1)]);
        check_snf(&m);
    }

    #[test]
    fn relation_matrix_examples() {
        let d8 = parse_presentation("< s, t | s^4, t^2, t^-1*s*t = s^3 >").unwrap();
        let m = relation_matrix(&d8);
        assert_eq!(m, IntMatrix::from_rows(&[vec![4, 0], vec![0, 2], vec![-2, 0]]));

        let neumann = parse_presentation("< u, v | u^-1*v*u = v^2, v^-1*u*v = u^2 >").unwrap();
        assert_eq!(
            relation_matrix(&neumann),
            IntMatrix::from_rows(&[vec![0, -1], vec![-1, 0]])
        );

        let free = parse_presentation("< x | >").unwrap();
        let m = relation_matrix(&free);
        assert_eq!((m.rows(), m.cols()), (0, 1));
    }

    #[test]
    fn abelian_invariants_examples() {
        let d8 = parse_presentation("< s, t | s^4, t^2, t^-1*s*t = s^3 >").unwrap();
        let inv = abelian_invariants(&d8);
        assert_eq!(inv.torsion, vec![bi(2), bi(2)]);
        assert_eq!(inv.free_rank, 0);
        assert!(!maps_onto_z(&d8));

        // Second displayed presentation minus τ²: rows (4,0),(2,0).
        let p = parse_presentation("< s, t | s^4, t^-1*s*t*s >").unwrap();
        assert_eq!(abelian_invariants(&p).free_rank, 1);
        assert!(maps_onto_z(&p));

        let free = parse_presentation("< x | >").unwrap();
        let inv = abelian_invariants(&free);
        assert!(inv.torsion.is_empty());
        assert_eq!(inv.free_rank, 1);
        assert!(maps_onto_z(&free));
    }

    #[test]
    fn abelianization_image_detects_torsion_coordinates() {
        // In ⟨s,t | s⁴, t²⟩ the word s² maps to a nonzero torsion element
        // of ℤ₄ × ℤ₂; the commutator maps to zero.
        let p = parse_presentation("< s, t | s^4, t^2 >").unwrap();
        let s = Word::generator(0);
        let t = Word::generator(1);
        assert!(nonzero_in_abelianization(&p, &s.pow(2)));
        assert!(!nonzero_in_abelianization(&p, &s.pow(4)));
        let comm = s.inverse().multiply(&t.inverse()).multiply(&s).multiply(&t);
        assert!(!nonzero_in_abelianization(&p, &comm));
    }

    fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
        ((1usize..5), (1usize..5)).prop_flat_map(|(r, c)| {
            prop::collection::vec(-9i64..=9, r * c).prop_map(move |data| {
                let rows: Vec<Vec<i64>> = data.chunks(c).map(|ch| ch.to_vec()).collect();
                IntMatrix::from_rows(&rows)
            })
        })
    }

    proptest! {
        #[test]
        fn snf_matches_minor_gcd_oracle(m in arb_matrix()) {
            check_snf(&m);
        }
    }
}
