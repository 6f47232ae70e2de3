//! Monomial bases for `S^n(V)`, `Λ^a(V)` and `Λ^a(V) ⊗ S^b(V)` with
//! `V = F₂^r`.
//!
//! Orders are lexicographic and fixed: monomials run from `x₁^n` downwards,
//! exterior masks list their index sets as sorted tuples in lexicographic
//! order. `Λ^a ⊗ S^b` is ordered exterior-major.

use std::fmt;

use serde::Serialize;

use crate::exactla::F2Matrix;

/// `C(n, k)`; zero when `k > n`.
#[must_use]
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Exponent vector of a monomial `x₁^{e₁}⋯x_r^{e_r}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct ExpVec(pub Vec<u32>);

impl ExpVec {
    #[must_use]
    pub fn zero(r: usize) -> Self {
        ExpVec(vec![0; r])
    }

    /// `x_j^k`.
    #[must_use]
    pub fn power(r: usize, j: usize, k: u32) -> Self {
        let mut e = vec![0; r];
        e[j] = k;
        ExpVec(e)
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    #[must_use]
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    /// Number of odd exponents.
    #[must_use]
    pub fn odd_count(&self) -> usize {
        self.0.iter().filter(|&&x| x % 2 == 1).count()
    }

    #[must_use]
    pub fn times(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Index in [`sym_basis`] of the same degree.
    #[must_use]
    pub fn index(&self) -> usize {
        sym_index(&self.0)
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// A subset of `{0, …, r−1}`, naming a basis vector of `Λ^a`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct ExtMask(pub u32);

impl ExtMask {
    #[must_use]
    pub fn size(self) -> usize {
        self.0.count_ones() as usize
    }

    #[must_use]
    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    #[must_use]
    pub fn without(self, j: usize) -> ExtMask {
        ExtMask(self.0 & !(1 << j))
    }

    #[must_use]
    pub fn with(self, j: usize) -> ExtMask {
        ExtMask(self.0 | (1 << j))
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&j| self.contains(j))
    }

    /// Complement inside `{0, …, r−1}`.
    #[must_use]
    pub fn complement(self, r: usize) -> ExtMask {
        ExtMask(!self.0 & ((1u32 << r) - 1))
    }
}

impl fmt::Display for ExtMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.elements().map(|j| format!("e{}", j + 1)).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// Number of monomials of degree `n` in `r` variables.
#[must_use]
pub fn sym_dim(r: usize, n: usize) -> usize {
    if r == 0 {
        usize::from(n == 0)
    } else {
        binomial(n + r - 1, r - 1) as usize
    }
}

/// Number of monomials of degree at most `k` in `m` variables.
fn count_upto(m: usize, k: usize) -> usize {
    binomial(k + m, m) as usize
}

/// Position of an exponent vector in the lexicographic basis of its degree.
#[must_use]
pub fn sym_index(e: &[u32]) -> usize {
    let r = e.len();
    if r <= 1 {
        return 0;
    }
    let mut left: usize = e.iter().map(|&x| x as usize).sum();
    let mut idx = 0;
    for (i, &ei) in e.iter().enumerate().take(r - 1) {
        let ei = ei as usize;
        if left > ei {
            idx += count_upto(r - i - 1, left - ei - 1);
        }
        left -= ei;
    }
    idx
}

/// Monomials of degree `n` in `r` variables, lexicographically descending in
/// `x₁`.
#[must_use]
pub fn sym_basis(r: usize, n: usize) -> Vec<ExpVec> {
    let mut out = Vec::with_capacity(sym_dim(r, n));
    if r == 0 {
        if n == 0 {
            out.push(ExpVec(vec![]));
        }
        return out;
    }
    let mut cur = vec![0u32; r];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ExpVec>) {
        let r = cur.len();
        if i == r - 1 {
            cur[i] = left;
            out.push(ExpVec(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, n as u32, &mut cur, &mut out);
    out
}

/// Lexicographic list of `a`-subsets of `{0, …, r−1}` with an inverse table.
#[derive(Clone, Debug)]
pub struct ExtBasis {
    pub r: usize,
    pub a: usize,
    pub masks: Vec<ExtMask>,
    index: Vec<usize>,
}

impl ExtBasis {
    #[must_use]
    pub fn new(r: usize, a: usize) -> Self {
        let mut masks = Vec::new();
        if a <= r {
            fn rec(start: usize, r: usize, left: usize, m: u32, out: &mut Vec<ExtMask>) {
                if left == 0 {
                    out.push(ExtMask(m));
                    return;
                }
                for j in start..=r - left {
                    rec(j + 1, r, left - 1, m | (1 << j), out);
                }
            }
            rec(0, r, a, 0, &mut masks);
        }
        let mut index = vec![usize::MAX; 1 << r];
        for (k, m) in masks.iter().enumerate() {
            index[m.0 as usize] = k;
        }
        Self { r, a, masks, index }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    #[must_use]
    pub fn index_of(&self, m: ExtMask) -> usize {
        let k = self.index[m.0 as usize];
        debug_assert!(k != usize::MAX, "mask {m} not of size {}", self.a);
        k
    }
}

/// Lexicographic basis of `Λ^a(F^r)`.
#[must_use]
pub fn ext_basis(r: usize, a: usize) -> Vec<ExtMask> {
    ExtBasis::new(r, a).masks
}

#[must_use]
pub fn ext_dim(r: usize, a: usize) -> usize {
    binomial(r, a) as usize
}

#[must_use]
pub fn ext_sym_dim(r: usize, a: usize, b: usize) -> usize {
    ext_dim(r, a) * sym_dim(r, b)
}

/// Basis of `Λ^a ⊗ S^b`, exterior-major.
#[must_use]
pub fn ext_sym_basis(r: usize, a: usize, b: usize) -> Vec<(ExtMask, ExpVec)> {
    let sb = sym_basis(r, b);
    ext_basis(r, a)
        .into_iter()
        .flat_map(|m| sb.iter().map(move |e| (m, e.clone())))
        .collect()
}

/// Frobenius `S^n → S^{2n}`, `x^e ↦ x^{2e}`.
#[must_use]
pub fn frobenius(r: usize, n: usize) -> F2Matrix {
    let src = sym_basis(r, n);
    let mut m = F2Matrix::zeros(sym_dim(r, 2 * n), src.len());
    for (j, e) in src.iter().enumerate() {
        let doubled: Vec<u32> = e.0.iter().map(|x| 2 * x).collect();
        m.set(sym_index(&doubled), j, true);
    }
    m
}

/// Monomials of `f_t S^n`: at most `t` odd exponents.
#[must_use]
pub fn filtration_basis(r: usize, t: usize, n: usize) -> Vec<ExpVec> {
    sym_basis(r, n).into_iter().filter(|e| e.odd_count() <= t).collect()
}

/// Writes `x^e = x_T · (x^f)²` with `T` the odd positions.
#[must_use]
pub fn odd_split(e: &ExpVec) -> (ExtMask, ExpVec) {
    let mut mask = 0u32;
    let f = e
        .0
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            if x % 2 == 1 {
                mask |= 1 << j;
            }
            x / 2
        })
        .collect();
    (ExtMask(mask), ExpVec(f))
}

/// Inverse of [`odd_split`].
#[must_use]
pub fn odd_join(mask: ExtMask, f: &ExpVec) -> ExpVec {
    ExpVec(f.0.iter().enumerate().map(|(j, &x)| 2 * x + u32::from(mask.contains(j))).collect())
}

/// Dimension of `S^n / ⟨x^{2^i}⟩`: monomials with every exponent below `2^i`.
#[must_use]
pub fn trunc_sym_dim(r: usize, i: u32, n: usize) -> usize {
    let cap = 1usize << i;
    // Coefficient of t^n in ((1 − t^cap)/(1 − t))^r, by dynamic programming.
    let mut ways = vec![0usize; n + 1];
    ways[0] = 1;
    for _ in 0..r {
        let mut next = vec![0usize; n + 1];
        for (d, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for e in 0..cap.min(n - d + 1) {
                next[d + e] += w;
            }
        }
        ways = next;
    }
    ways[n]
}

/// Which space a basis enumerates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    Sym,
    Ext,
    ExtSym,
    /// A subquotient of one of the above, carried with explicit matrices.
    Subquotient(Box<BasisKind>),
}

/// Describes a monomial basis: its kind, rank and bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisDescriptor {
    pub kind: BasisKind,
    pub r: usize,
    /// Exterior degree (0 for symmetric powers).
    pub a: usize,
    /// Symmetric degree.
    pub b: usize,
}

impl BasisDescriptor {
    #[must_use]
    pub fn sym(r: usize, b: usize) -> Self {
        Self { kind: BasisKind::Sym, r, a: 0, b }
    }

    #[must_use]
    pub fn ext_sym(r: usize, a: usize, b: usize) -> Self {
        Self { kind: BasisKind::ExtSym, r, a, b }
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        match &self.kind {
            BasisKind::Sym => sym_dim(self.r, self.b),
            BasisKind::Ext => ext_dim(self.r, self.a),
            BasisKind::ExtSym => ext_sym_dim(self.r, self.a, self.b),
            BasisKind::Subquotient(inner) => {
                BasisDescriptor { kind: (**inner).clone(), ..self.clone() }.dim()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_bases() {
        assert_eq!(sym_basis(1, 5), vec![ExpVec(vec![5])]);
        assert_eq!(sym_basis(2, 3).len(), 4);
        assert_eq!(sym_basis(4, 0), vec![ExpVec(vec![0; 4])]);
        assert_eq!(ext_sym_basis(2, 2, 0).len(), 1);
        assert_eq!(ext_sym_basis(3, 1, 1).len(), 9);
        assert!(ext_sym_basis(2, 3, 5).is_empty());
        assert_eq!(
            sym_basis(2, 2),
            vec![ExpVec(vec![2, 0]), ExpVec(vec![1, 1]), ExpVec(vec![0, 2])]
        );
        assert_eq!(ext_basis(3, 2), vec![ExtMask(0b011), ExtMask(0b101), ExtMask(0b110)]);
    }

    #[test]
    fn frobenius_examples() {
        let f = frobenius(1, 1);
        assert!(f.get(0, 0));
        let f = frobenius(2, 2);
        // x y ↦ x² y²
        assert!(f.get(sym_index(&[2, 2]), sym_index(&[1, 1])));
        assert_eq!(frobenius(3, 2).rank(), 6);
    }

    #[test]
    fn filtration_examples() {
        assert_eq!(filtration_basis(2, 0, 2), vec![ExpVec(vec![2, 0]), ExpVec(vec![0, 2])]);
        for n in 0..8 {
            assert_eq!(filtration_basis(2, 2, n).len(), sym_dim(2, n));
        }
        // Each of x³, x²y, xy², y³ has exactly one odd exponent.
        assert_eq!(filtration_basis(2, 1, 3).len(), 4);
    }

    #[test]
    fn truncated_examples() {
        for r in 0..4 {
            assert_eq!(trunc_sym_dim(r, 0, 0), 1);
            for n in 1..6 {
                assert_eq!(trunc_sym_dim(r, 0, n), 0);
            }
            for d in 0..6 {
                assert_eq!(trunc_sym_dim(r, 1, d), binomial(r, d) as usize);
            }
        }
        assert_eq!(trunc_sym_dim(2, 1, 2), 1);
    }

    fn brute_trunc(r: usize, i: u32, n: usize) -> usize {
        sym_basis(r, n).iter().filter(|e| e.0.iter().all(|&x| x < (1 << i))).count()
    }

    proptest! {
        #[test]
        fn index_roundtrip(r in 1usize..5, n in 0usize..12) {
            for (k, e) in sym_basis(r, n).iter().enumerate() {
                prop_assert_eq!(e.index(), k);
                prop_assert_eq!(e.degree(), n);
            }
            prop_assert_eq!(sym_basis(r, n).len(), sym_dim(r, n));
        }

        #[test]
        fn basis_sorted(r in 1usize..5, n in 0usize..10) {
            let b = sym_basis(r, n);
            for w in b.windows(2) {
                prop_assert!(w[0] > w[1]);
            }
        }

        #[test]
        fn filtration_quotient_dims(r in 1usize..5, t in 0usize..5, n in 0usize..14) {
            let lower = if t == 0 { 0 } else { filtration_basis(r, t - 1, n).len() };
            let q = filtration_basis(r, t, n).len() - lower;
            let expect = if n >= t && (n - t) % 2 == 0 {
                ext_dim(r, t) * sym_dim(r, (n - t) / 2)
            } else {
                0
            };
            prop_assert_eq!(q, expect);
        }

        #[test]
        fn frobenius_image_is_f0(r in 1usize..5, n in 0usize..8) {
            let f = frobenius(r, n);
            let f0: Vec<usize> = filtration_basis(r, 0, 2 * n).iter().map(ExpVec::index).collect();
            prop_assert_eq!(f.rank(), sym_dim(r, n));
            prop_assert_eq!(f0.len(), sym_dim(r, n));
            for j in 0..f.cols() {
                let col = f.column(j);
                for i in col.ones() {
                    prop_assert!(f0.contains(&i));
                }
            }
        }

        #[test]
        fn truncated_matches_enumeration(r in 0usize..5, i in 0u32..3, n in 0usize..12) {
            prop_assert_eq!(trunc_sym_dim(r, i, n), brute_trunc(r, i, n));
        }

        #[test]
        fn odd_split_roundtrip(e in proptest::collection::vec(0u32..9, 1..5)) {
            let e = ExpVec(e);
            let (m, f) = odd_split(&e);
            prop_assert_eq!(m.size(), e.odd_count());
            prop_assert_eq!(odd_join(m, &f), e);
        }
    }
}
