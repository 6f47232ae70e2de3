//! The integral group ring `ℤ[V]`, `V = F₂^r`, and the powers `P̄ⁿ` of its
//! augmentation ideal.
//!
//! Lattices live in `ℤ^{2^r−1}` with basis `[g] − [0]` for `g ≠ 0`; group
//! elements are bitmasks, so `[g][h] = [g ⊕ h]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactla::{
    lattice_basis, lattice_quotient, FinAbGroup, F2Matrix, IntMatrix,
};
use crate::{p_dim, Error};

/// A sublattice of the augmentation ideal `P̄ ⊆ ℤ[V]`.
#[derive(Clone, Debug)]
pub struct GroupRingLattice {
    pub r: usize,
    /// Columns are coordinates in the `[g] − [0]` basis.
    pub generators: IntMatrix,
}

impl GroupRingLattice {
    /// Ambient rank `2^r − 1`.
    #[must_use]
    pub fn ambient_rank(&self) -> usize {
        (1 << self.r) - 1
    }

    /// `P̄` itself.
    #[must_use]
    pub fn augmentation_ideal(r: usize) -> Self {
        let n = (1 << r) - 1;
        Self { r, generators: IntMatrix::identity(n) }
    }

    /// The lattice spanned by all products `b·([g] − [0])`.
    #[must_use]
    pub fn times_augmentation(&self) -> Self {
        let n = self.ambient_rank();
        let mut cols = Vec::with_capacity(self.generators.cols() * n);
        for j in 0..self.generators.cols() {
            let full = to_full(&self.generators.column(j));
            for g in 1..=n {
                cols.push(to_reduced(&times_generator(&full, g)));
            }
        }
        Self { r: self.r, generators: lattice_basis(&IntMatrix::from_columns(n, &cols)) }
    }

    /// `self / other`, failing if `other ⊄ self`.
    pub fn quotient(&self, other: &GroupRingLattice) -> Result<FinAbGroup, Error> {
        lattice_quotient(&self.generators, &other.generators)
    }

    /// Whether every generator is divisible by `2^k`.
    #[must_use]
    pub fn divisible_by_power_of_two(&self, k: u32) -> bool {
        let m = BigInt::one() << k;
        let g = &self.generators;
        (0..g.rows()).all(|i| (0..g.cols()).all(|j| g.get(i, j).is_multiple_of(&m)))
    }

    /// Mod-2 reduction of the generators, as an F₂ matrix in the
    /// `[g] + [0]` basis of the F₂ augmentation ideal.
    #[must_use]
    pub fn mod_two(&self) -> F2Matrix {
        let g = &self.generators;
        F2Matrix::from_fn(g.rows(), g.cols(), |i, j| g.get(i, j).is_odd())
    }
}

/// Full coordinates in `ℤ^{2^r}` of an element of `P̄`.
fn to_full(y: &[BigInt]) -> Vec<BigInt> {
    let mut c = Vec::with_capacity(y.len() + 1);
    let s: BigInt = y.iter().sum();
    c.push(-s);
    c.extend_from_slice(y);
    c
}

fn to_reduced(c: &[BigInt]) -> Vec<BigInt> {
    c[1..].to_vec()
}

/// `c · ([g] − [0])` in full coordinates.
fn times_generator(c: &[BigInt], g: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); c.len()];
    for (h, x) in c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        out[h ^ g] += x;
        out[h] -= x;
    }
    out
}

/// `P̄ⁿ(F^r)`, the image of the `n`-fold product, `n ≥ 1`.
#[must_use]
pub fn aug_power_lattice(r: usize, n: usize) -> GroupRingLattice {
    assert!(n >= 1, "augmentation powers start at n = 1");
    AugmentationFiltration::new(r, n).power(n).clone()
}

/// `P̄¹ ⊇ P̄² ⊇ … ⊇ P̄^top` computed once.
#[derive(Clone, Debug)]
pub struct AugmentationFiltration {
    pub r: usize,
    powers: Vec<GroupRingLattice>,
}

impl AugmentationFiltration {
    #[must_use]
    pub fn new(r: usize, top: usize) -> Self {
        let mut powers = vec![GroupRingLattice::augmentation_ideal(r)];
        while powers.len() < top.max(1) {
            let next = powers.last().expect("nonempty").times_augmentation();
            powers.push(next);
        }
        Self { r, powers }
    }

    /// `P̄ⁿ` for `1 ≤ n ≤ top`.
    #[must_use]
    pub fn power(&self, n: usize) -> &GroupRingLattice {
        &self.powers[n - 1]
    }

    #[must_use]
    pub fn top(&self) -> usize {
        self.powers.len()
    }

    /// `Rⁿ = P̄/P̄^{n+1}`; needs `top ≥ n + 1`.
    pub fn rn_group(&self, n: usize) -> Result<FinAbGroup, Error> {
        self.power(1).quotient(self.power(n + 1))
    }

    /// `P̄ⁿ/P̄^{n+1}`.
    pub fn subquotient(&self, n: usize) -> Result<FinAbGroup, Error> {
        self.power(n).quotient(self.power(n + 1))
    }

    /// `2·P̄ⁿ ⊆ P̄^{n+1} ⊆ P̄ⁿ`.
    #[must_use]
    pub fn chain_holds(&self, n: usize) -> bool {
        let lower = self.power(n + 1);
        let upper = self.power(n);
        let doubled = GroupRingLattice {
            r: self.r,
            generators: scale(&upper.generators, &BigInt::from(2)),
        };
        upper.quotient(lower).is_ok() && lower.quotient(&doubled).is_ok()
    }

    /// Rank over F₂ of `P̄ⁿ ⊗ F₂ → F₂[V]`.
    #[must_use]
    pub fn mod_two_image_dim(&self, n: usize) -> usize {
        self.power(n).mod_two().rank()
    }
}

fn scale(m: &IntMatrix, k: &BigInt) -> IntMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, m.get(i, j) * k);
        }
    }
    out
}

/// `Rⁿ_ℤ(F^r) = P̄/P̄^{n+1}`.
pub fn rn_group(r: usize, n: usize) -> Result<FinAbGroup, Error> {
    AugmentationFiltration::new(r, n + 1).rn_group(n)
}

/// `P̄ⁿ/P̄^{n+1}`.
pub fn filtration_subquotient(r: usize, n: usize) -> Result<FinAbGroup, Error> {
    AugmentationFiltration::new(r, n + 1).subquotient(n)
}

/// Dimension of the 2-torsion of `Rⁿ(F^r)`.
pub fn two_torsion_dim(r: usize, n: usize) -> Result<usize, Error> {
    Ok(rn_group(r, n)?.two_torsion_dim())
}

/// Whether `P̄^{n+k}(F^n) ⊆ 2^k P̄(F^n)`.
#[must_use]
pub fn completion_inclusion_check(n: usize, k: usize) -> bool {
    aug_power_lattice(n, n + k).divisible_by_power_of_two(k as u32)
}

/// `dim Īⁿ` for the F₂ augmentation ideal of `F₂[V]`, computed by iterated
/// products in the group algebra (no integral input).
#[must_use]
pub fn f2_aug_power_dim(r: usize, n: usize) -> usize {
    let size = 1usize << r;
    // Columns: elements of F₂[V] as bitsets over group elements.
    let gens: Vec<Vec<bool>> = (1..size)
        .map(|g| {
            let mut v = vec![false; size];
            v[0] = true;
            v[g] = true;
            v
        })
        .collect();
    let mut span = gens.clone();
    for _ in 1..n {
        let mut next = Vec::new();
        for a in &span {
            for b in &gens {
                let mut prod = vec![false; size];
                for (h, &x) in a.iter().enumerate() {
                    if x {
                        for (k, &y) in b.iter().enumerate() {
                            if y {
                                prod[h ^ k] ^= true;
                            }
                        }
                    }
                }
                next.push(prod);
            }
        }
        let m = F2Matrix::from_fn(size, next.len(), |i, j| next[j][i]);
        let img = crate::exactla::f2_decompose(&m).image;
        span = (0..img.cols())
            .map(|j| (0..size).map(|i| img.get(i, j)).collect())
            .collect();
    }
    F2Matrix::from_fn(size, span.len(), |i, j| span[j][i]).rank()
}

/// One step of the filtration with its invariants.
#[derive(Clone, Debug, Serialize)]
pub struct FiltrationReport {
    pub n: usize,
    /// `Rⁿ = P̄/P̄^{n+1}`.
    pub quotient: FinAbGroup,
    /// `P̄ⁿ/P̄^{n+1}`.
    pub subquotient: FinAbGroup,
    pub two_torsion_dim: usize,
    /// `dim Rⁿ/2Rⁿ`.
    pub head_dim: usize,
    /// `log₂ |Rⁿ|`.
    pub log2_order: u64,
    /// `Σ_{m ≤ n} dim p_m Ī`, the predicted `log₂ |Rⁿ|`.
    pub predicted_log2_order: u64,
    pub chain_holds: bool,
}

/// Reports for `n = 1..=nmax`.
pub fn filtration_reports(r: usize, nmax: usize) -> Result<Vec<FiltrationReport>, Error> {
    let filt = AugmentationFiltration::new(r, nmax + 1);
    (1..=nmax)
        .map(|n| {
            let quotient = filt.rn_group(n)?;
            let subquotient = filt.subquotient(n)?;
            Ok(FiltrationReport {
                n,
                two_torsion_dim: quotient.two_torsion_dim(),
                head_dim: quotient.mod_two_dim(),
                log2_order: quotient.log2_torsion_order().unwrap_or(0),
                predicted_log2_order: (1..=n).map(|m| p_dim(r, m) as u64).sum(),
                chain_holds: filt.chain_holds(n),
                quotient,
                subquotient,
            })
        })
        .collect()
}

/// The pro-group `P̄^d_{ℤ₂}`: free rank and the quotients `P̄^d/P̄^{d+k}`.
#[derive(Clone, Debug, Serialize)]
pub struct ProTower {
    pub d: usize,
    pub free_rank: usize,
    pub quotients: Vec<FinAbGroup>,
}

/// `P̄^d/P̄^{d+k}` for `k = 1..=depth`.
pub fn pro_tower(r: usize, d: usize, depth: usize) -> Result<ProTower, Error> {
    let filt = AugmentationFiltration::new(r, d + depth);
    let quotients =
        (1..=depth).map(|k| filt.power(d).quotient(filt.power(d + k))).collect::<Result<_, _>>()?;
    Ok(ProTower { d, free_rank: (1 << r) - 1, quotients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::binomial;
    use proptest::prelude::*;

    #[test]
    fn rank_one_square() {
        let p2 = aug_power_lattice(1, 2);
        assert_eq!(p2.generators.cols(), 1);
        assert_eq!(p2.generators.get(0, 0).magnitude(), &BigInt::from(2).magnitude().clone());
        for k in 1..6 {
            assert!(completion_inclusion_check(1, k));
        }
    }

    #[test]
    fn rn_examples() {
        assert_eq!(rn_group(1, 3).unwrap(), FinAbGroup::cyclic(8));
        assert_eq!(rn_group(2, 1).unwrap(), FinAbGroup::elementary(2));
        let r22 = rn_group(2, 2).unwrap();
        assert_eq!(r22.log2_torsion_order(), Some(5));
        assert_eq!(r22.two_torsion_dim(), 3);
        assert_eq!(filtration_subquotient(3, 2).unwrap(), FinAbGroup::elementary(6));
        assert_eq!(filtration_subquotient(2, 1).unwrap(), FinAbGroup::elementary(2));
        let p1 = GroupRingLattice::augmentation_ideal(2);
        assert_eq!(p1.quotient(&aug_power_lattice(2, 2)).unwrap().log2_torsion_order(), Some(2));
        assert!(completion_inclusion_check(2, 1));
        assert!(completion_inclusion_check(3, 2));
    }

    #[test]
    fn reports_match_predictions() {
        for r in 1..4 {
            for rep in filtration_reports(r, 5).unwrap() {
                assert_eq!(rep.log2_order, rep.predicted_log2_order);
                assert_eq!(rep.two_torsion_dim, p_dim(r, rep.n));
                assert_eq!(rep.head_dim, rep.two_torsion_dim);
                assert!(rep.subquotient.is_elementary_abelian());
                assert_eq!(rep.subquotient.mod_two_dim(), p_dim(r, rep.n));
                assert!(rep.chain_holds);
            }
        }
    }

    #[test]
    fn mod_two_reduction() {
        for r in 1..4 {
            let filt = AugmentationFiltration::new(r, r + 2);
            for n in 1..=r + 2 {
                let want: u64 = (n..=r).map(|j| binomial(r, j)).sum();
                assert_eq!(f2_aug_power_dim(r, n), want as usize);
                assert_eq!(filt.mod_two_image_dim(n), want as usize);
            }
        }
    }

    #[test]
    fn tower_shape() {
        let t = pro_tower(2, 2, 3).unwrap();
        assert_eq!(t.free_rank, 3);
        assert_eq!(t.quotients[0], filtration_subquotient(2, 2).unwrap());
        let orders: Vec<u64> = t.quotients.iter().map(|q| q.log2_torsion_order().unwrap()).collect();
        assert_eq!(orders, vec![3, 6, 9]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn products_stay_in_augmentation_ideal(r in 1usize..4, g in 1usize..8, h in 1usize..8) {
            let size = 1usize << r;
            prop_assume!(g < size && h < size);
            let mut e = vec![BigInt::zero(); size];
            e[0] = BigInt::from(-1);
            e[g] += 1;
            let p = times_generator(&e, h);
            prop_assert!(p.iter().sum::<BigInt>().is_zero());
            prop_assert_eq!(to_full(&to_reduced(&p)), p);
        }
    }
}
