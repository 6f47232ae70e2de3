//! Graded answer tables for `HZ` and `ku` of `BV₊`, `V = F₂^r`.
//!
//! Everything is a dimension count over F₂ or an abelian group; the
//! variance `V` versus `V^♯` does not affect these and is not tracked.
//! Degree 0 is unreduced: the `ℤ` (or `ℤ[v]`) summand is recorded as a free
//! rank, never as a matrix.

use serde::Serialize;

use crate::exactla::{FinAbGroup, F2Matrix, EchelonBasis};
use crate::groupring::AugmentationFiltration;
use crate::milnor::{l_functors, milnor_derivation, MilnorDims};
use crate::polyalg::{sym_basis, sym_dim, sym_index};
use crate::{p_dim, Error};

/// One row of an integral (co)homology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HzRow {
    pub degree: i64,
    /// F₂-dimension of the torsion (all of it is killed by 2).
    pub dim: usize,
    pub free_rank: usize,
}

/// `HZ^n(BV₊)`: `ℤ` in degree 0, an F₂-vector space of dimension
/// `dim Kₙ` for `n > 0`.
#[must_use]
pub fn hz_cohom_table(r: usize, nmax: usize) -> Vec<HzRow> {
    let d = MilnorDims::compute(r, nmax);
    (0..=nmax)
        .map(|n| {
            if n == 0 {
                HzRow { degree: 0, dim: 0, free_rank: 1 }
            } else {
                HzRow { degree: n as i64, dim: d.k[n], free_rank: 0 }
            }
        })
        .collect()
}

/// `HZ_n(BV₊)`: `ℤ` in degree 0, dimension `dim K_{n+1}` for `n > 0`.
#[must_use]
pub fn hz_hom_table(r: usize, nmax: usize) -> Vec<HzRow> {
    let d = MilnorDims::compute(r, nmax);
    (0..=nmax)
        .map(|n| {
            if n == 0 {
                HzRow { degree: 0, dim: 0, free_rank: 1 }
            } else {
                HzRow { degree: n as i64, dim: d.k[n + 1], free_rank: 0 }
            }
        })
        .collect()
}

/// Dimensions of image and kernel of `𝔔` per degree, for both variances.
#[derive(Clone, Debug, Serialize)]
pub struct QfrakTables {
    pub r: usize,
    pub rows: Vec<QfrakRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QfrakRow {
    pub degree: i64,
    /// Cohomology: `dim Lₙ`.
    pub cohom_im: usize,
    /// Cohomology: `dim L̃ₙ`.
    pub cohom_ker: usize,
    /// Homology: `dim L_{n+4}`.
    pub hom_im: usize,
    /// Homology: `dim K_{n+1} − dim L_{n+1}`.
    pub hom_ker: usize,
}

impl QfrakRow {
    #[must_use]
    pub fn cohom_homology(&self) -> usize {
        self.cohom_ker - self.cohom_im
    }

    #[must_use]
    pub fn hom_homology(&self) -> usize {
        self.hom_ker - self.hom_im
    }
}

/// `𝔔` acts on Bockstein kernels through `Q₁`, so its image and kernel on
/// `HZ^n` are `Lₙ` and `L̃ₙ`. In homology the roles shift by the duality.
#[must_use]
pub fn qfrak_tables(r: usize, nmax: usize) -> QfrakTables {
    let d = MilnorDims::compute(r, nmax + 1);
    let rows = (1..=nmax)
        .map(|n| QfrakRow {
            degree: n as i64,
            cohom_im: d.l[n],
            cohom_ker: d.ltilde[n],
            hom_im: d.l[n + 4],
            hom_ker: d.k[n + 1] - d.l[n + 1],
        })
        .collect();
    QfrakTables { r, rows }
}

/// One degree of `ku^n(BV₊)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KuCohomRow {
    pub degree: i64,
    /// `tors_v ku^n = (Im 𝔔)^n`, an F₂-space of dimension `dim Lₙ`.
    pub torsion_dim: usize,
    /// `dim ku^n/v`.
    pub modv_dim: usize,
    /// `dim (cotors_v ku^n)/v`: `dim p_d Ī` at `n = 2d`.
    pub cotorsion_modv_dim: usize,
    /// Rank over `ℤ₂` of the cotorsion `P̄^d_{ℤ₂}`.
    pub z2_free_rank: usize,
}

/// `ku^n(BV₊)` for `0 ≤ n ≤ nmax`.
#[derive(Clone, Debug, Serialize)]
pub struct KuCohomTable {
    pub r: usize,
    pub rows: Vec<KuCohomRow>,
}

/// Degree 0 is unreduced: `ku⁰ = ℤ₂ ⊕ P̄_{ℤ₂}` with `ku⁰/v = F₂` (the
/// augmentation), so `modv_dim = cotorsion_modv_dim = 1` and the `ℤ₂`-rank
/// is `2^r`.
#[must_use]
pub fn ku_cohom_table(r: usize, nmax: usize) -> KuCohomTable {
    let d = MilnorDims::compute(r, nmax);
    let aug_rank = (1usize << r) - 1;
    let rows = (0..=nmax)
        .map(|n| {
            if n == 0 {
                return KuCohomRow {
                    degree: 0,
                    torsion_dim: 0,
                    modv_dim: 1,
                    cotorsion_modv_dim: 1,
                    z2_free_rank: aug_rank + 1,
                };
            }
            let even = n % 2 == 0;
            KuCohomRow {
                degree: n as i64,
                torsion_dim: d.l[n],
                modv_dim: d.ltilde[n],
                cotorsion_modv_dim: if even { p_dim(r, n / 2) } else { 0 },
                z2_free_rank: if even { aug_rank } else { 0 },
            }
        })
        .collect();
    KuCohomTable { r, rows }
}

/// One degree of `ku_n(BV₊)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KuHomRow {
    pub degree: i64,
    /// `dim tors_v ku_n = dim L_{n+4}`.
    pub torsion_dim: usize,
    /// `cotors_v ku_n`: `ℤ` at 0, `R^d_ℤ` at `2d−1`, trivial at positive even
    /// degrees.
    pub cotorsion: FinAbGroup,
}

impl KuHomRow {
    /// `log₂` of the order of the finite part of `ku_n`.
    #[must_use]
    pub fn log2_finite_order(&self) -> u64 {
        self.torsion_dim as u64 + self.cotorsion.log2_torsion_order().unwrap_or(0)
    }
}

/// `ku_n(BV₊)` for `0 ≤ n ≤ nmax`.
#[derive(Clone, Debug, Serialize)]
pub struct KuHomTable {
    pub r: usize,
    pub rows: Vec<KuHomRow>,
}

pub fn ku_hom_table(r: usize, nmax: usize) -> Result<KuHomTable, Error> {
    let d = MilnorDims::compute(r, nmax);
    let dmax = nmax.div_ceil(2).max(1);
    let filt = AugmentationFiltration::new(r, dmax + 1);
    let rows = (0..=nmax)
        .map(|n| {
            let cotorsion = if n == 0 {
                FinAbGroup::free(1)
            } else if n % 2 == 1 {
                filt.rn_group(n.div_ceil(2))?
            } else {
                FinAbGroup::trivial()
            };
            Ok(KuHomRow { degree: n as i64, torsion_dim: d.l[n + 4], cotorsion })
        })
        .collect::<Result<_, Error>>()?;
    Ok(KuHomTable { r, rows })
}

/// Multiplies the polynomials in `a ⊆ S^m` and `b ⊆ S^n` (columns) and
/// returns the products as columns in `S^{m+n}`.
fn products(r: usize, m: usize, a: &F2Matrix, n: usize, b: &F2Matrix) -> Vec<crate::F2Vec> {
    let bm = sym_basis(r, m);
    let bn = sym_basis(r, n);
    let mut out = Vec::new();
    let mut scratch = vec![0u32; r];
    for ca in a.columns() {
        for cb in b.columns() {
            let mut v = crate::F2Vec::zeros(sym_dim(r, m + n));
            for i in ca.ones() {
                for j in cb.ones() {
                    for k in 0..r {
                        scratch[k] = bm[i].0[k] + bn[j].0[k];
                    }
                    v.flip(sym_index(&scratch));
                }
            }
            out.push(v);
        }
    }
    out
}

/// Checks that `L̃_m · L̃_n ⊆ L̃_{m+n}`: every product of basis elements is
/// killed by both `Q₀` and `Q₁`.
#[must_use]
pub fn kerq_product_closed(r: usize, m: usize, n: usize) -> bool {
    let (_, a) = l_functors(r, m);
    let (_, b) = l_functors(r, n);
    let q0 = milnor_derivation(0, r, m + n);
    let q1 = milnor_derivation(1, r, m + n);
    let (_, target) = l_functors(r, m + n);
    let mut span = EchelonBasis::new(sym_dim(r, m + n));
    for c in target.inclusion.columns() {
        span.insert(c);
    }
    products(r, m, &a.inclusion, n, &b.inclusion)
        .iter()
        .all(|p| q0.apply(p).is_zero() && q1.apply(p).is_zero() && span.contains(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::rn_group;
    use crate::polyalg::binomial;

    #[test]
    fn hz_examples() {
        assert_eq!(hz_cohom_table(2, 4)[2].dim, 2);
        assert_eq!(hz_cohom_table(3, 4)[1].dim, 0);
        assert_eq!(hz_cohom_table(3, 4)[3].dim, 3);
        assert_eq!(hz_cohom_table(3, 4)[0].free_rank, 1);
        assert_eq!(hz_hom_table(1, 4)[1].dim, 1);
        for r in 1..5 {
            assert_eq!(hz_hom_table(r, 4)[2].dim, binomial(r, 2) as usize);
        }
        assert_eq!(hz_hom_table(2, 4)[0].free_rank, 1);
    }

    #[test]
    fn qfrak_examples() {
        for row in qfrak_tables(1, 16).rows {
            assert_eq!(row.cohom_im, 0);
            assert_eq!(row.hom_im, 0);
        }
        for r in 1..4 {
            for row in qfrak_tables(r, 14).rows {
                let n = row.degree as usize;
                assert!(row.cohom_im <= row.cohom_ker && row.hom_im <= row.hom_ker);
                let want_c = if n.is_multiple_of(2) { p_dim(r, n / 2) } else { 0 };
                let want_h = if n % 2 == 1 { p_dim(r, n.div_ceil(2)) } else { 0 };
                assert_eq!(row.cohom_homology(), want_c, "r={r} n={n}");
                assert_eq!(row.hom_homology(), want_h, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn ku_cohom_identities() {
        for row in ku_cohom_table(1, 16).rows {
            assert_eq!(row.torsion_dim, 0);
            if row.degree % 2 == 0 {
                assert_eq!(row.z2_free_rank, if row.degree == 0 { 2 } else { 1 });
            }
        }
        for r in 2..4 {
            for row in ku_cohom_table(r, 14).rows.into_iter().skip(1) {
                if row.degree % 2 == 0 {
                    assert_eq!(row.modv_dim, row.torsion_dim + row.cotorsion_modv_dim);
                } else {
                    assert_eq!(row.torsion_dim, row.modv_dim);
                    assert_eq!(row.cotorsion_modv_dim, 0);
                }
            }
        }
    }

    #[test]
    fn ku_hom_examples() {
        let t = ku_hom_table(1, 9).unwrap();
        for d in 1..=5 {
            assert_eq!(t.rows[2 * d - 1].cotorsion, FinAbGroup::cyclic(1 << d));
        }
        assert!(t.rows.iter().all(|r| r.torsion_dim == 0));
        assert_eq!(t.rows[0].cotorsion.free_rank, 1);
        let t = ku_hom_table(2, 8).unwrap();
        let c = ku_cohom_table(2, 12);
        for row in &t.rows {
            let n = row.degree as usize;
            assert_eq!(row.torsion_dim, c.rows[n + 4].torsion_dim);
            if n % 2 == 1 {
                let d = n.div_ceil(2);
                assert_eq!(row.cotorsion, rn_group(2, d).unwrap());
                assert_eq!(row.cotorsion.mod_two_dim(), p_dim(2, d));
            } else if n > 0 {
                assert!(row.cotorsion.is_trivial());
            }
        }
    }

    #[test]
    fn kerq_closed_under_products() {
        for r in 1..4 {
            for m in [2, 4, 6] {
                for n in [2, 4] {
                    assert!(kerq_product_closed(r, m, n), "r={r} m={m} n={n}");
                }
            }
        }
    }
}
