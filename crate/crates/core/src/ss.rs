//! The local cohomology spectral sequences
//! `E_{s,*} = H^{−s}_I(M) ⇒ E_*(BV₊)` for `M = HZ*(BV₊)` and `M = ku*(BV₊)`.
//!
//! Differentials are not computed from chain data. The pages are assembled
//! from [`crate::localcoh`] and the known pattern of differentials is
//! imposed; every step checks that the pattern is possible (a source and a
//! target of the right size exist) and reports [`Error::Inconsistent`]
//! otherwise. The result is then compared with the abutment tables from
//! [`crate::kumod`].
//!
//! Entries are indexed by column `s ∈ −r..=0` and total (homological)
//! degree `n`. A class in `H^j_I(M)` of internal degree `c` sits in column
//! `s = −j` at `n = −c − j`. A differential `d^k` maps `(s, n)` to
//! `(s − k, n − 1)`.
//!
//! For `ku`, the pieces are:
//!
//! * `s = 0`: `ℤ[v]`, free of rank one in every even `n ≥ 0`.
//! * `s = −1`: `H¹_I(Q)`, `Q = cotors_v ku*`. Only its `v`-adic layers are
//!   tracked; layer 0 is `H¹_I(Q/v)` and layer `i` is layer 0 moved up by
//!   `2i` with the `i` highest `F₂` summands removed.
//! * `−2 ≥ s ≥ 1−r`: `H^{−s}_I(𝔏_{−s,*})` with generators in degree `6 − s`.
//! * `s = −r`: `H^r_I(T)` for the `v`-torsion `T`. The `F₂ ⊕ D𝔏₁` part of
//!   `H^r_I(ku*)` coming from `Q` is not listed separately: it is exactly
//!   what layer `r−2` hits.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exactla::{FinAbGroup, GradedDim};
use crate::kumod::{ku_hom_table, hz_hom_table};
use crate::localcoh::{
    cech_local_cohomology, h0_index_in_degree_zero, integral_cech_local_cohomology, present_module,
    ModuleSpec,
};
use crate::{p_dim, Error};

/// Which page a [`SSPage`] is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PageIndex {
    Finite(usize),
    Infinity,
}

impl std::fmt::Display for PageIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PageIndex::Finite(k) => write!(f, "E{k}"),
            PageIndex::Infinity => write!(f, "Einf"),
        }
    }
}

/// One page, restricted to total degrees `lo..=hi`.
///
/// Every entry is a finite 2-group plus a free part. Torsion is recorded as
/// `log₂` of the order (the F₂-dimension when elementary).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SSPage {
    pub label: String,
    pub page: PageIndex,
    pub r: usize,
    pub lo: i64,
    pub hi: i64,
    /// `log₂ |torsion|` by column, then total degree.
    pub torsion: BTreeMap<i64, GradedDim>,
    /// Free ranks by column, then total degree.
    pub free: BTreeMap<i64, GradedDim>,
    /// Entries known as explicit groups.
    pub groups: BTreeMap<(i64, i64), FinAbGroup>,
    /// Columns described symbolically, such as `ℤ[v]`.
    pub symbolic: BTreeMap<i64, String>,
}

impl SSPage {
    fn new(label: &str, page: PageIndex, r: usize, lo: i64, hi: i64) -> Self {
        let cols = || (-(r as i64)..=0).map(|s| (s, GradedDim::new())).collect();
        SSPage {
            label: label.to_string(),
            page,
            r,
            lo,
            hi,
            torsion: cols(),
            free: cols(),
            groups: BTreeMap::new(),
            symbolic: BTreeMap::new(),
        }
    }

    fn column_mut(map: &mut BTreeMap<i64, GradedDim>, s: i64) -> Result<&mut GradedDim, Error> {
        map.get_mut(&s).ok_or_else(|| Error::Invalid(format!("column {s} outside −r..=0")))
    }

    fn set_torsion(&mut self, s: i64, n: i64, dim: usize) -> Result<(), Error> {
        if (self.lo..=self.hi).contains(&n) {
            Self::column_mut(&mut self.torsion, s)?.set(n, dim);
        }
        Ok(())
    }

    fn set_free(&mut self, s: i64, n: i64, rank: usize) -> Result<(), Error> {
        if (self.lo..=self.hi).contains(&n) {
            Self::column_mut(&mut self.free, s)?.set(n, rank);
        }
        Ok(())
    }

    #[must_use]
    pub fn torsion_at(&self, s: i64, n: i64) -> usize {
        self.torsion.get(&s).map_or(0, |c| c.get(n))
    }

    #[must_use]
    pub fn free_at(&self, s: i64, n: i64) -> usize {
        self.free.get(&s).map_or(0, |c| c.get(n))
    }

    /// `Σ_s log₂ |torsion of E_{s,n}|`.
    #[must_use]
    pub fn log2_total(&self, n: i64) -> u64 {
        self.torsion.values().map(|c| c.get(n) as u64).sum()
    }

    #[must_use]
    pub fn free_total(&self, n: i64) -> usize {
        self.free.values().map(|c| c.get(n)).sum()
    }

    /// True when column `s` has no torsion and no free part.
    #[must_use]
    pub fn column_is_zero(&self, s: i64) -> bool {
        self.torsion.get(&s).is_none_or(GradedDim::is_zero)
            && self.free.get(&s).is_none_or(GradedDim::is_zero)
    }

    fn relabel(&self, page: PageIndex) -> SSPage {
        let mut p = self.clone();
        p.page = page;
        p
    }
}

/// A differential that was imposed: `d^page` from `(s, n)` with the given
/// rank (or the index of its kernel, for maps out of `ℤ`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Differential {
    pub page: usize,
    pub source: (i64, i64),
    pub target: (i64, i64),
    pub rank: usize,
}

/// One total degree of an abutment comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbutmentRow {
    pub degree: i64,
    pub ss_log2_order: u64,
    pub ss_free_rank: usize,
    pub target_log2_order: u64,
    pub target_free_rank: usize,
    pub equal: bool,
}

/// `E^∞` against an independently computed target, degree by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbutmentReport {
    pub target: String,
    pub r: usize,
    pub rows: Vec<AbutmentRow>,
    pub all_equal: bool,
}

impl AbutmentReport {
    fn new(target: &str, r: usize, rows: Vec<AbutmentRow>) -> Self {
        let all_equal = rows.iter().all(|row| row.equal);
        AbutmentReport { target: target.to_string(), r, rows, all_equal }
    }

    /// Rows that disagree.
    pub fn mismatches(&self) -> impl Iterator<Item = &AbutmentRow> {
        self.rows.iter().filter(|row| !row.equal)
    }
}

fn inconsistent(msg: String) -> Error {
    Error::Inconsistent(msg)
}

/// Lowest total degree tracked for rank `r`; everything below it vanishes.
#[must_use]
pub fn lowest_total_degree(r: usize) -> i64 {
    -2 * r as i64 - 2
}

/// `H^j_I(M)` re-indexed by total degree `n = −c − j` over `lo..=hi`,
/// reading `M` with its generators moved up by `shift`.
fn by_total_degree(h: &GradedDim, j: usize, shift: i64, lo: i64, hi: i64) -> GradedDim {
    (lo..=hi).map(|n| (n, h.get(-n - j as i64 - shift))).collect()
}

fn total_degree_window(lo: i64, hi: i64, j: usize, shift: i64) -> (i64, i64) {
    (-hi - j as i64 - shift, -lo - j as i64 - shift)
}

/// The `D𝔏_{1,*}` part of `H¹_I(Q/v)`: `dim p_{b+1}Ī` at `n = 2b − (2r−3)`.
#[must_use]
pub fn dual_lfrak_one(r: usize, lo: i64, hi: i64) -> GradedDim {
    let base = 3 - 2 * r as i64;
    (lo..=hi)
        .filter_map(|n| {
            let b2 = n - base;
            (b2 >= 0 && b2 % 2 == 0).then(|| (n, p_dim(r, (b2 / 2) as usize + 1)))
        })
        .collect()
}

/// The `v`-adic layers of `H¹_I(Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VAdicLayers {
    pub r: usize,
    pub lo: i64,
    pub hi: i64,
    /// `H¹_I(Q/v)` by total degree.
    pub layer0: GradedDim,
    /// Total degrees of the single `F₂` summands of layer 0, descending.
    pub unit_degrees: Vec<i64>,
}

impl VAdicLayers {
    /// Splits `H¹_I(Q/v)` into `D𝔏₁` and the `r−1` single `F₂`s.
    pub fn new(r: usize, lo: i64, hi: i64, layer0: GradedDim) -> Result<Self, Error> {
        let dual = dual_lfrak_one(r, lo, hi);
        let units = layer0.checked_minus(&dual).ok_or_else(|| {
            inconsistent(format!("H¹(Q/v) does not contain D𝔏₁ (r={r})"))
        })?;
        let mut unit_degrees = Vec::new();
        for (n, d) in units.iter() {
            if d != 1 {
                return Err(inconsistent(format!(
                    "H¹(Q/v) has {d} extra classes in total degree {n}, expected at most one"
                )));
            }
            unit_degrees.push(n);
        }
        unit_degrees.reverse();
        if unit_degrees.len() != r - 1 {
            return Err(inconsistent(format!(
                "H¹(Q/v) has {} summands F₂ beyond D𝔏₁, expected {}",
                unit_degrees.len(),
                r - 1
            )));
        }
        Ok(VAdicLayers { r, lo, hi, layer0, unit_degrees })
    }

    /// Layer `i`: `v^i H¹(Q)/v^{i+1}`, as `F^{r−1−i} ⊕ D𝔏₁` moved up by `2i`.
    #[must_use]
    pub fn layer(&self, i: usize) -> GradedDim {
        let shift = 2 * i as i64;
        let mut out = self.dual_part(i);
        for &n in self.unit_degrees.iter().skip(i) {
            let m = n + shift;
            if (self.lo..=self.hi).contains(&m) {
                out.add(m, 1);
            }
        }
        out.restricted(self.lo, self.hi)
    }

    /// The `D𝔏₁` part of layer `i`.
    #[must_use]
    pub fn dual_part(&self, i: usize) -> GradedDim {
        let shift = 2 * i as i64;
        dual_lfrak_one(self.r, self.lo - shift, self.hi - shift).shifted(shift)
    }

    /// Number of layers that can be nonzero in the window.
    #[must_use]
    pub fn count(&self) -> usize {
        let lowest = -(2 * self.r as i64 - 1);
        ((self.hi - lowest) / 2).max(0) as usize + 1
    }

    /// `Σ_{i ≥ from} layer i`: the associated graded of `v^{from} H¹_I(Q)`.
    #[must_use]
    pub fn tail(&self, from: usize) -> GradedDim {
        (from..self.count()).fold(GradedDim::new(), |acc, i| acc.plus(&self.layer(i)))
    }
}

/// The `ku` spectral sequence with its imposed differentials.
#[derive(Clone, Debug, Serialize)]
pub struct KuSpectralSequence {
    pub r: usize,
    pub layers: VAdicLayers,
    /// `E¹, E², …` up to the last page with a differential.
    pub pages: Vec<SSPage>,
    pub einfty: SSPage,
    pub differentials: Vec<Differential>,
}

/// Assembles the `ku` spectral sequence on total degrees
/// `lowest_total_degree(r)..=bound`.
pub fn ku_spectral_sequence(r: usize, bound: i64) -> Result<KuSpectralSequence, Error> {
    if r < 2 {
        return Err(Error::Invalid(format!("the ku spectral sequence needs r ≥ 2, got {r}")));
    }
    let lo = lowest_total_degree(r);
    let hi = bound;
    // Differentials lower the degree by one: sources are read on lo..=hi+1
    // and targets on lo-1..=hi.
    let (tlo, thi) = (lo - 1, hi);

    let (clo, chi) = total_degree_window(lo, hi + 1, 1, 0);
    let qv = cech_local_cohomology(&present_module(ModuleSpec::QmodV { r }), clo, chi)?;
    let layers = VAdicLayers::new(r, lo, hi + 1, by_total_degree(&qv.get(1), 1, 0, lo, hi + 1))?;

    let mut middle = BTreeMap::new();
    for i in 2..r {
        let shift = i as i64 + 4;
        let (clo, chi) = total_degree_window(tlo, thi, i, shift);
        let t = cech_local_cohomology(&present_module(ModuleSpec::Lfrak { r, i }), clo, chi)?;
        middle.insert(i, by_total_degree(&t.get(i), i, shift, tlo, thi));
    }
    let (clo, chi) = total_degree_window(tlo, thi, r, 0);
    let tors = cech_local_cohomology(&present_module(ModuleSpec::TorsKu { r }), clo, chi)?;
    let top = by_total_degree(&tors.get(r), r, 0, tlo, thi);

    let ri = r as i64;
    let mut e1 = SSPage::new(&format!("ku r={r}"), PageIndex::Finite(1), r, tlo, thi);
    e1.symbolic.insert(0, "Z[v]".to_string());
    e1.symbolic.insert(-1, "H^1_I(Q), v-adic layers".to_string());
    for n in (0..=hi).step_by(2) {
        e1.set_free(0, n, 1)?;
    }
    for (n, d) in layers.tail(0).iter() {
        e1.set_torsion(-1, n, d)?;
    }
    for (&i, col) in &middle {
        for (n, d) in col.iter() {
            e1.set_torsion(-(i as i64), n, d)?;
        }
    }
    for (n, d) in top.iter() {
        e1.set_torsion(-ri, n, d)?;
    }

    // d^{k} carries layer k−1 of the s = −1 column onto column −(k+1).
    let mut pages = vec![e1.clone()];
    let mut current = e1;
    let mut differentials = Vec::new();
    for k in 1..r {
        let target_col = -(k as i64) - 1;
        let source = layers.layer(k - 1);
        let mut next = current.relabel(PageIndex::Finite(k + 1));
        for n in lo..=hi + 1 {
            let s = source.get(n);
            let t = current.torsion_at(target_col, n - 1);
            let is_top = k + 1 == r;
            if (is_top && s > t) || (!is_top && s != t) {
                return Err(inconsistent(format!(
                    "d^{k}: layer {} has dim {s} in degree {n} but column {target_col} has dim {t} \
                     in degree {}",
                    k - 1,
                    n - 1
                )));
            }
            if s > 0 {
                differentials.push(Differential {
                    page: k,
                    source: (-1, n),
                    target: (target_col, n - 1),
                    rank: s,
                });
            }
            if n <= hi {
                next.set_torsion(-1, n, current.torsion_at(-1, n) - s)?;
            }
            next.set_torsion(target_col, n - 1, t - s)?;
        }
        if !is_zero_below(&next, target_col, lo) {
            return Err(inconsistent(format!("column {target_col} survives below degree {lo}")));
        }
        pages.push(next.clone());
        current = next;
    }
    let einfty = current.relabel(PageIndex::Infinity);
    Ok(KuSpectralSequence { r, layers, pages, einfty, differentials })
}

fn is_zero_below(page: &SSPage, s: i64, lo: i64) -> bool {
    page.torsion_at(s, lo - 1) == 0
}

/// `E¹` of the `ku` spectral sequence.
pub fn e1_page_ku(r: usize, bound: i64) -> Result<SSPage, Error> {
    Ok(ku_spectral_sequence(r, bound)?.pages.swap_remove(0))
}

/// Compares `E^∞` of the `ku` spectral sequence with `ku_n(BV₊)` for
/// `lowest_total_degree(r) ≤ n ≤ bound`. Negative degrees must vanish.
///
/// The `kumod` table records the coefficient `ℤ` only in degree 0; the
/// copies `ℤ·v^k` in degrees `2k > 0` are added here.
pub fn einfty_consistency(r: usize, bound: i64) -> Result<AbutmentReport, Error> {
    let ss = ku_spectral_sequence(r, bound)?;
    let table = ku_hom_table(r, bound.max(0) as usize)?;
    let rows = (lowest_total_degree(r)..=bound)
        .map(|n| {
            let (target_log2, target_free) = if n < 0 {
                (0, 0)
            } else {
                let row = &table.rows[n as usize];
                let coeff = usize::from(n > 0 && n % 2 == 0);
                (row.log2_finite_order(), row.cotorsion.free_rank + coeff)
            };
            let ss_log2 = ss.einfty.log2_total(n);
            let ss_free = ss.einfty.free_total(n);
            AbutmentRow {
                degree: n,
                ss_log2_order: ss_log2,
                ss_free_rank: ss_free,
                target_log2_order: target_log2,
                target_free_rank: target_free,
                equal: ss_log2 == target_log2 && ss_free == target_free,
            }
        })
        .collect();
    Ok(AbutmentReport::new(&format!("ku_*(BV+) r={r}"), r, rows))
}

/// The `HZ` spectral sequence.
#[derive(Clone, Debug, Serialize)]
pub struct HzSpectralSequence {
    pub r: usize,
    /// `E², E³, …, E^{r+1}`.
    pub pages: Vec<SSPage>,
    pub einfty: SSPage,
    pub differentials: Vec<Differential>,
    /// Index of the permanent cycles in `E²_{0,0} = H⁰_I(HZ*)_0 ≅ ℤ`.
    pub zero_column_index: u64,
    /// Index of `H⁰_I(HZ*)_0` in `HZ⁰ = ℤ`.
    pub h0_index: FinAbGroup,
}

/// Assembles the `HZ` spectral sequence on total degrees
/// `lowest_total_degree(r)..=bound` from the integral Čech computation, and
/// kills one `F₂` in each column `−2, …, −r` (total degree −1) by a
/// differential out of `E_{0,0}`.
pub fn hz_spectral_sequence(r: usize, bound: i64) -> Result<HzSpectralSequence, Error> {
    if r < 2 {
        return Err(Error::Invalid(format!("the HZ spectral sequence needs r ≥ 2, got {r}")));
    }
    let lo = lowest_total_degree(r);
    let hi = bound;
    let clo = -hi - r as i64;
    let chi = -lo;
    let table = integral_cech_local_cohomology(r, clo, chi)?;
    let mut e2 = SSPage::new(&format!("HZ r={r}"), PageIndex::Finite(2), r, lo, hi);
    for j in 0..=r {
        let s = -(j as i64);
        let h = table.get(j);
        for n in lo..=hi {
            let c = -n - j as i64;
            if let Some(g) = table.integral.get(&(j, c)) {
                e2.set_free(s, n, g.free_rank)?;
                e2.set_torsion(s, n, g.log2_torsion_order().unwrap_or(0) as usize)?;
                e2.groups.insert((s, n), g.clone());
            } else {
                e2.set_torsion(s, n, h.get(c))?;
            }
        }
    }
    if !e2.column_is_zero(-1) {
        return Err(inconsistent("H¹_I(HZ*) is nonzero".to_string()));
    }
    if e2.free_at(0, 0) != 1 || e2.free_total(0) != 1 {
        return Err(inconsistent("E²_{0,0} is not ℤ".to_string()));
    }
    for j in 2..r {
        let s = -(j as i64);
        let col = &e2.torsion[&s];
        if col.total() != 1 || col.get(-1) != 1 {
            return Err(inconsistent(format!(
                "column {s} is not a single F₂ in total degree −1: {:?}",
                col.iter().collect::<Vec<_>>()
            )));
        }
    }

    let mut pages = vec![e2.clone()];
    let mut current = e2;
    let mut differentials = Vec::new();
    let mut index = 1u64;
    for j in 2..=r {
        let s = -(j as i64);
        let t = current.torsion_at(s, -1);
        if t == 0 {
            return Err(inconsistent(format!(
                "d^{j} out of E_{{0,0}} has no target in column {s}"
            )));
        }
        let mut next = current.relabel(PageIndex::Finite(j + 1));
        next.set_torsion(s, -1, t - 1)?;
        index *= 2;
        differentials.push(Differential { page: j, source: (0, 0), target: (s, -1), rank: 1 });
        pages.push(next.clone());
        current = next;
    }
    let mut einfty = current.relabel(PageIndex::Infinity);
    einfty.groups.insert((0, 0), FinAbGroup::free(1));
    einfty.symbolic.insert(0, format!("{index}·H^0_I(HZ*)_0"));
    let h0_index = h0_index_in_degree_zero(&present_module(ModuleSpec::HZplus { r }))?;
    Ok(HzSpectralSequence { r, pages, einfty, differentials, zero_column_index: index, h0_index })
}

/// Compares `E^∞` of the `HZ` spectral sequence with `HZ_n(BV₊)`.
pub fn hz_einfty_consistency(r: usize, bound: i64) -> Result<AbutmentReport, Error> {
    let ss = hz_spectral_sequence(r, bound)?;
    let table = hz_hom_table(r, bound.max(0) as usize);
    let rows = (lowest_total_degree(r)..=bound)
        .map(|n| {
            let (t_log2, t_free) = if n < 0 {
                (0, 0)
            } else {
                let row = &table[n as usize];
                (row.dim as u64, row.free_rank)
            };
            let ss_log2 = ss.einfty.log2_total(n);
            let ss_free = ss.einfty.free_total(n);
            AbutmentRow {
                degree: n,
                ss_log2_order: ss_log2,
                ss_free_rank: ss_free,
                target_log2_order: t_log2,
                target_free_rank: t_free,
                equal: ss_log2 == t_log2 && ss_free == t_free,
            }
        })
        .collect();
    Ok(AbutmentReport::new(&format!("HZ_*(BV+) r={r}"), r, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_rank_three() {
        let ss = ku_spectral_sequence(3, 6).unwrap();
        assert_eq!(ss.layers.unit_degrees, vec![-3, -5]);
        let l1 = ss.layers.layer(1);
        assert_eq!(
            l1.iter().filter(|&(n, _)| n <= 3).collect::<Vec<_>>(),
            vec![(-3, 1), (-1, 3), (1, 6), (3, 7)]
        );
    }

    #[test]
    fn rank_two_has_no_middle_band() {
        let e1 = e1_page_ku(2, 8).unwrap();
        assert_eq!(e1.torsion.keys().copied().collect::<Vec<_>>(), vec![-2, -1, 0]);
        assert!(e1.torsion[&0].is_zero());
        assert_eq!(e1.free_at(0, 4), 1);
    }

    #[test]
    fn top_corner_rank_three() {
        let ss = ku_spectral_sequence(3, 6).unwrap();
        let top: Vec<_> = (1..=4).map(|n| ss.einfty.torsion_at(-3, n)).collect();
        assert_eq!(top, vec![0, 3, 1, 8]);
        assert!(ss.einfty.column_is_zero(-2));
    }

    #[test]
    fn hz_rank_three() {
        let hz = hz_spectral_sequence(3, 4).unwrap();
        assert_eq!(hz.zero_column_index, 4);
        assert_eq!(hz.differentials.len(), 2);
        assert_eq!(hz.h0_index.to_string(), "Z/2");
        let top: Vec<_> = (1..=3).map(|n| hz.einfty.torsion_at(-3, n)).collect();
        assert_eq!(top, vec![3, 3, 7]);
    }

    #[test]
    fn abutments_small() {
        for r in 2..=3 {
            let ku = einfty_consistency(r, 8).unwrap();
            assert!(ku.all_equal, "{:?}", ku.mismatches().collect::<Vec<_>>());
            let hz = hz_einfty_consistency(r, 8).unwrap();
            assert!(hz.all_equal, "{:?}", hz.mismatches().collect::<Vec<_>>());
        }
    }
}
