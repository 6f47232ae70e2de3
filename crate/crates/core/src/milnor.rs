//! Milnor derivations on `S^*(F^r)`, Koszul differentials on `Λ^* ⊗ S^*`,
//! and the functors built from them.
//!
//! Naming follows the usual conventions: `Kₙ = ker(Q₀) ⊆ Sⁿ`,
//! `Lₙ = Q₁(Kₙ₋₃)`, `L̃ₙ = ker(Q₁|Kₙ)`, `𝔎_{a,b} = τ₀(Λ^a ⊗ S^b)` and
//! `𝔏_{a,b} = 𝔎_{a,b} / τ₁(𝔎_{a+1,b−2})`. All degrees are polynomial degrees
//! (a linear form has degree 1).
//!
//! Bicomplexes `B(i)` and `D(i)` are sliced by the symmetric degree `w` of
//! the anchor cell `Λ^i ⊗ S^w` at `(s,t) = (0,i)`. The cell at `(s,t)` is
//! `Λ^{s+t} ⊗ S^{w−s−2(t−i)}`; horizontal maps are `τ₀`, vertical maps are
//! `τ₁`, and the total degree of a cell equals its exterior degree. In the
//! topological grading where `τ₀` raises degree by 2 and `τ₁` by 4, a slice
//! sits in internal degree `2w`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::exactla::{f2_decompose, EchelonBasis, F2Matrix, F2Vec, GradedDim, GradedMap};
use crate::polyalg::{
    ext_dim, odd_split, sym_basis, sym_dim, sym_index, BasisDescriptor, BasisKind, ExtBasis,
    ExtMask,
};
use crate::Error;

/// `Qᵢ : Sⁿ → S^{n+2^{i+1}−1}`, the derivation with `Qᵢ(x) = x^{2^{i+1}}`.
#[must_use]
pub fn milnor_derivation(i: u32, r: usize, n: usize) -> F2Matrix {
    let step = (1u32 << (i + 1)) - 1;
    let src = sym_basis(r, n);
    let mut m = F2Matrix::zeros(sym_dim(r, n + step as usize), src.len());
    let mut scratch = vec![0u32; r];
    for (col, e) in src.iter().enumerate() {
        for j in 0..r {
            if e.0[j] % 2 == 1 {
                scratch.copy_from_slice(&e.0);
                scratch[j] += step;
                m.flip(sym_index(&scratch), col);
            }
        }
    }
    m
}

/// `τᵢ : Λ^a ⊗ S^b → Λ^{a−1} ⊗ S^{b+2^i}`,
/// `e_J ⊗ f ↦ Σ_{j∈J} e_{J∖j} ⊗ x_j^{2^i} f`. Zero when `a = 0`.
#[must_use]
pub fn koszul_tau(i: u32, r: usize, a: usize, b: usize) -> F2Matrix {
    let step = 1u32 << i;
    let src_ext = ExtBasis::new(r, a);
    let sb = sym_basis(r, b);
    let cols = src_ext.len() * sb.len();
    if a == 0 {
        return F2Matrix::zeros(0, cols);
    }
    let tgt_ext = ExtBasis::new(r, a - 1);
    let tgt_sym = sym_dim(r, b + step as usize);
    let mut m = F2Matrix::zeros(tgt_ext.len() * tgt_sym, cols);
    let mut scratch = vec![0u32; r];
    for (ji, mask) in src_ext.masks.iter().enumerate() {
        for (fi, f) in sb.iter().enumerate() {
            let col = ji * sb.len() + fi;
            for j in mask.elements() {
                scratch.copy_from_slice(&f.0);
                scratch[j] += step;
                let row = tgt_ext.index_of(mask.without(j)) * tgt_sym + sym_index(&scratch);
                m.flip(row, col);
            }
        }
    }
    m
}

/// A subquotient `A/B` of a space with a monomial basis.
///
/// `inclusion` has as columns ambient representatives of a basis of `A/B`;
/// `projection` maps ambient vectors of `A` to those coordinates, so
/// `projection · inclusion = 1`.
#[derive(Clone, Debug)]
pub struct SubquotientSpace {
    pub ambient: BasisDescriptor,
    pub inclusion: F2Matrix,
    pub projection: F2Matrix,
}

impl SubquotientSpace {
    #[must_use]
    pub fn dim(&self) -> usize {
        self.inclusion.cols()
    }

    /// Builds `span(numerator)/span(denominator)` (both given by columns);
    /// fails unless the denominator lies in the numerator.
    pub fn new(
        ambient: BasisDescriptor,
        numerator: &F2Matrix,
        denominator: &F2Matrix,
    ) -> Result<Self, Error> {
        let n = numerator.rows();
        if denominator.rows() != n {
            return Err(Error::Shape("subquotient ambient dimensions differ".into()));
        }
        let mut num_span = EchelonBasis::new(n);
        for c in numerator.columns() {
            num_span.insert(c);
        }
        let mut echelon = EchelonBasis::new(n);
        let mut reps: Vec<F2Vec> = Vec::new();
        for c in denominator.columns() {
            if !num_span.contains(&c) {
                return Err(Error::Invalid("denominator is not contained in numerator".into()));
            }
            if echelon.insert(c.clone()) {
                reps.push(c);
            }
        }
        let b_rank = reps.len();
        let mut quotient_reps = Vec::new();
        for c in numerator.columns() {
            if echelon.insert(c.clone()) {
                reps.push(c.clone());
                quotient_reps.push(c);
            }
        }
        // Complete to a basis of the ambient space and invert.
        for k in 0..n {
            let u = F2Vec::unit(n, k);
            if echelon.insert(u.clone()) {
                reps.push(u);
            }
        }
        let full = F2Matrix::from_columns(n, &reps);
        let inv = invert(&full).expect("completed basis is invertible");
        let q = quotient_reps.len();
        let projection = F2Matrix::from_fn(q, n, |i, j| inv.get(b_rank + i, j));
        let kind = BasisKind::Subquotient(Box::new(ambient.kind.clone()));
        Ok(Self {
            ambient: BasisDescriptor { kind, ..ambient },
            inclusion: F2Matrix::from_columns(n, &quotient_reps),
            projection,
        })
    }

    /// The subspace spanned by the given columns.
    pub fn subspace(ambient: BasisDescriptor, span: &F2Matrix) -> Self {
        Self::new(ambient, span, &F2Matrix::zeros(span.rows(), 0))
            .expect("zero space is contained in every subspace")
    }
}

/// Inverse of a square F₂ matrix, if it exists.
#[must_use]
pub fn invert(m: &F2Matrix) -> Option<F2Matrix> {
    let n = m.rows();
    if m.cols() != n {
        return None;
    }
    let mut aug = m.hstack(&F2Matrix::identity(n));
    let piv = aug.rref();
    if piv.len() < n || piv.iter().enumerate().any(|(k, &p)| p != k) {
        return None;
    }
    Some(F2Matrix::from_fn(n, n, |i, j| aug.get(i, n + j)))
}

fn image_span(m: &F2Matrix) -> F2Matrix {
    f2_decompose(m).image
}

/// `Kₙ(F^r) = ker(Q₀ : Sⁿ → Sⁿ⁺¹)`.
#[must_use]
#[allow(non_snake_case)]
pub fn kernel_functor_K(r: usize, n: usize) -> SubquotientSpace {
    let q0 = milnor_derivation(0, r, n);
    SubquotientSpace::subspace(BasisDescriptor::sym(r, n), &f2_decompose(&q0).kernel)
}

/// `(Lₙ, L̃ₙ)` as subspaces of `Sⁿ`.
#[must_use]
pub fn l_functors(r: usize, n: usize) -> (SubquotientSpace, SubquotientSpace) {
    let ambient = BasisDescriptor::sym(r, n);
    let l = if n >= 3 {
        let k = kernel_functor_K(r, n - 3);
        image_span(&milnor_derivation(1, r, n - 3).mul(&k.inclusion))
    } else {
        F2Matrix::zeros(sym_dim(r, n), 0)
    };
    let k = kernel_functor_K(r, n);
    let c = f2_decompose(&milnor_derivation(1, r, n).mul(&k.inclusion)).kernel;
    let ltilde = k.inclusion.mul(&c);
    (SubquotientSpace::subspace(ambient.clone(), &l), SubquotientSpace::subspace(ambient, &ltilde))
}

/// `dim Kₙ(F^r)`, via exactness: `Kₙ = Q₀(Sⁿ⁻¹)` for `n > 0`.
#[must_use]
pub fn k_dim(r: usize, n: usize) -> usize {
    if n == 0 {
        1
    } else {
        milnor_derivation(0, r, n - 1).rank()
    }
}

/// `dim Lₙ(F^r) = rank(Q₁Q₀ : Sⁿ⁻⁴ → Sⁿ)`.
#[must_use]
pub fn l_dim(r: usize, n: usize) -> usize {
    if n < 4 {
        0
    } else {
        milnor_derivation(1, r, n - 3).mul(&milnor_derivation(0, r, n - 4)).rank()
    }
}

/// `dim L̃ₙ = dim Kₙ − dim Lₙ₊₃`.
#[must_use]
pub fn ltilde_dim(r: usize, n: usize) -> usize {
    k_dim(r, n) - l_dim(r, n + 3)
}

/// Dimensions of `K`, `L`, `L̃` for `n = 0..=nmax`, computed in parallel.
#[derive(Clone, Debug, Serialize)]
pub struct MilnorDims {
    pub r: usize,
    pub k: Vec<usize>,
    pub l: Vec<usize>,
    pub ltilde: Vec<usize>,
}

impl MilnorDims {
    #[must_use]
    pub fn compute(r: usize, nmax: usize) -> Self {
        let k: Vec<usize> = (0..=nmax + 4).into_par_iter().map(|n| k_dim(r, n)).collect();
        let l: Vec<usize> = (0..=nmax + 4).into_par_iter().map(|n| l_dim(r, n)).collect();
        let ltilde = (0..=nmax).map(|n| k[n] - l[n + 3]).collect();
        Self { r, k: k[..=nmax + 1].to_vec(), l, ltilde }
    }
}

/// Homology `L̃ₙ/Lₙ` of `(K_*, Q₁)` for `n = 0..=nmax`.
#[must_use]
#[allow(non_snake_case)]
pub fn q1_homology_on_K(r: usize, nmax: usize) -> GradedDim {
    let d = MilnorDims::compute(r, nmax);
    (0..=nmax).map(|n| (n as i64, d.ltilde[n] - d.l[n])).collect()
}

/// `rank τ₀` on `Λ^a ⊗ S^b`; this is `dim 𝔎_{a,b}` for `a ≥ 1`.
#[must_use]
pub fn tau0_rank(r: usize, a: usize, b: usize) -> usize {
    if a == 0 || a > r {
        return 0;
    }
    multigraded_tau0_rank(r, a, b)
}

/// `τ₀` preserves the multidegree `1_J + f`, so its rank is a sum over
/// multidegree blocks, each of size at most `C(r,a)`.
fn multigraded_tau0_rank(r: usize, a: usize, b: usize) -> usize {
    let src_ext = ExtBasis::new(r, a);
    let tgt_ext = ExtBasis::new(r, a - 1);
    let mut blocks: BTreeMap<Vec<u32>, Vec<(ExtMask, Vec<u32>)>> = BTreeMap::new();
    for f in sym_basis(r, b) {
        for &mask in &src_ext.masks {
            let md: Vec<u32> =
                f.0.iter().enumerate().map(|(j, &x)| x + u32::from(mask.contains(j))).collect();
            blocks.entry(md).or_default().push((mask, f.0.clone()));
        }
    }
    blocks
        .values()
        .map(|cells| {
            let mut m = F2Matrix::zeros(tgt_ext.len(), cells.len());
            for (col, (mask, _)) in cells.iter().enumerate() {
                for j in mask.elements() {
                    m.flip(tgt_ext.index_of(mask.without(j)), col);
                }
            }
            m.rank()
        })
        .sum()
}

/// `rank(τ₁τ₀ : Λ^a ⊗ S^b → Λ^{a−2} ⊗ S^{b+3})`.
#[must_use]
pub fn tau10_rank(r: usize, a: usize, b: usize) -> usize {
    if a < 2 || a > r {
        return 0;
    }
    koszul_tau(1, r, a - 1, b + 1).mul(&koszul_tau(0, r, a, b)).rank()
}

/// `dim 𝔎_{a,b}(F^r)`.
#[must_use]
pub fn kfrak_dim(r: usize, a: usize, b: usize) -> usize {
    if a == 0 {
        usize::from(b == 0)
    } else {
        tau0_rank(r, a, b)
    }
}

/// `dim 𝔏_{a,b}(F^r)` for `a ≥ 1`.
#[must_use]
pub fn lfrak_dim(r: usize, a: usize, b: usize) -> usize {
    assert!(a >= 1, "𝔏 is indexed by a ≥ 1");
    let killed = if b >= 2 { tau10_rank(r, a + 1, b - 2) } else { 0 };
    kfrak_dim(r, a, b) - killed
}

/// `(𝔎_{a,b}, 𝔏_{a,b})` as subquotients of `Λ^{a−1} ⊗ S^{b+1}` (for `a ≥ 1`).
/// For `a = 0` both are `F` (when `b = 0`) or zero.
#[must_use]
pub fn kfrak_lfrak(r: usize, a: usize, b: usize) -> (SubquotientSpace, SubquotientSpace) {
    if a == 0 {
        let desc = BasisDescriptor::sym(r, 0);
        let span = if b == 0 { F2Matrix::identity(1) } else { F2Matrix::zeros(1, 0) };
        let k = SubquotientSpace::subspace(desc, &span);
        return (k.clone(), k);
    }
    let ambient = BasisDescriptor::ext_sym(r, a - 1, b + 1);
    let kspan = image_span(&koszul_tau(0, r, a, b));
    let killed = if b >= 2 && a < r {
        image_span(&koszul_tau(1, r, a, b - 1).mul(&koszul_tau(0, r, a + 1, b - 2)))
    } else {
        F2Matrix::zeros(kspan.rows(), 0)
    };
    let k = SubquotientSpace::subspace(ambient.clone(), &kspan);
    let l = SubquotientSpace::new(ambient, &kspan, &killed).expect("τ₁τ₀ = τ₀τ₁ lands in 𝔎");
    (k, l)
}

/// Homology of `𝔎_{n+1,b−2n} → … → 𝔎_{2,b−2} → 𝔎_{1,b}` (differential `τ₁`),
/// keyed by homological degree `n`.
#[must_use]
pub fn j_complex_homology(r: usize, b: usize) -> GradedDim {
    let mut out = GradedDim::new();
    let mut n = 0;
    while 2 * n <= b && n < r {
        let c = b - 2 * n;
        let a = n + 1;
        let cycles = kfrak_dim(r, a, c) - tau10_rank(r, a, c);
        let boundaries = if c >= 2 { tau10_rank(r, a + 1, c - 2) } else { 0 };
        out.set(n as i64, cycles - boundaries);
        n += 1;
    }
    out
}

/// The two bicomplexes in the `(s,t)` plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BicomplexKind {
    /// Quotient window `t ≥ i`, `s ≥ 0`.
    B,
    /// Sub window `t ≤ i`, `s ≤ 0`.
    D,
}

/// `B(i)` or `D(i)` evaluated on `F^r`, for anchor weights up to `max_weight`.
#[derive(Clone, Debug, Serialize)]
pub struct Bicomplex {
    pub kind: BicomplexKind,
    pub i: usize,
    pub r: usize,
    pub max_weight: usize,
}

/// A nonzero cell: bidegree, exterior degree `a`, symmetric degree `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub s: i64,
    pub t: i64,
    pub a: usize,
    pub b: usize,
}

/// Builds the bicomplex description; cells are generated per weight.
#[must_use]
pub fn bicomplex(kind: BicomplexKind, i: usize, r: usize, max_weight: usize) -> Bicomplex {
    Bicomplex { kind, i, r, max_weight }
}

impl Bicomplex {
    fn in_window(&self, s: i64, t: i64) -> bool {
        let i = self.i as i64;
        let a = s + t;
        if a < 0 || a > self.r as i64 {
            return false;
        }
        match self.kind {
            BicomplexKind::B => t >= i && s >= 0,
            BicomplexKind::D => t <= i && s <= 0 && t >= 0,
        }
    }

    /// Lowest anchor weight with a nonzero cell: `D(i)` reaches `w = −2i`
    /// through the cell `(0,0)`.
    #[must_use]
    pub fn min_weight(&self) -> i64 {
        match self.kind {
            BicomplexKind::B => 0,
            BicomplexKind::D => -2 * self.i as i64,
        }
    }

    fn cell(&self, w: i64, s: i64, t: i64) -> Option<Cell> {
        if !self.in_window(s, t) {
            return None;
        }
        let b = w - s - 2 * (t - self.i as i64);
        (b >= 0).then_some(Cell { s, t, a: (s + t) as usize, b: b as usize })
    }

    /// Nonzero cells of the weight-`w` slice, ordered by `t` then `s`.
    #[must_use]
    pub fn cells(&self, w: i64) -> Vec<Cell> {
        let r = self.r as i64;
        let i = self.i as i64;
        let (tlo, thi) = match self.kind {
            BicomplexKind::B => (i, r),
            BicomplexKind::D => (0, i),
        };
        let mut out = Vec::new();
        for t in tlo..=thi {
            for s in -r..=r {
                if let Some(c) = self.cell(w, s, t) {
                    if ext_dim(self.r, c.a) > 0 {
                        out.push(c);
                    }
                }
            }
        }
        out
    }

    /// Total complex of the weight-`w` slice: term dimensions per total
    /// degree and the differential `Tot_m → Tot_{m−1}` for each `m ≥ 1`.
    #[must_use]
    pub fn total_complex(&self, w: i64) -> (Vec<usize>, Vec<F2Matrix>) {
        let cells = self.cells(w);
        let top = self.r;
        let mut by_deg: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
        for c in cells {
            by_deg[c.a].push(c);
        }
        let dim_of = |c: &Cell| ext_dim(self.r, c.a) * sym_dim(self.r, c.b);
        let offsets: Vec<Vec<usize>> = by_deg
            .iter()
            .map(|cs| {
                cs.iter()
                    .scan(0, |acc, c| {
                        let o = *acc;
                        *acc += dim_of(c);
                        Some(o)
                    })
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = by_deg.iter().map(|cs| cs.iter().map(dim_of).sum()).collect();
        let mut diffs = Vec::new();
        for m in 1..=top {
            let mut d = F2Matrix::zeros(dims[m - 1], dims[m]);
            for (ci, c) in by_deg[m].iter().enumerate() {
                let targets = [(c.s - 1, c.t, 0u32), (c.s, c.t - 1, 1u32)];
                for (ts, tt, which) in targets {
                    if let Some(tc) = self.cell(w, ts, tt) {
                        let Some(ti) = by_deg[m - 1].iter().position(|x| x.s == tc.s && x.t == tc.t)
                        else {
                            continue;
                        };
                        let block = koszul_tau(which, self.r, c.a, c.b);
                        debug_assert_eq!(block.rows(), dim_of(&tc));
                        d.paste(offsets[m - 1][ti], offsets[m][ci], &block);
                    }
                }
            }
            diffs.push(d);
        }
        (dims, diffs)
    }
}

/// Homology of `Tot` per total degree, each a [`GradedDim`] keyed by the
/// anchor weight. Verifies `d² = 0` along the way.
pub fn total_homology(bi: &Bicomplex) -> Result<BTreeMap<usize, GradedDim>, Error> {
    let weights: Vec<i64> = (bi.min_weight()..=bi.max_weight as i64).collect();
    let slices: Vec<Result<Vec<usize>, Error>> = weights
        .par_iter()
        .map(|&w| w)
        .map(|w| {
            let (dims, diffs) = bi.total_complex(w);
            for m in 1..diffs.len() {
                if !diffs[m - 1].mul(&diffs[m]).is_zero() {
                    return Err(Error::NonzeroComposite { degree: w });
                }
            }
            let ranks: Vec<usize> = diffs.iter().map(F2Matrix::rank).collect();
            Ok((0..dims.len())
                .map(|m| {
                    let out = if m >= 1 { ranks[m - 1] } else { 0 };
                    let inc = if m < ranks.len() { ranks[m] } else { 0 };
                    dims[m] - out - inc
                })
                .collect())
        })
        .collect();
    let mut out: BTreeMap<usize, GradedDim> = BTreeMap::new();
    for (&w, h) in weights.iter().zip(slices) {
        for (m, dim) in h?.into_iter().enumerate() {
            out.entry(m).or_default().set(w, dim);
        }
    }
    Ok(out)
}

/// Predicted `H_*(Tot)` for a bicomplex, in the layout of [`total_homology`].
///
/// `B(i)` (`i ≥ 1`): only `H_i`, equal to `𝔏_{i,w}`.
/// `D(0)`: only `H_0 = S^w`.
/// `D(i)` (`i ≥ 1`): `H_0 = p_{w+2i}Ī ⊕ F` for each `w ∈ [−2i, −i]`, and
/// `H_i = 𝔏_{i+2, w−3}`.
#[must_use]
pub fn predicted_total_homology(bi: &Bicomplex) -> BTreeMap<usize, GradedDim> {
    let (r, i) = (bi.r, bi.i);
    let ws = bi.min_weight()..=bi.max_weight as i64;
    let mut out: BTreeMap<usize, GradedDim> = BTreeMap::new();
    match bi.kind {
        BicomplexKind::B => {
            let g = ws.map(|w| (w, if i >= 1 && i <= r { lfrak_dim(r, i, w as usize) } else { 0 }));
            out.insert(i, g.collect());
        }
        BicomplexKind::D if i == 0 => {
            out.insert(0, ws.map(|w| (w, sym_dim(r, w as usize))).collect());
        }
        BicomplexKind::D => {
            let ii = i as i64;
            let h0 = ws.clone().map(|w| {
                let p = if w + 2 * ii >= 0 { crate::p_dim(r, (w + 2 * ii) as usize) } else { 0 };
                (w, p + usize::from((-2 * ii..=-ii).contains(&w)))
            });
            out.insert(0, h0.collect());
            let hi = ws.map(|w| (w, if w >= 3 && i + 2 <= r { lfrak_dim(r, i + 2, (w - 3) as usize) } else { 0 }));
            out.insert(i, hi.collect());
        }
    }
    out.retain(|_, g| !g.is_zero());
    out
}

/// A bounded chain complex of graded spaces with homological degrees
/// `lowest..lowest+terms.len()`.
#[derive(Clone, Debug, Default)]
pub struct ChainComplex {
    pub lowest: i64,
    /// `terms[k]` gives internal degree → dimension of `C_{lowest+k}`.
    pub terms: Vec<BTreeMap<i64, usize>>,
    /// `differentials[k] : C_{lowest+k+1} → C_{lowest+k}`, degree-preserving.
    pub differentials: Vec<GradedMap>,
}

impl ChainComplex {
    fn term_dim(&self, k: usize, deg: i64) -> usize {
        self.terms.get(k).and_then(|t| t.get(&deg)).copied().unwrap_or(0)
    }

    fn diff(&self, k: usize, deg: i64) -> Option<&F2Matrix> {
        self.differentials.get(k).and_then(|d| d.get(deg))
    }

    /// Checks shapes and `d∘d = 0` in every internal degree.
    pub fn validate(&self) -> Result<(), Error> {
        for (k, d) in self.differentials.iter().enumerate() {
            for (&deg, m) in &d.slices {
                if m.cols() != self.term_dim(k + 1, deg) || m.rows() != self.term_dim(k, deg) {
                    return Err(Error::Shape(format!(
                        "differential {k} in degree {deg} has shape {}x{}",
                        m.rows(),
                        m.cols()
                    )));
                }
                if let Some(next) = self.diff(k + 1, deg) {
                    if !m.mul(next).is_zero() {
                        return Err(Error::NonzeroComposite { degree: deg });
                    }
                }
            }
        }
        Ok(())
    }

    /// Homology keyed by homological degree, each graded by internal degree.
    pub fn homology(&self) -> Result<BTreeMap<i64, GradedDim>, Error> {
        self.validate()?;
        let mut out = BTreeMap::new();
        for k in 0..self.terms.len() {
            let mut g = GradedDim::new();
            for (&deg, &dim) in &self.terms[k] {
                let outgoing = if k >= 1 { self.diff(k - 1, deg).map_or(0, F2Matrix::rank) } else { 0 };
                let incoming = self.diff(k, deg).map_or(0, F2Matrix::rank);
                g.set(deg, dim - outgoing - incoming);
            }
            out.insert(self.lowest + k as i64, g);
        }
        Ok(out)
    }
}

/// Filtration check: `Qᵢ` maps `f_t Sⁿ` into `f_{t−1}` and, through
/// `x_T y² ↔ e_T ⊗ y`, induces exactly `τᵢ` on the quotients. Returns the
/// induced matrix and `τᵢ` so callers can compare them.
#[must_use]
pub fn filtration_induced_map(i: u32, r: usize, t: usize, n: usize) -> Option<(F2Matrix, F2Matrix)> {
    if t == 0 || t > n || (n - t) % 2 == 1 || t > r {
        return None;
    }
    let b = (n - t) / 2;
    let step = 1usize << i;
    let q = milnor_derivation(i, r, n);
    let src = sym_basis(r, n);
    let tgt = sym_basis(r, n + 2 * step - 1);
    let src_ext = ExtBasis::new(r, t);
    let tgt_ext = ExtBasis::new(r, t - 1);
    let sdim = sym_dim(r, b);
    let tdim = sym_dim(r, b + step);
    let mut induced = F2Matrix::zeros(tgt_ext.len() * tdim, src_ext.len() * sdim);
    for (col, e) in src.iter().enumerate() {
        if e.odd_count() != t {
            continue;
        }
        let (mask, f) = odd_split(e);
        let c = src_ext.index_of(mask) * sdim + f.index();
        for row in q.column(col).ones() {
            let img = &tgt[row];
            let odd = img.odd_count();
            if odd >= t {
                return None;
            }
            if odd == t - 1 {
                let (m2, g) = odd_split(img);
                induced.flip(tgt_ext.index_of(m2) * tdim + g.index(), c);
            }
        }
    }
    Some((induced, koszul_tau(i, r, t, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p_dim;
    use crate::polyalg::{binomial, trunc_sym_dim, ExpVec};
    use proptest::prelude::*;

    /// Independent oracle for `Qᵢ`: the composite `μ ∘ (1 ⊗ Qᵢ) ∘ Δ`, i.e.
    /// `Σ_j ∂f/∂x_j · x_j^{2^{i+1}}` with integer coefficients reduced mod 2.
    fn q_oracle(i: u32, e: &ExpVec) -> Vec<ExpVec> {
        let mut terms: BTreeMap<ExpVec, u64> = BTreeMap::new();
        for j in 0..e.rank() {
            if e.0[j] == 0 {
                continue;
            }
            let mut t = e.clone();
            t.0[j] = t.0[j] - 1 + (1 << (i + 1));
            *terms.entry(t).or_default() += u64::from(e.0[j]);
        }
        terms.into_iter().filter(|(_, c)| c % 2 == 1).map(|(t, _)| t).collect()
    }

    #[test]
    fn q_examples() {
        let q0 = milnor_derivation(0, 1, 1);
        assert!(q0.get(0, 0)); // x ↦ x²
        assert!(milnor_derivation(0, 1, 2).is_zero()); // x² ↦ 0
        let q1 = milnor_derivation(1, 2, 2);
        let col = q1.column(sym_index(&[1, 1]));
        let ones: Vec<usize> = col.ones().collect();
        let mut want = vec![sym_index(&[4, 1]), sym_index(&[1, 4])];
        want.sort_unstable();
        assert_eq!(ones, want);
    }

    #[test]
    fn q_matches_composite_definition() {
        for i in 0..3 {
            for r in 1..4 {
                for n in 0..7 {
                    let m = milnor_derivation(i, r, n);
                    let tgt = sym_basis(r, n + (1 << (i + 1)) - 1);
                    for (c, e) in sym_basis(r, n).iter().enumerate() {
                        let got: Vec<ExpVec> = m.column(c).ones().map(|k| tgt[k].clone()).collect();
                        let mut want = q_oracle(i, e);
                        want.sort_by_key(ExpVec::index);
                        assert_eq!(got, want);
                    }
                }
            }
        }
    }

    #[test]
    fn tau_examples() {
        let t = koszul_tau(0, 1, 1, 0);
        assert_eq!((t.rows(), t.cols()), (1, 1));
        assert!(t.get(0, 0));
        // (x∧y)⊗1 ↦ y⊗x² + x⊗y²
        let t = koszul_tau(1, 2, 2, 0);
        let col: Vec<usize> = t.column(0).ones().collect();
        let sd = sym_dim(2, 2);
        let x_idx = 0;
        let y_idx = 1;
        let mut want = vec![y_idx * sd + sym_index(&[2, 0]), x_idx * sd + sym_index(&[0, 2])];
        want.sort_unstable();
        assert_eq!(col, want);
    }

    #[test]
    fn tau0_rows_exact() {
        for r in 1..4 {
            for a in 1..r {
                for b in 0..5 {
                    let into = koszul_tau(0, r, a + 1, b);
                    let out = koszul_tau(0, r, a, b + 1);
                    assert!(out.mul(&into).is_zero());
                    let h = out.cols() - out.rank() - into.rank();
                    assert_eq!(h, 0, "r={r} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn k_examples() {
        for r in 1..5 {
            assert_eq!(kernel_functor_K(r, 1).dim(), 0);
            assert_eq!(kernel_functor_K(r, 3).dim(), binomial(r, 2) as usize);
            assert_eq!(kernel_functor_K(r, 0).dim(), 1);
        }
        assert_eq!(kernel_functor_K(2, 4).dim(), 3);
        for r in 1..4 {
            for n in 0..10 {
                assert_eq!(kernel_functor_K(r, n).dim(), k_dim(r, n));
                assert_eq!(k_dim(r, n + 1), sym_dim(r, n) - k_dim(r, n));
            }
        }
    }

    #[test]
    fn l_examples() {
        for r in 1..5 {
            for n in 0..=5 {
                assert_eq!(l_dim(r, n), 0);
            }
            for n in [1, 3, 5] {
                assert_eq!(ltilde_dim(r, n), 0);
            }
            assert_eq!(ltilde_dim(r, 2), r);
            assert_eq!(ltilde_dim(r, 4), sym_dim(r, 2));
        }
        for r in 1..4 {
            for n in 0..10 {
                let (l, lt) = l_functors(r, n);
                assert_eq!(l.dim(), l_dim(r, n));
                assert_eq!(lt.dim(), ltilde_dim(r, n));
            }
        }
        // L̃₄ is the Frobenius image of S².
        let (_, lt) = l_functors(2, 4);
        let f = crate::polyalg::frobenius(2, 2);
        let mut e = EchelonBasis::new(lt.inclusion.rows());
        for c in lt.inclusion.columns() {
            e.insert(c);
        }
        for c in f.columns() {
            assert!(e.contains(&c));
        }
    }

    #[test]
    fn q1_homology_examples() {
        for r in 1..4 {
            let h = q1_homology_on_K(r, 8);
            assert_eq!(h.get(0), 1);
            assert_eq!(h.get(7), 0);
        }
        assert_eq!(q1_homology_on_K(2, 4).get(4), 3);
    }

    #[test]
    fn subquotient_identity() {
        let (k, l) = kfrak_lfrak(3, 2, 3);
        assert_eq!(k.dim(), kfrak_dim(3, 2, 3));
        assert_eq!(l.dim(), lfrak_dim(3, 2, 3));
        assert_eq!(l.projection.mul(&l.inclusion), F2Matrix::identity(l.dim()));
        assert_eq!(k.projection.mul(&k.inclusion), F2Matrix::identity(k.dim()));
    }

    #[test]
    fn kfrak_examples() {
        for r in 1..5 {
            for b in 0..6 {
                assert_eq!(kfrak_dim(r, 1, b), sym_dim(r, b + 1));
                assert_eq!(lfrak_dim(r, 1, b), p_dim(r, b + 1));
                assert_eq!(kfrak_dim(r, r + 1, b), 0);
            }
        }
        assert_eq!(kfrak_dim(3, 0, 0), 1);
        assert_eq!(kfrak_dim(3, 0, 2), 0);
    }

    #[test]
    fn lfrak_presentations_agree() {
        // 𝔏_{a,b} ≅ Λ^a⊗S^b / (τ₀(Λ^{a+1}⊗S^{b−1}) + τ₁(Λ^{a+1}⊗S^{b−2})).
        for r in 1..4 {
            for a in 1..=r {
                for b in 0..7 {
                    let mut rel = EchelonBasis::new(ext_dim(r, a) * sym_dim(r, b));
                    if b >= 1 {
                        for c in koszul_tau(0, r, a + 1, b - 1).columns() {
                            rel.insert(c);
                        }
                    }
                    if b >= 2 {
                        for c in koszul_tau(1, r, a + 1, b - 2).columns() {
                            rel.insert(c);
                        }
                    }
                    assert_eq!(rel.ambient_dim() - rel.rank(), lfrak_dim(r, a, b), "r={r} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn bicomplex_shapes() {
        assert!(bicomplex(BicomplexKind::B, 3, 2, 5).cells(3).is_empty());
        let b = bicomplex(BicomplexKind::B, 2, 5, 4);
        let low = b.cells(0);
        assert_eq!(low[0], Cell { s: 0, t: 2, a: 2, b: 0 });
        let d0 = bicomplex(BicomplexKind::D, 0, 3, 4);
        for w in 0..5 {
            assert_eq!(d0.cells(w as i64), vec![Cell { s: 0, t: 0, a: 0, b: w }]);
        }
        let h = total_homology(&d0).unwrap();
        for w in 0..5 {
            assert_eq!(h[&0].get(w as i64), sym_dim(3, w));
        }
    }

    fn nonzero(h: BTreeMap<usize, GradedDim>) -> BTreeMap<usize, GradedDim> {
        h.into_iter().filter(|(_, g)| !g.is_zero()).collect()
    }

    #[test]
    fn bicomplex_homology_small() {
        for r in 1..4 {
            for i in 1..=r {
                for kind in [BicomplexKind::B, BicomplexKind::D] {
                    let bi = bicomplex(kind, i, r, 6);
                    assert_eq!(nonzero(total_homology(&bi).unwrap()), predicted_total_homology(&bi), "{kind:?}({i}) r={r}");
                }
            }
        }
    }

    #[test]
    fn j_complex_resolves_p() {
        for r in 1..4 {
            for b in 0..9 {
                let h = j_complex_homology(r, b);
                assert_eq!(h.get(0), p_dim(r, b + 1));
                assert_eq!(h.total(), h.get(0), "r={r} b={b}");
            }
        }
    }

    proptest! {
        #[test]
        fn q_square_zero_and_commute(r in 1usize..4, n in 0usize..9, i in 0u32..3, j in 0u32..3) {
            let qi = |k: u32, m: usize| milnor_derivation(k, r, m);
            let si = (1usize << (i + 1)) - 1;
            let sj = (1usize << (j + 1)) - 1;
            prop_assert!(qi(i, n + si).mul(&qi(i, n)).is_zero());
            prop_assert_eq!(qi(i, n + sj).mul(&qi(j, n)), qi(j, n + si).mul(&qi(i, n)));
        }

        #[test]
        fn q_homology_is_truncated(r in 1usize..4, k in 0usize..12, i in 0u32..3) {
            let s = (1usize << (i + 1)) - 1;
            let dout = milnor_derivation(i, r, k);
            let dim = sym_dim(r, k);
            let inc = if k >= s { milnor_derivation(i, r, k - s).rank() } else { 0 };
            let h = dim - dout.rank() - inc;
            let want = if k % 2 == 1 { 0 } else { trunc_sym_dim(r, i, k / 2) };
            prop_assert_eq!(h, want);
        }

        #[test]
        fn filtration_matches_tau(r in 1usize..4, n in 1usize..9, t in 1usize..4, i in 0u32..2) {
            if let Some((induced, tau)) = filtration_induced_map(i, r, t, n) {
                prop_assert_eq!(induced, tau);
            }
        }

        #[test]
        fn tau_squares_and_commutes(r in 1usize..5, a in 2usize..5, b in 0usize..5) {
            prop_assume!(a <= r);
            for i in 0..2u32 {
                let s = 1usize << i;
                prop_assert!(koszul_tau(i, r, a - 1, b + s).mul(&koszul_tau(i, r, a, b)).is_zero());
            }
            let lhs = koszul_tau(1, r, a - 1, b + 1).mul(&koszul_tau(0, r, a, b));
            let rhs = koszul_tau(0, r, a - 1, b + 2).mul(&koszul_tau(1, r, a, b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn tau0_rank_blockwise_matches_dense(r in 1usize..5, a in 1usize..5, b in 0usize..6) {
            prop_assume!(a <= r);
            prop_assert_eq!(tau0_rank(r, a, b), koszul_tau(0, r, a, b).rank());
        }
    }
}
