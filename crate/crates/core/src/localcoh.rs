//! Graded local cohomology `H^i_I(M)` of finitely presented graded modules
//! over `S = F₂[x₁,…,x_r]`, `I = (x₁,…,x_r)`.
//!
//! Two independent routes:
//!
//! * Čech: `H^i_I(M) = colim_k H^i(K^•(x₁^k,…,x_r^k; M))`. Each internal
//!   degree is computed separately; the colimit is reached once the
//!   transition maps `H^i(k) → H^i(k+1)` are isomorphisms for several
//!   consecutive `k`.
//! * Local duality: a free resolution `F_• → M`, then
//!   `dim H^i_I(M)_d = dim Ext^{r−i}_S(M, S)_{−d−rw}`.
//!
//! Modules use the topological grading: each `x_j` has degree `w`
//! (usually 2).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::exactla::{
    abelian_homology, f2_decompose, EchelonBasis, F2Matrix, F2Vec, FinAbGroup, GradedDim,
    GradedMap, IntMatrix, QuotientSpace,
};
use crate::milnor::{koszul_tau, ChainComplex};
use crate::polyalg::{ext_basis, ext_dim, sym_basis, sym_dim, sym_index, ExpVec, ExtBasis, ExtMask};
use crate::Error;

/// A homogeneous element of a free module: `Σ mono · e_gen`.
pub type FreeElement = Vec<(usize, ExpVec)>;

/// A graded free `S`-module `⊕ S(−deg_g)` with `deg x_j = w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeModule {
    pub r: usize,
    pub w: i64,
    pub gen_degrees: Vec<i64>,
}

impl FreeModule {
    fn sdeg(&self, g: usize, e: i64) -> Option<usize> {
        let t = e - self.gen_degrees[g];
        (t >= 0 && t % self.w == 0).then(|| (t / self.w) as usize)
    }

    /// `(generator, offset, symmetric degree)` blocks of the degree-`e` part.
    fn layout(&self, e: i64) -> (Vec<(usize, usize, usize)>, usize) {
        let mut off = 0;
        let mut blocks = Vec::new();
        for g in 0..self.gen_degrees.len() {
            if let Some(s) = self.sdeg(g, e) {
                blocks.push((g, off, s));
                off += sym_dim(self.r, s);
            }
        }
        (blocks, off)
    }

    #[must_use]
    pub fn dim(&self, e: i64) -> usize {
        self.layout(e).1
    }

    fn offset(&self, e: i64, g: usize) -> usize {
        let mut off = 0;
        for h in 0..g {
            if let Some(s) = self.sdeg(h, e) {
                off += sym_dim(self.r, s);
            }
        }
        off
    }

    fn basis(&self, e: i64) -> Vec<(usize, ExpVec)> {
        let mut out = Vec::new();
        for (g, _, s) in self.layout(e).0 {
            out.extend(sym_basis(self.r, s).into_iter().map(|m| (g, m)));
        }
        out
    }

    /// Coordinates of `mono · x` where `x` is homogeneous of degree `e`.
    fn vector(&self, e: i64, x: &FreeElement) -> F2Vec {
        let mut v = F2Vec::zeros(self.dim(e));
        let mut offs: HashMap<usize, usize> = HashMap::new();
        for (g, m) in x {
            let off = *offs.entry(*g).or_insert_with(|| self.offset(e, *g));
            debug_assert_eq!(self.sdeg(*g, e), Some(m.degree()));
            v.flip(off + sym_index(&m.0));
        }
        v
    }

    fn element(&self, e: i64, v: &F2Vec) -> FreeElement {
        let basis = self.basis(e);
        v.ones().map(|i| basis[i].clone()).collect()
    }
}

fn times(x: &FreeElement, m: &ExpVec) -> FreeElement {
    x.iter().map(|(g, n)| (*g, n.times(m))).collect()
}

/// A relation: a homogeneous element of the free module on the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub degree: i64,
    pub terms: FreeElement,
}

/// `M = coker(⊕ S(−deg ρ) → ⊕ S(−deg g))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulePresentation {
    pub label: String,
    pub free: FreeModule,
    pub relations: Vec<Relation>,
    /// The degree-0 part is `ℤ` rather than `F₂` (integral `HZ` variant).
    pub integral_in_degree_zero: bool,
}

/// The modules used throughout, all with `deg x_j = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModuleSpec {
    /// `S` itself, generator in degree 0.
    Free { r: usize },
    /// `𝔏_{i,*}`: generators `e_J` (`|J| = i`) in degree 0, so `𝔏_{i,b}` sits
    /// in degree `2b`.
    Lfrak { r: usize, i: usize },
    /// `𝔎_{i,*}`, placed like `Lfrak`.
    Kfrak { r: usize, i: usize },
    /// Reduced `K_* = ⊕_{a≥1} 𝔎_{a,*}` with `𝔎_{a,b}` in degree `a+2b+1`.
    Kmodule { r: usize },
    /// `HZ*(BV₊)`: `S·1 ⊕ ⊕_{a≥2} 𝔎_{a,*}`, integral in degree 0.
    HZplus { r: usize },
    /// `tors_v ku*(BV₊) = ⊕_{a≥2} 𝔏_{a,*}` with `𝔏_{a,b}` in degree `a+2b+4`.
    TorsKu { r: usize },
    /// `Q/v` for `Q = cotors_v ku*(BV₊)`: `S` modulo `x_i x_j (x_i + x_j)`,
    /// integral in degree 0. Its augmentation ideal is `𝔏_{1,*}` with
    /// `𝔏_{1,b}` in degree `2b+2`.
    QmodV { r: usize },
}

impl ModuleSpec {
    #[must_use]
    pub fn rank(&self) -> usize {
        match *self {
            ModuleSpec::Free { r }
            | ModuleSpec::Lfrak { r, .. }
            | ModuleSpec::Kfrak { r, .. }
            | ModuleSpec::Kmodule { r }
            | ModuleSpec::HZplus { r }
            | ModuleSpec::TorsKu { r }
            | ModuleSpec::QmodV { r } => r,
        }
    }
}

const W: i64 = 2;

/// Appends `Λ^a ⊗ S(−deg)` modulo `τ₀` (and `τ₁` when `lfrak`) to the
/// presentation being built.
fn push_koszul_quotient(
    r: usize,
    a: usize,
    deg: i64,
    lfrak: bool,
    gens: &mut Vec<i64>,
    rels: &mut Vec<Relation>,
) {
    let base = gens.len();
    let src = ExtBasis::new(r, a);
    gens.extend(std::iter::repeat_n(deg, src.len()));
    if a >= r {
        return;
    }
    let upper = ext_basis(r, a + 1);
    let taus: &[u32] = if lfrak { &[0, 1] } else { &[0] };
    for &i in taus {
        let step = 1u32 << i;
        for mask in &upper {
            let terms = mask
                .elements()
                .map(|j| (base + src.index_of(mask.without(j)), ExpVec::power(r, j, step)))
                .collect();
            rels.push(Relation { degree: deg + W * i64::from(step), terms });
        }
    }
}

/// Builds the presentation of a module spec.
#[must_use]
pub fn present_module(spec: ModuleSpec) -> ModulePresentation {
    let r = spec.rank();
    let mut gens = Vec::new();
    let mut rels = Vec::new();
    let mut integral = false;
    let label = match spec {
        ModuleSpec::Free { .. } => {
            gens.push(0);
            format!("S(r={r})")
        }
        ModuleSpec::Lfrak { i, .. } => {
            push_koszul_quotient(r, i, 0, true, &mut gens, &mut rels);
            format!("Lfrak(r={r},i={i})")
        }
        ModuleSpec::Kfrak { i, .. } => {
            push_koszul_quotient(r, i, 0, false, &mut gens, &mut rels);
            format!("Kfrak(r={r},i={i})")
        }
        ModuleSpec::Kmodule { .. } => {
            for a in 1..=r {
                push_koszul_quotient(r, a, a as i64 + 1, false, &mut gens, &mut rels);
            }
            format!("Kmodule(r={r})")
        }
        ModuleSpec::HZplus { .. } => {
            gens.push(0);
            for a in 2..=r {
                push_koszul_quotient(r, a, a as i64 + 1, false, &mut gens, &mut rels);
            }
            integral = true;
            format!("HZplus(r={r})")
        }
        ModuleSpec::TorsKu { .. } => {
            for a in 2..=r {
                push_koszul_quotient(r, a, a as i64 + 4, true, &mut gens, &mut rels);
            }
            format!("TorsKu(r={r})")
        }
        ModuleSpec::QmodV { .. } => {
            gens.push(0);
            for i in 0..r {
                for j in i + 1..r {
                    let mut a = vec![0; r];
                    let mut b = vec![0; r];
                    (a[i], a[j], b[i], b[j]) = (2, 1, 1, 2);
                    rels.push(Relation {
                        degree: 3 * W,
                        terms: vec![(0, ExpVec(a)), (0, ExpVec(b))],
                    });
                }
            }
            integral = true;
            format!("QmodV(r={r})")
        }
    };
    ModulePresentation {
        label,
        free: FreeModule { r, w: W, gen_degrees: gens },
        relations: rels,
        integral_in_degree_zero: integral,
    }
}

/// One degree of a module: the quotient of the free part by relations.
#[derive(Debug)]
struct Slice {
    quotient: QuotientSpace,
}

/// Lazily computed degree slices of a presented module, shared across
/// threads.
#[derive(Debug)]
pub struct ModuleSlices {
    pub pres: ModulePresentation,
    cache: RwLock<HashMap<i64, Arc<Slice>>>,
}

impl ModuleSlices {
    #[must_use]
    pub fn new(pres: ModulePresentation) -> Self {
        Self { pres, cache: RwLock::new(HashMap::new()) }
    }

    fn slice(&self, e: i64) -> Arc<Slice> {
        if let Some(s) = self.cache.read().expect("cache lock").get(&e) {
            return Arc::clone(s);
        }
        let free = &self.pres.free;
        let mut eb = EchelonBasis::new(free.dim(e));
        for rel in &self.pres.relations {
            let t = e - rel.degree;
            if t < 0 || t % free.w != 0 {
                continue;
            }
            for m in sym_basis(free.r, (t / free.w) as usize) {
                eb.insert(free.vector(e, &times(&rel.terms, &m)));
            }
        }
        let s = Arc::new(Slice { quotient: QuotientSpace::new(eb) });
        self.cache.write().expect("cache lock").insert(e, Arc::clone(&s));
        s
    }

    /// `dim M_e`.
    #[must_use]
    pub fn dim(&self, e: i64) -> usize {
        self.slice(e).quotient.dim()
    }

    /// Multiplication by a monomial, `M_e → M_{e + w·deg m}`, in quotient
    /// coordinates.
    #[must_use]
    pub fn mult(&self, e: i64, mono: &ExpVec) -> F2Matrix {
        let free = &self.pres.free;
        let e2 = e + free.w * mono.degree() as i64;
        let src = self.slice(e);
        let tgt = self.slice(e2);
        let basis = free.basis(e);
        let cols: Vec<F2Vec> = (0..src.quotient.dim())
            .map(|k| {
                let (g, m) = &basis[src.quotient.representative(k)];
                let v = free.vector(e2, &vec![(*g, m.times(mono))]);
                tgt.quotient.project(&v)
            })
            .collect();
        F2Matrix::from_columns(tgt.quotient.dim(), &cols)
    }

    /// `dim M_e` for `e` in `lo..=hi`.
    #[must_use]
    pub fn hilbert(&self, lo: i64, hi: i64) -> GradedDim {
        (lo..=hi).map(|e| (e, self.dim(e))).collect()
    }
}

/// Local cohomology per cohomological degree, each graded by internal
/// degree, on the window `lo..=hi`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalCohomologyTable {
    pub label: String,
    pub r: usize,
    pub lo: i64,
    pub hi: i64,
    pub dims: BTreeMap<usize, GradedDim>,
    /// Integral groups where the module is integral (degree 0 only).
    pub integral: BTreeMap<(usize, i64), FinAbGroup>,
    /// Smallest Koszul power `k` at which each `(i, d)` stabilized.
    pub stabilized_at: BTreeMap<(usize, i64), usize>,
    /// For the resolution route: whether the resolution closed up inside
    /// its degree window.
    pub complete: bool,
}

impl LocalCohomologyTable {
    #[must_use]
    pub fn get(&self, i: usize) -> GradedDim {
        self.dims.get(&i).cloned().unwrap_or_default()
    }
}

/// The Koszul complex on `x₁^k,…,x_r^k` in internal degree `d`, with the
/// transition maps to `k+1`.
struct KoszulSlice<'a> {
    m: &'a ModuleSlices,
    d: i64,
}

impl KoszulSlice<'_> {
    fn degree(&self, p: usize, k: usize) -> i64 {
        self.d + k as i64 * self.m.pres.free.w * p as i64
    }

    fn term_dims(&self, p: usize, k: usize) -> (Vec<ExtMask>, usize) {
        let masks = ext_basis(self.m.pres.free.r, p);
        let dim = self.m.dim(self.degree(p, k));
        (masks, dim)
    }

    /// `d^p(k) : C^p(k) → C^{p+1}(k)`.
    fn differential(&self, p: usize, k: usize) -> F2Matrix {
        let r = self.m.pres.free.r;
        let (src, sd) = self.term_dims(p, k);
        let (tgt, td) = self.term_dims(p + 1, k);
        let tgt_idx = ExtBasis::new(r, p + 1);
        let mut out = F2Matrix::zeros(tgt.len() * td, src.len() * sd);
        let e = self.degree(p, k);
        let mults: Vec<F2Matrix> =
            (0..r).map(|j| self.m.mult(e, &ExpVec::power(r, j, k as u32))).collect();
        for (si, mask) in src.iter().enumerate() {
            for j in 0..r {
                if mask.contains(j) {
                    continue;
                }
                let ti = tgt_idx.index_of(mask.with(j));
                out.paste(ti * td, si * sd, &mults[j]);
            }
        }
        out
    }

    /// `C^p(k) → C^p(k+1)`: multiplication by `x_T` on the `T` summand.
    fn transition(&self, p: usize, k: usize) -> F2Matrix {
        let r = self.m.pres.free.r;
        let (masks, sd) = self.term_dims(p, k);
        let (_, td) = self.term_dims(p, k + 1);
        let mut out = F2Matrix::zeros(masks.len() * td, masks.len() * sd);
        let e = self.degree(p, k);
        for (i, mask) in masks.iter().enumerate() {
            let mut mono = ExpVec::zero(r);
            for j in mask.elements() {
                mono.0[j] = 1;
            }
            out.paste(i * td, i * sd, &self.m.mult(e, &mono));
        }
        out
    }

    /// Cycles and boundaries of `C^p(k)`.
    fn cycles_boundaries(&self, p: usize, k: usize) -> (F2Matrix, F2Matrix) {
        let r = self.m.pres.free.r;
        let cycles = if p < r {
            f2_decompose(&self.differential(p, k)).kernel
        } else {
            let (masks, dim) = self.term_dims(p, k);
            F2Matrix::identity(masks.len() * dim)
        };
        let boundaries = if p > 0 {
            f2_decompose(&self.differential(p - 1, k)).image
        } else {
            F2Matrix::zeros(cycles.rows(), 0)
        };
        (cycles, boundaries)
    }
}

/// `(dim H^p(k), dim im(H^p(k) → H^p(k+1)))` given cycles/boundaries at `k`
/// and boundaries at `k+1`.
fn transition_rank(ks: &KoszulSlice<'_>, p: usize, k: usize, z: &F2Matrix, b_next: &F2Matrix) -> usize {
    let moved = ks.transition(p, k).mul(z);
    let mut span = EchelonBasis::new(moved.rows());
    for c in b_next.columns() {
        span.insert(c);
    }
    let base = span.rank();
    for c in moved.columns() {
        span.insert(c);
    }
    span.rank() - base
}

/// Stabilization policy: the transition `H^p(k) → H^p(k+1)` must be an
/// isomorphism for `1 + MARGIN` consecutive `k`.
const MARGIN: usize = 2;
const MAX_EXTRA_K: usize = 40;

fn cech_degree(m: &ModulePresentationSlices, p: usize, d: i64) -> Result<(usize, usize), Error> {
    let ks = KoszulSlice { m: m.0, d };
    let free = &m.0.pres.free;
    let gmax = free.gen_degrees.iter().copied().max().unwrap_or(0);
    let denom = free.w * p.max(1) as i64;
    let k0 = (1 + (gmax - d).max(0).div_euclid(denom) + 1) as usize;
    let mut current = ks.cycles_boundaries(p, k0);
    let mut run = 0;
    for k in k0..=k0 + MAX_EXTRA_K {
        let next = ks.cycles_boundaries(p, k + 1);
        let h = current.0.cols() - current.1.cols();
        let h_next = next.0.cols() - next.1.cols();
        let v = transition_rank(&ks, p, k, &current.0, &next.1);
        if h == v && v == h_next {
            run += 1;
            if run > MARGIN {
                return Ok((h, k - MARGIN));
            }
        } else {
            run = 0;
        }
        current = next;
    }
    Err(Error::Stabilization { degree: d, cohom_degree: p, max_k: k0 + MAX_EXTRA_K })
}

struct ModulePresentationSlices<'a>(&'a ModuleSlices);

/// Čech local cohomology on the degree window `lo..=hi`.
pub fn cech_local_cohomology(
    pres: &ModulePresentation,
    lo: i64,
    hi: i64,
) -> Result<LocalCohomologyTable, Error> {
    let slices = ModuleSlices::new(pres.clone());
    let r = pres.free.r;
    let jobs: Vec<(usize, i64)> = (0..=r).flat_map(|p| (lo..=hi).map(move |d| (p, d))).collect();
    let results: Vec<Result<(usize, i64, usize, usize), Error>> = jobs
        .par_iter()
        .map(|&(p, d)| {
            let (dim, k) = cech_degree(&ModulePresentationSlices(&slices), p, d)?;
            Ok((p, d, dim, k))
        })
        .collect();
    let mut dims: BTreeMap<usize, GradedDim> = (0..=r).map(|p| (p, GradedDim::new())).collect();
    let mut stabilized_at = BTreeMap::new();
    for res in results {
        let (p, d, dim, k) = res?;
        dims.get_mut(&p).expect("preallocated").set(d, dim);
        stabilized_at.insert((p, d), k);
    }
    let mut integral = BTreeMap::new();
    if pres.integral_in_degree_zero && (lo..=hi).contains(&0) {
        integral = integral_degree_zero(&slices, &dims)?;
    }
    Ok(LocalCohomologyTable {
        label: pres.label.clone(),
        r,
        lo,
        hi,
        dims,
        integral,
        stabilized_at,
        complete: true,
    })
}

/// Degree-0 groups when `M_0 = ℤ`: `C⁰ = ℤ` and every other Čech term is an
/// F₂-space. `H⁰` is computed over `ℤ`; `H¹` uses the same complex with the
/// integral source, which has the same image as its mod-2 reduction.
fn integral_degree_zero(
    slices: &ModuleSlices,
    dims: &BTreeMap<usize, GradedDim>,
) -> Result<BTreeMap<(usize, i64), FinAbGroup>, Error> {
    let r = slices.pres.free.r;
    let ks = KoszulSlice { m: slices, d: 0 };
    let k = 1;
    let lift = |m: &F2Matrix| {
        let rows: Vec<Vec<i64>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| i64::from(m.get(i, j))).collect())
            .collect();
        if m.rows() == 0 {
            IntMatrix::zeros(0, m.cols())
        } else {
            IntMatrix::from_rows(&rows)
        }
    };
    let d0 = ks.differential(0, k);
    let two = |n: usize| vec![BigInt::from(2); n];
    let mut out = BTreeMap::new();
    let h0 = abelian_homology(None, Some(&lift(&d0)), &[BigInt::from(0)], &two(d0.rows()))?;
    out.insert((0, 0), h0);
    for p in 1..=r {
        out.insert((p, 0), FinAbGroup::elementary(dims[&p].get(0)));
    }
    Ok(out)
}

/// Index of `H⁰_I(M)_0` in `M_0 = ℤ` for an integral module: the order of
/// the image of `ℤ` in the Čech term `C¹`.
pub fn h0_index_in_degree_zero(pres: &ModulePresentation) -> Result<FinAbGroup, Error> {
    let slices = ModuleSlices::new(pres.clone());
    let ks = KoszulSlice { m: &slices, d: 0 };
    let d0 = ks.differential(0, 1);
    let rows: Vec<Vec<i64>> =
        (0..d0.rows()).map(|i| vec![i64::from(d0.get(i, 0))]).collect();
    let lifted = IntMatrix::from_rows(&rows);
    // Kernel of ℤ → ⊕F₂: integers n with n·d0 ∈ 2ℤ^m.
    let stacked = lifted.hstack(&IntMatrix::from_columns(
        rows.len(),
        &(0..rows.len())
            .map(|i| {
                let mut c = vec![BigInt::from(0); rows.len()];
                c[i] = BigInt::from(2);
                c
            })
            .collect::<Vec<_>>(),
    ));
    let kernel = crate::exactla::integer_kernel(&stacked);
    let mut gens = IntMatrix::zeros(1, kernel.cols());
    for j in 0..kernel.cols() {
        gens.set(0, j, kernel.get(0, j).clone());
    }
    crate::exactla::lattice_quotient(&IntMatrix::identity(1), &gens)
}

/// A complex of graded free modules `F_0 ← F_1 ← …`; `maps[q][k]` is the image
/// of generator `k` of `F_{q+1}` in `F_q`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    pub modules: Vec<FreeModule>,
    pub maps: Vec<Vec<FreeElement>>,
}

impl FreeComplex {
    /// Matrix of `F_{q+1} → F_q` in degree `e`.
    fn matrix(&self, q: usize, e: i64) -> F2Matrix {
        let src = &self.modules[q + 1];
        let tgt = &self.modules[q];
        let cols: Vec<F2Vec> = src
            .basis(e)
            .iter()
            .map(|(g, m)| tgt.vector(e, &times(&self.maps[q][*g], m)))
            .collect();
        F2Matrix::from_columns(tgt.dim(e), &cols)
    }

    /// `Hom_S(F_q, S)` in degree `e` as a free-module slice: the dual
    /// generator of `S(−a)` sits in degree `−a`.
    fn dual(&self, q: usize) -> FreeModule {
        let m = &self.modules[q];
        FreeModule { r: m.r, w: m.w, gen_degrees: m.gen_degrees.iter().map(|a| -a).collect() }
    }

    /// `Hom(F_q, S) → Hom(F_{q+1}, S)` in degree `e`.
    fn dual_matrix(&self, q: usize, e: i64) -> F2Matrix {
        let src = self.dual(q);
        let tgt = self.dual(q + 1);
        let r = src.r;
        let src_basis = src.basis(e);
        let mut out = F2Matrix::zeros(tgt.dim(e), src_basis.len());
        for (k, image) in self.maps[q].iter().enumerate() {
            // (φ∘d)(g_k) = Σ_j p_kj φ(g'_j)
            let Some(s) = tgt.sdeg(k, e) else { continue };
            let off = tgt.offset(e, k);
            for (col, (j, m)) in src_basis.iter().enumerate() {
                for (g, p) in image {
                    if g == j {
                        let prod = p.times(m);
                        debug_assert_eq!(prod.degree(), s);
                        let _ = r;
                        out.flip(off + sym_index(&prod.0), col);
                    }
                }
            }
        }
        out
    }

    /// `dim Ext^q(M, S)_e` from the dualized complex.
    fn ext_dim(&self, q: usize, e: i64) -> usize {
        let n = self.modules.len();
        if q >= n {
            return 0;
        }
        let dim = self.dual(q).dim(e);
        let out = if q + 1 < n { self.dual_matrix(q, e).rank() } else { 0 };
        let inc = if q >= 1 { self.dual_matrix(q - 1, e).rank() } else { 0 };
        dim - out - inc
    }
}

/// A free resolution of `M`, computed degreewise up to degree `top`.
///
/// `complete` is set when no new generators appear in the last `2w`
/// degrees of the window at any stage; a resolution obtained this way is
/// exact in all degrees.
pub fn free_resolution(pres: &ModulePresentation, top: i64) -> (FreeComplex, bool) {
    let r = pres.free.r;
    let w = pres.free.w;
    let f0 = pres.free.clone();
    let f1 = FreeModule { r, w, gen_degrees: pres.relations.iter().map(|x| x.degree).collect() };
    let mut cx = FreeComplex {
        modules: vec![f0, f1],
        maps: vec![pres.relations.iter().map(|x| x.terms.clone()).collect()],
    };
    let mut complete = true;
    let bottom = pres.free.gen_degrees.iter().copied().min().unwrap_or(0);
    let mut q = 1;
    while q <= r + 1 && !cx.modules[q].gen_degrees.is_empty() {
        let src_lo = cx.modules[q].gen_degrees.iter().copied().min().unwrap_or(bottom);
        let mut gens: Vec<i64> = Vec::new();
        let mut images: Vec<FreeElement> = Vec::new();
        for e in src_lo.min(bottom)..=top {
            let d = cx.matrix(q - 1, e);
            let kernel = f2_decompose(&d).kernel;
            if kernel.cols() == 0 {
                continue;
            }
            let fq = &cx.modules[q];
            let mut span = EchelonBasis::new(fq.dim(e));
            for (deg, img) in gens.iter().zip(&images) {
                let t = e - deg;
                if t < 0 || t % w != 0 {
                    continue;
                }
                for m in sym_basis(r, (t / w) as usize) {
                    span.insert(fq.vector(e, &times(img, &m)));
                }
            }
            for c in kernel.columns() {
                if span.insert(c.clone()) {
                    gens.push(e);
                    images.push(fq.element(e, &c));
                    if e > top - 2 * w {
                        complete = false;
                    }
                }
            }
        }
        cx.modules.push(FreeModule { r, w, gen_degrees: gens });
        cx.maps.push(images);
        q += 1;
    }
    if cx.modules.last().is_some_and(|m| !m.gen_degrees.is_empty()) {
        complete = false;
    }
    (cx, complete)
}

/// Local cohomology via local duality:
/// `dim H^i_I(M)_d = dim Ext^{r−i}(M, S)_{−d−rw}`.
pub fn duality_local_cohomology(
    pres: &ModulePresentation,
    lo: i64,
    hi: i64,
) -> LocalCohomologyTable {
    let r = pres.free.r;
    let w = pres.free.w;
    let gmax = pres
        .free
        .gen_degrees
        .iter()
        .chain(pres.relations.iter().map(|x| &x.degree))
        .copied()
        .max()
        .unwrap_or(0);
    let (cx, complete) = free_resolution(pres, gmax + w * (2 * r as i64 + 3));
    let mut dims = BTreeMap::new();
    for i in 0..=r {
        let g: GradedDim = (lo..=hi).map(|d| (d, cx.ext_dim(r - i, -d - r as i64 * w))).collect();
        dims.insert(i, g);
    }
    LocalCohomologyTable {
        label: pres.label.clone(),
        r,
        lo,
        hi,
        dims,
        integral: BTreeMap::new(),
        stabilized_at: BTreeMap::new(),
        complete,
    }
}

/// The integral local cohomology of `HZ*(BV₊)`.
pub fn integral_cech_local_cohomology(r: usize, lo: i64, hi: i64) -> Result<LocalCohomologyTable, Error> {
    cech_local_cohomology(&present_module(ModuleSpec::HZplus { r }), lo, hi)
}

/// `σ_{≥a}Kz₀`: the free complex `Λ^r⊗S → … → Λ^a⊗S` with `Λ^j` generated
/// in degree `j` and `deg x = 1`, as a [`FreeComplex`] with `F_q = Λ^{a+q}⊗S`.
#[must_use]
pub fn truncated_koszul(r: usize, a: usize) -> FreeComplex {
    let mut modules = Vec::new();
    let mut maps = Vec::new();
    for j in a..=r {
        let n = ext_dim(r, j);
        modules.push(FreeModule { r, w: 1, gen_degrees: vec![j as i64; n] });
        if j > a {
            let tgt = ExtBasis::new(r, j - 1);
            let images = ext_basis(r, j)
                .into_iter()
                .map(|mask| {
                    mask.elements()
                        .map(|i| (tgt.index_of(mask.without(i)), ExpVec::power(r, i, 1)))
                        .collect()
                })
                .collect();
            maps.push(images);
        }
    }
    FreeComplex { modules, maps }
}

fn complement_permutation(r: usize, j: usize) -> Vec<usize> {
    let target = ExtBasis::new(r, r - j);
    ext_basis(r, j).into_iter().map(|m| target.index_of(m.complement(r))).collect()
}

/// `Hom_S(σ_{≥a}Kz₀, Λ^r ⊗ S)` as a chain complex with homological degree
/// `r − j` on `Hom(Λ^j⊗S, Λ^r⊗S)`, internal degrees `0..=max_degree`.
///
/// The dual generator `e_J^* ⊗ e_top` has degree `r − |J|`, and is relabelled
/// as `e_{J^c}` so the terms read `Λ^{r−j} ⊗ S`.
#[must_use]
pub fn dual_truncated_koszul(r: usize, a: usize, max_degree: i64) -> ChainComplex {
    let cx = truncated_koszul(r, a);
    let levels = r - a + 1;
    // Hom term q (from F_q = Λ^{a+q}⊗S) has homological degree h = r − a − q.
    let mut terms = vec![BTreeMap::new(); levels];
    let mut differentials = vec![GradedMap::new(0); levels.saturating_sub(1)];
    for q in 0..levels {
        let j = a + q;
        let h = r - j;
        let perm = complement_permutation(r, j);
        let dual = FreeModule { r, w: 1, gen_degrees: vec![0; ext_dim(r, j)] };
        for n in 0..=max_degree {
            // Twisting by Λ^r: Hom(Λ^j⊗S, Λ^r⊗S)_n = ⊕ S^{n − (r − j)}.
            let s = n - (r - j) as i64;
            let dim = if s >= 0 { dual.dim(s) } else { 0 };
            terms[h].insert(n, dim);
        }
        if q >= 1 {
            // δ: Hom(F_{q−1}) → Hom(F_q) raises j by one, lowers h by one:
            // it is the chain differential from h+1 to h.
            let prev_perm = complement_permutation(r, j - 1);
            for n in 0..=max_degree {
                let s = n - (r - j + 1) as i64;
                if s < 0 {
                    continue;
                }
                let raw = cx.dual_matrix_untwisted(q - 1, s);
                differentials[h].insert(n, relabel(&raw, r, s, &prev_perm, &perm));
            }
        }
    }
    ChainComplex { lowest: 0, terms, differentials }
}

impl FreeComplex {
    /// `Hom(F_q, S) → Hom(F_{q+1}, S)` on the dual generators placed in
    /// degree 0, from symmetric degree `s` to `s + 1` (for `deg x = 1`
    /// complexes with one-step differentials).
    fn dual_matrix_untwisted(&self, q: usize, s: i64) -> F2Matrix {
        let flat = |m: &FreeModule| FreeModule { r: m.r, w: 1, gen_degrees: vec![0; m.gen_degrees.len()] };
        let src = flat(&self.modules[q]);
        let tgt = flat(&self.modules[q + 1]);
        let src_basis = src.basis(s);
        let mut out = F2Matrix::zeros(tgt.dim(s + 1), src_basis.len());
        for (k, image) in self.maps[q].iter().enumerate() {
            let off = tgt.offset(s + 1, k);
            for (col, (j, m)) in src_basis.iter().enumerate() {
                for (g, p) in image {
                    if g == j {
                        out.flip(off + sym_index(&p.times(m).0), col);
                    }
                }
            }
        }
        out
    }
}

/// Reindexes rows and columns of a `Λ ⊗ S` block matrix through the
/// complement bijection on exterior indices.
fn relabel(m: &F2Matrix, r: usize, s: i64, col_perm: &[usize], row_perm: &[usize]) -> F2Matrix {
    let sc = sym_dim(r, s as usize);
    let sr = sym_dim(r, s as usize + 1);
    let mut out = F2Matrix::zeros(m.rows(), m.cols());
    for c in 0..m.cols() {
        let nc = col_perm[c / sc] * sc + c % sc;
        for rr in m.column(c).ones() {
            let nr = row_perm[rr / sr] * sr + rr % sr;
            out.set(nr, nc, true);
        }
    }
    out
}

/// `σ_{≤t}Kz₀`: `Λ^t⊗S → … → Λ^0⊗S` with `τ₀`, internal degree `j + b` on
/// `Λ^j ⊗ S^b`, homological degree `j`.
#[must_use]
pub fn truncated_koszul_below(r: usize, t: usize, max_degree: i64) -> ChainComplex {
    let mut terms = vec![BTreeMap::new(); t + 1];
    let mut differentials = vec![GradedMap::new(0); t];
    for (j, term) in terms.iter_mut().enumerate() {
        for n in 0..=max_degree {
            let b = n - j as i64;
            term.insert(n, if b >= 0 { ext_dim(r, j) * sym_dim(r, b as usize) } else { 0 });
            if j >= 1 && b >= 0 {
                differentials[j - 1].insert(n, koszul_tau(0, r, j, b as usize));
            }
        }
    }
    ChainComplex { lowest: 0, terms, differentials }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::{kfrak_dim, lfrak_dim};
    use crate::p_dim;

    fn dims_of(spec: ModuleSpec, lo: i64, hi: i64) -> GradedDim {
        ModuleSlices::new(present_module(spec)).hilbert(lo, hi)
    }

    #[test]
    fn presentations_match_functors() {
        for r in 1..4 {
            for i in 1..=r {
                let g = dims_of(ModuleSpec::Lfrak { r, i }, 0, 16);
                let k = dims_of(ModuleSpec::Kfrak { r, i }, 0, 16);
                for b in 0..=8 {
                    assert_eq!(g.get(2 * b as i64), lfrak_dim(r, i, b), "r={r} i={i} b={b}");
                    assert_eq!(k.get(2 * b as i64), kfrak_dim(r, i, b));
                }
            }
            let km = dims_of(ModuleSpec::Kmodule { r }, 0, 18);
            for n in 1..=18 {
                assert_eq!(km.get(n), crate::milnor::k_dim(r, n as usize), "r={r} n={n}");
            }
            let t = dims_of(ModuleSpec::TorsKu { r }, 0, 20);
            for n in 0..=20 {
                assert_eq!(t.get(n), crate::milnor::l_dim(r, n as usize), "r={r} n={n}");
            }
        }
        let k1 = dims_of(ModuleSpec::Kmodule { r: 1 }, 0, 6);
        assert_eq!((0..=6).map(|n| k1.get(n)).collect::<Vec<_>>(), vec![0, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn free_module_is_gorenstein() {
        for r in 1..4 {
            let t = cech_local_cohomology(&present_module(ModuleSpec::Free { r }), -12, 4).unwrap();
            for i in 0..r {
                assert!(t.get(i).is_zero());
            }
            for d in -12..=4 {
                let want = if d <= -2 * r as i64 && d % 2 == 0 {
                    sym_dim(r, ((-d - 2 * r as i64) / 2) as usize)
                } else {
                    0
                };
                assert_eq!(t.get(r).get(d), want, "r={r} d={d}");
            }
        }
    }

    #[test]
    fn cech_equals_duality_small() {
        for (r, i) in [(2, 1), (2, 2), (3, 2)] {
            let pres = present_module(ModuleSpec::Lfrak { r, i });
            let a = cech_local_cohomology(&pres, -10, 6).unwrap();
            let b = duality_local_cohomology(&pres, -10, 6);
            assert!(b.complete);
            assert_eq!(a.dims, b.dims, "r={r} i={i}");
        }
    }

    #[test]
    fn lfrak_one_has_only_h1() {
        let r = 2;
        let t = cech_local_cohomology(&present_module(ModuleSpec::Lfrak { r, i: 1 }), -12, 6).unwrap();
        assert!(t.get(0).is_zero() && t.get(2).is_zero());
        let h1 = t.get(1);
        // r copies of F plus the dual of 𝔏₁.
        let dual: usize = (0..=4).map(|b| p_dim(r, b + 1)).sum();
        assert!(h1.total() >= r + dual);
    }

    #[test]
    fn truncated_koszul_duality() {
        for r in 1..4 {
            for a in 0..=r {
                let dual = dual_truncated_koszul(r, a, 8);
                let direct = truncated_koszul_below(r, r - a, 8);
                assert_eq!(dual.terms, direct.terms, "r={r} a={a}");
                for (x, y) in dual.differentials.iter().zip(&direct.differentials) {
                    assert_eq!(x.slices, y.slices);
                }
                assert_eq!(dual.homology().unwrap(), direct.homology().unwrap());
            }
        }
    }

    #[test]
    fn integral_hz_degree_zero() {
        let t = integral_cech_local_cohomology(2, -2, 2).unwrap();
        assert_eq!(t.integral[&(0, 0)], FinAbGroup::free(1));
        assert_eq!(h0_index_in_degree_zero(&present_module(ModuleSpec::HZplus { r: 2 })).unwrap(), FinAbGroup::cyclic(2));
    }
}
