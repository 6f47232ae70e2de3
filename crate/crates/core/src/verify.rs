//! Verification suites, one per group of results.
//!
//! Each suite compares a computed table with an independent prediction and
//! returns a [`SuiteReport`] listing every comparison made. The suites back
//! both the `verify` subcommand and the acceptance test.

use serde::Serialize;

use crate::exactla::{FinAbGroup, GradedDim};
use crate::groupring::{completion_inclusion_check, f2_aug_power_dim, filtration_reports, rn_group, AugmentationFiltration};
use crate::kumod::{hz_cohom_table, ku_cohom_table, ku_hom_table, qfrak_tables};
use crate::localcoh::{
    cech_local_cohomology, dual_truncated_koszul, duality_local_cohomology, h0_index_in_degree_zero,
    integral_cech_local_cohomology, present_module, truncated_koszul_below, ModuleSpec,
};
use crate::milnor::{
    bicomplex, j_complex_homology, kfrak_dim, l_functors, lfrak_dim, milnor_derivation, predicted_total_homology,
    q1_homology_on_K, total_homology, BicomplexKind, MilnorDims,
};
use crate::polyalg::{binomial, sym_dim, trunc_sym_dim};
use crate::ss::{einfty_consistency, hz_einfty_consistency, hz_spectral_sequence, ku_spectral_sequence};
use crate::{p_dim, Error};

/// A single comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of one suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub criterion: u8,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    #[must_use]
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, got: T, want: T) {
        let passed = got == want;
        let detail = if passed { String::new() } else { format!("got {got:?}, want {want:?}") };
        self.push(name, passed, detail);
    }

    fn error(&mut self, name: impl Into<String>, e: &Error) {
        self.push(name, false, e.to_string());
    }
}

/// Restricts a suite to one rank and/or a smaller degree bound.
#[derive(Clone, Copy, Debug, Default)]
pub struct Scope {
    pub rank: Option<usize>,
    pub max_degree: Option<usize>,
}

impl Scope {
    fn ranks(&self, default: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        match self.rank {
            Some(r) => vec![r],
            None => default.collect(),
        }
    }

    fn bound(&self, default: usize) -> usize {
        self.max_degree.unwrap_or(default)
    }
}

/// Suite names in criterion order.
pub const SUITES: [&str; 8] = ["milnor", "q1", "groupring", "ku", "bicomplex", "duality", "localcoh", "ss"];

/// Runs the named suite.
pub fn run_suite(name: &str, scope: Scope) -> Result<SuiteReport, Error> {
    Ok(match name {
        "milnor" => milnor_suite(scope),
        "q1" => q1_suite(scope),
        "groupring" => groupring_suite(scope),
        "ku" => ku_suite(scope),
        "bicomplex" => bicomplex_suite(scope),
        "duality" => duality_suite(scope),
        "localcoh" => localcoh_suite(scope),
        "ss" => ss_suite(scope),
        _ => return Err(Error::Invalid(format!("unknown suite {name:?}; expected one of {SUITES:?}"))),
    })
}

fn report(suite: &str, criterion: u8) -> SuiteReport {
    SuiteReport { suite: suite.to_string(), criterion, checks: Vec::new() }
}

/// Homology of `(S*, Qᵢ)`: zero in odd degrees, `trunc_sym_dim` in degree `2d`.
#[must_use]
pub fn milnor_suite(scope: Scope) -> SuiteReport {
    let mut rep = report("milnor", 1);
    let bound = scope.bound(24);
    for r in scope.ranks(1..=4) {
        for i in 0..=2u32 {
            let s = (1usize << (i + 1)) - 1;
            let ranks: Vec<usize> = (0..=bound).map(|k| milnor_derivation(i, r, k).rank()).collect();
            let got: Vec<usize> = (0..=bound)
                .map(|k| sym_dim(r, k) - ranks[k] - if k >= s { ranks[k - s] } else { 0 })
                .collect();
            let want: Vec<usize> =
                (0..=bound).map(|k| if k % 2 == 1 { 0 } else { trunc_sym_dim(r, i, k / 2) }).collect();
            rep.eq(format!("H(S,Q{i}) r={r}"), got, want);
        }
    }
    rep
}

/// `L̃ₙ/Lₙ` against `p_dĪ`, plus the low-degree values of `L` and `L̃`.
#[must_use]
pub fn q1_suite(scope: Scope) -> SuiteReport {
    let mut rep = report("q1", 2);
    let bound = scope.bound(24);
    for r in scope.ranks(1..=4) {
        let h = q1_homology_on_K(r, bound);
        let got: Vec<usize> = (1..=bound).map(|n| h.get(n as i64)).collect();
        let want: Vec<usize> = (1..=bound).map(|n| if n % 2 == 1 { 0 } else { p_dim(r, n / 2) }).collect();
        rep.eq(format!("H(K,Q1) r={r}"), got, want);
        rep.eq(format!("H(K,Q1)_0 r={r}"), h.get(0), 1);
        let d = MilnorDims::compute(r, bound);
        rep.eq(format!("L_n = 0 for n<=5, r={r}"), d.l[..=5].to_vec(), vec![0; 6]);
        rep.eq(format!("Ltilde_1,3,5 r={r}"), [1, 3, 5].map(|n| d.ltilde[n]), [0; 3]);
        rep.eq(format!("Ltilde_2 r={r}"), d.ltilde[2], r);
        rep.eq(format!("Ltilde_4 r={r}"), d.ltilde[4], sym_dim(r, 2));
        // Direct kernel computation in low degrees.
        let top = if r <= 2 { 14 } else { 10 }.min(bound);
        let direct: Vec<usize> = (0..=top).map(|n| l_functors(r, n).1.dim()).collect();
        rep.eq(format!("Ltilde direct vs rank count r={r}"), direct, d.ltilde[..=top].to_vec());
    }
    rep
}

/// The augmentation filtration of `ℤ[V]`.
#[must_use]
pub fn groupring_suite(scope: Scope) -> SuiteReport {
    let mut rep = report("groupring", 3);
    if scope.rank.is_none_or(|r| r == 1) {
        let top = scope.bound(10);
        let filt = AugmentationFiltration::new(1, top + 1);
        for n in 1..=top {
            match filt.rn_group(n) {
                Ok(g) => rep.eq(format!("R^{n}(F) cyclic"), g, FinAbGroup::cyclic(1 << n)),
                Err(e) => rep.error(format!("R^{n}(F)"), &e),
            }
        }
    }
    let ranks: Vec<usize> = scope.ranks(2..=3).into_iter().filter(|&r| r >= 2).collect();
    for r in ranks {
        let nmax = scope.bound(6).min(6);
        match filtration_reports(r, nmax) {
            Ok(reports) => {
                for f in reports {
                    let n = f.n;
                    rep.eq(format!("log2|R^{n}| r={r}"), f.log2_order, f.predicted_log2_order);
                    rep.eq(format!("2-torsion R^{n} r={r}"), f.two_torsion_dim, p_dim(r, n));
                    rep.eq(format!("head = socle R^{n} r={r}"), f.head_dim, f.two_torsion_dim);
                    rep.eq(
                        format!("subquotient {n} r={r}"),
                        f.subquotient.clone(),
                        FinAbGroup::elementary(p_dim(r, n)),
                    );
                    rep.push(format!("2·P^{n} ⊆ P^{} r={r}", n + 1), f.chain_holds, "");
                }
            }
            Err(e) => rep.error(format!("filtration r={r}"), &e),
        }
        let filt = AugmentationFiltration::new(r, r + 2);
        for n in 1..=r + 2 {
            let want: usize = (n..=r).map(|j| binomial(r, j) as usize).sum();
            rep.eq(format!("F2 augmentation power {n} r={r}"), f2_aug_power_dim(r, n), want);
            rep.eq(format!("mod-2 image of P^{n} r={r}"), filt.mod_two_image_dim(n), want);
        }
    }
    if scope.rank.is_none() {
        for n in 1..=3 {
            for k in 1..=3 {
                rep.push(format!("P^(n+k) ⊆ 2^k P, n={n} k={k}"), completion_inclusion_check(n, k), "");
            }
        }
    }
    rep
}

/// The `ku` tables.
#[must_use]
pub fn ku_suite(scope: Scope) -> SuiteReport {
    let mut rep = report("ku", 4);
    if scope.rank.is_none_or(|r| r == 1) {
        let dmax = 8;
        rep.eq(
            "r=1 torsion vanishes",
            ku_cohom_table(1, 2 * dmax).rows.iter().all(|row| row.torsion_dim == 0),
            true,
        );
        match ku_hom_table(1, 2 * dmax - 1) {
            Ok(t) => {
                for d in 1..=dmax {
                    let row = &t.rows[2 * d - 1];
                    rep.eq(format!("ku_{} (r=1)", 2 * d - 1), row.cotorsion.clone(), FinAbGroup::cyclic(1 << d));
                    rep.eq(format!("ku_{} (r=1) torsion", 2 * d - 1), row.torsion_dim, 0);
                }
            }
            Err(e) => rep.error("ku_* r=1", &e),
        }
    }
    let bound = scope.bound(20);
    for r in scope.ranks(2..=4).into_iter().filter(|&r| r >= 2) {
        let c = ku_cohom_table(r, bound + 4);
        let hz = hz_cohom_table(r, bound);
        let mut even_ok = true;
        let mut odd_ok = true;
        for row in c.rows.iter().skip(1).take(bound) {
            if row.degree % 2 == 0 {
                even_ok &= row.modv_dim == row.torsion_dim + row.cotorsion_modv_dim;
            } else {
                odd_ok &= row.torsion_dim == row.modv_dim && row.cotorsion_modv_dim == 0;
            }
        }
        rep.push(format!("even degrees: ku/v = tors + cotors/v, r={r}"), even_ok, "");
        rep.push(format!("odd degrees: tors = ku/v, r={r}"), odd_ok, "");
        // ku^n/v = HZ^n ∩ ker Q₁ at even n ≥ 2: L̃ₙ ⊆ Kₙ.
        let sub = c.rows.iter().skip(1).take(bound).all(|row| row.modv_dim <= hz[row.degree as usize].dim);
        rep.push(format!("ku/v ⊆ HZ, r={r}"), sub, "");
        let q = qfrak_tables(r, bound);
        let qf_ok = q.rows.iter().all(|row| {
            let n = row.degree as usize;
            row.cohom_homology() == if n.is_multiple_of(2) { p_dim(r, n / 2) } else { 0 }
                && row.hom_homology() == if n % 2 == 1 { p_dim(r, n.div_ceil(2)) } else { 0 }
        });
        rep.push(format!("Qfrak homology, r={r}"), qf_ok, "");
        match ku_hom_table(r, bound) {
            Ok(t) => {
                let shadow = t.rows.iter().all(|row| row.torsion_dim == c.rows[row.degree as usize + 4].torsion_dim);
                rep.push(format!("tors ku_n = tors ku^(n+4), r={r}"), shadow, "");
                for row in t.rows.iter().filter(|row| row.degree % 2 == 1) {
                    let d = (row.degree as usize).div_ceil(2);
                    match rn_group(r, d) {
                        Ok(g) => {
                            let order = g.log2_torsion_order();
                            rep.eq(format!("cotors ku_{} = R^{d}, r={r}", row.degree), row.cotorsion.clone(), g);
                            let want: u64 = (1..=d).map(|m| p_dim(r, m) as u64).sum();
                            rep.eq(format!("log2|R^{d}| r={r}"), order, Some(want));
                        }
                        Err(e) => rep.error(format!("R^{d} r={r}"), &e),
                    }
                }
            }
            Err(e) => rep.error(format!("ku_* r={r}"), &e),
        }
    }
    rep
}

/// `B(i)`, `D(i)`, the `J`-complexes and the associated graded identities.
#[must_use]
pub fn bicomplex_suite(scope: Scope) -> SuiteReport {
    let mut rep = report("bicomplex", 5);
    // Internal degree 2w for anchor weight w.
    let max_weight = scope.bound(20) / 2;
    for r in scope.ranks(1..=4) {
        for i in 0..=r {
            let kinds: &[BicomplexKind] =
                if i == 0 { &[BicomplexKind::D] } else { &[BicomplexKind::B, BicomplexKind::D] };
            for &kind in kinds {
                let bi = bicomplex(kind, i, r, max_weight);
                match total_homology(&bi) {
                    Ok(mut h) => {
                        h.retain(|_, g| !g.is_zero());
                        rep.eq(format!("{kind:?}({i}) r={r}"), h, predicted_total_homology(&bi));
                    }
                    Err(e) => rep.error(format!("{kind:?}({i}) r={r}"), &e),
                }
            }
        }
        let j_ok: Vec<bool> = (0..=2 * max_weight)
            .map(|b| {
                let h = j_complex_homology(r, b);
                h.get(0) == p_dim(r, b + 1) && h.total() == h.get(0)
            })
            .collect();
        rep.eq(format!("J-complexes r={r}"), j_ok.iter().all(|&x| x), true);
        // gr K and gr of the cokernel of Q₁ on K, by odd-exponent filtration.
        let nmax = 2 * max_weight;
        let d = MilnorDims::compute(r, nmax);
        let sum = |n: usize, amin: usize, f: &dyn Fn(usize, usize) -> usize| -> usize {
            (amin..=r.min(n.saturating_sub(1)))
                .filter(|&a| (n - 1 - a).is_multiple_of(2) && n > a)
                .map(|a| f(a, (n - 1 - a) / 2))
                .sum()
        };
        let k_ok = (1..=nmax).all(|n| d.k[n] == sum(n, 1, &|a, b| kfrak_dim(r, a, b)));
        rep.push(format!("gr K = sum of Kfrak, r={r}"), k_ok, "");
        let kl_ok = (1..=nmax).all(|n| d.k[n] - d.l[n] == sum(n, 1, &|a, b| lfrak_dim(r, a, b)));
        rep.push(format!("gr K/L = sum of Lfrak, r={r}"), kl_ok, "");
        let l_ok = (1..=nmax).all(|n| d.l[n + 3] == sum(n, 2, &|a, b| lfrak_dim(r, a, b)));
        rep.push(format!("gr L = sum of Lfrak (a >= 2), r={r}"), l_ok, "");
    }
    rep
}

/// The dual of `σ_{≥a}Kz₀` against `σ_{≤r−a}Kz₀`.
#[must_use]
pub fn duality_suite(scope: Scope) -> SuiteReport {
    let mut rep = report("duality", 6);
    let bound = scope.bound(12) as i64;
    for r in scope.ranks(1..=3) {
        for a in 0..=r {
            let dual = dual_truncated_koszul(r, a, bound);
            let direct = truncated_koszul_below(r, r - a, bound);
            rep.eq(format!("terms r={r} a={a}"), &dual.terms, &direct.terms);
            let maps_equal = dual.differentials.len() == direct.differentials.len()
                && dual.differentials.iter().zip(&direct.differentials).all(|(x, y)| x.slices == y.slices);
            rep.push(format!("differentials r={r} a={a}"), maps_equal, "");
            match (dual.homology(), direct.homology()) {
                (Ok(x), Ok(y)) => rep.eq(format!("homology r={r} a={a}"), x, y),
                (Err(e), _) | (_, Err(e)) => rep.error(format!("homology r={r} a={a}"), &e),
            }
        }
    }
    rep
}

/// Predicted `H^m_I(𝔏_{i,*})` on `lo..=hi` (generators in degree 0, `x_j`
/// in degree 2). Placements of the `F` summands and of the duals are the
/// observed ones.
#[must_use]
pub fn predicted_lfrak_local_cohomology(r: usize, i: usize, lo: i64, hi: i64) -> Vec<(usize, GradedDim)> {
    let ri = r as i64;
    let ii = i as i64;
    let window = |g: GradedDim| g.restricted(lo, hi);
    let dual = |top: i64, f: &dyn Fn(usize) -> usize| -> GradedDim {
        (0..).map(|b: i64| (top - 2 * b, f(b as usize))).take_while(|&(c, _)| c >= lo).collect()
    };
    if i == r {
        return vec![(r, window(dual(-2 * ri, &|b| sym_dim(r, b))))];
    }
    let mut hi_ = dual(2 * (ri - 3) - 4 * (ii - 1), &|b| p_dim(r, b + 1));
    for m in (ii - 2).max(-1)..=ri - 2 {
        hi_.add(2 * m - 4 * (ii - 1), 1);
    }
    let mut out = vec![(i, window(hi_))];
    if i >= 2 {
        let top = dual(-2 * (ri + 3), &|b| lfrak_dim(r, r - i + 2, b));
        if !top.is_zero() {
            out.push((r, window(top)));
        }
    }
    out
}

/// Local cohomology of the `𝔏`-modules and of `HZ*(BV₊)`.
#[must_use]
pub fn localcoh_suite(scope: Scope) -> SuiteReport {
    let mut rep = report("localcoh", 7);
    let bound = scope.bound(16) as i64;
    let (lo, hi) = (-bound, bound);
    for r in scope.ranks(2..=3).into_iter().filter(|&r| r >= 2) {
        let mut h1 = GradedDim::new();
        for i in 1..=r {
            let pres = present_module(ModuleSpec::Lfrak { r, i });
            let cech = match cech_local_cohomology(&pres, lo, hi) {
                Ok(t) => t,
                Err(e) => {
                    rep.error(format!("Cech Lfrak r={r} i={i}"), &e);
                    continue;
                }
            };
            let got: Vec<(usize, GradedDim)> =
                cech.dims.iter().filter(|(_, g)| !g.is_zero()).map(|(&m, g)| (m, g.clone())).collect();
            rep.eq(format!("H(Lfrak) r={r} i={i}"), got, predicted_lfrak_local_cohomology(r, i, lo, hi));
            let dual = duality_local_cohomology(&pres, lo, hi);
            rep.push(format!("resolution closed r={r} i={i}"), dual.complete, "");
            rep.eq(format!("Cech = duality r={r} i={i}"), &cech.dims, &dual.dims);
            if i == 1 {
                h1 = cech.get(1);
            } else if i < r {
                // H¹(𝔏₁) → Hⁱ(𝔏ᵢ) is onto with kernel F^{i−1}: dims differ by
                // i−1 single classes after the shift.
                let top = hi - 4 * (i as i64 - 1);
                let shifted = h1.shifted(-4 * (i as i64 - 1)).restricted(lo, top);
                let diff = shifted.checked_minus(&cech.get(i).restricted(lo, top));
                let ok = diff.is_some_and(|k| k.total() == i - 1 && k.iter().all(|(_, d)| d == 1));
                rep.push(format!("H1(Lfrak_1) -> H{i}(Lfrak_{i}) kernel F^{} r={r}", i - 1), ok, "");
            }
        }
        // HZ*(BV₊): ℤ, 0, a band of single F's, then the top.
        match integral_cech_local_cohomology(r, lo, hi) {
            Ok(t) => {
                rep.eq(format!("H0(HZ)_0 r={r}"), t.integral.get(&(0, 0)).cloned(), Some(FinAbGroup::free(1)));
                rep.eq(format!("H0(HZ) elsewhere r={r}"), t.get(0).total(), 0);
                rep.eq(format!("H1(HZ) r={r}"), t.get(1).total(), 0);
                for j in 2..r {
                    let band: Vec<(i64, usize)> = t.get(j).iter().collect();
                    rep.eq(format!("H{j}(HZ) band r={r}"), band, vec![(-1, 1)]);
                }
                let k = MilnorDims::compute(r, bound as usize + 1);
                let top = t.get(r);
                let want: GradedDim = (lo..=hi)
                    .map(|c| {
                        let n = -c - r as i64;
                        let d = match n {
                            -1 => 1,
                            n if n >= 1 => k.k[n as usize + 1],
                            _ => 0,
                        };
                        (c, d)
                    })
                    .filter(|&(c, _)| -c - (r as i64) < bound)
                    .collect();
                let top_cut = top.restricted(lo, hi).iter().filter(|&(c, _)| -c - (r as i64) < bound).collect::<GradedDim>();
                rep.eq(format!("H{r}(HZ) top r={r}"), top_cut, want);
            }
            Err(e) => rep.error(format!("integral HZ r={r}"), &e),
        }
        // Connecting map of 0 → HZ̄ → HZ → ℤ → 0 in degree 0.
        match h0_index_in_degree_zero(&present_module(ModuleSpec::HZplus { r })) {
            Ok(g) => rep.eq(format!("H0(HZ)_0 has index 2 in Z, r={r}"), g, FinAbGroup::cyclic(2)),
            Err(e) => rep.error(format!("H0 index r={r}"), &e),
        }
        match cech_local_cohomology(&present_module(ModuleSpec::Kmodule { r }), -2, 2) {
            Ok(t) => rep.eq(format!("H1(reduced HZ)_0 = F, r={r}"), t.get(1).get(0), 1),
            Err(e) => rep.error(format!("reduced HZ r={r}"), &e),
        }
    }
    rep
}

/// The local cohomology spectral sequences for `HZ` and `ku`.
#[must_use]
pub fn ss_suite(scope: Scope) -> SuiteReport {
    let mut rep = report("ss", 8);
    let bound = scope.bound(12) as i64;
    for r in scope.ranks(2..=3).into_iter().filter(|&r| r >= 2) {
        match einfty_consistency(r, bound) {
            Ok(a) => {
                let bad: Vec<_> = a.mismatches().cloned().collect();
                rep.eq(format!("ku abutment r={r}"), bad, vec![]);
            }
            Err(e) => rep.error(format!("ku abutment r={r}"), &e),
        }
        match hz_einfty_consistency(r, bound) {
            Ok(a) => {
                let bad: Vec<_> = a.mismatches().cloned().collect();
                rep.eq(format!("HZ abutment r={r}"), bad, vec![]);
            }
            Err(e) => rep.error(format!("HZ abutment r={r}"), &e),
        }
        match ku_spectral_sequence(r, bound) {
            Ok(ss) => {
                let ri = r as i64;
                let middle_zero = (2..r).all(|i| ss.einfty.column_is_zero(-(i as i64)));
                rep.push(format!("middle columns vanish at Einf, r={r}"), middle_zero, "");
                let tail = ss.layers.tail(r - 1).restricted(ss.einfty.lo, bound);
                let col = ss.einfty.torsion[&-1].clone();
                rep.eq(format!("Einf s=-1 is v^(r-1) H1(Q), r={r}"), col.clone(), tail);
                for i in 0..r - 1 {
                    let units = ss.layers.layer(i).checked_minus(&ss.layers.dual_part(i)).map(|g| g.total());
                    rep.eq(format!("layer {i} is F^(r-1-{i}) + DLfrak1, r={r}"), units, Some(r - 1 - i));
                }
                for i in 0..r.saturating_sub(2) {
                    let layer = ss.layers.layer(i);
                    let col = &ss.pages[0].torsion[&-(i as i64 + 2)];
                    let ok = (ss.einfty.lo..=bound).all(|n| layer.get(n) == col.get(n - 1));
                    rep.push(format!("layer {i} = H{}(Lfrak_{}), r={r}", i + 2, i + 2), ok, "");
                }
                // Everything lost from s = −1 lands in columns −2..−r.
                let lost: usize = (0..r - 1).map(|i| ss.layers.layer(i).restricted(ss.einfty.lo, bound).total()).sum();
                let killed: usize =
                    ss.differentials.iter().filter(|d| d.source.1 <= bound).map(|d| d.rank).sum();
                rep.eq(format!("differential bookkeeping r={r}"), killed, lost);
                if r == 3 {
                    // The s = −2 column is F^{r−1} ⊕ D𝔏₁.
                    let col = &ss.pages[0].torsion[&-2];
                    let d = crate::ss::dual_lfrak_one(r, ss.pages[0].lo, bound).shifted(-1);
                    let extra = col.restricted(ss.pages[0].lo, bound - 1).checked_minus(&d.restricted(ss.pages[0].lo, bound - 1));
                    rep.eq(format!("E1 s=-2 minus DLfrak1, r={r}"), extra.map(|g| g.total()), Some(r - 1));
                }
                match hz_spectral_sequence(r, bound) {
                    Ok(hz) => {
                        rep.eq(format!("HZ zero column index r={r}"), hz.zero_column_index, 1u64 << (r - 1));
                        rep.eq(format!("HZ differentials r={r}"), hz.differentials.len(), r - 1);
                        let below = (ss.einfty.lo..=bound)
                            .all(|n| ss.einfty.torsion_at(-ri, n) <= hz.einfty.torsion_at(-ri, n));
                        rep.push(format!("ku top corner maps into HZ top corner, r={r}"), below, "");
                    }
                    Err(e) => rep.error(format!("HZ spectral sequence r={r}"), &e),
                }
            }
            Err(e) => rep.error(format!("ku spectral sequence r={r}"), &e),
        }
    }
    rep
}
