//! One function per subcommand, each producing [`Table`]s.

use serde_json::{json, Value};

use kuforge::groupring::{completion_inclusion_check, f2_aug_power_dim, filtration_reports};
use kuforge::kumod::{hz_cohom_table, hz_hom_table, ku_cohom_table, ku_hom_table, qfrak_tables};
use kuforge::localcoh::{cech_local_cohomology, duality_local_cohomology, present_module, ModuleSpec};
use kuforge::milnor::{kfrak_dim, lfrak_dim, MilnorDims};
use kuforge::polyalg::{ext_dim, sym_dim};
use kuforge::ss::{einfty_consistency, hz_einfty_consistency, hz_spectral_sequence, ku_spectral_sequence};
use kuforge::verify::{run_suite, Scope, SUITES};
use kuforge::{AbutmentReport, SSPage};

use crate::table::{Output, Table};
use crate::{Cli, Command, Failure, Functor, ModuleKind, Route};

const DEFAULT_RANK: usize = 2;
const DEFAULT_MAX_DEGREE: usize = 16;
const MAX_RANK: usize = 6;

/// Runs the subcommand. A verification failure still produces output, so it
/// is returned next to the text rather than as an error.
pub fn run(cli: &Cli) -> Result<(String, Option<Failure>), Failure> {
    let rank = cli.rank.unwrap_or(DEFAULT_RANK);
    let max_degree = cli.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
    if rank == 0 || rank > MAX_RANK {
        return Err(Failure::Usage(format!("--rank must be in 1..={MAX_RANK}, got {rank}")));
    }
    let mut failure = None;
    let (name, tables) = match &cli.command {
        Command::Dims { functor } => ("dims", dims(rank, max_degree, *functor)),
        Command::Groupring => ("groupring", groupring(rank, max_degree)?),
        Command::KuCohom => ("ku-cohom", ku_cohom(rank, max_degree)),
        Command::KuHom => ("ku-hom", ku_hom(rank, max_degree)?),
        Command::Localcoh { module, i, route, min_degree } => {
            ("localcoh", localcoh(rank, max_degree, *module, *i, *route, *min_degree)?)
        }
        Command::Ss => ("ss", ss(rank, max_degree)?),
        Command::Verify { suite } => {
            let scope = Scope { rank: cli.rank, max_degree: cli.max_degree };
            let (tables, failed) = verify(suite, scope)?;
            if !failed.is_empty() {
                failure = Some(Failure::Verification(format!("verification failed: {}", failed.join(", "))));
            }
            ("verify", tables)
        }
    };
    let out = Output { subcommand: name.to_string(), rank, max_degree, tables };
    Ok((out.render(cli.format), failure))
}

fn dims(r: usize, nmax: usize, functor: Functor) -> Vec<Table> {
    match functor {
        Functor::Kfrak | Functor::Lfrak => {
            let (name, f): (&str, fn(usize, usize, usize) -> usize) = match functor {
                Functor::Kfrak => ("Kfrak", kfrak_dim),
                _ => ("Lfrak", lfrak_dim),
            };
            let mut cols = vec!["degree".to_string()];
            cols.extend((1..=r).map(|a| format!("a={a}")));
            let mut t = Table::with_columns(name, cols);
            for b in 0..=nmax {
                let mut row = vec![json!(b)];
                row.extend((1..=r).map(|a| json!(f(r, a, b))));
                t.push(row);
            }
            vec![t]
        }
        _ => {
            let d = MilnorDims::compute(r, nmax);
            let (name, value): (&str, Box<dyn Fn(usize) -> usize>) = match functor {
                Functor::S => ("S", Box::new(|n| sym_dim(r, n))),
                Functor::Lambda => ("Lambda", Box::new(|n| ext_dim(r, n))),
                Functor::K => ("K", Box::new(|n| d.k[n])),
                Functor::L => ("L", Box::new(|n| d.l[n])),
                _ => ("Ltilde", Box::new(|n| d.ltilde[n])),
            };
            let mut t = Table::new(name, &["degree", "dim"]);
            for n in 0..=nmax {
                t.push(vec![json!(n), json!(value(n))]);
            }
            vec![t]
        }
    }
}

fn groupring(r: usize, nmax: usize) -> Result<Vec<Table>, Failure> {
    let mut f = Table::new(
        "filtration",
        &["degree", "quotient", "subquotient", "log2_order", "predicted_log2_order", "two_torsion_dim", "head_dim", "chain_holds"],
    );
    for rep in filtration_reports(r, nmax.max(1))? {
        f.push(vec![
            json!(rep.n),
            json!(rep.quotient.to_string()),
            json!(rep.subquotient.to_string()),
            json!(rep.log2_order),
            json!(rep.predicted_log2_order),
            json!(rep.two_torsion_dim),
            json!(rep.head_dim),
            json!(rep.chain_holds),
        ]);
    }
    let mut m = Table::new("mod_two_powers", &["degree", "dim"]);
    for n in 1..=(r + 1).min(nmax.max(1)) {
        m.push(vec![json!(n), json!(f2_aug_power_dim(r, n))]);
    }
    let mut c = Table::new("completion", &["degree", "holds"]);
    for k in 1..=3 {
        c.push(vec![json!(k), json!(completion_inclusion_check(r, k))]);
    }
    Ok(vec![f, m, c])
}

fn ku_cohom(r: usize, nmax: usize) -> Vec<Table> {
    let mut ku = Table::new("ku_cohom", &["degree", "torsion_dim", "modv_dim", "cotorsion_modv_dim", "z2_free_rank"]);
    for row in ku_cohom_table(r, nmax).rows {
        ku.push(vec![
            json!(row.degree),
            json!(row.torsion_dim),
            json!(row.modv_dim),
            json!(row.cotorsion_modv_dim),
            json!(row.z2_free_rank),
        ]);
    }
    let mut hz = Table::new("hz_cohom", &["degree", "dim", "free_rank"]);
    for row in hz_cohom_table(r, nmax) {
        hz.push(vec![json!(row.degree), json!(row.dim), json!(row.free_rank)]);
    }
    let mut q = Table::new("qfrak", &["degree", "cohom_im", "cohom_ker", "hom_im", "hom_ker"]);
    for row in qfrak_tables(r, nmax).rows {
        q.push(vec![json!(row.degree), json!(row.cohom_im), json!(row.cohom_ker), json!(row.hom_im), json!(row.hom_ker)]);
    }
    vec![ku, hz, q]
}

fn ku_hom(r: usize, nmax: usize) -> Result<Vec<Table>, Failure> {
    let mut ku = Table::new("ku_hom", &["degree", "torsion_dim", "cotorsion", "log2_finite_order"]);
    for row in ku_hom_table(r, nmax)?.rows {
        ku.push(vec![
            json!(row.degree),
            json!(row.torsion_dim),
            json!(row.cotorsion.to_string()),
            json!(row.log2_finite_order()),
        ]);
    }
    let mut hz = Table::new("hz_hom", &["degree", "dim", "free_rank"]);
    for row in hz_hom_table(r, nmax) {
        hz.push(vec![json!(row.degree), json!(row.dim), json!(row.free_rank)]);
    }
    Ok(vec![ku, hz])
}

fn localcoh(
    r: usize,
    nmax: usize,
    module: ModuleKind,
    i: usize,
    route: Route,
    min_degree: Option<i64>,
) -> Result<Vec<Table>, Failure> {
    let spec = match module {
        ModuleKind::Lfrak | ModuleKind::Kfrak if i == 0 || i > r => {
            return Err(Failure::Usage(format!("--i must be in 1..={r}, got {i}")));
        }
        ModuleKind::Lfrak => ModuleSpec::Lfrak { r, i },
        ModuleKind::Kfrak => ModuleSpec::Kfrak { r, i },
        ModuleKind::Free => ModuleSpec::Free { r },
        ModuleKind::Kmodule => ModuleSpec::Kmodule { r },
        ModuleKind::Hz => ModuleSpec::HZplus { r },
        ModuleKind::TorsKu => ModuleSpec::TorsKu { r },
        ModuleKind::QmodV => ModuleSpec::QmodV { r },
    };
    let hi = nmax as i64;
    let lo = min_degree.unwrap_or(-hi);
    if lo > hi {
        return Err(Failure::Usage(format!("--min-degree {lo} exceeds --max-degree {hi}")));
    }
    let pres = present_module(spec);
    let table = match route {
        Route::Cech => cech_local_cohomology(&pres, lo, hi)?,
        Route::Duality => duality_local_cohomology(&pres, lo, hi),
    };
    let mut cols = vec!["degree".to_string()];
    cols.extend((0..=r).map(|m| format!("H{m}")));
    let mut t = Table::with_columns("local_cohomology", cols);
    for d in lo..=hi {
        let mut row = vec![json!(d)];
        row.extend((0..=r).map(|m| json!(table.get(m).get(d))));
        t.push(row);
    }
    let mut g = Table::new("integral", &["degree", "cohom_degree", "group"]);
    for (&(m, d), grp) in &table.integral {
        g.push(vec![json!(d), json!(m), json!(grp.to_string())]);
    }
    let mut s = Table::new("summary", &["module", "route", "complete"]);
    let route_name = match route {
        Route::Cech => "cech",
        Route::Duality => "duality",
    };
    s.push(vec![json!(table.label), json!(route_name), json!(table.complete)]);
    Ok(vec![s, t, g])
}

fn page_table(name: &str, page: &SSPage) -> Table {
    let r = page.r as i64;
    let mut cols = vec!["degree".to_string()];
    cols.extend((-r..=0).rev().map(|s| format!("s={s}")));
    cols.push("free".to_string());
    let mut t = Table::with_columns(name, cols);
    for n in page.lo..=page.hi {
        let mut row = vec![json!(n)];
        row.extend((-r..=0).rev().map(|s| json!(page.torsion_at(s, n))));
        row.push(json!(page.free_total(n)));
        t.push(row);
    }
    t
}

fn abutment_table(name: &str, rep: &AbutmentReport) -> Table {
    let mut t = Table::new(
        name,
        &["degree", "ss_log2_order", "ss_free_rank", "target_log2_order", "target_free_rank", "equal"],
    );
    for row in &rep.rows {
        t.push(vec![
            json!(row.degree),
            json!(row.ss_log2_order),
            json!(row.ss_free_rank),
            json!(row.target_log2_order),
            json!(row.target_free_rank),
            json!(row.equal),
        ]);
    }
    t
}

fn ss(r: usize, nmax: usize) -> Result<Vec<Table>, Failure> {
    let bound = nmax as i64;
    let ku = ku_spectral_sequence(r, bound)?;
    let hz = hz_spectral_sequence(r, bound)?;
    let mut diffs = Table::new("differentials", &["degree", "spectral_sequence", "page", "source_s", "target_s", "rank"]);
    for (label, list) in [("ku", &ku.differentials), ("HZ", &hz.differentials)] {
        for d in list.iter().filter(|d| d.source.1 <= bound) {
            diffs.push(vec![json!(d.source.1), json!(label), json!(d.page), json!(d.source.0), json!(d.target.0), json!(d.rank)]);
        }
    }
    let mut layers = Table::with_columns(
        "v_adic_layers",
        std::iter::once("degree".to_string()).chain((0..r).map(|i| format!("layer{i}"))).collect(),
    );
    for n in ku.pages[0].lo..=bound {
        let mut row = vec![json!(n)];
        row.extend((0..r).map(|i| json!(ku.layers.layer(i).get(n))));
        layers.push(row);
    }
    let mut summary = Table::new("hz_summary", &["zero_column_index", "h0_index"]);
    summary.push(vec![json!(hz.zero_column_index), json!(hz.h0_index.to_string())]);
    Ok(vec![
        page_table("ku_e1", &ku.pages[0]),
        layers,
        page_table("ku_einfty", &ku.einfty),
        abutment_table("ku_abutment", &einfty_consistency(r, bound)?),
        page_table("hz_e2", &hz.pages[0]),
        page_table("hz_einfty", &hz.einfty),
        abutment_table("hz_abutment", &hz_einfty_consistency(r, bound)?),
        diffs,
        summary,
    ])
}

fn verify(suite: &str, scope: Scope) -> Result<(Vec<Table>, Vec<String>), Failure> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Failure::Usage(format!("unknown suite {suite:?}; expected all or one of {}", SUITES.join(", "))));
    };
    let mut summary = Table::new("summary", &["criterion", "suite", "checks", "passed"]);
    let mut detail = Table::new("checks", &["suite", "check", "passed", "detail"]);
    let mut failed = Vec::new();
    for name in names {
        let rep = run_suite(name, scope)?;
        summary.push(vec![json!(rep.criterion), json!(name), json!(rep.checks.len()), json!(rep.passed())]);
        for c in &rep.checks {
            let d = if c.detail.is_empty() { Value::Null } else { json!(c.detail) };
            detail.push(vec![json!(name), json!(c.name), json!(c.passed), d]);
        }
        if !rep.passed() {
            failed.push(name.to_string());
        }
    }
    Ok((vec![summary, detail], failed))
}
