//! Command-line surface: every subcommand resolves a graph, runs the
//! corresponding library operations, and renders the result both as a
//! human-readable table and as JSON. Exit code 0 means success, 1 means a
//! mathematical verdict came back negative, 2 means the input was bad.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;

use gkm_core::catalog;
use gkm_core::cohomology::{
    basis_h, check_morse_package, dim_formula, two_dim_reduction_check, CohClass,
};
use gkm_core::crosssection::{cross_section, kirwan, membership, HyperedgeRoute};
use gkm_core::cutting::cut_product;
use gkm_core::error::{GkmError, Result};
use gkm_core::integration::integrate;
use gkm_core::morse::{morse_data, poincare_check, MorseData};
use gkm_core::polyring::{format_rat, parse_rat, MultiPoly, Vector};
use gkm_core::skeleton::{validate_axioms, Skeleton};
use gkm_core::symfun;
use gkm_core::wallcross::{dim_by_sweep, SweepVerify};

#[derive(Parser, Debug)]
#[command(
    name = "gkmlab",
    about = "Exact Morse theory on edge-labeled graphs: axioms, cohomology, Thom classes, cross-sections, wall-crossing",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Graph to operate on: `sn:N`, `johnson:N,K`, or `file:PATH`.
    #[arg(long)]
    pub graph: String,
    /// Polarizing vector as comma-separated rationals; searched when absent.
    #[arg(long)]
    pub xi: Option<String>,
    /// Seed for the deterministic vector search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DegreeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Largest polynomial degree to sweep (defaults to valence + 2).
    #[arg(long)]
    pub max_degree: Option<u32>,
}

#[derive(Args, Debug)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Class file to integrate; without it, every basis class up to the
    /// degree cap is integrated.
    #[arg(long)]
    pub class: Option<PathBuf>,
    #[arg(long)]
    pub max_degree: Option<u32>,
}

#[derive(Args, Debug)]
pub struct CrossSectionArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Regular level, as a rational like `3/2`.
    #[arg(long)]
    pub level: String,
    /// Class file to restrict and test for membership.
    #[arg(long)]
    pub class: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub degree: u32,
    /// Per-wall verification effort.
    #[arg(long, value_enum, default_value_t = Verify::Transform)]
    pub verify: Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verify {
    Formula,
    Transform,
    Dims,
}

#[derive(Args, Debug)]
pub struct AppendixArgs {
    /// Cap for the identity sweeps.
    #[arg(long, default_value_t = 6)]
    pub max_m: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the three axioms and report witnesses.
    Validate(CommonArgs),
    /// Orientation, Morse function, indices and Betti numbers.
    Morse(CommonArgs),
    /// Betti vector and its palindrome check.
    Betti(CommonArgs),
    /// Graded dimensions against the Betti formula.
    Cohdim(DegreeArgs),
    /// The generating (Thom) class table.
    Thom(CommonArgs),
    /// Full package check: family, dimensions, module span.
    Package(DegreeArgs),
    /// Plane-slice components versus the whole graph.
    Slices(CommonArgs),
    /// Integrate a class (or all basis classes) over the graph.
    Integrate(IntegrateArgs),
    /// Cross-section at a level: members, hyperedges, optional membership.
    CrossSection(CrossSectionArgs),
    /// Emit the level product of the graph as JSON.
    Cut(CommonArgs),
    /// Rebuild one graded dimension by sweeping walls of the level product.
    Sweep(SweepArgs),
    /// The symmetric-function and Vandermonde identity suites.
    AppendixCheck(AppendixArgs),
}

pub struct CmdOutput {
    pub exit: i32,
    pub table: String,
    pub json: serde_json::Value,
}

struct Resolved {
    skeleton: Skeleton,
    md: MorseData,
}

fn resolve(common: &CommonArgs) -> Result<Resolved> {
    let spec = catalog::parse_graph_spec(&common.graph)?;
    let (skeleton, catalog_xi) = catalog::build(&spec)?;
    let report = validate_axioms(&skeleton);
    if !report.all_pass() {
        return Err(GkmError::Invalid(format!(
            "graph violates the axioms (A1 witnesses: {}, A2: {}, A3: {})",
            report.a1_witnesses.len(),
            report.a2_witnesses.len(),
            report.a3_witnesses.len()
        )));
    }
    let xi = match &common.xi {
        Some(text) => parse_xi(text, skeleton.ctx.dim)?,
        None => match catalog_xi {
            Some(xi) => xi,
            None => gkm_core::morse::find_xi(&skeleton, 4096, common.seed)?,
        },
    };
    let md = morse_data(&skeleton, &xi)?;
    Ok(Resolved { skeleton, md })
}

fn parse_xi(text: &str, dim: usize) -> Result<Vector> {
    let coords: Vec<BigRational> = text
        .split(',')
        .map(|c| parse_rat(c.trim()))
        .collect::<Result<_>>()?;
    if coords.len() != dim {
        return Err(GkmError::DimMismatch {
            expected: dim,
            got: coords.len(),
        });
    }
    Ok(Vector::new(coords))
}

fn xi_string(xi: &Vector) -> String {
    xi.coords
        .iter()
        .map(format_rat)
        .collect::<Vec<_>>()
        .join(",")
}

/// Renders rows of equal length as an aligned table.
fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let ncols = header.len();
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let fmt_row = |cells: &[String], widths: &[usize]| -> String {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:w$}", c, w = widths[i]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = String::new();
    out.push_str(&fmt_row(header, &widths));
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (ncols - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_row(row, &widths));
        out.push('\n');
    }
    out
}

pub fn cmd_validate(args: &CommonArgs) -> Result<CmdOutput> {
    let spec = catalog::parse_graph_spec(&args.graph)?;
    let (skeleton, _) = catalog::build(&spec)?;
    let report = validate_axioms(&skeleton);
    let name_edge = |e: usize| {
        format!(
            "{}->{}",
            skeleton.vertex_name(skeleton.edge(e).src),
            skeleton.vertex_name(skeleton.edge(e).dst)
        )
    };
    let a1: Vec<String> = report
        .a1_witnesses
        .iter()
        .map(|(v, e1, e2)| {
            format!(
                "{}: {} || {}",
                skeleton.vertex_name(*v),
                name_edge(*e1),
                name_edge(*e2)
            )
        })
        .collect();
    let a2: Vec<String> = report.a2_witnesses.iter().map(|&e| name_edge(e)).collect();
    let a3: Vec<String> = report.a3_witnesses.iter().map(|&e| name_edge(e)).collect();
    let pass = report.all_pass();
    let status = |w: &[String]| {
        if w.is_empty() {
            "PASS".to_string()
        } else {
            format!("FAIL {w:?}")
        }
    };
    let table = format!(
        "A1 (pairwise independence): {}\nA2 (reversal negates):      {}\nA3 (star matchings):        {}\nverdict: {}\n",
        status(&a1),
        status(&a2),
        status(&a3),
        if pass { "PASS" } else { "FAIL" }
    );
    let json = serde_json::json!({
        "a1_witnesses": a1, "a2_witnesses": a2, "a3_witnesses": a3, "pass": pass,
    });
    Ok(CmdOutput {
        exit: i32::from(!pass),
        table,
        json,
    })
}

pub fn cmd_morse(args: &CommonArgs) -> Result<CmdOutput> {
    let r = resolve(args)?;
    let header = vec!["vertex".into(), "phi0".into(), "phi".into(), "index".into()];
    let mut order: Vec<usize> = (0..r.skeleton.n_vertices()).collect();
    order.sort_by(|&a, &b| r.md.phi[a].cmp(&r.md.phi[b]));
    let rows: Vec<Vec<String>> = order
        .iter()
        .map(|&v| {
            vec![
                r.skeleton.vertex_name(v).to_string(),
                r.md.phi0[v].to_string(),
                format_rat(&r.md.phi[v]),
                r.md.sigma[v].to_string(),
            ]
        })
        .collect();
    let mut table = format!("xi = ({})\n", xi_string(&r.md.xi));
    table.push_str(&render_table(&header, &rows));
    table.push_str(&format!("betti: {:?}\n", r.md.betti));
    let json = serde_json::json!({
        "xi": xi_string(&r.md.xi),
        "phi": r.skeleton.vertex_names().iter().enumerate()
            .map(|(v, n)| (n.clone(), format_rat(&r.md.phi[v])))
            .collect::<std::collections::BTreeMap<_,_>>(),
        "sigma": r.skeleton.vertex_names().iter().enumerate()
            .map(|(v, n)| (n.clone(), r.md.sigma[v]))
            .collect::<std::collections::BTreeMap<_,_>>(),
        "betti": r.md.betti,
    });
    Ok(CmdOutput {
        exit: 0,
        table,
        json,
    })
}

pub fn cmd_betti(args: &CommonArgs) -> Result<CmdOutput> {
    let r = resolve(args)?;
    let palindrome = poincare_check(&r.md);
    let table = format!(
        "betti: {:?}\npalindrome: {}\n",
        r.md.betti,
        if palindrome { "PASS" } else { "FAIL" }
    );
    let json = serde_json::json!({ "betti": r.md.betti, "palindrome": palindrome });
    Ok(CmdOutput {
        exit: i32::from(!palindrome),
        table,
        json,
    })
}

pub fn cmd_cohdim(args: &DegreeArgs) -> Result<CmdOutput> {
    let r = resolve(&args.common)?;
    let cap = args.max_degree.unwrap_or(r.skeleton.valence() as u32 + 2);
    let header = vec!["degree".into(), "dim".into(), "formula".into(), "match".into()];
    let mut rows = Vec::new();
    let mut all_ok = true;
    let mut dims = Vec::new();
    for m in 0..=cap {
        let dim = gkm_core::cohomology::dim_h(&r.skeleton, m);
        let formula = dim_formula(&r.md.betti, m, r.skeleton.ctx.dim);
        let ok = dim == formula;
        all_ok &= ok;
        dims.push(serde_json::json!({ "degree": m, "dim": dim, "formula": formula, "match": ok }));
        rows.push(vec![
            m.to_string(),
            dim.to_string(),
            formula.to_string(),
            if ok { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    let mut table = render_table(&header, &rows);
    table.push_str(&format!(
        "formula cross-check: {}\n",
        if all_ok { "PASS" } else { "FAIL" }
    ));
    Ok(CmdOutput {
        exit: i32::from(!all_ok),
        table,
        json: serde_json::json!({ "dims": dims, "pass": all_ok }),
    })
}

fn family_table(
    s: &Skeleton,
    md: &MorseData,
    family: &[gkm_core::cohomology::GenClass],
) -> (String, serde_json::Value) {
    let mut order: Vec<usize> = (0..s.n_vertices()).collect();
    order.sort_by(|&a, &b| md.phi[a].cmp(&md.phi[b]));
    let mut header = vec!["vertex".into()];
    for &p in &order {
        header.push(format!("tau[{}]", s.vertex_name(p)));
    }
    let by_vertex: std::collections::BTreeMap<usize, &gkm_core::cohomology::GenClass> =
        family.iter().map(|g| (g.vertex, g)).collect();
    let rows: Vec<Vec<String>> = order
        .iter()
        .map(|&v| {
            let mut row = vec![s.vertex_name(v).to_string()];
            for &p in &order {
                row.push(by_vertex[&p].class.value(v).display(&s.ctx));
            }
            row
        })
        .collect();
    let json: serde_json::Value = family
        .iter()
        .map(|g| {
            serde_json::json!({
                "vertex": s.vertex_name(g.vertex),
                "degree": g.class.degree,
                "unique": g.unique,
                "sharpening": g.sharpening_hypothesis,
                "class": g.class.to_json(s),
            })
        })
        .collect();
    (render_table(&header, &rows), json)
}

pub fn cmd_thom(args: &CommonArgs) -> Result<CmdOutput> {
    let r = resolve(args)?;
    match gkm_core::cohomology::generating_family(&r.skeleton, &r.md) {
        Some(family) => {
            let (table, json) = family_table(&r.skeleton, &r.md, &family);
            Ok(CmdOutput {
                exit: 0,
                table,
                json: serde_json::json!({ "found": true, "family": json }),
            })
        }
        None => Ok(CmdOutput {
            exit: 1,
            table: "no generating family exists\n".into(),
            json: serde_json::json!({ "found": false }),
        }),
    }
}

pub fn cmd_package(args: &DegreeArgs) -> Result<CmdOutput> {
    let r = resolve(&args.common)?;
    let cap = args.max_degree.unwrap_or(r.skeleton.valence() as u32 + 2);
    let report = check_morse_package(&r.skeleton, &r.md, cap);
    let rows: Vec<Vec<String>> = report
        .dim_checks
        .iter()
        .map(|c| {
            vec![
                c.degree.to_string(),
                c.dim_nullspace.to_string(),
                c.dim_formula.to_string(),
                c.span_rank.map_or("-".into(), |r| r.to_string()),
                if c.ok() { "PASS" } else { "FAIL" }.into(),
            ]
        })
        .collect();
    let mut table = render_table(
        &[
            "degree".into(),
            "dim".into(),
            "formula".into(),
            "span".into(),
            "status".into(),
        ],
        &rows,
    );
    let family_json = match &report.family {
        Some(family) => {
            let (ftable, fjson) = family_table(&r.skeleton, &r.md, family);
            table.push('\n');
            table.push_str(&ftable);
            fjson
        }
        None => {
            table.push_str("\nno generating family exists\n");
            serde_json::Value::Null
        }
    };
    table.push_str(&format!(
        "\nverdict: {}\n",
        if report.verdict { "PASS" } else { "FAIL" }
    ));
    let json = serde_json::json!({
        "verdict": report.verdict,
        "betti": report.betti,
        "dims": report.dim_checks.iter().map(|c| serde_json::json!({
            "degree": c.degree, "dim": c.dim_nullspace,
            "formula": c.dim_formula, "span": c.span_rank,
        })).collect::<Vec<_>>(),
        "family": family_json,
    });
    Ok(CmdOutput {
        exit: i32::from(!report.verdict),
        table,
        json,
    })
}

pub fn cmd_slices(args: &CommonArgs) -> Result<CmdOutput> {
    let r = resolve(args)?;
    let report = two_dim_reduction_check(&r.skeleton, &r.md)?;
    let rows: Vec<Vec<String>> = report
        .outcomes
        .iter()
        .map(|o| {
            vec![
                o.subspace
                    .basis()
                    .iter()
                    .map(|b| format!("{b:?}"))
                    .collect::<Vec<_>>()
                    .join(" "),
                o.vertices.len().to_string(),
                o.valence.map_or("irregular".into(), |v| v.to_string()),
                match o.family_found {
                    Some(true) => "PASS".into(),
                    Some(false) => "FAIL".into(),
                    None => "SKIPPED".into(),
                },
            ]
        })
        .collect();
    let mut table = render_table(
        &[
            "subspace".into(),
            "vertices".into(),
            "valence".into(),
            "family".into(),
        ],
        &rows,
    );
    let ok = report.slices_pass && report.full_pass && report.consistent();
    table.push_str(&format!(
        "slices: {}  full graph: {}  consistent: {}\n",
        if report.slices_pass { "PASS" } else { "FAIL" },
        if report.full_pass { "PASS" } else { "FAIL" },
        if report.consistent() { "PASS" } else { "FAIL" },
    ));
    let json = serde_json::json!({
        "slices_pass": report.slices_pass,
        "full_pass": report.full_pass,
        "consistent": report.consistent(),
        "irregular_skipped": report.irregular_skipped,
        "count": report.outcomes.len(),
    });
    Ok(CmdOutput {
        exit: i32::from(!ok),
        table,
        json,
    })
}

fn load_class(skeleton: &Skeleton, path: &PathBuf) -> Result<CohClass> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| GkmError::Schema(format!("invalid class JSON: {e}")))?;
    CohClass::from_json(skeleton, &value)
}

pub fn cmd_integrate(args: &IntegrateArgs) -> Result<CmdOutput> {
    let r = resolve(&args.common)?;
    let mut rows = Vec::new();
    let mut results = Vec::new();
    let mut all_ok = true;
    match &args.class {
        Some(path) => {
            let class = load_class(&r.skeleton, path)?;
            let result = integrate(&r.skeleton, &class.values);
            let ok = result.is_polynomial();
            all_ok &= ok;
            rows.push(vec![
                format!("degree {}", class.degree),
                result.display(&r.skeleton.ctx),
                if ok { "polynomial" } else { "NON-POLYNOMIAL" }.into(),
            ]);
            results.push(serde_json::json!({ "degree": class.degree, "polynomial": ok }));
        }
        None => {
            let cap = args.max_degree.unwrap_or(r.skeleton.valence() as u32 + 1);
            for m in 0..=cap {
                for (i, f) in basis_h(&r.skeleton, m).iter().enumerate() {
                    let result = integrate(&r.skeleton, &f.values);
                    let ok = result.is_polynomial();
                    all_ok &= ok;
                    rows.push(vec![
                        format!("H^{m} basis {i}"),
                        result.display(&r.skeleton.ctx),
                        if ok { "polynomial" } else { "NON-POLYNOMIAL" }.into(),
                    ]);
                    results.push(serde_json::json!({ "degree": m, "index": i, "polynomial": ok }));
                }
            }
        }
    }
    let table = render_table(&["class".into(), "integral".into(), "verdict".into()], &rows);
    Ok(CmdOutput {
        exit: i32::from(!all_ok),
        table,
        json: serde_json::json!({ "results": results, "pass": all_ok }),
    })
}

pub fn cmd_cross_section(args: &CrossSectionArgs) -> Result<CmdOutput> {
    let r = resolve(&args.common)?;
    let level = parse_rat(&args.level)?;
    let cs = cross_section(&r.skeleton, &r.md, &level)?;
    let mut table = format!(
        "level {}: {} crossing edges\n\n",
        args.level,
        cs.members.len()
    );
    let rows: Vec<Vec<String>> = cs
        .members
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let edge = r.skeleton.edge(e);
            vec![
                format!(
                    "{}->{}",
                    r.skeleton.vertex_name(edge.src),
                    r.skeleton.vertex_name(edge.dst)
                ),
                format_rat(&cs.slopes[i].0),
                format!(
                    "({})",
                    cs.slopes[i]
                        .1
                        .iter()
                        .map(format_rat)
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            ]
        })
        .collect();
    table.push_str(&render_table(
        &["edge".into(), "pairing".into(), "slope".into()],
        &rows,
    ));
    let hrows: Vec<Vec<String>> = cs
        .hyperedges
        .iter()
        .map(|he| {
            vec![
                he.members
                    .iter()
                    .map(|&i| {
                        let e = r.skeleton.edge(cs.members[i]);
                        format!(
                            "{}->{}",
                            r.skeleton.vertex_name(e.src),
                            r.skeleton.vertex_name(e.dst)
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(" "),
                he.multiplicity.to_string(),
                format!("{:?}", he.label),
                if he.star { "star" } else { "interior" }.into(),
            ]
        })
        .collect();
    table.push('\n');
    table.push_str(&render_table(
        &[
            "hyperedge".into(),
            "mult".into(),
            "label".into(),
            "kind".into(),
        ],
        &hrows,
    ));
    let mut exit = 0;
    let mut membership_json = serde_json::Value::Null;
    if let Some(path) = &args.class {
        let class = load_class(&r.skeleton, path)?;
        let image = kirwan(&r.skeleton, &cs, &class.values)?;
        let report = membership(&r.skeleton, &r.md, &cs, &image)?;
        table.push_str("\nrestriction (Kirwan image):\n");
        for (i, val) in image.iter().enumerate() {
            table.push_str(&format!("  member {}: {}\n", i, val.display(&cs.pb.y_ctx)));
        }
        table.push_str(&format!(
            "membership: {}\n",
            if report.ok { "PASS" } else { "FAIL" }
        ));
        exit = i32::from(!report.ok);
        membership_json = serde_json::json!({
            "ok": report.ok,
            "verdicts": report.verdicts.iter().map(|(i, ok, route)| serde_json::json!({
                "hyperedge": i, "ok": ok,
                "route": match route {
                    HyperedgeRoute::PowerBasis => "power-basis",
                    HyperedgeRoute::KirwanSpan => "restriction-span",
                },
            })).collect::<Vec<_>>(),
        });
    }
    let json = serde_json::json!({
        "level": args.level,
        "members": cs.members.len(),
        "hyperedges": cs.hyperedges.iter().map(|he| serde_json::json!({
            "size": he.members.len(),
            "multiplicity": he.multiplicity,
            "star": he.star,
        })).collect::<Vec<_>>(),
        "membership": membership_json,
    });
    Ok(CmdOutput { exit, table, json })
}

pub fn cmd_cut(args: &CommonArgs) -> Result<CmdOutput> {
    let r = resolve(args)?;
    let ps = cut_product(&r.skeleton, &r.md, None)?;
    let json = ps.product.to_json();
    let table = format!(
        "{}\n",
        serde_json::to_string_pretty(&json).expect("serialization cannot fail")
    );
    Ok(CmdOutput {
        exit: 0,
        table,
        json,
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<CmdOutput> {
    let r = resolve(&args.common)?;
    let verify = match args.verify {
        Verify::Formula => SweepVerify::FormulaOnly,
        Verify::Transform => SweepVerify::Transform,
        Verify::Dims => SweepVerify::PerWallDims,
    };
    let report = dim_by_sweep(&r.skeleton, &r.md, args.degree, verify)?;
    let mut rows = vec![vec![
        "(start)".to_string(),
        "-".into(),
        "-".into(),
        report.start.to_string(),
    ]];
    for step in &report.steps {
        rows.push(vec![
            step.vertex.clone(),
            step.index.to_string(),
            step.change.to_string(),
            step.running.to_string(),
        ]);
    }
    let mut table = render_table(
        &[
            "wall".into(),
            "index".into(),
            "change".into(),
            "running".into(),
        ],
        &rows,
    );
    table.push_str(&format!(
        "swept: {}  direct: {}  formula: {}  verdict: {}\n",
        report.total,
        report.dim_direct,
        report.dim_formula,
        if report.ok() { "PASS" } else { "FAIL" }
    ));
    let json = serde_json::json!({
        "degree": report.degree,
        "start": report.start,
        "total": report.total,
        "direct": report.dim_direct,
        "formula": report.dim_formula,
        "pass": report.ok(),
    });
    Ok(CmdOutput {
        exit: i32::from(!report.ok()),
        table,
        json,
    })
}

pub fn cmd_appendix_check(args: &AppendixArgs) -> Result<CmdOutput> {
    use rand::{Rng, SeedableRng};
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut all = true;
    let push = |name: &str, ok: bool, rows: &mut Vec<Vec<String>>, all: &mut bool| {
        *all &= ok;
        rows.push(vec![
            name.to_string(),
            if ok { "PASS" } else { "FAIL" }.into(),
        ]);
    };

    let mut symbolic_ok = true;
    for m in 1..=4usize {
        for n_deg in 0..=args.max_m {
            let (_, _, ok) = symfun::hom_sym_identity_symbolic(m, n_deg);
            symbolic_ok &= ok;
        }
    }
    push(
        "power-sum identity (symbolic, m <= 4)",
        symbolic_ok,
        &mut rows,
        &mut all,
    );

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let mut numeric_ok = true;
    for _ in 0..500 {
        let m = rng.gen_range(1..=8usize);
        let mut values: Vec<BigRational> = Vec::new();
        while values.len() < m {
            let v = BigRational::new(
                rng.gen_range(-30i64..=30).into(),
                rng.gen_range(1i64..=7).into(),
            );
            if !values.contains(&v) {
                values.push(v);
            }
        }
        let n_deg = rng.gen_range(0..=args.max_m);
        let (_, _, ok) = symfun::hom_sym_identity_numeric(&values, n_deg)?;
        numeric_ok &= ok;
    }
    push(
        "power-sum identity (500 numeric cases)",
        numeric_ok,
        &mut rows,
        &mut all,
    );

    let mut inverse_ok = true;
    for _ in 0..200 {
        let m = rng.gen_range(1..=6usize);
        let mut values: Vec<BigRational> = Vec::new();
        while values.len() < m {
            let v = BigRational::new(
                rng.gen_range(-20i64..=20).into(),
                rng.gen_range(1i64..=6).into(),
            );
            if !values.contains(&v) {
                values.push(v);
            }
        }
        inverse_ok &= symfun::vandermonde_inverse(&values).is_ok();
    }
    push(
        "vandermonde inverse (200 three-way cases)",
        inverse_ok,
        &mut rows,
        &mut all,
    );

    let mut extend_ok = true;
    for m in 2..=5usize {
        let vars: Vec<MultiPoly> = (0..m - 1).map(|i| MultiPoly::var(m - 1, i)).collect();
        for gen in &symfun::elem_sym(&vars)[1..] {
            extend_ok &= symfun::symmetric_extend(gen).is_ok();
        }
    }
    push(
        "symmetric extension (generators, m <= 5)",
        extend_ok,
        &mut rows,
        &mut all,
    );

    let table = render_table(&["suite".into(), "status".into()], &rows)
        + &format!("verdict: {}\n", if all { "PASS" } else { "FAIL" });
    let json = serde_json::json!({
        "suites": rows.iter().map(|r| serde_json::json!({"name": r[0], "pass": r[1] == "PASS"}))
            .collect::<Vec<_>>(),
        "pass": all,
    });
    Ok(CmdOutput {
        exit: i32::from(!all),
        table,
        json,
    })
}

pub fn run(cli: &Cli) -> Result<CmdOutput> {
    match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Morse(a) => cmd_morse(a),
        Command::Betti(a) => cmd_betti(a),
        Command::Cohdim(a) => cmd_cohdim(a),
        Command::Thom(a) => cmd_thom(a),
        Command::Package(a) => cmd_package(a),
        Command::Slices(a) => cmd_slices(a),
        Command::Integrate(a) => cmd_integrate(a),
        Command::CrossSection(a) => cmd_cross_section(a),
        Command::Cut(a) => cmd_cut(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::AppendixCheck(a) => cmd_appendix_check(a),
    }
}

pub fn output_destination(cli: &Cli) -> (Format, Option<PathBuf>) {
    let common = |c: &CommonArgs| (c.format, c.out.clone());
    match &cli.command {
        Command::Validate(a)
        | Command::Morse(a)
        | Command::Betti(a)
        | Command::Thom(a)
        | Command::Slices(a)
        | Command::Cut(a) => common(a),
        Command::Cohdim(a) | Command::Package(a) => common(&a.common),
        Command::Integrate(a) => common(&a.common),
        Command::CrossSection(a) => common(&a.common),
        Command::Sweep(a) => common(&a.common),
        Command::AppendixCheck(a) => (a.format, a.out.clone()),
    }
}
