//! Wall-crossing: how the cross-section cohomology changes over a single
//! vertex. The crossing edges into the vertex and out of it are matched by
//! a square Vandermonde system in slope differences, giving an exact
//! transform between the membership spaces on either side, a closed formula
//! for the dimension change, and a full sweep that rebuilds the graded
//! dimensions of the graph cohomology from the bottom cross-section of the
//! level product.

use num::rational::BigRational;

use crate::cohomology::{basis_h, dim_formula, dim_h};
use crate::crosssection::{
    cross_section, kirwan, membership, membership_space_dim, CrossSection,
};
use crate::cutting::{cut_product, identification_window, product_morse};
use crate::error::{GkmError, Result};
use crate::morse::MorseData;
use crate::polyring::{format_rat, graded_dim, rat, MultiPoly};
use crate::skeleton::{Skeleton, VertexId};
use crate::symfun::{finite_coh_decompose, finite_integral, inverse_rows};

/// The data of one wall: a vertex, regular levels just below and above it,
/// the cross-sections there, and the positions of the crossing edges
/// arriving at and leaving the vertex.
pub struct WallData {
    pub vertex: VertexId,
    /// Index of the vertex: the number of arriving crossing edges.
    pub r: usize,
    /// Departing crossing edges, `valence - r`.
    pub s: usize,
    pub c_low: BigRational,
    pub c_high: BigRational,
    pub cs_low: CrossSection,
    pub cs_high: CrossSection,
    /// Member indices in `cs_low` of the edges arriving at the vertex.
    pub delta_low: Vec<usize>,
    /// Member indices in `cs_high` of the edges leaving the vertex.
    pub delta_high: Vec<usize>,
}

impl WallData {
    pub fn extremal(&self) -> bool {
        self.r == 0 || self.s == 0
    }

    fn beta_forms(&self, cs: &CrossSection, delta: &[usize]) -> Vec<MultiPoly> {
        delta
            .iter()
            .map(|&i| cs.pb.beta_form(&cs.slopes[i].1))
            .collect()
    }

    pub fn tau_low(&self) -> Vec<MultiPoly> {
        self.beta_forms(&self.cs_low, &self.delta_low)
    }

    pub fn tau_high(&self) -> Vec<MultiPoly> {
        self.beta_forms(&self.cs_high, &self.delta_high)
    }
}

/// Picks the regular levels around a vertex (midpoints to the neighboring
/// Morse values, or one unit beyond at the ends) and assembles the wall.
pub fn wall_data(s: &Skeleton, md: &MorseData, p: VertexId) -> Result<WallData> {
    let mut values: Vec<&BigRational> = md.phi.iter().collect();
    values.sort();
    let pos = values
        .binary_search(&&md.phi[p])
        .map_err(|_| GkmError::Invalid("vertex Morse value missing".into()))?;
    let c_low = if pos == 0 {
        &md.phi[p] - rat(1)
    } else {
        (values[pos - 1] + &md.phi[p]) / rat(2)
    };
    let c_high = if pos + 1 == values.len() {
        &md.phi[p] + rat(1)
    } else {
        (&md.phi[p] + values[pos + 1]) / rat(2)
    };
    let cs_low = cross_section(s, md, &c_low)?;
    let cs_high = cross_section(s, md, &c_high)?;
    let delta_low: Vec<usize> = cs_low
        .members
        .iter()
        .enumerate()
        .filter(|(_, &e)| s.edge(e).dst == p)
        .map(|(i, _)| i)
        .collect();
    let delta_high: Vec<usize> = cs_high
        .members
        .iter()
        .enumerate()
        .filter(|(_, &e)| s.edge(e).src == p)
        .map(|(i, _)| i)
        .collect();
    let r = md.sigma[p];
    if delta_low.len() != r || delta_high.len() != s.valence() - r {
        return Err(GkmError::Invalid(
            "crossing edges at the wall disagree with the vertex index".into(),
        ));
    }
    Ok(WallData {
        vertex: p,
        r,
        s: s.valence() - r,
        c_low,
        c_high,
        cs_low,
        cs_high,
        delta_low,
        delta_high,
    })
}

/// The restriction of a lower-level member to the arriving edges decomposes
/// in powers of their slope values (their common vertex makes the values
/// distinct). Vacuously true for a single arriving edge.
pub fn restrict_delta_check(wd: &WallData, f_low: &[MultiPoly]) -> Result<bool> {
    let taus = wd.tau_low();
    let g: Vec<MultiPoly> = wd.delta_low.iter().map(|&i| f_low[i].clone()).collect();
    Ok(finite_coh_decompose(&taus, &g)?.is_some())
}

/// Which side of the wall the known map lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WallSide {
    Low,
    High,
}

/// Solves the wall equation: the known side's map plus its slope-power
/// corrections determine the other side's map and corrections uniquely, one
/// square Vandermonde system per departing edge. Inputs are checked for
/// membership (on the cross-section, and the corrections on the arriving
/// set), the solution is certified by re-substitution, and the outputs are
/// checked for membership as well.
pub fn cross_transform(
    s: &Skeleton,
    md: &MorseData,
    wd: &WallData,
    side: WallSide,
    f: &[MultiPoly],
    corrections: &[Vec<MultiPoly>],
) -> Result<(Vec<MultiPoly>, Vec<Vec<MultiPoly>>)> {
    if wd.extremal() {
        return Err(GkmError::Invalid(
            "the transform needs 1 <= index <= valence - 1".into(),
        ));
    }
    let (cs_known, cs_out, delta_known, delta_out, n_in) = match side {
        WallSide::Low => (&wd.cs_low, &wd.cs_high, &wd.delta_low, &wd.delta_high, wd.s),
        WallSide::High => (&wd.cs_high, &wd.cs_low, &wd.delta_high, &wd.delta_low, wd.r),
    };
    assert_eq!(f.len(), cs_known.members.len());
    assert_eq!(corrections.len(), n_in.saturating_sub(1));
    let taus_known = wd.beta_forms(cs_known, delta_known);
    let taus_out = wd.beta_forms(cs_out, delta_out);

    // input memberships are asserted, not assumed
    if !membership(s, md, cs_known, f)?.ok {
        return Err(GkmError::Invalid(
            "wall transform input is not a member on its side".into(),
        ));
    }
    for (i, fi) in corrections.iter().enumerate() {
        assert_eq!(fi.len(), delta_known.len());
        if finite_coh_decompose(&taus_known, fi)?.is_none() {
            return Err(GkmError::Invalid(format!(
                "correction {} is not in the arriving-set cohomology",
                i + 1
            )));
        }
    }

    let nv = cs_known.pb.y_dim().max(1);
    // pass-through values: crossing edges present on both sides
    let mut out_values = vec![MultiPoly::zero(nv); cs_out.members.len()];
    for (j, &e) in cs_out.members.iter().enumerate() {
        if let Some(&i) = cs_known.member_index.get(&e) {
            out_values[j] = f[i].clone();
        }
    }

    // unknowns per solve: the out-side value and |delta_known| - 1 corrections
    let mut out_corrections =
        vec![vec![MultiPoly::zero(nv); delta_out.len()]; delta_known.len().saturating_sub(1)];
    for (col, &out_member) in delta_out.iter().enumerate() {
        // Vandermonde values follow the arriving-minus-departing convention
        let x_vals: Vec<MultiPoly> = taus_known
            .iter()
            .map(|t| match side {
                WallSide::Low => t.sub(&taus_out[col]),
                WallSide::High => taus_out[col].sub(t),
            })
            .collect();
        for (i, x) in x_vals.iter().enumerate() {
            if x.is_zero() {
                return Err(GkmError::GenericityViolation(format!(
                    "slope difference vanishes between arriving edge {i} and a departing edge"
                )));
            }
        }
        // right-hand side: known value plus its power corrections
        let rhs: Vec<MultiPoly> = delta_known
            .iter()
            .enumerate()
            .map(|(i, &mem)| {
                let mut acc = f[mem].clone();
                let mut pow = MultiPoly::one(nv);
                for fi in corrections {
                    pow = pow.mul(&x_vals[i]);
                    acc = acc.add(&fi[i].mul(&pow));
                }
                acc
            })
            .collect();
        // unknown k reads off row k+1 of the closed-form inverse
        let rows = inverse_rows(&x_vals);
        let mut solved = Vec::with_capacity(x_vals.len());
        for row in rows.iter() {
            let weighted: Vec<MultiPoly> = rhs
                .iter()
                .zip(&x_vals)
                .map(|(b, x)| b.mul(&row.eval(x)))
                .collect();
            let u = finite_integral(&x_vals, &weighted)?;
            let poly = u.as_poly().cloned().ok_or_else(|| {
                GkmError::Invalid("wall solution failed to be polynomial".into())
            })?;
            solved.push(poly);
        }
        // certify the unique solution by re-substitution
        for (i, x) in x_vals.iter().enumerate() {
            let mut acc = MultiPoly::zero(nv);
            let mut pow = MultiPoly::one(nv);
            for u in &solved {
                acc = acc.add(&u.mul(&pow));
                pow = pow.mul(x);
            }
            if acc != rhs[i] {
                return Err(GkmError::Invalid(
                    "wall solution fails re-substitution".into(),
                ));
            }
        }
        out_values[out_member] = solved[0].clone();
        for (j, u) in solved.into_iter().enumerate().skip(1) {
            out_corrections[j - 1][col] = u;
        }
    }

    // the outputs are members on their side (the existence claim)
    if !membership(s, md, cs_out, &out_values)?.ok {
        return Err(GkmError::Invalid(
            "wall transform output fails membership".into(),
        ));
    }
    for fj in &out_corrections {
        if finite_coh_decompose(&taus_out, fj)?.is_none() {
            return Err(GkmError::Invalid(
                "wall output correction fails the departing-set cohomology".into(),
            ));
        }
    }
    Ok((out_values, out_corrections))
}

/// The closed-form dimension change over a wall of index `r` in a
/// `d`-valent skeleton, at polynomial degree `m` over `y_dim` slope
/// variables: the departing block enters, the arriving block leaves.
pub fn dim_delta(r: usize, s: usize, y_dim: usize, m: u32) -> i64 {
    let block = |count: usize| -> i64 {
        (0..count)
            .map(|k| graded_dim(m as i64 - k as i64, y_dim) as i64)
            .sum()
    };
    block(s) - block(r)
}

/// The telescoping identity behind the sweep: partial Betti sums collapse
/// to single Betti numbers under the palindrome symmetry.
pub fn bracket_identity(betti: &[usize]) -> bool {
    let d = betti.len() - 1;
    (0..=d).all(|k| {
        let first: i64 = betti[..=(d - k)].iter().map(|&b| b as i64).sum();
        let second: i64 = betti[(k + 1)..].iter().map(|&b| b as i64).sum();
        first - second == betti[k] as i64
    })
}

/// How much per-wall verification the sweep performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVerify {
    /// Accumulate the closed-form changes only.
    FormulaOnly,
    /// Additionally push one restricted class across every interior wall.
    Transform,
    /// Additionally recompute the membership-space dimension on both sides
    /// of every wall and compare with the closed form.
    PerWallDims,
}

#[derive(Debug)]
pub struct WallStep {
    pub vertex: String,
    pub index: usize,
    pub change: i64,
    pub running: i64,
}

#[derive(Debug)]
pub struct SweepReport {
    pub degree: u32,
    pub start: usize,
    pub steps: Vec<WallStep>,
    pub total: i64,
    pub dim_direct: usize,
    pub dim_formula: usize,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.total >= 0
            && self.total as usize == self.dim_direct
            && self.dim_direct == self.dim_formula
    }
}

/// Rebuilds the degree-`m` dimension of the graph cohomology by sweeping
/// the level product from just above its bottom vertex to the window where
/// the cross-section is the graph itself, accumulating the dimension change
/// at every wall, and compares the total against the direct nullspace count
/// and the Betti formula.
pub fn dim_by_sweep(
    s: &Skeleton,
    md: &MorseData,
    m: u32,
    verify: SweepVerify,
) -> Result<SweepReport> {
    let ps = cut_product(s, md, None)?;
    let md_flat = product_morse(&ps, md);
    let n = s.ctx.dim; // slope variables of the product
    let start: usize = (0..=s.valence())
        .map(|k| graded_dim(m as i64 - k as i64, n))
        .sum();

    // walls: the level-zero copies except the bottom vertex, in Morse order
    let base_min = (0..s.n_vertices())
        .min_by(|&a, &b| md.phi[a].cmp(&md.phi[b]))
        .unwrap();
    let mut walls: Vec<VertexId> = (0..s.n_vertices())
        .filter(|&v| v != base_min)
        .map(|v| ps.lift_id(v, 0))
        .collect();
    walls.sort_by(|&a, &b| md_flat.phi[a].cmp(&md_flat.phi[b]));

    let transform_basis = if verify == SweepVerify::Transform || verify == SweepVerify::PerWallDims
    {
        basis_h(&ps.product, 1).into_iter().next()
    } else {
        None
    };

    let mut steps = Vec::with_capacity(walls.len());
    let mut running = start as i64;
    for v in walls {
        let wd = wall_data(&ps.product, &md_flat, v)?;
        let (base_v, _) = ps.split(v);
        if wd.r != md.sigma[base_v] {
            return Err(GkmError::Invalid(
                "product wall index disagrees with the base index".into(),
            ));
        }
        let change = dim_delta(wd.r, wd.s, n, m);
        if verify != SweepVerify::FormulaOnly && !wd.extremal() {
            if let Some(h) = &transform_basis {
                let restricted = kirwan(&ps.product, &wd.cs_low, &h.values)?;
                let corrections = vec![vec![MultiPoly::zero(n.max(1)); wd.r]; wd.s - 1];
                cross_transform(
                    &ps.product,
                    &md_flat,
                    &wd,
                    WallSide::Low,
                    &restricted,
                    &corrections,
                )?;
            }
        }
        if verify == SweepVerify::PerWallDims {
            let below = membership_space_dim(&ps.product, &md_flat, &wd.cs_low, m)? as i64;
            let above = membership_space_dim(&ps.product, &md_flat, &wd.cs_high, m)? as i64;
            if above - below != change {
                return Err(GkmError::Invalid(format!(
                    "wall at {} changes the dimension by {} but the formula says {}",
                    ps.product.vertex_name(v),
                    above - below,
                    change
                )));
            }
            if running != below {
                return Err(GkmError::Invalid(format!(
                    "running dimension {} does not match the measured {} below {}",
                    running,
                    below,
                    ps.product.vertex_name(v)
                )));
            }
        }
        running += change;
        steps.push(WallStep {
            vertex: ps.product.vertex_name(v).to_string(),
            index: wd.r,
            change,
            running,
        });
    }

    // closing the loop: the final window realizes the graph itself
    if verify == SweepVerify::PerWallDims {
        let (lo, hi) = identification_window(&ps, &md_flat);
        let c = (&lo + &hi) / rat(2);
        let cs = cross_section(&ps.product, &md_flat, &c)?;
        let window_dim = membership_space_dim(&ps.product, &md_flat, &cs, m)? as i64;
        if window_dim != running {
            return Err(GkmError::Invalid(format!(
                "window dimension {window_dim} differs from the swept total {running} at level {}",
                format_rat(&c)
            )));
        }
    }

    Ok(SweepReport {
        degree: m,
        start,
        steps,
        total: running,
        dim_direct: dim_h(s, m),
        dim_formula: dim_formula(&md.betti, m, s.ctx.dim),
    })
}
