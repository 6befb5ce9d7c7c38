//! Level-set cross-sections: the set of edges crossing a regular level is
//! the vertex set of a hypergraph whose hyperedges are cut out by the plane
//! slices of the skeleton. Classes restrict to the cross-section through the
//! slope substitution (the Kirwan map), integration against the reciprocal
//! density of each crossing edge stays polynomial on restricted classes, and
//! membership in the cross-section cohomology is decided hyperedge by
//! hyperedge through finite Vandermonde decompositions.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{GkmError, Result};
use crate::morse::MorseData;
use crate::polyring::{
    format_rat, monomials_of_degree, MultiPoly, RatMatrix, RationalFn, SpaceCtx, Vector,
};
use crate::skeleton::{
    enumerate_2d_subspaces, reversed, subskeleton, EdgeId, InducedComponent, Skeleton, Subspace,
};
use crate::symfun::finite_coh_decompose;

/// An adapted basis for a polarizing vector: a covector `x` with `x(xi) = 1`
/// and a basis `y` of the annihilator of `xi`. Every label with nonzero
/// pairing decomposes as `alpha = m (x - beta)` with `beta` in the span of
/// `y`; restricted values live in the `y` coordinates.
pub struct PolarizedBasis {
    pub xi: Vector,
    pub x: Vector,
    pub y: Vec<Vector>,
    pub y_ctx: SpaceCtx,
    /// Inverse of the matrix whose columns are `(x, y_1, ..)`.
    basis_inv: RatMatrix,
}

impl PolarizedBasis {
    pub fn new(ctx: &SpaceCtx, xi: &Vector) -> Result<Self> {
        if xi.is_zero() {
            return Err(GkmError::ZeroVector);
        }
        let n = ctx.dim;
        let norm2 = xi.dot(xi);
        let x = xi.scale(&(BigRational::one() / norm2));
        let (_, kernel) = RatMatrix::new(vec![xi.coords.clone()], n).nullspace();
        let y: Vec<Vector> = kernel.into_iter().map(Vector::new).collect();
        debug_assert_eq!(y.len(), n - 1);
        let mut cols = vec![x.clone()];
        cols.extend(y.iter().cloned());
        let basis = RatMatrix::new(
            (0..n)
                .map(|i| cols.iter().map(|c| c.coords[i].clone()).collect())
                .collect(),
            n,
        );
        let basis_inv = basis
            .inverse()
            .expect("polarized basis is invertible by construction");
        let y_ctx = SpaceCtx::new(
            (n - 1).max(1),
            if n == 1 {
                vec!["y1".into()] // degenerate: the annihilator is zero
            } else {
                (1..n).map(|i| format!("y{i}")).collect()
            },
        )?;
        Ok(PolarizedBasis {
            xi: xi.clone(),
            x,
            y,
            y_ctx,
            basis_inv,
        })
    }

    pub fn y_dim(&self) -> usize {
        self.y.len()
    }

    /// Coordinates of a covector in the `y` basis; `None` when it has a
    /// component along `x` (is not in the annihilator).
    pub fn y_coords(&self, v: &Vector) -> Option<Vec<BigRational>> {
        let coords = self.coords_in_basis(v);
        if !coords[0].is_zero() {
            return None;
        }
        Some(coords[1..].to_vec())
    }

    /// Slope data of a label: the pairing `m = alpha(xi)` and the
    /// coordinates of `beta = x - alpha/m` in the `y` basis. `beta` is
    /// orientation-invariant.
    pub fn slope(&self, alpha: &Vector) -> Result<(BigRational, Vec<BigRational>)> {
        let m = alpha.dot(&self.xi);
        if m.is_zero() {
            return Err(GkmError::Invalid(
                "slope of a label annihilated by xi".into(),
            ));
        }
        let beta = self.x.sub(&alpha.scale(&(BigRational::one() / &m)));
        let coords = self.coords_in_basis(&beta);
        debug_assert!(coords[0].is_zero());
        Ok((m, coords[1..].to_vec()))
    }

    fn coords_in_basis(&self, v: &Vector) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(v.dim());
        for row in &self.basis_inv.rows {
            let mut acc = BigRational::zero();
            for (c, x) in row.iter().zip(&v.coords) {
                acc += c * x;
            }
            out.push(acc);
        }
        out
    }

    /// The linear form of `beta` in the `y` context.
    pub fn beta_form(&self, beta: &[BigRational]) -> MultiPoly {
        let nv = self.y_dim().max(1);
        let mut coords = vec![BigRational::zero(); nv];
        coords[..beta.len()].clone_from_slice(beta);
        MultiPoly::linear_form(&Vector::new(coords))
    }

    /// Variable images of the restriction at a crossing edge with slope
    /// `beta`: the generator `x` goes to the beta form, the `y` generators
    /// stay.
    pub fn kirwan_images(&self, beta: &[BigRational]) -> Vec<MultiPoly> {
        let n = self.x.dim();
        let nv = self.y_dim().max(1);
        let beta_form = self.beta_form(beta);
        (0..n)
            .map(|i| {
                // x_i = sum_k (B^-1)[k][i] * basis_k
                let mut img = beta_form.scale(&self.basis_inv.rows[0][i]);
                for j in 1..n {
                    let c = &self.basis_inv.rows[j][i];
                    if !c.is_zero() {
                        img = img.add(&MultiPoly::var(nv, j - 1).scale(c));
                    }
                }
                img
            })
            .collect()
    }

    /// Restriction of an ambient polynomial at a crossing edge.
    pub fn restrict_at(&self, f: &MultiPoly, beta: &[BigRational]) -> MultiPoly {
        f.subst_all(&self.kirwan_images(beta))
    }

    /// Lifts a polynomial in the `y` coordinates back into the ambient ring
    /// (each `y` generator is an ambient covector).
    pub fn lift(&self, p: &MultiPoly) -> MultiPoly {
        let n = self.x.dim();
        let images: Vec<MultiPoly> = self
            .y
            .iter()
            .map(MultiPoly::linear_form)
            .chain(std::iter::once(MultiPoly::zero(n)))
            .take(p.nvars())
            .collect();
        p.subst_all(&images)
    }

    /// The ambient linear form of the `x` covector.
    pub fn x_form(&self) -> MultiPoly {
        MultiPoly::linear_form(&self.x)
    }
}

/// One hyperedge of the cross-section hypergraph: the crossing edges of a
/// connected plane-slice component, its multiplicity (component valence
/// minus one), and the primitive line label spanning the intersection of
/// the plane with the annihilator of `xi`.
pub struct Hyperedge {
    pub subspace: Subspace,
    /// Indices into the member list of the cross-section.
    pub members: Vec<usize>,
    pub multiplicity: usize,
    pub label: Vector,
    pub component: InducedComponent,
    /// All members share a single lower endpoint or a single upper endpoint
    /// (then the slope values are distinct and the hyperedge cohomology is
    /// exactly the slope-power space).
    pub star: bool,
    /// The slope values of the members are pairwise distinct. Fails exactly
    /// when parallel component edges cross the same level, which happens at
    /// levels through the middle of a component.
    pub injective: bool,
}

/// A regular level set: the crossing edges (oriented upward), their slopes,
/// and the hyperedges with multiplicity at least one member pair.
pub struct CrossSection {
    pub level: BigRational,
    pub pb: PolarizedBasis,
    /// Upward-oriented crossing edge ids, sorted.
    pub members: Vec<EdgeId>,
    pub member_index: BTreeMap<EdgeId, usize>,
    /// Per member: `(m, beta)` with `m > 0`.
    pub slopes: Vec<(BigRational, Vec<BigRational>)>,
    pub hyperedges: Vec<Hyperedge>,
    /// Crossing sets of cardinality one (no constraint, but they carry
    /// multiplicity for the incidence count).
    pub singletons: usize,
}

impl CrossSection {
    pub fn tau_forms(&self, he: &Hyperedge) -> Vec<MultiPoly> {
        he.members
            .iter()
            .map(|&i| self.pb.beta_form(&self.slopes[i].1))
            .collect()
    }
}

/// Builds the cross-section at a regular level: members are the edges whose
/// endpoint Morse values straddle `c`, hyperedges come from the connected
/// components of every plane slice, and the per-vertex incidence count
/// (sum of multiplicities = valence - 1) is verified.
pub fn cross_section(s: &Skeleton, md: &MorseData, c: &BigRational) -> Result<CrossSection> {
    if md.phi.contains(c) {
        return Err(GkmError::CriticalLevel(format_rat(c)));
    }
    let pb = PolarizedBasis::new(&s.ctx, &md.xi)?;
    let mut members = Vec::new();
    for rep in s.unoriented() {
        let e = if md.up[rep] { rep } else { reversed(rep) };
        let (src, dst) = (s.edge(e).src, s.edge(e).dst);
        if md.phi[src] < *c && *c < md.phi[dst] {
            members.push(e);
        }
    }
    members.sort_unstable();
    let member_index: BTreeMap<EdgeId, usize> =
        members.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let slopes = members
        .iter()
        .map(|&e| pb.slope(s.alpha(e)))
        .collect::<Result<Vec<_>>>()?;

    let mut hyperedges = Vec::new();
    let mut singletons = 0usize;
    let mut incidence = vec![0usize; members.len()];
    for h in enumerate_2d_subspaces(s) {
        // the line where the plane meets the annihilator of xi
        let b = h.basis();
        let label = b[0]
            .scale(&b[1].dot(&md.xi))
            .sub(&b[1].scale(&b[0].dot(&md.xi)));
        if label.is_zero() {
            return Err(GkmError::GenericityViolation(
                "plane slice contained in the annihilator of xi".into(),
            ));
        }
        let label = label.primitive();
        for comp in subskeleton(s, &h) {
            let valence = comp
                .valence()
                .ok_or_else(|| GkmError::IrregularComponent(comp.valences.clone()))?;
            let crossing: Vec<usize> = comp
                .edge_reps
                .iter()
                .filter_map(|&rep| {
                    member_index
                        .get(&rep)
                        .or_else(|| member_index.get(&reversed(rep)))
                        .copied()
                })
                .collect();
            if crossing.is_empty() {
                continue;
            }
            for &i in &crossing {
                incidence[i] += valence - 1;
            }
            if crossing.len() == 1 {
                singletons += 1;
                continue;
            }
            let mut seen: BTreeMap<Vec<BigRational>, usize> = BTreeMap::new();
            let mut injective = true;
            for &i in &crossing {
                if seen.insert(slopes[i].1.clone(), i).is_some() {
                    injective = false;
                }
            }
            let share = |pick: fn(&crate::skeleton::Edge) -> usize| {
                let mut it = crossing.iter().map(|&i| pick(s.edge(members[i])));
                let first = it.next().unwrap();
                it.all(|v| v == first)
            };
            let star = share(|e| e.src) || share(|e| e.dst);
            if star && !injective {
                return Err(GkmError::GenericityViolation(
                    "coincident slopes at a single vertex".into(),
                ));
            }
            hyperedges.push(Hyperedge {
                subspace: h.clone(),
                members: crossing,
                multiplicity: valence - 1,
                label: label.clone(),
                component: comp,
                star,
                injective,
            });
        }
    }
    for (i, &count) in incidence.iter().enumerate() {
        if count != s.valence() - 1 {
            return Err(GkmError::Invalid(format!(
                "incidence count {count} != valence - 1 at crossing edge {}",
                members[i]
            )));
        }
    }
    Ok(CrossSection {
        level: c.clone(),
        pb,
        members,
        member_index,
        slopes,
        hyperedges,
        singletons,
    })
}

/// Restriction of a class to the cross-section: at each crossing edge,
/// substitute the slope for the polarized generator. The images from the
/// two endpoint values must agree; a mismatch means the input was not a
/// class and is raised as an inconsistency.
pub fn kirwan(
    s: &Skeleton,
    cs: &CrossSection,
    values: &[MultiPoly],
) -> Result<Vec<MultiPoly>> {
    let mut out = Vec::with_capacity(cs.members.len());
    for (i, &e) in cs.members.iter().enumerate() {
        let (src, dst) = (s.edge(e).src, s.edge(e).dst);
        let from_src = cs.pb.restrict_at(&values[src], &cs.slopes[i].1);
        let from_dst = cs.pb.restrict_at(&values[dst], &cs.slopes[i].1);
        if from_src != from_dst {
            return Err(GkmError::Invalid(format!(
                "restriction mismatch at crossing edge {} -> {}: input is not a class",
                s.vertex_name(src),
                s.vertex_name(dst)
            )));
        }
        out.push(from_src);
    }
    Ok(out)
}

/// The reciprocal density at a crossing edge: one over `m_e` times the
/// product of the restricted labels of the other edges at the lower
/// endpoint. Each restricted label is `m_i (beta_e - beta_i)`, a nonzero
/// linear form by pairwise independence.
pub fn density(s: &Skeleton, cs: &CrossSection, member: usize) -> Result<RationalFn> {
    let e = cs.members[member];
    let p = s.edge(e).src;
    let (m_e, beta_e) = &cs.slopes[member];
    debug_assert!(m_e.is_positive());
    let mut scalar = m_e.clone();
    let mut factors: Vec<(Vector, u32)> = Vec::new();
    for &ei in s.out_edges(p) {
        if ei == e {
            continue;
        }
        let (m_i, beta_i) = cs.pb.slope(s.alpha(ei))?;
        scalar *= m_i;
        let diff: Vec<BigRational> = beta_e
            .iter()
            .zip(&beta_i)
            .map(|(a, b)| a - b)
            .collect();
        let nv = cs.pb.y_dim().max(1);
        let mut coords = vec![BigRational::zero(); nv];
        coords[..diff.len()].clone_from_slice(&diff);
        let v = Vector::new(coords);
        if v.is_zero() {
            return Err(GkmError::GenericityViolation(
                "restricted label vanishes at a crossing edge".into(),
            ));
        }
        factors.push((v, 1));
    }
    let nv = cs.pb.y_dim().max(1);
    Ok(RationalFn::over_linear_factors(
        MultiPoly::constant(nv, BigRational::one() / scalar),
        &factors,
    ))
}

/// Integration over the cross-section: the density-weighted sum of the
/// values at the crossing edges.
pub fn integrate_c(s: &Skeleton, cs: &CrossSection, values: &[RationalFn]) -> Result<RationalFn> {
    assert_eq!(values.len(), cs.members.len());
    let nv = cs.pb.y_dim().max(1);
    let mut total = RationalFn::zero(nv);
    for (i, value) in values.iter().enumerate() {
        total = total.add(&density(s, cs, i)?.mul(value));
    }
    Ok(total)
}

pub fn integrate_c_polys(
    s: &Skeleton,
    cs: &CrossSection,
    values: &[MultiPoly],
) -> Result<RationalFn> {
    let lifted: Vec<RationalFn> = values
        .iter()
        .map(|p| RationalFn::from_poly(p.clone()))
        .collect();
    integrate_c(s, cs, &lifted)
}

/// How a hyperedge verdict was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyperedgeRoute {
    /// Exact decomposition in powers of the slope values (vertex-star
    /// hyperedges, where the slope values are distinct and the power space
    /// is the hyperedge cohomology).
    PowerBasis,
    /// Exact span test against the restrictions of the component's own
    /// classes (valid at every level; the restriction map is onto the
    /// hyperedge cohomology).
    KirwanSpan,
}

#[derive(Debug)]
pub struct MembershipReport {
    /// Per hyperedge: index, verdict, and the route that decided it.
    pub verdicts: Vec<(usize, bool, HyperedgeRoute)>,
    pub ok: bool,
}

/// The component of a hyperedge as a skeleton of its own, with its
/// cross-section at the same level; `positions[i]` locates the component's
/// `i`-th crossing edge inside `he.members`.
pub struct ComponentSection {
    pub skeleton: Skeleton,
    pub md: MorseData,
    pub cs: CrossSection,
    pub positions: Vec<usize>,
}

pub fn component_section(
    s: &Skeleton,
    md: &MorseData,
    cs: &CrossSection,
    he: &Hyperedge,
) -> Result<ComponentSection> {
    let skeleton = he
        .component
        .skeleton
        .clone()
        .ok_or_else(|| GkmError::IrregularComponent(he.component.valences.clone()))?;
    let sub_md = md.restrict_to(s, &skeleton);
    let sub_cs = cross_section(&skeleton, &sub_md, &cs.level)?;
    if sub_cs.members.len() != he.members.len() {
        return Err(GkmError::Invalid(
            "component crossing set does not match the hyperedge".into(),
        ));
    }
    let mut positions = Vec::with_capacity(sub_cs.members.len());
    for &ce in &sub_cs.members {
        let src = s
            .vertex_id(skeleton.vertex_name(skeleton.edge(ce).src))
            .unwrap();
        let dst = s
            .vertex_id(skeleton.vertex_name(skeleton.edge(ce).dst))
            .unwrap();
        let parent_edge = s.find_edge(src, dst).unwrap();
        let pos = he
            .members
            .iter()
            .position(|&mi| {
                cs.members[mi] == parent_edge || cs.members[mi] == reversed(parent_edge)
            })
            .ok_or_else(|| GkmError::Invalid("hyperedge member alignment failed".into()))?;
        positions.push(pos);
    }
    Ok(ComponentSection {
        skeleton,
        md: sub_md,
        cs: sub_cs,
        positions,
    })
}

/// Restrictions of a degree-`m` class basis of the component to the
/// hyperedge, as coefficient vectors aligned with `he.members`.
fn component_image_vectors(
    s: &Skeleton,
    md: &MorseData,
    cs: &CrossSection,
    he: &Hyperedge,
    m: u32,
) -> Result<Vec<Vec<BigRational>>> {
    let section = component_section(s, md, cs, he)?;
    let nv = cs.pb.y_dim().max(1);
    let monomials = monomials_of_degree(nv, m);
    let mut vectors = Vec::new();
    for b in crate::cohomology::basis_h(&section.skeleton, m) {
        let image = kirwan(&section.skeleton, &section.cs, &b.values)?;
        let mut row = vec![BigRational::zero(); he.members.len() * monomials.len()];
        for (ci, val) in image.iter().enumerate() {
            let slot = section.positions[ci];
            for (t, mon) in monomials.iter().enumerate() {
                row[slot * monomials.len() + t] = val.coeff(mon);
            }
        }
        vectors.push(row);
    }
    Ok(vectors)
}

fn common_degree(values: &[MultiPoly]) -> Result<Option<u32>> {
    let mut degree = None;
    for v in values {
        if !v.is_homogeneous() {
            return Err(GkmError::Invalid(
                "membership needs homogeneous values of one degree".into(),
            ));
        }
        if let Some(d) = v.degree() {
            if *degree.get_or_insert(d) != d {
                return Err(GkmError::Invalid(
                    "membership needs homogeneous values of one degree".into(),
                ));
            }
        }
    }
    Ok(degree)
}

/// Membership in the cross-section cohomology, decided hyperedge by
/// hyperedge. Star hyperedges (all members at one vertex) decompose exactly
/// in powers of the slope values; the rest are decided by the span of the
/// component's restricted classes. Values must be homogeneous of one degree.
pub fn membership(
    s: &Skeleton,
    md: &MorseData,
    cs: &CrossSection,
    values: &[MultiPoly],
) -> Result<MembershipReport> {
    assert_eq!(values.len(), cs.members.len());
    let degree = common_degree(values)?;
    let mut verdicts = Vec::with_capacity(cs.hyperedges.len());
    let mut ok = true;
    for (idx, he) in cs.hyperedges.iter().enumerate() {
        let g: Vec<MultiPoly> = he.members.iter().map(|&i| values[i].clone()).collect();
        let (verdict, route) = if he.star {
            let taus = cs.tau_forms(he);
            (
                finite_coh_decompose(&taus, &g)?.is_some(),
                HyperedgeRoute::PowerBasis,
            )
        } else {
            let m = match degree {
                Some(m) => m,
                None => {
                    verdicts.push((idx, true, HyperedgeRoute::KirwanSpan));
                    continue; // zero restriction is always a member
                }
            };
            let nv = cs.pb.y_dim().max(1);
            let monomials = monomials_of_degree(nv, m);
            let span = component_image_vectors(s, md, cs, he, m)?;
            let mut target = vec![BigRational::zero(); he.members.len() * monomials.len()];
            for (slot, gv) in g.iter().enumerate() {
                for (t, mon) in monomials.iter().enumerate() {
                    target[slot * monomials.len() + t] = gv.coeff(mon);
                }
            }
            let base_rank = RatMatrix::new(span.clone(), target.len()).rank();
            let mut augmented = span;
            augmented.push(target);
            let aug_rank = RatMatrix::new(augmented, he.members.len() * monomials.len()).rank();
            (aug_rank == base_rank, HyperedgeRoute::KirwanSpan)
        };
        ok &= verdict;
        verdicts.push((idx, verdict, route));
    }
    Ok(MembershipReport { verdicts, ok })
}

/// The hyperedges whose line label is parallel to `gamma`, together with
/// the verdict that no two of them share a crossing edge.
pub fn gamma_slice(cs: &CrossSection, gamma: &Vector) -> Result<(Vec<usize>, bool)> {
    if gamma.is_zero() {
        return Err(GkmError::ZeroVector);
    }
    let selected: Vec<usize> = cs
        .hyperedges
        .iter()
        .enumerate()
        .filter(|(_, he)| he.label.is_parallel(gamma))
        .map(|(i, _)| i)
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut disjoint = true;
    for &i in &selected {
        for &m in &cs.hyperedges[i].members {
            if !seen.insert(m) {
                disjoint = false;
            }
        }
    }
    Ok((selected, disjoint))
}

/// Dimension of the degree-`m` membership space by exact nullspace: the
/// unknowns are the value coefficients at each crossing edge, and every
/// hyperedge contributes the linear conditions cutting out the span of its
/// component's restricted classes (the annihilator of that span).
pub fn membership_space_dim(
    s: &Skeleton,
    md: &MorseData,
    cs: &CrossSection,
    m: u32,
) -> Result<usize> {
    let nv = cs.pb.y_dim().max(1);
    let lm = monomials_of_degree(nv, m).len();
    let ncols = cs.members.len() * lm;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for he in &cs.hyperedges {
        let span = component_image_vectors(s, md, cs, he, m)?;
        let width = he.members.len() * lm;
        let (_, annihilator) = RatMatrix::new(span, width).nullspace();
        for w in annihilator {
            let mut row = vec![BigRational::zero(); ncols];
            for (slot, &mem) in he.members.iter().enumerate() {
                for t in 0..lm {
                    row[mem * lm + t] = w[slot * lm + t].clone();
                }
            }
            rows.push(row);
        }
    }
    let (dim, _) = RatMatrix::new(rows, ncols).nullspace();
    Ok(dim)
}

/// Helper for tests and the wall module: the Kirwan restriction of a class
/// known by its vertex values, after checking it really is a class on `s`.
pub fn kirwan_class(
    s: &Skeleton,
    cs: &CrossSection,
    class: &crate::cohomology::CohClass,
) -> Result<Vec<MultiPoly>> {
    kirwan(s, cs, &class.values)
}
