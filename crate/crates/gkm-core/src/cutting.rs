//! The product of a skeleton with a single edge: one copy of the graph at
//! each of two levels, joined by vertical edges carrying a fresh unit
//! covector. The Morse function lifts with a gap larger than the original
//! spread, so the window above the top of level zero realizes the original
//! vertex set as a cross-section. This is how dimension sweeps bootstrap.

use num::rational::BigRational;
use num::{One, Zero};

use crate::crosssection::CrossSection;
use crate::error::{GkmError, Result};
use crate::morse::{is_generic, orient_and_check_acyclic, MorseData};
use crate::polyring::{rat, MultiPoly, SpaceCtx, Vector};
use crate::skeleton::{Skeleton, VertexId};

/// Vertex names of the product carry a level suffix.
fn lifted_name(base: &str, level: usize) -> String {
    format!("{base}@{level}")
}

pub struct ProductSkeleton {
    pub base: Skeleton,
    pub product: Skeleton,
    /// Level gap; exceeds the spread of the base Morse function.
    pub a: BigRational,
    pub xi_flat: Vector,
}

impl ProductSkeleton {
    /// Base vertex and level of a product vertex.
    pub fn split(&self, v: VertexId) -> (VertexId, usize) {
        let name = self.product.vertex_name(v);
        let (base, level) = name.rsplit_once('@').expect("product vertex name");
        (
            self.base.vertex_id(base).expect("base vertex"),
            level.parse().expect("level suffix"),
        )
    }

    pub fn lift_id(&self, v: VertexId, level: usize) -> VertexId {
        self.product
            .vertex_id(&lifted_name(self.base.vertex_name(v), level))
            .expect("lifted vertex")
    }
}

/// Builds the product skeleton and checks it is again a valid one-skeleton,
/// polarized and acyclic (and generic) for the lifted vector.
pub fn cut_product(
    s: &Skeleton,
    md: &MorseData,
    gap: Option<BigRational>,
) -> Result<ProductSkeleton> {
    let n = s.ctx.dim;
    let spread = rat(*md.phi0.iter().max().unwrap_or(&0) as i64);
    let a = gap.unwrap_or_else(|| &spread + rat(1));
    if a <= spread {
        return Err(GkmError::Invalid(format!(
            "level gap must exceed the Morse spread {spread}"
        )));
    }
    let mut labels = s.ctx.basis_labels.clone();
    labels.push("t".into());
    let ctx = SpaceCtx::new(n + 1, labels)?;
    let lift_vec = |v: &Vector| {
        let mut coords = v.coords.clone();
        coords.push(BigRational::zero());
        Vector::new(coords)
    };
    let mut names = Vec::with_capacity(2 * s.n_vertices());
    for v in 0..s.n_vertices() {
        names.push(lifted_name(s.vertex_name(v), 0));
        names.push(lifted_name(s.vertex_name(v), 1));
    }
    let mut unoriented = Vec::new();
    for level in 0..2 {
        for e in s.unoriented() {
            let edge = s.edge(e);
            unoriented.push((
                lifted_name(s.vertex_name(edge.src), level),
                lifted_name(s.vertex_name(edge.dst), level),
                lift_vec(&edge.alpha),
            ));
        }
    }
    let mut vertical = vec![BigRational::zero(); n + 1];
    vertical[n] = BigRational::one();
    for v in 0..s.n_vertices() {
        unoriented.push((
            lifted_name(s.vertex_name(v), 0),
            lifted_name(s.vertex_name(v), 1),
            Vector::new(vertical.clone()),
        ));
    }
    let product = Skeleton::new(ctx, names, unoriented)?;

    let mut xi_coords = md.xi.coords.clone();
    xi_coords.push(BigRational::one());
    let xi_flat = Vector::new(xi_coords);

    let report = crate::skeleton::validate_axioms(&product);
    if !report.all_pass() {
        return Err(GkmError::Invalid("product violates the axioms".into()));
    }
    if is_generic(&product, &xi_flat)?.is_err() {
        return Err(GkmError::GenericityViolation(
            "lifted vector is not generic on the product".into(),
        ));
    }
    let (_, topo) = orient_and_check_acyclic(&product, &xi_flat)?;
    if topo.is_err() {
        return Err(GkmError::Invalid("product orientation has a cycle".into()));
    }
    Ok(ProductSkeleton {
        base: s.clone(),
        product,
        a,
        xi_flat,
    })
}

/// Morse data for the product with the *lifted* function
/// `Phi(p, t) = phi(p) + a t` (not the canonical longest-path one, whose
/// level sets would interleave the two copies).
pub fn product_morse(ps: &ProductSkeleton, md: &MorseData) -> MorseData {
    let p = &ps.product;
    let up: Vec<bool> = (0..p.n_oriented_edges())
        .map(|e| num::Signed::is_positive(&p.alpha(e).dot(&ps.xi_flat)))
        .collect();
    let mut phi0 = vec![0u64; p.n_vertices()];
    let mut phi = vec![BigRational::zero(); p.n_vertices()];
    let a_int = ps.a.to_integer();
    for v in 0..p.n_vertices() {
        let (b, level) = ps.split(v);
        phi0[v] = md.phi0[b] + (level as u64) * u64::try_from(&a_int).unwrap_or(0);
        phi[v] = &md.phi[b] + &ps.a * rat(level as i64);
    }
    let sigma: Vec<usize> = (0..p.n_vertices())
        .map(|v| p.out_edges(v).iter().filter(|&&e| !up[e]).count())
        .collect();
    let mut betti = vec![0usize; p.valence() + 1];
    for &k in &sigma {
        betti[k] += 1;
    }
    MorseData {
        xi: ps.xi_flat.clone(),
        up,
        phi0,
        phi,
        sigma,
        betti,
    }
}

/// The window of levels where the cross-section of the product is a copy of
/// the base vertex set: strictly between the top of level zero and the
/// bottom of level one.
pub fn identification_window(ps: &ProductSkeleton, md: &MorseData) -> (BigRational, BigRational) {
    let mut top_of_zero: Option<BigRational> = None;
    let mut bottom_of_one: Option<BigRational> = None;
    for v in 0..ps.product.n_vertices() {
        let (_, level) = ps.split(v);
        let phi = &md.phi[v];
        if level == 0 {
            if top_of_zero.as_ref().is_none_or(|t| phi > t) {
                top_of_zero = Some(phi.clone());
            }
        } else if bottom_of_one.as_ref().is_none_or(|b| phi < b) {
            bottom_of_one = Some(phi.clone());
        }
    }
    (top_of_zero.unwrap(), bottom_of_one.unwrap())
}

fn window_members(
    ps: &ProductSkeleton,
    cs: &CrossSection,
) -> Result<Vec<VertexId>> {
    // each member must be a vertical edge; map it to its base vertex
    let mut base_of = Vec::with_capacity(cs.members.len());
    for &e in &cs.members {
        let (src_base, src_level) = ps.split(ps.product.edge(e).src);
        let (dst_base, dst_level) = ps.split(ps.product.edge(e).dst);
        if src_base != dst_base || src_level != 0 || dst_level != 1 {
            return Err(GkmError::LevelOutsideWindow(
                "cross-section is not the vertical identification".into(),
            ));
        }
        base_of.push(src_base);
    }
    if base_of.len() != ps.base.n_vertices() {
        return Err(GkmError::LevelOutsideWindow(
            "identification window misses vertices".into(),
        ));
    }
    Ok(base_of)
}

/// Transports a cross-section map through the identification window back to
/// a vertex map on the base: the ring isomorphism sends each restricted
/// generator to its horizontal part, and members correspond to base
/// vertices through the vertical edges.
pub fn rho_star(
    ps: &ProductSkeleton,
    cs: &CrossSection,
    values: &[MultiPoly],
) -> Result<Vec<MultiPoly>> {
    assert_eq!(values.len(), cs.members.len());
    let base_of = window_members(ps, cs)?;
    let n = ps.base.ctx.dim;
    // each annihilator basis covector maps to its first n coordinates
    let images: Vec<MultiPoly> = cs
        .pb
        .y
        .iter()
        .map(|y| MultiPoly::linear_form(&Vector::new(y.coords[..n].to_vec())))
        .collect();
    let mut out = vec![MultiPoly::zero(n); ps.base.n_vertices()];
    for (i, val) in values.iter().enumerate() {
        out[base_of[i]] = val.subst_all(&images);
    }
    Ok(out)
}

/// Inverse transport: a base vertex map becomes a cross-section map, with
/// each base generator sent to the coordinates of its lift into the
/// annihilator of the lifted vector.
pub fn rho_star_inv(
    ps: &ProductSkeleton,
    cs: &CrossSection,
    values: &[MultiPoly],
) -> Result<Vec<MultiPoly>> {
    assert_eq!(values.len(), ps.base.n_vertices());
    let base_of = window_members(ps, cs)?;
    let n = ps.base.ctx.dim;
    let nv = cs.pb.y_dim().max(1);
    // lift of the i-th base generator: (e_i, -xi_i), expressed in y coords
    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        let mut coords = vec![BigRational::zero(); n + 1];
        coords[i] = BigRational::one();
        coords[n] = -&ps.base_xi_coord(i);
        let lifted = Vector::new(coords);
        let y_coords = cs.pb.y_coords(&lifted).ok_or_else(|| {
            GkmError::Invalid("lifted generator misses the annihilator".into())
        })?;
        let mut form = vec![BigRational::zero(); nv];
        form[..y_coords.len()].clone_from_slice(&y_coords);
        images.push(MultiPoly::linear_form(&Vector::new(form)));
    }
    let mut out = vec![MultiPoly::zero(nv); cs.members.len()];
    for (i, &b) in base_of.iter().enumerate() {
        out[i] = values[b].subst_all(&images);
    }
    Ok(out)
}

impl ProductSkeleton {
    fn base_xi_coord(&self, i: usize) -> BigRational {
        self.xi_flat.coords[i].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::cayley_sn;
    use crate::cohomology::{basis_h, dim_h, is_class};
    use crate::crosssection::{cross_section, kirwan, membership, membership_space_dim};
    use crate::morse::{morse_data, poincare_check};
    use crate::polyring::ratq;

    fn setup() -> (Skeleton, MorseData, ProductSkeleton, MorseData) {
        let g = cayley_sn(3).unwrap();
        let md = morse_data(&g.skeleton, &g.xi).unwrap();
        let ps = cut_product(&g.skeleton, &md, None).unwrap();
        let md_flat = product_morse(&ps, &md);
        (g.skeleton, md, ps, md_flat)
    }

    #[test]
    fn product_shape_and_betti() {
        let (s, md, ps, md_flat) = setup();
        assert_eq!(ps.product.n_vertices(), 2 * s.n_vertices());
        assert_eq!(ps.product.valence(), s.valence() + 1);
        // index preservation: level 0 copies keep their index, level 1
        // copies gain one
        for v in 0..ps.product.n_vertices() {
            let (b, level) = ps.split(v);
            assert_eq!(md_flat.sigma[v], md.sigma[b] + level);
        }
        // betti convolves with (1, 1)
        for k in 0..md_flat.betti.len() {
            let expect = md.betti.get(k).copied().unwrap_or(0)
                + if k > 0 {
                    md.betti.get(k - 1).copied().unwrap_or(0)
                } else {
                    0
                };
            assert_eq!(md_flat.betti[k], expect);
        }
        assert!(poincare_check(&md_flat));
    }

    #[test]
    fn single_vertex_product() {
        let ctx = SpaceCtx::new(1, vec!["a".into()]).unwrap();
        let s = Skeleton::new(
            ctx,
            vec!["p".into(), "q".into()],
            vec![("p".into(), "q".into(), Vector::from_ints(&[1]))],
        )
        .unwrap();
        let md = morse_data(&s, &Vector::from_ints(&[1])).unwrap();
        let ps = cut_product(&s, &md, None).unwrap();
        assert_eq!(ps.product.valence(), 2);
        assert_eq!(ps.product.n_vertices(), 4);
    }

    #[test]
    fn gap_too_small_is_rejected() {
        let (s, md, _, _) = setup();
        assert!(cut_product(&s, &md, Some(rat(2))).is_err());
    }

    #[test]
    fn window_cross_section_is_the_base() {
        let (s, _md, ps, md_flat) = setup();
        let (lo, hi) = identification_window(&ps, &md_flat);
        let c = (&lo + &hi) / rat(2);
        let cs = cross_section(&ps.product, &md_flat, &c).unwrap();
        assert_eq!(cs.members.len(), s.n_vertices());

        // constants transport to constants
        let nv = cs.pb.y_dim();
        let ones = vec![MultiPoly::one(nv); cs.members.len()];
        let transported = rho_star(&ps, &cs, &ones).unwrap();
        assert!(transported.iter().all(|p| p == &MultiPoly::one(s.ctx.dim)));
    }

    #[test]
    fn membership_transports_both_ways() {
        let (s, _md, ps, md_flat) = setup();
        let (lo, hi) = identification_window(&ps, &md_flat);
        let c = (&lo + &hi) / rat(2);
        let cs = cross_section(&ps.product, &md_flat, &c).unwrap();

        for m in 0..=2u32 {
            // forward: base classes lift to members of the window section
            for f in basis_h(&s, m) {
                let lifted = rho_star_inv(&ps, &cs, &f.values).unwrap();
                let report = membership(&ps.product, &md_flat, &cs, &lifted).unwrap();
                assert!(report.ok, "degree {m}");
                // and back again
                let back = rho_star(&ps, &cs, &lifted).unwrap();
                assert_eq!(back, f.values);
            }
            // dimension agreement: the window membership space matches the
            // base cohomology
            assert_eq!(
                membership_space_dim(&ps.product, &md_flat, &cs, m).unwrap(),
                dim_h(&s, m),
                "degree {m}"
            );
        }

        // backward: restricted product classes transport to base classes
        for h in basis_h(&ps.product, 1) {
            let restricted = kirwan(&ps.product, &cs, &h.values).unwrap();
            let down = rho_star(&ps, &cs, &restricted).unwrap();
            assert!(is_class(&s, &down));
        }
    }

    #[test]
    fn first_window_dimension() {
        // just above the bottom vertex of the product the membership space
        // has the full lambda block of size valence + 1
        let (s, _md, ps, md_flat) = setup();
        let c = md_flat.phi.iter().min().unwrap() + ratq(1, 3);
        let cs = cross_section(&ps.product, &md_flat, &c).unwrap();
        assert_eq!(cs.members.len(), ps.product.valence());
        for m in 0..=3u32 {
            let expect: usize = (0..=s.valence())
                .map(|k| crate::polyring::graded_dim(m as i64 - k as i64, s.ctx.dim))
                .sum();
            assert_eq!(
                membership_space_dim(&ps.product, &md_flat, &cs, m).unwrap(),
                expect,
                "degree {m}"
            );
        }
    }
}
