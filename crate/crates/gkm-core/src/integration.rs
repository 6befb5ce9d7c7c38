//! The integration operator on a skeleton: each vertex contributes its value
//! divided by the product of all labels at that vertex, and the sum reduces
//! exactly because denominators are products of linear forms. Also the edge
//! and component Thom classes and the bounded duality test.

use num::rational::BigRational;
use num::One;

use crate::cohomology::{compatibility_violation, is_class, CohClass};
use crate::error::{GkmError, Result};
use crate::polyring::{monomials_of_degree, MultiPoly, RationalFn, Vector};
use crate::skeleton::{reversed, EdgeId, InducedComponent, Skeleton};

/// `sum_p f_p / prod_{e at p} alpha_e`, computed exactly. The denominator at
/// each vertex runs over all oriented edges leaving it.
pub fn integrate(s: &Skeleton, values: &[MultiPoly]) -> RationalFn {
    assert_eq!(values.len(), s.n_vertices());
    let mut total = RationalFn::zero(s.ctx.dim);
    for (v, value) in values.iter().enumerate() {
        if value.is_zero() {
            continue;
        }
        let factors: Vec<(Vector, u32)> = s
            .out_edges(v)
            .iter()
            .map(|&e| (s.alpha(e).clone(), 1))
            .collect();
        total = total.add(&RationalFn::over_linear_factors(value.clone(), &factors));
    }
    total
}

/// Whether the integral of a class reduces to a polynomial.
pub fn verify_integrality(s: &Skeleton, f: &CohClass) -> bool {
    integrate(s, &f.values).is_polynomial()
}

/// The Thom class of an edge: degree `d-1`, supported on the two endpoints,
/// with the product of the other labels at each endpoint as its value.
pub fn edge_thom(s: &Skeleton, e: EdgeId) -> CohClass {
    let (p, q) = (s.edge(e).src, s.edge(e).dst);
    let mut values = vec![MultiPoly::zero(s.ctx.dim); s.n_vertices()];
    let product_excluding = |v: usize, skip: EdgeId| {
        let mut prod = MultiPoly::one(s.ctx.dim);
        for &ei in s.out_edges(v) {
            if ei != skip {
                prod = prod.mul(&MultiPoly::linear_form(s.alpha(ei)));
            }
        }
        prod
    };
    values[p] = product_excluding(p, e);
    values[q] = product_excluding(q, reversed(e));
    debug_assert!(is_class(s, &values));
    CohClass {
        degree: (s.valence() - 1) as u32,
        values,
    }
}

/// The Thom class of a regular induced component: at each of its vertices,
/// the product of the incident labels that do not belong to the component;
/// zero elsewhere.
pub fn component_thom(s: &Skeleton, comp: &InducedComponent) -> Result<CohClass> {
    if !comp.regular {
        return Err(GkmError::IrregularComponent(comp.valences.clone()));
    }
    let inner: std::collections::BTreeSet<EdgeId> = comp
        .edge_reps
        .iter()
        .flat_map(|&e| [e, reversed(e)])
        .collect();
    let mut values = vec![MultiPoly::zero(s.ctx.dim); s.n_vertices()];
    for &v in &comp.vertices {
        let mut prod = MultiPoly::one(s.ctx.dim);
        for &e in s.out_edges(v) {
            if !inner.contains(&e) {
                prod = prod.mul(&MultiPoly::linear_form(s.alpha(e)));
            }
        }
        values[v] = prod;
    }
    if compatibility_violation(s, &values).is_some() {
        return Err(GkmError::Invalid(
            "component Thom data violates compatibility".into(),
        ));
    }
    Ok(CohClass {
        degree: (s.valence() - comp.valence().unwrap()) as u32,
        values,
    })
}

#[derive(Debug)]
pub struct DualityReport {
    /// Every product integral stayed polynomial up to the degree bound.
    pub integrals_polynomial: bool,
    /// Direct edge-by-edge compatibility of the tested map.
    pub is_class: bool,
    /// Up to the bound, the two tests told the same story.
    pub agreement: bool,
}

/// Bounded test of the duality characterization: a vertex map is a class
/// iff all its products against classes integrate to polynomials. Products
/// range over `monomial * generating class` spanning every degree up to
/// `degree_bound`.
pub fn duality_test(
    s: &Skeleton,
    family: &[crate::cohomology::GenClass],
    values: &[MultiPoly],
    degree_bound: u32,
) -> DualityReport {
    let mut integrals_polynomial = true;
    'outer: for g in family {
        let base = g.class.degree;
        for m in base..=degree_bound {
            for mon in monomials_of_degree(s.ctx.dim, m - base) {
                let monomial = MultiPoly::from_terms(
                    s.ctx.dim,
                    vec![(mon, BigRational::one())],
                );
                let h = g.class.mul_poly(&monomial);
                let product: Vec<MultiPoly> = values
                    .iter()
                    .zip(&h.values)
                    .map(|(a, b)| a.mul(b))
                    .collect();
                if !integrate(s, &product).is_polynomial() {
                    integrals_polynomial = false;
                    break 'outer;
                }
            }
        }
    }
    let class = compatibility_violation(s, values).is_none();
    DualityReport {
        integrals_polynomial,
        is_class: class,
        agreement: integrals_polynomial == class,
    }
}
