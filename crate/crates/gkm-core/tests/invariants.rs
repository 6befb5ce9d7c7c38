//! Cross-module invariants exercised on the catalog graphs: the randomized
//! duality agreement, the component integral identity in higher degree, the
//! plane-slice restriction machinery on a three-dimensional example, and
//! the axiom stability of induced components.

use num::rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gkm_core::catalog::{cayley_sn, johnson};
use gkm_core::cohomology::{
    basis_h, compatibility_violation, generating_class, generating_family,
    induced_generating_class, restrict_sharp, slice_component, find_xi_k, SharpMap,
};
use gkm_core::crosssection::{component_section, cross_section, integrate_c, kirwan};
use gkm_core::integration::{component_thom, duality_test, edge_thom, integrate};
use gkm_core::morse::{flow_up, morse_data};
use gkm_core::polyring::{rat, ratq, MultiPoly, RationalFn, Vector};
use gkm_core::skeleton::{
    enumerate_2d_subspaces, subskeleton, validate_axioms, Subspace,
};

#[test]
fn randomized_duality_agreement() {
    // the bounded duality test and the edge-by-edge check agree on random
    // classes with and without deliberate corruption
    for (g, trials) in [(cayley_sn(3).unwrap(), 120), (johnson(3, 2).unwrap(), 80)] {
        let s = &g.skeleton;
        let md = morse_data(s, &g.xi).unwrap();
        let family = generating_family(s, &md).unwrap();
        let bound = s.valence() as u32 + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let pool: Vec<_> = (0..=2u32).flat_map(|m| basis_h(s, m)).collect();
        for _ in 0..trials {
            let pick = &pool[rng.gen_range(0..pool.len())];
            let scale = rat(rng.gen_range(-3..=3i64));
            let mut values: Vec<MultiPoly> =
                pick.values.iter().map(|v| v.scale(&scale)).collect();
            let corrupt = rng.gen_bool(0.5);
            if corrupt {
                let v = rng.gen_range(0..s.n_vertices());
                let var = rng.gen_range(0..s.ctx.dim);
                values[v] = values[v].add(&MultiPoly::var(s.ctx.dim, var).pow(pick.degree.max(1)));
            }
            let verdict = duality_test(s, &family, &values, bound);
            assert!(verdict.agreement, "corrupt={corrupt}");
        }
    }
}

#[test]
fn component_integral_identity_degree_three() {
    // the integral of a restricted product over a slice component equals
    // the whole-graph integral against the component Thom class, for
    // component classes up to degree three
    let g = cayley_sn(4).unwrap();
    let s = &g.skeleton;
    let md = morse_data(s, &g.xi).unwrap();
    let c = ratq(5, 2);
    let cs = cross_section(s, &md, &c).unwrap();
    let he = cs
        .hyperedges
        .iter()
        .find(|he| he.members.len() >= 3)
        .expect("a large hyperedge");
    let section = component_section(s, &md, &cs, he).unwrap();
    let tau = component_thom(s, &he.component).unwrap();
    let f = &basis_h(s, 1)[0];
    let kf = kirwan(s, &cs, &f.values).unwrap();

    for m in 0..=3u32 {
        for gcls in basis_h(&section.skeleton, m).iter().take(3) {
            let kg = kirwan(&section.skeleton, &section.cs, &gcls.values).unwrap();
            let lhs_vals: Vec<RationalFn> = section
                .cs
                .members
                .iter()
                .enumerate()
                .map(|(ci, _)| {
                    let f_here = &kf[he.members[section.positions[ci]]];
                    RationalFn::from_poly(f_here.mul(&kg[ci]))
                })
                .collect();
            let lhs = integrate_c(&section.skeleton, &section.cs, &lhs_vals).unwrap();

            let mut tg = vec![MultiPoly::zero(s.ctx.dim); s.n_vertices()];
            for (ci, name) in section.skeleton.vertex_names().iter().enumerate() {
                let pv = s.vertex_id(name).unwrap();
                tg[pv] = tau.values[pv].mul(&gcls.values[ci]);
            }
            let ktg = kirwan(s, &cs, &tg).unwrap();
            let rhs_vals: Vec<RationalFn> = kf
                .iter()
                .zip(&ktg)
                .map(|(a, b)| RationalFn::from_poly(a.mul(b)))
                .collect();
            let rhs = integrate_c(s, &cs, &rhs_vals).unwrap();
            assert_eq!(lhs, rhs, "degree {m}");
        }
    }
}

#[test]
fn induced_components_satisfy_the_axioms() {
    // plane slices of valid skeletons are again valid skeletons
    for g in [cayley_sn(4).unwrap(), johnson(4, 2).unwrap()] {
        let s = &g.skeleton;
        for h in enumerate_2d_subspaces(s) {
            for comp in subskeleton(s, &h) {
                let inner = comp.skeleton.as_ref().expect("regular component");
                assert!(validate_axioms(inner).all_pass());
            }
        }
    }
}

#[test]
fn johnson_plane_enumeration() {
    // exhaustive pair scan on J(4,2): the labels form the rank-3 difference
    // root system, whose label pairs span four triple planes and three
    // disjoint-pair planes
    let g = johnson(4, 2).unwrap();
    let s = &g.skeleton;
    let mut oracle: std::collections::BTreeSet<Subspace> = Default::default();
    for v in 0..s.n_vertices() {
        let out = s.out_edges(v);
        for i in 0..out.len() {
            for j in (i + 1)..out.len() {
                oracle.insert(Subspace::span(&[
                    s.alpha(out[i]).clone(),
                    s.alpha(out[j]).clone(),
                ]));
            }
        }
    }
    let enumerated = enumerate_2d_subspaces(s);
    assert_eq!(enumerated.len(), 7);
    assert_eq!(oracle.into_iter().collect::<Vec<_>>(), enumerated);
}

#[test]
fn coset_components_of_the_four_letter_graph() {
    // the plane spanned by the first two simple roots slices the graph into
    // four three-valent six-vertex components
    let g = cayley_sn(4).unwrap();
    let h = Subspace::span(&[
        Vector::from_ints(&[1, 0, 0]),
        Vector::from_ints(&[0, 1, 0]),
    ]);
    let comps = subskeleton(&g.skeleton, &h);
    assert_eq!(comps.len(), 4);
    for comp in &comps {
        assert_eq!(comp.vertices.len(), 6);
        assert_eq!(comp.valence(), Some(3));
    }
}

#[test]
fn sharp_restriction_and_induced_classes() {
    // a generating class upstairs restricts onto a plane-slice component:
    // the affine restriction keeps compatibility degree by degree, its
    // lowest part is the predicted multiple of the inside labels, and the
    // induced class agrees with the one solved directly on the component
    let g = cayley_sn(4).unwrap();
    let s = &g.skeleton;
    let md = morse_data(s, &g.xi).unwrap();
    let h = Subspace::span(&[
        Vector::from_ints(&[1, 0, 0]),
        Vector::from_ints(&[0, 1, 0]),
    ]);

    // a vertex with downward edges both inside and outside the plane
    let p = s.vertex_id("2143").unwrap();
    assert_eq!(md.sigma[p], 2);
    let comp = subskeleton(s, &h)
        .into_iter()
        .find(|c| c.vertices.contains(&p))
        .unwrap();
    let sc = slice_component(s, &md, &h, &comp).unwrap();
    let upstairs = generating_class(s, &md, p).unwrap();

    // the affine restriction of every upstairs value stays compatible
    let outside: Vec<Vector> = s
        .out_edges(p)
        .iter()
        .filter(|&&e| !md.up[e] && !h.contains(s.alpha(e)))
        .map(|&e| s.alpha(e).clone())
        .collect();
    assert_eq!(outside.len(), 1);
    let xi_k = find_xi_k(s.ctx.dim, &h, &outside).unwrap();
    let sharp = SharpMap::new(&s.ctx, &h, &xi_k).unwrap();
    let restricted = restrict_sharp(&sc, &sharp, &upstairs.class.values);
    assert!(compatibility_violation(&sc.skeleton, &restricted).is_none());

    // lowest homogeneous part at p: the frozen pairings times the inside
    // labels
    let local_p = sc.skeleton.vertex_id("2143").unwrap();
    let mut c = BigRational::from_integer(1.into());
    for a in &outside {
        c *= a.dot(&xi_k);
    }
    let slice_index = sc.md.sigma[local_p] as u32;
    assert_eq!(slice_index, 1);
    let lowest = restricted[local_p].homogeneous_component(slice_index);
    let inside_product =
        gkm_core::cohomology::downward_product(&sc.skeleton, &sc.md, local_p);
    assert_eq!(lowest, inside_product.scale(&c));

    // the induced class is the unique generating class on the component
    let induced = induced_generating_class(s, &md, &sc, &upstairs).unwrap();
    let direct = generating_class(&sc.skeleton, &sc.md, local_p).unwrap();
    assert!(direct.unique && direct.sharpening_hypothesis);
    assert_eq!(induced.class, direct.class);

    // support stays inside the flow-up on the slice
    let flow = flow_up(&sc.skeleton, &sc.md, local_p);
    for v in induced.class.support() {
        assert!(flow.contains(&v));
    }
}

#[test]
fn induced_classes_across_all_slice_vertices() {
    // every vertex of every hexagon component induces correctly
    let g = cayley_sn(4).unwrap();
    let s = &g.skeleton;
    let md = morse_data(s, &g.xi).unwrap();
    let h = Subspace::span(&[
        Vector::from_ints(&[1, 0, 0]),
        Vector::from_ints(&[0, 1, 0]),
    ]);
    for comp in subskeleton(s, &h) {
        let sc = slice_component(s, &md, &h, &comp).unwrap();
        for &p in comp.vertices.iter() {
            let upstairs = generating_class(s, &md, p).unwrap();
            let induced = induced_generating_class(s, &md, &sc, &upstairs).unwrap();
            let local = sc.skeleton.vertex_id(s.vertex_name(p)).unwrap();
            let direct = generating_class(&sc.skeleton, &sc.md, local).unwrap();
            assert_eq!(induced.class, direct.class, "vertex {}", s.vertex_name(p));
        }
    }
}

#[test]
fn membership_routes_agree_on_star_hyperedges() {
    // above the bottom vertex every hyperedge is a vertex star: the power
    // decomposition and the restriction-span criterion must return the same
    // verdict on members and on random non-members alike
    let g = cayley_sn(4).unwrap();
    let s = &g.skeleton;
    let md = morse_data(s, &g.xi).unwrap();
    let cs = cross_section(s, &md, &ratq(1, 2)).unwrap();
    assert!(cs.hyperedges.iter().all(|he| he.star));
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let mut probes: Vec<Vec<MultiPoly>> = Vec::new();
    for f in basis_h(s, 2).iter().take(5) {
        probes.push(kirwan(s, &cs, &f.values).unwrap());
    }
    let nv = cs.pb.y_dim();
    for _ in 0..10 {
        probes.push(
            (0..cs.members.len())
                .map(|_| {
                    MultiPoly::var(nv, rng.gen_range(0..nv))
                        .mul(&MultiPoly::var(nv, rng.gen_range(0..nv)))
                        .scale(&rat(rng.gen_range(-2..=2)))
                })
                .collect(),
        );
    }
    for probe in &probes {
        for he in &cs.hyperedges {
            let taus = cs.tau_forms(he);
            let local: Vec<MultiPoly> = he.members.iter().map(|&i| probe[i].clone()).collect();
            let by_power = gkm_core::symfun::finite_coh_decompose(&taus, &local)
                .unwrap()
                .is_some();
            // independent route: span of the component's restricted classes
            let section = component_section(s, &md, &cs, he).unwrap();
            let images: Vec<Vec<MultiPoly>> = basis_h(&section.skeleton, 2)
                .iter()
                .map(|b| kirwan(&section.skeleton, &section.cs, &b.values).unwrap())
                .collect();
            let width = he.members.len() * gkm_core::polyring::graded_dim(2, nv);
            let coords = |vals: &[MultiPoly]| -> Vec<num::BigRational> {
                let monomials = gkm_core::polyring::monomials_of_degree(nv, 2);
                let mut row = Vec::with_capacity(width);
                for v in vals {
                    for mon in &monomials {
                        row.push(v.coeff(mon));
                    }
                }
                row
            };
            let mut span_rows: Vec<Vec<num::BigRational>> = images
                .iter()
                .map(|img| {
                    let mut aligned = vec![MultiPoly::zero(nv); he.members.len()];
                    for (ci, v) in img.iter().enumerate() {
                        aligned[section.positions[ci]] = v.clone();
                    }
                    coords(&aligned)
                })
                .collect();
            let base = gkm_core::polyring::RatMatrix::new(span_rows.clone(), width).rank();
            span_rows.push(coords(&local));
            let by_span =
                gkm_core::polyring::RatMatrix::new(span_rows, width).rank() == base;
            assert_eq!(by_power, by_span);
        }
    }
}

#[test]
fn membership_agrees_with_bounded_duality() {
    // the hyperedge-local verdict matches the defining property: products
    // against restricted classes integrate to polynomials
    let g = cayley_sn(3).unwrap();
    let s = &g.skeleton;
    let md = morse_data(s, &g.xi).unwrap();
    let family = generating_family(s, &md).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for level in [ratq(1, 2), ratq(3, 2), ratq(5, 2)] {
        let cs = cross_section(s, &md, &level).unwrap();
        let nv = cs.pb.y_dim();
        let mut probes: Vec<Vec<MultiPoly>> = Vec::new();
        for f in basis_h(s, 1) {
            probes.push(kirwan(s, &cs, &f.values).unwrap());
        }
        for _ in 0..6 {
            probes.push(
                (0..cs.members.len())
                    .map(|_| MultiPoly::var(nv, 0).scale(&rat(rng.gen_range(-3..=3))))
                    .collect(),
            );
        }
        for probe in &probes {
            let local = gkm_core::crosssection::membership(s, &md, &cs, probe)
                .unwrap()
                .ok;
            let mut dual = true;
            'outer: for gc in &family {
                for m in gc.class.degree..=4 {
                    for mon in gkm_core::polyring::monomials_of_degree(
                        s.ctx.dim,
                        m - gc.class.degree,
                    ) {
                        let monomial = MultiPoly::from_terms(
                            s.ctx.dim,
                            vec![(mon, rat(1))],
                        );
                        let h = gc.class.mul_poly(&monomial);
                        let kh = kirwan(s, &cs, &h.values).unwrap();
                        let vals: Vec<RationalFn> = probe
                            .iter()
                            .zip(&kh)
                            .map(|(a, b)| RationalFn::from_poly(a.mul(b)))
                            .collect();
                        if !integrate_c(s, &cs, &vals).unwrap().is_polynomial() {
                            dual = false;
                            break 'outer;
                        }
                    }
                }
            }
            assert_eq!(local, dual, "level {level}");
        }
    }
}

#[test]
fn edge_thom_exposes_violations_through_integrals() {
    // pairing a perturbed map against the Thom class of the broken edge
    // forces a non-polynomial integral
    let g = cayley_sn(3).unwrap();
    let s = &g.skeleton;
    let basis = basis_h(s, 2);
    let mut bad = basis[0].values.clone();
    let v = s.vertex_id("231").unwrap();
    bad[v] = bad[v].add(&MultiPoly::var(2, 0).pow(2));
    // some edge at the perturbed vertex is now violated
    let e = compatibility_violation(s, &bad).expect("perturbation breaks an edge");
    let tau = edge_thom(s, e);
    let product: Vec<MultiPoly> = bad
        .iter()
        .zip(&tau.values)
        .map(|(a, b)| a.mul(b))
        .collect();
    assert!(!integrate(s, &product).is_polynomial());
}
