//! Builders for the stock examples (transposition Cayley graphs of symmetric
//! groups, Johnson graphs) and graph file I/O.
//!
//! Edge labels live in the root space of dimension `n-1`, with the simple
//! roots as basis: the standard-basis difference `eps_b - eps_a` (a < b)
//! becomes the 0/1 indicator vector of positions `a..b-1`. Both families have
//! zero-sum labels, so nothing is lost in the reduction.

use std::collections::BTreeSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GkmError, Result};
use crate::morse::{is_generic, is_polarizing};
use crate::polyring::{SpaceCtx, Vector};
use crate::skeleton::Skeleton;

/// A built example: the skeleton, a canonical polarizing/generic vector
/// whose orientation follows the self-indexing Morse function, and that
/// Morse function (indexed by vertex id).
#[derive(Clone, Debug)]
pub struct CatalogGraph {
    pub skeleton: Skeleton,
    pub xi: Vector,
    pub phi: Vec<i64>,
}

/// Parsed `--graph` argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    CayleySn(usize),
    Johnson(usize, usize),
    File(String),
}

pub fn parse_graph_spec(s: &str) -> Result<GraphSpec> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| GkmError::Schema(format!("bad graph spec {s:?}, expected kind:args")))?;
    match kind {
        "sn" => {
            let n: usize = rest
                .parse()
                .map_err(|_| GkmError::Schema(format!("bad sn parameter {rest:?}")))?;
            Ok(GraphSpec::CayleySn(n))
        }
        "johnson" => {
            let (n, k) = rest
                .split_once(',')
                .ok_or_else(|| GkmError::Schema("johnson needs n,k".into()))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| GkmError::Schema(format!("bad johnson n {n:?}")))?;
            let k: usize = k
                .trim()
                .parse()
                .map_err(|_| GkmError::Schema(format!("bad johnson k {k:?}")))?;
            Ok(GraphSpec::Johnson(n, k))
        }
        "file" => Ok(GraphSpec::File(rest.to_string())),
        other => Err(GkmError::Schema(format!("unknown graph kind {other:?}"))),
    }
}

/// `eps_b - eps_a` for `a < b` (1-based) in simple-root coordinates.
fn root_coords(n: usize, a: usize, b: usize) -> Vector {
    debug_assert!(1 <= a && a < b && b <= n);
    let mut v = vec![0i64; n - 1];
    for slot in v.iter_mut().take(b - 1).skip(a - 1) {
        *slot = 1;
    }
    Vector::from_ints(&v)
}

/// `eps_j - eps_i` for arbitrary distinct `i`, `j` (1-based).
fn eps_diff(n: usize, j: usize, i: usize) -> Vector {
    if i < j {
        root_coords(n, i, j)
    } else {
        root_coords(n, j, i).neg()
    }
}

fn root_ctx(n: usize) -> SpaceCtx {
    SpaceCtx::new(n - 1, (1..n).map(|i| format!("a{i}")).collect()).unwrap()
}

/// Deterministic search for a generic polarizing vector whose pairings with
/// all edge labels have the sign demanded by `phi` (so the orientation
/// follows the given Morse function and is automatically acyclic).
fn search_compatible_xi(s: &Skeleton, phi: &[i64], positive_orthant: bool) -> Result<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let dim = s.ctx.dim;
    let mut bound: i64 = 4;
    for attempt in 0..4096usize {
        if attempt > 0 && attempt % 64 == 0 {
            bound = bound.saturating_mul(2);
        }
        let coords: Vec<i64> = (0..dim)
            .map(|_| {
                let c = rng.gen_range(1..=bound);
                if positive_orthant {
                    c
                } else {
                    -c
                }
            })
            .collect();
        let xi = Vector::from_ints(&coords);
        if is_polarizing(s, &xi).is_err() || is_generic(s, &xi)?.is_err() {
            continue;
        }
        let compatible = (0..s.n_oriented_edges()).all(|e| {
            let rising = phi[s.edge(e).dst] > phi[s.edge(e).src];
            num::Signed::is_positive(&s.alpha(e).dot(&xi)) == rising
        });
        if compatible {
            return Ok(xi);
        }
    }
    Err(GkmError::XiSearchExhausted {
        attempts: 4096,
        summary: "no orthant vector compatible with the catalog Morse function".into(),
    })
}

fn inversions(perm: &[usize]) -> i64 {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (1..=n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out.sort();
    out
}

fn perm_name(p: &[usize]) -> String {
    p.iter().map(|d| d.to_string()).collect()
}

/// The transposition Cayley graph of the symmetric group on `n` letters:
/// vertices are permutations in one-line notation, `sigma` is adjacent to
/// `sigma * t_ij` for every position pair `i < j`, and the edge from `sigma`
/// carries `eps_j - eps_i` when `sigma(j) > sigma(i)` (the other difference
/// otherwise). The inversion count is the self-indexing Morse function.
pub fn cayley_sn(n: usize) -> Result<CatalogGraph> {
    if !(2..=9).contains(&n) {
        return Err(GkmError::Invalid(
            "cayley graphs are built for 2 <= n <= 9".into(),
        ));
    }
    let ctx = root_ctx(n);
    let perms = permutations(n);
    let names: Vec<String> = perms.iter().map(|p| perm_name(p)).collect();
    let mut unoriented = Vec::new();
    for p in &perms {
        for i in 1..=n {
            for j in (i + 1)..=n {
                let mut q = p.clone();
                q.swap(i - 1, j - 1);
                let (pn, qn) = (perm_name(p), perm_name(&q));
                if pn < qn {
                    let alpha = if p[j - 1] > p[i - 1] {
                        eps_diff(n, j, i)
                    } else {
                        eps_diff(n, i, j)
                    };
                    unoriented.push((pn, qn, alpha));
                }
            }
        }
    }
    let skeleton = Skeleton::new(ctx, names, unoriented)?;
    let phi: Vec<i64> = skeleton
        .vertex_names()
        .iter()
        .map(|name| {
            let digits: Vec<usize> = name
                .chars()
                .map(|c| c.to_digit(10).unwrap() as usize)
                .collect();
            inversions(&digits)
        })
        .collect();
    let xi = search_compatible_xi(&skeleton, &phi, true)?;
    Ok(CatalogGraph { skeleton, xi, phi })
}

fn subset_name(s: &BTreeSet<usize>) -> String {
    s.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Number of boxes of the staircase diagram of a `k`-subset: the sum of its
/// elements minus `k(k+1)/2`. Zero exactly on `{1..k}`.
fn johnson_phi(s: &BTreeSet<usize>) -> i64 {
    let sum: usize = s.iter().sum();
    let k = s.len();
    (sum - k * (k + 1) / 2) as i64
}

/// The Johnson graph `J(n, k)`: vertices are `k`-subsets of `{1..n}`,
/// adjacent when they differ by one exchange; the edge leaving `i` and
/// gaining `j` carries `eps_i - eps_j`.
pub fn johnson(n: usize, k: usize) -> Result<CatalogGraph> {
    if n < 2 || k == 0 || k >= n {
        return Err(GkmError::Invalid(
            "johnson graphs need n >= 2 and 1 <= k <= n-1".into(),
        ));
    }
    let ctx = root_ctx(n);
    let mut subsets: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
    for elem in 1..=n {
        let mut next = Vec::new();
        for s in &subsets {
            next.push(s.clone());
            if s.len() < k {
                let mut t = s.clone();
                t.insert(elem);
                next.push(t);
            }
        }
        subsets = next;
    }
    subsets.retain(|s| s.len() == k);
    let names: Vec<String> = subsets.iter().map(subset_name).collect();
    let mut unoriented = Vec::new();
    for s in &subsets {
        for &i in s {
            for j in 1..=n {
                if s.contains(&j) {
                    continue;
                }
                let mut t = s.clone();
                t.remove(&i);
                t.insert(j);
                let (sn, tn) = (subset_name(s), subset_name(&t));
                if sn < tn {
                    unoriented.push((sn, tn, eps_diff(n, i, j)));
                }
            }
        }
    }
    let skeleton = Skeleton::new(ctx, names, unoriented)?;
    let phi: Vec<i64> = skeleton
        .vertex_names()
        .iter()
        .map(|name| {
            let set: BTreeSet<usize> = name.split(',').map(|d| d.parse().unwrap()).collect();
            johnson_phi(&set)
        })
        .collect();
    let xi = search_compatible_xi(&skeleton, &phi, false)?;
    Ok(CatalogGraph { skeleton, xi, phi })
}

pub fn load(path: impl AsRef<Path>) -> Result<Skeleton> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| GkmError::Schema(format!("invalid JSON: {e}")))?;
    Skeleton::from_json(&value)
}

pub fn save(s: &Skeleton, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&s.to_json()).expect("serialization cannot fail");
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Builds the skeleton for a parsed spec; catalog graphs come with their
/// canonical vector and Morse function, files do not.
pub fn build(spec: &GraphSpec) -> Result<(Skeleton, Option<Vector>)> {
    match spec {
        GraphSpec::CayleySn(n) => {
            let g = cayley_sn(*n)?;
            Ok((g.skeleton, Some(g.xi)))
        }
        GraphSpec::Johnson(n, k) => {
            let g = johnson(*n, *k)?;
            Ok((g.skeleton, Some(g.xi)))
        }
        GraphSpec::File(path) => Ok((load(path)?, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::{morse_data, poincare_check};
    use crate::skeleton::validate_axioms;
    use num::One;

    #[test]
    fn s2_is_a_single_edge() {
        let g = cayley_sn(2).unwrap();
        assert_eq!(g.skeleton.n_vertices(), 2);
        assert_eq!(g.skeleton.valence(), 1);
        assert_eq!(g.skeleton.alpha(0).coords.len(), 1);
    }

    #[test]
    fn s3_is_the_permutahedron() {
        let g = cayley_sn(3).unwrap();
        let s = &g.skeleton;
        assert_eq!(s.n_vertices(), 6);
        assert_eq!(s.valence(), 3);
        assert_eq!(s.unoriented().count(), 9);
        // identity-side weight on the edge 123 -- 213 is the first root
        let id = s.vertex_id("123").unwrap();
        let t12 = s.vertex_id("213").unwrap();
        let e = s.find_edge(id, t12).unwrap();
        assert_eq!(s.alpha(e), &Vector::from_ints(&[1, 0]));
        // and 123 -- 321 carries the full root sum
        let w0 = s.vertex_id("321").unwrap();
        let e2 = s.find_edge(id, w0).unwrap();
        assert_eq!(s.alpha(e2), &Vector::from_ints(&[1, 1]));

        let md = morse_data(s, &g.xi).unwrap();
        assert_eq!(md.betti, vec![1, 2, 2, 1]);
        assert!(poincare_check(&md));
        // longest-path Morse function equals the inversion count
        for v in 0..s.n_vertices() {
            assert_eq!(md.phi0[v] as i64, g.phi[v], "{}", s.vertex_name(v));
        }
    }

    #[test]
    fn catalog_axioms_hold_with_integer_constants() {
        for g in [cayley_sn(3).unwrap(), cayley_sn(4).unwrap()] {
            let report = validate_axioms(&g.skeleton);
            assert!(report.all_pass());
            let conn = report.connection.unwrap();
            for entries in &conn.maps {
                for (_, _, c) in entries {
                    assert!(c.denom().is_one(), "constant {c} is not an integer");
                }
            }
        }
        for (n, k) in [(3, 2), (4, 2), (5, 2), (5, 3)] {
            let g = johnson(n, k).unwrap();
            assert!(validate_axioms(&g.skeleton).all_pass(), "J({n},{k})");
        }
    }

    #[test]
    fn johnson_triangle() {
        let g = johnson(3, 2).unwrap();
        let s = &g.skeleton;
        assert_eq!(s.n_vertices(), 3);
        assert_eq!(s.valence(), 2);
        // phi({1,2}) = 0
        let base = s.vertex_id("1,2").unwrap();
        assert_eq!(g.phi[base], 0);
        let md = morse_data(s, &g.xi).unwrap();
        assert_eq!(md.betti, vec![1, 1, 1]);
        for v in 0..s.n_vertices() {
            assert_eq!(md.phi0[v] as i64, g.phi[v]);
        }
    }

    #[test]
    fn johnson_complement_symmetry() {
        // J(3,1) is the complement relabeling of J(3,2) with negated labels
        // and reversed Morse order.
        let g1 = johnson(3, 1).unwrap();
        let g2 = johnson(3, 2).unwrap();
        let complement = |name: &str| -> String {
            let set: BTreeSet<usize> = name.split(',').map(|d| d.parse().unwrap()).collect();
            let co: BTreeSet<usize> = (1..=3).filter(|x| !set.contains(x)).collect();
            subset_name(&co)
        };
        for e in g1.skeleton.unoriented() {
            let edge = g1.skeleton.edge(e);
            let src2 = complement(g1.skeleton.vertex_name(edge.src));
            let dst2 = complement(g1.skeleton.vertex_name(edge.dst));
            let s2 = g2.skeleton.vertex_id(&src2).unwrap();
            let d2 = g2.skeleton.vertex_id(&dst2).unwrap();
            let e2 = g2.skeleton.find_edge(s2, d2).unwrap();
            assert_eq!(g2.skeleton.alpha(e2), &edge.alpha.neg());
        }
        // Morse order reverses under complementation
        let max1 = g1.phi.iter().max().unwrap();
        for v in 0..g1.skeleton.n_vertices() {
            let w = g2
                .skeleton
                .vertex_id(&complement(g1.skeleton.vertex_name(v)))
                .unwrap();
            assert_eq!(g2.phi[w], max1 - g1.phi[v]);
        }
    }

    #[test]
    fn file_round_trip() {
        let g = cayley_sn(3).unwrap();
        let dir = std::env::temp_dir().join("gkm_catalog_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("perm.json");
        save(&g.skeleton, &path).unwrap();
        let loaded = load(&path).unwrap();
        assert_eq!(loaded, g.skeleton);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(parse_graph_spec("sn:3").unwrap(), GraphSpec::CayleySn(3));
        assert_eq!(
            parse_graph_spec("johnson:4,2").unwrap(),
            GraphSpec::Johnson(4, 2)
        );
        assert_eq!(
            parse_graph_spec("file:/tmp/x.json").unwrap(),
            GraphSpec::File("/tmp/x.json".into())
        );
        assert!(parse_graph_spec("nope").is_err());
        assert!(parse_graph_spec("johnson:4").is_err());
    }
}
