//! Discrete Morse theory on a labeled skeleton: polarizing and generic
//! vectors, the induced orientation and its acyclicity, the canonical Morse
//! function (longest path, deterministically perturbed to be injective),
//! vertex indices, combinatorial Betti numbers, and flow-ups/flow-downs.

use std::collections::BTreeSet;

use num::rational::BigRational;
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GkmError, Result};
use crate::polyring::{rat, ratq, Vector};
use crate::skeleton::{EdgeId, Skeleton, VertexId};

/// Everything derived from a choice of polarizing vector: the orientation,
/// the canonical Morse function, per-vertex indices and the Betti vector.
#[derive(Clone, Debug)]
pub struct MorseData {
    pub xi: Vector,
    /// Per oriented edge: does it point "up" (positive pairing with xi)?
    pub up: Vec<bool>,
    /// Longest-path level per vertex.
    pub phi0: Vec<u64>,
    /// Injective Morse function: `phi0 + rank/(|V|+1)`.
    pub phi: Vec<BigRational>,
    /// Number of downward edges at each vertex.
    pub sigma: Vec<usize>,
    /// `betti[k]` counts vertices of index `k`; length `valence + 1`.
    pub betti: Vec<usize>,
}

/// True iff no edge label pairs to zero with `xi`; returns a violating edge
/// otherwise.
pub fn is_polarizing(s: &Skeleton, xi: &Vector) -> std::result::Result<(), EdgeId> {
    for e in 0..s.n_oriented_edges() {
        if s.alpha(e).dot(xi).is_zero() {
            return Err(e);
        }
    }
    Ok(())
}

/// A quadruple of edges at one vertex witnessing a genericity failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericityWitness {
    pub vertex: VertexId,
    pub edges: (EdgeId, EdgeId, EdgeId, EdgeId),
}

/// Genericity of a polarizing `xi`: at every vertex the normalized labels
/// `alpha_e / alpha_e(xi)` have pairwise differences that are all distinct
/// over ordered pairs of distinct edges. Equivalent to the quadruple
/// condition, checked here by hashing the differences instead of scanning
/// all `d^4` quadruples.
pub fn is_generic(
    s: &Skeleton,
    xi: &Vector,
) -> Result<std::result::Result<(), GenericityWitness>> {
    is_polarizing(s, xi).map_err(|edge| GkmError::NotPolarizing { edge })?;
    for v in 0..s.n_vertices() {
        let out = s.out_edges(v);
        let normalized: Vec<Vector> = out
            .iter()
            .map(|&e| s.alpha(e).scale(&(rat(1) / s.alpha(e).dot(xi))))
            .collect();
        let mut seen: std::collections::BTreeMap<Vector, (usize, usize)> = Default::default();
        for i in 0..out.len() {
            for j in 0..out.len() {
                if i == j {
                    continue;
                }
                let diff = normalized[i].sub(&normalized[j]);
                if let Some(&(pi, pj)) = seen.get(&diff) {
                    return Ok(Err(GenericityWitness {
                        vertex: v,
                        edges: (out[pi], out[pj], out[i], out[j]),
                    }));
                }
                seen.insert(diff, (i, j));
            }
        }
    }
    Ok(Ok(()))
}

/// Topological order on success, witness cycle on failure.
pub type AcyclicityVerdict = std::result::Result<Vec<VertexId>, Vec<VertexId>>;

/// Chooses the orientation making every pairing positive and reports whether
/// it is acyclic; the second component is the topological order on success
/// or a witness cycle on failure.
pub fn orient_and_check_acyclic(
    s: &Skeleton,
    xi: &Vector,
) -> Result<(Vec<bool>, AcyclicityVerdict)> {
    is_polarizing(s, xi).map_err(|edge| GkmError::NotPolarizing { edge })?;
    let up: Vec<bool> = (0..s.n_oriented_edges())
        .map(|e| s.alpha(e).dot(xi).is_positive())
        .collect();
    let verdict = toposort(s, &up);
    Ok((up, verdict))
}

/// Kahn's algorithm; `Ok(order)` on success, `Err(cycle)` with a witness
/// cycle otherwise.
fn toposort(s: &Skeleton, up: &[bool]) -> std::result::Result<Vec<VertexId>, Vec<VertexId>> {
    let n = s.n_vertices();
    let mut indeg = vec![0usize; n];
    for e in 0..s.n_oriented_edges() {
        if up[e] {
            indeg[s.edge(e).dst] += 1;
        }
    }
    let mut queue: BTreeSet<VertexId> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&v) = queue.iter().next() {
        queue.remove(&v);
        order.push(v);
        for &e in s.out_edges(v) {
            if up[e] {
                let w = s.edge(e).dst;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.insert(w);
                }
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // extract a witness cycle by walking successors inside the leftover set
    let leftover: BTreeSet<VertexId> = (0..n).filter(|&v| indeg[v] > 0).collect();
    let start = *leftover.iter().next().unwrap();
    let mut path = vec![start];
    let mut seen_at = std::collections::BTreeMap::new();
    seen_at.insert(start, 0usize);
    let mut cur = start;
    loop {
        let next = s
            .out_edges(cur)
            .iter()
            .copied()
            .filter(|&e| up[e] && leftover.contains(&s.edge(e).dst))
            .map(|e| s.edge(e).dst)
            .next()
            .expect("every leftover vertex has a leftover successor");
        if let Some(&k) = seen_at.get(&next) {
            return Err(path[k..].to_vec());
        }
        seen_at.insert(next, path.len());
        path.push(next);
        cur = next;
    }
}

/// Builds the Morse data for a polarizing `xi` whose orientation is acyclic.
pub fn morse_data(s: &Skeleton, xi: &Vector) -> Result<MorseData> {
    let (up, topo) = orient_and_check_acyclic(s, xi)?;
    let order = topo.map_err(|cycle| {
        GkmError::Cyclic(
            cycle
                .iter()
                .map(|&v| s.vertex_name(v).to_string())
                .collect(),
        )
    })?;
    let n = s.n_vertices();
    // longest path into each vertex, in topological order
    let mut phi0 = vec![0u64; n];
    for &v in &order {
        for &e in s.out_edges(v) {
            if up[e] {
                let w = s.edge(e).dst;
                phi0[w] = phi0[w].max(phi0[v] + 1);
            }
        }
    }
    // injective perturbation by vertex rank; the step is < 1 while phi0 rises
    // by >= 1 along edges, so compatibility is preserved
    let denom = (n + 1) as i64;
    let phi: Vec<BigRational> = (0..n)
        .map(|v| rat(phi0[v] as i64) + ratq(v as i64, denom))
        .collect();
    let sigma: Vec<usize> = (0..n)
        .map(|v| s.out_edges(v).iter().filter(|&&e| !up[e]).count())
        .collect();
    let mut betti = vec![0usize; s.valence() + 1];
    for &k in &sigma {
        betti[k] += 1;
    }
    Ok(MorseData {
        xi: xi.clone(),
        up,
        phi0,
        phi,
        sigma,
        betti,
    })
}

impl MorseData {
    /// Restricts to a sub-skeleton on a subset of the vertices and edges:
    /// the pairing signs, hence the orientation, carry over verbatim, and
    /// the Morse values are inherited (not recomputed), so level sets of the
    /// parent and the piece agree. Indices and Betti numbers are recomputed
    /// for the piece's own valence.
    pub fn restrict_to(&self, parent: &Skeleton, piece: &Skeleton) -> MorseData {
        let up: Vec<bool> = (0..piece.n_oriented_edges())
            .map(|e| piece.alpha(e).dot(&self.xi).is_positive())
            .collect();
        let ids: Vec<VertexId> = piece
            .vertex_names()
            .iter()
            .map(|n| parent.vertex_id(n).expect("piece vertex exists in parent"))
            .collect();
        let phi0: Vec<u64> = ids.iter().map(|&v| self.phi0[v]).collect();
        let phi: Vec<BigRational> = ids.iter().map(|&v| self.phi[v].clone()).collect();
        let sigma: Vec<usize> = (0..piece.n_vertices())
            .map(|v| piece.out_edges(v).iter().filter(|&&e| !up[e]).count())
            .collect();
        let mut betti = vec![0usize; piece.valence() + 1];
        for &k in &sigma {
            betti[k] += 1;
        }
        MorseData {
            xi: self.xi.clone(),
            up,
            phi0,
            phi,
            sigma,
            betti,
        }
    }
}

/// Deterministic seeded search for a polarizing, generic vector with acyclic
/// orientation. Samples integer vectors with entries in `[-B, B]`, doubling
/// `B` every 64 attempts; on exhaustion the error reports which predicate
/// failed how often.
pub fn find_xi(s: &Skeleton, attempts: usize, seed: u64) -> Result<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut not_polarizing, mut not_generic, mut cyclic) = (0usize, 0usize, 0usize);
    let mut bound: i64 = 4;
    for attempt in 0..attempts {
        if attempt > 0 && attempt % 64 == 0 {
            bound = bound.saturating_mul(2);
        }
        let coords: Vec<i64> = (0..s.ctx.dim)
            .map(|_| rng.gen_range(-bound..=bound))
            .collect();
        let xi = Vector::from_ints(&coords);
        if xi.is_zero() || is_polarizing(s, &xi).is_err() {
            not_polarizing += 1;
            continue;
        }
        if is_generic(s, &xi)?.is_err() {
            not_generic += 1;
            continue;
        }
        let (_, topo) = orient_and_check_acyclic(s, &xi)?;
        if topo.is_err() {
            cyclic += 1;
            continue;
        }
        return Ok(xi);
    }
    Err(GkmError::XiSearchExhausted {
        attempts,
        summary: format!(
            "not polarizing: {not_polarizing}, not generic: {not_generic}, cyclic: {cyclic}"
        ),
    })
}

/// Vertices reachable from `p` along the chosen orientation, including `p`.
pub fn flow_up(s: &Skeleton, md: &MorseData, p: VertexId) -> BTreeSet<VertexId> {
    reach(s, md, p, true)
}

/// Vertices from which `p` is reachable, including `p`. Equals the flow-up
/// with respect to `-xi`.
pub fn flow_down(s: &Skeleton, md: &MorseData, p: VertexId) -> BTreeSet<VertexId> {
    reach(s, md, p, false)
}

fn reach(s: &Skeleton, md: &MorseData, p: VertexId, upward: bool) -> BTreeSet<VertexId> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![p];
    seen.insert(p);
    while let Some(v) = stack.pop() {
        for &e in s.out_edges(v) {
            if md.up[e] == upward {
                let w = s.edge(e).dst;
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    seen
}

/// `betti[k] == betti[d-k]` for all `k`.
pub fn poincare_check(md: &MorseData) -> bool {
    let b = &md.betti;
    (0..b.len()).all(|k| b[k] == b[b.len() - 1 - k])
}
