//! The graph data model: vertices, oriented edges with a reversal involution,
//! the axial labeling, axiom validation, and subspace-induced subgraphs.
//!
//! Oriented edges are stored in reversal pairs: edge `2k` and `2k+1` are the
//! two orientations of unoriented edge `k`, so reversal is `id ^ 1` and the
//! even ids serve as unoriented representatives.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::Zero;

use crate::error::{GkmError, Result};
use crate::polyring::{format_rat, parse_rat, RatMatrix, SpaceCtx, Vector};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub alpha: Vector,
}

/// A `d`-valent graph with an axial labeling of its oriented edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub ctx: SpaceCtx,
    names: Vec<String>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
    valence: usize,
}

pub fn reversed(e: EdgeId) -> EdgeId {
    e ^ 1
}

impl Skeleton {
    /// Builds from one entry per unoriented edge; the reverse orientation
    /// with the negated label is synthesized. Vertex ids are opaque strings
    /// and their sort order fixes all downstream tie-breaking.
    pub fn new(
        ctx: SpaceCtx,
        vertex_names: Vec<String>,
        unoriented: Vec<(String, String, Vector)>,
    ) -> Result<Self> {
        let mut names = vertex_names;
        names.sort();
        let before = names.len();
        names.dedup();
        if names.len() != before {
            return Err(GkmError::MalformedSkeleton("duplicate vertex ids".into()));
        }
        let index: BTreeMap<&str, VertexId> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut edges = Vec::with_capacity(unoriented.len() * 2);
        for (src, dst, alpha) in &unoriented {
            let s = *index
                .get(src.as_str())
                .ok_or_else(|| GkmError::MalformedSkeleton(format!("unknown vertex {src:?}")))?;
            let t = *index
                .get(dst.as_str())
                .ok_or_else(|| GkmError::MalformedSkeleton(format!("unknown vertex {dst:?}")))?;
            if s == t {
                return Err(GkmError::MalformedSkeleton(format!("self-loop at {src:?}")));
            }
            if alpha.dim() != ctx.dim {
                return Err(GkmError::DimMismatch {
                    expected: ctx.dim,
                    got: alpha.dim(),
                });
            }
            if alpha.is_zero() {
                return Err(GkmError::MalformedSkeleton(format!(
                    "zero axial value on edge {src:?} -> {dst:?}"
                )));
            }
            edges.push(Edge {
                src: s,
                dst: t,
                alpha: alpha.clone(),
            });
            edges.push(Edge {
                src: t,
                dst: s,
                alpha: alpha.neg(),
            });
        }
        Self::assemble(ctx, names, edges)
    }

    /// Raw constructor from explicit oriented pairs `(2k, 2k+1)`; does not
    /// enforce the label involution, so axiom A2 can genuinely fail here.
    /// Intended for validator tests and adversarial inputs.
    pub fn from_oriented(ctx: SpaceCtx, names: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        if !edges.len().is_multiple_of(2) {
            return Err(GkmError::MalformedSkeleton(
                "oriented edges must come in reversal pairs".into(),
            ));
        }
        for k in 0..edges.len() / 2 {
            let (e, r) = (&edges[2 * k], &edges[2 * k + 1]);
            if e.src != r.dst || e.dst != r.src {
                return Err(GkmError::MalformedSkeleton(format!(
                    "edges {} and {} are not mutual reverses",
                    2 * k,
                    2 * k + 1
                )));
            }
        }
        Self::assemble(ctx, names, edges)
    }

    fn assemble(ctx: SpaceCtx, names: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let nv = names.len();
        let mut out = vec![Vec::new(); nv];
        for (id, e) in edges.iter().enumerate() {
            if e.src >= nv || e.dst >= nv {
                return Err(GkmError::MalformedSkeleton("vertex id out of range".into()));
            }
            out[e.src].push(id);
        }
        let valence = out.first().map(|o| o.len()).unwrap_or(0);
        if let Some(v) = (0..nv).find(|&v| out[v].len() != valence) {
            return Err(GkmError::MalformedSkeleton(format!(
                "valence mismatch at {:?}: {} vs {}",
                names[v],
                out[v].len(),
                valence
            )));
        }
        Ok(Skeleton {
            ctx,
            names,
            edges,
            out,
            valence,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn n_oriented_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn valence(&self) -> usize {
        self.valence
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn alpha(&self, e: EdgeId) -> &Vector {
        &self.edges[e].alpha
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v]
    }

    /// Unoriented representatives (the even oriented ids).
    pub fn unoriented(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).step_by(2)
    }

    pub fn find_edge(&self, src: VertexId, dst: VertexId) -> Option<EdgeId> {
        self.out[src]
            .iter()
            .copied()
            .find(|&e| self.edges[e].dst == dst)
    }

    /// Rewrites all axial values in coordinates of `basis` (which must span
    /// them); the result lives over a fresh context of dimension
    /// `basis.len()`.
    pub fn reexpress(&self, basis: &[Vector], labels: Vec<String>) -> Result<Skeleton> {
        let k = basis.len();
        let ctx = SpaceCtx::new(k, labels)?;
        let cols = RatMatrix::new(
            (0..self.ctx.dim)
                .map(|i| basis.iter().map(|b| b.coords[i].clone()).collect())
                .collect(),
            k,
        );
        let mut unoriented = Vec::new();
        for e in self.unoriented() {
            let edge = &self.edges[e];
            let sol = crate::polyring::solve_affine(&cols, &edge.alpha.coords).ok_or_else(
                || GkmError::Invalid("axial value outside the span of the new basis".into()),
            )?;
            unoriented.push((
                self.names[edge.src].clone(),
                self.names[edge.dst].clone(),
                Vector::new(sol.particular),
            ));
        }
        Skeleton::new(ctx, self.names.clone(), unoriented)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .unoriented()
            .map(|e| {
                let edge = &self.edges[e];
                serde_json::json!({
                    "src": self.names[edge.src],
                    "dst": self.names[edge.dst],
                    "alpha": edge.alpha.coords.iter().map(format_rat).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "dim": self.ctx.dim,
            "basis": self.ctx.basis_labels,
            "vertices": self.names,
            "edges": edges,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Skeleton> {
        let dim = v
            .get("dim")
            .and_then(|d| d.as_u64())
            .ok_or_else(|| GkmError::Schema("missing or bad \"dim\"".into()))?
            as usize;
        let basis = v
            .get("basis")
            .and_then(|b| b.as_array())
            .ok_or_else(|| GkmError::Schema("missing \"basis\"".into()))?
            .iter()
            .map(|l| {
                l.as_str()
                    .map(String::from)
                    .ok_or_else(|| GkmError::Schema("basis labels must be strings".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let ctx = SpaceCtx::new(dim, basis)?;
        let vertices = v
            .get("vertices")
            .and_then(|x| x.as_array())
            .ok_or_else(|| GkmError::Schema("missing \"vertices\"".into()))?
            .iter()
            .map(|n| {
                n.as_str()
                    .map(String::from)
                    .ok_or_else(|| GkmError::Schema("vertex ids must be strings".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let raw_edges = v
            .get("edges")
            .and_then(|x| x.as_array())
            .ok_or_else(|| GkmError::Schema("missing \"edges\"".into()))?;
        let mut unoriented = Vec::with_capacity(raw_edges.len());
        for (i, e) in raw_edges.iter().enumerate() {
            let field = |name: &str| {
                e.get(name)
                    .ok_or_else(|| GkmError::Schema(format!("edge {i}: missing \"{name}\"")))
            };
            let src = field("src")?
                .as_str()
                .ok_or_else(|| GkmError::Schema(format!("edge {i}: \"src\" must be a string")))?;
            let dst = field("dst")?
                .as_str()
                .ok_or_else(|| GkmError::Schema(format!("edge {i}: \"dst\" must be a string")))?;
            let alpha = field("alpha")?
                .as_array()
                .ok_or_else(|| GkmError::Schema(format!("edge {i}: \"alpha\" must be a list")))?;
            let coords = alpha
                .iter()
                .map(|c| {
                    c.as_str()
                        .ok_or_else(|| {
                            GkmError::Schema(format!("edge {i}: alpha entries must be strings"))
                        })
                        .and_then(parse_rat)
                })
                .collect::<Result<Vec<_>>>()?;
            unoriented.push((src.to_string(), dst.to_string(), Vector::new(coords)));
        }
        Skeleton::new(ctx, vertices, unoriented)
    }
}

/// A linear subspace of the ambient dual space, held in canonical form
/// (reduced row echelon basis) so equal spans compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subspace {
    basis: Vec<Vector>,
}

impl Subspace {
    /// The span of the given vectors, reduced to canonical form. Dependent
    /// or zero generators are fine; they just collapse.
    pub fn span(vectors: &[Vector]) -> Subspace {
        assert!(!vectors.is_empty());
        let dim = vectors[0].dim();
        let mut m = RatMatrix::new(vectors.iter().map(|v| v.coords.clone()).collect(), dim);
        m.rref();
        let basis = m
            .rows
            .into_iter()
            .filter(|r| r.iter().any(|c| !c.is_zero()))
            .map(Vector::new)
            .collect();
        Subspace { basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.first().map(Vector::dim).unwrap_or(0)
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Exact membership via rank of the augmented matrix.
    pub fn contains(&self, v: &Vector) -> bool {
        if v.is_zero() {
            return true;
        }
        let mut rows: Vec<Vec<BigRational>> =
            self.basis.iter().map(|b| b.coords.clone()).collect();
        rows.push(v.coords.clone());
        RatMatrix::new(rows, v.dim()).rank() == self.dim()
    }
}

/// Axiom A3 data: for each oriented edge `e`, the matching of the edges at
/// `i(e)` with the edges at `t(e)` together with the translation constants.
#[derive(Clone, Debug)]
pub struct Connection {
    /// Indexed by oriented edge id; entries are `(e_i, theta(e_i), c_i)`.
    pub maps: Vec<Vec<(EdgeId, EdgeId, BigRational)>>,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    /// Pairs of edges at a common vertex whose labels are parallel.
    pub a1_witnesses: Vec<(VertexId, EdgeId, EdgeId)>,
    /// Unoriented edges where the involution identity fails.
    pub a2_witnesses: Vec<EdgeId>,
    /// Oriented edges admitting no compatible matching.
    pub a3_witnesses: Vec<EdgeId>,
    pub connection: Option<Connection>,
}

impl AxiomReport {
    pub fn a1_pass(&self) -> bool {
        self.a1_witnesses.is_empty()
    }
    pub fn a2_pass(&self) -> bool {
        self.a2_witnesses.is_empty()
    }
    pub fn a3_pass(&self) -> bool {
        self.a3_witnesses.is_empty()
    }
    pub fn all_pass(&self) -> bool {
        self.a1_pass() && self.a2_pass() && self.a3_pass()
    }
}

/// The scalar `c` with `target = base + c * dir`, if one exists.
fn translation_constant(base: &Vector, target: &Vector, dir: &Vector) -> Option<BigRational> {
    let diff = target.sub(base);
    if diff.is_zero() {
        return Some(BigRational::zero());
    }
    let i = dir.coords.iter().position(|c| !c.is_zero())?;
    let c = &diff.coords[i] / &dir.coords[i];
    if diff == dir.scale(&c) {
        Some(c)
    } else {
        None
    }
}

/// Kuhn's augmenting-path matching; `adj[i]` lists admissible columns.
fn max_matching(adj: &[Vec<usize>], ncols: usize) -> Vec<Option<usize>> {
    let mut col_of_row = vec![None; adj.len()];
    let mut row_of_col: Vec<Option<usize>> = vec![None; ncols];
    fn augment(
        r: usize,
        adj: &[Vec<usize>],
        row_of_col: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &c in &adj[r] {
            if !seen[c] {
                seen[c] = true;
                if row_of_col[c].is_none()
                    || augment(row_of_col[c].unwrap(), adj, row_of_col, seen)
                {
                    row_of_col[c] = Some(r);
                    return true;
                }
            }
        }
        false
    }
    for r in 0..adj.len() {
        let mut seen = vec![false; ncols];
        augment(r, adj, &mut row_of_col, &mut seen);
    }
    for (c, r) in row_of_col.iter().enumerate() {
        if let Some(r) = r {
            col_of_row[*r] = Some(c);
        }
    }
    col_of_row
}

/// The lexicographically least perfect matching (rows in order, each taking
/// the least feasible column), or `None` if no perfect matching exists.
fn lex_least_perfect_matching(adj: &[Vec<usize>], ncols: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    if max_matching(adj, ncols)
        .iter()
        .filter(|c| c.is_some())
        .count()
        < n
    {
        return None;
    }
    let mut fixed: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; ncols];
    for r in 0..n {
        let mut chosen = None;
        for &c in &adj[r] {
            if used[c] {
                continue;
            }
            // keep rows > r matchable among the unused columns if we fix r -> c
            let rest: Vec<Vec<usize>> = (r + 1..n)
                .map(|rr| {
                    adj[rr]
                        .iter()
                        .copied()
                        .filter(|&cc| cc != c && !used[cc])
                        .collect()
                })
                .collect();
            let m = max_matching(&rest, ncols);
            if m.iter().filter(|x| x.is_some()).count() == rest.len() {
                chosen = Some(c);
                break;
            }
        }
        let c = chosen?;
        used[c] = true;
        fixed.push(c);
    }
    Some(fixed)
}

/// Checks the three axioms. A1: pairwise linear independence at each vertex.
/// A2: the reversal involution negates labels. A3: for each oriented edge a
/// bijection of the endpoint stars matching labels up to multiples of the
/// edge label; the validator returns the lexicographically least one.
#[allow(clippy::needless_range_loop)] // the edge id doubles as the map index
pub fn validate_axioms(s: &Skeleton) -> AxiomReport {
    let mut a1 = Vec::new();
    for v in 0..s.n_vertices() {
        let out = s.out_edges(v);
        for i in 0..out.len() {
            for j in (i + 1)..out.len() {
                if s.alpha(out[i]).is_parallel(s.alpha(out[j])) {
                    a1.push((v, out[i], out[j]));
                }
            }
        }
    }

    let mut a2 = Vec::new();
    for e in s.unoriented() {
        if *s.alpha(reversed(e)) != s.alpha(e).neg() {
            a2.push(e);
        }
    }

    let mut a3 = Vec::new();
    let mut maps = vec![Vec::new(); s.n_oriented_edges()];
    for e in 0..s.n_oriented_edges() {
        let (p, q) = (s.edge(e).src, s.edge(e).dst);
        let rows: Vec<EdgeId> = s.out_edges(p).iter().copied().filter(|&x| x != e).collect();
        let cols: Vec<EdgeId> = s
            .out_edges(q)
            .iter()
            .copied()
            .filter(|&x| x != reversed(e))
            .collect();
        let adj: Vec<Vec<usize>> = rows
            .iter()
            .map(|&ei| {
                cols.iter()
                    .enumerate()
                    .filter(|(_, &ej)| {
                        translation_constant(s.alpha(ei), s.alpha(ej), s.alpha(e)).is_some()
                    })
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        match lex_least_perfect_matching(&adj, cols.len()) {
            Some(assign) => {
                let mut entries = Vec::with_capacity(rows.len() + 1);
                for (i, &ei) in rows.iter().enumerate() {
                    let ej = cols[assign[i]];
                    let c = translation_constant(s.alpha(ei), s.alpha(ej), s.alpha(e)).unwrap();
                    entries.push((ei, ej, c));
                }
                // theta(e) = reversed(e), with alpha_rev = alpha_e - 2 alpha_e
                entries.push((e, reversed(e), BigRational::from_integer((-2).into())));
                maps[e] = entries;
            }
            None => a3.push(e),
        }
    }

    let connection = if a3.is_empty() {
        Some(Connection { maps })
    } else {
        None
    };
    AxiomReport {
        a1_witnesses: a1,
        a2_witnesses: a2,
        a3_witnesses: a3,
        connection,
    }
}

/// Re-checks a found connection against its defining identity.
pub fn connection_consistent(s: &Skeleton, conn: &Connection) -> bool {
    for e in 0..s.n_oriented_edges() {
        for (ei, ej, c) in &conn.maps[e] {
            if s.alpha(*ej) != &s.alpha(*ei).add(&s.alpha(e).scale(c)) {
                return false;
            }
        }
    }
    true
}

/// A connected piece of the subgraph induced by a subspace: the edges whose
/// label lies in the subspace, with the vertices they touch. Regular pieces
/// carry a skeleton of their own; irregular ones are only reported.
#[derive(Clone, Debug)]
pub struct InducedComponent {
    pub vertices: Vec<VertexId>,
    pub edge_reps: Vec<EdgeId>,
    pub valences: Vec<usize>,
    pub regular: bool,
    pub skeleton: Option<Skeleton>,
}

impl InducedComponent {
    pub fn valence(&self) -> Option<usize> {
        self.regular
            .then(|| self.valences.first().copied().unwrap_or(0))
    }
}

fn components_from_edges(s: &Skeleton, edge_reps: &[EdgeId]) -> Vec<InducedComponent> {
    let mut adj: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for &e in edge_reps {
        adj.entry(s.edge(e).src).or_default().push(e);
        adj.entry(s.edge(e).dst).or_default().push(e);
    }
    let mut seen: std::collections::BTreeSet<VertexId> = Default::default();
    let mut comps = Vec::new();
    let keys: Vec<VertexId> = adj.keys().copied().collect();
    for &start in &keys {
        if seen.contains(&start) {
            continue;
        }
        let mut stack = vec![start];
        let mut verts = Vec::new();
        let mut reps: std::collections::BTreeSet<EdgeId> = Default::default();
        seen.insert(start);
        while let Some(v) = stack.pop() {
            verts.push(v);
            for &e in &adj[&v] {
                reps.insert(e);
                let other = if s.edge(e).src == v {
                    s.edge(e).dst
                } else {
                    s.edge(e).src
                };
                if seen.insert(other) {
                    stack.push(other);
                }
            }
        }
        verts.sort();
        let valences: Vec<usize> = verts.iter().map(|v| adj[v].len()).collect();
        let regular = valences.windows(2).all(|w| w[0] == w[1]);
        let skeleton = regular.then(|| {
            Skeleton::new(
                s.ctx.clone(),
                verts
                    .iter()
                    .map(|&v| s.vertex_name(v).to_string())
                    .collect(),
                reps.iter()
                    .map(|&e| {
                        (
                            s.vertex_name(s.edge(e).src).to_string(),
                            s.vertex_name(s.edge(e).dst).to_string(),
                            s.alpha(e).clone(),
                        )
                    })
                    .collect(),
            )
            .expect("component assembly cannot fail")
        });
        comps.push(InducedComponent {
            vertices: verts,
            edge_reps: reps.into_iter().collect(),
            valences,
            regular,
            skeleton,
        });
    }
    comps
}

/// The connected components of the subgraph of edges labeled inside `h`.
/// Isolated vertices (no incident edge in the subspace) are omitted.
pub fn subskeleton(s: &Skeleton, h: &Subspace) -> Vec<InducedComponent> {
    let reps: Vec<EdgeId> = s.unoriented().filter(|&e| h.contains(s.alpha(e))).collect();
    components_from_edges(s, &reps)
}

/// Connected components of the whole skeleton.
pub fn connected_components(s: &Skeleton) -> Vec<Skeleton> {
    let reps: Vec<EdgeId> = s.unoriented().collect();
    components_from_edges(s, &reps)
        .into_iter()
        .map(|c| c.skeleton.expect("full components are regular"))
        .collect()
}

/// All two-dimensional spans of label pairs meeting at a vertex,
/// deduplicated by canonical form. These are exactly the subspaces whose
/// induced subgraph has two edges through some vertex.
pub fn enumerate_2d_subspaces(s: &Skeleton) -> Vec<Subspace> {
    let mut set: std::collections::BTreeSet<Subspace> = Default::default();
    for v in 0..s.n_vertices() {
        let out = s.out_edges(v);
        for i in 0..out.len() {
            for j in (i + 1)..out.len() {
                let sp = Subspace::span(&[s.alpha(out[i]).clone(), s.alpha(out[j]).clone()]);
                if sp.dim() == 2 {
                    set.insert(sp);
                }
            }
        }
    }
    set.into_iter().collect()
}
