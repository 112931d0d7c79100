//! Planar straight-line trees and metric queries on points along their edges.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::TreeError;

pub type VertexId = i64;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, o: Point) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        Point::new((1.0 - t) * self.x + t * o.x, (1.0 - t) * self.y + t * o.y)
    }
}

/// A location on an edge: `lambda` is the fraction of the way from `edge.0` to `edge.1`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TreePoint {
    pub edge: (VertexId, VertexId),
    pub lambda: f64,
}

/// Tree-independent identity of a [`TreePoint`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Canonical {
    Vertex(VertexId),
    Edge { lo: VertexId, hi: VertexId, lambda: f64 },
}

impl Canonical {
    fn key(&self) -> (u8, VertexId, VertexId, f64) {
        match *self {
            Canonical::Vertex(v) => (0, v, v, 0.0),
            Canonical::Edge { lo, hi, lambda } => (1, lo, hi, lambda),
        }
    }

    fn total_cmp(&self, other: &Canonical) -> Ordering {
        let (a, b) = (self.key(), other.key());
        a.0.cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.total_cmp(&b.3))
    }
}

impl TreePoint {
    pub fn new(u: VertexId, v: VertexId, lambda: f64) -> Self {
        TreePoint { edge: (u, v), lambda }
    }

    pub fn canonical(&self) -> Canonical {
        let (u, v) = self.edge;
        if self.lambda <= 0.0 {
            Canonical::Vertex(u)
        } else if self.lambda >= 1.0 {
            Canonical::Vertex(v)
        } else if u <= v {
            Canonical::Edge { lo: u, hi: v, lambda: self.lambda }
        } else {
            Canonical::Edge { lo: v, hi: u, lambda: 1.0 - self.lambda }
        }
    }

    /// The vertex this point sits on, if any.
    pub fn as_vertex(&self) -> Option<VertexId> {
        match self.canonical() {
            Canonical::Vertex(v) => Some(v),
            Canonical::Edge { .. } => None,
        }
    }
}

impl PartialEq for TreePoint {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

/// Both endpoints of an added straight segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shortcut {
    pub p: TreePoint,
    pub q: TreePoint,
}

/// A simple tree path: its endpoints and the vertices between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathTrace {
    pub points: Vec<TreePoint>,
    pub length: f64,
}

/// Index-based location used internally. `t` runs from `edges[e].0` to `edges[e].1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Loc {
    Vertex(usize),
    Edge { e: usize, t: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: VertexId,
    x: f64,
    y: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<[VertexId; 2]>,
}

/// An immutable geometric tree. Edge lengths are Euclidean.
#[derive(Debug, Clone)]
pub struct GeometricTree {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    coords: Vec<Point>,
    edges: Vec<(usize, usize)>,
    lengths: Vec<f64>,
    adj: Vec<Vec<(usize, usize)>>,
    edge_of: HashMap<(usize, usize), usize>,
    // rooted at index 0
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    root_dist: Vec<f64>,
    tin: Vec<usize>,
    tout: Vec<usize>,
    up: Vec<Vec<usize>>,
    scale: f64,
    tol_factor: f64,
}

/// Parse and validate a tree from its JSON document.
pub fn load_tree(document: &str) -> Result<GeometricTree, TreeError> {
    let doc: TreeDoc = serde_json::from_str(document).map_err(|e| TreeError::Parse(e.to_string()))?;
    GeometricTree::new(
        doc.vertices.iter().map(|v| (v.id, v.x, v.y)).collect(),
        doc.edges.iter().map(|e| (e[0], e[1])).collect(),
    )
}

impl GeometricTree {
    pub fn new(
        vertices: Vec<(VertexId, f64, f64)>,
        edge_list: Vec<(VertexId, VertexId)>,
    ) -> Result<Self, TreeError> {
        let n = vertices.len();
        if n < 2 {
            return Err(TreeError::NotATree(format!("{n} vertices; at least two are needed")));
        }
        let mut index = HashMap::with_capacity(n);
        let mut ids = Vec::with_capacity(n);
        let mut coords = Vec::with_capacity(n);
        for &(id, x, y) in &vertices {
            if !x.is_finite() || !y.is_finite() {
                return Err(TreeError::Parse(format!("vertex {id} has a non-finite coordinate")));
            }
            if index.insert(id, ids.len()).is_some() {
                return Err(TreeError::DuplicateVertexId(id));
            }
            ids.push(id);
            coords.push(Point::new(x, y));
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut edge_of = HashMap::with_capacity(edge_list.len());
        for &(u, v) in &edge_list {
            let (Some(&iu), Some(&iv)) = (index.get(&u), index.get(&v)) else {
                return Err(TreeError::InvalidEdgeReference(u, v));
            };
            if iu == iv {
                return Err(TreeError::NotATree(format!("self-loop at vertex {u}")));
            }
            if edge_of.insert((iu.min(iv), iu.max(iv)), edges.len()).is_some() {
                return Err(TreeError::NotATree(format!("parallel edge ({u}, {v})")));
            }
            edges.push((iu, iv));
        }
        if edges.len() != n - 1 {
            return Err(TreeError::NotATree(format!(
                "{} edges for {n} vertices",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        let lengths: Vec<f64> = edges.iter().map(|&(u, v)| coords[u].dist(coords[v])).collect();
        for (e, &len) in lengths.iter().enumerate() {
            if len <= 0.0 {
                let (u, v) = edges[e];
                return Err(TreeError::ZeroLengthEdge(ids[u], ids[v]));
            }
        }

        // iterative DFS from vertex 0
        let mut parent = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut root_dist = vec![0.0; n];
        let mut tin = vec![usize::MAX; n];
        let mut tout = vec![0usize; n];
        let mut clock = 0;
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        tin[0] = clock;
        clock += 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let (w, e) = adj[v][*next];
                *next += 1;
                if tin[w] != usize::MAX {
                    continue;
                }
                parent[w] = Some((v, e));
                depth[w] = depth[v] + 1;
                root_dist[w] = root_dist[v] + lengths[e];
                tin[w] = clock;
                clock += 1;
                stack.push((w, 0));
            } else {
                tout[v] = clock;
                stack.pop();
            }
        }
        if tin.contains(&usize::MAX) {
            return Err(TreeError::NotATree("graph is disconnected".into()));
        }

        let levels = (usize::BITS - n.leading_zeros()) as usize;
        let mut up = vec![(0..n).map(|v| parent[v].map_or(v, |(p, _)| p)).collect::<Vec<_>>()];
        for k in 1..levels.max(1) {
            let prev = &up[k - 1];
            let row = (0..n).map(|v| prev[prev[v]]).collect();
            up.push(row);
        }

        let (mut lo, mut hi) = (coords[0], coords[0]);
        for c in &coords {
            lo = Point::new(lo.x.min(c.x), lo.y.min(c.y));
            hi = Point::new(hi.x.max(c.x), hi.y.max(c.y));
        }
        let scale = lo.dist(hi);

        Ok(GeometricTree {
            ids,
            index,
            coords,
            edges,
            lengths,
            adj,
            edge_of,
            parent,
            depth,
            root_dist,
            tin,
            tout,
            up,
            scale,
            tol_factor: 1.0,
        })
    }

    /// Serialize back to the JSON tree schema, preserving input order.
    pub fn to_json(&self) -> String {
        let doc = TreeDoc {
            vertices: self
                .ids
                .iter()
                .zip(&self.coords)
                .map(|(&id, c)| VertexDoc { id, x: c.x, y: c.y })
                .collect(),
            edges: self.edges.iter().map(|&(u, v)| [self.ids[u], self.ids[v]]).collect(),
        };
        serde_json::to_string(&doc).expect("tree document serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.ids
    }

    /// Edges as id pairs in input order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().map(|&(u, v)| (self.ids[u], self.ids[v]))
    }

    pub fn coordinates(&self, id: VertexId) -> Option<Point> {
        self.index.get(&id).map(|&i| self.coords[i])
    }

    pub fn edge_length(&self, u: VertexId, v: VertexId) -> Result<f64, TreeError> {
        let e = self.edge_between(u, v)?;
        Ok(self.lengths[e])
    }

    pub fn degree(&self, id: VertexId) -> Option<usize> {
        self.index.get(&id).map(|&i| self.adj[i].len())
    }

    pub fn leaves(&self) -> Vec<VertexId> {
        (0..self.ids.len()).filter(|&i| self.adj[i].len() == 1).map(|i| self.ids[i]).collect()
    }

    /// Diagonal of the bounding box.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Multiply the length tolerance by `factor`, for ill-conditioned inputs.
    pub fn with_tolerance_scale(mut self, factor: f64) -> Self {
        self.tol_factor = factor;
        self
    }

    /// Absolute length tolerance, `1e-9 * scale` unless rescaled.
    pub fn tol_len(&self) -> f64 {
        1e-9 * self.scale * self.tol_factor
    }

    /// A handle for a vertex, expressed on one of its incident edges.
    pub fn vertex_point(&self, id: VertexId) -> Option<TreePoint> {
        self.index.get(&id).map(|&i| self.vpoint(i))
    }

    pub fn point_coordinates(&self, a: &TreePoint) -> Result<(f64, f64), TreeError> {
        self.locate(a)?;
        let pu = self.coords[self.index[&a.edge.0]];
        let pv = self.coords[self.index[&a.edge.1]];
        let p = pu.lerp(pv, a.lambda);
        Ok((p.x, p.y))
    }

    pub fn network_distance(&self, a: &TreePoint, b: &TreePoint) -> Result<f64, TreeError> {
        Ok(self.tree_path(a, b)?.length)
    }

    pub fn euclidean_distance(&self, a: &TreePoint, b: &TreePoint) -> Result<f64, TreeError> {
        let (ax, ay) = self.point_coordinates(a)?;
        let (bx, by) = self.point_coordinates(b)?;
        Ok(Point::new(ax, ay).dist(Point::new(bx, by)))
    }

    pub fn tree_path(&self, a: &TreePoint, b: &TreePoint) -> Result<PathTrace, TreeError> {
        let la = self.locate(a)?;
        let lb = self.locate(b)?;
        let (mut points, mut segs) = (Vec::new(), Vec::new());
        if a == b {
            return Ok(PathTrace { points: vec![*a], length: 0.0 });
        }
        if let (Loc::Edge { e: ea, t: ta }, Loc::Edge { e: eb, t: tb }) = (la, lb) {
            if ea == eb {
                let len = (ta - tb).abs() * self.lengths[ea];
                return Ok(PathTrace { points: vec![*a, *b], length: len });
            }
        }
        let (xa, da) = self.exit_toward(la, lb);
        let (xb, db) = self.exit_toward(lb, la);
        points.push(*a);
        if matches!(la, Loc::Edge { .. }) {
            segs.push(da);
        }
        let verts = self.vertex_path(xa, xb);
        for w in verts.windows(2) {
            segs.push(self.lengths[self.edge_of[&(w[0].min(w[1]), w[0].max(w[1]))]]);
        }
        if matches!(lb, Loc::Edge { .. }) {
            segs.push(db);
        }
        for &v in &verts {
            let vp = self.vpoint(v);
            if vp != *a && vp != *b {
                points.push(vp);
            }
        }
        points.push(*b);
        // canonical summation order keeps the length exactly symmetric
        let length = if a.canonical().total_cmp(&b.canonical()) == Ordering::Greater {
            segs.iter().rev().sum()
        } else {
            segs.iter().sum()
        };
        Ok(PathTrace { points, length })
    }

    pub fn distances_from(&self, a: &TreePoint) -> Result<BTreeMap<VertexId, f64>, TreeError> {
        let loc = self.locate(a)?;
        let d = self.dists_from_loc(loc);
        Ok(self.ids.iter().copied().zip(d).collect())
    }

    // ---- crate-internal helpers -------------------------------------------------

    pub(crate) fn n(&self) -> usize {
        self.ids.len()
    }

    pub(crate) fn id(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub(crate) fn idx(&self, id: VertexId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub(crate) fn coord(&self, i: usize) -> Point {
        self.coords[i]
    }

    pub(crate) fn adj(&self, i: usize) -> &[(usize, usize)] {
        &self.adj[i]
    }

    pub(crate) fn edge_ends(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub(crate) fn len_of(&self, e: usize) -> f64 {
        self.lengths[e]
    }

    pub(crate) fn edge_idx(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_of.get(&(u.min(v), u.max(v))).copied()
    }

    pub(crate) fn vpoint(&self, i: usize) -> TreePoint {
        let (w, _) = self.adj[i][0];
        TreePoint::new(self.ids[i], self.ids[w], 0.0)
    }

    fn edge_between(&self, u: VertexId, v: VertexId) -> Result<usize, TreeError> {
        let bad = || TreeError::InvalidEdgeReference(u, v);
        let iu = self.idx(u).ok_or_else(bad)?;
        let iv = self.idx(v).ok_or_else(bad)?;
        self.edge_idx(iu, iv).ok_or_else(bad)
    }

    pub(crate) fn locate(&self, a: &TreePoint) -> Result<Loc, TreeError> {
        if !(0.0..=1.0).contains(&a.lambda) {
            return Err(TreeError::LambdaOutOfRange(a.lambda));
        }
        let e = self.edge_between(a.edge.0, a.edge.1)?;
        let iu = self.index[&a.edge.0];
        let t = if self.edges[e].0 == iu { a.lambda } else { 1.0 - a.lambda };
        Ok(self.loc_on_edge(e, t))
    }

    pub(crate) fn loc_on_edge(&self, e: usize, t: f64) -> Loc {
        if t <= 0.0 {
            Loc::Vertex(self.edges[e].0)
        } else if t >= 1.0 {
            Loc::Vertex(self.edges[e].1)
        } else {
            Loc::Edge { e, t }
        }
    }

    pub(crate) fn to_point(&self, loc: Loc) -> TreePoint {
        match loc {
            Loc::Vertex(i) => self.vpoint(i),
            Loc::Edge { e, t } => {
                let (u, v) = self.edges[e];
                TreePoint::new(self.ids[u], self.ids[v], t)
            }
        }
    }

    pub(crate) fn loc_coord(&self, loc: Loc) -> Point {
        match loc {
            Loc::Vertex(i) => self.coords[i],
            Loc::Edge { e, t } => {
                let (u, v) = self.edges[e];
                self.coords[u].lerp(self.coords[v], t)
            }
        }
    }

    fn in_subtree(&self, x: usize, root: usize) -> bool {
        self.tin[root] <= self.tin[x] && self.tout[x] <= self.tout[root]
    }

    /// Child endpoint (deeper side) of an edge.
    fn child_of(&self, e: usize) -> usize {
        let (u, v) = self.edges[e];
        if self.depth[u] > self.depth[v] {
            u
        } else {
            v
        }
    }

    /// A vertex that lies on the far side of `loc` from any edge it is interior to.
    fn anchor(&self, loc: Loc) -> usize {
        match loc {
            Loc::Vertex(i) => i,
            Loc::Edge { e, .. } => self.child_of(e),
        }
    }

    /// Endpoint of `from`'s edge through which the path toward `to` leaves, and the distance to it.
    fn exit_toward(&self, from: Loc, to: Loc) -> (usize, f64) {
        match from {
            Loc::Vertex(i) => (i, 0.0),
            Loc::Edge { e, t } => {
                let c = self.child_of(e);
                let (u, v) = self.edges[e];
                let target_below = match to {
                    Loc::Edge { e: e2, t: t2 } if e2 == e => {
                        // same edge: side decided by parameter order
                        let toward_v = t2 > t;
                        (c == v) == toward_v
                    }
                    _ => self.in_subtree(self.anchor(to), c),
                };
                let x = if target_below { c } else if c == u { v } else { u };
                let d = if x == u { t * self.lengths[e] } else { (1.0 - t) * self.lengths[e] };
                (x, d)
            }
        }
    }

    pub(crate) fn lca(&self, mut a: usize, mut b: usize) -> usize {
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let mut diff = self.depth[a] - self.depth[b];
        let mut k = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                a = self.up[k][a];
            }
            diff >>= 1;
            k += 1;
        }
        if a == b {
            return a;
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][a] != self.up[k][b] {
                a = self.up[k][a];
                b = self.up[k][b];
            }
        }
        self.up[0][a]
    }

    pub(crate) fn vdist(&self, a: usize, b: usize) -> f64 {
        let l = self.lca(a, b);
        self.root_dist[a] + self.root_dist[b] - 2.0 * self.root_dist[l]
    }

    /// O(log n) distance between two locations.
    pub(crate) fn dist(&self, a: Loc, b: Loc) -> f64 {
        if let (Loc::Edge { e: ea, t: ta }, Loc::Edge { e: eb, t: tb }) = (a, b) {
            if ea == eb {
                return (ta - tb).abs() * self.lengths[ea];
            }
        }
        let (xa, da) = self.exit_toward(a, b);
        let (xb, db) = self.exit_toward(b, a);
        da + self.vdist(xa, xb) + db
    }

    /// The location at arc length `s` from `a` along the tree path to `b` (clamped).
    pub(crate) fn point_along(&self, a: Loc, b: Loc, s: f64) -> Loc {
        if s <= 0.0 {
            return a;
        }
        if let (Loc::Edge { e: ea, t: ta }, Loc::Edge { e: eb, t: tb }) = (a, b) {
            if ea == eb {
                let len = self.lengths[ea];
                let dt = (s / len).min((tb - ta).abs());
                return self.loc_on_edge(ea, if tb > ta { ta + dt } else { ta - dt });
            }
        }
        let (xa, da) = self.exit_toward(a, b);
        if s < da {
            if let Loc::Edge { e, t } = a {
                let dt = s / self.lengths[e];
                let toward_second = xa == self.edges[e].1;
                return self.loc_on_edge(e, if toward_second { t + dt } else { t - dt });
            }
        }
        let mut rem = s - da;
        let (xb, _) = self.exit_toward(b, a);
        let verts = self.vertex_path(xa, xb);
        for w in verts.windows(2) {
            let e = self.edge_idx(w[0], w[1]).expect("path edge");
            let len = self.lengths[e];
            if rem < len {
                let frac = rem / len;
                let t = if self.edges[e].0 == w[0] { frac } else { 1.0 - frac };
                return self.loc_on_edge(e, t);
            }
            rem -= len;
        }
        if let Loc::Edge { e, t } = b {
            let len = self.lengths[e];
            let db = if xb == self.edges[e].0 { t * len } else { (1.0 - t) * len };
            if rem < db {
                let frac = rem / len;
                return self.loc_on_edge(e, if xb == self.edges[e].0 { frac } else { 1.0 - frac });
            }
            return b;
        }
        Loc::Vertex(xb)
    }

    /// Vertices on the path between two vertices, inclusive.
    pub(crate) fn vertex_path(&self, a: usize, b: usize) -> Vec<usize> {
        let l = self.lca(a, b);
        let mut left = vec![];
        let mut v = a;
        while v != l {
            left.push(v);
            v = self.parent[v].expect("non-root").0;
        }
        left.push(l);
        let mut right = vec![];
        let mut v = b;
        while v != l {
            right.push(v);
            v = self.parent[v].expect("non-root").0;
        }
        left.extend(right.into_iter().rev());
        left
    }

    /// Distances from a location to every vertex, by index.
    pub(crate) fn dists_from_loc(&self, loc: Loc) -> Vec<f64> {
        let n = self.n();
        let mut d = vec![f64::NAN; n];
        let mut stack = Vec::new();
        match loc {
            Loc::Vertex(i) => {
                d[i] = 0.0;
                stack.push(i);
            }
            Loc::Edge { e, t } => {
                let (u, v) = self.edges[e];
                d[u] = t * self.lengths[e];
                d[v] = (1.0 - t) * self.lengths[e];
                stack.push(u);
                stack.push(v);
            }
        }
        while let Some(v) = stack.pop() {
            for &(w, e) in &self.adj[v] {
                if d[w].is_nan() {
                    d[w] = d[v] + self.lengths[e];
                    stack.push(w);
                }
            }
        }
        d
    }

    /// Vertex set of the component containing `start` once `cut` edges are removed.
    pub(crate) fn component(&self, start: usize, cut: &HashSet<usize>) -> Vec<usize> {
        let mut seen = HashSet::from([start]);
        let mut stack = vec![start];
        let mut out = vec![];
        while let Some(v) = stack.pop() {
            out.push(v);
            for &(w, e) in &self.adj[v] {
                if !cut.contains(&e) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn t_l() -> GeometricTree {
        GeometricTree::new(vec![(0, 0.0, 0.0), (1, 1.0, 0.0), (2, 1.0, 1.0)], vec![(0, 1), (1, 2)])
            .unwrap()
    }

    fn t_hook() -> GeometricTree {
        GeometricTree::new(
            vec![(0, 0.0, 0.0), (1, 4.0, 0.0), (2, 4.0, 4.0), (3, 4.0, -4.0)],
            vec![(0, 1), (1, 2), (1, 3)],
        )
        .unwrap()
    }

    #[test]
    fn lengths_and_coordinates() {
        let t = t_l();
        assert_eq!(t.edge_length(0, 1).unwrap(), 1.0);
        assert_eq!(t.point_coordinates(&TreePoint::new(0, 1, 0.5)).unwrap(), (0.5, 0.0));
        let h = t_hook();
        assert_eq!(h.point_coordinates(&TreePoint::new(1, 2, 0.25)).unwrap(), (4.0, 1.0));
    }

    #[test]
    fn canonical_vertex_identity() {
        assert_eq!(TreePoint::new(0, 1, 1.0), TreePoint::new(1, 2, 0.0));
        assert_eq!(TreePoint::new(0, 1, 0.25), TreePoint::new(1, 0, 0.75));
        assert_ne!(TreePoint::new(0, 1, 0.25), TreePoint::new(0, 1, 0.5));
    }

    #[test]
    fn paths_on_same_edge_and_across() {
        let t = t_l();
        let a = TreePoint::new(0, 1, 0.2);
        let b = TreePoint::new(1, 0, 0.3);
        assert!((t.network_distance(&a, &b).unwrap() - 0.5).abs() < 1e-15);
        let c = TreePoint::new(2, 1, 0.5);
        let p = t.tree_path(&a, &c).unwrap();
        assert_eq!(p.points.len(), 3);
        assert!((p.length - 1.3).abs() < 1e-15);
        assert_eq!(p.length, t.tree_path(&c, &a).unwrap().length);
        assert!((t.dist(t.locate(&a).unwrap(), t.locate(&c).unwrap()) - 1.3).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(load_tree("{"), Err(TreeError::Parse(_))));
        let weighted = r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0}],"edges":[[0,1]],"weights":[2]}"#;
        assert!(matches!(load_tree(weighted), Err(TreeError::Parse(_))));
        let dup = GeometricTree::new(vec![(0, 0.0, 0.0), (0, 1.0, 0.0)], vec![(0, 0)]);
        assert_eq!(dup.unwrap_err(), TreeError::DuplicateVertexId(0));
        let zero = GeometricTree::new(vec![(0, 0.0, 0.0), (1, 0.0, 0.0)], vec![(0, 1)]);
        assert_eq!(zero.unwrap_err(), TreeError::ZeroLengthEdge(0, 1));
        let missing = GeometricTree::new(vec![(0, 0.0, 0.0), (1, 1.0, 0.0)], vec![(0, 5)]);
        assert_eq!(missing.unwrap_err(), TreeError::InvalidEdgeReference(0, 5));
        let t = t_l();
        assert!(matches!(
            t.network_distance(&TreePoint::new(0, 2, 0.5), &TreePoint::new(0, 1, 0.0)),
            Err(TreeError::InvalidEdgeReference(0, 2))
        ));
        assert!(matches!(
            t.point_coordinates(&TreePoint::new(0, 1, 1.5)),
            Err(TreeError::LambdaOutOfRange(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let t = t_hook();
        let s = t.to_json();
        assert_eq!(load_tree(&s).unwrap().to_json(), s);
    }
}
