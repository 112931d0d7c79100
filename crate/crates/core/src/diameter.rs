//! Diameter, absolute center and the backbone decomposition.

use std::collections::HashSet;

use serde::Serialize;

use crate::tree::{GeometricTree, Loc, PathTrace, TreePoint, VertexId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiameterResult {
    pub diameter: f64,
    pub diametral_leaf_pairs: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterResult {
    pub center: TreePoint,
    pub eccentricity: f64,
}

/// One secondary sub-tree hanging off an interior backbone vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondarySubtree {
    pub root: TreePoint,
    /// Arc length of the root from `a` along the backbone.
    pub arc: f64,
    pub height: f64,
    /// A farthest leaf from the root.
    pub leaf: VertexId,
    pub diameter: f64,
}

/// Which part of the decomposition a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Part {
    X,
    Y,
    Secondary(usize),
    Backbone,
}

/// The backbone `a..b`, its center and the sub-trees hanging off it.
#[derive(Debug, Clone, Serialize)]
pub struct BackboneDecomposition {
    pub diameter: f64,
    pub a: TreePoint,
    pub b: TreePoint,
    pub backbone_path: PathTrace,
    pub is_point: bool,
    pub is_straight: bool,
    pub center: TreePoint,
    /// d(a, c)
    pub center_arc: f64,
    /// d(a, b)
    pub length: f64,
    pub x: VertexId,
    pub y: VertexId,
    pub h_x: f64,
    pub h_y: f64,
    pub secondary: Vec<SecondarySubtree>,
    pub delta: f64,
    pub h_max_secondary: f64,
    #[serde(skip)]
    pub(crate) bb: Vec<usize>,
    #[serde(skip)]
    pub(crate) bb_arc: Vec<f64>,
    #[serde(skip)]
    pub(crate) part: Vec<Part>,
    #[serde(skip)]
    pub(crate) center_loc: Loc,
    #[serde(skip)]
    pub(crate) tol: f64,
}

// Shared pass: diametral path between the two sweep endpoints and the far leaves.
struct Sweep {
    d: f64,
    x: usize,
    y: usize,
    path: Vec<usize>,
    arc: Vec<f64>,
    center: Loc,
    center_arc: f64,
}

fn farthest(tree: &GeometricTree, dist: &[f64], tol: f64) -> usize {
    let best = dist.iter().copied().fold(f64::MIN, f64::max);
    (0..tree.n()).find(|&i| dist[i] >= best - tol && tree.adj(i).len() == 1).unwrap_or(0)
}

fn sweep(tree: &GeometricTree) -> Sweep {
    let tol = tree.tol_len();
    let d0 = tree.dists_from_loc(Loc::Vertex(0));
    let u = farthest(tree, &d0, tol);
    let du = tree.dists_from_loc(Loc::Vertex(u));
    let v = farthest(tree, &du, tol);
    let (x, y) = if u < v { (u, v) } else { (v, u) };
    let path = tree.vertex_path(x, y);
    let mut arc = vec![0.0];
    for w in path.windows(2) {
        let e = tree.edge_idx(w[0], w[1]).expect("path edge");
        arc.push(arc.last().unwrap() + tree.len_of(e));
    }
    let d = *arc.last().unwrap();
    let half = d / 2.0;
    let k = arc.iter().position(|&s| s >= half - tol).expect("midpoint on path");
    let center = if (arc[k] - half).abs() <= tol {
        Loc::Vertex(path[k])
    } else {
        let (p, q) = (path[k - 1], path[k]);
        let e = tree.edge_idx(p, q).unwrap();
        let frac = (half - arc[k - 1]) / (arc[k] - arc[k - 1]);
        let t = if tree.edge_ends(e).0 == p { frac } else { 1.0 - frac };
        tree.loc_on_edge(e, t)
    };
    let center_arc = match center {
        Loc::Vertex(_) => arc[k],
        _ => half,
    };
    Sweep { d, x, y, path, arc, center, center_arc }
}

pub fn continuous_diameter(tree: &GeometricTree) -> DiameterResult {
    let s = sweep(tree);
    let tol = tree.tol_len();
    let dc = tree.dists_from_loc(s.center);
    let pos = project(tree, &s.path);
    let far: Vec<usize> = (0..tree.n())
        .filter(|&i| tree.adj(i).len() == 1 && dc[i] >= s.d / 2.0 - tol)
        .collect();
    let mut pairs = Vec::new();
    let mut diameter = 0.0f64;
    for (k, &u) in far.iter().enumerate() {
        for &v in &far[k + 1..] {
            // far leaves meeting the path on the same side of c cannot be diametral
            let (su, sv) = (side(&s, pos[u]), side(&s, pos[v]));
            if su == sv && su != Side::Center {
                continue;
            }
            if tree.vdist(u, v) >= s.d - tol {
                let len = tree
                    .network_distance(&tree.vpoint(u), &tree.vpoint(v))
                    .expect("vertices are on the tree");
                diameter = diameter.max(len);
                let (iu, iv) = (tree.id(u), tree.id(v));
                pairs.push((iu.min(iv), iu.max(iv)));
            }
        }
    }
    if pairs.is_empty() {
        diameter = s.d;
    }
    pairs.sort_unstable();
    DiameterResult { diameter, diametral_leaf_pairs: pairs }
}

pub fn absolute_center(tree: &GeometricTree) -> CenterResult {
    let s = sweep(tree);
    CenterResult { center: tree.to_point(s.center), eccentricity: s.d / 2.0 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
    Center,
}

fn side(s: &Sweep, k: usize) -> Side {
    match s.center {
        Loc::Vertex(c) if s.path[k] == c => Side::Center,
        _ if s.arc[k] < s.center_arc => Side::Left,
        _ => Side::Right,
    }
}

/// For each vertex, the index along `path` of the vertex where it attaches.
fn project(tree: &GeometricTree, path: &[usize]) -> Vec<usize> {
    let mut pos = vec![usize::MAX; tree.n()];
    let mut stack = Vec::new();
    for (k, &v) in path.iter().enumerate() {
        pos[v] = k;
        stack.push(v);
    }
    while let Some(v) = stack.pop() {
        for &(w, _) in tree.adj(v) {
            if pos[w] == usize::MAX {
                pos[w] = pos[v];
                stack.push(w);
            }
        }
    }
    pos
}

/// Height and farthest vertex from `root` inside `members`, plus the diameter of `members`.
fn subtree_stats(tree: &GeometricTree, root: usize, members: &[bool]) -> (f64, usize, f64) {
    let far_from = |s: usize| {
        let mut best = (0.0f64, s);
        let mut stack = vec![(s, usize::MAX, 0.0)];
        while let Some((v, from, d)) = stack.pop() {
            if d > best.0 || (d == best.0 && v < best.1) {
                best = (d, v);
            }
            for &(w, e) in tree.adj(v) {
                if w != from && members[w] {
                    stack.push((w, v, d + tree.len_of(e)));
                }
            }
        }
        best
    };
    let (h, leaf) = far_from(root);
    let (diam, _) = far_from(leaf);
    (h, leaf, diam)
}

pub fn backbone(tree: &GeometricTree) -> BackboneDecomposition {
    let s = sweep(tree);
    let tol = tree.tol_len();
    let n = tree.n();
    let dc = tree.dists_from_loc(s.center);
    let pos = project(tree, &s.path);
    let far: Vec<usize> =
        (0..n).filter(|&i| tree.adj(i).len() == 1 && dc[i] >= s.d / 2.0 - tol).collect();
    let center_vertex_k = match s.center {
        Loc::Vertex(c) => s.path.iter().position(|&v| v == c),
        _ => None,
    };
    let is_point = far.iter().any(|&f| Some(pos[f]) == center_vertex_k);

    let (ka, kb) = if is_point {
        let k = center_vertex_k.unwrap();
        (k, k)
    } else {
        let ka = far
            .iter()
            .map(|&f| pos[f])
            .filter(|&k| s.arc[k] < s.center_arc)
            .max()
            .unwrap_or(0);
        let kb = far
            .iter()
            .map(|&f| pos[f])
            .filter(|&k| s.arc[k] > s.center_arc)
            .min()
            .unwrap_or(s.path.len() - 1);
        (ka, kb)
    };
    let bb: Vec<usize> = s.path[ka..=kb].to_vec();
    let bb_arc: Vec<f64> = s.arc[ka..=kb].iter().map(|t| t - s.arc[ka]).collect();
    let (ia, ib) = (bb[0], *bb.last().unwrap());
    let a = tree.vpoint(ia);
    let b = tree.vpoint(ib);
    let backbone_path = tree.tree_path(&a, &b).expect("backbone endpoints are vertices");
    let length = *bb_arc.last().unwrap();
    let center_arc = s.center_arc - s.arc[ka];
    let chord = tree.coord(ia).dist(tree.coord(ib));
    let is_straight = chord >= length - tol;

    let mut part = vec![Part::Backbone; n];
    let mut secondary = Vec::new();
    let mut delta = 0.0f64;
    let (h_x, h_y);
    if is_point {
        // three or more branches meet at c: x's branch, y's branch and the rest
        let c = ia;
        let cut: HashSet<usize> = tree.adj(c).iter().map(|&(_, e)| e).collect();
        let branch_of = |v: usize| tree.component(v, &cut);
        let xn = s.path[ka - 1];
        let yn = s.path[ka + 1];
        for v in branch_of(xn) {
            part[v] = Part::X;
        }
        for v in branch_of(yn) {
            part[v] = Part::Y;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| v != c && part[v] == Part::Backbone).collect();
        let with_c = |label: Option<Part>| {
            let mut m = vec![false; n];
            m[c] = true;
            for v in 0..n {
                if v != c && (Some(part[v]) == label || (label.is_none() && rest.contains(&v))) {
                    m[v] = true;
                }
            }
            subtree_stats(tree, c, &m)
        };
        let (hx, _, dx) = with_c(Some(Part::X));
        let (hy, _, dy) = with_c(Some(Part::Y));
        h_x = hx;
        h_y = hy;
        delta = delta.max(dx).max(dy);
        if !rest.is_empty() {
            let (h, leaf, d) = with_c(None);
            for &v in &rest {
                part[v] = Part::Secondary(0);
            }
            delta = delta.max(d);
            secondary.push(SecondarySubtree {
                root: a,
                arc: 0.0,
                height: h,
                leaf: tree.id(leaf),
                diameter: d,
            });
        }
    } else {
        let cut: HashSet<usize> = bb
            .windows(2)
            .map(|w| tree.edge_idx(w[0], w[1]).expect("backbone edge"))
            .collect();
        let mut stats_of = |root: usize, label: Part| {
            let comp = tree.component(root, &cut);
            let mut m = vec![false; n];
            for &v in &comp {
                m[v] = true;
                if v != root || !matches!(label, Part::Secondary(_)) {
                    part[v] = label;
                }
            }
            (comp.len(), subtree_stats(tree, root, &m))
        };
        let (_, (hx, _, dx)) = stats_of(ia, Part::X);
        let (_, (hy, _, dy)) = stats_of(ib, Part::Y);
        h_x = hx;
        h_y = hy;
        delta = delta.max(dx).max(dy);
        for k in 1..bb.len().saturating_sub(1) {
            let r = bb[k];
            if tree.adj(r).len() <= 2 {
                continue;
            }
            let i = secondary.len();
            let (_, (h, leaf, d)) = stats_of(r, Part::Secondary(i));
            delta = delta.max(d);
            secondary.push(SecondarySubtree {
                root: tree.vpoint(r),
                arc: bb_arc[k],
                height: h,
                leaf: tree.id(leaf),
                diameter: d,
            });
        }
    }
    let h_max_secondary = secondary.iter().map(|s| s.height).fold(0.0, f64::max);

    BackboneDecomposition {
        diameter: s.d,
        a,
        b,
        backbone_path,
        is_point,
        is_straight,
        center: tree.to_point(s.center),
        center_arc,
        length,
        x: tree.id(s.x),
        y: tree.id(s.y),
        h_x,
        h_y,
        secondary,
        delta,
        h_max_secondary,
        bb,
        bb_arc,
        part,
        center_loc: s.center,
        tol,
    }
}

impl BackboneDecomposition {
    /// True when some shortcut strictly lowers the diameter.
    pub fn has_useful_shortcut(&self) -> bool {
        !self.is_point && !self.is_straight
    }

    /// Which part of the decomposition a vertex belongs to.
    pub fn part_of(&self, tree: &GeometricTree, id: VertexId) -> Option<Part> {
        tree.idx(id).map(|i| self.part[i])
    }

    /// Tree point at arc length `s` from `a` along the backbone.
    pub fn point_at(&self, tree: &GeometricTree, s: f64) -> TreePoint {
        tree.to_point(self.loc_at(tree, s))
    }

    pub(crate) fn loc_at(&self, tree: &GeometricTree, s: f64) -> Loc {
        let arcs = &self.bb_arc;
        if s <= 0.0 || arcs.len() == 1 {
            return Loc::Vertex(self.bb[0]);
        }
        if s >= self.length {
            return Loc::Vertex(*self.bb.last().unwrap());
        }
        let k = arcs.partition_point(|&t| t <= s);
        // arcs[k-1] <= s < arcs[k]
        if s == arcs[k - 1] {
            return Loc::Vertex(self.bb[k - 1]);
        }
        let (u, v) = (self.bb[k - 1], self.bb[k]);
        let e = tree.edge_idx(u, v).expect("backbone edge");
        let frac = (s - arcs[k - 1]) / (arcs[k] - arcs[k - 1]);
        let t = if tree.edge_ends(e).0 == u { frac } else { 1.0 - frac };
        tree.loc_on_edge(e, t)
    }

    /// Arc length from `a` of a point known to lie on the backbone.
    pub fn arc_of(&self, tree: &GeometricTree, p: &TreePoint) -> Option<f64> {
        let loc = tree.locate(p).ok()?;
        let tol = self.tol;
        let d_a = tree.dist(Loc::Vertex(self.bb[0]), loc);
        let d_b = tree.dist(Loc::Vertex(*self.bb.last().unwrap()), loc);
        (d_a + d_b <= self.length + tol).then_some(d_a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_l() -> GeometricTree {
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

    fn forkbent() -> GeometricTree {
        GeometricTree::new(
            vec![(0, 0.0, 0.0), (1, 2.0, 1.0), (2, 4.0, 0.0), (3, 5.0, 1.0), (4, 5.0, -1.0)],
            vec![(0, 1), (1, 2), (2, 3), (2, 4)],
        )
        .unwrap()
    }

    #[test]
    fn l_shape() {
        let t = t_l();
        let d = continuous_diameter(&t);
        assert_eq!(d.diameter, 2.0);
        assert_eq!(d.diametral_leaf_pairs, vec![(0, 2)]);
        let c = absolute_center(&t);
        assert_eq!(c.center, TreePoint::new(1, 0, 0.0));
        let bd = backbone(&t);
        assert!(!bd.is_point && !bd.is_straight);
        assert_eq!((bd.a.as_vertex(), bd.b.as_vertex()), (Some(0), Some(2)));
        assert!(bd.secondary.is_empty());
        assert_eq!((bd.h_x, bd.h_y, bd.delta), (0.0, 0.0, 0.0));
    }

    #[test]
    fn hook_is_point() {
        let t = t_hook();
        let d = continuous_diameter(&t);
        assert_eq!(d.diameter, 8.0);
        assert_eq!(d.diametral_leaf_pairs, vec![(0, 2), (0, 3), (2, 3)]);
        let bd = backbone(&t);
        assert!(bd.is_point);
        assert_eq!(bd.a.as_vertex(), Some(1));
        assert_eq!(bd.delta, 4.0);
        assert!(!bd.has_useful_shortcut());
    }

    #[test]
    fn forkbent_fixture() {
        let t = forkbent();
        let d = continuous_diameter(&t);
        let want = 2.0 * 5f64.sqrt() + 2f64.sqrt();
        assert!((d.diameter - want).abs() < 1e-12);
        assert_eq!(d.diametral_leaf_pairs, vec![(0, 3), (0, 4)]);
        let c = absolute_center(&t);
        assert_eq!(c.center.edge, (1, 2));
        assert!((c.center.lambda - 0.316_227_8).abs() < 1e-6);
        let bd = backbone(&t);
        assert_eq!((bd.a.as_vertex(), bd.b.as_vertex()), (Some(0), Some(2)));
        assert!((bd.h_y - 2f64.sqrt()).abs() < 1e-12);
        assert!(bd.secondary.is_empty());
        assert!(!bd.is_straight);
        assert_eq!(bd.part_of(&t, 3), Some(Part::Y));
    }

    #[test]
    fn straight_path() {
        let t = GeometricTree::new(vec![(0, 0.0, 0.0), (1, 2.0, 0.0)], vec![(0, 1)]).unwrap();
        let bd = backbone(&t);
        assert!(bd.is_straight && !bd.is_point);
        assert!(!bd.has_useful_shortcut());
        assert_eq!(bd.point_at(&t, 1.0), TreePoint::new(0, 1, 0.5));
    }
}
