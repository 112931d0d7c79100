//! Exact diameter of a tree plus one shortcut, with the pairs that attain it.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::diameter::{backbone, BackboneDecomposition, Part};
use crate::error::EvalError;
use crate::tree::{GeometricTree, Loc, Shortcut, TreePoint, VertexId};

/// Coarse classification of a diametral pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PairType {
    #[serde(rename = "x-y")]
    XY,
    #[serde(rename = "x-■")]
    XBox,
    #[serde(rename = "■-y")]
    BoxY,
    #[serde(rename = "■-■")]
    BoxBox,
    #[serde(rename = "■-o")]
    BoxO,
}

/// Fine classification: `▲` is a secondary leaf, `•` a cycle point on the tree,
/// `o` a point inside the shortcut.
///
/// `XO` and `OY` only arise when the shortcut is not anchored on the backbone
/// around the center; for backbone shortcuts the x and y partners on the cycle
/// always lie on the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairSubType {
    XY,
    XTri,
    XDot,
    TriY,
    DotY,
    TriTri,
    TriDot,
    TriO,
    XO,
    OY,
}

impl PairSubType {
    pub fn pair_type(self) -> PairType {
        use PairSubType::*;
        match self {
            XY => PairType::XY,
            XTri | XDot | XO => PairType::XBox,
            TriY | DotY | OY => PairType::BoxY,
            TriTri | TriDot => PairType::BoxBox,
            TriO => PairType::BoxO,
        }
    }

    fn symbols(self) -> (&'static str, &'static str) {
        use PairSubType::*;
        match self {
            XY => ("x", "y"),
            XTri => ("x", "▲"),
            XDot => ("x", "•"),
            TriY => ("▲", "y"),
            DotY => ("•", "y"),
            TriTri => ("▲", "▲"),
            TriDot => ("▲", "•"),
            TriO => ("▲", "o"),
            XO => ("x", "o"),
            OY => ("o", "y"),
        }
    }
}

impl fmt::Display for PairSubType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = self.symbols();
        write!(f, "{l}-{r}")
    }
}

impl Serialize for PairSubType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// How a diametral path travels between its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PathType {
    ViaShortcut,
    ViaTree,
    ViaP,
    ViaQ,
}

impl PathType {
    fn symbol(self) -> &'static str {
        match self {
            PathType::ViaShortcut => "pq",
            PathType::ViaTree => "T",
            PathType::ViaP => "p",
            PathType::ViaQ => "q",
        }
    }
}

/// One entry of a path state, e.g. `x-pq-▲`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathDescriptor {
    pub sub_type: PairSubType,
    pub via: PathType,
}

impl fmt::Display for PathDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = self.sub_type.symbols();
        write!(f, "{l}-{}-{r}", self.via.symbol())
    }
}

impl Serialize for PathDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An endpoint of a diametral pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Leaf(VertexId),
    /// A cycle point on the tree.
    OnTree(TreePoint),
    /// A point inside the shortcut, as the fraction of the way from p to q.
    OnShortcut(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AchievingPair {
    pub u: Endpoint,
    pub v: Endpoint,
    pub sub_type: PairSubType,
    pub path_types: BTreeSet<PathType>,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AugmentedDiagnosis {
    pub diameter: f64,
    pub shortcut_length: f64,
    pub tree_distance: f64,
    pub cycle_length: f64,
    /// Farthest cycle point from p.
    pub p_antipode: Endpoint,
    /// Farthest cycle point from q.
    pub q_antipode: Endpoint,
    pub achieving_pairs: Vec<AchievingPair>,
    pub pair_state: BTreeSet<PairType>,
    pub path_state: BTreeSet<PathDescriptor>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UsefulnessKind {
    Useful,
    Indifferent,
    Useless,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Usefulness {
    pub kind: UsefulnessKind,
    pub diameter_before: f64,
    pub diameter_after: f64,
}

/// Whether routing through the shortcut beats the tree path for an ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairUsefulness {
    /// `d(u,p) + |pq| + d(q,v) < d(u,v)`
    UsefulForward,
    /// `d(u,q) + |pq| + d(p,v) < d(u,v)`
    UsefulReversed,
    Indifferent,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    X,
    Y,
    Tri(usize),
    Other,
}

fn class_of(part: Part) -> Class {
    match part {
        Part::X => Class::X,
        Part::Y => Class::Y,
        Part::Secondary(i) => Class::Tri(i),
        Part::Backbone => Class::Other,
    }
}

fn leaf_pair_sub(a: Class, b: Class) -> Option<(PairSubType, bool)> {
    // bool: endpoints swapped relative to the sub-type's order
    use Class::*;
    match (a, b) {
        (X, Y) => Some((PairSubType::XY, false)),
        (Y, X) => Some((PairSubType::XY, true)),
        (X, Tri(_)) => Some((PairSubType::XTri, false)),
        (Tri(_), X) => Some((PairSubType::XTri, true)),
        (Tri(_), Y) => Some((PairSubType::TriY, false)),
        (Y, Tri(_)) => Some((PairSubType::TriY, true)),
        (Tri(i), Tri(j)) if i != j => Some((PairSubType::TriTri, false)),
        _ => None,
    }
}

fn cycle_sub(c: Class, on_tree: bool) -> Option<(PairSubType, bool)> {
    use Class::*;
    match (c, on_tree) {
        (X, true) => Some((PairSubType::XDot, false)),
        (X, false) => Some((PairSubType::XO, false)),
        (Y, true) => Some((PairSubType::DotY, true)),
        (Y, false) => Some((PairSubType::OY, true)),
        (Tri(_), true) => Some((PairSubType::TriDot, false)),
        (Tri(_), false) => Some((PairSubType::TriO, false)),
        (Other, _) => None,
    }
}

struct Frame {
    p: Loc,
    q: Loc,
    ell: f64,
    dpq: f64,
    cyc: f64,
}

impl Frame {
    fn new(tree: &GeometricTree, s: &Shortcut) -> Result<Self, EvalError> {
        let p = tree.locate(&s.p)?;
        let q = tree.locate(&s.q)?;
        let ell = tree.loc_coord(p).dist(tree.loc_coord(q));
        let dpq = tree.dist(p, q);
        Ok(Frame { p, q, ell, dpq, cyc: ell + dpq })
    }

    /// Cycle point at parameter `s` (tree arc p..q first, then the shortcut back to p).
    fn cycle_point(&self, tree: &GeometricTree, s: f64, tol: f64) -> (Endpoint, bool) {
        if s <= self.dpq + tol || self.ell <= 0.0 {
            let loc = tree.point_along(self.p, self.q, s.min(self.dpq));
            (Endpoint::OnTree(tree.to_point(loc)), true)
        } else {
            let frac = 1.0 - (s - self.dpq) / self.ell;
            (Endpoint::OnShortcut(frac.clamp(0.0, 1.0)), false)
        }
    }
}

/// Exact diameter of `T + pq` with its attaining pairs, classified.
pub fn augmented_diameter(
    tree: &GeometricTree,
    decomposition: &BackboneDecomposition,
    shortcut: &Shortcut,
) -> Result<AugmentedDiagnosis, EvalError> {
    let fr = Frame::new(tree, shortcut)?;
    let tol = tree.tol_len();
    let dp = tree.dists_from_loc(fr.p);
    let dq = tree.dists_from_loc(fr.q);
    let leaves: Vec<usize> = (0..tree.n()).filter(|&i| tree.adj(i).len() == 1).collect();
    let half = fr.cyc / 2.0;

    // leaf-to-cycle: attachment offset and the antipode's cycle parameter
    let attach: Vec<(f64, f64)> = leaves
        .iter()
        .map(|&u| {
            let g = ((dp[u] + dq[u] - fr.dpq) / 2.0).max(0.0);
            let s = ((dp[u] - dq[u] + fr.dpq) / 2.0).clamp(0.0, fr.dpq);
            let mut anti = s + half;
            if anti > fr.cyc {
                anti -= fr.cyc;
            }
            (g, anti)
        })
        .collect();

    let mut best = half.max(decomposition.delta);
    let mut leaf_pairs = Vec::new();
    for (i, &u) in leaves.iter().enumerate() {
        best = best.max(attach[i].0 + half);
        for &v in &leaves[i + 1..] {
            let t = tree.vdist(u, v);
            let r1 = dp[u] + fr.ell + dq[v];
            let r2 = dq[u] + fr.ell + dp[v];
            let val = t.min(r1).min(r2);
            best = best.max(val);
            leaf_pairs.push((u, v, t, r1.min(r2), val));
        }
    }
    let diameter = best;

    let mut achieving = Vec::new();
    for &(u, v, t, via, val) in &leaf_pairs {
        if val < diameter - tol {
            continue;
        }
        let (cu, cv) = (class_of(decomposition.part[u]), class_of(decomposition.part[v]));
        let Some((sub, swapped)) = leaf_pair_sub(cu, cv) else { continue };
        let mut path_types = BTreeSet::new();
        if t <= val + tol {
            path_types.insert(PathType::ViaTree);
        }
        if via <= val + tol {
            path_types.insert(PathType::ViaShortcut);
        }
        let (a, b) = if swapped { (v, u) } else { (u, v) };
        achieving.push(AchievingPair {
            u: Endpoint::Leaf(tree.id(a)),
            v: Endpoint::Leaf(tree.id(b)),
            sub_type: sub,
            path_types,
            length: val,
        });
    }
    for (i, &u) in leaves.iter().enumerate() {
        let (g, anti) = attach[i];
        let val = g + half;
        if val < diameter - tol {
            continue;
        }
        let (cp, on_tree) = fr.cycle_point(tree, anti, tol);
        let Some((sub, swapped)) = cycle_sub(class_of(decomposition.part[u]), on_tree) else {
            continue;
        };
        let path_types: BTreeSet<PathType> = if on_tree {
            [PathType::ViaShortcut, PathType::ViaTree].into()
        } else {
            [PathType::ViaP, PathType::ViaQ].into()
        };
        let leaf = Endpoint::Leaf(tree.id(u));
        let (a, b) = if swapped { (cp, leaf) } else { (leaf, cp) };
        achieving.push(AchievingPair { u: a, v: b, sub_type: sub, path_types, length: val });
    }

    let pair_state = achieving.iter().map(|p| p.sub_type.pair_type()).collect();
    let path_state = achieving
        .iter()
        .flat_map(|p| p.path_types.iter().map(|&via| PathDescriptor { sub_type: p.sub_type, via }))
        .collect();
    let (p_antipode, _) = fr.cycle_point(tree, half, tol);
    let mut q_anti = fr.dpq - half;
    if q_anti < 0.0 {
        q_anti += fr.cyc;
    }
    let (q_antipode, _) = fr.cycle_point(tree, q_anti, tol);

    Ok(AugmentedDiagnosis {
        diameter,
        shortcut_length: fr.ell,
        tree_distance: fr.dpq,
        cycle_length: fr.cyc,
        p_antipode,
        q_antipode,
        achieving_pairs: achieving,
        pair_state,
        path_state,
    })
}

/// Diameter only, for brute-force loops.
pub(crate) fn diameter_value(tree: &GeometricTree, delta: f64, leaves: &[usize], p: Loc, q: Loc) -> f64 {
    let ell = tree.loc_coord(p).dist(tree.loc_coord(q));
    let dpq = tree.dist(p, q);
    let half = (ell + dpq) / 2.0;
    let dp = tree.dists_from_loc(p);
    let dq = tree.dists_from_loc(q);
    let mut best = half.max(delta);
    for (i, &u) in leaves.iter().enumerate() {
        best = best.max((dp[u] + dq[u] - dpq).max(0.0) / 2.0 + half);
        for &v in &leaves[i + 1..] {
            let via = (dp[u] + dq[v]).min(dq[u] + dp[v]) + ell;
            if via <= best {
                continue;
            }
            best = best.max(tree.vdist(u, v).min(via));
        }
    }
    best
}

/// Compare `diam(T + pq)` against `diam(T)`.
pub fn classify_usefulness(tree: &GeometricTree, shortcut: &Shortcut) -> Result<Usefulness, EvalError> {
    let bd = backbone(tree);
    let after = augmented_diameter(tree, &bd, shortcut)?.diameter;
    Ok(usefulness_of(bd.diameter, after, tree.tol_len()))
}

pub(crate) fn usefulness_of(before: f64, after: f64, tol: f64) -> Usefulness {
    let kind = if after < before - tol {
        UsefulnessKind::Useful
    } else if after > before + tol {
        UsefulnessKind::Useless
    } else {
        UsefulnessKind::Indifferent
    };
    Usefulness { kind, diameter_before: before, diameter_after: after }
}

/// Whether the shortcut shortens the route from `u` to `v`, and in which orientation.
pub fn pair_is_useful(
    tree: &GeometricTree,
    shortcut: &Shortcut,
    u: &TreePoint,
    v: &TreePoint,
) -> Result<PairUsefulness, EvalError> {
    let fr = Frame::new(tree, shortcut)?;
    let lu = tree.locate(u)?;
    let lv = tree.locate(v)?;
    let tol = tree.tol_len();
    let direct = tree.dist(lu, lv);
    let fwd = tree.dist(lu, fr.p) + fr.ell + tree.dist(fr.q, lv);
    let rev = tree.dist(lu, fr.q) + fr.ell + tree.dist(fr.p, lv);
    Ok(if fwd < direct - tol {
        PairUsefulness::UsefulForward
    } else if rev < direct - tol {
        PairUsefulness::UsefulReversed
    } else {
        PairUsefulness::Indifferent
    })
}
