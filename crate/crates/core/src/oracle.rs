//! Brute-force ground truth and instance generators.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::augmented::diameter_value;
use crate::diameter::backbone;
use crate::error::OracleError;
use crate::tree::{GeometricTree, Loc, Shortcut, VertexId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub shortcut: Shortcut,
    pub diameter: f64,
    pub resolution: f64,
    pub evaluations: usize,
    pub restricted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Uniform,
    Caterpillar,
    Balanced,
}

impl std::str::FromStr for Shape {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Shape::Uniform),
            "caterpillar" => Ok(Shape::Caterpillar),
            "balanced" => Ok(Shape::Balanced),
            _ => Err(format!("unknown shape {s:?}")),
        }
    }
}

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("TREECUT_THREADS").ok().and_then(|s| s.parse().ok()) {
            b = b.num_threads(n);
        }
        b.build().expect("thread pool")
    })
}

/// Arc-length samples `0, h, 2h, ..` up to and including `len`.
fn samples(len: f64, h: f64) -> Vec<f64> {
    let mut out: Vec<f64> = (0..).map(|k| k as f64 * h).take_while(|&s| s < len).collect();
    out.push(len);
    out
}

/// Smallest diameter over a grid of shortcut placements.
///
/// Restricted mode pairs points on `a..c` with points on `c..b`; full mode pairs
/// samples from every edge. The degenerate shortcut at the center is always included.
pub fn grid_search(tree: &GeometricTree, h: f64, restrict_to_backbone: bool) -> Result<GridResult, OracleError> {
    if !(h.is_finite() && h > 0.0) {
        return Err(OracleError::InvalidResolution(h));
    }
    let bd = backbone(tree);
    if h > bd.diameter / 4.0 {
        return Err(OracleError::ResolutionTooCoarse { h, diameter: bd.diameter });
    }
    let leaves: Vec<usize> = (0..tree.n()).filter(|&i| tree.adj(i).len() == 1).collect();
    let c = bd.center_loc;
    let mut placements: Vec<(Loc, Loc)> = vec![];
    if restrict_to_backbone {
        // ordered by arc from a so that ties go to the smallest arcs; u = w = 0 is the center
        let ps: Vec<Loc> =
            samples(bd.center_arc, h).iter().rev().map(|u| bd.loc_at(tree, bd.center_arc - u)).collect();
        let qs: Vec<Loc> = samples(bd.length - bd.center_arc, h)
            .iter()
            .map(|w| bd.loc_at(tree, bd.center_arc + w))
            .collect();
        for &p in &ps {
            for &q in &qs {
                placements.push((p, q));
            }
        }
    } else {
        placements.push((c, c));
        let mut pts: Vec<Loc> = (0..tree.n()).map(Loc::Vertex).collect();
        for e in 0..tree.edge_count() {
            let len = tree.len_of(e);
            for s in samples(len, h) {
                if s > 0.0 && s < len {
                    pts.push(Loc::Edge { e, t: s / len });
                }
            }
        }
        for (i, &p) in pts.iter().enumerate() {
            for &q in &pts[i..] {
                placements.push((p, q));
            }
        }
    }
    let evaluations = placements.len();
    let (best_i, best) = pool().install(|| {
        placements
            .par_iter()
            .enumerate()
            .map(|(i, &(p, q))| (i, diameter_value(tree, bd.delta, &leaves, p, q)))
            .reduce(|| (usize::MAX, f64::INFINITY), |a, b| if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a })
    });
    let (p, q) = placements[best_i];
    Ok(GridResult {
        shortcut: Shortcut { p: tree.to_point(p), q: tree.to_point(q) },
        diameter: best,
        resolution: h,
        evaluations,
        restricted: restrict_to_backbone,
    })
}

fn round12(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

fn build(coords: Vec<(f64, f64)>, edges: Vec<(VertexId, VertexId)>) -> GeometricTree {
    let vs = coords.into_iter().enumerate().map(|(i, (x, y))| (i as VertexId, round12(x), round12(y))).collect();
    GeometricTree::new(vs, edges).expect("generator emits valid trees")
}

/// Deterministic random tree with `n >= 2` vertices and ids `0..n`.
pub fn random_tree(seed: u64, n: usize, shape: Shape) -> GeometricTree {
    let n = n.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match shape {
        Shape::Uniform => {
            let mut coords = vec![(0.0, 0.0)];
            let mut edges = vec![];
            for i in 1..n {
                let parent = rng.gen_range(0..i);
                let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let len: f64 = rng.gen_range(0.3..1.5);
                let (px, py) = coords[parent];
                coords.push((px + len * ang.cos(), py + len * ang.sin()));
                edges.push((parent as VertexId, i as VertexId));
            }
            build(coords, edges)
        }
        Shape::Caterpillar => {
            let spine = if n <= 3 { n } else { (n / 2).max(3) };
            let mut coords = vec![(0.0, 0.0)];
            let mut arcs = vec![0.0];
            let mut heading: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let mut edges = vec![];
            for i in 1..spine {
                heading += rng.gen_range(-1.2..1.2);
                let len: f64 = rng.gen_range(0.5..1.5);
                let (px, py) = coords[i - 1];
                coords.push((px + len * heading.cos(), py + len * heading.sin()));
                arcs.push(arcs[i - 1] + len);
                edges.push(((i - 1) as VertexId, i as VertexId));
            }
            let total = arcs[spine - 1];
            for i in spine..n {
                let root = rng.gen_range(1..spine - 1);
                let room = arcs[root].min(total - arcs[root]);
                let len = rng.gen_range(0.1..0.8) * room;
                let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let (px, py) = coords[root];
                coords.push((px + len * ang.cos(), py + len * ang.sin()));
                edges.push((root as VertexId, i as VertexId));
            }
            build(coords, edges)
        }
        Shape::Balanced => {
            let mut coords = Vec::with_capacity(n);
            let mut edges = vec![];
            for i in 0..n {
                let depth = (usize::BITS - 1 - (i + 1).leading_zeros()) as i32;
                let slot = (i + 1 - (1 << depth)) as f64;
                let width = 2f64.powi(depth);
                let x = (slot + 0.5) / width * 8.0 + rng.gen_range(-0.1..0.1) / width;
                let y = -(depth as f64) + rng.gen_range(-0.2..0.2);
                coords.push((x, y));
                if i > 0 {
                    edges.push((((i - 1) / 2) as VertexId, i as VertexId));
                }
            }
            build(coords, edges)
        }
    }
}

/// A symmetric caterpillar with `8l + 5` vertices whose optimal-shortcut search
/// passes every pendant many times.
///
/// Each half is a straight run from the center carrying `l` short pendants,
/// followed by a zigzag of `2l + 1` segments that swings between horizontal
/// offsets `0.5` and `l + 0.5`. A shortcut between mirrored zigzag points has
/// length twice the current offset, so it grows and shrinks `l` times while its
/// far cycle points sweep back and forth across the pendants.
pub fn stress_family(l: usize) -> GeometricTree {
    let l = l.max(1);
    let lf = l as f64;
    let rise = lf;
    let mut coords = vec![(0.0, 0.0)];
    let mut edges = vec![];
    for sign in [1.0, -1.0] {
        let mut prev = 0usize;
        let push = |coords: &mut Vec<(f64, f64)>, edges: &mut Vec<(VertexId, VertexId)>, from: usize, p: (f64, f64)| {
            coords.push(p);
            let id = coords.len() - 1;
            edges.push((from as VertexId, id as VertexId));
            id
        };
        for j in 1..=l {
            let r = push(&mut coords, &mut edges, prev, (sign * j as f64, 0.0));
            push(&mut coords, &mut edges, r, (sign * j as f64, -0.25));
            prev = r;
        }
        prev = push(&mut coords, &mut edges, prev, (sign * (lf + 0.5), 0.0));
        for z in 1..=2 * l + 1 {
            let x = if z % 2 == 1 { 0.5 } else { lf + 0.5 };
            prev = push(&mut coords, &mut edges, prev, (sign * x, z as f64 * rise));
        }
    }
    build(coords, edges)
}
