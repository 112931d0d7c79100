//! Fast exact evaluation of backbone shortcuts on the compressed caterpillar.
//!
//! Positions are `u` (distance of p from the center toward a) and `w`
//! (distance of q from the center toward b). For fixed `u` every candidate
//! distance splits into a part that never decreases in `w` and a part that
//! never increases in `w`, so the best `q` is found by bisection.

use std::collections::BTreeSet;

use crate::augmented::{PairSubType, PairType, PathDescriptor, PathType};
use crate::diameter::BackboneDecomposition;
use crate::smawk::{wedge_from_parts, WedgePath};
use crate::tree::{GeometricTree, Point};

/// Range maximum with leftmost ties.
#[derive(Debug, Clone)]
struct SparseMax {
    table: Vec<Vec<(f64, usize)>>,
}

fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

impl SparseMax {
    fn new(vals: &[f64]) -> Self {
        let mut table = vec![vals.iter().copied().enumerate().map(|(i, v)| (v, i)).collect::<Vec<_>>()];
        let mut w = 1;
        while 2 * w <= vals.len() {
            let prev = table.last().unwrap();
            let row = (0..=vals.len() - 2 * w).map(|i| better(prev[i], prev[i + w])).collect();
            table.push(row);
            w *= 2;
        }
        SparseMax { table }
    }

    /// Maximum over `lo..hi`.
    fn query(&self, lo: usize, hi: usize) -> Option<(f64, usize)> {
        if lo >= hi {
            return None;
        }
        let k = (usize::BITS - 1 - (hi - lo).leading_zeros()) as usize;
        let row = &self.table[k];
        Some(better(row[lo], row[hi - (1 << k)]))
    }

    /// Every index in `lo..hi` whose value is at least `thr`.
    fn report(&self, lo: usize, hi: usize, thr: f64, out: &mut Vec<usize>) {
        if let Some((v, i)) = self.query(lo, hi) {
            if v >= thr {
                out.push(i);
                self.report(lo, i, thr, out);
                self.report(i + 1, hi, thr, out);
            }
        }
    }
}

/// Which candidate constraints take part in the balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceLaw {
    /// Every candidate pair.
    Full,
    /// Pairs of two secondary leaves are left out.
    Modified,
}

/// A tight candidate at some shortcut position. Indices refer to secondary sub-trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Label {
    XpqY,
    XTY,
    XDot,
    DotY,
    XTTri(usize),
    XpqTri(usize),
    TriTY(usize),
    TripqY(usize),
    TriDot(usize),
    TriO(usize),
    TriTri(usize, usize, bool),
    Delta,
}

impl Label {
    pub(crate) fn descriptors(self) -> Vec<PathDescriptor> {
        use PairSubType as S;
        use PathType as P;
        let d = |sub_type, via| PathDescriptor { sub_type, via };
        match self {
            Label::XpqY => vec![d(S::XY, P::ViaShortcut)],
            Label::XTY => vec![d(S::XY, P::ViaTree)],
            Label::XDot => vec![d(S::XDot, P::ViaShortcut), d(S::XDot, P::ViaTree)],
            Label::DotY => vec![d(S::DotY, P::ViaShortcut), d(S::DotY, P::ViaTree)],
            Label::XTTri(_) => vec![d(S::XTri, P::ViaTree)],
            Label::XpqTri(_) => vec![d(S::XTri, P::ViaShortcut)],
            Label::TriTY(_) => vec![d(S::TriY, P::ViaTree)],
            Label::TripqY(_) => vec![d(S::TriY, P::ViaShortcut)],
            Label::TriDot(_) => vec![d(S::TriDot, P::ViaShortcut), d(S::TriDot, P::ViaTree)],
            Label::TriO(_) => vec![d(S::TriO, P::ViaP), d(S::TriO, P::ViaQ)],
            Label::TriTri(_, _, true) => vec![d(S::TriTri, P::ViaShortcut)],
            Label::TriTri(_, _, false) => vec![d(S::TriTri, P::ViaTree)],
            Label::Delta => vec![],
        }
    }

    pub(crate) fn pair_type(self) -> Option<PairType> {
        self.descriptors().first().map(|d| d.sub_type.pair_type())
    }

    /// Relabel pendant indices and swap the x and y roles.
    fn mirrored(self, k: usize) -> Label {
        let m = |i: usize| k - 1 - i;
        match self {
            Label::XpqY | Label::XTY | Label::Delta => self,
            Label::XDot => Label::DotY,
            Label::DotY => Label::XDot,
            Label::XTTri(i) => Label::TriTY(m(i)),
            Label::XpqTri(i) => Label::TripqY(m(i)),
            Label::TriTY(i) => Label::XTTri(m(i)),
            Label::TripqY(i) => Label::XpqTri(m(i)),
            Label::TriDot(i) => Label::TriDot(m(i)),
            Label::TriO(i) => Label::TriO(m(i)),
            Label::TriTri(i, j, v) => Label::TriTri(m(j), m(i), v),
        }
    }
}

pub(crate) type Labels = BTreeSet<Label>;

pub(crate) fn path_state_of(labels: &Labels) -> BTreeSet<PathDescriptor> {
    labels.iter().flat_map(|l| l.descriptors()).collect()
}

pub(crate) fn pair_state_of(labels: &Labels) -> BTreeSet<PairType> {
    labels.iter().filter_map(|l| l.pair_type()).collect()
}

/// Shortcut geometry at one position.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Geo {
    pub sp: f64,
    pub sq: f64,
    pub lp: f64,
    pub rq: f64,
    pub ell: f64,
    pub cyc: f64,
}

/// The largest candidate of each family at one position.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Families {
    pub xy: f64,
    pub xdot: f64,
    pub doty: f64,
    pub x_tri: f64,
    pub tri_y: f64,
    pub tri_cyc: f64,
    pub tri_tri: f64,
    pub delta: f64,
}

impl Families {
    /// Candidates that never decrease as q moves toward b.
    pub fn inc(&self, law: BalanceLaw) -> f64 {
        let base = self.xdot.max(self.x_tri).max(self.tri_cyc).max(self.delta);
        match law {
            BalanceLaw::Full => base.max(self.tri_tri),
            BalanceLaw::Modified => base,
        }
    }

    /// Candidates that never increase as q moves toward b.
    pub fn dec(&self) -> f64 {
        self.xy.max(self.doty).max(self.tri_y)
    }

    pub fn value(&self, law: BalanceLaw) -> f64 {
        self.inc(law).max(self.dec())
    }

    pub fn full(&self) -> f64 {
        self.value(BalanceLaw::Full)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Caterpillar {
    pts: Vec<Point>,
    arcs: Vec<f64>,
    pub len: f64,
    /// d(a, c)
    pub a: f64,
    /// d(c, b)
    pub b: f64,
    pub hx: f64,
    pub hy: f64,
    pub delta: f64,
    pub t: Vec<f64>,
    pub h: Vec<f64>,
    plus: SparseMax,
    minus: SparseMax,
    height: SparseMax,
    pub tol: f64,
    pub eps: f64,
    pub mirrored: bool,
}

impl Caterpillar {
    pub fn new(tree: &GeometricTree, bd: &BackboneDecomposition) -> Self {
        let pts = bd.bb.iter().map(|&v| tree.coord(v)).collect();
        let t: Vec<f64> = bd.secondary.iter().map(|s| s.arc).collect();
        let h: Vec<f64> = bd.secondary.iter().map(|s| s.height).collect();
        Self::build(
            pts,
            bd.bb_arc.clone(),
            bd.center_arc,
            bd.h_x,
            bd.h_y,
            bd.delta,
            t,
            h,
            tree.tol_len(),
            tree.scale(),
            false,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        pts: Vec<Point>,
        arcs: Vec<f64>,
        a: f64,
        hx: f64,
        hy: f64,
        delta: f64,
        t: Vec<f64>,
        h: Vec<f64>,
        tol: f64,
        scale: f64,
        mirrored: bool,
    ) -> Self {
        let len = *arcs.last().unwrap();
        let plus: Vec<f64> = t.iter().zip(&h).map(|(t, h)| h + t).collect();
        let minus: Vec<f64> = t.iter().zip(&h).map(|(t, h)| h - t).collect();
        Caterpillar {
            pts,
            len,
            a,
            b: len - a,
            hx,
            hy,
            delta,
            plus: SparseMax::new(&plus),
            minus: SparseMax::new(&minus),
            height: SparseMax::new(&h),
            arcs,
            t,
            h,
            tol,
            eps: 1e-13 * scale.max(f64::MIN_POSITIVE),
            mirrored,
        }
    }

    /// The same caterpillar seen from b.
    pub fn mirror(&self) -> Self {
        let pts = self.pts.iter().rev().copied().collect();
        let arcs = self.arcs.iter().rev().map(|s| self.len - s).collect();
        let t = self.t.iter().rev().map(|s| self.len - s).collect();
        let h = self.h.iter().rev().copied().collect();
        let scale = self.eps / 1e-13;
        Self::build(
            pts, arcs, self.b, self.hy, self.hx, self.delta, t, h, self.tol, scale, !self.mirrored,
        )
    }

    pub fn k(&self) -> usize {
        self.t.len()
    }

    pub fn mirror_label(&self, l: Label) -> Label {
        l.mirrored(self.k())
    }

    /// Backbone vertex arcs, from a.
    pub fn vertex_arcs(&self) -> &[f64] {
        &self.arcs
    }

    pub fn point(&self, s: f64) -> Point {
        let s = s.clamp(0.0, self.len);
        let k = self.arcs.partition_point(|&x| x <= s);
        if k == 0 {
            return self.pts[0];
        }
        if k >= self.arcs.len() {
            return *self.pts.last().unwrap();
        }
        let (s0, s1) = (self.arcs[k - 1], self.arcs[k]);
        self.pts[k - 1].lerp(self.pts[k], (s - s0) / (s1 - s0))
    }

    pub fn geo(&self, u: f64, w: f64) -> Geo {
        let sp = self.a - u;
        let sq = self.a + w;
        let ell = self.point(sp).dist(self.point(sq));
        Geo {
            sp,
            sq,
            lp: self.hx + sp,
            rq: self.hy + (self.len - sq),
            ell,
            cyc: ell + (sq - sp),
        }
    }

    fn idx_le(&self, s: f64) -> usize {
        self.t.partition_point(|&x| x <= s)
    }

    fn idx_lt(&self, s: f64) -> usize {
        self.t.partition_point(|&x| x < s)
    }

    pub fn families(&self, u: f64, w: f64, with_tri_tri: bool) -> Families {
        let g = self.geo(u, w);
        self.families_at(&g, with_tri_tri)
    }

    pub(crate) fn families_at(&self, g: &Geo, with_tri_tri: bool) -> Families {
        let ninf = f64::NEG_INFINITY;
        let half = g.cyc / 2.0;
        let mx = (g.sp + g.sq + g.ell) / 2.0;
        let my = (g.sp + g.sq - g.ell) / 2.0;
        let i_in_lo = self.idx_lt(g.sp);
        let i_in_hi = self.idx_le(g.sq);
        let i_mx = self.idx_le(mx).min(i_in_hi);
        let i_my = self.idx_lt(my).max(i_in_lo);
        let k = self.k();

        let xt = self.plus.query(0, i_mx).map_or(ninf, |(v, _)| self.hx + v);
        let xpq = self.minus.query(i_mx, i_in_hi).map_or(ninf, |(v, _)| g.lp + g.ell + g.sq + v);
        let ty = self.minus.query(i_my, k).map_or(ninf, |(v, _)| self.hy + self.len + v);
        let pqy = self.plus.query(i_in_lo, i_my).map_or(ninf, |(v, _)| g.rq + g.ell - g.sp + v);
        let tri_cyc = self.height.query(i_in_lo, i_in_hi).map_or(ninf, |(v, _)| v + half);

        let mut fam = Families {
            xy: g.lp + g.ell + g.rq,
            xdot: g.lp + half,
            doty: g.rq + half,
            x_tri: xt.max(xpq),
            tri_y: ty.max(pqy),
            tri_cyc,
            tri_tri: ninf,
            delta: self.delta,
        };
        if with_tri_tri && i_in_hi >= i_in_lo + 2 {
            // cheap bound first: two tallest inside heights plus half the cycle
            let top = tri_cyc - half;
            let rest = fam.full();
            if 2.0 * top + half > rest - self.tol {
                fam.tri_tri = self.tri_tri_max(i_in_lo, i_in_hi, g.cyc).0;
            }
        }
        fam
    }

    /// Largest distance between two inside secondary leaves, with the pair.
    pub(crate) fn tri_tri_max(&self, lo: usize, hi: usize, cyc: f64) -> (f64, usize, usize) {
        let half = cyc / 2.0;
        let mut best = (f64::NEG_INFINITY, lo, lo);
        let mut ptr = lo;
        let mut pre: Option<(f64, usize)> = None;
        for j in lo + 1..hi {
            while ptr < j && self.t[ptr] < self.t[j] - half {
                let c = (self.h[ptr] + self.t[ptr], ptr);
                pre = Some(pre.map_or(c, |p| better(p, c)));
                ptr += 1;
            }
            if let Some((v, i)) = self.minus.query(ptr, j) {
                let val = self.h[j] + self.t[j] + v;
                if val > best.0 {
                    best = (val, i, j);
                }
            }
            if let Some((v, i)) = pre {
                let val = self.h[j] - self.t[j] + cyc + v;
                if val > best.0 {
                    best = (val, i, j);
                }
            }
        }
        best
    }

    /// Exact diameter of the augmented tree for a backbone shortcut.
    pub fn value(&self, u: f64, w: f64) -> f64 {
        self.families(u, w, true).full()
    }

    /// Best `w` for fixed `u` under `law`: the crossing of the two monotone parts.
    /// On a flat stretch the midpoint is returned.
    pub fn balance(&self, u: f64, law: BalanceLaw) -> f64 {
        self.balance_in(u, law, 0.0, self.b)
    }

    pub fn balance_in(&self, u: f64, law: BalanceLaw, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return lo;
        }
        let (mut w_lo, mut w_hi) = self.crossing(u, BalanceLaw::Modified, lo, hi);
        if law == BalanceLaw::Full {
            // the secondary-pair term only grows with w and the decreasing side only
            // shrinks, so if it stays below at the upper crossing it never matters
            let g = self.geo(u, w_hi);
            let (i_lo, i_hi) = (self.idx_lt(g.sp), self.idx_le(g.sq));
            let tt = if i_hi >= i_lo + 2 { self.tri_tri_max(i_lo, i_hi, g.cyc).0 } else { f64::NEG_INFINITY };
            if tt >= self.families_at(&g, false).dec() - self.eps {
                (w_lo, w_hi) = self.crossing(u, BalanceLaw::Full, lo, hi);
            }
        }
        if w_hi - w_lo > 1e3 * self.eps {
            0.5 * (w_lo + w_hi)
        } else {
            w_lo
        }
    }

    /// First `w` where the increasing part reaches the decreasing one, from
    /// below and from above the tolerance band.
    fn crossing(&self, u: f64, law: BalanceLaw, lo: f64, hi: f64) -> (f64, f64) {
        let phi = |w: f64| {
            let f = self.families(u, w, law == BalanceLaw::Full);
            f.inc(law) - f.dec()
        };
        let eps = self.eps;
        let first_at_least = |target: f64| {
            if phi(lo) >= target {
                return lo;
            }
            if phi(hi) < target {
                return hi;
            }
            let (mut a, mut b) = (lo, hi);
            while b - a > eps {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if phi(m) >= target {
                    b = m;
                } else {
                    a = m;
                }
            }
            b
        };
        (first_at_least(-eps), first_at_least(eps))
    }

    /// Minimum over `w` of the diameter under `law` with p fixed at `u`.
    pub fn best_for(&self, u: f64, law: BalanceLaw) -> (f64, f64) {
        let w = self.balance(u, law);
        (w, self.families(u, w, law == BalanceLaw::Full).value(law))
    }

    /// Tight candidates at a position, relative to `target` (usually the diameter).
    pub(crate) fn labels(&self, u: f64, w: f64, target: f64, law: BalanceLaw) -> Labels {
        let g = self.geo(u, w);
        let tol = self.tol;
        let tight = |v: f64| v >= target - tol;
        let mut out = Labels::new();
        let half = g.cyc / 2.0;
        let xy_tree = self.hx + self.len + self.hy;
        let xy = g.lp + g.ell + g.rq;
        if tight(xy) {
            out.insert(Label::XpqY);
        }
        if tight(xy_tree) && xy_tree <= xy + tol {
            out.insert(Label::XTY);
        }
        if tight(g.lp + half) {
            out.insert(Label::XDot);
        }
        if tight(g.rq + half) {
            out.insert(Label::DotY);
        }
        if tight(self.delta) {
            out.insert(Label::Delta);
        }
        let dpq = g.sq - g.sp;
        let thr = target - tol;
        let mx = (g.sp + g.sq + g.ell) / 2.0;
        let my = (g.sp + g.sq - g.ell) / 2.0;
        let (lo, hi, k) = (self.idx_lt(g.sp), self.idx_le(g.sq), self.k());
        let i_mx = self.idx_le(mx).clamp(lo, hi);
        let i_my = self.idx_lt(my).clamp(lo, hi);
        let mut found = vec![];
        // x side: tree route up to the midpoint, shortcut route beyond it
        self.plus.report(0, i_mx, thr - self.hx, &mut found);
        self.minus.report(i_mx, hi, thr - (g.lp + g.ell + g.sq), &mut found);
        for &i in &found {
            let (t, h) = (self.t[i], self.h[i]);
            let xt = self.hx + t + h;
            if i < lo {
                out.insert(Label::XTTri(i));
                continue;
            }
            let xv = g.lp + g.ell + g.sq - t + h;
            let xm = xt.min(xv);
            if tight(xm) {
                if xt <= xm + tol {
                    out.insert(Label::XTTri(i));
                }
                if xv <= xm + tol {
                    out.insert(Label::XpqTri(i));
                }
            }
        }
        // y side, mirrored
        found.clear();
        self.minus.report(i_my, k, thr - (self.hy + self.len), &mut found);
        self.plus.report(lo, i_my, thr - (g.rq + g.ell - g.sp), &mut found);
        for &i in &found {
            let (t, h) = (self.t[i], self.h[i]);
            let yt = self.hy + self.len - t + h;
            if i >= hi {
                out.insert(Label::TriTY(i));
                continue;
            }
            let yv = g.rq + g.ell + t - g.sp + h;
            let ym = yt.min(yv);
            if tight(ym) {
                if yt <= ym + tol {
                    out.insert(Label::TriTY(i));
                }
                if yv <= ym + tol {
                    out.insert(Label::TripqY(i));
                }
            }
        }
        // inside leaves against their antipodes
        found.clear();
        self.height.report(lo, hi, thr - half, &mut found);
        for &i in &found {
            let mut anti = self.t[i] - g.sp + half;
            if anti > g.cyc {
                anti -= g.cyc;
            }
            if anti <= dpq + tol {
                out.insert(Label::TriDot(i));
            } else {
                out.insert(Label::TriO(i));
            }
        }
        if law == BalanceLaw::Full && hi >= lo + 2 {
            let top = self.height.query(lo, hi).map_or(0.0, |x| x.0);
            if tight(self.tri_tri_max(lo, hi, g.cyc).0) {
                // a pair can only be tight if each height clears the bound left by the tallest
                found.clear();
                self.height.report(lo, hi, thr - half - top, &mut found);
                found.sort_unstable();
                for (a, &i) in found.iter().enumerate() {
                    for &j in &found[a + 1..] {
                        let d = self.t[j] - self.t[i];
                        let (tr, via) = (d, g.cyc - d);
                        let m = tr.min(via);
                        if tight(m + self.h[i] + self.h[j]) {
                            if tr <= m + tol {
                                out.insert(Label::TriTri(i, j, false));
                            }
                            if via <= m + tol {
                                out.insert(Label::TriTri(i, j, true));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// The longest path between two inside secondary leaves that uses the shortcut
    /// and is shorter than their tree path; `None` when no such pair exists.
    pub fn wedge(&self, u: f64, w: f64) -> Option<WedgePath> {
        let g = self.geo(u, w);
        wedge_from_parts(&self.t, &self.h, g.sp, g.sq, g.ell)
    }
}
