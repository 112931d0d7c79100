//! The sweep that moves p from the center toward a while keeping q at its best
//! position, and reports the best shortcut it meets.
//!
//! Motion happens in three stages. First p and q move apart at equal speed
//! until the x-y distance stops being the only diametral pair. Then one endpoint
//! is pushed toward its end of the backbone while the other follows. Finally
//! both move outward together, ignoring pairs of secondary leaves until the
//! longest such pair through the shortcut catches up.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::augmented::{diameter_value, PairType, PathDescriptor};
use crate::caterpillar::{pair_state_of, path_state_of, BalanceLaw, Caterpillar, Label, Labels};
use crate::diameter::{backbone, BackboneDecomposition};
use crate::error::BalanceError;
use crate::tree::{GeometricTree, Shortcut, VertexId};

/// Stage of the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// p and q move apart at equal speed.
    Diagonal,
    /// p moves toward a.
    TowardX,
    /// q moves toward b.
    TowardY,
    /// both move outward.
    Outward,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Diagonal => "I",
            Phase::TowardX => "II-x",
            Phase::TowardY => "II-y",
            Phase::Outward => "III",
        })
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A shortcut endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mover {
    P,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalReason {
    /// The backbone is straight or its center is a far leaf's projection.
    NoUsefulShortcut,
    /// The shortcut already joins a and b.
    ShortcutSpansBackbone,
    PReachedA,
    QReachedB,
    /// The largest secondary diameter became diametral.
    DiameterFloor,
    /// No shift of either endpoint can lower the diameter.
    AllShiftsBlocked,
    /// x-y and a pair of secondary points are both diametral.
    SecondaryPairWithAxis,
    /// The longest secondary pair through the shortcut caught up.
    WedgeOvertakes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    VertexReached { mover: Mover, vertex: VertexId },
    /// q passed the point where routing through it starts to pay off for a secondary leaf.
    MidpointReached { subtree: usize },
    /// The tree path from x to a secondary leaf became diametral.
    DiameterThreshold { subtree: usize },
    /// A cycle point became an endpoint of a diametral pair.
    CycleCandidate,
    GrowShrinkSwitch { growing: bool },
    PathStateChange,
    Terminal { reason: TerminalReason },
}

/// One step of the sweep. `param` is the distance of `driver` from the center.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    #[serde(flatten)]
    pub kind: EventKind,
    pub phase: Phase,
    pub driver: Mover,
    pub param: f64,
    /// Arc lengths from a.
    pub p_arc: f64,
    pub q_arc: f64,
    /// Diameter at this position; while moving outward, pairs of secondary
    /// leaves are left out.
    pub diameter: f64,
    /// Smallest confirmed diameter by the time the event is reported.
    pub best_diameter: f64,
    pub pair_state: BTreeSet<PairType>,
    pub path_state: BTreeSet<PathDescriptor>,
}

/// Where the sweep currently is.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepState {
    pub phase: Phase,
    pub p_arc: f64,
    pub q_arc: f64,
    pub diameter: f64,
    pub best_p_arc: f64,
    pub best_q_arc: f64,
    pub best_diameter: f64,
    pub finished: bool,
}

/// How a moving endpoint's diametral path reacts to the motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// to a secondary leaf through the shortcut
    Shortcut,
    /// to its antipodal cycle point
    Cycle,
    /// to a secondary leaf along the tree
    Tree,
}

impl Route {
    fn weight(self) -> f64 {
        match self {
            Route::Shortcut => 1.0,
            Route::Cycle => 0.5,
            Route::Tree => 0.0,
        }
    }
}

/// Rate at which the partner endpoint and the diameter follow the driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum SpeedLaw {
    /// x-y against x-pq-▲.
    Stationary,
    /// x-y against x-•.
    Thirds,
    /// x-y against x-T-▲.
    Plateau,
    /// x-y against ▲-o.
    Antipodal,
    /// x side against y side while both endpoints move outward.
    Outward { near: Route, far: Route },
}

/// Predicted first-order change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub partner: f64,
    pub diameter: f64,
}

impl SpeedLaw {
    /// Given the driver's change of distance from the center and the change of
    /// the shortcut length, the partner's change of distance from the center and
    /// the diameter change. Only differences along one segment of constant law
    /// are meaningful.
    pub fn predict(self, driver: f64, length: f64) -> Prediction {
        let (du, dl) = (driver, length);
        let (partner, diameter) = match self {
            SpeedLaw::Stationary => (0.0, dl - du),
            SpeedLaw::Thirds => ((dl - du) / 3.0, 2.0 * (dl - du) / 3.0),
            SpeedLaw::Plateau => (dl - du, 0.0),
            SpeedLaw::Antipodal => (dl / 3.0 - du, 2.0 * dl / 3.0),
            SpeedLaw::Outward { near, far } => {
                let (ax, ay) = (near.weight(), far.weight());
                if ax + ay == 0.0 {
                    (du, 0.0)
                } else {
                    let dw = du + dl * (ay - ax) / (ax + ay);
                    (dw, ax * (dl - du + dw))
                }
            }
        };
        Prediction { partner, diameter }
    }
}

/// A sampled position in a phase's own frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub phase: Phase,
    pub driver: Mover,
    pub param: f64,
    pub p_arc: f64,
    pub q_arc: f64,
    pub shortcut: Shortcut,
    pub shortcut_length: f64,
    /// Diameter as the phase sees it; secondary pairs are ignored while moving outward.
    pub diameter: f64,
    pub path_state: BTreeSet<PathDescriptor>,
    pub speed_law: Option<SpeedLaw>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepOptions {
    /// Skip x-■ changes while an x-T-▲ path is diametral and the shortcut is
    /// useless for it (and symmetrically on the y side).
    pub suppress_shadowed: bool,
    /// Largest probe step, relative to the tree's scale.
    pub max_step: f64,
    /// Minimum probes per backbone edge.
    pub probes_per_edge: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { suppress_shadowed: true, max_step: 2e-3, probes_per_edge: 2 }
    }
}

/// Path-state changes seen while both endpoints moved outward.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OutwardCounts {
    /// changes kept after shadowed ones are skipped
    pub counted: usize,
    /// every change
    pub all: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub shortcut: Shortcut,
    pub diameter_before: f64,
    pub diameter_after: f64,
    pub useful: bool,
    pub p_arc: f64,
    pub q_arc: f64,
    pub phase_at_termination: Phase,
    pub termination: TerminalReason,
    pub path_state: BTreeSet<PathDescriptor>,
    pub events: Vec<Event>,
    pub outward_changes: OutwardCounts,
}

#[derive(Debug, Clone)]
struct Sample {
    u: f64,
    w: f64,
    value: f64,
    full: f64,
    ell: f64,
    labels: Labels,
}

enum Verdict {
    Continue,
    Handoff,
    Stop(TerminalReason),
}

/// Skips x-■ (resp. ■-y) changes while a tree path to a secondary leaf dominates.
#[derive(Default)]
struct Shadow {
    frozen_x: Option<usize>,
    frozen_y: Option<usize>,
    last_x: Vec<Label>,
    last_y: Vec<Label>,
    last_rest: Vec<Label>,
}

enum Cursor {
    Diagonal { t: f64, end: f64, marks: Vec<(f64, Mover, usize)>, next: usize },
    Trace(Box<Motion>),
}

struct Motion {
    phase: Phase,
    mirrored: bool,
    law: BalanceLaw,
    end: f64,
    cur: Sample,
    marks: Vec<(f64, usize)>,
    next: usize,
    growing: Option<bool>,
    prev: Option<(f64, f64)>,
    shadow: Shadow,
    /// outward only: events are held until the wedge check
    held: Vec<Event>,
    probes: Vec<(f64, f64, f64)>,
    /// outward only: candidate optima, confirmed exactly at the end
    cands: Vec<(f64, f64, f64)>,
    cand_min: f64,
    all_changes: Vec<f64>,
    counted_changes: Vec<f64>,
}

/// Resumable sweep over one tree.
pub struct Sweep<'t> {
    tree: &'t GeometricTree,
    bd: BackboneDecomposition,
    cat: Option<(Arc<Caterpillar>, Arc<Caterpillar>)>,
    opts: SweepOptions,
    cursor: Option<Cursor>,
    pending: Vec<(Phase, bool, f64)>,
    queue: VecDeque<Event>,
    events: Vec<Event>,
    best: (f64, f64, f64),
    last: (Phase, TerminalReason),
    counts: OutwardCounts,
    utol: f64,
    finished: bool,
}

impl<'t> Sweep<'t> {
    pub fn new(tree: &'t GeometricTree, opts: SweepOptions) -> Self {
        let bd = backbone(tree);
        let useful = bd.has_useful_shortcut();
        let cat = useful.then(|| {
            let c = Caterpillar::new(tree, &bd);
            let m = c.mirror();
            (Arc::new(c), Arc::new(m))
        });
        let mut s = Sweep {
            tree,
            best: (bd.diameter, 0.0, 0.0),
            bd,
            cat,
            opts,
            cursor: None,
            pending: vec![],
            queue: VecDeque::new(),
            events: vec![],
            last: (Phase::Diagonal, TerminalReason::NoUsefulShortcut),
            counts: OutwardCounts::default(),
            utol: 1e-10 * tree.scale(),
            finished: false,
        };
        if useful {
            let (c, _) = s.cat.as_ref().unwrap();
            s.best.0 = c.value(0.0, 0.0);
            let end = c.a.max(c.b);
            let mut marks: Vec<(f64, Mover, usize)> = vec![];
            for (k, &arc) in c.vertex_arcs().iter().enumerate() {
                if arc < c.a {
                    marks.push((c.a - arc, Mover::P, k));
                } else if arc > c.a {
                    marks.push((arc - c.a, Mover::Q, k));
                }
            }
            marks.sort_by(|x, y| x.0.total_cmp(&y.0));
            s.cursor = Some(Cursor::Diagonal { t: 0.0, end, marks, next: 0 });
        } else {
            let d = s.bd.diameter;
            s.push_event(EventKind::Terminal { reason: TerminalReason::NoUsefulShortcut }, Phase::Diagonal, false, 0.0, 0.0, d, &Labels::new());
            s.finished = true;
        }
        s
    }

    pub fn decomposition(&self) -> &BackboneDecomposition {
        &self.bd
    }

    /// Events emitted so far.
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn state(&self) -> SweepState {
        let (phase, p_arc, q_arc, diameter) = match (&self.cursor, &self.cat) {
            (Some(Cursor::Diagonal { t, .. }), Some((c, _))) => {
                let (u, w) = (t.min(c.a), t.min(c.b));
                (Phase::Diagonal, c.a - u, c.a + w, c.value(u, w))
            }
            (Some(Cursor::Trace(m)), Some(_)) => {
                let (u, w) = self.orig(m.mirrored, m.cur.u, m.cur.w);
                (m.phase, self.bd.center_arc - u, self.bd.center_arc + w, m.cur.full)
            }
            _ => (self.last.0, self.bd.center_arc - self.best.1, self.bd.center_arc + self.best.2, self.best.0),
        };
        SweepState {
            phase,
            p_arc,
            q_arc,
            diameter,
            best_p_arc: self.bd.center_arc - self.best.1,
            best_q_arc: self.bd.center_arc + self.best.2,
            best_diameter: self.best.0,
            finished: self.finished,
        }
    }

    /// Next event, or `None` once the sweep is over.
    pub fn next_event(&mut self) -> Option<Event> {
        loop {
            if let Some(mut e) = self.queue.pop_front() {
                // a step stamps its events before sorting them by position
                if let Some(prev) = self.events.last() {
                    e.best_diameter = e.best_diameter.min(prev.best_diameter);
                }
                self.events.push(e.clone());
                return Some(e);
            }
            if self.finished {
                return None;
            }
            self.advance();
        }
    }

    /// Runs until the current phase hands over or stops; returns its events.
    pub fn run_phase(&mut self) -> Vec<Event> {
        let start = self.current_phase();
        let mut out = vec![];
        while let Some(e) = self.next_event() {
            let done = matches!(e.kind, EventKind::Terminal { .. });
            out.push(e);
            if done || self.current_phase() != start {
                break;
            }
        }
        out
    }

    fn current_phase(&self) -> Option<Phase> {
        match &self.cursor {
            Some(Cursor::Diagonal { .. }) => Some(Phase::Diagonal),
            Some(Cursor::Trace(m)) => Some(m.phase),
            None => None,
        }
    }

    /// Runs to the end and returns the best shortcut found.
    pub fn run(mut self) -> OptimizeResult {
        while self.next_event().is_some() {}
        self.result()
    }

    /// The q arc (from a) that balances the two monotone parts of the diameter
    /// for p at `p_arc`, searched within `q_bracket`.
    pub fn balance_solve(&self, law: BalanceLaw, p_arc: f64, q_bracket: (f64, f64)) -> Result<f64, BalanceError> {
        let (lo_arc, hi_arc) = q_bracket;
        let Some((c, _)) = &self.cat else {
            return Ok(lo_arc);
        };
        let u = c.a - p_arc;
        let (lo, hi) = ((lo_arc - c.a).max(0.0), (hi_arc - c.a).min(c.b));
        if hi - lo <= c.eps {
            return Ok(c.a + lo);
        }
        let phi = |w: f64| {
            let f = c.families(u, w, law == BalanceLaw::Full);
            f.inc(law) - f.dec()
        };
        if phi(lo) > c.eps || phi(hi) < -c.eps {
            return Err(BalanceError::NoRootInBracket { lo: lo_arc, hi: hi_arc });
        }
        Ok(c.a + c.balance_in(u, law, lo, hi))
    }

    /// Samples the position a phase would take with its driver at `param`.
    pub fn probe(&self, phase: Phase, driver: Mover, param: f64) -> Option<Probe> {
        let (c, _) = self.cat.as_ref()?;
        let mirrored = driver == Mover::Q;
        let (u, w, value, labels, law) = if phase == Phase::Diagonal {
            let (u, w) = (param.min(c.a), param.min(c.b));
            let v = c.value(u, w);
            (u, w, v, c.labels(u, w, v, BalanceLaw::Full), None)
        } else {
            let law = if phase == Phase::Outward { BalanceLaw::Modified } else { BalanceLaw::Full };
            let s = self.sample(mirrored, law, param);
            let sl = speed_law(phase, &s.labels);
            let (u, w) = self.orig(mirrored, s.u, s.w);
            (u, w, s.value, self.orig_labels(mirrored, &s.labels), sl)
        };
        let shortcut = self.shortcut_at(u, w);
        Some(Probe {
            phase,
            driver,
            param,
            p_arc: c.a - u,
            q_arc: c.a + w,
            shortcut_length: c.geo(u, w).ell,
            shortcut,
            diameter: value,
            path_state: path_state_of(&labels),
            speed_law: law,
        })
    }

    fn frame(&self, mirrored: bool) -> Arc<Caterpillar> {
        let (c, m) = self.cat.as_ref().expect("sweep has a caterpillar");
        Arc::clone(if mirrored { m } else { c })
    }

    fn orig(&self, mirrored: bool, u: f64, w: f64) -> (f64, f64) {
        if mirrored {
            (w, u)
        } else {
            (u, w)
        }
    }

    fn orig_labels(&self, mirrored: bool, labels: &Labels) -> Labels {
        if mirrored {
            let c = self.frame(true);
            labels.iter().map(|&l| c.mirror_label(l)).collect()
        } else {
            labels.clone()
        }
    }

    fn shortcut_at(&self, u: f64, w: f64) -> Shortcut {
        let a = self.bd.center_arc;
        Shortcut { p: self.bd.point_at(self.tree, a - u), q: self.bd.point_at(self.tree, a + w) }
    }

    fn sample(&self, mirrored: bool, law: BalanceLaw, u: f64) -> Sample {
        let c = self.frame(mirrored);
        let w = c.balance(u, law);
        // outward motion works with the reduced diameter; see `end_motion`
        let fam = c.families(u, w, law == BalanceLaw::Full);
        let value = fam.value(law);
        Sample { u, w, value, full: value, ell: c.geo(u, w).ell, labels: c.labels(u, w, value, law) }
    }

    fn step_for(&self, from: f64, to: f64) -> f64 {
        let edge = (to - from).max(0.0);
        (self.opts.max_step * self.tree.scale()).min(edge / self.opts.probes_per_edge.max(1) as f64).max(self.utol)
    }

    fn note_best(&mut self, mirrored: bool, u: f64, w: f64, d: f64) {
        if d < self.best.0 {
            let (uo, wo) = self.orig(mirrored, u, w);
            self.best = (d, uo, wo);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn make_event(
        &self,
        kind: EventKind,
        phase: Phase,
        mirrored: bool,
        u: f64,
        w: f64,
        diameter: f64,
        labels: &Labels,
    ) -> Event {
        let (uo, wo) = self.orig(mirrored, u, w);
        let labels = if self.cat.is_some() { self.orig_labels(mirrored, labels) } else { labels.clone() };
        Event {
            kind,
            phase,
            driver: if mirrored { Mover::Q } else { Mover::P },
            param: u,
            p_arc: self.bd.center_arc - uo,
            q_arc: self.bd.center_arc + wo,
            diameter,
            best_diameter: self.best.0,
            pair_state: pair_state_of(&labels),
            path_state: path_state_of(&labels),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn push_event(
        &mut self,
        kind: EventKind,
        phase: Phase,
        mirrored: bool,
        u: f64,
        w: f64,
        diameter: f64,
        labels: &Labels,
    ) {
        let e = self.make_event(kind, phase, mirrored, u, w, diameter, labels);
        self.queue.push_back(e);
    }

    fn advance(&mut self) {
        match self.cursor.take() {
            Some(Cursor::Diagonal { t, end, marks, next }) => self.advance_diagonal(t, end, marks, next),
            Some(Cursor::Trace(m)) => self.advance_trace(*m),
            None => self.next_branch(),
        }
    }

    fn advance_diagonal(&mut self, t: f64, end: f64, marks: Vec<(f64, Mover, usize)>, mut next: usize) {
        let c = self.frame(false);
        let at = |t: f64| {
            let (u, w) = (t.min(c.a), t.min(c.b));
            let f = c.families(u, w, true);
            let others = f.xdot.max(f.doty).max(f.x_tri).max(f.tri_y).max(f.tri_cyc).max(f.tri_tri).max(f.delta);
            (u, w, f.xy, others)
        };
        let stop = marks.get(next).map_or(end, |m| m.0).min(end);
        let t1 = (t + self.step_for(t, stop)).min(stop);
        let (_, _, xy1, o1) = at(t1);
        if o1 >= xy1 {
            // bisect for the first t where another candidate reaches x-y
            let (mut lo, mut hi) = (t, t1);
            if at(lo).3 >= at(lo).2 {
                hi = lo;
            }
            while hi - lo > c.eps {
                let m = 0.5 * (lo + hi);
                if m <= lo || m >= hi {
                    break;
                }
                let (_, _, xy, o) = at(m);
                if o >= xy {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            let (u, w, _, _) = at(hi);
            let d = c.value(u, w);
            let labels = c.labels(u, w, d, BalanceLaw::Full);
            self.note_best(false, u, w, d);
            self.finish_diagonal(u, w, d, labels);
            return;
        }
        let (u1, w1, _, _) = at(t1);
        if let Some(&(mt, mover, k)) = marks.get(next) {
            if t1 >= mt {
                let vertex = self.tree.id(self.bd.bb[k]);
                let d = c.value(u1, w1);
                let lab = c.labels(u1, w1, d, BalanceLaw::Full);
                self.push_event(EventKind::VertexReached { mover, vertex }, Phase::Diagonal, false, u1, w1, d, &lab);
                next += 1;
            }
        }
        if t1 >= end {
            let d = c.value(u1, w1);
            let lab = c.labels(u1, w1, d, BalanceLaw::Full);
            self.note_best(false, u1, w1, d);
            self.stop(Phase::Diagonal, false, u1, w1, d, &lab, TerminalReason::ShortcutSpansBackbone);
            return;
        }
        self.cursor = Some(Cursor::Diagonal { t: t1, end, marks, next });
    }

    fn finish_diagonal(&mut self, u: f64, w: f64, d: f64, labels: Labels) {
        let c = self.frame(false);
        let (a, b, eps) = (c.a, c.b, c.eps);
        let newly = |f: fn(&Label) -> Option<usize>| labels.iter().find_map(f);
        let kind = if let Some(i) = newly(|l| match l {
            Label::XTTri(i) | Label::TriTY(i) => Some(*i),
            _ => None,
        }) {
            EventKind::DiameterThreshold { subtree: i }
        } else if let Some(i) = newly(|l| match l {
            Label::XpqTri(i) | Label::TripqY(i) => Some(*i),
            _ => None,
        }) {
            EventKind::MidpointReached { subtree: i }
        } else if labels.iter().any(|l| matches!(l, Label::XDot | Label::DotY | Label::TriDot(_) | Label::TriO(_))) {
            EventKind::CycleCandidate
        } else {
            EventKind::PathStateChange
        };
        self.push_event(kind, Phase::Diagonal, false, u, w, d, &labels);
        let pt = pair_state_of(&labels);
        let has = |p: PairType| pt.contains(&p);
        let (xb, by, bb, bo) = (has(PairType::XBox), has(PairType::BoxY), has(PairType::BoxBox), has(PairType::BoxO));
        let p_free = u < a - eps;
        let q_free = w < b - eps;
        if labels.contains(&Label::Delta) {
            self.stop(Phase::Diagonal, false, u, w, d, &labels, TerminalReason::DiameterFloor);
        } else if bb {
            self.stop(Phase::Diagonal, false, u, w, d, &labels, TerminalReason::SecondaryPairWithAxis);
        } else if xb && by {
            if bo {
                self.stop(Phase::Diagonal, false, u, w, d, &labels, TerminalReason::AllShiftsBlocked);
            } else {
                self.start_outward(false, u, w, d, &labels);
            }
        } else if xb {
            if p_free {
                self.start(Phase::TowardX, false, u);
            } else {
                self.stop(Phase::Diagonal, false, u, w, d, &labels, TerminalReason::PReachedA);
            }
        } else if by {
            if q_free {
                self.start(Phase::TowardY, true, w);
            } else {
                self.stop(Phase::Diagonal, false, u, w, d, &labels, TerminalReason::QReachedB);
            }
        } else if bo && (p_free || q_free) {
            if q_free {
                self.pending.push((Phase::TowardY, true, w));
            }
            if p_free {
                self.start(Phase::TowardX, false, u);
            } else {
                self.next_branch();
            }
        } else {
            self.stop(Phase::Diagonal, false, u, w, d, &labels, TerminalReason::AllShiftsBlocked);
        }
    }

    /// Continue outward from a frame position, picking a driver that can still move.
    fn start_outward(&mut self, mirrored: bool, u: f64, w: f64, d: f64, labels: &Labels) {
        let c = self.frame(mirrored);
        if u < c.a - c.eps {
            self.start(Phase::Outward, mirrored, u);
        } else if w < c.b - c.eps {
            self.start(Phase::Outward, !mirrored, w);
        } else {
            let reason = if mirrored { TerminalReason::QReachedB } else { TerminalReason::PReachedA };
            self.stop(Phase::Outward, mirrored, u, w, d, labels, reason);
        }
    }

    fn start(&mut self, phase: Phase, mirrored: bool, u: f64) {
        let law = if phase == Phase::Outward { BalanceLaw::Modified } else { BalanceLaw::Full };
        let cur = self.sample(mirrored, law, u);
        let c = self.frame(mirrored);
        let mut marks: Vec<(f64, usize)> = c
            .vertex_arcs()
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s < c.a - u)
            .map(|(k, &s)| (c.a - s, k))
            .collect();
        marks.sort_by(|x, y| x.0.total_cmp(&y.0));
        let end = c.a;
        let mut m = Motion {
            phase,
            mirrored,
            law,
            end,
            marks,
            next: 0,
            growing: None,
            prev: None,
            shadow: Shadow::default(),
            held: vec![],
            probes: vec![(cur.u, cur.w, cur.value)],
            cands: vec![],
            cand_min: f64::INFINITY,
            all_changes: vec![],
            counted_changes: vec![],
            cur,
        };
        let (cu, cw, cd) = (m.cur.u, m.cur.w, m.cur.full);
        self.offer(&mut m, cu, cw, cd);
        if phase == Phase::Outward {
            let labels = m.cur.labels.clone();
            let g = self.frame(mirrored).geo(m.cur.u, m.cur.w);
            self.shadow_step(&mut m, &labels, &g);
        }
        let labels = m.cur.labels.clone();
        match judge(phase, &labels) {
            Verdict::Continue => self.cursor = Some(Cursor::Trace(Box::new(m))),
            Verdict::Handoff => {
                let (u, w, d) = (m.cur.u, m.cur.w, m.cur.full);
                self.start_outward(mirrored, u, w, d, &labels);
            }
            Verdict::Stop(r) => {
                let (u, w, d) = (m.cur.u, m.cur.w, m.cur.full);
                self.end_motion(m, u, w, d, &labels, r);
            }
        }
    }

    fn refine(&self, mirrored: bool, law: BalanceLaw, a: &Sample, b: &Sample, out: &mut Vec<Sample>) {
        if b.u - a.u <= self.utol {
            out.push(b.clone());
            return;
        }
        let m = self.sample(mirrored, law, 0.5 * (a.u + b.u));
        if m.labels != a.labels {
            self.refine(mirrored, law, a, &m, out);
        }
        if m.labels != b.labels {
            self.refine(mirrored, law, &m, b, out);
        }
    }

    /// Bookkeeping for one outward path-state change; true if it counts.
    fn shadow_step(&self, m: &mut Motion, labels: &Labels, g: &crate::caterpillar::Geo) -> bool {
        let c = self.frame(m.mirrored);
        let sh = &mut m.shadow;
        let inside = |i: usize| c.t[i] >= g.sp && c.t[i] <= g.sq;
        if let Some(i) = sh.frozen_x {
            if inside(i) && g.lp + g.ell + g.sq - c.t[i] < c.hx + c.t[i] - c.tol {
                sh.frozen_x = None;
            }
        }
        if let Some(j) = sh.frozen_y {
            if inside(j) && g.rq + g.ell + c.t[j] - g.sp < c.hy + c.len - c.t[j] - c.tol {
                sh.frozen_y = None;
            }
        }
        let xs: Vec<Label> =
            labels.iter().copied().filter(|l| matches!(l, Label::XDot | Label::XTTri(_) | Label::XpqTri(_))).collect();
        let ys: Vec<Label> =
            labels.iter().copied().filter(|l| matches!(l, Label::DotY | Label::TriTY(_) | Label::TripqY(_))).collect();
        let rest: Vec<Label> = labels.iter().copied().filter(|l| !xs.contains(l) && !ys.contains(l)).collect();
        let mut counted = false;
        if rest != sh.last_rest {
            counted = true;
            sh.last_rest = rest;
        }
        if sh.frozen_x.is_none() {
            if xs != sh.last_x {
                counted = true;
            }
            sh.frozen_x = xs.iter().find_map(|l| if let Label::XTTri(i) = l { Some(*i) } else { None });
            sh.last_x = xs;
        }
        if sh.frozen_y.is_none() {
            if ys != sh.last_y {
                counted = true;
            }
            sh.frozen_y = ys.iter().find_map(|l| if let Label::TriTY(i) = l { Some(*i) } else { None });
            sh.last_y = ys;
        }
        counted
    }

    fn advance_trace(&mut self, mut m: Motion) {
        let mirrored = m.mirrored;
        let law = m.law;
        let c = self.frame(mirrored);
        let u0 = m.cur.u;
        let stop_at = m.marks.get(m.next).map_or(m.end, |x| x.0).min(m.end);
        let u1 = (u0 + self.step_for(u0, stop_at)).min(stop_at);
        let s1 = self.sample(mirrored, law, u1);
        let mut batch: Vec<Event> = vec![];

        // q passing backbone vertices
        let (w0, w1) = (m.cur.w, s1.w);
        let (wlo, whi) = if w0 <= w1 { (w0, w1) } else { (w1, w0) };
        let arcs = c.vertex_arcs();
        let first = arcs.partition_point(|&s| s - c.a <= wlo.max(0.0));
        let last = arcs.partition_point(|&s| s - c.a <= whi);
        for (k, &s) in arcs.iter().enumerate().take(last).skip(first) {
            let wv = s - c.a;
            {
                let (mut lo, mut hi) = (u0, u1);
                for _ in 0..40 {
                    let mid = 0.5 * (lo + hi);
                    let wm = c.balance(mid, law);
                    if (wm >= wv) == (w1 >= wv) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let sm = self.sample(mirrored, law, hi);
                let mover = if mirrored { Mover::P } else { Mover::Q };
                let vertex = self.tree.id(self.bd.bb[if mirrored { c.vertex_arcs().len() - 1 - k } else { k }]);
                batch.push(self.make_event(EventKind::VertexReached { mover, vertex }, m.phase, mirrored, sm.u, sm.w, sm.full, &sm.labels));
            }
        }
        // p at a backbone vertex
        if let Some(&(mu, k)) = m.marks.get(m.next) {
            if u1 >= mu {
                let mover = if mirrored { Mover::Q } else { Mover::P };
                let vertex = self.tree.id(self.bd.bb[if mirrored { c.vertex_arcs().len() - 1 - k } else { k }]);
                batch.push(self.make_event(EventKind::VertexReached { mover, vertex }, m.phase, mirrored, s1.u, s1.w, s1.full, &s1.labels));
                m.next += 1;
            }
        }
        // shortcut length turning
        let dl = s1.ell - m.cur.ell;
        if dl.abs() > 1e-12 * self.tree.scale() {
            let growing = dl > 0.0;
            if m.growing.is_some_and(|g| g != growing) {
                batch.push(self.make_event(EventKind::GrowShrinkSwitch { growing }, m.phase, mirrored, m.cur.u, m.cur.w, m.cur.full, &m.cur.labels));
            }
            m.growing = Some(growing);
        }
        // path-state changes
        let mut changes = vec![];
        if s1.labels != m.cur.labels {
            self.refine(mirrored, law, &m.cur, &s1, &mut changes);
        }
        let mut stopped = None;
        for ch in changes {
            let counted = if m.phase == Phase::Outward {
                let g = c.geo(ch.u, ch.w);
                let labels = ch.labels.clone();
                let counted = self.shadow_step(&mut m, &labels, &g);
                m.all_changes.push(ch.u);
                if counted {
                    m.counted_changes.push(ch.u);
                }
                counted
            } else {
                true
            };
            if counted || !self.opts.suppress_shadowed {
                batch.push(self.make_event(EventKind::PathStateChange, m.phase, mirrored, ch.u, ch.w, ch.full, &ch.labels));
            }
            self.offer(&mut m, ch.u, ch.w, ch.full);
            match judge(m.phase, &ch.labels) {
                Verdict::Continue => {}
                v => {
                    stopped = Some((ch, v));
                    break;
                }
            }
        }
        batch.sort_by(|a, b| a.param.total_cmp(&b.param));
        let hold = m.phase == Phase::Outward;
        for e in batch {
            if stopped.as_ref().is_some_and(|(ch, _)| e.param > ch.u) {
                continue;
            }
            if hold {
                m.held.push(e);
            } else {
                self.queue.push_back(e);
            }
        }
        if let Some((ch, v)) = stopped {
            m.probes.push((ch.u, ch.w, ch.value));
            match v {
                Verdict::Stop(r) => self.end_motion(m, ch.u, ch.w, ch.full, &ch.labels, r),
                _ => {
                    let (u, w, d, labels) = (ch.u, ch.w, ch.full, ch.labels.clone());
                    self.flush(&mut m);
                    self.start_outward(mirrored, u, w, d, &labels);
                }
            }
            return;
        }

        // best along the traced path, refined around local minima
        self.offer(&mut m, s1.u, s1.w, s1.full);
        if let Some((pu, pd)) = m.prev {
            // only dips that could beat the best so far are worth refining
            let bar = self.best.0.min(m.cand_min);
            if m.cur.full < pd && m.cur.full <= s1.full && m.cur.full <= bar + c.tol {
                let with_tt = law == BalanceLaw::Full;
                let f = |u: f64| {
                    let w = c.balance(u, law);
                    (c.families(u, w, with_tt).value(law), w)
                };
                let (u, (d, w)) = golden(pu, s1.u, |u| f(u).0, f);
                self.offer(&mut m, u, w, d);
            }
        }
        m.prev = Some((m.cur.u, m.cur.full));
        m.probes.push((s1.u, s1.w, s1.value));
        m.cur = s1;

        let c = self.frame(mirrored);
        if m.cur.u >= m.end {
            let reason = if mirrored { TerminalReason::QReachedB } else { TerminalReason::PReachedA };
            let (u, w, d, labels) = (m.cur.u, m.cur.w, m.cur.full, m.cur.labels.clone());
            self.end_motion(m, u, w, d, &labels, reason);
        } else if m.phase == Phase::Outward && m.cur.w >= c.b - c.eps {
            let reason = if mirrored { TerminalReason::PReachedA } else { TerminalReason::QReachedB };
            let (u, w, d, labels) = (m.cur.u, m.cur.w, m.cur.full, m.cur.labels.clone());
            self.end_motion(m, u, w, d, &labels, reason);
        } else {
            self.cursor = Some(Cursor::Trace(Box::new(m)));
        }
    }

    fn offer(&mut self, m: &mut Motion, u: f64, w: f64, d: f64) {
        if m.law == BalanceLaw::Modified {
            m.cands.push((u, w, d));
            m.cand_min = m.cand_min.min(d);
        } else {
            self.note_best(m.mirrored, u, w, d);
        }
    }

    fn flush(&mut self, m: &mut Motion) {
        self.queue.extend(m.held.drain(..));
    }

    /// Close a motion. Outward motions first cut the trace back to where the
    /// longest secondary pair through the shortcut catches up, if it does.
    fn end_motion(&mut self, mut m: Motion, u: f64, w: f64, d: f64, labels: &Labels, reason: TerminalReason) {
        let mirrored = m.mirrored;
        if m.phase != Phase::Outward {
            self.flush(&mut m);
            self.stop(m.phase, mirrored, u, w, d, labels, reason);
            return;
        }
        let c = self.frame(mirrored);
        let caught = |u: f64, w: f64, v: f64| c.wedge(u, w).is_some_and(|wp| wp.length >= v - c.tol);
        let k = m.probes.partition_point(|&(u, w, v)| !caught(u, w, v));
        let cut = if k < m.probes.len() {
            let (mut lo, mut hi) = (if k == 0 { m.probes[0].0 } else { m.probes[k - 1].0 }, m.probes[k].0);
            while hi - lo > self.utol {
                let mid = 0.5 * (lo + hi);
                let s = self.sample(mirrored, m.law, mid);
                if caught(s.u, s.w, s.value) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Some(self.sample(mirrored, m.law, hi))
        } else {
            None
        };
        let (u_end, w_end, d_end, lab_end, reason) = match &cut {
            Some(s) => (s.u, s.w, s.full, s.labels.clone(), TerminalReason::WedgeOvertakes),
            None => (u, w, d, labels.clone(), reason),
        };
        m.held.retain(|e| e.param <= u_end);
        self.counts.all += m.all_changes.iter().filter(|&&x| x <= u_end).count();
        self.counts.counted += m.counted_changes.iter().filter(|&&x| x <= u_end).count();
        // the reduced diameter is exact up to the cut; confirm the best candidate
        let best = m
            .cands
            .iter()
            .chain(std::iter::once(&(u_end, w_end, d_end)))
            .filter(|x| x.0 <= u_end)
            .fold((f64::INFINITY, 0.0, 0.0), |acc, &x| if x.2 < acc.0 { (x.2, x.0, x.1) } else { acc });
        for (u, w) in [(best.1, best.2), (u_end, w_end)] {
            let exact = c.value(u, w);
            self.note_best(mirrored, u, w, exact);
        }
        let d_end = c.value(u_end, w_end);
        self.flush(&mut m);
        self.stop(Phase::Outward, mirrored, u_end, w_end, d_end, &lab_end, reason);
    }

    #[allow(clippy::too_many_arguments)]
    fn stop(&mut self, phase: Phase, mirrored: bool, u: f64, w: f64, d: f64, labels: &Labels, reason: TerminalReason) {
        self.push_event(EventKind::Terminal { reason }, phase, mirrored, u, w, d, labels);
        self.last = (phase, reason);
        self.next_branch();
    }

    fn next_branch(&mut self) {
        self.cursor = None;
        match self.pending.pop() {
            Some((phase, mirrored, u)) => self.start(phase, mirrored, u),
            None => {
                self.polish();
                self.finished = true;
            }
        }
    }

    /// Golden-section search on the exact best-q diameter around the best position.
    fn polish(&mut self) {
        if self.cat.is_none() {
            return;
        }
        let r = self.opts.max_step * self.tree.scale();
        let (_, ub, wb) = self.best;
        for (mirrored, x) in [(false, ub), (true, wb)] {
            let c = self.frame(mirrored);
            let f = |u: f64| {
                let (w, v) = c.best_for(u, BalanceLaw::Full);
                (v, w)
            };
            let (lo, hi) = ((x - r).max(0.0), (x + r).min(c.a));
            let (u, (d, w)) = golden(lo, hi, |u| f(u).0, f);
            self.note_best(mirrored, u, w, d);
        }
    }

    fn result(&self) -> OptimizeResult {
        let tree = self.tree;
        let before = self.bd.diameter;
        let (_, mut u, mut w) = self.best;
        let leaves: Vec<usize> = (0..tree.n()).filter(|&i| tree.adj(i).len() == 1).collect();
        let a = self.bd.center_arc;
        let eval = |u: f64, w: f64| {
            diameter_value(tree, self.bd.delta, &leaves, self.bd.loc_at(tree, a - u), self.bd.loc_at(tree, a + w))
        };
        let mut after = if self.cat.is_some() { eval(u, w) } else { before };
        let useful = after < before - self.bd.tol;
        if !useful {
            (u, w, after) = (0.0, 0.0, before);
        }
        let shortcut = if useful {
            self.shortcut_at(u, w)
        } else {
            let c = tree.to_point(self.bd.center_loc);
            Shortcut { p: c, q: c }
        };
        let path_state = match &self.cat {
            Some((c, _)) => path_state_of(&c.labels(u, w, c.value(u, w), BalanceLaw::Full)),
            None => BTreeSet::new(),
        };
        OptimizeResult {
            shortcut,
            diameter_before: before,
            diameter_after: after,
            useful,
            p_arc: a - u,
            q_arc: a + w,
            phase_at_termination: self.last.0,
            termination: self.last.1,
            path_state,
            events: self.events.clone(),
            outward_changes: self.counts,
        }
    }
}

/// Stage rules applied to the tight candidates in the phase's own frame.
fn judge(phase: Phase, labels: &Labels) -> Verdict {
    if labels.contains(&Label::Delta) {
        return Verdict::Stop(TerminalReason::DiameterFloor);
    }
    let pt = pair_state_of(labels);
    let has = |p: PairType| pt.contains(&p);
    let (xy, xb, by, bb, bo) =
        (has(PairType::XY), has(PairType::XBox), has(PairType::BoxY), has(PairType::BoxBox), has(PairType::BoxO));
    match phase {
        Phase::Diagonal => Verdict::Continue,
        Phase::TowardX | Phase::TowardY => {
            if xy && bb {
                Verdict::Stop(TerminalReason::SecondaryPairWithAxis)
            } else if (xy && xb && by && bo) || (!xy && (bb || bo)) {
                Verdict::Stop(TerminalReason::AllShiftsBlocked)
            } else if (xb && by) || !xy {
                Verdict::Handoff
            } else {
                Verdict::Continue
            }
        }
        Phase::Outward => {
            if bb || bo {
                Verdict::Stop(TerminalReason::AllShiftsBlocked)
            } else {
                Verdict::Continue
            }
        }
    }
}

/// The speed law in force for a set of tight candidates, when there is exactly one.
fn speed_law(phase: Phase, labels: &Labels) -> Option<SpeedLaw> {
    let route_x = |l: &Label| match l {
        Label::XpqTri(_) => Some(Route::Shortcut),
        Label::XDot => Some(Route::Cycle),
        Label::XTTri(_) => Some(Route::Tree),
        _ => None,
    };
    let route_y = |l: &Label| match l {
        Label::TripqY(_) => Some(Route::Shortcut),
        Label::DotY => Some(Route::Cycle),
        Label::TriTY(_) => Some(Route::Tree),
        _ => None,
    };
    match phase {
        Phase::Diagonal => None,
        Phase::TowardX | Phase::TowardY => {
            if !labels.contains(&Label::XpqY) {
                return None;
            }
            let rest: Vec<&Label> = labels.iter().filter(|l| !matches!(l, Label::XpqY | Label::XTY)).collect();
            let kinds: BTreeSet<u8> = rest
                .iter()
                .map(|l| match l {
                    Label::XpqTri(_) => 0,
                    Label::XDot => 1,
                    Label::XTTri(_) => 2,
                    Label::TriO(_) => 3,
                    _ => 9,
                })
                .collect();
            match kinds.iter().copied().collect::<Vec<_>>()[..] {
                [0] => Some(SpeedLaw::Stationary),
                [1] => Some(SpeedLaw::Thirds),
                [2] => Some(SpeedLaw::Plateau),
                [3] => Some(SpeedLaw::Antipodal),
                _ => None,
            }
        }
        Phase::Outward => {
            let mut xs = BTreeSet::new();
            let mut ys = BTreeSet::new();
            for l in labels {
                if let Some(r) = route_x(l) {
                    xs.insert(r);
                } else if let Some(r) = route_y(l) {
                    ys.insert(r);
                } else {
                    return None;
                }
            }
            match (xs.len(), ys.len()) {
                (1, 1) => Some(SpeedLaw::Outward { near: *xs.first()?, far: *ys.first()? }),
                _ => None,
            }
        }
    }
}

/// Golden-section minimisation; returns the argument and the payload at the best point seen.
fn golden<T>(lo: f64, hi: f64, f: impl Fn(f64) -> f64, payload: impl Fn(f64) -> (f64, T)) -> (f64, (f64, T)) {
    const R: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - R * (b - a);
    let mut d = a + R * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if b - a <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - R * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + R * (b - a);
            fd = f(d);
        }
    }
    let mut best = (lo, payload(lo));
    for x in [hi, c, d] {
        let p = payload(x);
        if p.0 < best.1 .0 {
            best = (x, p);
        }
    }
    best
}

/// Best backbone shortcut for `tree` with default options.
pub fn optimize(tree: &GeometricTree) -> OptimizeResult {
    Sweep::new(tree, SweepOptions::default()).run()
}

pub fn optimize_with(tree: &GeometricTree, options: SweepOptions) -> OptimizeResult {
    Sweep::new(tree, options).run()
}
