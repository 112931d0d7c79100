//! Row maxima of totally monotone matrices, and the longest path between two
//! secondary leaves that is routed through the shortcut.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::Serialize;

use crate::diameter::BackboneDecomposition;
use crate::error::SmawkError;
use crate::tree::{GeometricTree, Shortcut};

/// A matrix given by an entry function.
pub struct ImplicitMatrix<F: Fn(usize, usize) -> f64> {
    pub rows: usize,
    pub cols: usize,
    pub entry: F,
}

impl<F: Fn(usize, usize) -> f64> ImplicitMatrix<F> {
    pub fn new(rows: usize, cols: usize, entry: F) -> Self {
        ImplicitMatrix { rows, cols, entry }
    }
}

/// Per-row `(column, value)` of the leftmost maximum.
pub fn row_maxima<F: Fn(usize, usize) -> f64>(m: &ImplicitMatrix<F>) -> Result<Vec<(usize, f64)>, SmawkError> {
    row_maxima_counted(m).map(|(r, _)| r)
}

/// As [`row_maxima`], also reporting how many distinct entries were evaluated.
pub fn row_maxima_counted<F: Fn(usize, usize) -> f64>(
    m: &ImplicitMatrix<F>,
) -> Result<(Vec<(usize, f64)>, usize), SmawkError> {
    if m.rows == 0 || m.cols == 0 {
        return Err(SmawkError::EmptyMatrix);
    }
    let memo = RefCell::new(HashMap::new());
    let f = |r: usize, c: usize| *memo.borrow_mut().entry((r, c)).or_insert_with(|| (m.entry)(r, c));
    let rows: Vec<usize> = (0..m.rows).collect();
    let cols: Vec<usize> = (0..m.cols).collect();
    let mut arg = vec![0usize; m.rows];
    smawk(&rows, &cols, &f, &mut arg);
    let out = arg.iter().enumerate().map(|(r, &c)| (c, f(r, c))).collect();
    let evaluations = memo.borrow().len();
    Ok((out, evaluations))
}

fn smawk(rows: &[usize], cols: &[usize], f: &dyn Fn(usize, usize) -> f64, arg: &mut [usize]) {
    if rows.is_empty() {
        return;
    }
    // reduce to at most one candidate column per row
    let mut stack: Vec<usize> = Vec::with_capacity(rows.len());
    for &c in cols {
        while let Some(&top) = stack.last() {
            let r = rows[stack.len() - 1];
            if f(r, top) < f(r, c) {
                stack.pop();
            } else {
                break;
            }
        }
        if stack.len() < rows.len() {
            stack.push(c);
        }
    }
    let odd: Vec<usize> = rows.iter().skip(1).step_by(2).copied().collect();
    smawk(&odd, &stack, f, arg);
    // fill the even rows between their odd neighbours
    let mut start = 0;
    for k in (0..rows.len()).step_by(2) {
        let r = rows[k];
        let stop = if k + 1 < rows.len() { arg[rows[k + 1]] } else { *stack.last().unwrap() };
        let mut best = stack[start];
        let mut best_v = f(r, best);
        let mut idx = start;
        while stack[idx] != stop {
            idx += 1;
            let v = f(r, stack[idx]);
            if v > best_v {
                best_v = v;
                best = stack[idx];
            }
        }
        arg[r] = best;
        start = idx;
    }
}

/// Longest secondary-to-secondary path through the shortcut.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WedgePath {
    pub length: f64,
    /// Secondary sub-tree indices, ordered from a to b.
    pub first: usize,
    pub second: usize,
}

/// The implicit matrix behind [`longest_wedge_path`]: rows and columns are the
/// secondary sub-trees rooted between p and q, sorted by root position.
/// Entry `(j, i)` is the length of the path from leaf `i` through the shortcut
/// to leaf `j` when that route beats the tree route between the roots, else 0.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeMatrix {
    t: Vec<f64>,
    h: Vec<f64>,
    sp: f64,
    sq: f64,
    ell: f64,
    /// index of the first eligible sub-tree
    pub offset: usize,
}

impl WedgeMatrix {
    pub(crate) fn from_parts(t: &[f64], h: &[f64], sp: f64, sq: f64, ell: f64) -> Self {
        let (sp, sq) = if sp <= sq { (sp, sq) } else { (sq, sp) };
        let lo = t.partition_point(|&x| x < sp);
        let hi = t.partition_point(|&x| x <= sq);
        WedgeMatrix { t: t[lo..hi].to_vec(), h: h[lo..hi].to_vec(), sp, sq, ell, offset: lo }
    }

    /// Matrix for a backbone shortcut; `None` if an endpoint is off the backbone.
    pub fn new(tree: &GeometricTree, decomposition: &BackboneDecomposition, shortcut: &Shortcut) -> Option<Self> {
        let sp = decomposition.arc_of(tree, &shortcut.p)?;
        let sq = decomposition.arc_of(tree, &shortcut.q)?;
        let ell = tree.euclidean_distance(&shortcut.p, &shortcut.q).ok()?;
        let t: Vec<f64> = decomposition.secondary.iter().map(|s| s.arc).collect();
        let h: Vec<f64> = decomposition.secondary.iter().map(|s| s.height).collect();
        Some(Self::from_parts(&t, &h, sp, sq, ell))
    }

    pub fn size(&self) -> usize {
        self.t.len()
    }

    pub fn entry(&self, j: usize, i: usize) -> f64 {
        let via = (self.t[i] - self.sp) + self.ell + (self.sq - self.t[j]);
        if via < self.t[j] - self.t[i] {
            self.h[i] + via + self.h[j]
        } else {
            0.0
        }
    }

    pub fn as_implicit(&self) -> ImplicitMatrix<impl Fn(usize, usize) -> f64 + '_> {
        ImplicitMatrix::new(self.size(), self.size(), move |j, i| self.entry(j, i))
    }

    /// Largest entry, with its sub-tree indices; `None` when every entry is 0.
    pub fn longest(&self) -> Option<WedgePath> {
        if self.size() < 2 {
            return None;
        }
        let maxima = row_maxima(&self.as_implicit()).expect("non-empty");
        let (j, &(i, v)) = maxima
            .iter()
            .enumerate()
            .fold((0, &maxima[0]), |acc, cur| if cur.1 .1 > acc.1 .1 { cur } else { acc });
        (v > 0.0).then_some(WedgePath { length: v, first: self.offset + i, second: self.offset + j })
    }
}

pub(crate) fn wedge_from_parts(t: &[f64], h: &[f64], sp: f64, sq: f64, ell: f64) -> Option<WedgePath> {
    WedgeMatrix::from_parts(t, h, sp, sq, ell).longest()
}

/// Longest path of the form secondary leaf, p, q, secondary leaf that is shorter
/// than the tree path between the two sub-tree roots. Both endpoints of the
/// shortcut must lie on the backbone.
pub fn longest_wedge_path(
    tree: &GeometricTree,
    decomposition: &BackboneDecomposition,
    shortcut: &Shortcut,
) -> Option<WedgePath> {
    WedgeMatrix::new(tree, decomposition, shortcut)?.longest()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let m = ImplicitMatrix::new(2, 2, |r, c| [[1.0, 2.0], [3.0, 4.0]][r][c]);
        assert_eq!(row_maxima(&m).unwrap(), vec![(1, 2.0), (1, 4.0)]);
        let row = [3.0, 7.0, 7.0, 1.0];
        let m = ImplicitMatrix::new(1, 4, |_, c| row[c]);
        assert_eq!(row_maxima(&m).unwrap(), vec![(1, 7.0)]);
        let m = ImplicitMatrix::new(0, 3, |_, _| 0.0);
        assert_eq!(row_maxima(&m).unwrap_err(), SmawkError::EmptyMatrix);
    }

    #[test]
    fn tall_and_wide() {
        let xs: Vec<f64> = (0..40).map(|k| (k / 3) as f64).collect();
        let ys: Vec<f64> = (0..7).map(|k| (2 * k) as f64).collect();
        let m = ImplicitMatrix::new(40, 7, |r, c| -(xs[r] - ys[c]).powi(2));
        let got = row_maxima(&m).unwrap();
        for (r, &(c, v)) in got.iter().enumerate() {
            let mut best = (0, f64::MIN);
            for c2 in 0..7 {
                let v2 = -(xs[r] - ys[c2]).powi(2);
                if v2 > best.1 {
                    best = (c2, v2);
                }
            }
            assert_eq!((c, v), best);
        }
    }
}
