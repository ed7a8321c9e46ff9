//! Reflection, unit-square scaling, and Hausdorff diagnostics comparing the
//! positive and negative halves of a coefficient point set.
//!
//! Points plot `c` horizontally and `n` vertically, so reflecting across the
//! `n`-axis negates `c`.

use std::collections::BTreeMap;

use crate::census::{split_by_sign, Point, PointSet};
use crate::error::{Error, Result};
use crate::exec::Executor;

pub const DEFAULT_TRIM: f64 = 0.02;

pub fn reflect(s: &PointSet) -> PointSet {
    s.iter().map(|p| Point::new(-p.c, p.n)).collect()
}

/// `(c_k, n_k)` of the smallest rectangle `[-c_k, c_k] x [0, n_k]` holding `s`.
pub fn bounding_rect(s: &PointSet) -> Result<(u64, u64)> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let c_k = s.iter().map(|p| p.c.unsigned_abs()).max().unwrap_or(0);
    let n_k = s.iter().map(|p| p.n).max().unwrap_or(0);
    if c_k == 0 {
        return Err(Error::TrivialPoint { c: 0, n: n_k });
    }
    Ok((c_k, n_k))
}

/// Points `(c / c_scale, n / n_scale)` of the unit square, stored exactly as
/// integer numerators over the shared scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitCloud {
    numerators: Vec<(i64, u64)>,
    c_scale: u64,
    n_scale: u64,
}

impl UnitCloud {
    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn scale(&self) -> (u64, u64) {
        (self.c_scale, self.n_scale)
    }

    /// Exact coordinates as `((c, c_scale), (n, n_scale))` fraction pairs.
    pub fn exact(&self) -> impl Iterator<Item = ((i64, u64), (u64, u64))> + '_ {
        self.numerators
            .iter()
            .map(move |&(c, n)| ((c, self.c_scale), (n, self.n_scale)))
    }

    /// Floating-point coordinates; only distance computations use these.
    pub fn coords(&self) -> Vec<(f64, f64)> {
        let cs = self.c_scale as f64;
        let ns = self.n_scale as f64;
        self.numerators
            .iter()
            .map(|&(c, n)| (c as f64 / cs, n as f64 / ns))
            .collect()
    }
}

pub fn scale_to_unit(s: &PointSet, c_scale: u64, n_scale: u64) -> Result<UnitCloud> {
    if c_scale == 0 || n_scale == 0 {
        return Err(Error::Zero);
    }
    let mut numerators = Vec::with_capacity(s.len());
    for p in s {
        if p.c < 0 || p.c.unsigned_abs() > c_scale || p.n > n_scale {
            return Err(Error::OutsideUnitSquare {
                c: p.c,
                n: p.n,
                c_scale,
                n_scale,
            });
        }
        numerators.push((p.c, p.n));
    }
    Ok(UnitCloud {
        numerators,
        c_scale,
        n_scale,
    })
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    dx * dx + dy * dy
}

/// Brute-force Hausdorff distance, `O(|a| |b|)`. The reference implementation.
pub fn hausdorff(a: &UnitCloud, b: &UnitCloud) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let (pa, pb) = (a.coords(), b.coords());
    let directed = |from: &[(f64, f64)], to: &[(f64, f64)]| {
        from.iter()
            .map(|&p| {
                to.iter()
                    .map(|&q| dist2(p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(directed(&pa, &pb).max(directed(&pb, &pa)).sqrt())
}

/// Hausdorff distance through a uniform bucket grid. Returns exactly the
/// brute-force value: both take the same minima over the same squared
/// distances, the grid only skips candidates that cannot win.
pub fn hausdorff_grid(a: &UnitCloud, b: &UnitCloud, exec: &Executor) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let (pa, pb) = (a.coords(), b.coords());
    let (ga, gb) = (Grid::new(&pa), Grid::new(&pb));
    let directed = |from: &[(f64, f64)], to: &Grid| {
        exec.map(from, |&p| {
            to.nearest(p, |_| true).map_or(f64::INFINITY, |(_, d)| d)
        })
        .into_iter()
        .fold(0.0, f64::max)
    };
    Ok(directed(&pa, &gb).max(directed(&pb, &ga)).sqrt())
}

/// Uniform grid over the unit square for nearest-neighbour queries.
#[derive(Debug, Clone)]
struct Grid {
    pts: Vec<(f64, f64)>,
    side: usize,
    /// CSR layout: points of cell `i` are `order[start[i]..start[i + 1]]`.
    start: Vec<usize>,
    order: Vec<u32>,
}

impl Grid {
    fn new(pts: &[(f64, f64)]) -> Self {
        let side = ((pts.len() as f64).sqrt().ceil() as usize).clamp(1, 1024);
        let mut counts = vec![0usize; side * side + 1];
        let cells: Vec<usize> = pts.iter().map(|&p| Self::cell_of(side, p)).collect();
        for &c in &cells {
            counts[c + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let start = counts.clone();
        let mut fill = counts;
        let mut order = vec![0u32; pts.len()];
        for (i, &c) in cells.iter().enumerate() {
            order[fill[c]] = i as u32;
            fill[c] += 1;
        }
        Grid {
            pts: pts.to_vec(),
            side,
            start,
            order,
        }
    }

    fn axis(side: usize, x: f64) -> usize {
        ((x * side as f64) as usize).min(side - 1)
    }

    fn cell_of(side: usize, p: (f64, f64)) -> usize {
        Self::axis(side, p.1) * side + Self::axis(side, p.0)
    }

    /// Nearest point accepted by `alive`, as `(index, squared distance)`.
    /// Ties go to the lower index.
    fn nearest(&self, q: (f64, f64), alive: impl Fn(usize) -> bool) -> Option<(usize, f64)> {
        let (qx, qy) = (
            Self::axis(self.side, q.0) as i64,
            Self::axis(self.side, q.1) as i64,
        );
        let h = 1.0 / self.side as f64;
        let mut best: Option<(usize, f64)> = None;
        for ring in 0..self.side as i64 {
            for cy in (qy - ring)..=(qy + ring) {
                if cy < 0 || cy >= self.side as i64 {
                    continue;
                }
                let on_edge_row = cy == qy - ring || cy == qy + ring;
                let step = if on_edge_row { 1 } else { (2 * ring).max(1) };
                let mut cx = qx - ring;
                while cx <= qx + ring {
                    if cx >= 0 && cx < self.side as i64 {
                        let cell = cy as usize * self.side + cx as usize;
                        for &i in &self.order[self.start[cell]..self.start[cell + 1]] {
                            let i = i as usize;
                            if !alive(i) {
                                continue;
                            }
                            let d = dist2(q, self.pts[i]);
                            let better = match best {
                                None => true,
                                Some((bi, bd)) => d < bd || (d == bd && i < bi),
                            };
                            if better {
                                best = Some((i, d));
                            }
                        }
                    }
                    cx += step;
                }
            }
            // Every unvisited cell is at least `ring * h` away from `q`.
            if let Some((_, bd)) = best {
                let reach = ring as f64 * h * (1.0 - 1e-9);
                if bd.sqrt() < reach {
                    break;
                }
            }
        }
        best
    }
}

/// One side of the greedy trimming state.
struct Side {
    pts: Vec<(f64, f64)>,
    grid: Grid,
    alive: Vec<bool>,
    /// Nearest alive point on the other side, with squared distance.
    nn: Vec<(usize, f64)>,
    budget: usize,
}

impl Side {
    fn new(pts: Vec<(f64, f64)>, budget: usize) -> Self {
        let grid = Grid::new(&pts);
        let alive = vec![true; pts.len()];
        Side {
            pts,
            grid,
            alive,
            nn: Vec::new(),
            budget,
        }
    }

    fn worst(&self) -> Option<(usize, f64)> {
        let mut out: Option<(usize, f64)> = None;
        for (i, &(_, d)) in self.nn.iter().enumerate() {
            if self.alive[i] && out.is_none_or(|(_, bd)| d > bd) {
                out = Some((i, d));
            }
        }
        out
    }
}

fn link(from: &mut Side, to: &Side, exec: &Executor) {
    let alive = &to.alive;
    from.nn = exec.map(&from.pts, |&p| {
        to.grid
            .nearest(p, |i| alive[i])
            .expect("other side keeps at least one point")
    });
}

/// Full and trimmed Hausdorff distances between two nonempty clouds.
///
/// Trimming is greedy: repeatedly drop the point realizing the current
/// distance, as long as its side still has budget (`floor(trim * len)`
/// points). The trimmed value is the smallest distance seen along the way, so
/// it never exceeds the full distance.
pub fn trimmed_hausdorff(
    a: &UnitCloud,
    b: &UnitCloud,
    trim: f64,
    exec: &Executor,
) -> Result<(f64, f64)> {
    if !(0.0..0.5).contains(&trim) {
        return Err(Error::InvalidTrim(trim));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let budget = |len: usize| (trim * len as f64).floor() as usize;
    let mut sides = [
        Side::new(a.coords(), budget(a.len())),
        Side::new(b.coords(), budget(b.len())),
    ];
    {
        let [sa, sb] = &mut sides;
        link(sa, sb, exec);
        link(sb, sa, exec);
    }
    let current = |sides: &[Side; 2]| -> (usize, usize, f64) {
        let (ia, da) = sides[0].worst().expect("nonempty");
        let (ib, db) = sides[1].worst().expect("nonempty");
        if da >= db {
            (0, ia, da)
        } else {
            (1, ib, db)
        }
    };
    let (_, _, full) = current(&sides);
    let mut best = full;
    loop {
        let (s, i, d) = current(&sides);
        best = best.min(d);
        if sides[s].budget == 0 {
            break;
        }
        sides[s].budget -= 1;
        sides[s].alive[i] = false;
        // Points on the other side that were matched to `i` need a new partner.
        let (removed, other) = if s == 0 {
            let [x, y] = &mut sides;
            (&*x, y)
        } else {
            let [x, y] = &mut sides;
            (&*y, x)
        };
        for j in 0..other.pts.len() {
            if other.alive[j] && other.nn[j].0 == i {
                other.nn[j] = removed
                    .grid
                    .nearest(other.pts[j], |q| removed.alive[q])
                    .expect("budget keeps at least one point");
            }
        }
    }
    Ok((full.sqrt(), best.sqrt()))
}

/// Diagnostics for one cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub k: u64,
    pub c_k: u64,
    pub n_k: u64,
    pub count_pos: usize,
    pub count_neg: usize,
    pub hausdorff_full: Option<f64>,
    pub hausdorff_trimmed: Option<f64>,
    pub trim: f64,
    /// One sign class is empty; distances are undefined.
    pub degenerate: bool,
    /// `hausdorff_trimmed` relative to the first cutoff with a nonzero trimmed value.
    pub trimmed_ratio: Option<f64>,
}

/// Reports for each cutoff in ascending order. Both sign classes are scaled by
/// the joint rectangle of the whole set at that cutoff, negatives after
/// reflection.
pub fn symmetry_series(
    points_by_cutoff: &BTreeMap<u64, PointSet>,
    trim: f64,
    exec: &Executor,
) -> Result<Vec<SymmetryReport>> {
    if !(0.0..0.5).contains(&trim) {
        return Err(Error::InvalidTrim(trim));
    }
    let mut reports = Vec::with_capacity(points_by_cutoff.len());
    let mut baseline: Option<f64> = None;
    for (&k, points) in points_by_cutoff {
        let (pos, neg) = split_by_sign(points)?;
        let mut report = SymmetryReport {
            k,
            c_k: 0,
            n_k: 0,
            count_pos: pos.len(),
            count_neg: neg.len(),
            hausdorff_full: None,
            hausdorff_trimmed: None,
            trim,
            degenerate: true,
            trimmed_ratio: None,
        };
        if !points.is_empty() {
            (report.c_k, report.n_k) = bounding_rect(points)?;
        }
        if !pos.is_empty() && !neg.is_empty() {
            let a = scale_to_unit(&pos, report.c_k, report.n_k)?;
            let b = scale_to_unit(&reflect(&neg), report.c_k, report.n_k)?;
            let (full, trimmed) = trimmed_hausdorff(&a, &b, trim, exec)?;
            report.hausdorff_full = Some(full);
            report.hausdorff_trimmed = Some(trimmed);
            report.degenerate = false;
            if baseline.is_none() && trimmed > 0.0 {
                baseline = Some(trimmed);
            }
            report.trimmed_ratio = baseline.map(|b0| trimmed / b0);
        }
        reports.push(report);
    }
    Ok(reports)
}
