//! Superlevel-set barcodes of sampled paths and the counting functionals
//! built on them.
//!
//! A value sequence is swept in decreasing order while a union-find tracks
//! the connected components of the superlevel set. When two components merge
//! the one with the smaller maximum dies (elder rule) and emits a bar; the
//! surviving component emits the infinite bar, whose length is set to the
//! range of the path (max - min).
//!
//! Each barcode-derived count has an independent stopping-time oracle that
//! scans the raw values once: [`count_bars_updown`] mirrors
//! [`count_bars_geq`], and [`count_upcrossings`] mirrors [`count_rectangle`].
//! The two routes agree exactly on every finite sequence.

use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// One bar of a barcode. `birth >= death`; exactly one bar per barcode is
/// infinite, stored at (max, min) of the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar {
    pub birth: f64,
    pub death: f64,
    pub infinite: bool,
}

impl Bar {
    /// Bar length `birth - death`; for the infinite bar this is the range.
    pub fn len(&self) -> f64 {
        self.birth - self.death
    }
}

/// Finite multiset of bars plus the cached path range.
#[derive(Debug, Clone, PartialEq)]
pub struct Barcode {
    bars: Vec<Bar>,
    min: f64,
    max: f64,
}

impl Barcode {
    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    /// (min, max) of the underlying path.
    pub fn value_range(&self) -> (f64, f64) {
        (self.min, self.max)
    }

    /// Length of the infinite bar.
    pub fn range(&self) -> f64 {
        self.max - self.min
    }

    /// Assemble a barcode from raw bars (used by file import). Requires
    /// exactly one infinite bar and `birth >= death` everywhere.
    pub fn from_bars(bars: Vec<Bar>) -> Result<Self> {
        let mut infinite = None;
        for (i, b) in bars.iter().enumerate() {
            if !b.birth.is_finite() || !b.death.is_finite() || b.birth < b.death {
                return Err(Error::InvalidParameter(
                    "barcode: bars need finite birth >= death",
                ));
            }
            if b.infinite {
                if infinite.is_some() {
                    return Err(Error::InvalidParameter(
                        "barcode: more than one infinite bar",
                    ));
                }
                infinite = Some(i);
            }
        }
        let Some(i) = infinite else {
            return Err(Error::InvalidParameter("barcode: missing infinite bar"));
        };
        let (min, max) = (bars[i].death, bars[i].birth);
        Ok(Self { bars, min, max })
    }
}

struct MergeForest {
    parent: Vec<usize>,
    // birth value and birth index of the component maximum, at the root
    birth: Vec<(f64, usize)>,
}

const INACTIVE: usize = usize::MAX;

impl MergeForest {
    fn new(n: usize) -> Self {
        Self {
            parent: vec![INACTIVE; n],
            birth: vec![(0.0, 0); n],
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[i] != i {
            let next = self.parent[i];
            self.parent[i] = root;
            i = next;
        }
        root
    }
}

/// Superlevel-set barcode of a sampled path.
///
/// Ties in value are broken by processing the smaller sample index first,
/// and on a merge the component with the smaller (birth value, then earlier
/// birth index) dies, so barcodes of paths with repeated values are
/// deterministic.
pub fn superlevel_barcode(values: &[f64]) -> Result<Barcode> {
    if values.is_empty() {
        return Err(Error::EmptyPath);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("barcode: non-finite sample value"));
    }
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap()
            .then(a.cmp(&b))
    });

    let mut forest = MergeForest::new(n);
    let mut bars = Vec::new();
    for &i in &order {
        let level = values[i];
        forest.parent[i] = i;
        forest.birth[i] = (level, i);
        for j in [i.wrapping_sub(1), i + 1] {
            if j >= n || forest.parent[j] == INACTIVE {
                continue;
            }
            let a = forest.find(i);
            let b = forest.find(j);
            if a == b {
                continue;
            }
            // elder rule: higher birth survives, ties to the earlier index
            let (survivor, dying) = if forest.birth[a].0 > forest.birth[b].0
                || (forest.birth[a].0 == forest.birth[b].0
                    && forest.birth[a].1 < forest.birth[b].1)
            {
                (a, b)
            } else {
                (b, a)
            };
            // a component born at the merge level is the current sample
            // extending its neighbor, not a feature
            if forest.birth[dying].0 > level {
                bars.push(Bar {
                    birth: forest.birth[dying].0,
                    death: level,
                    infinite: false,
                });
            }
            forest.parent[dying] = survivor;
        }
    }

    let mut min = values[0];
    let mut max = values[0];
    for &v in &values[1..] {
        min = min.min(v);
        max = max.max(v);
    }
    bars.push(Bar {
        birth: max,
        death: min,
        infinite: true,
    });
    Ok(Barcode { bars, min, max })
}

/// `N^eps`: number of bars of length >= eps, the infinite bar counted at its
/// range length.
pub fn count_bars_geq(barcode: &Barcode, eps: f64) -> Result<usize> {
    check_eps(eps)?;
    Ok(barcode.bars.iter().filter(|b| b.len() >= eps).count())
}

/// Stopping-time oracle for [`count_bars_geq`].
///
/// Scans once, alternating between "descend eps from the running maximum"
/// and "ascend eps from the running minimum"; each completed pair is one
/// finite bar of length >= eps, and the boundary component contributes a
/// further bar exactly when the range reaches eps.
pub fn count_bars_updown(values: &[f64], eps: f64) -> Result<usize> {
    check_eps(eps)?;
    if values.is_empty() {
        return Err(Error::EmptyPath);
    }
    let mut count = 0usize;
    let mut pos = 0usize;
    loop {
        // descent of eps below the running maximum
        let mut peak = values[pos];
        let mut hit = None;
        for (j, &v) in values.iter().enumerate().skip(pos) {
            peak = peak.max(v);
            if peak - v >= eps {
                hit = Some(j);
                break;
            }
        }
        let Some(t) = hit else { break };
        // ascent of eps above the running minimum
        let mut trough = values[t];
        hit = None;
        for (j, &v) in values.iter().enumerate().skip(t) {
            trough = trough.min(v);
            if v - trough >= eps {
                hit = Some(j);
                break;
            }
        }
        let Some(s) = hit else { break };
        count += 1;
        pos = s;
    }
    let mut min = values[0];
    let mut max = values[0];
    for &v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if max - min >= eps {
        count += 1;
    }
    Ok(count)
}

/// `N^{x,x+eps}`: diagram points with death <= x and birth >= x + eps, the
/// infinite bar entering at (max, min).
pub fn count_rectangle(barcode: &Barcode, x: f64, eps: f64) -> Result<usize> {
    check_eps(eps)?;
    let y = x + eps;
    Ok(barcode
        .bars
        .iter()
        .filter(|b| b.death <= x && b.birth >= y)
        .count())
}

/// Stopping-time oracle for [`count_rectangle`]: counts excursions reaching
/// x + eps, re-armed by visits to x or below.
///
/// The scan starts armed so that a path already above x + eps is counted,
/// but paths that never reach x at all hold no diagram point with death
/// <= x, hence the minimum gate.
pub fn count_upcrossings(values: &[f64], x: f64, eps: f64) -> Result<usize> {
    check_eps(eps)?;
    if values.is_empty() {
        return Err(Error::EmptyPath);
    }
    if values.iter().cloned().fold(f64::INFINITY, f64::min) > x {
        return Ok(0);
    }
    let y = x + eps;
    let mut armed = true;
    let mut count = 0usize;
    for &v in values {
        if armed && v >= y {
            count += 1;
            armed = false;
        } else if !armed && v <= x {
            armed = true;
        }
    }
    Ok(count)
}

/// `Pers_p^p`: sum of bar lengths to the power p, the infinite bar counted
/// at its range length when `include_infinite` is set.
pub fn pers_p(barcode: &Barcode, p: f64, include_infinite: bool) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidParameter("pers_p: p must be > 0"));
    }
    Ok(barcode
        .bars
        .iter()
        .filter(|b| include_infinite || !b.infinite)
        .map(|b| b.len().powf(p))
        .sum())
}

/// Measure of the eps-trimmed tree: sum of (length - eps) over bars longer
/// than eps. Equals the integral of `N^a` over a >= eps.
pub fn tree_measure(barcode: &Barcode, eps: f64) -> Result<f64> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter("tree_measure: eps must be >= 0"));
    }
    Ok(barcode
        .bars
        .iter()
        .map(|b| (b.len() - eps).max(0.0))
        .sum())
}

/// Regularity diagnostic: least-squares slope of log N^eps against
/// log(1/eps) over the supplied grid, clamped below at 1.
///
/// Grid points where the count vanishes carry no information and are
/// skipped; at least two informative points are required.
pub fn holder_exponent_estimate(values: &[f64], eps_grid: &[f64]) -> Result<f64> {
    if eps_grid.len() < 2 {
        return Err(Error::InvalidParameter(
            "holder_exponent_estimate: need at least 2 grid points",
        ));
    }
    let barcode = superlevel_barcode(values)?;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for &eps in eps_grid {
        let n = count_bars_geq(&barcode, eps)?;
        if n > 0 {
            pts.push(((1.0 / eps).ln(), (n as f64).ln()));
        }
    }
    if pts.len() < 2 {
        return Err(Error::InvalidParameter(
            "holder_exponent_estimate: fewer than 2 grid points have bars",
        ));
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    Ok(slope.max(1.0))
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter("eps must be > 0"));
    }
    Ok(())
}
