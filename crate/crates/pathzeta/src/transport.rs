//! Persistence diagrams as measures and exact transport distances between
//! them: Wasserstein-p through a cubic-time assignment solve on the
//! diagonal-augmented cost matrix, and bottleneck through a threshold search
//! with bipartite feasibility matching.
//!
//! Ground metric is l-infinity on the plane; the distance from a point to
//! the diagonal is persistence / 2. Infinite bars enter at their finite
//! (max, min) coordinates, so transport always runs between finite point
//! multisets.

use crate::barcode::Barcode;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Finite multiset of diagram points (birth, death) with birth > death; the
/// diagonal is implicit with infinite mass.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagram {
    points: Vec<(f64, f64)>,
}

impl Diagram {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Build from raw points; zero-persistence points are not representable
    /// (they sit on the diagonal carrying no mass).
    pub fn from_points(points: Vec<(f64, f64)>) -> Result<Self> {
        for &(b, d) in &points {
            if !b.is_finite() || !d.is_finite() {
                return Err(Error::InvalidParameter("diagram: non-finite coordinates"));
            }
            if b <= d {
                return Err(Error::InvalidParameter("diagram: needs birth > death"));
            }
        }
        Ok(Self { points })
    }

    /// Diagram of a barcode: every bar of positive length, the infinite bar
    /// at its (max, min) coordinates.
    pub fn from_barcode(barcode: &Barcode) -> Self {
        Self {
            points: barcode
                .bars()
                .iter()
                .filter(|b| b.len() > 0.0)
                .map(|b| (b.birth, b.death))
                .collect(),
        }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn persistence(&self, i: usize) -> f64 {
        self.points[i].0 - self.points[i].1
    }
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// One pair of the optimal matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Point i of the left diagram to point j of the right diagram.
    Points(usize, usize),
    /// Point i of the left diagram to its diagonal projection.
    LeftToDiagonal(usize),
    /// Point j of the right diagram to its diagonal projection.
    RightToDiagonal(usize),
}

/// An optimal transport certificate: the matching, its total p-cost and the
/// order it was computed for.
#[derive(Debug, Clone, PartialEq)]
pub struct Transport {
    pub pairs: Vec<Pairing>,
    /// Sum of l-infinity distances to the p-th power over the matching.
    pub cost: f64,
    pub order: f64,
}

/// Exact Wasserstein-p distance between diagrams (p >= 1 finite), returned
/// with its optimal matching. Solves the balanced assignment on the
/// (n+m) x (n+m) diagonal-augmented cost matrix.
pub fn wasserstein_p(a: &Diagram, b: &Diagram, p: f64) -> Result<(f64, Transport)> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter("wasserstein_p: p must be >= 1"));
    }
    let (n, m) = (a.len(), b.len());
    let dim = n + m;
    if dim == 0 {
        return Ok((
            0.0,
            Transport {
                pairs: Vec::new(),
                cost: 0.0,
                order: p,
            },
        ));
    }
    // rows: a-points then m diagonal slots; cols: b-points then n slots
    let mut cost = vec![0.0f64; dim * dim];
    for i in 0..n {
        let da = (0.5 * a.persistence(i)).powf(p);
        for j in 0..m {
            cost[i * dim + j] = linf(a.points[i], b.points[j]).powf(p);
        }
        for j in m..dim {
            cost[i * dim + j] = da;
        }
    }
    for j in 0..m {
        let db = (0.5 * b.persistence(j)).powf(p);
        for i in n..dim {
            cost[i * dim + j] = db;
        }
    }
    let (assignment, total) = assignment::solve(&cost, dim);
    let mut pairs = Vec::with_capacity(dim);
    for (row, &col) in assignment.iter().enumerate() {
        match (row < n, col < m) {
            (true, true) => pairs.push(Pairing::Points(row, col)),
            (true, false) => pairs.push(Pairing::LeftToDiagonal(row)),
            (false, true) => pairs.push(Pairing::RightToDiagonal(col)),
            (false, false) => {}
        }
    }
    Ok((
        total.max(0.0).powf(1.0 / p),
        Transport {
            pairs,
            cost: total,
            order: p,
        },
    ))
}

/// Bottleneck distance: the smallest threshold at which every point can be
/// matched within the threshold (diagonal included). Binary search over the
/// sorted candidate costs with a feasibility matching at each probe.
pub fn bottleneck(a: &Diagram, b: &Diagram) -> Result<f64> {
    let (n, m) = (a.len(), b.len());
    if n == 0 && m == 0 {
        return Ok(0.0);
    }
    let mut candidates: Vec<f64> = Vec::with_capacity(n * m + n + m + 1);
    candidates.push(0.0);
    for i in 0..n {
        candidates.push(0.5 * a.persistence(i));
        for j in 0..m {
            candidates.push(linf(a.points[i], b.points[j]));
        }
    }
    for j in 0..m {
        candidates.push(0.5 * b.persistence(j));
    }
    candidates.sort_by(|x, y| x.partial_cmp(y).unwrap());
    candidates.dedup();
    let feasible = |c: f64| bottleneck_feasible(a, b, c);
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    if !feasible(candidates[hi]) {
        return Err(Error::Numerical("bottleneck: no feasible matching"));
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

/// Perfect-matching feasibility at threshold c on the augmented bipartite
/// graph (Kuhn's augmenting paths): a-points must reach a b-point within c
/// or their own diagonal projection within c, and symmetrically.
fn bottleneck_feasible(a: &Diagram, b: &Diagram, c: f64) -> bool {
    let (n, m) = (a.len(), b.len());
    // only points farther than c from the diagonal are forced to match a
    // real partner; edges between forced sets need cost <= c
    let forced_a: Vec<usize> = (0..n).filter(|&i| 0.5 * a.persistence(i) > c).collect();
    let forced_b: Vec<usize> = (0..m).filter(|&j| 0.5 * b.persistence(j) > c).collect();
    let mut is_forced_b = vec![false; m];
    for &j in &forced_b {
        is_forced_b[j] = true;
    }
    let mut match_of_b = vec![usize::MAX; m];
    let mut matched_a = vec![usize::MAX; n];
    // match every forced a into the b-points
    for &i in &forced_a {
        let mut seen = vec![false; m];
        if !augment_a(a, b, i, c, &mut seen, &mut match_of_b, &mut matched_a) {
            return false;
        }
    }
    // every forced b must also be covered; augmenting paths may steal a
    // partner and park the displaced unforced b on the diagonal
    for &j in &forced_b {
        if match_of_b[j] != usize::MAX {
            continue;
        }
        let mut seen = vec![false; n];
        if !augment_b(a, b, j, c, &is_forced_b, &mut seen, &mut match_of_b, &mut matched_a) {
            return false;
        }
    }
    true
}

fn augment_a(
    a: &Diagram,
    b: &Diagram,
    i: usize,
    c: f64,
    seen: &mut [bool],
    match_of_b: &mut [usize],
    matched_a: &mut [usize],
) -> bool {
    for j in 0..b.len() {
        if seen[j] || linf(a.points[i], b.points[j]) > c {
            continue;
        }
        seen[j] = true;
        let current = match_of_b[j];
        if current == usize::MAX || augment_a(a, b, current, c, seen, match_of_b, matched_a) {
            match_of_b[j] = i;
            matched_a[i] = j;
            return true;
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn augment_b(
    a: &Diagram,
    b: &Diagram,
    j: usize,
    c: f64,
    is_forced_b: &[bool],
    seen: &mut [bool],
    match_of_b: &mut [usize],
    matched_a: &mut [usize],
) -> bool {
    for i in 0..a.len() {
        if seen[i] || linf(a.points[i], b.points[j]) > c {
            continue;
        }
        seen[i] = true;
        let current = matched_a[i];
        let freed = if current == usize::MAX {
            true
        } else if !is_forced_b[current] {
            // displaced unforced partner goes to the diagonal
            match_of_b[current] = usize::MAX;
            true
        } else {
            augment_b(a, b, current, c, is_forced_b, seen, match_of_b, matched_a)
        };
        if freed {
            matched_a[i] = j;
            match_of_b[j] = i;
            return true;
        }
        // re-routing failed; the partner link is intact
    }
    false
}

/// `Pers_p(mu) = d_p(mu, diagonal)`: all-diagonal transport is optimal
/// against the empty diagram, giving `(sum (pers/2)^p)^(1/p)`.
pub fn pers_p_measure(a: &Diagram, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter("pers_p_measure: p must be >= 1"));
    }
    let sum: f64 = (0..a.len()).map(|i| (0.5 * a.persistence(i)).powf(p)).sum();
    Ok(sum.powf(1.0 / p))
}

/// Zeta function of a diagram measure: `sum persistence^p`, evaluated both
/// directly and as the exact Mellin integral of the survival count
/// `eps -> #{points with persistence >= eps}`; the two routes must agree.
pub fn zeta_of_measure(a: &Diagram, p: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidParameter("zeta_of_measure: p must be > 0"));
    }
    let direct: f64 = (0..a.len()).map(|i| a.persistence(i).powf(p)).sum();
    // exact Mellin route over the sorted persistence steps:
    // p int_0^inf eps^(p-1) N^eps deps = sum_i count_i (l_(i+1)^p - l_(i)^p)
    let mut lens: Vec<f64> = (0..a.len()).map(|i| a.persistence(i)).collect();
    lens.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut mellin = 0.0;
    let mut prev = 0.0f64;
    for (i, &l) in lens.iter().enumerate() {
        let count = (lens.len() - i) as f64;
        mellin += count * (l.powf(p) - prev.powf(p));
        prev = l;
    }
    let scale = direct.abs().max(mellin.abs()).max(1e-300);
    if (direct - mellin).abs() > 1e-9 * scale {
        return Err(Error::Numerical("zeta_of_measure: route disagreement"));
    }
    Ok(direct)
}

/// Test-support hook for the assignment solver.
#[doc(hidden)]
pub fn debug_solve(cost: &[f64], n: usize) -> (alloc::vec::Vec<usize>, f64) {
    assignment::solve(cost, n)
}

mod assignment {
    //! O(n^3) Hungarian algorithm with row/column potentials (shortest
    //! augmenting paths), specialized to a dense square matrix.

    use alloc::vec;
    use alloc::vec::Vec;

    /// Returns (column assigned to each row, total cost).
    pub fn solve(cost: &[f64], n: usize) -> (Vec<usize>, f64) {
        // potentials and matching use 1-based sentinels internally
        let mut u = vec![0.0f64; n + 1];
        let mut v = vec![0.0f64; n + 1];
        let mut way = vec![0usize; n + 1];
        // row matched to column j (0 = free)
        let mut matched = vec![0usize; n + 1];
        for i in 1..=n {
            matched[0] = i;
            let mut j0 = 0usize;
            let mut minv = vec![f64::INFINITY; n + 1];
            let mut used = vec![false; n + 1];
            loop {
                used[j0] = true;
                let i0 = matched[j0];
                let mut delta = f64::INFINITY;
                let mut j1 = 0usize;
                for j in 1..=n {
                    if used[j] {
                        continue;
                    }
                    let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
                for j in 0..=n {
                    if used[j] {
                        u[matched[j]] += delta;
                        v[j] -= delta;
                    } else {
                        minv[j] -= delta;
                    }
                }
                j0 = j1;
                if matched[j0] == 0 {
                    break;
                }
            }
            // unwind augmenting path
            while j0 != 0 {
                let j1 = way[j0];
                matched[j0] = matched[j1];
                j0 = j1;
            }
        }
        let mut assignment = vec![0usize; n];
        let mut total = 0.0;
        for j in 1..=n {
            if matched[j] != 0 {
                assignment[matched[j] - 1] = j - 1;
                total += cost[(matched[j] - 1) * n + (j - 1)];
            }
        }
        (assignment, total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(pts: &[(f64, f64)]) -> Diagram {
        Diagram::from_points(pts.to_vec()).unwrap()
    }

    #[test]
    fn single_point_to_empty() {
        let a = diag(&[(1.0, 0.0)]);
        let (d, transport) = wasserstein_p(&a, &Diagram::empty(), 2.0).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        assert_eq!(transport.pairs, vec![Pairing::LeftToDiagonal(0)]);
    }

    #[test]
    fn identical_diagrams_distance_zero() {
        let a = diag(&[(2.0, 0.0), (1.0, 0.5)]);
        let (d, _) = wasserstein_p(&a, &a, 1.0).unwrap();
        assert!(d.abs() < 1e-15);
        assert_eq!(bottleneck(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn direct_match_beats_diagonal() {
        let a = diag(&[(2.0, 0.0)]);
        let b = diag(&[(1.0, 0.0)]);
        let (d, transport) = wasserstein_p(&a, &b, 1.0).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        assert_eq!(transport.pairs, vec![Pairing::Points(0, 0)]);
        assert!((bottleneck(&a, &b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bottleneck_prefers_diagonal_for_small_points() {
        // matching both to the diagonal costs 0.5; direct match costs 1.5
        let a = diag(&[(1.0, 0.0)]);
        let b = diag(&[(2.5, 1.5)]);
        let d = bottleneck(&a, &b).unwrap();
        assert!((d - 0.5).abs() < 1e-15, "{d}");
    }

    #[test]
    fn empty_vs_single_bottleneck() {
        let a = diag(&[(1.0, 0.0)]);
        assert!((bottleneck(&a, &Diagram::empty()).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(bottleneck(&Diagram::empty(), &Diagram::empty()).unwrap(), 0.0);
    }

    #[test]
    fn pers_p_measure_examples() {
        let a = diag(&[(2.0, 0.0), (1.0, 0.0)]);
        let v = pers_p_measure(&a, 2.0).unwrap();
        assert!((v - (1.0f64 + 0.25).sqrt()).abs() < 1e-15);
        assert_eq!(pers_p_measure(&Diagram::empty(), 3.0).unwrap(), 0.0);
        let (d, _) = wasserstein_p(&a, &Diagram::empty(), 2.0).unwrap();
        assert!((v - d).abs() < 1e-15);
    }

    #[test]
    fn zeta_of_measure_examples() {
        let a = diag(&[(2.0, 0.0), (1.0, 0.0)]);
        assert!((zeta_of_measure(&a, 2.0).unwrap() - 5.0).abs() < 1e-12);
        assert!((zeta_of_measure(&a, 1.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn symmetry() {
        let a = diag(&[(2.0, 0.3), (1.4, 1.0)]);
        let b = diag(&[(1.9, 0.1), (0.9, 0.2), (3.0, 2.2)]);
        for &p in &[1.0, 2.0, 3.5] {
            let (dab, _) = wasserstein_p(&a, &b, p).unwrap();
            let (dba, _) = wasserstein_p(&b, &a, p).unwrap();
            assert!((dab - dba).abs() < 1e-12);
        }
        assert_eq!(bottleneck(&a, &b).unwrap(), bottleneck(&b, &a).unwrap());
    }

    #[test]
    fn hungarian_small_known_case() {
        // classic 3x3 with optimum 5 (1+3+1... rows: pick 1,3,1)
        let cost = [1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 3.0, 6.0, 9.0];
        let (asg, total) = assignment::solve(&cost, 3);
        let mut cols = asg.clone();
        cols.sort();
        assert_eq!(cols, vec![0, 1, 2]);
        assert!((total - 10.0).abs() < 1e-12, "{total}");
    }
}
