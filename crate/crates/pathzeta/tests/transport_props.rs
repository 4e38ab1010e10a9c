//! Transport distances against exhaustive matching enumeration, metric and
//! interpolation inequalities, diagram stability and the zeta/Wasserstein
//! convergence diagnostic.

use pathzeta::barcode::{pers_p, superlevel_barcode};
use pathzeta::rng::Stream;
use pathzeta::transport::{
    bottleneck, pers_p_measure, wasserstein_p, zeta_of_measure, Diagram,
};
use pathzeta::SeedSpec;

fn random_diagram(stream: &mut Stream, max_points: usize) -> Diagram {
    let n = (stream.next_u64() % (max_points as u64 + 1)) as usize;
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let death = 2.0 * stream.uniform_open() - 1.0;
            let pers = 0.05 + 1.95 * stream.uniform_open();
            (death + pers, death)
        })
        .collect();
    Diagram::from_points(pts).unwrap()
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// Exhaustive enumeration over all augmented matchings: every injection of a
/// subset of the left points into the right points, the rest matched to the
/// diagonal. Returns (min sum of cost^p, min over matchings of max cost).
fn brute_force(a: &Diagram, b: &Diagram, p: f64) -> (f64, f64) {
    let (n, m) = (a.len(), b.len());
    let mut best_sum = f64::INFINITY;
    let mut best_max = f64::INFINITY;
    let mut assign = vec![usize::MAX; n];
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        a: &Diagram,
        b: &Diagram,
        p: f64,
        i: usize,
        used: &mut Vec<bool>,
        assign: &mut Vec<usize>,
        best_sum: &mut f64,
        best_max: &mut f64,
    ) {
        let (n, m) = (a.len(), b.len());
        if i == n {
            let mut sum = 0.0;
            let mut maxc = 0.0f64;
            for (i, &j) in assign.iter().enumerate() {
                let c = if j == usize::MAX {
                    0.5 * (a.points()[i].0 - a.points()[i].1)
                } else {
                    linf(a.points()[i], b.points()[j])
                };
                sum += c.powf(p);
                maxc = maxc.max(c);
            }
            for (j, &u) in used.iter().enumerate() {
                if !u {
                    let c = 0.5 * (b.points()[j].0 - b.points()[j].1);
                    sum += c.powf(p);
                    maxc = maxc.max(c);
                }
            }
            *best_sum = best_sum.min(sum);
            *best_max = best_max.min(maxc);
            return;
        }
        // diagonal option
        assign[i] = usize::MAX;
        recurse(a, b, p, i + 1, used, assign, best_sum, best_max);
        for j in 0..m {
            if !used[j] {
                used[j] = true;
                assign[i] = j;
                recurse(a, b, p, i + 1, used, assign, best_sum, best_max);
                used[j] = false;
            }
        }
        assign[i] = usize::MAX;
    }
    let mut used = vec![false; m];
    recurse(a, b, p, 0, &mut used, &mut assign, &mut best_sum, &mut best_max);
    (best_sum, best_max)
}

#[test]
fn exact_distances_match_brute_force() {
    let mut stream = SeedSpec::new(42, 7).stream();
    for trial in 0..150 {
        let a = random_diagram(&mut stream, 6);
        let b = random_diagram(&mut stream, 6);
        for &p in &[1.0, 2.0, 3.0] {
            let (cost_sum, _) = brute_force(&a, &b, p);
            let (d, transport) = wasserstein_p(&a, &b, p).unwrap();
            assert!(
                (transport.cost - cost_sum).abs() <= 1e-9 * cost_sum.max(1e-12),
                "trial {trial} p {p}: {} vs {}",
                transport.cost,
                cost_sum
            );
            assert!((d - cost_sum.powf(1.0 / p)).abs() < 1e-12);
        }
        let (_, minmax) = brute_force(&a, &b, 1.0);
        let bn = bottleneck(&a, &b).unwrap();
        assert!(
            (bn - minmax).abs() <= 1e-12 + 1e-9 * minmax,
            "trial {trial}: bottleneck {bn} vs {minmax}"
        );
        // max <= p-mean over the optimal matching
        let (d1, _) = wasserstein_p(&a, &b, 1.0).unwrap();
        assert!(bn <= d1 + 1e-12);
    }
}

#[test]
fn metric_axioms_sampled() {
    let mut stream = SeedSpec::new(43, 0).stream();
    for _ in 0..1000 {
        let a = random_diagram(&mut stream, 4);
        let b = random_diagram(&mut stream, 4);
        let c = random_diagram(&mut stream, 4);
        for &p in &[1.0, 2.0] {
            let d = |x: &Diagram, y: &Diagram| wasserstein_p(x, y, p).unwrap().0;
            // the transposed solve walks a different potential order, so the
            // two orientations agree to rounding, not bit-for-bit
            let (dab, dba) = (d(&a, &b), d(&b, &a));
            assert!((dab - dba).abs() <= 1e-12 * dab.max(1.0), "{dab} vs {dba}");
            assert!(d(&a, &c) <= dab + d(&b, &c) + 1e-12);
        }
        let dab = bottleneck(&a, &b).unwrap();
        let dba = bottleneck(&b, &a).unwrap();
        assert_eq!(dab, dba);
        assert!(
            bottleneck(&a, &c).unwrap() <= dab + bottleneck(&b, &c).unwrap() + 1e-12
        );
    }
}

#[test]
fn interpolation_inequality() {
    // d_{p_theta}(mu, nu) <= 2^(1-theta) d_p^theta (Pers_q(mu)+Pers_q(nu))^(1-theta)
    // with 1/p_theta = theta/p + (1-theta)/q
    let mut stream = SeedSpec::new(44, 0).stream();
    for _ in 0..400 {
        let a = random_diagram(&mut stream, 5);
        let b = random_diagram(&mut stream, 5);
        if a.is_empty() && b.is_empty() {
            continue;
        }
        for &(p, q) in &[(1.0, 3.0), (1.5, 4.0), (2.0, 8.0)] {
            let theta = 0.25 + 0.5 * stream.uniform_open();
            let p_theta = 1.0 / (theta / p + (1.0 - theta) / q);
            let lhs = wasserstein_p(&a, &b, p_theta).unwrap().0;
            let dp = wasserstein_p(&a, &b, p).unwrap().0;
            let pq = pers_p_measure(&a, q).unwrap() + pers_p_measure(&b, q).unwrap();
            let rhs = (2.0f64).powf(1.0 - theta) * dp.powf(theta) * pq.powf(1.0 - theta);
            assert!(lhs <= rhs * (1.0 + 1e-9), "{lhs} > {rhs}");
        }
    }
}

#[test]
fn bottleneck_stability_under_perturbation() {
    // d_inf(Dgm(f), Dgm(g)) <= ||f - g||_inf
    let mut stream = SeedSpec::new(45, 0).stream();
    for _ in 0..1000 {
        let n = 8 + (stream.next_u64() % 40) as usize;
        let values: Vec<f64> = (0..n).map(|_| stream.uniform_open()).collect();
        let delta = 0.002 + 0.15 * stream.uniform_open();
        let perturbed: Vec<f64> = values
            .iter()
            .map(|v| v + delta * (2.0 * stream.uniform_open() - 1.0))
            .collect();
        let a = Diagram::from_barcode(&superlevel_barcode(&values).unwrap());
        let b = Diagram::from_barcode(&superlevel_barcode(&perturbed).unwrap());
        let d = bottleneck(&a, &b).unwrap();
        assert!(d <= delta * (1.0 + 1e-9), "{d} > {delta}");
    }
}

#[test]
fn zeta_of_measure_matches_barcode_pers() {
    let mut stream = SeedSpec::new(46, 0).stream();
    for _ in 0..200 {
        let n = 4 + (stream.next_u64() % 40) as usize;
        let values: Vec<f64> = (0..n).map(|_| stream.uniform_open()).collect();
        let bc = superlevel_barcode(&values).unwrap();
        let d = Diagram::from_barcode(&bc);
        for &p in &[1.0, 2.0, 3.7] {
            let zm = zeta_of_measure(&d, p).unwrap();
            let pp = pers_p(&bc, p, true).unwrap();
            assert!((zm - pp).abs() <= 1e-9 * pp.max(1e-12), "{zm} vs {pp}");
        }
    }
}

#[test]
fn wasserstein_and_zeta_converge_along_refinements() {
    // nested subsamplings of one Brownian path against a finer reference:
    // d_3 to the reference and the zeta gap both shrink as n grows
    let fine = pathzeta::sim::simulate_brownian(1.0, 1024, SeedSpec::new(47, 0)).unwrap();
    let subsample = |step: usize| -> Vec<f64> {
        fine.values().iter().copied().step_by(step).collect()
    };
    let ref_diag = Diagram::from_barcode(&superlevel_barcode(fine.values()).unwrap());
    let zeta_ref = zeta_of_measure(&ref_diag, 3.0).unwrap();
    let mut prev_d = f64::INFINITY;
    let mut prev_gap = f64::INFINITY;
    for &step in &[32usize, 8, 2] {
        let coarse = Diagram::from_barcode(&superlevel_barcode(&subsample(step)).unwrap());
        let (d, _) = wasserstein_p(&coarse, &ref_diag, 3.0).unwrap();
        let gap = (zeta_of_measure(&coarse, 3.0).unwrap() - zeta_ref).abs();
        assert!(d < prev_d, "d_3 not decreasing: {d} vs {prev_d}");
        assert!(gap < prev_gap, "zeta gap not decreasing: {gap} vs {prev_gap}");
        prev_d = d;
        prev_gap = gap;
    }
}
