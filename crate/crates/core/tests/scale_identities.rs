//! Desk-scale checks that are too heavy for unit tests: the uniform
//! |H - n| bound at two parameter points, and the commute-time sandwich
//! on a thousand-vertex realization.

use erwalk::{
    cheap_bound_check, eigen_b, exact_hitting, exact_hitting_all, generate_er, lovasz_bounds,
};

#[test]
fn cheap_bound_at_two_parameter_points() {
    for (n, p, seed) in [(500usize, 0.5, 31u64), (1000, 0.3, 32)] {
        let g = generate_er(n, p, seed).unwrap();
        assert!(g.is_connected(), "pick another seed for n={n}, p={p}");
        let all = exact_hitting_all(&g).unwrap();
        let cb = cheap_bound_check(&g, &all).unwrap();
        assert!(
            cb.normalized <= 3.0,
            "normalized deviation {} at n={n}, p={p}",
            cb.normalized
        );
        // raw deviation really is on the sqrt(n log n) scale, not o(1)
        assert!(cb.max_dev > 1.0);
    }
}

#[test]
fn commute_sandwich_at_scale() {
    let g = generate_er(1000, 0.5, 33).unwrap();
    assert!(g.is_connected());
    let lambda2 = eigen_b(&g).unwrap().eigenvalues()[1];
    let targets = [0usize, 250, 500, 750];
    let hitting: Vec<_> = targets.iter().map(|&v| exact_hitting(&g, v).unwrap()).collect();
    for i in 0..targets.len() {
        for j in (i + 1)..targets.len() {
            let (v, w) = (targets[i], targets[j]);
            let kappa = hitting[i].value(w) + hitting[j].value(v);
            let bounds = lovasz_bounds(&g, v, w, lambda2).unwrap();
            assert!(
                bounds.lower <= kappa + 1e-9 && kappa <= bounds.upper + 1e-9,
                "pair ({v}, {w}): {} <= {kappa} <= {} violated",
                bounds.lower,
                bounds.upper
            );
        }
    }
}
