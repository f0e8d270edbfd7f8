use packlab::coxeter::weights;
use packlab::euclid::{curvature, default_reference, make_frame, realize};
use packlab::packing::{orbit, packing_check, tangency_clusters, Budget};
use packlab::{bundled, CoxeterGraph, EuclideanSphere, Frame, LatticeVector, LorentzSpace, Shape};
use proptest::prelude::*;

struct Reye {
    space: LorentzSpace,
    gens: Vec<LatticeVector>,
    nu: LatticeVector,
    e: LatticeVector,
    frame: Frame,
}

fn reye() -> Reye {
    let g = CoxeterGraph::parse(bundled::graph("c2").unwrap()).unwrap();
    let space = g.gram().unwrap();
    let nu = g.vector_of(&space, g.node_index("nu").unwrap()).unwrap();
    let e = weights(&space).unwrap().weights[8].clone();
    let f0 = default_reference(&space, &e).unwrap();
    let frame = make_frame(&space, &e, &f0, None).unwrap();
    Reye {
        gens: g.generators(),
        space,
        nu,
        e,
        frame,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Signed gap between two realized spheres: zero when tangent, positive
/// when separated. Negative curvature means the sphere encloses the rest.
fn gap(a: &EuclideanSphere, b: &EuclideanSphere) -> f64 {
    match (&a.shape, &b.shape) {
        (Shape::Sphere { center: c1, radius: r1 }, Shape::Sphere { center: c2, radius: r2 }) => {
            let d = dist(c1, c2);
            match (a.curvature_f64 < 0.0, b.curvature_f64 < 0.0) {
                (false, false) => d - r1 - r2,
                (true, false) => r1 - d - r2,
                (false, true) => r2 - d - r1,
                (true, true) => f64::NAN,
            }
        }
        (Shape::Sphere { center, radius }, Shape::Hyperplane { normal, offset })
        | (Shape::Hyperplane { normal, offset }, Shape::Sphere { center, radius }) => {
            let s: f64 = normal.iter().zip(center).map(|(n, c)| n * c).sum::<f64>() - offset;
            s.abs() - radius
        }
        (Shape::Hyperplane { normal: n1, .. }, Shape::Hyperplane { normal: n2, .. }) => {
            // parallel planes meet at infinity only
            let cos: f64 = n1.iter().zip(n2).map(|(x, y)| x * y).sum();
            if (cos.abs() - 1.0).abs() < 1e-9 {
                0.0
            } else {
                -1.0
            }
        }
    }
}

#[test]
fn tangency_transfers_to_the_chart() {
    let r = reye();
    let o = orbit(&r.space, &r.gens, std::slice::from_ref(&r.nu), Budget::depth(9)).unwrap();
    let vs = o.vectors();
    let spheres: Vec<EuclideanSphere> = vs.iter().map(|v| realize(&r.space, v, &r.frame).unwrap()).collect();
    let k = packing_check(&r.space, &vs).unwrap().k;
    let mut tangent = 0;
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let p = r.space.product(&vs[i], &vs[j]);
            let g = gap(&spheres[i], &spheres[j]);
            let scale = 1.0 + spheres[i].curvature_f64.abs().recip().min(1e6);
            if p == k {
                tangent += 1;
                assert!(g.abs() < 1e-7 * scale, "pair {i} {j} tangent in the lattice, gap {g}");
            } else {
                assert!(g > -1e-7 * scale, "pair {i} {j} overlaps, gap {g}");
            }
        }
    }
    assert!(tangent > vs.len());
}

#[test]
fn float_curvature_matches_exact_pair() {
    let r = reye();
    let o = orbit(&r.space, &r.gens, std::slice::from_ref(&r.nu), Budget::depth(12)).unwrap();
    for v in o.vectors() {
        let s = realize(&r.space, &v, &r.frame).unwrap();
        let c = &s.curvature;
        let exact = c.squared().to_f64();
        let float = s.curvature_f64 * s.curvature_f64;
        assert!((float - exact).abs() <= 1e-9 * exact.max(1.0));
        if let Shape::Sphere { radius, .. } = s.shape {
            assert!((radius * s.curvature_f64.abs() - 1.0).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mirrors_through_infinity_keep_curvature(word in proptest::collection::vec(0usize..10, 0..12)) {
        let r = reye();
        let x = word.iter().fold(r.nu.clone(), |x, &g| r.space.reflect(&r.gens[g], &x).unwrap());
        let c = curvature(&r.space, &x, &r.e).unwrap();
        for g in r.gens.iter().filter(|g| r.space.product(g, &r.e).is_zero()) {
            let y = r.space.reflect(g, &x).unwrap();
            prop_assert!(curvature(&r.space, &y, &r.e).unwrap().same_as(&c));
        }
    }
}

#[test]
fn every_early_sphere_lies_in_a_ten_clique() {
    let r = reye();
    let o = orbit(&r.space, &r.gens, std::slice::from_ref(&r.nu), Budget::depth(14)).unwrap();
    let vs = o.vectors();
    // elements of depth at most 4 have their whole neighbourhood in the truncation
    let sample: Vec<usize> = o
        .elements()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.depth <= 4)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(sample.len(), 5);
    for c in tangency_clusters(&r.space, &vs, 10, &sample).unwrap() {
        let clique = c
            .clique
            .unwrap_or_else(|| panic!("no 10-clique around element {}", c.element));
        assert_eq!(clique.len(), 10);
        for (a, &i) in clique.iter().enumerate() {
            for &j in &clique[a + 1..] {
                assert_eq!(r.space.product(&vs[i], &vs[j]), packlab::ExactScalar::from_integer(2));
            }
        }
    }
}

#[test]
fn depth_limited_orbit_is_prefix_of_deeper_one() {
    let r = reye();
    let small = orbit(&r.space, &r.gens, std::slice::from_ref(&r.nu), Budget::depth(8)).unwrap();
    let big = orbit(&r.space, &r.gens, std::slice::from_ref(&r.nu), Budget::depth(12)).unwrap();
    assert_eq!(&big.elements()[..small.len()], small.elements());
    assert!(big.verify_words(&r.space).unwrap());
}

#[test]
fn element_budget_truncates() {
    let r = reye();
    let o = orbit(
        &r.space,
        &r.gens,
        std::slice::from_ref(&r.nu),
        Budget {
            max_depth: 100,
            max_elements: 50,
        },
    )
    .unwrap();
    assert_eq!(o.len(), 50);
    assert!(o.truncated);
}
