mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use treecomp::operator::weight_uniformity;
use treecomp::space::{mu_norm, normalized_chi, point_eval, sup_norm, PointEvaluation};
use treecomp::{TreeFunction, TreeSpec, Truncation, VertexId};

const D: usize = 5;

fn window() -> Vec<VertexId> {
    Truncation::new(TreeSpec::binary(), D).enumerate().unwrap()
}

fn scalar() -> impl Strategy<Value = Complex64> {
    (-100.0f64..100.0, -100.0f64..100.0).prop_map(|(a, b)| Complex64::new(a, b))
}

/// A finitely supported function on the depth-`D` binary window.
fn finite_fn() -> impl Strategy<Value = TreeFunction> {
    prop::collection::vec((0usize..63, scalar()), 0..20).prop_map(|entries| {
        let w = window();
        TreeFunction::finite(entries.into_iter().map(|(i, z)| (w[i].clone(), z)))
    })
}

proptest! {
    #[test]
    fn point_evaluation_bound(f in finite_fn(), seed in any::<u64>()) {
        let mu = common::hashed_weight(seed);
        let t = Truncation::new(TreeSpec::binary(), D);
        let n = mu_norm(&f, &mu, &t).unwrap().value;
        for v in window() {
            prop_assert!(mu.eval(&v).unwrap() * f.eval(&v).unwrap().norm() <= n);
        }
    }

    #[test]
    fn equivalent_norms(f in finite_fn(), seed in any::<u64>()) {
        let mu = common::hashed_weight(seed);
        let t = Truncation::new(TreeSpec::binary(), D);
        let r = weight_uniformity(&mu, &t).unwrap();
        let (n, s) = (mu_norm(&f, &mu, &t).unwrap().value, sup_norm(&f, &t).unwrap().value);
        prop_assert!(r.min.value * s <= n);
        prop_assert!(n <= r.max.value * s);
    }

    #[test]
    fn point_evaluations_separate(a in 0usize..63, b in 0usize..63) {
        prop_assume!(a != b);
        let w = window();
        let chi = TreeFunction::chi(w[a].clone());
        let at_a = point_eval(&PointEvaluation::new(w[a].clone()), &chi).unwrap();
        let at_b = point_eval(&PointEvaluation::new(w[b].clone()), &chi).unwrap();
        prop_assert_ne!(at_a, at_b);
    }

    #[test]
    fn norm_is_homogeneous(f in finite_fn(), c in scalar(), seed in any::<u64>()) {
        let mu = common::hashed_weight(seed);
        let t = Truncation::new(TreeSpec::binary(), D);
        let n = mu_norm(&f, &mu, &t).unwrap().value;
        let nc = mu_norm(&f.scale(c), &mu, &t).unwrap().value;
        prop_assert!((nc - c.norm() * n).abs() <= 1e-12 * (1.0 + nc));
    }

    #[test]
    fn normalized_chis_vanish_pointwise(seed in any::<u64>(), steps in prop::collection::vec(1usize..3, 1..8)) {
        let mu = common::hashed_weight(seed);
        let tree = TreeSpec::binary();
        let mut len = 0;
        let mut ws = Vec::new();
        for (k, s) in steps.iter().enumerate() {
            len += s;
            let path = (0..len).map(|i| ((seed >> ((i + k) % 60)) & 1) as u32).collect();
            ws.push(VertexId::from_path(path));
        }
        let t = Truncation::new(tree, len);
        let fixed: Vec<VertexId> = t.at_depth(3).enumerate().unwrap();
        for w in &ws {
            let f = normalized_chi(w, &mu).unwrap();
            let n = mu_norm(&f, &mu, &t).unwrap().value;
            prop_assert!((n - 1.0).abs() <= 2.0 * f64::EPSILON, "norm {}", n);
            for v in &fixed {
                if w.len() > v.len() {
                    prop_assert_eq!(f.eval(v).unwrap(), Complex64::new(0.0, 0.0));
                }
            }
        }
    }
}
