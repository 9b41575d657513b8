//! Trees, weights and maps built from spec text.

use std::sync::Arc;

use crate::dsl::{
    eval_branching, eval_map, eval_map_within, eval_value, eval_weight, parse_spec, Num, Scope,
    SpecSource, Value,
};
use crate::error::{Error, Result};
use crate::operator::SelfMap;
use crate::space::Weight;
use crate::tree::{TreeSpec, VertexId, DEFAULT_VERTEX_BUDGET};

/// A parsed spec turned into evaluable objects.
#[derive(Debug, Clone)]
pub struct Model {
    pub source: SpecSource,
    pub tree: TreeSpec,
    pub mu: Weight,
    pub phi: SelfMap,
    pub budget: usize,
}

impl Model {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_source(parse_spec(text)?, DEFAULT_VERTEX_BUDGET)
    }

    pub fn parse_with_budget(text: &str, budget: usize) -> Result<Self> {
        Self::from_source(parse_spec(text)?, budget)
    }

    pub fn from_source(source: SpecSource, budget: usize) -> Result<Self> {
        let tree = if source.tree.is_constant() {
            TreeSpec::constant(eval_branching(&source.tree, &[])?)?
        } else {
            let ast = Arc::new(source.tree.clone());
            TreeSpec::try_from_fn(move |path| eval_branching(&ast, path))
        };

        let mu = if source.mu.is_constant() {
            let root = VertexId::root();
            Weight::constant(eval_weight(&source.mu, &root, Scope::new(&tree, budget))?)?
        } else {
            let (ast, t) = (Arc::new(source.mu.clone()), tree.clone());
            Weight::try_from_fn(move |v| eval_weight(&ast, v, Scope::new(&t, budget)))
        };

        let phi = if source.phi.is_constant() {
            let target =
                match eval_value(&source.phi, &VertexId::root(), Scope::new(&tree, budget))? {
                    Value::Vertex(w) => w,
                    Value::Num(n) => {
                        return Err(Error::Config(format!(
                            "map evaluated to the number {}",
                            Num::to_f64(n)
                        )));
                    }
                };
            SelfMap::constant(tree.clone(), target)?
        } else {
            let (ast, t) = (Arc::new(source.phi.clone()), tree.clone());
            let (ast2, t2) = (ast.clone(), tree.clone());
            SelfMap::prevalidated(tree.clone(), move |v| eval_map(&ast, v, &t, budget))
                .with_bounded_eval(move |v, cap| eval_map_within(&ast2, v, &t2, budget, cap))
        };

        Ok(Model {
            source,
            tree,
            mu,
            phi,
            budget,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_constant_pieces() {
        let m = Model::parse("tree: 2\nmu: 1\nphi: root").unwrap();
        assert_eq!(m.tree.constant_branching(), Some(2));
        assert_eq!(m.mu.constant_value(), Some(1.0));
        assert!(m.phi.has_finite_range());
    }

    #[test]
    fn builds_vertex_dependent_pieces() {
        let m = Model::parse("tree: if len == 0 then 2 else 1\nmu: 2^len\nphi: parent(v)").unwrap();
        assert_eq!(m.tree.branching_at(&[]).unwrap(), 2);
        assert_eq!(m.tree.branching_at(&[1, 0]).unwrap(), 1);
        assert_eq!(m.mu.eval(&"1.0".parse().unwrap()).unwrap(), 4.0);
        assert_eq!(
            m.phi.eval(&"1.0".parse().unwrap()).unwrap(),
            "1".parse().unwrap()
        );
        assert!(m.tree.validate(&"0.1".parse().unwrap()).is_err());
        assert!(!m.phi.has_finite_range());
    }

    #[test]
    fn rejects_bad_constants() {
        assert!(matches!(
            Model::parse("tree: 0\nmu: 1\nphi: v"),
            Err(Error::InvalidBranching { .. })
        ));
        assert!(matches!(
            Model::parse("tree: 2\nmu: 0 - 1\nphi: v"),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            Model::parse("tree: 2\nmu: 1\nphi: \"5\""),
            Err(Error::Address { .. })
        ));
    }
}
