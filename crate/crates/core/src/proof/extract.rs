use std::collections::BTreeSet;

use super::ProofError;
use crate::engine::{FactId, ProofDag};

/// The part of a DAG that the goal depends on, in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedDag {
    pub root: FactId,
    pub nodes: Vec<FactId>,
}

impl PrunedDag {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes that are not construction leaves.
    pub fn derived(&self, dag: &ProofDag) -> usize {
        self.nodes.iter().filter(|&&id| !dag.premises(id).is_empty()).count()
    }
}

/// Backward reachability from `root`; certificates expand to their rows'
/// source facts.
pub fn extract_proof(dag: &ProofDag, root: FactId) -> Result<PrunedDag, ProofError> {
    if dag.get(root).is_none() {
        return Err(ProofError::Dangling { node: root, premise: root });
    }
    let mut keep = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if !keep.insert(id) {
            continue;
        }
        for p in dag.premises(id) {
            if p >= id || dag.get(p).is_none() {
                return Err(ProofError::Dangling { node: id, premise: p });
            }
            stack.push(p);
        }
    }
    Ok(PrunedDag { root, nodes: keep.into_iter().collect() })
}
