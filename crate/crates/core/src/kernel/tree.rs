use serde::{Deserialize, Serialize};

use super::state::{HypOrigin, NodeId, Premise, ProofState, Solution, ROOT_GOAL};
use super::{check_tree, GoalId, Hypothesis, KernelError, Rule, RuleArg, Verdict};
use crate::definitions::DefinitionSet;
use crate::formula::Formula;

/// A finished derivation. Leaves use [`Rule::Assumption`] for given
/// hypotheses and [`Rule::Supposition`] for discharged ones; `label` names
/// the hypothesis at such leaves. `discharged` records each supposition a
/// node closes together with its formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivationTree {
    pub formula: Formula,
    pub rule: Rule,
    pub args: Vec<RuleArg>,
    pub label: Option<String>,
    pub discharged: Vec<Hypothesis>,
    pub children: Vec<DerivationTree>,
}

impl DerivationTree {
    pub fn leaf(formula: Formula, rule: Rule, label: impl Into<String>) -> Self {
        Self {
            formula,
            rule,
            args: Vec::new(),
            label: Some(label.into()),
            discharged: Vec::new(),
            children: Vec::new(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::depth).max().unwrap_or(0)
    }

    /// Nodes in pre-order, with paths (child indices from the root).
    pub fn preorder(&self) -> Vec<(Vec<usize>, &DerivationTree)> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a DerivationTree, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a DerivationTree)>) {
            out.push((path.clone(), t));
            for (i, c) in t.children.iter().enumerate() {
                path.push(i);
                go(c, path, out);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn at(&self, path: &[usize]) -> Option<&DerivationTree> {
        path.iter().try_fold(self, |t, &i| t.children.get(i))
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut DerivationTree> {
        path.iter().try_fold(self, |t, &i| t.children.get_mut(i))
    }

    /// Rules used, in pre-order.
    pub fn rules(&self) -> Vec<Rule> {
        self.preorder().into_iter().map(|(_, t)| t.rule).collect()
    }
}

impl ProofState {
    /// Unravels the derivation into a tree. Shared sub-derivations are copied.
    pub fn extract_tree(&self) -> Result<DerivationTree, KernelError> {
        if !self.open.is_empty() {
            return Err(KernelError::ProofIncomplete(self.open.clone()));
        }
        self.tree_of_goal(ROOT_GOAL)
    }

    /// Extracts the tree and runs the independent checker on it.
    pub fn checked_tree(&self, defs: &DefinitionSet) -> Result<DerivationTree, KernelError> {
        let tree = self.extract_tree()?;
        match check_tree(&tree, &self.exercise, defs) {
            Verdict::Ok => Ok(tree),
            Verdict::FirstViolation { path, reason } => Err(KernelError::CheckerRejected {
                path: format!("{path:?}"),
                reason,
            }),
        }
    }

    fn tree_of_goal(&self, mut goal: GoalId) -> Result<DerivationTree, KernelError> {
        loop {
            let record = self.goals.get(&goal).ok_or(KernelError::NoSuchGoal(goal))?;
            match &record.solution {
                Some(Solution::Goal(next)) => goal = *next,
                Some(Solution::Node(n)) => return self.tree_of_node(*n),
                Some(Solution::Hyp(l)) => return self.tree_of_hyp(l),
                None => return Err(KernelError::ProofIncomplete(vec![goal])),
            }
        }
    }

    fn tree_of_hyp(&self, label: &str) -> Result<DerivationTree, KernelError> {
        let h = self
            .hyps
            .get(label)
            .ok_or_else(|| KernelError::NoSuchHypothesis(label.to_string()))?;
        match &h.origin {
            HypOrigin::Given => Ok(DerivationTree::leaf(h.formula.clone(), Rule::Assumption, label)),
            HypOrigin::Supposition => Ok(DerivationTree::leaf(h.formula.clone(), Rule::Supposition, label)),
            HypOrigin::Derived(n) => self.tree_of_node(*n),
        }
    }

    fn tree_of_node(&self, id: NodeId) -> Result<DerivationTree, KernelError> {
        let node = &self.nodes[id as usize];
        let children = node
            .premises
            .iter()
            .map(|p| match p {
                Premise::Goal(g) => self.tree_of_goal(*g),
                Premise::Hyp(l) => self.tree_of_hyp(l),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DerivationTree {
            formula: node.formula.clone(),
            rule: node.rule,
            args: node.args.clone(),
            label: None,
            discharged: node.discharged.clone(),
            children,
        })
    }
}
