use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Hypothesis, KernelError, Rule, RuleArg, Sequent};
use crate::formula::{alpha_equal, free_symbols, substitute, term_free_symbols, Formula, Param, Signature, Target, Term};

pub type GoalId = u32;
pub type NodeId = u32;

/// Where a premise of a node comes from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Premise {
    Goal(GoalId),
    Hyp(String),
}

/// A recorded inference.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub formula: Formula,
    pub rule: Rule,
    pub args: Vec<RuleArg>,
    pub premises: Vec<Premise>,
    pub discharged: Vec<Hypothesis>,
}

/// How a closed goal was established.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Solution {
    Node(NodeId),
    /// Solved by a successor goal (after a forward step).
    Goal(GoalId),
    /// Closed against a hypothesis.
    Hyp(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HypOrigin {
    Given,
    Supposition,
    Derived(NodeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HypRecord {
    pub formula: Formula,
    pub origin: HypOrigin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(super) struct GoalRecord {
    pub hyps: Vec<String>,
    pub conclusion: Formula,
    pub parent: Option<GoalId>,
    pub params: BTreeSet<Param>,
    pub solution: Option<Solution>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(super) struct UnknownRecord {
    /// Parameters a value may mention.
    pub allowed: BTreeSet<Param>,
    pub value: Option<Term>,
}

/// A read-only view of one goal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalView {
    pub id: GoalId,
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Formula,
    pub introduced_parameters: BTreeSet<Param>,
    pub pending_unknowns: BTreeSet<u32>,
}

impl GoalView {
    pub fn sequent(&self) -> Sequent {
        Sequent::new(self.hypotheses.clone(), self.conclusion.clone())
    }
}

/// A partial derivation with its open goals. Cloning is cheap enough to keep
/// every intermediate state as an undo frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofState {
    pub(super) signature: Arc<Signature>,
    pub(super) exercise: Sequent,
    pub(super) goals: BTreeMap<GoalId, GoalRecord>,
    pub(super) open: Vec<GoalId>,
    pub(super) nodes: Vec<Node>,
    pub(super) hyps: BTreeMap<String, HypRecord>,
    pub(super) params: BTreeSet<Param>,
    pub(super) unknowns: BTreeMap<u32, UnknownRecord>,
    pub(super) next_goal: GoalId,
    pub(super) next_label: u32,
    pub(super) next_unknown: u32,
}

pub const ROOT_GOAL: GoalId = 1;

impl ProofState {
    pub fn init(signature: Arc<Signature>, exercise: Sequent) -> Result<Self, KernelError> {
        exercise.validate(&signature)?;
        let mut hyps = BTreeMap::new();
        for h in &exercise.hypotheses {
            hyps.insert(
                h.label.clone(),
                HypRecord {
                    formula: h.formula.clone(),
                    origin: HypOrigin::Given,
                },
            );
        }
        let root = GoalRecord {
            hyps: exercise.hypotheses.iter().map(|h| h.label.clone()).collect(),
            conclusion: exercise.conclusion.clone(),
            parent: None,
            params: BTreeSet::new(),
            solution: None,
        };
        Ok(ProofState {
            signature,
            exercise,
            goals: BTreeMap::from([(ROOT_GOAL, root)]),
            open: vec![ROOT_GOAL],
            nodes: Vec::new(),
            hyps,
            params: BTreeSet::new(),
            unknowns: BTreeMap::new(),
            next_goal: ROOT_GOAL + 1,
            next_label: 1,
            next_unknown: 1,
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn exercise(&self) -> &Sequent {
        &self.exercise
    }

    pub fn open_goals(&self) -> &[GoalId] {
        &self.open
    }

    pub fn is_complete(&self) -> bool {
        self.open.is_empty()
    }

    /// SHA-256 (hex) of the canonical JSON serialization. Equal states hash
    /// equally; the serialization has no hash-ordered maps.
    pub fn structural_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_vec(self).expect("proof states serialize");
        hex::encode(Sha256::digest(&json))
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn hypothesis(&self, label: &str) -> Option<&HypRecord> {
        self.hyps.get(label)
    }

    pub fn introduced_parameters(&self) -> &BTreeSet<Param> {
        &self.params
    }

    /// Every goal ever created, open or closed.
    pub fn goal_ids(&self) -> impl Iterator<Item = GoalId> + '_ {
        self.goals.keys().copied()
    }

    pub fn is_open(&self, id: GoalId) -> bool {
        self.open.contains(&id)
    }

    pub fn goal_solution(&self, id: GoalId) -> Option<&Solution> {
        self.goals.get(&id)?.solution.as_ref()
    }

    pub fn goal_parent(&self, id: GoalId) -> Option<GoalId> {
        self.goals.get(&id)?.parent
    }

    /// View of any goal, open or closed.
    pub fn goal(&self, id: GoalId) -> Result<GoalView, KernelError> {
        let g = self.goals.get(&id).ok_or(KernelError::NoSuchGoal(id))?;
        let hypotheses: Vec<Hypothesis> = g
            .hyps
            .iter()
            .map(|l| Hypothesis {
                label: l.clone(),
                formula: self.hyps[l].formula.clone(),
            })
            .collect();
        let mut pending = BTreeSet::new();
        for f in hypotheses.iter().map(|h| &h.formula).chain(std::iter::once(&g.conclusion)) {
            pending.extend(free_symbols(f).unknowns);
        }
        Ok(GoalView {
            id,
            hypotheses,
            conclusion: g.conclusion.clone(),
            introduced_parameters: g.params.clone(),
            pending_unknowns: pending,
        })
    }

    pub fn open_goal_views(&self) -> Vec<GoalView> {
        self.open.iter().filter_map(|&g| self.goal(g).ok()).collect()
    }

    pub(super) fn open_goal(&self, id: GoalId) -> Result<&GoalRecord, KernelError> {
        if !self.open.contains(&id) {
            return Err(KernelError::NoSuchGoal(id));
        }
        self.goals.get(&id).ok_or(KernelError::NoSuchGoal(id))
    }

    /// Open goals descending from (or equal to) `root`, in id order.
    pub fn open_goals_under(&self, root: GoalId) -> Vec<GoalId> {
        let mut out: Vec<GoalId> = self
            .open
            .iter()
            .copied()
            .filter(|&g| {
                let mut cur = Some(g);
                while let Some(c) = cur {
                    if c == root {
                        return true;
                    }
                    cur = self.goals.get(&c).and_then(|r| r.parent);
                }
                false
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn pending_unknowns(&self) -> BTreeSet<u32> {
        self.unknowns
            .iter()
            .filter(|(_, u)| u.value.is_none())
            .map(|(n, _)| *n)
            .collect()
    }

    pub(super) fn goal_formula_of(&self, label: &str) -> &Formula {
        &self.hyps[label].formula
    }

    /// Label of the first hypothesis of the goal alpha-equal to `f`.
    pub(super) fn find_hyp(&self, g: &GoalRecord, f: &Formula) -> Option<String> {
        g.hyps.iter().find(|l| alpha_equal(&self.hyps[*l].formula, f)).cloned()
    }

    pub(super) fn goal_has_unknowns(&self, g: &GoalRecord) -> bool {
        !free_symbols(&g.conclusion).unknowns.is_empty()
            || g.hyps.iter().any(|l| !free_symbols(&self.hyps[l].formula).unknowns.is_empty())
    }

    // Mutation helpers. Callers validate before the first call.

    pub(super) fn fresh_label(&mut self) -> String {
        loop {
            let l = format!("h{}", self.next_label);
            self.next_label += 1;
            if !self.hyps.contains_key(&l) {
                return l;
            }
        }
    }

    pub(super) fn add_supposition(&mut self, formula: Formula) -> String {
        let l = self.fresh_label();
        self.hyps.insert(
            l.clone(),
            HypRecord {
                formula,
                origin: HypOrigin::Supposition,
            },
        );
        l
    }

    pub(super) fn add_node(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        (self.nodes.len() - 1) as NodeId
    }

    pub(super) fn add_derived(&mut self, node: Node) -> String {
        let formula = node.formula.clone();
        let id = self.add_node(node);
        let l = self.fresh_label();
        self.hyps.insert(
            l.clone(),
            HypRecord {
                formula,
                origin: HypOrigin::Derived(id),
            },
        );
        l
    }

    pub(super) fn spawn(
        &mut self,
        parent: GoalId,
        hyps: Vec<String>,
        conclusion: Formula,
        params: BTreeSet<Param>,
    ) -> GoalId {
        let id = self.next_goal;
        self.next_goal += 1;
        self.goals.insert(
            id,
            GoalRecord {
                hyps,
                conclusion,
                parent: Some(parent),
                params,
                solution: None,
            },
        );
        id
    }

    /// Marks `goal` solved and puts `children` in its place among the open goals.
    pub(super) fn solve(&mut self, goal: GoalId, solution: Solution, children: &[GoalId]) {
        if let Some(g) = self.goals.get_mut(&goal) {
            g.solution = Some(solution);
        }
        if let Some(pos) = self.open.iter().position(|&g| g == goal) {
            self.open.splice(pos..=pos, children.iter().copied());
        }
    }

    pub(super) fn new_unknown(&mut self, allowed: BTreeSet<Param>) -> u32 {
        let n = self.next_unknown;
        self.next_unknown += 1;
        self.unknowns.insert(n, UnknownRecord { allowed, value: None });
        n
    }

    /// The unused parameter with the smallest ordinal for a binder name.
    pub(super) fn fresh_param(&self, binder: &str) -> Param {
        let base: String = binder.chars().filter(|c| c.is_ascii_alphabetic()).collect();
        let base = if base.is_empty() { "a".to_string() } else { base };
        let mut ordinal = 1;
        loop {
            let p = Param::new(base.clone(), ordinal);
            if !self.params.contains(&p) && self.signature.kind(&p.to_string()).is_none() {
                return p;
            }
            ordinal += 1;
        }
    }

    /// Resolves `?n := t` everywhere in the state.
    pub fn instantiate(&self, n: u32, t: &Term) -> Result<ProofState, KernelError> {
        let mut s = self.clone();
        s.instantiate_mut(n, t)?;
        Ok(s)
    }

    pub(crate) fn instantiate_mut(&mut self, n: u32, t: &Term) -> Result<(), KernelError> {
        let record = match self.unknowns.get(&n) {
            Some(u) if u.value.is_none() => u,
            _ => return Err(KernelError::NoSuchUnknown(n)),
        };
        if t.contains_unknown(n) {
            return Err(KernelError::OccursCheck(n));
        }
        if !t.is_closed() {
            return Err(KernelError::Formula(format!("`{t}` has free variables")));
        }
        self.signature.check_term(t)?;
        let fs = term_free_symbols(t);
        if let Some(p) = fs.parameters.iter().find(|p| !record.allowed.contains(p)) {
            return Err(KernelError::ParameterOutOfScope(p.clone()));
        }
        if let Some(m) = fs.unknowns.iter().find(|m| !matches!(self.unknowns.get(m), Some(u) if u.value.is_none())) {
            return Err(KernelError::NoSuchUnknown(*m));
        }
        // A value may only mention parameters every user of `?n` can see; the
        // other unknowns inherit the restriction.
        let allowed = record.allowed.clone();
        for m in &fs.unknowns {
            if let Some(u) = self.unknowns.get_mut(m) {
                u.allowed = u.allowed.intersection(&allowed).cloned().collect();
            }
        }
        let target = Target::Unknown(n);
        let sub = |f: &Formula| substitute(f, &target, t);
        for g in self.goals.values_mut() {
            g.conclusion = sub(&g.conclusion);
        }
        for h in self.hyps.values_mut() {
            h.formula = sub(&h.formula);
        }
        for node in &mut self.nodes {
            node.formula = sub(&node.formula);
            for a in &mut node.args {
                match a {
                    RuleArg::Term(x) => *x = crate::formula::substitute_term(x, &target, t),
                    RuleArg::Formula(f) => *f = sub(f),
                    _ => {}
                }
            }
        }
        if let Some(u) = self.unknowns.get_mut(&n) {
            u.value = Some(t.clone());
        }
        Ok(())
    }
}
