//! Seeded conjecture generation.
//!
//! Formulas are sampled by weighted recursive descent from a ChaCha8 stream
//! seeded with the configured seed. At each node below the depth limit a leaf
//! is chosen with probability [`LEAF_PROBABILITY`]; otherwise a connective is
//! drawn by weight. At depth zero a leaf is forced. Leaves are atoms drawn
//! uniformly from the first `num_symbols` of `p q r s t u v w`. A binary node
//! whose operands come out identical redraws the right operand, up to
//! [`OPERAND_REDRAWS`] times, and falls back to negating the left one.
//!
//! Each attempt samples `num_hypotheses` hypotheses and a conclusion, then
//! classifies the sequent. Attempts continue on the same stream until the class
//! suits the mode or `max_attempts` is reached.
//!
//! Difficulty is the number of connectives in the sequent, plus twice the
//! number of distinct atoms, plus 3 when level-1 automation cannot close it.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exercise::{ExerciseSpec, HiddenStatus, Mode, Provenance};
use crate::formula::{Formula, Signature};
use crate::kernel::{ProofState, Sequent};
use crate::oracle::{self, OracleError};
use crate::refute::{Model, MAX_DOMAIN};
use crate::tactic::{auto, AutomationPolicy, DEFAULT_AUTO_BUDGET};

pub const LEAF_PROBABILITY: f64 = 0.35;
pub const OPERAND_REDRAWS: usize = 16;
pub const ATOMS: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];
/// Largest domain tried when looking for a first-order countermodel.
pub const CLASSIFY_MAX_DOMAIN: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConnectiveWeights {
    pub and: u32,
    pub or: u32,
    pub implies: u32,
    pub iff: u32,
    pub not: u32,
}

impl Default for ConnectiveWeights {
    fn default() -> Self {
        ConnectiveWeights {
            and: 3,
            or: 3,
            implies: 4,
            iff: 1,
            not: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub num_symbols: usize,
    pub max_depth: usize,
    #[serde(default)]
    pub connective_weights: ConnectiveWeights,
    pub num_hypotheses: usize,
    pub mode: Mode,
    pub max_attempts: usize,
    /// Automation allowed on the generated exercise.
    #[serde(default)]
    pub automation_cap: AutomationPolicy,
}

impl GeneratorConfig {
    pub fn new(seed: u64, mode: Mode) -> Self {
        GeneratorConfig {
            seed,
            num_symbols: 3,
            max_depth: 3,
            connective_weights: ConnectiveWeights::default(),
            num_hypotheses: 1,
            mode,
            max_attempts: 200,
            automation_cap: AutomationPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        let bad = |m: &str| Err(GenerateError::InvalidConfig(m.to_string()));
        let w = &self.connective_weights;
        if !(1..=ATOMS.len()).contains(&self.num_symbols) {
            return bad("num_symbols must be between 1 and 8");
        }
        if !(1..=6).contains(&self.max_depth) {
            return bad("max_depth must be between 1 and 6");
        }
        if self.num_hypotheses > 4 {
            return bad("num_hypotheses must be at most 4");
        }
        if [w.and, w.or, w.implies, w.iff, w.not].iter().all(|&x| x == 0) {
            return bad("at least one connective weight must be positive");
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be positive");
        }
        self.automation_cap.validate().map_err(GenerateError::InvalidConfig)
    }

    /// Hex SHA-256 of the config's JSON encoding (seed included).
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("no suitable conjecture after {0} attempts")]
    GenerationExhausted(usize),
}

impl GenerateError {
    pub fn kind(&self) -> &'static str {
        match self {
            GenerateError::InvalidConfig(_) => "InvalidConfig",
            GenerateError::GenerationExhausted(_) => "GenerationExhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Provable,
    Refutable(Model),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("neither a proof nor a countermodel was found")]
    Undecided,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Decides a sequent. Propositional sequents go to the oracle. First-order
/// sequents are provable when level-1 automation closes them and refutable
/// when a structure of at most [`CLASSIFY_MAX_DOMAIN`] elements refutes them.
pub fn classify(s: &Sequent, sig: &Signature) -> Result<Classification, ClassifyError> {
    if s.is_propositional() {
        return Ok(match oracle::find_countermodel(s)? {
            None => Classification::Provable,
            Some(v) => Classification::Refutable(Model::Valuation(v)),
        });
    }
    if closed_by_level1(s, sig) {
        return Ok(Classification::Provable);
    }
    match oracle::fo_countermodel_search(s, CLASSIFY_MAX_DOMAIN.min(MAX_DOMAIN)) {
        Ok(Some(m)) => Ok(Classification::Refutable(Model::Structure(m))),
        Ok(None) | Err(OracleError::SignatureTooLarge { .. }) => Err(ClassifyError::Undecided),
        Err(e) => Err(e.into()),
    }
}

fn closed_by_level1(s: &Sequent, sig: &Signature) -> bool {
    let Ok(state) = ProofState::init(std::sync::Arc::new(sig.clone()), s.clone()) else {
        return false;
    };
    let root = state.open_goals()[0];
    matches!(auto(&state, root, 1, DEFAULT_AUTO_BUDGET), Ok((st, _)) if st.is_complete())
}

/// The documented difficulty score.
pub fn difficulty(s: &Sequent, sig: &Signature) -> u32 {
    let connectives: usize = s.formulas().map(Formula::connective_count).sum();
    let atoms: BTreeSet<String> = s.atoms().into_iter().collect();
    let penalty = if closed_by_level1(s, sig) { 0 } else { 3 };
    (connectives + 2 * atoms.len() + penalty) as u32
}

struct Sampler<'a> {
    rng: ChaCha8Rng,
    config: &'a GeneratorConfig,
    connectives: WeightedIndex<u32>,
}

impl Sampler<'_> {
    fn atom(&mut self) -> Formula {
        let i = self.rng.gen_range(0..self.config.num_symbols);
        Formula::atom(ATOMS[i])
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(LEAF_PROBABILITY) {
            return self.atom();
        }
        let k = self.connectives.sample(&mut self.rng);
        if k == 4 {
            return Formula::not(self.formula(depth - 1));
        }
        let a = self.formula(depth - 1);
        let mut b = self.formula(depth - 1);
        let mut redraws = 0;
        while b == a {
            if redraws == OPERAND_REDRAWS {
                b = Formula::not(a.clone());
                break;
            }
            b = self.formula(depth - 1);
            redraws += 1;
        }
        match k {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            2 => Formula::implies(a, b),
            _ => Formula::iff(a, b),
        }
    }
}

/// Generates one exercise; the result depends only on the config.
pub fn generate(config: &GeneratorConfig) -> Result<ExerciseSpec, GenerateError> {
    config.validate()?;
    let w = &config.connective_weights;
    let mut sampler = Sampler {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        config,
        connectives: WeightedIndex::new([w.and, w.or, w.implies, w.iff, w.not]).expect("validated weights"),
    };
    let sig = Signature::propositional(ATOMS[..config.num_symbols].iter().copied());
    for _ in 0..config.max_attempts {
        let hyps: Vec<Formula> = (0..config.num_hypotheses).map(|_| sampler.formula(config.max_depth)).collect();
        let conclusion = sampler.formula(config.max_depth);
        let sequent = Sequent::from_formulas(hyps, conclusion);
        let class = match classify(&sequent, &sig) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let (hidden_status, certificate) = match (config.mode, class) {
            (Mode::Prove, Classification::Provable) => (None, None),
            (Mode::Refute, Classification::Refutable(m)) => (None, Some(m)),
            (Mode::Mystery, Classification::Provable) => (Some(HiddenStatus::Provable), None),
            (Mode::Mystery, Classification::Refutable(m)) => (Some(HiddenStatus::Refutable), Some(m)),
            _ => continue,
        };
        let digest = config.digest();
        return Ok(ExerciseSpec {
            id: format!("gen-{}", &digest[..12]),
            difficulty: difficulty(&sequent, &sig),
            signature: std::sync::Arc::new(sig),
            sequent,
            mode: config.mode,
            hidden_status,
            certificate,
            definitions: Default::default(),
            automation_cap: config.automation_cap,
            provenance: Provenance::Generated {
                seed: config.seed,
                config_digest: digest,
            },
        });
    }
    Err(GenerateError::GenerationExhausted(config.max_attempts))
}

/// `count` exercises from consecutive seeds starting at `config.seed`.
pub fn generate_batch(config: &GeneratorConfig, count: usize) -> Result<Vec<ExerciseSpec>, GenerateError> {
    (0..count as u64)
        .map(|i| {
            let mut c = config.clone();
            c.seed = config.seed.wrapping_add(i);
            generate(&c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exercise::View;
    use crate::formula::parse_formula;
    use crate::refute::check_refutation;

    fn seq(sig: &Signature, hyps: &[&str], goal: &str) -> Sequent {
        Sequent::from_formulas(
            hyps.iter().map(|h| parse_formula(h, sig).unwrap()).collect(),
            parse_formula(goal, sig).unwrap(),
        )
    }

    #[test]
    fn classify_examples() {
        let sig = Signature::propositional(["p", "q"]);
        assert_eq!(classify(&seq(&sig, &["p"], "p"), &sig), Ok(Classification::Provable));
        let Ok(Classification::Refutable(Model::Valuation(v))) = classify(&seq(&sig, &["p"], "q"), &sig) else {
            panic!()
        };
        assert_eq!((v.get("p"), v.get("q")), (Some(true), Some(false)));
        assert_eq!(classify(&seq(&sig, &[], "((p -> q) -> p) -> p"), &sig), Ok(Classification::Provable));
    }

    #[test]
    fn classify_first_order() {
        let sig = Signature::new().with_predicate("P", 1).unwrap().with_predicate("Q", 2).unwrap();
        let s = seq(&sig, &["(forall x) P(x) /\\ (exists y) Q(y, y)"], "(exists z) Q(z, z)");
        assert_eq!(classify(&s, &sig), Ok(Classification::Provable));
        // Valid, but beyond level-1 automation and without small countermodels.
        let s = seq(&sig, &["(forall x) (forall y) Q(x, y)"], "(forall y) (forall x) Q(x, y)");
        assert_eq!(classify(&s, &sig), Err(ClassifyError::Undecided));
        let s = seq(&sig, &["(exists x) P(x)"], "(forall x) P(x)");
        assert!(matches!(classify(&s, &sig), Ok(Classification::Refutable(Model::Structure(_)))));
        let s = seq(&sig, &["(forall x) P(x)"], "(exists x) P(x)");
        assert_eq!(classify(&s, &sig), Err(ClassifyError::Undecided));
    }

    #[test]
    fn deterministic_in_the_seed() {
        for mode in [Mode::Prove, Mode::Refute, Mode::Mystery] {
            let c = GeneratorConfig::new(7, mode);
            let a = generate(&c).unwrap().to_json_string(View::Instructor);
            let b = generate(&c).unwrap().to_json_string(View::Instructor);
            assert_eq!(a, b);
        }
        let a = generate(&GeneratorConfig::new(1, Mode::Prove)).unwrap();
        let b = generate(&GeneratorConfig::new(2, Mode::Prove)).unwrap();
        assert_ne!(a.id, b.id);
    }

    #[test]
    fn labels_are_sound() {
        let mut c = GeneratorConfig::new(100, Mode::Refute);
        for e in generate_batch(&c, 40).unwrap() {
            let m = e.certificate.as_ref().unwrap();
            assert!(check_refutation(&e.sequent, m).unwrap().refutes());
        }
        c.mode = Mode::Prove;
        for e in generate_batch(&c, 40).unwrap() {
            assert!(oracle::truth_table_valid(&e.sequent).unwrap());
            e.validate().unwrap();
        }
    }

    #[test]
    fn invalid_configs() {
        let mut c = GeneratorConfig::new(0, Mode::Prove);
        c.num_symbols = 9;
        assert!(matches!(generate(&c), Err(GenerateError::InvalidConfig(_))));
        let mut c = GeneratorConfig::new(0, Mode::Prove);
        c.connective_weights = ConnectiveWeights {
            and: 0,
            or: 0,
            implies: 0,
            iff: 0,
            not: 0,
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn exhaustion() {
        // With one symbol, depth 1 and only negation the conclusion is `p`
        // or `~p`, neither of which is provable from nothing.
        let mut c = GeneratorConfig::new(3, Mode::Prove);
        c.num_symbols = 1;
        c.num_hypotheses = 0;
        c.max_depth = 1;
        c.connective_weights = ConnectiveWeights {
            and: 0,
            or: 0,
            implies: 0,
            iff: 0,
            not: 1,
        };
        c.max_attempts = 5;
        assert_eq!(generate(&c), Err(GenerateError::GenerationExhausted(5)));
    }

    #[test]
    fn difficulty_score() {
        let sig = Signature::propositional(["p", "q"]);
        // 1 connective + 2*2 atoms, closed by level 1.
        assert_eq!(difficulty(&seq(&sig, &["p", "q"], "p /\\ q"), &sig), 5);
        // 2 connectives + 2*1 atom + 3, since level 1 cannot split cases.
        assert_eq!(difficulty(&seq(&sig, &[], "p \\/ ~p"), &sig), 7);
    }
}
