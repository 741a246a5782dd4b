//! Every single-node mutation of a checked corpus tree must be rejected.

use ndlab_core::corpus;
use ndlab_core::formula::{print_formula, Formula};
use ndlab_core::kernel::{check_tree, DerivationTree, Hypothesis, Rule, Verdict};
use ndlab_core::tactic::{ProofStatus, Runner};

fn corpus_trees() -> Vec<(String, DerivationTree)> {
    corpus::entries()
        .filter_map(|(e, script)| {
            let mut r = Runner::new(e.clone()).unwrap();
            r.run_script(script).unwrap();
            (r.status() == ProofStatus::Proved).then(|| (e.id.clone(), r.proof_tree().unwrap().clone()))
        })
        .collect()
}

fn mutants(tree: &DerivationTree) -> Vec<(String, DerivationTree)> {
    let mut out = Vec::new();
    for (path, node) in tree.preorder() {
        let mut push = |what: String, f: &dyn Fn(&mut DerivationTree)| {
            let mut t = tree.clone();
            f(t.at_mut(&path).unwrap());
            out.push((format!("{path:?} {what}"), t));
        };
        for rule in Rule::ALL {
            if rule != node.rule {
                push(format!("rule {}", rule.name()), &|n| n.rule = rule);
            }
        }
        let replacement = if node.formula.is_bottom() {
            Formula::not(Formula::Bottom)
        } else {
            Formula::Bottom
        };
        push(format!("formula {}", print_formula(&replacement)), &|n| n.formula = replacement.clone());
        push("negated formula".into(), &|n| n.formula = Formula::not(n.formula.clone()));
        for (i, d) in node.discharged.iter().enumerate() {
            push(format!("drop discharge {}", d.label), &|n| {
                n.discharged.remove(i);
            });
            push(format!("negate discharge {}", d.label), &|n| {
                n.discharged[i].formula = Formula::not(n.discharged[i].formula.clone());
            });
        }
        push("extra discharge".into(), &|n| {
            n.discharged.push(Hypothesis {
                label: "h99".into(),
                formula: n.formula.clone(),
            })
        });
    }
    out
}

#[test]
fn the_checker_rejects_every_mutation() {
    let trees = corpus_trees();
    assert!(trees.len() >= 50, "only {} trees", trees.len());
    let mut checked = 0;
    let mut survivors = Vec::new();
    for (id, tree) in &trees {
        let e = corpus::exercise(id).unwrap();
        assert_eq!(check_tree(tree, &e.sequent, &e.definitions), Verdict::Ok, "{id}");
        for (what, m) in mutants(tree) {
            checked += 1;
            if check_tree(&m, &e.sequent, &e.definitions).is_ok() {
                survivors.push(format!("{id}: {what}"));
            }
        }
    }
    assert!(checked > 1000);
    assert!(survivors.is_empty(), "{} of {checked} mutants accepted: {survivors:#?}", survivors.len());
}
