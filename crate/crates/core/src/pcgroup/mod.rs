//! Finite groups given by ordered generators, relative orders and rewriting
//! rules, with normal-form multiplication by collection.
//!
//! Elements are exponent vectors `(e_1, .., e_k)` with `0 <= e_i < n_i`,
//! standing for `g_1^e_1 ... g_k^e_k`. A swap rule for `j > i` states
//! `g_j g_i = w_ji` with `w_ji` in normal form; a missing swap rule means the two
//! generators commute. A power rule states `g_i^n_i = w_i` (identity when absent).

mod extension;
mod group;
mod subgroup;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use extension::{one_step_extension, CentralExtension, EfficiencyReport, OneStepExtension};
pub use group::{verify_consistency, ConsistencyFailure, ConsistencyReport, GroupInvariants, PcGroup, StructureReport};
pub use subgroup::Subgroup;

/// Rewriting steps allowed for a single collection before giving up.
pub const COLLECTION_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relative order of `{0}` must be at least 2")]
    BadOrder(String),
    #[error("rule right-hand side is not in normal form: {0}")]
    NotNormalForm(String),
    #[error("swap rule must name the later generator first: `{later}` is not after `{earlier}`")]
    RuleDirection { later: String, earlier: String },
    #[error("element {0:?} does not belong to the group")]
    InvalidElement(Vec<u32>),
    #[error("collection did not terminate within {0} steps; the presentation is inconsistent or ill-ordered")]
    CollectionBudget(usize),
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
    #[error("extension rejected: {0}")]
    ExtensionRejected(String),
}

/// Normal-form exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<u32>);

impl GroupElement {
    pub fn new(exponents: Vec<u32>) -> Self {
        GroupElement(exponents)
    }

    pub fn identity(rank: usize) -> Self {
        GroupElement(vec![0; rank])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Non-trivial syllables `(generator, exponent)` in order.
    pub fn syllables(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Ordered generators, relative orders, power rules and swap rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    name: String,
    gens: Vec<String>,
    orders: Vec<u32>,
    power_rules: BTreeMap<usize, GroupElement>,
    swap_rules: BTreeMap<(usize, usize), GroupElement>,
}

impl PcPresentation {
    pub fn new(name: impl Into<String>) -> Self {
        PcPresentation {
            name: name.into(),
            gens: Vec::new(),
            orders: Vec::new(),
            power_rules: BTreeMap::new(),
            swap_rules: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn generators(&self) -> &[String] {
        &self.gens
    }

    pub fn relative_orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Product of the relative orders.
    pub fn nominal_order(&self) -> usize {
        self.orders.iter().map(|&n| n as usize).product()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g == name)
    }

    pub fn power_rules(&self) -> &BTreeMap<usize, GroupElement> {
        &self.power_rules
    }

    /// Swap rules keyed by `(later, earlier)` generator indices.
    pub fn swap_rules(&self) -> &BTreeMap<(usize, usize), GroupElement> {
        &self.swap_rules
    }

    pub fn add_generator(&mut self, name: impl Into<String>, order: u32) -> Result<usize, GroupError> {
        let name = name.into();
        if self.generator_index(&name).is_some() {
            return Err(GroupError::DuplicateGenerator(name));
        }
        if order < 2 {
            return Err(GroupError::BadOrder(name));
        }
        self.gens.push(name);
        self.orders.push(order);
        Ok(self.gens.len() - 1)
    }

    fn check_normal_form(&self, word: &GroupElement) -> Result<(), GroupError> {
        if word.0.len() != self.rank() {
            return Err(GroupError::NotNormalForm(format!("expected {} exponents, got {}", self.rank(), word.0.len())));
        }
        for (i, (&e, &n)) in word.0.iter().zip(&self.orders).enumerate() {
            if e >= n {
                return Err(GroupError::NotNormalForm(format!("exponent {e} of `{}` is not below {n}", self.gens[i])));
            }
        }
        Ok(())
    }

    pub fn set_power_rule(&mut self, gen: usize, word: GroupElement) -> Result<(), GroupError> {
        self.check_normal_form(&word)?;
        if word.is_identity() {
            self.power_rules.remove(&gen);
        } else {
            self.power_rules.insert(gen, word);
        }
        Ok(())
    }

    /// Records `g_later g_earlier = word`.
    pub fn set_swap_rule(&mut self, later: usize, earlier: usize, word: GroupElement) -> Result<(), GroupError> {
        if later <= earlier {
            return Err(GroupError::RuleDirection {
                later: self.gens.get(later).cloned().unwrap_or_default(),
                earlier: self.gens.get(earlier).cloned().unwrap_or_default(),
            });
        }
        self.check_normal_form(&word)?;
        self.swap_rules.insert((later, earlier), word);
        Ok(())
    }

    /// Element with a single nonzero exponent.
    pub fn generator_element(&self, gen: usize) -> GroupElement {
        let mut e = vec![0; self.rank()];
        e[gen] = 1;
        GroupElement(e)
    }

    pub fn is_valid(&self, a: &GroupElement) -> bool {
        a.0.len() == self.rank() && a.0.iter().zip(&self.orders).all(|(&e, &n)| e < n)
    }

    /// Brings an arbitrary word `[(generator, exponent), ..]` to normal form.
    ///
    /// Repeatedly rewrites the leftmost offending spot: a zero exponent, an
    /// exponent at or above the relative order, two adjacent syllables of the
    /// same generator, or an out-of-order adjacent pair.
    pub fn collect(&self, word: &[(usize, u32)]) -> Result<GroupElement, GroupError> {
        self.collect_with_budget(word, COLLECTION_BUDGET)
    }

    /// [`collect`](Self::collect) with an explicit step budget.
    pub fn collect_with_budget(&self, word: &[(usize, u32)], budget: usize) -> Result<GroupElement, GroupError> {
        let mut w: Vec<(usize, u32)> = word.to_vec();
        let mut steps = 0usize;
        loop {
            let mut spot = None;
            for p in 0..w.len() {
                let (g, e) = w[p];
                if e == 0 || e >= self.orders[g] {
                    spot = Some(p);
                    break;
                }
                if p + 1 < w.len() && w[p + 1].1 > 0 && w[p + 1].0 <= g {
                    spot = Some(p);
                    break;
                }
            }
            let Some(p) = spot else { break };
            steps += 1;
            if steps > budget {
                return Err(GroupError::CollectionBudget(budget));
            }
            let (g, e) = w[p];
            if e == 0 {
                w.remove(p);
            } else if e >= self.orders[g] {
                w[p].1 -= self.orders[g];
                if let Some(rule) = self.power_rules.get(&g) {
                    let tail: Vec<_> = rule.syllables().collect();
                    w.splice(p + 1..p + 1, tail);
                }
            } else if w[p + 1].0 == g {
                w[p].1 += w[p + 1].1;
                w.remove(p + 1);
            } else {
                // g_j^a g_i^b with j > i: peel one letter from each side of the pair.
                let (i, b) = w[p + 1];
                let middle: Vec<(usize, u32)> = match self.swap_rules.get(&(g, i)) {
                    Some(rule) => rule.syllables().collect(),
                    None => vec![(i, 1), (g, 1)],
                };
                let mut replacement = Vec::with_capacity(middle.len() + 2);
                replacement.push((g, e - 1));
                replacement.extend(middle);
                replacement.push((i, b - 1));
                w.splice(p..p + 2, replacement);
            }
        }
        let mut exps = vec![0; self.rank()];
        for (g, e) in w {
            exps[g] = e;
        }
        Ok(GroupElement(exps))
    }

    /// Normal form of `a * b` by collection.
    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        for x in [a, b] {
            if !self.is_valid(x) {
                return Err(GroupError::InvalidElement(x.0.clone()));
            }
        }
        let word: Vec<(usize, u32)> = a.syllables().chain(b.syllables()).collect();
        self.collect(&word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// R(G) with ordering z, x1, x2, w.
    pub(crate) fn r54_8() -> PcPresentation {
        let mut p = PcPresentation::new("r54_8");
        for (g, n) in [("z", 3), ("x1", 3), ("x2", 3), ("w", 2)] {
            p.add_generator(g, n).unwrap();
        }
        p.set_swap_rule(2, 1, GroupElement::new(vec![2, 1, 1, 0])).unwrap();
        p.set_swap_rule(3, 1, GroupElement::new(vec![0, 2, 0, 1])).unwrap();
        p.set_swap_rule(3, 2, GroupElement::new(vec![0, 0, 2, 1])).unwrap();
        p
    }

    #[test]
    fn collection_follows_swap_rules() {
        let p = r54_8();
        let x1 = p.generator_element(1);
        let x2 = p.generator_element(2);
        let w = p.generator_element(3);
        assert_eq!(p.multiply(&x2, &x1).unwrap(), GroupElement::new(vec![2, 1, 1, 0]));
        assert_eq!(p.multiply(&w, &x1).unwrap(), GroupElement::new(vec![0, 2, 0, 1]));
        let id = GroupElement::identity(4);
        assert_eq!(p.multiply(&id, &x2).unwrap(), x2);
        assert_eq!(p.multiply(&w, &w).unwrap(), id);
    }

    #[test]
    fn rejects_bad_rules() {
        let mut p = r54_8();
        assert!(matches!(p.set_swap_rule(1, 2, GroupElement::identity(4)), Err(GroupError::RuleDirection { .. })));
        assert!(matches!(
            p.set_swap_rule(2, 1, GroupElement::new(vec![3, 0, 0, 0])),
            Err(GroupError::NotNormalForm(_))
        ));
        assert!(matches!(p.add_generator("w", 2), Err(GroupError::DuplicateGenerator(_))));
        assert!(matches!(p.add_generator("a", 1), Err(GroupError::BadOrder(_))));
        assert!(p.multiply(&GroupElement::new(vec![0, 0, 0, 2]), &GroupElement::identity(4)).is_err());
    }

    #[test]
    fn collection_budget_is_enforced() {
        let p = r54_8();
        let word = [(3, 1), (2, 1), (1, 1)];
        assert!(matches!(p.collect_with_budget(&word, 2), Err(GroupError::CollectionBudget(2))));
        assert!(p.collect_with_budget(&word, 100).is_ok());
    }
}
