use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GroupElement, GroupError, PcPresentation, Subgroup};

/// A presentation together with its full multiplication table.
///
/// Elements are indexed by their position in lexicographic normal-form order,
/// so index 0 is the identity and index order agrees with exponent-vector order.
#[derive(Debug)]
pub struct PcGroup {
    presentation: PcPresentation,
    elements: Vec<GroupElement>,
    table: Vec<u32>,
    inverses: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConsistencyFailure {
    Collection { message: String },
    NonAssociative { a: GroupElement, b: GroupElement, c: GroupElement },
    MissingInverse { a: GroupElement },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub passed: bool,
    pub order: usize,
    pub triples_checked: u64,
    pub failure: Option<ConsistencyFailure>,
}

fn element_at(orders: &[u32], mut idx: usize) -> GroupElement {
    let mut exps = vec![0; orders.len()];
    for (k, &n) in orders.iter().enumerate().rev() {
        exps[k] = (idx % n as usize) as u32;
        idx /= n as usize;
    }
    GroupElement::new(exps)
}

fn index_in(orders: &[u32], e: &GroupElement) -> usize {
    e.exponents().iter().zip(orders).fold(0, |acc, (&x, &n)| acc * n as usize + x as usize)
}

fn build_table(p: &PcPresentation) -> Result<(Vec<GroupElement>, Vec<u32>), GroupError> {
    let n = p.nominal_order();
    let elements: Vec<GroupElement> = (0..n).map(|i| element_at(p.relative_orders(), i)).collect();
    let mut table = vec![0u32; n * n];
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let c = p.multiply(a, b)?;
            table[i * n + j] = index_in(p.relative_orders(), &c) as u32;
        }
    }
    Ok((elements, table))
}

fn check_table(elements: &[GroupElement], table: &[u32]) -> ConsistencyReport {
    let n = elements.len();
    let mul = |a: usize, b: usize| table[a * n + b] as usize;
    let mut checked = 0u64;
    for a in 0..n {
        for b in 0..n {
            let ab = mul(a, b);
            for c in 0..n {
                checked += 1;
                if mul(ab, c) != mul(a, mul(b, c)) {
                    return ConsistencyReport {
                        passed: false,
                        order: n,
                        triples_checked: checked,
                        failure: Some(ConsistencyFailure::NonAssociative {
                            a: elements[a].clone(),
                            b: elements[b].clone(),
                            c: elements[c].clone(),
                        }),
                    };
                }
            }
        }
    }
    for (a, element) in elements.iter().enumerate() {
        if !(0..n).any(|b| mul(a, b) == 0 && mul(b, a) == 0) {
            return ConsistencyReport {
                passed: false,
                order: n,
                triples_checked: checked,
                failure: Some(ConsistencyFailure::MissingInverse { a: element.clone() }),
            };
        }
    }
    ConsistencyReport { passed: true, order: n, triples_checked: checked, failure: None }
}

/// Exhaustive associativity and inverse check over the normal forms.
pub fn verify_consistency(p: &PcPresentation) -> ConsistencyReport {
    match build_table(p) {
        Ok((elements, table)) => check_table(&elements, &table),
        Err(e) => ConsistencyReport {
            passed: false,
            order: p.nominal_order(),
            triples_checked: 0,
            failure: Some(ConsistencyFailure::Collection { message: e.to_string() }),
        },
    }
}

impl PcGroup {
    /// Enumerates the group and checks consistency; inconsistent presentations are rejected.
    pub fn new(presentation: PcPresentation) -> Result<Arc<PcGroup>, GroupError> {
        let (elements, table) = build_table(&presentation)?;
        let report = check_table(&elements, &table);
        if let Some(f) = report.failure {
            return Err(GroupError::Inconsistent(match f {
                ConsistencyFailure::NonAssociative { a, b, c } => format!("({a}*{b})*{c} != {a}*({b}*{c})"),
                ConsistencyFailure::MissingInverse { a } => format!("{a} has no two-sided inverse"),
                ConsistencyFailure::Collection { message } => message,
            }));
        }
        let n = elements.len();
        let inverses = (0..n).map(|a| (0..n).find(|&b| table[a * n + b] == 0).expect("checked above")).collect();
        Ok(Arc::new(PcGroup { presentation, elements, table, inverses }))
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.presentation
    }

    pub fn name(&self) -> &str {
        self.presentation.name()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &GroupElement {
        &self.elements[idx]
    }

    pub fn index_of(&self, e: &GroupElement) -> Option<usize> {
        self.presentation.is_valid(e).then(|| index_in(self.presentation.relative_orders(), e))
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of the `k`-th generator.
    pub fn generator(&self, k: usize) -> usize {
        index_in(self.presentation.relative_orders(), &self.presentation.generator_element(k))
    }

    pub fn generator_by_name(&self, name: &str) -> Option<usize> {
        self.presentation.generator_index(name).map(|k| self.generator(k))
    }

    pub fn generators(&self) -> Vec<usize> {
        (0..self.presentation.rank()).map(|k| self.generator(k)).collect()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `a b a^-1`.
    pub fn conjugate(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: usize, e: u32) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Normal-form product by element value.
    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        let ia = self.index_of(a).ok_or_else(|| GroupError::InvalidElement(a.exponents().to_vec()))?;
        let ib = self.index_of(b).ok_or_else(|| GroupError::InvalidElement(b.exponents().to_vec()))?;
        Ok(self.elements[self.mul(ia, ib)].clone())
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        let ia = self.index_of(a).ok_or_else(|| GroupError::InvalidElement(a.exponents().to_vec()))?;
        Ok(self.elements[self.inv(ia)].clone())
    }

    pub fn verify_consistency(&self) -> ConsistencyReport {
        check_table(&self.elements, &self.table)
    }

    /// Order, center, derived subgroup, classes and element-order census.
    pub fn structure_report(self: &Arc<Self>) -> StructureReport {
        let whole = Subgroup::whole(self);
        let center = whole.center();
        let derived = whole.derived_subgroup();
        let classes = whole.conjugacy_classes();
        let mut census = BTreeMap::new();
        for a in 0..self.order() {
            *census.entry(self.element_order(a)).or_insert(0usize) += 1;
        }
        let invariants = GroupInvariants {
            order: self.order(),
            center_order: center.order(),
            derived_order: derived.order(),
            abelianization_order: self.order() / derived.order(),
            class_count: classes.len(),
            element_order_census: census,
        };
        StructureReport {
            name: self.name().to_string(),
            generators: self.presentation.generators().to_vec(),
            relative_orders: self.presentation.relative_orders().to_vec(),
            consistent: true,
            center: center.elements(),
            derived_subgroup_generators: derived.generators().iter().map(|&g| self.element(g).clone()).collect(),
            invariants,
        }
    }
}

/// Invariants used to tell small groups apart without an isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub order: usize,
    pub center_order: usize,
    pub derived_order: usize,
    pub abelianization_order: usize,
    pub class_count: usize,
    pub element_order_census: BTreeMap<u32, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub name: String,
    pub generators: Vec<String>,
    pub relative_orders: Vec<u32>,
    pub consistent: bool,
    pub center: Vec<GroupElement>,
    pub derived_subgroup_generators: Vec<GroupElement>,
    #[serde(flatten)]
    pub invariants: GroupInvariants,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::tests::r54_8;

    fn c3xc3() -> PcPresentation {
        let mut p = PcPresentation::new("c3xc3");
        p.add_generator("a", 3).unwrap();
        p.add_generator("b", 3).unwrap();
        p
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = PcGroup::new(r54_8()).unwrap();
        assert_eq!(g.order(), 54);
        assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
        for (i, e) in g.elements().iter().enumerate() {
            assert_eq!(g.index_of(e), Some(i));
        }
    }

    #[test]
    fn inverses_by_brute_force() {
        let g = PcGroup::new(r54_8()).unwrap();
        let x1 = GroupElement::new(vec![0, 1, 0, 0]);
        // independent search over all elements for the two-sided inverse
        let expected: Vec<&GroupElement> = g
            .elements()
            .iter()
            .filter(|y| {
                let p = g.presentation();
                p.multiply(&x1, y).unwrap().is_identity() && p.multiply(y, &x1).unwrap().is_identity()
            })
            .collect();
        assert_eq!(expected, vec![&GroupElement::new(vec![0, 2, 0, 0])]);
        assert_eq!(g.inverse(&x1).unwrap(), *expected[0]);
        let w = GroupElement::new(vec![0, 0, 0, 1]);
        assert_eq!(g.inverse(&w).unwrap(), w);
        let id = GroupElement::identity(4);
        assert_eq!(g.inverse(&id).unwrap(), id);
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn consistency_reports() {
        let r = verify_consistency(&r54_8());
        assert!(r.passed);
        assert_eq!(r.triples_checked, 54u64.pow(3));
        assert!(verify_consistency(&c3xc3()).passed);

        // x2 x1 = z x1 x2 with z of order 2 while x1, x2 have order 3
        let mut bad = PcPresentation::new("bad");
        bad.add_generator("z", 2).unwrap();
        bad.add_generator("x1", 3).unwrap();
        bad.add_generator("x2", 3).unwrap();
        bad.set_swap_rule(2, 1, GroupElement::new(vec![1, 1, 1])).unwrap();
        let r = verify_consistency(&bad);
        assert!(!r.passed);
        assert!(r.failure.is_some());
        assert!(matches!(PcGroup::new(bad), Err(GroupError::Inconsistent(_))));
    }

    #[test]
    fn structure_of_the_representation_group() {
        let g = PcGroup::new(r54_8()).unwrap();
        let s = g.structure_report();
        assert_eq!(s.invariants.order, 54);
        assert_eq!(s.invariants.center_order, 3);
        assert_eq!(s.center[1], GroupElement::new(vec![1, 0, 0, 0]));
        assert_eq!(s.invariants.derived_order, 27);
        assert_eq!(s.invariants.class_count, 10);
        let abelian = PcGroup::new(c3xc3()).unwrap().structure_report();
        assert_eq!(abelian.invariants.center_order, 9);
        assert_eq!(abelian.invariants.derived_order, 1);
        assert_eq!(abelian.invariants.class_count, 9);
    }
}
