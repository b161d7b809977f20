use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{GroupElement, PcGroup};

/// A subgroup stored extensionally as a sorted list of element indices.
#[derive(Clone)]
pub struct Subgroup {
    group: Arc<PcGroup>,
    members: Vec<usize>,
    generators: Vec<usize>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("group", &self.group.name())
            .field("order", &self.members.len())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.members == other.members
    }
}

impl Eq for Subgroup {}

fn closure(group: &PcGroup, gens: &[usize]) -> Vec<usize> {
    let mut seen = BTreeSet::from([group.identity()]);
    let mut frontier = vec![group.identity()];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = group.mul(x, g);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

impl Subgroup {
    /// Subgroup generated by `gens`, which are kept as its generator list.
    pub fn generated(group: &Arc<PcGroup>, gens: Vec<usize>) -> Subgroup {
        let members = closure(group, &gens);
        Subgroup { group: group.clone(), members, generators: gens }
    }

    pub fn whole(group: &Arc<PcGroup>) -> Subgroup {
        Self::generated(group, group.generators())
    }

    pub fn trivial(group: &Arc<PcGroup>) -> Subgroup {
        Self::generated(group, Vec::new())
    }

    /// Subgroup from a member set; `None` unless the set is closed under products.
    ///
    /// A generator list is chosen greedily: an element of maximal order first,
    /// then the lexicographically first element not yet generated.
    pub fn from_members(group: &Arc<PcGroup>, members: impl IntoIterator<Item = usize>) -> Option<Subgroup> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if !set.contains(&group.identity()) {
            return None;
        }
        if set.iter().any(|&a| set.iter().any(|&b| !set.contains(&group.mul(a, b)))) {
            return None;
        }
        let mut gens = Vec::new();
        let mut span = BTreeSet::from([group.identity()]);
        let first = set.iter().copied().max_by_key(|&a| (group.element_order(a), std::cmp::Reverse(a)));
        let candidates = first.into_iter().chain(set.iter().copied());
        for a in candidates {
            if span.len() == set.len() {
                break;
            }
            if !span.contains(&a) {
                gens.push(a);
                span = closure(group, &gens).into_iter().collect();
            }
        }
        Some(Subgroup { group: group.clone(), members: set.into_iter().collect(), generators: gens })
    }

    pub fn group(&self) -> &Arc<PcGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Member indices, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    /// Position of `a` in [`members`](Self::members).
    pub fn position(&self, a: usize) -> Option<usize> {
        self.members.binary_search(&a).ok()
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.members.iter().map(|&m| self.group.element(m).clone()).collect()
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.group.order()
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.group;
        self.generators.iter().all(|&a| self.generators.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// True when every member of `within` normalizes `self`.
    pub fn is_normal_in(&self, within: &Subgroup) -> bool {
        within.members.iter().all(|&k| self.generators.iter().all(|&n| self.contains(self.group.conjugate(k, n))))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let set = self.members.iter().copied().filter(|&m| other.contains(m));
        Subgroup::from_members(&self.group, set).expect("intersection of subgroups is a subgroup")
    }

    /// Elements of `self` commuting with all of `self`.
    pub fn center(&self) -> Subgroup {
        let g = &self.group;
        let set = self.members.iter().copied().filter(|&z| self.generators.iter().all(|&x| g.mul(z, x) == g.mul(x, z)));
        Subgroup::from_members(g, set).expect("center is a subgroup")
    }

    /// Subgroup generated by all commutators of members.
    pub fn derived_subgroup(&self) -> Subgroup {
        let g = &self.group;
        let comms: BTreeSet<usize> =
            self.members.iter().flat_map(|&a| self.members.iter().map(move |&b| g.commutator(a, b))).collect();
        let closed = closure(g, &comms.into_iter().collect::<Vec<_>>());
        Subgroup::from_members(g, closed).expect("closure is a subgroup")
    }

    /// Orbits under conjugation by members, each sorted; the classes are sorted by
    /// their least element, which serves as the representative.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let g = &self.group;
        let mut assigned = vec![false; g.order()];
        let mut classes = Vec::new();
        for &a in &self.members {
            if assigned[a] {
                continue;
            }
            let class: BTreeSet<usize> = self.members.iter().map(|&k| g.conjugate(k, a)).collect();
            for &c in &class {
                assigned[c] = true;
            }
            classes.push(class.into_iter().collect::<Vec<_>>());
        }
        classes
    }

    /// Right coset `self * k` as a sorted list.
    pub fn right_coset(&self, k: usize) -> Vec<usize> {
        let mut c: Vec<usize> = self.members.iter().map(|&h| self.group.mul(h, k)).collect();
        c.sort_unstable();
        c
    }
}
