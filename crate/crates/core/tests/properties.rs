//! Randomized invariants over the catalog groups.

use std::sync::OnceLock;

use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;
use spinrep_core::catalog::{self, CatalogGroup, Irrep};
use spinrep_core::mackey::{abelian_dual, induce, induced_character, CosetSection, SectionPolicy};
use spinrep_core::{Cyclotomic, RepLabel, Subgroup};

struct Fixture {
    group: CatalogGroup,
    dual: Vec<Irrep>,
}

fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        catalog::NAMES
            .iter()
            .map(|n| {
                let group = catalog::build(n).unwrap();
                let dual = catalog::dual(&group).unwrap();
                Fixture { group, dual }
            })
            .collect()
    })
}

fn group_index() -> impl Strategy<Value = usize> {
    0..catalog::NAMES.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn collection_agrees_with_the_cayley_table(gi in group_index(), word in prop::collection::vec((0usize..4, 1u32..6), 0..12)) {
        let f = &fixtures()[gi];
        let g = &f.group.group;
        let rank = g.presentation().rank();
        let word: Vec<(usize, u32)> = word.into_iter().map(|(x, e)| (x % rank, e)).collect();
        let collected = g.presentation().collect(&word).unwrap();
        let by_table = word.iter().fold(g.identity(), |acc, &(x, e)| g.mul(acc, g.pow(g.generator(x), e)));
        prop_assert_eq!(g.index_of(&collected), Some(by_table));
    }

    #[test]
    fn multiplication_is_associative_with_inverses(gi in group_index(), a in 0usize..54, b in 0usize..54, c in 0usize..54) {
        let g = &fixtures()[gi].group.group;
        let (a, b, c) = (a % g.order(), b % g.order(), c % g.order());
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
        let (ea, eb) = (g.element(a), g.element(b));
        prop_assert_eq!(g.index_of(&g.presentation().multiply(ea, eb).unwrap()), Some(g.mul(a, b)));
    }

    #[test]
    fn irreps_are_homomorphisms_on_random_pairs(gi in group_index(), r in 0usize..10, a in 0usize..54, b in 0usize..54) {
        let f = &fixtures()[gi];
        let g = &f.group.group;
        let rep = &f.dual[r % f.dual.len()].rep;
        let (a, b) = (a % g.order(), b % g.order());
        prop_assert_eq!(rep.at(g.mul(a, b)).clone(), rep.at(a).mul(rep.at(b)));
    }

    #[test]
    fn boxdot_multiplies_characters(gi in group_index(), r in 0usize..10, s in 0usize..10) {
        let f = &fixtures()[gi];
        let (p, q) = (&f.dual[r % f.dual.len()].rep, &f.dual[s % f.dual.len()].rep);
        let t = p.boxdot(q).unwrap();
        prop_assert_eq!(t.dim(), p.dim() * q.dim());
        for a in 0..f.group.group.order() {
            prop_assert_eq!(t.at(a).trace(), &p.at(a).trace() * &q.at(a).trace());
        }
        // the product decomposes with nonnegative integer multiplicities summing in dimension
        let chi = t.character();
        let mut total = 0;
        for i in &f.dual {
            let m = chi.inner_product(&i.rep.character()).unwrap();
            let m = m.as_rational().expect("rational multiplicity");
            prop_assert!(m.is_integer() && !m.is_negative());
            total += m.to_integer().to_usize().unwrap() * i.rep.dim();
        }
        prop_assert_eq!(total, t.dim());
    }

    #[test]
    fn conjugated_irrep_has_the_conjugated_character(gi in group_index(), r in 0usize..10, w in 0usize..54) {
        let f = &fixtures()[gi];
        let g = &f.group.group;
        let rep = &f.dual[r % f.dual.len()].rep;
        let w = w % g.order();
        let c = rep.conjugate_by(w);
        for n in 0..g.order() {
            prop_assert_eq!(c.at(n).trace(), rep.at(g.mul(g.mul(g.inv(w), n), w)).trace());
        }
        // conjugating by a group element preserves the class function
        prop_assert_eq!(c.character(), rep.character());
    }

    #[test]
    fn induction_agrees_with_the_character_formula_and_frobenius(
        gi in group_index(),
        gens in prop::collection::vec(0usize..54, 1..3),
        pick in 0usize..100,
        policy in prop_oneof![Just(SectionPolicy::Lexicographic), Just(SectionPolicy::Balanced)],
    ) {
        let f = &fixtures()[gi];
        let g = &f.group.group;
        let k = Subgroup::generated(g, gens.into_iter().map(|a| a % g.order()).collect());
        // index at most 9 keeps the induced matrices small
        prop_assume!(k.is_abelian() && g.order() <= 9 * k.order());
        let chars = abelian_dual(&k).unwrap();
        let psi = chars[pick % chars.len()].to_rep(RepLabel::new("psi", vec![], vec![]));
        let section = CosetSection::with_policy(&k, &Subgroup::whole(g), policy).unwrap();
        let ind = induce(&psi, &section).unwrap();
        prop_assert!(ind.verify_homomorphism().passed);
        let formula = induced_character(&Subgroup::whole(g), &psi.character());
        prop_assert_eq!(ind.character(), formula.clone());
        // <Ind psi, chi>_G = <psi, Res chi>_K for every irreducible chi
        for i in &f.dual {
            let lhs = formula.inner_product(&i.rep.character()).unwrap();
            let rhs = psi.character().inner_product(&i.rep.restrict(&k).unwrap().character()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn orbit_stabilizer_on_random_subgroups(gi in group_index(), gens in prop::collection::vec(0usize..54, 1..3)) {
        let f = &fixtures()[gi];
        let g = &f.group.group;
        let u = f.group.tower().unwrap().abelian().clone();
        let w = Subgroup::generated(g, gens.into_iter().map(|a| a % g.order()).collect());
        // W acts on the dual of the normal bottom layer; orbit size times stabilizer order is |W|
        for rho in abelian_dual(&u).unwrap() {
            let rho = rho.to_rep(RepLabel::new("rho", vec![], vec![]));
            let chi = rho.character();
            let mut orbit: Vec<Vec<Cyclotomic>> = Vec::new();
            let mut stab = 0;
            for &x in w.members() {
                let c = rho.conjugate_by(x).character();
                if c == chi {
                    stab += 1;
                }
                if !orbit.iter().any(|o| o.as_slice() == c.values()) {
                    orbit.push(c.values().to_vec());
                }
            }
            prop_assert_eq!(orbit.len() * stab, w.order());
        }
    }
}

#[test]
fn full_dual_is_pairwise_inequivalent() {
    for f in fixtures() {
        for (i, a) in f.dual.iter().enumerate() {
            for b in &f.dual[i + 1..] {
                assert!(!a.rep.are_equivalent(&b.rep), "{} ~ {}", a.label(), b.label());
            }
        }
    }
}
