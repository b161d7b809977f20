//! Irreducible representations of iterated semidirect products `U ⋊ W_1 ⋊ ... ⋊ W_r`
//! with `U` abelian, by orbits, stabilizers, intertwiners and induction.
//!
//! Conventions: `W` acts by conjugation `w(n) = w n w^-1`; the conjugate
//! representation is `(^w rho)(n) = rho(w^-1 n w)`; an intertwiner satisfies
//! `J(w) rho(n) = rho(w n w^-1) J(w)`. Induction realizes `Ind_H^K pi` on
//! functions on a right-coset section `S`: for `s g = u s'` with `u` in `H`,
//! block `(s, s')` of the induced matrix at `g` is `pi(u)`.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::Cyclotomic;
use crate::dsl::TowerSpec;
use crate::matrix::CycMatrix;
use crate::pcgroup::{PcGroup, Subgroup};
use crate::repcore::{signed_residue, ClassFunction, FactorSet, MatrixRep, RepError, RepLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MackeyError {
    #[error("subgroup is not abelian")]
    NotAbelian,
    #[error("invalid tower: {0}")]
    BadTower(String),
    #[error("irreducible list is not closed under the action: {0}")]
    NotStable(String),
    #[error("no nonzero intertwiner exists for {0}")]
    NoIntertwiner(String),
    #[error("intertwiner space of {label} has dimension {dim}; the representation is reducible")]
    Reducible { label: String, dim: usize },
    #[error("unsupported construction for orbit of {label}: {reason}")]
    Unsupported { label: String, reason: String },
    #[error("invalid coset section: {0}")]
    BadSection(String),
    #[error(
        "dual is incomplete: sum of squared dimensions {burnside} vs order {order}, {count} irreps vs {classes} classes"
    )]
    Incomplete { burnside: usize, order: usize, count: usize, classes: usize },
    #[error("characters are not orthonormal: <{0}, {1}> is wrong")]
    NotOrthonormal(String, String),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Generators of the bottom layer and of each complement, resolved to subgroups.
#[derive(Clone, Debug)]
pub struct Tower {
    group: Arc<PcGroup>,
    abelian: Subgroup,
    complements: Vec<Subgroup>,
    levels: Vec<Subgroup>,
}

impl Tower {
    /// Checks that each level `K_i = K_{i-1} ⋊ W_i` is a split extension and that
    /// the top level is the whole group.
    pub fn new(group: &Arc<PcGroup>, spec: &TowerSpec) -> Result<Tower, MackeyError> {
        let resolve = |names: &[String]| -> Result<Subgroup, MackeyError> {
            let gens = names
                .iter()
                .map(|n| group.generator_by_name(n).ok_or_else(|| MackeyError::BadTower(format!("unknown `{n}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Subgroup::generated(group, gens))
        };
        let abelian = resolve(&spec.abelian)?;
        if !abelian.is_abelian() {
            return Err(MackeyError::BadTower("bottom layer is not abelian".into()));
        }
        let mut levels = vec![abelian.clone()];
        let mut complements = Vec::new();
        for names in &spec.complements {
            let w = resolve(names)?;
            let below = levels.last().expect("nonempty").clone();
            let mut gens = below.generators().to_vec();
            gens.extend_from_slice(w.generators());
            let k = Subgroup::generated(group, gens);
            if !below.is_normal_in(&k) {
                return Err(MackeyError::BadTower(format!("layer below {{{}}} is not normal", names.join(" "))));
            }
            if below.intersection(&w).order() != 1 || below.order() * w.order() != k.order() {
                return Err(MackeyError::BadTower(format!("{{{}}} is not a complement", names.join(" "))));
            }
            levels.push(k);
            complements.push(w);
        }
        if !levels.last().expect("nonempty").is_whole() {
            return Err(MackeyError::BadTower("tower does not reach the whole group".into()));
        }
        Ok(Tower { group: group.clone(), abelian, complements, levels })
    }

    pub fn group(&self) -> &Arc<PcGroup> {
        &self.group
    }

    pub fn abelian(&self) -> &Subgroup {
        &self.abelian
    }

    pub fn complements(&self) -> &[Subgroup] {
        &self.complements
    }

    /// `K_0 = U`, `K_i = K_{i-1} ⋊ W_i`.
    pub fn levels(&self) -> &[Subgroup] {
        &self.levels
    }
}

/// A linear character of an abelian subgroup, `gen_i -> zeta_{n_i}^{m_i}`.
#[derive(Clone, Debug)]
pub struct AbelianCharacter {
    domain: Subgroup,
    exponents: Vec<u32>,
    orders: Vec<u32>,
    values: Vec<Cyclotomic>,
}

impl AbelianCharacter {
    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn signed_exponents(&self) -> Vec<i32> {
        self.exponents.iter().zip(&self.orders).map(|(&m, &n)| signed_residue(m as i64, n)).collect()
    }

    pub fn value(&self, a: usize) -> &Cyclotomic {
        &self.values[self.domain.position(a).expect("in domain")]
    }

    pub fn to_rep(&self, label: RepLabel) -> MatrixRep {
        MatrixRep::from_fn(&self.domain, 1, label, |a| CycMatrix::scalar(1, self.value(a)))
    }
}

/// Extends generator values multiplicatively over the subgroup; `None` if inconsistent.
fn extend_multiplicatively<T: Clone + PartialEq>(
    domain: &Subgroup,
    identity: T,
    images: &[T],
    mul: impl Fn(&T, &T) -> T,
) -> Option<Vec<T>> {
    let g = domain.group();
    let mut table: Vec<Option<T>> = vec![None; domain.order()];
    table[domain.position(g.identity()).expect("identity")] = Some(identity);
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let vx = table[domain.position(x).expect("member")].clone().expect("assigned");
        for (&s, img) in domain.generators().iter().zip(images) {
            let y = g.mul(x, s);
            let vy = mul(&vx, img);
            let slot = &mut table[domain.position(y).expect("closed")];
            match slot {
                Some(existing) if *existing != vy => return None,
                Some(_) => {}
                None => {
                    *slot = Some(vy);
                    queue.push_back(y);
                }
            }
        }
    }
    table.into_iter().collect()
}

/// All linear characters of an abelian subgroup, lexicographic in the exponents
/// on its generator list.
pub fn abelian_dual(u: &Subgroup) -> Result<Vec<AbelianCharacter>, MackeyError> {
    if !u.is_abelian() {
        return Err(MackeyError::NotAbelian);
    }
    let g = u.group();
    let orders: Vec<u32> = u.generators().iter().map(|&s| g.element_order(s)).collect();
    let mut out = Vec::new();
    let total: usize = orders.iter().map(|&n| n as usize).product();
    for idx in 0..total {
        let mut exps = vec![0u32; orders.len()];
        let mut r = idx;
        for k in (0..orders.len()).rev() {
            exps[k] = (r % orders[k] as usize) as u32;
            r /= orders[k] as usize;
        }
        let images: Vec<Cyclotomic> =
            exps.iter().zip(&orders).map(|(&m, &n)| Cyclotomic::root_of_unity(n, m as i64)).collect();
        if let Some(values) = extend_multiplicatively(u, Cyclotomic::one(), &images, |a, b| a * b) {
            out.push(AbelianCharacter { domain: u.clone(), exponents: exps, orders: orders.clone(), values });
        }
    }
    debug_assert_eq!(out.len(), u.order());
    Ok(out)
}

/// One `W`-orbit on a list of irreducibles, by index into that list.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub members: Vec<usize>,
    pub representative: usize,
    pub stabilizer: Subgroup,
}

#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Orbit>,
}

/// Orbits of `w` acting on pairwise inequivalent irreducibles of a normal subgroup.
///
/// Representatives are the first orbit member in list order.
pub fn orbit_decomposition(irreps: &[MatrixRep], w: &Subgroup) -> Result<OrbitDecomposition, MackeyError> {
    let g = w.group();
    let chars: Vec<ClassFunction> = irreps.iter().map(MatrixRep::character).collect();
    let mut assigned = vec![false; irreps.len()];
    let mut orbits = Vec::new();
    for i in 0..irreps.len() {
        if assigned[i] {
            continue;
        }
        let n = irreps[i].domain();
        let mut members = BTreeSet::new();
        let mut stab = Vec::new();
        for &x in w.members() {
            let xi = g.inv(x);
            let conj = ClassFunction::from_fn(n, |a| chars[i].value(g.conjugate(xi, a)).expect("normal").clone())
                .ok_or_else(|| MackeyError::NotStable("conjugate is not a class function".into()))?;
            let j = chars.iter().position(|c| *c == conj).ok_or_else(|| {
                MackeyError::NotStable(format!("conjugate of {} by {} is missing", irreps[i].label(), g.element(x)))
            })?;
            members.insert(j);
            if j == i {
                stab.push(x);
            }
        }
        let stabilizer = Subgroup::from_members(g, stab).expect("stabilizer is a subgroup");
        if members.len() * stabilizer.order() != w.order() {
            return Err(MackeyError::NotStable("orbit-stabilizer count fails".into()));
        }
        for &j in &members {
            assigned[j] = true;
        }
        orbits.push(Orbit { members: members.into_iter().collect(), representative: i, stabilizer });
    }
    Ok(OrbitDecomposition { orbits })
}

/// How coset representatives are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionPolicy {
    /// Least element of each coset, cosets ordered by representative.
    #[default]
    Lexicographic,
    /// Element of each coset with the least total signed exponent size,
    /// cosets ordered by signed exponent vector; gives sections like `(g^-1, 1, g)`.
    Balanced,
}

/// Representatives of the right cosets `H s` in `K`.
#[derive(Clone, Debug)]
pub struct CosetSection {
    subgroup: Subgroup,
    ambient: Subgroup,
    reps: Vec<usize>,
    coset_of: Vec<usize>,
}

fn balanced_key(g: &PcGroup, a: usize) -> Vec<i32> {
    let orders = g.presentation().relative_orders();
    g.element(a).exponents().iter().zip(orders).map(|(&e, &n)| signed_residue(e as i64, n)).collect()
}

impl CosetSection {
    /// Validates an explicit list of representatives.
    pub fn new(subgroup: &Subgroup, ambient: &Subgroup, reps: Vec<usize>) -> Result<CosetSection, MackeyError> {
        if !subgroup.is_subgroup_of(ambient) {
            return Err(MackeyError::BadSection("subgroup is not contained in the ambient group".into()));
        }
        let g = ambient.group();
        let mut coset_of = vec![usize::MAX; g.order()];
        for (i, &s) in reps.iter().enumerate() {
            if !ambient.contains(s) {
                return Err(MackeyError::BadSection(format!("{} is outside the ambient group", g.element(s))));
            }
            for c in subgroup.right_coset(s) {
                if coset_of[c] != usize::MAX {
                    return Err(MackeyError::BadSection(format!("{} repeats a coset", g.element(s))));
                }
                coset_of[c] = i;
            }
        }
        if reps.len() * subgroup.order() != ambient.order() {
            return Err(MackeyError::BadSection("cosets do not cover the ambient group".into()));
        }
        if reps[coset_of[g.identity()]] != g.identity() {
            return Err(MackeyError::BadSection("identity coset must be represented by the identity".into()));
        }
        Ok(CosetSection { subgroup: subgroup.clone(), ambient: ambient.clone(), reps, coset_of })
    }

    pub fn with_policy(subgroup: &Subgroup, ambient: &Subgroup, policy: SectionPolicy) -> Result<Self, MackeyError> {
        let g = ambient.group();
        let mut seen = vec![false; g.order()];
        let mut cosets = Vec::new();
        for &k in ambient.members() {
            if !seen[k] {
                let c = subgroup.right_coset(k);
                for &x in &c {
                    seen[x] = true;
                }
                cosets.push(c);
            }
        }
        let mut reps: Vec<usize> = match policy {
            SectionPolicy::Lexicographic => cosets.iter().map(|c| c[0]).collect(),
            SectionPolicy::Balanced => cosets
                .iter()
                .map(|c| {
                    *c.iter()
                        .min_by_key(|&&a| {
                            let key = balanced_key(g, a);
                            (key.iter().map(|v| v.unsigned_abs()).sum::<u32>(), a)
                        })
                        .expect("nonempty coset")
                })
                .collect(),
        };
        match policy {
            SectionPolicy::Lexicographic => reps.sort_unstable(),
            SectionPolicy::Balanced => reps.sort_by_key(|&a| balanced_key(g, a)),
        }
        Self::new(subgroup, ambient, reps)
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn ambient(&self) -> &Subgroup {
        &self.ambient
    }

    /// Index of the representative of the coset containing `a`.
    pub fn coset_index(&self, a: usize) -> usize {
        self.coset_of[a]
    }
}

/// Block-matrix realization of `Ind_H^K rep` on the given section.
pub fn induce(rep: &MatrixRep, section: &CosetSection) -> Result<MatrixRep, MackeyError> {
    if rep.domain() != section.subgroup() {
        return Err(MackeyError::BadSection("section is for a different subgroup".into()));
    }
    let g = rep.group().clone();
    let (d, s) = (rep.dim(), section.reps.len());
    let label = rep.label().clone();
    Ok(MatrixRep::from_fn(section.ambient(), d * s, label, |g0| {
        let mut m = CycMatrix::zeros(d * s, d * s);
        for (a, &sa) in section.reps.iter().enumerate() {
            let x = g.mul(sa, g0);
            let b = section.coset_index(x);
            let u = g.mul(x, g.inv(section.reps[b]));
            m.set_block(a * d, b * d, rep.at(u));
        }
        m
    }))
}

/// `chi_Ind(g) = (1/|H|) sum_{k in K} chi'(k g k^-1)` with `chi'` zero off `H`.
pub fn induced_character(ambient: &Subgroup, chi: &ClassFunction) -> ClassFunction {
    let h = chi.domain();
    let g = ambient.group();
    let scale = BigRational::new(1.into(), (h.order() as i64).into());
    ClassFunction::from_fn(ambient, |x| {
        let sum: Cyclotomic = ambient.members().iter().filter_map(|&k| chi.value(g.conjugate(k, x)).cloned()).sum();
        sum.scale(&scale)
    })
    .expect("induced character is a class function")
}

/// A positive rational `r` and root of unity `zeta_n^k` with `value = r zeta_n^k`.
fn polar_form(value: &Cyclotomic) -> Option<(BigRational, u32, u32)> {
    if let Some((n, k)) = value.as_root_of_unity() {
        return Some((BigRational::from_integer(1.into()), n, k));
    }
    let q = value.as_rational()?;
    if q.is_zero() {
        return None;
    }
    Some(if q.is_negative() { (-q, 2, 1) } else { (q, 1, 0) })
}

fn rational_root(q: &BigRational, m: u32) -> Option<BigRational> {
    let root = |x: &BigInt| {
        let r = x.nth_root(m);
        (num_traits::pow(r.clone(), m as usize) == *x).then_some(r)
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}

/// Normalized scalars `lambda` with `lambda^m = target`, smallest argument first.
fn scalar_roots(target: &Cyclotomic, m: u32) -> Option<Vec<Cyclotomic>> {
    let (r, n, k) = polar_form(target)?;
    let r = rational_root(&r, m)?;
    let big = n * m;
    let mut cands: Vec<(u32, Cyclotomic)> = (0..m)
        .map(|j| {
            let e = (k + j * n) % big;
            (e, Cyclotomic::root_of_unity(big, e as i64).scale(&r))
        })
        .collect();
    cands.sort_by_key(|(e, _)| *e);
    Some(cands.into_iter().map(|(_, c)| c).collect())
}

fn intertwiner_space(rho: &MatrixRep, w: usize) -> Vec<CycMatrix> {
    let g = rho.group();
    let d = rho.dim();
    let gens = rho.domain().generators();
    let mut sys = CycMatrix::zeros(gens.len() * d * d, d * d);
    for (t, &n) in gens.iter().enumerate() {
        let a = rho.at(n);
        let b = rho.at(g.conjugate(w, n));
        for i in 0..d {
            for j in 0..d {
                let row = t * d * d + i * d + j;
                for k in 0..d {
                    // (J A)_ij - (B J)_ij
                    let cur = sys.get(row, i * d + k).clone();
                    sys.set(row, i * d + k, &cur + a.get(k, j));
                    let cur = sys.get(row, k * d + j).clone();
                    sys.set(row, k * d + j, &cur - b.get(i, k));
                }
            }
        }
    }
    sys.nullspace()
        .into_iter()
        .map(|v| CycMatrix::from_rows(v.chunks(d).map(<[Cyclotomic]>::to_vec).collect()))
        .collect()
}

/// Candidate intertwiners for `w`, each with `J^m = I` (`m` the order of `w`),
/// ordered by the argument of their first nonzero entry.
fn intertwiner_candidates(rho: &MatrixRep, w: usize) -> Result<Vec<CycMatrix>, MackeyError> {
    let label = rho.label().to_string();
    let space = intertwiner_space(rho, w);
    match space.len() {
        0 => return Err(MackeyError::NoIntertwiner(label)),
        1 => {}
        dim => return Err(MackeyError::Reducible { label, dim }),
    }
    let raw = &space[0];
    let (_, lead) = raw.first_nonzero().expect("nullspace vectors are nonzero");
    let j1 = raw.scale(&lead.inv().expect("nonzero"));
    let m = rho.group().element_order(w);
    let unsupported = |reason: &str| MackeyError::Unsupported { label: label.clone(), reason: reason.to_string() };
    let c = j1.pow(m).as_scalar().ok_or_else(|| unsupported("power of the intertwiner is not scalar"))?;
    let target = c.inv().expect("scalar of an invertible matrix");
    let lambdas = scalar_roots(&target, m).ok_or_else(|| unsupported("no normalizing root in the scalar field"))?;
    Ok(lambdas.iter().map(|l| j1.scale(l)).collect())
}

/// The intertwiner `J` with `J rho(n) = rho(w n w^-1) J`, scaled so that
/// `J^order(w) = I` and its first nonzero entry has the least argument.
pub fn solve_intertwiner(rho: &MatrixRep, w: usize) -> Result<CycMatrix, MackeyError> {
    Ok(intertwiner_candidates(rho, w)?.swap_remove(0))
}

/// Intertwiners on a whole stabilizer, chosen to be multiplicative when possible.
#[derive(Clone, Debug)]
pub struct IntertwinerFamily {
    stabilizer: Subgroup,
    matrices: Vec<CycMatrix>,
}

impl IntertwinerFamily {
    /// Picks normalized intertwiners on the stabilizer generators, trying
    /// candidate combinations in order until they extend multiplicatively.
    pub fn new(rho: &MatrixRep, stabilizer: &Subgroup) -> Result<IntertwinerFamily, MackeyError> {
        let d = rho.dim();
        let options =
            stabilizer.generators().iter().map(|&s| intertwiner_candidates(rho, s)).collect::<Result<Vec<_>, _>>()?;
        let mut choice = vec![0usize; options.len()];
        loop {
            let images: Vec<CycMatrix> = choice.iter().zip(&options).map(|(&c, o)| o[c].clone()).collect();
            if let Some(matrices) =
                extend_multiplicatively(stabilizer, CycMatrix::identity(d), &images, |a, b| a.mul(b))
            {
                return Ok(IntertwinerFamily { stabilizer: stabilizer.clone(), matrices });
            }
            let mut k = options.len();
            loop {
                if k == 0 {
                    return Err(MackeyError::Unsupported {
                        label: rho.label().to_string(),
                        reason: "factor set of the intertwiners cannot be normalized to 1".into(),
                    });
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
            }
        }
    }

    pub fn stabilizer(&self) -> &Subgroup {
        &self.stabilizer
    }

    pub fn at(&self, s: usize) -> &CycMatrix {
        &self.matrices[self.stabilizer.position(s).expect("in stabilizer")]
    }

    /// `alpha(v, w)` with `J(v) J(w) = alpha(v, w) J(vw)`.
    pub fn factor_set(&self) -> Result<FactorSet, MackeyError> {
        let g = self.stabilizer.group();
        for &v in self.stabilizer.members() {
            for &w in self.stabilizer.members() {
                let ratio = self.at(v).mul(self.at(w)).ratio_to(self.at(g.mul(v, w)));
                if ratio.and_then(|r| r.as_root_of_unity()).is_none() {
                    return Err(MackeyError::Unsupported {
                        label: format!("{}", g.element(v)),
                        reason: "intertwiner product is not a root-of-unity multiple".into(),
                    });
                }
            }
        }
        Ok(FactorSet::from_fn(&self.stabilizer, |v, w| {
            self.at(v).mul(self.at(w)).ratio_to(self.at(g.mul(v, w))).expect("checked")
        }))
    }
}

/// Character of the representation that was induced, kept for cross-checks.
#[derive(Clone, Debug)]
pub struct InducingData {
    pub subgroup: Subgroup,
    pub character: ClassFunction,
}

/// One irreducible produced by the pipeline.
#[derive(Clone, Debug)]
pub struct DualEntry {
    pub rep: MatrixRep,
    pub inducing: InducingData,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
}

fn child_label(parent: &RepLabel, twist: Vec<i32>) -> RepLabel {
    let mut params = parent.params.clone();
    params.extend(&parent.twist);
    RepLabel::new(parent.symbol.clone(), params, twist)
}

/// The classical method for one irreducible `rho` of `n` inside `k = n ⋊ w`.
///
/// Builds `pi0(n s) = rho(n) J(s)` on `n ⋊ Stab(rho)`, tensors with each
/// character of the stabilizer, and induces up to `k`.
pub fn classical_method(
    k: &Subgroup,
    w: &Subgroup,
    rho: &MatrixRep,
    policy: SectionPolicy,
) -> Result<Vec<DualEntry>, MackeyError> {
    let decomposition = orbit_decomposition(std::slice::from_ref(rho), w);
    let stabilizer = match decomposition {
        Ok(d) => d.orbits.into_iter().next().expect("one orbit").stabilizer,
        // rho is not fixed by all of w; compute its stabilizer directly
        Err(MackeyError::NotStable(_)) => stabilizer_of(rho, w),
        Err(e) => return Err(e),
    };
    classical_method_with_stabilizer(k, w, rho, &stabilizer, policy)
}

fn stabilizer_of(rho: &MatrixRep, w: &Subgroup) -> Subgroup {
    let g = w.group();
    let chi = rho.character();
    let fixed = w.members().iter().copied().filter(|&x| {
        let xi = g.inv(x);
        rho.domain().members().iter().all(|&a| chi.value(g.conjugate(xi, a)) == chi.value(a))
    });
    Subgroup::from_members(g, fixed.collect::<Vec<_>>()).expect("stabilizer is a subgroup")
}

fn classical_method_with_stabilizer(
    k: &Subgroup,
    w: &Subgroup,
    rho: &MatrixRep,
    stabilizer: &Subgroup,
    policy: SectionPolicy,
) -> Result<Vec<DualEntry>, MackeyError> {
    let g = k.group().clone();
    let n = rho.domain();
    let family = IntertwinerFamily::new(rho, stabilizer)?;
    if !family.factor_set()?.is_trivial() {
        return Err(MackeyError::Unsupported {
            label: rho.label().to_string(),
            reason: "nontrivial factor set on the stabilizer".into(),
        });
    }
    let mut decompose = vec![None; g.order()];
    for &s in stabilizer.members() {
        for &x in n.members() {
            decompose[g.mul(x, s)] = Some((x, s));
        }
    }
    let h = Subgroup::from_members(&g, (0..g.order()).filter(|&a| decompose[a].is_some()))
        .expect("normal subgroup times stabilizer is a subgroup");
    let stab_chars = if stabilizer.order() == 1 {
        Vec::new()
    } else {
        abelian_dual(stabilizer).map_err(|_| MackeyError::Unsupported {
            label: rho.label().to_string(),
            reason: "stabilizer is not abelian".into(),
        })?
    };
    let section = CosetSection::with_policy(&h, k, policy)?;
    let orbit_size = w.order() / stabilizer.order();
    let twists: Vec<Option<&AbelianCharacter>> =
        if stab_chars.is_empty() { vec![None] } else { stab_chars.iter().map(Some).collect() };
    let mut out = Vec::new();
    for chi in twists {
        let twist = chi.map(AbelianCharacter::signed_exponents).unwrap_or_default();
        let label = child_label(rho.label(), twist);
        let pi = MatrixRep::from_fn(&h, rho.dim(), label, |a| {
            let (x, s) = decompose[a].expect("member of h");
            let m = rho.at(x).mul(family.at(s));
            match chi {
                Some(c) => m.scale(c.value(s)),
                None => m,
            }
        });
        let character = pi.character();
        let induced = induce(&pi, &section)?;
        out.push(DualEntry {
            rep: induced,
            inducing: InducingData { subgroup: h.clone(), character },
            orbit_size,
            stabilizer_order: stabilizer.order(),
        });
    }
    Ok(out)
}

/// Irreducibles of `k = n ⋊ w` from a complete list of irreducibles of `n`.
pub fn level_dual(
    k: &Subgroup,
    w: &Subgroup,
    irreps: &[MatrixRep],
    policy: SectionPolicy,
) -> Result<Vec<DualEntry>, MackeyError> {
    let decomposition = orbit_decomposition(irreps, w)?;
    let mut out = Vec::new();
    for orbit in &decomposition.orbits {
        out.extend(classical_method_with_stabilizer(k, w, &irreps[orbit.representative], &orbit.stabilizer, policy)?);
    }
    Ok(out)
}

/// Labelled characters of the abelian bottom layer as one-dimensional entries.
pub fn abelian_entries(u: &Subgroup, symbol: &str) -> Result<Vec<DualEntry>, MackeyError> {
    Ok(abelian_dual(u)?
        .iter()
        .map(|c| {
            let rep = c.to_rep(RepLabel::new(symbol, c.signed_exponents(), vec![]));
            let character = rep.character();
            DualEntry {
                rep,
                inducing: InducingData { subgroup: u.clone(), character },
                orbit_size: 1,
                stabilizer_order: 1,
            }
        })
        .collect())
}

/// Fails unless the entries are orthonormal, as many as the classes, and satisfy
/// `sum dim^2 = |K|`.
pub fn check_complete(k: &Subgroup, reps: &[&MatrixRep]) -> Result<(), MackeyError> {
    let burnside: usize = reps.iter().map(|r| r.dim() * r.dim()).sum();
    let classes = k.conjugacy_classes().len();
    if burnside != k.order() || reps.len() != classes {
        return Err(MackeyError::Incomplete { burnside, order: k.order(), count: reps.len(), classes });
    }
    let chars: Vec<ClassFunction> = reps.iter().map(|r| r.character()).collect();
    for (i, a) in chars.iter().enumerate() {
        for (j, b) in chars.iter().enumerate().skip(i) {
            let expected = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
            if a.inner_product(b)? != expected {
                return Err(MackeyError::NotOrthonormal(reps[i].label().to_string(), reps[j].label().to_string()));
            }
        }
    }
    Ok(())
}

/// Complete dual of the tower's group, verified level by level.
pub fn full_dual(tower: &Tower, policy: SectionPolicy) -> Result<Vec<DualEntry>, MackeyError> {
    let mut entries = abelian_entries(tower.abelian(), "Pi")?;
    for (level, w) in tower.levels()[1..].iter().zip(tower.complements()) {
        let irreps: Vec<MatrixRep> = entries.iter().map(|e| e.rep.clone()).collect();
        entries = level_dual(level, w, &irreps, policy)?;
        check_complete(level, &entries.iter().map(|e| &e.rep).collect::<Vec<_>>())?;
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_document;

    const G18: &str = "group g18_4; gen x1 3; gen x2 3; gen w 2; swap x2 x1 = x1 x2; \
        swap w x1 = x1^2 w; swap w x2 = x2^2 w; tower U: x1 x2 | W: w;";
    const R54: &str = "group r54_8; gen z 3; gen x1 3; gen x2 3; gen w 2; swap x2 x1 = z^2 x1 x2; \
        swap w x1 = x1^2 w; swap w x2 = x2^2 w; swap x1 z = z x1; swap x2 z = z x2; swap w z = z w; \
        tower U: z x1 | W: x2 | W: w;";

    fn tower(src: &str) -> Tower {
        let doc = parse_document(src).unwrap();
        let g = PcGroup::new(doc.presentation).unwrap();
        Tower::new(&g, &doc.tower.unwrap()).unwrap()
    }

    fn w(k: i64) -> Cyclotomic {
        Cyclotomic::omega_pow(k)
    }

    #[test]
    fn abelian_duals() {
        let t = tower(G18);
        let dual = abelian_dual(t.abelian()).unwrap();
        assert_eq!(dual.len(), 9);
        assert_eq!(dual[5].exponents(), &[1, 2]);
        assert_eq!(dual[5].signed_exponents(), vec![1, -1]);
        let g = t.group();
        assert_eq!(dual[5].value(g.generator(1)), &w(2));
        let trivial = Subgroup::trivial(g);
        assert_eq!(abelian_dual(&trivial).unwrap().len(), 1);
        assert_eq!(abelian_dual(&Subgroup::whole(g)).unwrap_err(), MackeyError::NotAbelian);
    }

    #[test]
    fn orbits_on_the_abelian_dual() {
        let t = tower(G18);
        let reps: Vec<MatrixRep> = abelian_entries(t.abelian(), "Pi").unwrap().into_iter().map(|e| e.rep).collect();
        let d = orbit_decomposition(&reps, &t.complements()[0]).unwrap();
        let sizes: Vec<usize> = d.orbits.iter().map(|o| o.members.len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 2]);
        assert_eq!(d.orbits[0].stabilizer.order(), 2);
        let trivial = Subgroup::trivial(t.group());
        assert!(orbit_decomposition(&reps, &trivial).unwrap().orbits.iter().all(|o| o.members.len() == 1));
    }

    #[test]
    fn dual_of_g18_matches_the_induced_matrices() {
        let t = tower(G18);
        let dual = full_dual(&t, SectionPolicy::Balanced).unwrap();
        let labels: Vec<String> = dual.iter().map(|e| e.rep.label().to_string()).collect();
        assert_eq!(labels, vec!["Pi(0,0;0)", "Pi(0,0;1)", "Pi(0,1)", "Pi(1,0)", "Pi(1,1)", "Pi(1,-1)"]);
        let g = t.group();
        let pi11 = &dual[4].rep;
        assert_eq!(*pi11.at(g.generator(0)), CycMatrix::from_diagonal(&[w(1), w(-1)]));
        assert_eq!(*pi11.at(g.generator(2)), CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]]));
        for e in &dual {
            assert!(e.rep.verify_homomorphism().passed);
            assert_eq!(e.rep.character(), induced_character(e.rep.domain(), &e.inducing.character));
        }
    }

    #[test]
    fn section_policies() {
        let t = tower(R54);
        let g = t.group();
        let (u0, h0) = (&t.levels()[0], &t.levels()[1]);
        let x2 = g.generator(2);
        let bal = CosetSection::with_policy(u0, h0, SectionPolicy::Balanced).unwrap();
        assert_eq!(bal.representatives(), &[g.inv(x2), 0, x2]);
        let lex = CosetSection::with_policy(u0, h0, SectionPolicy::Lexicographic).unwrap();
        assert_eq!(lex.representatives(), &[0, x2, g.mul(x2, x2)]);
        assert!(CosetSection::new(u0, h0, vec![0, x2, x2]).is_err());
        // identity coset represented by z instead of the identity
        assert!(CosetSection::new(u0, h0, vec![g.generator(0), x2, g.inv(x2)]).is_err());
    }

    #[test]
    fn induction_on_h0_gives_the_permutation_realization() {
        let t = tower(R54);
        let g = t.group().clone();
        let (u0, h0) = (&t.levels()[0], &t.levels()[1]);
        let rho = abelian_entries(u0, "Pi").unwrap().into_iter().find(|e| e.rep.label().params == [1, 0]).unwrap().rep;
        let x2 = g.generator(2);
        let section = CosetSection::new(u0, h0, vec![g.inv(x2), 0, x2]).unwrap();
        let q = induce(&rho, &section).unwrap();
        assert!(q.verify_homomorphism().passed);
        assert!(q.is_irreducible());
        assert_eq!(*q.at(g.generator(0)), CycMatrix::scalar(3, &w(1)));
        assert_eq!(*q.at(x2), CycMatrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
        assert_eq!(*q.at(g.generator(1)), CycMatrix::from_diagonal(&[w(1), Cyclotomic::one(), w(-1)]));
    }

    #[test]
    fn intertwiner_for_the_involution() {
        let t = tower(R54);
        let g = t.group().clone();
        let irreps: Vec<MatrixRep> =
            abelian_entries(&t.levels()[0], "Pi").unwrap().into_iter().map(|e| e.rep).collect();
        let h0_dual = level_dual(&t.levels()[1], &t.complements()[0], &irreps, SectionPolicy::Balanced).unwrap();
        let q = h0_dual.iter().find(|e| e.rep.dim() == 3).unwrap();
        let j = solve_intertwiner(&q.rep, g.generator(3)).unwrap();
        assert_eq!(j.mul(&j), CycMatrix::identity(3));
        assert_eq!(solve_intertwiner(&q.rep, 0).unwrap(), CycMatrix::identity(3));
        assert_eq!(intertwiner_space(&q.rep, 0).len(), 1);
        let family = IntertwinerFamily::new(&q.rep, &t.complements()[1]).unwrap();
        assert!(family.factor_set().unwrap().is_trivial());
        assert!(family.factor_set().unwrap().verify_cocycle());
    }

    #[test]
    fn roots_and_normalization() {
        let roots = scalar_roots(&Cyclotomic::one(), 2).unwrap();
        assert_eq!(roots, vec![Cyclotomic::one(), Cyclotomic::from_integer(-1)]);
        let roots = scalar_roots(&Cyclotomic::from_integer(4), 2).unwrap();
        assert_eq!(roots[0], Cyclotomic::from_integer(2));
        assert!(scalar_roots(&Cyclotomic::from_integer(2), 2).is_none());
        let roots = scalar_roots(&w(1), 3).unwrap();
        assert!(roots.iter().all(|r| r.pow(3) == w(1)));
        assert_eq!(roots[0], Cyclotomic::root_of_unity(9, 1));
    }

    #[test]
    fn full_dual_of_the_representation_group() {
        let t = tower(R54);
        let dual = full_dual(&t, SectionPolicy::Balanced).unwrap();
        assert_eq!(dual.len(), 10);
        let dims: usize = dual.iter().map(|e| e.rep.dim() * e.rep.dim()).sum();
        assert_eq!(dims, 54);
        let z = t.group().generator(0);
        let spin = dual.iter().filter(|e| !e.rep.spin_type(z).unwrap().is_linear()).count();
        assert_eq!(spin, 4);
    }

    #[test]
    fn bad_towers_are_rejected() {
        let doc = parse_document(G18).unwrap();
        let g = PcGroup::new(doc.presentation).unwrap();
        let spec = |a: &[&str], w: &[&[&str]]| TowerSpec {
            abelian: a.iter().map(|s| s.to_string()).collect(),
            complements: w.iter().map(|l| l.iter().map(|s| s.to_string()).collect()).collect(),
        };
        assert!(matches!(Tower::new(&g, &spec(&["x1", "w"], &[])), Err(MackeyError::BadTower(_))));
        assert!(matches!(Tower::new(&g, &spec(&["w"], &[&["x1", "x2"]])), Err(MackeyError::BadTower(_))));
        assert!(matches!(Tower::new(&g, &spec(&["x1"], &[&["w"]])), Err(MackeyError::BadTower(_))));
    }
}
