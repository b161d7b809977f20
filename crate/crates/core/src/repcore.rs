//! Matrix representations of subgroups of a [`PcGroup`], their characters,
//! and projective representations obtained by restricting along a section.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::Cyclotomic;
use crate::matrix::CycMatrix;
use crate::pcgroup::{CentralExtension, GroupElement, PcGroup, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("representations live on different domains")]
    DomainMismatch,
    #[error("matrix size {got} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no image given for generator `{0}`")]
    MissingImage(String),
    #[error("element {0} is outside the domain")]
    OutsideDomain(GroupElement),
    #[error("representation is not scalar on kernel element {0}")]
    NotScalarOnKernel(GroupElement),
    #[error("invalid section: {0}")]
    BadSection(String),
}

/// Structured name of a representation: `symbol(params;twist)`.
///
/// `params` are signed residues; `twist` is empty when no stabilizer character
/// was involved.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RepLabel {
    pub symbol: String,
    pub params: Vec<i32>,
    pub twist: Vec<i32>,
}

impl RepLabel {
    pub fn new(symbol: impl Into<String>, params: Vec<i32>, twist: Vec<i32>) -> Self {
        RepLabel { symbol: symbol.into(), params, twist }
    }

    /// Parses the display form, e.g. `Pi(1,-1)`, `Pi(0,0;1)`, `R(1;0)`.
    pub fn parse(s: &str) -> Option<RepLabel> {
        let (symbol, rest) = s.trim().split_once('(')?;
        let inner = rest.strip_suffix(')')?;
        let (p, t) = inner.split_once(';').unwrap_or((inner, ""));
        let ints = |x: &str| -> Option<Vec<i32>> {
            x.split(',').filter(|v| !v.trim().is_empty()).map(|v| v.trim().parse().ok()).collect()
        };
        Some(RepLabel { symbol: symbol.to_string(), params: ints(p)?, twist: ints(t)? })
    }
}

impl fmt::Display for RepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i32]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        if self.twist.is_empty() {
            write!(f, "{}({})", self.symbol, join(&self.params))
        } else {
            write!(f, "{}({};{})", self.symbol, join(&self.params), join(&self.twist))
        }
    }
}

/// Signed residue of `e` modulo `n`, in `(-n/2, n/2]`.
pub fn signed_residue(e: i64, n: u32) -> i32 {
    let n = n as i64;
    let r = e.rem_euclid(n);
    (if 2 * r > n { r - n } else { r }) as i32
}

/// A representation given by one matrix per member of its domain.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    domain: Subgroup,
    dim: usize,
    matrices: Vec<CycMatrix>,
    label: RepLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomomorphismReport {
    pub passed: bool,
    pub pairs_checked: usize,
    pub witness: Option<(GroupElement, GroupElement)>,
}

impl MatrixRep {
    /// Images of pc generators, extended along normal forms:
    /// `g_1^e_1 ... g_k^e_k -> M_1^e_1 ... M_k^e_k`.
    ///
    /// Every member of `domain` must use only generators present in `images`.
    pub fn from_pc_images(
        domain: &Subgroup,
        images: &[(usize, CycMatrix)],
        label: RepLabel,
    ) -> Result<MatrixRep, RepError> {
        let dim = images.first().map_or(1, |(_, m)| m.rows());
        for (_, m) in images {
            if m.rows() != dim || m.cols() != dim {
                return Err(RepError::DimensionMismatch { expected: dim, got: m.rows() });
            }
        }
        let group = domain.group();
        let mut matrices = Vec::with_capacity(domain.order());
        for &a in domain.members() {
            let mut acc = CycMatrix::identity(dim);
            for (g, e) in group.element(a).syllables() {
                let m = images
                    .iter()
                    .find(|(h, _)| *h == g)
                    .map(|(_, m)| m)
                    .ok_or_else(|| RepError::MissingImage(group.presentation().generators()[g].clone()))?;
                acc = acc.mul(&m.pow(e));
            }
            matrices.push(acc);
        }
        Ok(MatrixRep { domain: domain.clone(), dim, matrices, label })
    }

    /// Matrices given as a function of the member index.
    pub fn from_fn(domain: &Subgroup, dim: usize, label: RepLabel, f: impl Fn(usize) -> CycMatrix) -> MatrixRep {
        let matrices = domain.members().iter().map(|&a| f(a)).collect();
        MatrixRep { domain: domain.clone(), dim, matrices, label }
    }

    pub fn trivial(domain: &Subgroup) -> MatrixRep {
        Self::from_fn(domain, 1, RepLabel::new("1", vec![], vec![]), |_| CycMatrix::identity(1))
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn group(&self) -> &Arc<PcGroup> {
        self.domain.group()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &RepLabel {
        &self.label
    }

    pub fn with_label(mut self, label: RepLabel) -> Self {
        self.label = label;
        self
    }

    /// Matrix at a group element index; panics outside the domain.
    pub fn at(&self, a: usize) -> &CycMatrix {
        &self.matrices[self.domain.position(a).expect("element outside the domain")]
    }

    pub fn evaluate(&self, e: &GroupElement) -> Result<&CycMatrix, RepError> {
        self.group()
            .index_of(e)
            .and_then(|a| self.domain.position(a))
            .map(|p| &self.matrices[p])
            .ok_or_else(|| RepError::OutsideDomain(e.clone()))
    }

    /// Checks `R(a) R(b) = R(ab)`, first on generator pairs, then on all pairs.
    pub fn verify_homomorphism(&self) -> HomomorphismReport {
        let g = self.group();
        let gens = self.domain.generators();
        let pairs = gens
            .iter()
            .flat_map(|&a| gens.iter().map(move |&b| (a, b)))
            .chain(self.domain.members().iter().flat_map(|&a| self.domain.members().iter().map(move |&b| (a, b))));
        let mut checked = 0;
        for (a, b) in pairs {
            checked += 1;
            if self.at(a).mul(self.at(b)) != *self.at(g.mul(a, b)) {
                return HomomorphismReport {
                    passed: false,
                    pairs_checked: checked,
                    witness: Some((g.element(a).clone(), g.element(b).clone())),
                };
            }
        }
        HomomorphismReport { passed: true, pairs_checked: checked, witness: None }
    }

    pub fn character(&self) -> ClassFunction {
        let classes = Arc::new(ClassPartition::of(&self.domain));
        let values = classes.classes.iter().map(|c| self.at(c[0]).trace()).collect();
        ClassFunction { classes, values }
    }

    pub fn is_irreducible(&self) -> bool {
        let chi = self.character();
        chi.inner_product(&chi).map(|v| v.is_one()).unwrap_or(false)
    }

    pub fn are_equivalent(&self, other: &MatrixRep) -> bool {
        self.domain == other.domain && self.character() == other.character()
    }

    /// Kronecker product on each element.
    pub fn boxdot(&self, other: &MatrixRep) -> Result<MatrixRep, RepError> {
        if self.domain != other.domain {
            return Err(RepError::DomainMismatch);
        }
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| a.kron(b)).collect();
        Ok(MatrixRep { domain: self.domain.clone(), dim: self.dim * other.dim, matrices, label: self.label.clone() })
    }

    pub fn direct_sum(&self, other: &MatrixRep) -> Result<MatrixRep, RepError> {
        if self.domain != other.domain {
            return Err(RepError::DomainMismatch);
        }
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| a.direct_sum(b)).collect();
        Ok(MatrixRep { domain: self.domain.clone(), dim: self.dim + other.dim, matrices, label: self.label.clone() })
    }

    pub fn restrict(&self, sub: &Subgroup) -> Result<MatrixRep, RepError> {
        if !sub.is_subgroup_of(&self.domain) {
            return Err(RepError::DomainMismatch);
        }
        Ok(MatrixRep::from_fn(sub, self.dim, self.label.clone(), |a| self.at(a).clone()))
    }

    /// `n -> R(w^-1 n w)`, defined when `w` normalizes the domain.
    pub fn conjugate_by(&self, w: usize) -> MatrixRep {
        let g = self.group().clone();
        let wi = g.inv(w);
        MatrixRep::from_fn(&self.domain, self.dim, self.label.clone(), |n| self.at(g.conjugate(wi, n)).clone())
    }

    /// Pulls a representation of `ext.base` back to `ext.cover`.
    pub fn lift(&self, ext: &CentralExtension) -> Result<MatrixRep, RepError> {
        if !Arc::ptr_eq(self.group(), &ext.base) || !self.domain.is_whole() {
            return Err(RepError::DomainMismatch);
        }
        let whole = Subgroup::whole(&ext.cover);
        Ok(MatrixRep::from_fn(&whole, self.dim, self.label.clone(), |a| self.at(ext.project(a)).clone()))
    }

    /// Central character at `z`, when `R(z)` is a scalar root of unity.
    pub fn spin_type(&self, z: usize) -> Option<SpinType> {
        SpinType::read(self, z)
    }
}

/// Conjugacy classes of a domain, with a lookup from member position to class.
#[derive(Debug, PartialEq, Eq)]
pub struct ClassPartition {
    domain: Subgroup,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ClassPartition {
    pub fn of(domain: &Subgroup) -> Self {
        let classes = domain.conjugacy_classes();
        let mut class_of = vec![0; domain.order()];
        for (c, members) in classes.iter().enumerate() {
            for &m in members {
                class_of[domain.position(m).expect("class member in domain")] = c;
            }
        }
        ClassPartition { domain: domain.clone(), classes, class_of }
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn class_index(&self, a: usize) -> Option<usize> {
        self.domain.position(a).map(|p| self.class_of[p])
    }
}

/// Values on conjugacy classes, ordered by class representative.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    classes: Arc<ClassPartition>,
    values: Vec<Cyclotomic>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.classes.domain == other.classes.domain && self.values == other.values
    }
}

impl ClassFunction {
    /// Class function from a value per element; `None` if not constant on classes.
    pub fn from_fn(domain: &Subgroup, f: impl Fn(usize) -> Cyclotomic) -> Option<ClassFunction> {
        let classes = Arc::new(ClassPartition::of(domain));
        let mut values = Vec::with_capacity(classes.classes.len());
        for c in &classes.classes {
            let v = f(c[0]);
            if c[1..].iter().any(|&m| f(m) != v) {
                return None;
            }
            values.push(v);
        }
        Some(ClassFunction { classes, values })
    }

    pub fn partition(&self) -> &ClassPartition {
        &self.classes
    }

    pub fn domain(&self) -> &Subgroup {
        &self.classes.domain
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    /// Value at any element of the domain, through its class.
    pub fn value(&self, a: usize) -> Option<&Cyclotomic> {
        self.classes.class_index(a).map(|c| &self.values[c])
    }

    /// `(1/|G|) sum_x f(x) conj(g(x))`.
    pub fn inner_product(&self, other: &ClassFunction) -> Result<Cyclotomic, RepError> {
        if self.domain() != other.domain() {
            return Err(RepError::DomainMismatch);
        }
        let sum: Cyclotomic = self
            .classes
            .classes
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(c, (a, b))| (a * &b.conj()).scale(&BigRational::from_integer((c.len() as i64).into())))
            .sum();
        Ok(sum.scale(&BigRational::new(1.into(), (self.domain().order() as i64).into())))
    }

    pub fn degree(&self) -> &Cyclotomic {
        &self.values[0]
    }
}

/// Central character `z^a -> w^(eps a)` of a representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinType {
    pub central_element: GroupElement,
    pub central_order: u32,
    /// Signed residue modulo `central_order`.
    pub epsilon: i32,
    /// Scalars at `z^0, z^1, ...`.
    pub values: Vec<Cyclotomic>,
}

impl SpinType {
    fn read(rep: &MatrixRep, z: usize) -> Option<SpinType> {
        let g = rep.group();
        let d = g.element_order(z);
        let c = rep.at(z).as_scalar()?;
        let (n, k) = c.as_root_of_unity()?;
        if !d.is_multiple_of(n) {
            return None;
        }
        let eps = signed_residue((k * (d / n)) as i64, d);
        let values = (0..d).map(|a| rep.at(g.pow(z, a)).as_scalar()).collect::<Option<Vec<_>>>()?;
        Some(SpinType { central_element: g.element(z).clone(), central_order: d, epsilon: eps, values })
    }

    pub fn is_linear(&self) -> bool {
        self.epsilon == 0
    }
}

/// Scalar 2-cocycle table `r[g][h]` over a group, indexed by member positions.
#[derive(Clone, Debug)]
pub struct FactorSet {
    domain: Subgroup,
    table: Vec<Cyclotomic>,
}

impl FactorSet {
    pub fn from_fn(domain: &Subgroup, f: impl Fn(usize, usize) -> Cyclotomic) -> FactorSet {
        let m = domain.members();
        let table = m.iter().flat_map(|&a| m.iter().map(move |&b| (a, b))).map(|(a, b)| f(a, b)).collect();
        FactorSet { domain: domain.clone(), table }
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn value(&self, g: usize, h: usize) -> &Cyclotomic {
        let n = self.domain.order();
        let (i, j) = (self.domain.position(g).expect("in domain"), self.domain.position(h).expect("in domain"));
        &self.table[i * n + j]
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.table
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(Cyclotomic::is_one)
    }

    /// First triple violating `r(g,h) r(gh,k) = r(h,k) r(g,hk)`, if any.
    pub fn cocycle_witness(&self) -> Option<(GroupElement, GroupElement, GroupElement)> {
        let grp = self.domain.group();
        let m = self.domain.members();
        for &g in m {
            for &h in m {
                let gh = grp.mul(g, h);
                for &k in m {
                    let lhs = self.value(g, h) * self.value(gh, k);
                    let rhs = self.value(h, k) * self.value(g, grp.mul(h, k));
                    if lhs != rhs {
                        return Some((grp.element(g).clone(), grp.element(h).clone(), grp.element(k).clone()));
                    }
                }
            }
        }
        None
    }

    pub fn verify_cocycle(&self) -> bool {
        self.cocycle_witness().is_none()
    }

    pub fn values_are_roots_of_unity(&self) -> bool {
        self.table.iter().all(|v| v.as_root_of_unity().is_some())
    }
}

/// Matrices `pi(g)` with `pi(g) pi(h) = r(g,h) pi(gh)`.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    base: Subgroup,
    matrices: Vec<CycMatrix>,
    factor_set: FactorSet,
}

impl ProjectiveRep {
    pub fn base(&self) -> &Subgroup {
        &self.base
    }

    pub fn at(&self, g: usize) -> &CycMatrix {
        &self.matrices[self.base.position(g).expect("in base")]
    }

    pub fn factor_set(&self) -> &FactorSet {
        &self.factor_set
    }

    /// Exhaustive check of the defining relation against the stored factor set.
    pub fn verify(&self) -> bool {
        let grp = self.base.group();
        let m = self.base.members();
        m.iter().all(|&g| {
            m.iter().all(|&h| self.at(g).mul(self.at(h)) == self.at(grp.mul(g, h)).scale(self.factor_set.value(g, h)))
        })
    }
}

/// Restricts a representation of the cover along `section` (base index -> cover index).
///
/// The factor set is `r(g,h) = R(s(g) s(h) s(gh)^-1)`, read as a scalar.
pub fn sectional_restriction(
    rep: &MatrixRep,
    ext: &CentralExtension,
    section: &[usize],
) -> Result<ProjectiveRep, RepError> {
    if !Arc::ptr_eq(rep.group(), &ext.cover) || !rep.domain().is_whole() {
        return Err(RepError::DomainMismatch);
    }
    let (h, g) = (&ext.cover, &ext.base);
    if section.len() != g.order() {
        return Err(RepError::BadSection(format!("expected {} images, got {}", g.order(), section.len())));
    }
    for (b, &s) in section.iter().enumerate() {
        if s >= h.order() || ext.project(s) != b {
            return Err(RepError::BadSection(format!("image of {} does not project back", g.element(b))));
        }
    }
    let mut scalar_at = vec![None; h.order()];
    for &k in ext.kernel.members() {
        let c = rep.at(k).as_scalar().ok_or_else(|| RepError::NotScalarOnKernel(h.element(k).clone()))?;
        scalar_at[k] = Some(c);
    }
    let base = Subgroup::whole(g);
    let factor_set = FactorSet::from_fn(&base, |a, b| {
        let z = h.mul(h.mul(section[a], section[b]), h.inv(section[g.mul(a, b)]));
        scalar_at[z].clone().expect("section defect lies in the kernel")
    });
    let matrices = base.members().iter().map(|&b| rep.at(section[b]).clone()).collect();
    Ok(ProjectiveRep { base, matrices, factor_set })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::{one_step_extension, PcPresentation};

    fn w(k: i64) -> Cyclotomic {
        Cyclotomic::omega_pow(k)
    }

    fn g18() -> Arc<PcGroup> {
        let mut p = PcPresentation::new("g18_4");
        p.add_generator("x1", 3).unwrap();
        p.add_generator("x2", 3).unwrap();
        p.add_generator("w", 2).unwrap();
        p.set_swap_rule(2, 0, GroupElement::new(vec![2, 0, 1])).unwrap();
        p.set_swap_rule(2, 1, GroupElement::new(vec![0, 2, 1])).unwrap();
        PcGroup::new(p).unwrap()
    }

    fn pi(g: &Arc<PcGroup>, m1: i64, m2: i64, w_image: CycMatrix) -> MatrixRep {
        let images = vec![
            (0, CycMatrix::from_diagonal(&[w(m1), w(-m1)])),
            (1, CycMatrix::from_diagonal(&[w(m2), w(-m2)])),
            (2, w_image),
        ];
        MatrixRep::from_pc_images(&Subgroup::whole(g), &images, RepLabel::new("Pi", vec![m1 as i32, m2 as i32], vec![]))
            .unwrap()
    }

    fn swap2() -> CycMatrix {
        CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]])
    }

    fn sign(g: &Arc<PcGroup>, k: i64) -> MatrixRep {
        let images = vec![
            (0, CycMatrix::identity(1)),
            (1, CycMatrix::identity(1)),
            (2, CycMatrix::scalar(1, &Cyclotomic::from_integer((-1i64).pow(k as u32)))),
        ];
        MatrixRep::from_pc_images(&Subgroup::whole(g), &images, RepLabel::new("Pi", vec![0, 0], vec![k as i32]))
            .unwrap()
    }

    #[test]
    fn labels_round_trip() {
        for s in ["Pi(1,-1)", "Pi(0,0;1)", "R(1;0)", "1()"] {
            assert_eq!(RepLabel::parse(s).unwrap().to_string(), s);
        }
        assert!(RepLabel::new("Pi", vec![0, 0], vec![1]) < RepLabel::new("Pi", vec![1, -1], vec![]));
        assert_eq!(signed_residue(2, 3), -1);
        assert_eq!(signed_residue(1, 2), 1);
    }

    #[test]
    fn two_dimensional_irrep() {
        let g = g18();
        let p = pi(&g, 1, 1, swap2());
        assert!(p.verify_homomorphism().passed);
        let x1 = GroupElement::new(vec![1, 0, 0]);
        assert_eq!(*p.evaluate(&x1).unwrap(), CycMatrix::from_diagonal(&[w(1), w(2)]));
        let chi = p.character();
        assert_eq!(chi.value(g.generator(0)).unwrap(), &Cyclotomic::from_integer(-1));
        assert_eq!(chi.value(g.generator(2)).unwrap(), &Cyclotomic::zero());
        assert_eq!(chi.inner_product(&chi).unwrap(), Cyclotomic::one());
        assert!(p.is_irreducible());
        let doubled = p.direct_sum(&p).unwrap();
        assert_eq!(doubled.character().inner_product(&doubled.character()).unwrap(), Cyclotomic::from_integer(4));
        assert!(!doubled.is_irreducible());
    }

    #[test]
    fn corrupted_image_has_witness() {
        let g = g18();
        let bad = pi(&g, 1, 1, CycMatrix::identity(2));
        let r = bad.verify_homomorphism();
        assert!(!r.passed);
        assert_eq!(r.witness, Some((GroupElement::new(vec![0, 0, 1]), GroupElement::new(vec![1, 0, 0]))));
    }

    #[test]
    fn equivalence_and_boxdot() {
        let g = g18();
        let p = pi(&g, 1, 1, swap2());
        let conj = p.conjugate_by(g.generator(2));
        assert!(conj.are_equivalent(&pi(&g, -1, -1, swap2())));
        assert!(p.are_equivalent(&p));
        assert!(!p.are_equivalent(&pi(&g, 1, 0, swap2())));
        let (s0, s1) = (sign(&g, 0), sign(&g, 1));
        assert_eq!(s0.character().inner_product(&s1.character()).unwrap(), Cyclotomic::zero());
        let t = p.boxdot(&s0).unwrap();
        assert_eq!(t.character(), p.character());
        let twisted = p.boxdot(&s1).unwrap();
        for c in 0..g.order() {
            assert_eq!(
                twisted.character().value(c).unwrap(),
                &(p.character().value(c).unwrap() * s1.character().value(c).unwrap())
            );
        }
        assert!(MatrixRep::trivial(&Subgroup::whole(&g)).is_irreducible());
    }

    #[test]
    fn regular_character_norm() {
        let g = g18();
        let whole = Subgroup::whole(&g);
        let n = g.order() as i64;
        let reg = ClassFunction::from_fn(&whole, |a| Cyclotomic::from_integer(if a == 0 { n } else { 0 })).unwrap();
        assert_eq!(reg.inner_product(&reg).unwrap(), Cyclotomic::from_integer(n));
        assert!(ClassFunction::from_fn(&whole, |a| Cyclotomic::from_integer(a as i64)).is_none());
    }

    #[test]
    fn sectional_restriction_of_linear_type_is_untwisted() {
        let g = g18();
        let ext = one_step_extension(g.presentation(), "x1", "x2").unwrap();
        let ce = CentralExtension::from_one_step(&ext, g.clone()).unwrap();
        let lifted = pi(&g, 1, 0, swap2()).lift(&ce).unwrap();
        assert!(lifted.verify_homomorphism().passed);
        assert!(lifted.spin_type(ce.central_generator).unwrap().is_linear());
        let proj = sectional_restriction(&lifted, &ce, &ce.normal_form_section()).unwrap();
        assert!(proj.factor_set().is_trivial());
        assert!(proj.verify());
        let bad_section = vec![0; g.order()];
        assert!(matches!(sectional_restriction(&lifted, &ce, &bad_section), Err(RepError::BadSection(_))));
    }
}
