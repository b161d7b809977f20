use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GroupElement, GroupError, PcGroup, PcPresentation, Subgroup};

/// Presentation produced by [`one_step_extension`], before any consistency check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneStepExtension {
    pub presentation: PcPresentation,
    /// Index of the new central generator (always 0).
    pub central_generator: usize,
    /// Order of the new generator.
    pub degree: u32,
    pub pair: (String, String),
}

fn lift(e: &GroupElement) -> GroupElement {
    let mut v = Vec::with_capacity(e.exponents().len() + 1);
    v.push(0);
    v.extend_from_slice(e.exponents());
    GroupElement::new(v)
}

/// Replaces the commuting relation of `x`, `y` by `[x, y] = z` with `z` new and central.
///
/// `z` is placed first, has the common order `d` of `x` and `y`, and every old rule is
/// lifted with zero `z`-exponent. The result is not checked for consistency.
pub fn one_step_extension(base: &PcPresentation, x: &str, y: &str) -> Result<OneStepExtension, GroupError> {
    let xi = base.generator_index(x).ok_or_else(|| GroupError::UnknownGenerator(x.to_string()))?;
    let yi = base.generator_index(y).ok_or_else(|| GroupError::UnknownGenerator(y.to_string()))?;
    if xi == yi {
        return Err(GroupError::ExtensionRejected(format!("`{x}` and `{y}` are the same generator")));
    }
    let group = PcGroup::new(base.clone())?;
    let (gx, gy) = (group.generator(xi), group.generator(yi));
    if group.mul(gx, gy) != group.mul(gy, gx) {
        return Err(GroupError::ExtensionRejected(format!("`{x}` and `{y}` do not commute")));
    }
    let (dx, dy) = (group.element_order(gx), group.element_order(gy));
    if dx != dy {
        return Err(GroupError::ExtensionRejected(format!("`{x}` has order {dx} but `{y}` has order {dy}")));
    }
    let d = dx;

    let taken = |n: &str| base.generator_index(n).is_some();
    let name = if taken("z") { format!("z_{x}_{y}") } else { "z".to_string() };
    if taken(&name) {
        return Err(GroupError::DuplicateGenerator(name));
    }

    let mut h = PcPresentation::new(format!("{}_ext", base.name()));
    h.add_generator(name, d)?;
    for (g, &n) in base.generators().iter().zip(base.relative_orders()) {
        h.add_generator(g.clone(), n)?;
    }
    for (&g, w) in base.power_rules() {
        h.set_power_rule(g + 1, lift(w))?;
    }
    for (&(j, i), w) in base.swap_rules() {
        h.set_swap_rule(j + 1, i + 1, lift(w))?;
    }
    // x y = y x z; written with the later generator on the left
    let (later, earlier, z_exp) = if yi > xi { (yi, xi, d - 1) } else { (xi, yi, 1) };
    let mut rhs = vec![0; h.rank()];
    rhs[0] = z_exp;
    rhs[earlier + 1] = 1;
    rhs[later + 1] = 1;
    h.set_swap_rule(later + 1, earlier + 1, GroupElement::new(rhs))?;
    for g in 1..h.rank() {
        let mut rhs = vec![0; h.rank()];
        rhs[0] = 1;
        rhs[g] = 1;
        h.set_swap_rule(g, 0, GroupElement::new(rhs))?;
    }
    Ok(OneStepExtension { presentation: h, central_generator: 0, degree: d, pair: (x.to_string(), y.to_string()) })
}

/// A central extension `cover -> base` whose projection drops leading generators.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub cover: Arc<PcGroup>,
    pub base: Arc<PcGroup>,
    /// Image in `base` of each element index of `cover`.
    pub projection: Vec<usize>,
    pub kernel: Subgroup,
    pub central_generator: usize,
}

/// Outcome of the efficient-covering checks on a [`CentralExtension`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub cover_order: usize,
    pub base_order: usize,
    pub kernel_order: usize,
    pub projection_is_homomorphism: bool,
    pub kernel_is_generated_by_z: bool,
    pub z_in_center: bool,
    pub z_in_derived: bool,
    pub order_matches: bool,
}

impl EfficiencyReport {
    pub fn passed(&self) -> bool {
        self.projection_is_homomorphism
            && self.kernel_is_generated_by_z
            && self.z_in_center
            && self.z_in_derived
            && self.order_matches
    }
}

impl CentralExtension {
    /// Builds the cover group from a one-step extension; inconsistent lifts are reported.
    pub fn from_one_step(ext: &OneStepExtension, base: Arc<PcGroup>) -> Result<Self, GroupError> {
        let cover = PcGroup::new(ext.presentation.clone())?;
        Self::with_leading_kernel(cover, base, 1)
    }

    /// Projection forgets the first `dropped` coordinates of each exponent vector.
    pub fn with_leading_kernel(cover: Arc<PcGroup>, base: Arc<PcGroup>, dropped: usize) -> Result<Self, GroupError> {
        let mut projection = Vec::with_capacity(cover.order());
        for e in cover.elements() {
            let image = GroupElement::new(e.exponents()[dropped..].to_vec());
            let idx = base.index_of(&image).ok_or_else(|| GroupError::InvalidElement(image.exponents().to_vec()))?;
            projection.push(idx);
        }
        let kernel_members = (0..cover.order()).filter(|&a| projection[a] == base.identity());
        let kernel = Subgroup::from_members(&cover, kernel_members)
            .ok_or_else(|| GroupError::Inconsistent("projection kernel is not a subgroup".into()))?;
        Ok(CentralExtension { central_generator: cover.generator(0), cover, base, projection, kernel })
    }

    pub fn project(&self, a: usize) -> usize {
        self.projection[a]
    }

    /// Section of the projection: each base element lifts with zero leading exponents.
    pub fn normal_form_section(&self) -> Vec<usize> {
        let dropped = self.cover.presentation().rank() - self.base.presentation().rank();
        self.base
            .elements()
            .iter()
            .map(|e| {
                let mut v = vec![0; dropped];
                v.extend_from_slice(e.exponents());
                self.cover.index_of(&GroupElement::new(v)).expect("lifted normal form is valid")
            })
            .collect()
    }

    /// Exhaustive check of the efficient-covering conditions.
    pub fn verify(&self) -> EfficiencyReport {
        let (h, g) = (&self.cover, &self.base);
        let n = h.order();
        let projection_is_homomorphism = (0..n)
            .all(|a| (0..n).all(|b| self.projection[h.mul(a, b)] == g.mul(self.projection[a], self.projection[b])));
        let z = self.central_generator;
        let z_span = Subgroup::generated(h, vec![z]);
        let whole = Subgroup::whole(h);
        EfficiencyReport {
            cover_order: n,
            base_order: g.order(),
            kernel_order: self.kernel.order(),
            projection_is_homomorphism,
            kernel_is_generated_by_z: z_span == self.kernel,
            z_in_center: whole.center().contains(z),
            z_in_derived: whole.derived_subgroup().contains(z),
            order_matches: n == z_span.order() * g.order(),
        }
    }
}
