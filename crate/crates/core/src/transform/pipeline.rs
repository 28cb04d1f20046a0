//! The scaled fractional powers `K₁, K₂, K₃` and the inversion pipelines that
//! undo the Sonine transform and its dual on Lizorkin witnesses.

use std::sync::Arc;

use super::{apply_multiplier, MultiplierSpec, TransformPlan};
use crate::error::{DunklError, Result};
use crate::grid::GridFunction;
use crate::report::IdentityReport;
use crate::sonine::{dual_sonine_apply, sonine_apply, SoninePair};
use crate::special::c_const;

/// Points where `|reference| < MASK · max |reference|` are left out of comparisons.
pub const MASK: f64 = 1e-3;

/// Plans for both indices of a pair, built on the same `x` and `λ` partitions.
#[derive(Debug, Clone)]
pub struct PlanPair {
    pub pair: SoninePair,
    pub alpha: Arc<TransformPlan>,
    pub beta: Arc<TransformPlan>,
}

impl PlanPair {
    pub fn new(pair: SoninePair, alpha: Arc<TransformPlan>, beta: Arc<TransformPlan>) -> Result<Self> {
        if alpha.alpha != pair.alpha || beta.alpha != pair.beta {
            return Err(DunklError::GridMismatch("plan orders do not match the pair".into()));
        }
        if alpha.config != beta.config {
            return Err(DunklError::GridMismatch("both plans must share one grid configuration".into()));
        }
        Ok(Self { pair, alpha, beta })
    }

    fn summary(&self) -> String {
        self.alpha.grid_summary()
    }

    /// `ᵗS g` for `g` on the β-grid, sampled on the α-grid.
    pub fn dual_sonine(&self, g: &GridFunction) -> Result<GridFunction> {
        g.check_same_grid(&GridFunction::zeros(self.beta.x_rule.clone()))?;
        GridFunction::try_sample(
            self.alpha.x_rule.clone(),
            |x| dual_sonine_apply(self.pair, g, x),
            g.smoothness,
        )
    }

    /// `S f` for `f` on the α-grid, sampled on the β-grid.
    pub fn sonine(&self, f: &GridFunction) -> Result<GridFunction> {
        f.check_same_grid(&GridFunction::zeros(self.alpha.x_rule.clone()))?;
        GridFunction::try_sample(self.beta.x_rule.clone(), |x| sonine_apply(self.pair, f, x), f.smoothness)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum KOperator {
    K1,
    K2,
    K3,
}

impl KOperator {
    /// Multiplier and the plan it acts on (`true` for the β-plan).
    fn spec(self, pair: SoninePair) -> (MultiplierSpec, bool) {
        let gap = pair.beta.value() - pair.alpha.value();
        let ratio = c_const(pair.beta) / c_const(pair.alpha);
        match self {
            KOperator::K1 => (MultiplierSpec { exponent: 2.0 * gap, scale: ratio }, false),
            KOperator::K2 => (MultiplierSpec { exponent: 2.0 * gap, scale: ratio }, true),
            KOperator::K3 => (MultiplierSpec { exponent: gap, scale: ratio.sqrt() }, false),
        }
    }
}

/// `K₁ = (c_β/c_α)(-Δ_α)^{β-α}`, `K₂ = (c_β/c_α)(-Δ_β)^{β-α}`, `K₃ = √(c_β/c_α)(-Δ_α)^{(β-α)/2}`.
///
/// The input must live on the grid of the matching plan.
pub fn k_operator(which: KOperator, plans: &PlanPair, f: &GridFunction) -> Result<GridFunction> {
    let (m, on_beta) = which.spec(plans.pair);
    let plan = if on_beta { &plans.beta } else { &plans.alpha };
    f.check_same_grid(&GridFunction::zeros(plan.x_rule.clone())).map_err(|_| {
        DunklError::GridMismatch(format!(
            "{which:?} acts on functions of index {}",
            plan.alpha.value()
        ))
    })?;
    Ok(apply_multiplier(plan, f, m)?.result)
}

fn report(name: &str, plans: &PlanPair, got: &GridFunction, want: &GridFunction) -> Result<IdentityReport> {
    let (abs, rel) = got.compare(want, MASK)?;
    Ok(IdentityReport::new(name)
        .param("alpha", plans.pair.alpha.value())
        .param("beta", plans.pair.beta.value())
        .grid(plans.summary())
        .with_errors(abs, rel))
}

/// `K₁(ᵗS g) = ᵗS(K₂ g)` for `g` on the β-grid.
pub fn commutation_check(plans: &PlanPair, g: &GridFunction) -> Result<IdentityReport> {
    let lhs = k_operator(KOperator::K1, plans, &plans.dual_sonine(g)?)?;
    let rhs = plans.dual_sonine(&k_operator(KOperator::K2, plans, g)?)?;
    report("lemma3", plans, &lhs, &rhs)
}

/// `g = S K₁ ᵗS g` for `g` on the β-grid.
pub fn inversion_a(plans: &PlanPair, g: &GridFunction) -> Result<IdentityReport> {
    let t = plans.dual_sonine(g)?;
    let back = plans.sonine(&k_operator(KOperator::K1, plans, &t)?)?;
    report("theorem3-a", plans, &back, g)
}

/// `f = ᵗS K₂ S f` for `f` on the α-grid.
pub fn inversion_b(plans: &PlanPair, f: &GridFunction) -> Result<IdentityReport> {
    let s = plans.sonine(f)?;
    let back = plans.dual_sonine(&k_operator(KOperator::K2, plans, &s)?)?;
    report("theorem3-b", plans, &back, f)
}

/// `f = K₁ ᵗS S f` for `f` on the α-grid.
pub fn inversion_c(plans: &PlanPair, f: &GridFunction) -> Result<IdentityReport> {
    let ts = plans.dual_sonine(&plans.sonine(f)?)?;
    let back = k_operator(KOperator::K1, plans, &ts)?;
    report("theorem3-c", plans, &back, f)
}

/// `g = K₂ S ᵗS g` for `g` on the β-grid.
pub fn inversion_d(plans: &PlanPair, g: &GridFunction) -> Result<IdentityReport> {
    let st = plans.sonine(&plans.dual_sonine(g)?)?;
    let back = k_operator(KOperator::K2, plans, &st)?;
    report("theorem3-d", plans, &back, g)
}

/// `∫|f|²|x|^{2β+1} dx = ∫|K₃ ᵗS f|²|x|^{2α+1} dx` for `f` on the β-grid.
pub fn plancherel_dual(plans: &PlanPair, f: &GridFunction) -> Result<IdentityReport> {
    let lhs = f.norm_sq();
    let rhs = k_operator(KOperator::K3, plans, &plans.dual_sonine(f)?)?.norm_sq();
    let mut r = IdentityReport::new("plancherel-dual")
        .param("alpha", plans.pair.alpha.value())
        .param("beta", plans.pair.beta.value())
        .grid(plans.summary());
    r.record((lhs - rhs).abs(), lhs);
    Ok(r)
}
