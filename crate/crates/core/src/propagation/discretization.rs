use super::Mode;
use crate::basis::{BasisTable, MultiIndexSet, TensorRule};
use crate::models::Model;
use crate::random_space::Element;
use crate::refinement::{ReducedOrderPolicy, Variant};

/// Solution carried by one element.
///
/// In collocation mode `full` holds point-major nodal values on the full
/// rule (`values[j * s + c]`); in Galerkin mode it holds basis-major
/// coefficients (`coeffs[k * s + c]`). `reduced` is present only for the
/// two-system variant and uses the same layout at degree `p0` (nodal values on
/// the reduced rule, or the first `n0` coefficients).
#[derive(Debug, Clone, PartialEq)]
pub struct GpcState {
    mode: Mode,
    full: Vec<f64>,
    reduced: Option<Vec<f64>>,
}

impl GpcState {
    pub fn collocation(values: Vec<f64>, reduced: Option<Vec<f64>>) -> Self {
        Self {
            mode: Mode::Collocation,
            full: values,
            reduced,
        }
    }

    pub fn galerkin(coeffs: Vec<f64>, reduced: Option<Vec<f64>>) -> Self {
        Self {
            mode: Mode::Galerkin,
            full: coeffs,
            reduced,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn full(&self) -> &[f64] {
        &self.full
    }

    pub fn full_mut(&mut self) -> &mut [f64] {
        &mut self.full
    }

    pub fn reduced(&self) -> Option<&[f64]> {
        self.reduced.as_deref()
    }

    pub fn reduced_mut(&mut self) -> Option<&mut [f64]> {
        self.reduced.as_deref_mut()
    }
}

/// Basis, quadrature and tabulated basis values shared by every element.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub policy: ReducedOrderPolicy,
    pub mode: Mode,
    /// State components per realization (`n_vars * n_dof`).
    pub components: usize,
    pub set: MultiIndexSet,
    pub reduced_set: MultiIndexSet,
    /// Full rule, `r` points per dimension.
    pub rule: TensorRule,
    /// `set` on `rule`.
    pub table: BasisTable,
    /// Reduced rule, `p0 + 1` points per dimension.
    pub reduced_rule: TensorRule,
    /// `reduced_set` on `reduced_rule`.
    pub reduced_table: BasisTable,
}

impl Discretization {
    /// The policy is not validated here, so `p0 = p` can be probed directly.
    pub fn new(dim: usize, policy: ReducedOrderPolicy, r: usize, mode: Mode, components: usize) -> Self {
        let set = MultiIndexSet::total_degree(dim, policy.p);
        let reduced_set = MultiIndexSet::total_degree(dim, policy.p0);
        let rule = TensorRule::new(dim, r);
        let table = BasisTable::for_rule(&set, &rule);
        let reduced_rule = TensorRule::new(dim, policy.p0 + 1);
        let reduced_table = BasisTable::for_rule(&reduced_set, &reduced_rule);
        Self {
            policy,
            mode,
            components,
            set,
            reduced_set,
            rule,
            table,
            reduced_rule,
            reduced_table,
        }
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    pub fn two_system(&self) -> bool {
        self.policy.variant == Variant::TwoSystem
    }

    /// Initial state of `element`, sampled or projected from the model.
    pub fn initial_state<M: Model + ?Sized>(&self, model: &M, element: &Element) -> GpcState {
        let s = self.components;
        let sample = |rule: &TensorRule| {
            let mut out = vec![0.0; rule.len() * s];
            for j in 0..rule.len() {
                let xi = element.to_global(rule.node(j));
                model.initial_state(&xi, &mut out[j * s..(j + 1) * s]);
            }
            out
        };
        let values = sample(&self.rule);
        match self.mode {
            Mode::Collocation => {
                let reduced = self.two_system().then(|| sample(&self.reduced_rule));
                GpcState::collocation(values, reduced)
            }
            Mode::Galerkin => {
                let w = self.rule.weights();
                let reduced = self
                    .two_system()
                    .then(|| self.table.project(&values, w, self.reduced_set.len(), s));
                GpcState::galerkin(self.table.project(&values, w, self.set.len(), s), reduced)
            }
        }
    }

    /// Full coefficients `û`, basis-major.
    pub fn coefficients(&self, state: &GpcState) -> Vec<f64> {
        match state.mode {
            Mode::Collocation => self
                .table
                .project(&state.full, self.rule.weights(), self.set.len(), self.components),
            Mode::Galerkin => state.full.clone(),
        }
    }

    /// Reduced coefficients `ũ` of a co-evolved reduced system, if any.
    pub fn reduced_coefficients(&self, state: &GpcState) -> Option<Vec<f64>> {
        let r = state.reduced.as_ref()?;
        Some(match state.mode {
            Mode::Collocation => {
                self.reduced_table
                    .project(r, self.reduced_rule.weights(), self.reduced_set.len(), self.components)
            }
            Mode::Galerkin => r.clone(),
        })
    }

    /// Values at the nodes of the full rule.
    pub fn nodal_values(&self, state: &GpcState) -> Vec<f64> {
        match state.mode {
            Mode::Collocation => state.full.clone(),
            Mode::Galerkin => self.table.synthesize(&state.full, self.set.len(), self.components),
        }
    }

    /// Conditional first and second moments per component.
    pub fn conditional_moments(&self, state: &GpcState) -> (Vec<f64>, Vec<f64>) {
        let s = self.components;
        let values = self.nodal_values(state);
        let mut m1 = vec![0.0; s];
        let mut m2 = vec![0.0; s];
        for (j, &w) in self.rule.weights().iter().enumerate() {
            for c in 0..s {
                let v = values[j * s + c];
                m1[c] += w * v;
                m2[c] += w * v * v;
            }
        }
        (m1, m2)
    }
}
