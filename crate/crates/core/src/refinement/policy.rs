use crate::error::{Error, Result};

/// How the reduced (degree `p0`) coefficients are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// Truncate the full solution: `ũ_i = û_i` for `|i| ≤ p0`.
    #[default]
    SingleSystem,
    /// Evolve a separate degree-`p0` system alongside the full one.
    TwoSystem,
}

/// Full and reduced total degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedOrderPolicy {
    pub p: usize,
    pub p0: usize,
    pub variant: Variant,
}

impl ReducedOrderPolicy {
    /// `p0 = ⌈(p+1)/2⌉`, lowered to `p - 1` where that would not be below `p`.
    pub fn new(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidPolicy("full degree must be at least 1".into()));
        }
        let p0 = (p + 1).div_ceil(2).min(p - 1);
        Ok(Self {
            p,
            p0,
            variant: Variant::SingleSystem,
        })
    }

    pub fn with_p0(p: usize, p0: usize) -> Result<Self> {
        let policy = Self {
            p,
            p0,
            variant: Variant::SingleSystem,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.p0 >= self.p {
            return Err(Error::InvalidPolicy(format!(
                "reduced degree p0 = {} must be below p = {}",
                self.p0, self.p
            )));
        }
        Ok(())
    }
}

/// Directional criterion used to pick split dimensions when `d ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Criterion {
    /// Contribution of the degree-`p0` univariate basis function only.
    S1,
    /// Contribution of all univariate degrees `1..=p0`.
    #[default]
    S2,
}

/// What multiplies `∫|Q|` before it is compared with `TOL1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TriggerWeight {
    /// `∫|Q| · Prob(B_k)`.
    #[default]
    Probability,
    /// `∫|Q|` alone.
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Element trigger; `f64::INFINITY` disables refinement.
    pub tol1: f64,
    /// Directional trigger relative to the largest directional value.
    pub tol2: f64,
    pub criterion: Criterion,
    pub weight: TriggerWeight,
    pub max_depth: u32,
    pub max_elements: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol1: 1e-2,
            tol2: 0.1,
            criterion: Criterion::S2,
            weight: TriggerWeight::Probability,
            max_depth: 20,
            max_elements: 100_000,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.tol1.is_nan() || self.tol1 <= 0.0 {
            errs.push(format!("tol1 must be positive, got {}", self.tol1));
        }
        if !(self.tol2 > 0.0 && self.tol2 <= 1.0) {
            errs.push(format!("tol2 must lie in (0, 1], got {}", self.tol2));
        }
        if self.max_elements == 0 {
            errs.push("max_elements must be positive".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }

    pub fn refinement_enabled(&self) -> bool {
        self.tol1.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_reduced_degree() {
        for (p, p0) in [(3, 2), (5, 3), (7, 4), (9, 5), (11, 6), (13, 7)] {
            assert_eq!(ReducedOrderPolicy::new(p).unwrap().p0, p0);
        }
        assert_eq!(ReducedOrderPolicy::new(2).unwrap().p0, 1);
        assert_eq!(ReducedOrderPolicy::new(1).unwrap().p0, 0);
        assert!(ReducedOrderPolicy::new(0).is_err());
    }

    #[test]
    fn p0_must_be_below_p() {
        assert!(matches!(
            ReducedOrderPolicy::with_p0(5, 5),
            Err(Error::InvalidPolicy(_))
        ));
        assert!(ReducedOrderPolicy::with_p0(5, 4).is_ok());
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerances::default().validate().is_ok());
        let bad = Tolerances {
            tol1: -1.0,
            tol2: 0.0,
            ..Tolerances::default()
        };
        match bad.validate() {
            Err(Error::Config(errs)) => assert_eq!(errs.len(), 2),
            other => panic!("{other:?}"),
        }
        let off = Tolerances {
            tol1: f64::INFINITY,
            ..Tolerances::default()
        };
        assert!(off.validate().is_ok());
        assert!(!off.refinement_enabled());
    }
}
