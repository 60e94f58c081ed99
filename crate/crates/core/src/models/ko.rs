use crate::models::Model;

/// Which random initial condition drives the three-mode system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KoSetup {
    /// `(1, 0.1 ξ, 0)`
    OneD,
    /// `(1, 0.1 ξ₁, ξ₂)`
    TwoD,
    /// `(ξ₁, ξ₂, ξ₃)`
    ThreeD,
}

/// Transformed Kraichnan-Orszag three-mode system
///
/// ```text
/// y1' =  y1 y3
/// y2' = -y2 y3
/// y3' = -y1² + y2²
/// ```
///
/// The product `y1 y2` is a first integral, and the map
/// `(y1, y2, y3) ↦ (y2, y1, -y3)` sends solutions to solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KraichnanOrszag {
    pub setup: KoSetup,
}

impl KraichnanOrszag {
    pub fn new(setup: KoSetup) -> Self {
        Self { setup }
    }

    pub fn with_dim(d: usize) -> Option<Self> {
        let setup = match d {
            1 => KoSetup::OneD,
            2 => KoSetup::TwoD,
            3 => KoSetup::ThreeD,
            _ => return None,
        };
        Some(Self { setup })
    }
}

pub fn ko_rhs(y: [f64; 3]) -> [f64; 3] {
    let [y1, y2, y3] = y;
    [y1 * y3, -y2 * y3, -y1 * y1 + y2 * y2]
}

impl Model for KraichnanOrszag {
    fn name(&self) -> &str {
        match self.setup {
            KoSetup::OneD => "ko1d",
            KoSetup::TwoD => "ko2d",
            KoSetup::ThreeD => "ko3d",
        }
    }

    fn random_dim(&self) -> usize {
        match self.setup {
            KoSetup::OneD => 1,
            KoSetup::TwoD => 2,
            KoSetup::ThreeD => 3,
        }
    }

    fn n_vars(&self) -> usize {
        3
    }

    fn initial_state(&self, xi: &[f64], out: &mut [f64]) {
        let y0 = match self.setup {
            KoSetup::OneD => [1.0, 0.1 * xi[0], 0.0],
            KoSetup::TwoD => [1.0, 0.1 * xi[0], xi[1]],
            KoSetup::ThreeD => [xi[0], xi[1], xi[2]],
        };
        out.copy_from_slice(&y0);
    }

    fn rhs(&self, _t: f64, u: &[f64], _xi: &[f64], du: &mut [f64]) {
        du.copy_from_slice(&ko_rhs([u[0], u[1], u[2]]));
    }
}
