//! Built-in scenarios for the competition system: a symmetric constant
//! environment (`a = b = 1`, `k = h = 0.2`, `d = 1`, `α = 0.1`, `T = 1`)
//! with initial data chosen to land in each of the four long-time outcomes.

use crate::coeffs::{CoefficientField, ProblemSpec};
use crate::single_fb::InitialProfile;
use crate::system_fb::{Quartering, SystemInit};

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: &'static str,
    pub spec: ProblemSpec,
    pub init: SystemInit,
    pub expected: Quartering,
}

/// The symmetric constant environment with both front coefficients equal to `mu`.
pub fn symmetric_problem(k: f64, h: f64, mu: f64) -> ProblemSpec {
    let c = |v: f64| CoefficientField::constant(v, 1.0).expect("constant field");
    ProblemSpec {
        d1: 1.0,
        d2: 1.0,
        alpha1: 0.1,
        alpha2: 0.1,
        mu1: mu,
        mu2: mu,
        period: 1.0,
        a: c(1.0),
        b: c(1.0),
        k: c(k),
        h: c(h),
    }
}

fn case(name: &'static str, fronts: (f64, f64), mus: (f64, f64), expected: Quartering) -> Scenario {
    let mut spec = symmetric_problem(0.2, 0.2, 1.0);
    spec.mu1 = mus.0;
    spec.mu2 = mus.1;
    let bump = InitialProfile::CosineBump { amplitude: 0.5 };
    Scenario {
        name,
        spec,
        init: SystemInit {
            s1_0: fronts.0,
            s2_0: fronts.1,
            u0: bump.clone(),
            v0: bump,
        },
        expected,
    }
}

pub fn quartering() -> Vec<Scenario> {
    vec![
        case(
            "both_vanish",
            (0.5, 0.5),
            (0.05, 0.05),
            Quartering::BothVanish,
        ),
        case(
            "u_spreads_v_vanishes",
            (3.0, 0.5),
            (1.0, 0.05),
            Quartering::USpreadsVVanishes,
        ),
        case(
            "u_vanishes_v_spreads",
            (0.5, 3.0),
            (0.05, 1.0),
            Quartering::UVanishesVSpreads,
        ),
        case(
            "both_spread",
            (3.0, 3.0),
            (1.0, 1.0),
            Quartering::BothSpread,
        ),
    ]
}
