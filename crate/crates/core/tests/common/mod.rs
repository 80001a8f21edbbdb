#![allow(dead_code)]

use confract::{FractionalOrder, Interval, Ivp, IvpData, ScalarFn, TubeCertificate};

pub fn order(alpha: f64) -> FractionalOrder {
    FractionalOrder::new(alpha).unwrap()
}

pub fn half() -> FractionalOrder {
    order(0.5)
}

pub fn unit() -> Interval {
    Interval::new(1.0, 2.0).unwrap()
}

/// `x^{(1/2)} = c₁ √t/(1+t) x³ + c₂ x e^{c x}` on `[1, 2]`.
pub fn example_system(c1: f64, c2: f64, c: f64, x0: f64) -> Ivp {
    Ivp::new(
        IvpData::new(half(), unit(), x0).unwrap(),
        ScalarFn::of_tx(move |t, x| c1 * t.sqrt() / (1.0 + t) * x.powi(3) + c2 * x * (c * x).exp()),
    )
}

pub fn constant_tube(center: f64, radius: f64) -> TubeCertificate {
    TubeCertificate::constant(center, radius, half(), unit()).unwrap()
}

pub struct Case {
    pub name: &'static str,
    pub ivp: Ivp,
    pub cert: TubeCertificate,
}

/// Problem/certificate pairs that pass sampled verification.
pub fn certified_corpus() -> Vec<Case> {
    let plain = |x0: f64, f: ScalarFn| Ivp::new(IvpData::new(half(), unit(), x0).unwrap(), f);
    vec![
        Case {
            name: "example system, x0 = 0",
            ivp: example_system(-1.0, -1.0, 1.0, 0.0),
            cert: constant_tube(0.0, 1.0),
        },
        Case {
            name: "example system, x0 = 0.5",
            ivp: example_system(-1.0, -1.0, 1.0, 0.5),
            cert: constant_tube(0.0, 1.0),
        },
        Case {
            name: "example system, c1 = -3, c2 = -0.5, c = -2, x0 = -0.9",
            ivp: example_system(-3.0, -0.5, -2.0, -0.9),
            cert: constant_tube(0.0, 1.0),
        },
        Case {
            name: "relaxation to 1, tube (1, 1)",
            ivp: plain(0.0, ScalarFn::of_tx(|_, x| 2.0 - 2.0 * x)),
            cert: constant_tube(1.0, 1.0),
        },
        Case {
            name: "logistic, tube (0.5, 0.5)",
            ivp: plain(0.2, ScalarFn::of_tx(|_, x| x * (1.0 - x))),
            cert: constant_tube(0.5, 0.5),
        },
        Case {
            name: "decay inside a shrinking tube",
            ivp: plain(0.9, ScalarFn::of_tx(|t, x| -2.0 * t * x)),
            cert: TubeCertificate::new(
                ScalarFn::constant(0.0),
                ScalarFn::of_t(|t| (-0.5 * (t - 1.0)).exp()),
                half(),
                unit(),
            )
            .unwrap(),
        },
        Case {
            // M vanishes on [1, 1.5], where v ≡ 0 solves the equation exactly
            name: "radius vanishing up to an interior point",
            ivp: plain(0.0, ScalarFn::of_tx(|_, x| -2.0 * x)),
            cert: TubeCertificate::new(
                ScalarFn::constant(0.0),
                ScalarFn::of_t(|t| 100.0 * (t - 1.5).max(0.0).powi(3)),
                half(),
                unit(),
            )
            .unwrap(),
        },
        Case {
            // non-Lipschitz field that reaches 0 in finite time; M touches 0 at t = 1.5 only
            name: "square-root decay pinched at an interior point",
            ivp: plain(0.25, ScalarFn::of_tx(|_, x| -3.0 * x.signum() * x.abs().sqrt())),
            cert: TubeCertificate::new(
                ScalarFn::constant(0.0),
                ScalarFn::of_t(|t| (t - 1.5) * (t - 1.5)),
                half(),
                unit(),
            )
            .unwrap(),
        },
    ]
}
