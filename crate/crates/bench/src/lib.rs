//! Fixtures shared by the benchmarks.

use confract::{FractionalOrder, Interval, Ivp, IvpData, ScalarFn, TubeCertificate};

/// `x^{(1/2)} = c₁ √t/(1+t) x³ + c₂ x e^{c x}` on `[1, 2]` with `c₁ = c₂ = -1`, `c = 1`.
pub fn example_system(x0: f64) -> Ivp {
    let data = IvpData::new(half(), unit_interval(), x0).expect("valid initial state");
    Ivp::new(
        data,
        ScalarFn::of_tx(|t, x| -t.sqrt() / (1.0 + t) * x.powi(3) - x * x.exp()),
    )
}

pub fn unit_tube() -> TubeCertificate {
    TubeCertificate::constant(0.0, 1.0, half(), unit_interval()).expect("constant tube")
}

pub fn half() -> FractionalOrder {
    FractionalOrder::new(0.5).expect("valid order")
}

pub fn unit_interval() -> Interval {
    Interval::new(1.0, 2.0).expect("valid interval")
}
