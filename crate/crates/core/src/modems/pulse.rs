use core::f64::consts::{PI, SQRT_2};
#[allow(unused_imports)]
use num_traits::Float;

/// Unit-energy root-raised-cosine with unit symbol period.
pub(crate) fn root_raised_cosine(t: f64, beta: f64) -> f64 {
    if t.abs() < 1e-12 {
        return 1.0 + beta * (4.0 / PI - 1.0);
    }
    let edge = 4.0 * beta * t;
    if beta > 0.0 && (edge.abs() - 1.0).abs() < 1e-9 {
        let arg = PI / (4.0 * beta);
        return beta / SQRT_2 * ((1.0 + 2.0 / PI) * arg.sin() + (1.0 - 2.0 / PI) * arg.cos());
    }
    let x = PI * t;
    ((x * (1.0 - beta)).sin() + edge * (x * (1.0 + beta)).cos()) / (x * (1.0 - edge * edge))
}
