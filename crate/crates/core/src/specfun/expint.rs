use crate::error::{invalid, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Ei(x) on the negative axis, Ei(x) = -E₁(-x).
pub fn expint_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(invalid("x", format!("only x < 0 is supported, got {x}")));
    }
    Ok(-expint_e1(-x))
}

/// E₁(y) for y > 0.
pub fn expint_e1(y: f64) -> f64 {
    if y <= 1.0 {
        e1_series(y)
    } else {
        (-y).exp() * e1_scaled_cf(y)
    }
}

/// e^{y} E₁(y) for y > 0, finite for arbitrarily large y.
pub fn expint_e1_scaled(y: f64) -> f64 {
    if y <= 1.0 {
        y.exp() * e1_series(y)
    } else {
        e1_scaled_cf(y)
    }
}

fn e1_series(y: f64) -> f64 {
    // The alternating series cancels badly for large y, so it is only used on (0, 1].
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..60 {
        term *= -y / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - y.ln() - sum
}

fn e1_scaled_cf(y: f64) -> f64 {
    // modified Lentz on E1(y) e^y = 1/(y+1- 1/(y+3- 4/(y+5- ...)))
    let tiny = 1e-300;
    let mut b = y + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}
