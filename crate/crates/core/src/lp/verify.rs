//! Independent checks of solver output. Nothing here touches the tableau.

use num_traits::{Signed, Zero};

use super::{dot, Certificate, ExactLP, FarkasCertificate, UnboundedRay};
use crate::rational::Q;

/// Outcome of a certificate check, with one entry per failed condition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertificateCheck {
    pub checked: Vec<&'static str>,
    pub violations: Vec<String>,
}

impl CertificateCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && !self.checked.is_empty()
    }

    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        self.checked.push(name);
        if !ok {
            self.violations.push(format!("{name}: {}", detail()));
        }
    }

    /// Whether the named condition was checked and held.
    pub fn holds(&self, name: &str) -> bool {
        self.checked.contains(&name) && !self.violations.iter().any(|v| v.starts_with(name))
    }
}

fn shapes_ok(lp: &ExactLP, x_len: usize, y_len: Option<usize>, out: &mut CertificateCheck) -> bool {
    let ok = x_len == lp.num_vars() && y_len.is_none_or(|m| m == lp.constraints.len());
    out.check("shape", ok, || "certificate dimensions do not match the program".into());
    ok
}

fn primal_feasibility(lp: &ExactLP, x: &[Q], out: &mut CertificateCheck) {
    let bad: Vec<&str> = lp
        .constraints
        .iter()
        .filter(|c| !c.is_satisfied(x))
        .map(|c| c.name.as_str())
        .collect();
    out.check("primal_feasibility", bad.is_empty(), || {
        format!("violated rows {bad:?}")
    });
}

fn transpose_times(lp: &ExactLP, y: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); lp.num_vars()];
    for (c, yi) in lp.constraints.iter().zip(y) {
        for (o, a) in out.iter_mut().zip(&c.coeffs) {
            *o += yi * a;
        }
    }
    out
}

fn dual_signs(lp: &ExactLP, y: &[Q], out: &mut CertificateCheck) {
    let bad: Vec<&str> = lp
        .constraints
        .iter()
        .zip(y)
        .filter(|(c, yi)| !c.sense.dual_sign_ok(yi))
        .map(|(c, _)| c.name.as_str())
        .collect();
    out.check("dual_sign_feasibility", bad.is_empty(), || {
        format!("multipliers of wrong sign on {bad:?}")
    });
}

/// Checks primal feasibility, dual feasibility and exact strong duality.
pub fn verify_certificate(lp: &ExactLP, cert: &Certificate) -> CertificateCheck {
    let mut out = CertificateCheck::default();
    let x = &cert.primal_point;
    let y = &cert.dual_multipliers;
    if !shapes_ok(lp, x.len(), Some(y.len()), &mut out) {
        return out;
    }
    primal_feasibility(lp, x, &mut out);
    dual_signs(lp, y, &mut out);
    let aty = transpose_times(lp, y);
    out.check("dual_stationarity", aty == lp.objective, || {
        "Aᵀy differs from the objective".into()
    });
    let primal = lp.objective_value(x);
    let b: Vec<Q> = lp.constraints.iter().map(|c| c.rhs.clone()).collect();
    let dual = dot(y, &b) + &lp.objective_constant;
    out.check("strong_duality", primal == dual, || {
        format!("primal {primal} ≠ dual {dual}")
    });
    out.check("reported_value", cert.optimal_value == primal, || {
        format!("reported {} but c·x = {primal}", cert.optimal_value)
    });
    let slack: Vec<&str> = lp
        .constraints
        .iter()
        .zip(y)
        .filter(|(c, yi)| !(*yi * (c.lhs(x) - &c.rhs)).is_zero())
        .map(|(c, _)| c.name.as_str())
        .collect();
    out.check("complementary_slackness", slack.is_empty(), || {
        format!("y·(Ax − b) ≠ 0 on {slack:?}")
    });
    out
}

/// Checks a recession direction: feasible base point, `d` in the recession
/// cone, and `c·d < 0`.
pub fn verify_ray(lp: &ExactLP, ray: &UnboundedRay) -> CertificateCheck {
    let mut out = CertificateCheck::default();
    if !shapes_ok(lp, ray.point.len(), None, &mut out) || ray.direction.len() != lp.num_vars() {
        out.violations.push("shape: direction length".into());
        return out;
    }
    primal_feasibility(lp, &ray.point, &mut out);
    let bad: Vec<&str> = lp
        .constraints
        .iter()
        .filter(|c| !c.sense.holds(&c.lhs(&ray.direction), &Q::zero()))
        .map(|c| c.name.as_str())
        .collect();
    out.check("recession_cone", bad.is_empty(), || {
        format!("direction leaves the feasible set through {bad:?}")
    });
    let rate = dot(&lp.objective, &ray.direction);
    out.check("descent", rate.is_negative() && rate == ray.rate, || {
        format!("c·d = {rate}, reported {}", ray.rate)
    });
    out
}

/// Checks Farkas multipliers: `yᵀA = 0`, admissible signs, `y·b > 0`.
pub fn verify_farkas(lp: &ExactLP, f: &FarkasCertificate) -> CertificateCheck {
    let mut out = CertificateCheck::default();
    let y = &f.multipliers;
    if !shapes_ok(lp, lp.num_vars(), Some(y.len()), &mut out) {
        return out;
    }
    dual_signs(lp, y, &mut out);
    let aty = transpose_times(lp, y);
    out.check("farkas_combination", aty.iter().all(Zero::is_zero), || {
        "yᵀA is not zero".into()
    });
    let b: Vec<Q> = lp.constraints.iter().map(|c| c.rhs.clone()).collect();
    let yb = dot(y, &b);
    out.check("farkas_positive", yb.is_positive(), || format!("y·b = {yb} is not positive"));
    out
}
