//! Exact rational linear programs.
//!
//! Every variable is free; sign conditions are ordinary constraint rows.
//! [`minimize`] returns one of three certificates, each checkable without
//! trusting the solver:
//!
//! - optimal: primal point plus dual multipliers with `yᵀA = c` and `c·x = y·b`
//! - unbounded: feasible point plus a recession direction with `c·d < 0`
//! - infeasible: Farkas multipliers with `yᵀA = 0` and `y·b > 0`

mod simplex;
mod text;
mod verify;

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q_str, q_vec, Q};

pub use simplex::minimize;
pub use text::{parse_lp, write_lp};
pub use verify::{verify_certificate, verify_farkas, verify_ray, CertificateCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Ge => ">=",
            Sense::Le => "<=",
            Sense::Eq => "=",
        }
    }

    pub fn holds(self, lhs: &Q, rhs: &Q) -> bool {
        match self {
            Sense::Ge => lhs >= rhs,
            Sense::Le => lhs <= rhs,
            Sense::Eq => lhs == rhs,
        }
    }

    /// Whether a dual multiplier of this sign is admissible for the row.
    pub fn dual_sign_ok(self, y: &Q) -> bool {
        match self {
            Sense::Ge => !y.is_negative(),
            Sense::Le => !y.is_positive(),
            Sense::Eq => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<Q>,
    pub sense: Sense,
    pub rhs: Q,
}

impl Constraint {
    pub fn lhs(&self, x: &[Q]) -> Q {
        dot(&self.coeffs, x)
    }

    pub fn is_satisfied(&self, x: &[Q]) -> bool {
        self.sense.holds(&self.lhs(x), &self.rhs)
    }
}

pub(crate) fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `minimize c·x + c₀` over the rows of `constraints`, all variables free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLP {
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<Q>,
    pub objective_constant: Q,
}

impl ExactLP {
    pub fn new<S: AsRef<str>>(variables: &[S]) -> Self {
        let n = variables.len();
        Self {
            variables: variables.iter().map(|s| s.as_ref().to_string()).collect(),
            constraints: Vec::new(),
            objective: vec![Q::zero(); n],
            objective_constant: Q::zero(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Lp(format!("undeclared variable `{name}`")))
    }

    /// Dense coefficient vector from `(name, coefficient)` pairs.
    pub fn form(&self, terms: &[(&str, Q)]) -> Result<Vec<Q>> {
        let mut v = vec![Q::zero(); self.num_vars()];
        for (name, c) in terms {
            v[self.var_index(name)?] += c;
        }
        Ok(v)
    }

    pub fn add_constraint(
        &mut self,
        name: &str,
        terms: &[(&str, Q)],
        sense: Sense,
        rhs: Q,
    ) -> Result<&mut Self> {
        let coeffs = self.form(terms)?;
        self.push_constraint(Constraint {
            name: name.to_string(),
            coeffs,
            sense,
            rhs,
        })
    }

    pub fn push_constraint(&mut self, c: Constraint) -> Result<&mut Self> {
        if c.coeffs.len() != self.num_vars() {
            return Err(Error::Lp(format!(
                "constraint `{}` has {} coefficients for {} variables",
                c.name,
                c.coeffs.len(),
                self.num_vars()
            )));
        }
        if self.constraints.iter().any(|d| d.name == c.name) {
            return Err(Error::Lp(format!("duplicate constraint name `{}`", c.name)));
        }
        self.constraints.push(c);
        Ok(self)
    }

    pub fn set_objective(&mut self, terms: &[(&str, Q)]) -> Result<&mut Self> {
        self.objective = self.form(terms)?;
        Ok(self)
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.objective.len() != n {
            return Err(Error::Lp("objective length does not match variables".into()));
        }
        let mut seen = HashMap::new();
        for v in &self.variables {
            if seen.insert(v.as_str(), ()).is_some() {
                return Err(Error::Lp(format!("duplicate variable `{v}`")));
            }
        }
        for c in &self.constraints {
            if c.coeffs.len() != n {
                return Err(Error::Lp(format!(
                    "constraint `{}` references {} variables, expected {n}",
                    c.name,
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[Q]) -> Q {
        dot(&self.objective, x) + &self.objective_constant
    }

    pub fn is_feasible(&self, x: &[Q]) -> bool {
        x.len() == self.num_vars() && self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    /// The same problem with the objective negated.
    pub fn negated_objective(&self) -> Self {
        let mut out = self.clone();
        out.objective = self.objective.iter().map(|c| -c).collect();
        out.objective_constant = -&self.objective_constant;
        out
    }

    /// Multiplies every row and the objective by a positive rational.
    pub fn rescaled(&self, k: &Q) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::Lp(format!("rescaling factor must be positive, got {k}")));
        }
        let mut out = self.clone();
        for c in &mut out.constraints {
            c.coeffs.iter_mut().for_each(|a| *a *= k);
            c.rhs *= k;
        }
        out.objective.iter_mut().for_each(|a| *a *= k);
        out.objective_constant *= k;
        Ok(out)
    }

    /// Solves the equality `constraint` for `var` and substitutes it everywhere.
    pub fn eliminate(&self, var: &str, constraint: &str) -> Result<Self> {
        let v = self.var_index(var)?;
        let row = self
            .constraint(constraint)
            .ok_or_else(|| Error::Lp(format!("no constraint named `{constraint}`")))?;
        if row.sense != Sense::Eq {
            return Err(Error::Lp(format!("`{constraint}` is not an equality")));
        }
        let pivot = row.coeffs[v].clone();
        if pivot.is_zero() {
            return Err(Error::Lp(format!("`{var}` does not occur in `{constraint}`")));
        }
        // var = (rhs − Σ_{k≠v} a_k x_k) / a_v
        let subst = |coeffs: &[Q], constant: &Q| -> (Vec<Q>, Q) {
            let f = &coeffs[v] / &pivot;
            let new: Vec<Q> = coeffs
                .iter()
                .zip(&row.coeffs)
                .enumerate()
                .filter(|(k, _)| *k != v)
                .map(|(_, (c, r))| c - &f * r)
                .collect();
            (new, constant + &f * &row.rhs)
        };
        let mut out = ExactLP::new(
            &self
                .variables
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != v)
                .map(|(_, s)| s.as_str())
                .collect::<Vec<_>>(),
        );
        for c in self.constraints.iter().filter(|c| c.name != constraint) {
            // a·x ⋈ b becomes a′·x′ + f·rhs ⋈ b
            let (coeffs, shift) = subst(&c.coeffs, &Q::zero());
            out.push_constraint(Constraint {
                name: c.name.clone(),
                coeffs,
                sense: c.sense,
                rhs: &c.rhs - shift,
            })?;
        }
        let (objective, constant) = subst(&self.objective, &self.objective_constant);
        out.objective = objective;
        out.objective_constant = constant;
        Ok(out)
    }
}

/// Optimality certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(with = "q_str")]
    pub optimal_value: Q,
    #[serde(with = "q_vec")]
    pub primal_point: Vec<Q>,
    #[serde(with = "q_vec")]
    pub dual_multipliers: Vec<Q>,
}

/// Feasible point plus a direction along which the objective decreases without bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnboundedRay {
    #[serde(with = "q_vec")]
    pub point: Vec<Q>,
    #[serde(with = "q_vec")]
    pub direction: Vec<Q>,
    /// `c · direction`, strictly negative.
    #[serde(with = "q_str")]
    pub rate: Q,
}

/// Multipliers proving that no point satisfies every row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    #[serde(with = "q_vec")]
    pub multipliers: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Solution {
    Optimal(Certificate),
    Unbounded(UnboundedRay),
    Infeasible(FarkasCertificate),
}

impl Solution {
    pub fn optimal(&self) -> Option<&Certificate> {
        match self {
            Solution::Optimal(c) => Some(c),
            _ => None,
        }
    }

    pub fn unbounded(&self) -> Option<&UnboundedRay> {
        match self {
            Solution::Unbounded(r) => Some(r),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Solution::Optimal(_) => "optimal",
            Solution::Unbounded(_) => "unbounded",
            Solution::Infeasible(_) => "infeasible",
        }
    }

    /// Runs the matching verifier.
    pub fn verify(&self, lp: &ExactLP) -> CertificateCheck {
        match self {
            Solution::Optimal(c) => verify_certificate(lp, c),
            Solution::Unbounded(r) => verify_ray(lp, r),
            Solution::Infeasible(f) => verify_farkas(lp, f),
        }
    }
}

/// Certificate together with the names it refers to, for third-party checking.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub variables: Vec<String>,
    pub constraints: Vec<String>,
    pub solution: Solution,
}

impl CertificateDocument {
    pub fn new(lp: &ExactLP, solution: Solution) -> Self {
        Self {
            variables: lp.variables.clone(),
            constraints: lp.constraints.iter().map(|c| c.name.clone()).collect(),
            solution,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn toy() -> ExactLP {
        let mut lp = ExactLP::new(&["x", "y"]);
        lp.add_constraint("sum", &[("x", q(1)), ("y", q(2))], Sense::Eq, q(4))
            .unwrap()
            .add_constraint("xpos", &[("x", q(1))], Sense::Ge, q(0))
            .unwrap()
            .add_constraint("ypos", &[("y", q(1))], Sense::Ge, q(0))
            .unwrap()
            .set_objective(&[("x", q(3)), ("y", q(1))])
            .unwrap();
        lp
    }

    #[test]
    fn builder_rejects_bad_input() {
        let mut lp = toy();
        assert!(lp.add_constraint("z", &[("z", q(1))], Sense::Ge, q(0)).is_err());
        assert!(lp.add_constraint("sum", &[("x", q(1))], Sense::Ge, q(0)).is_err());
        assert!(lp.validate().is_ok());
    }

    #[test]
    fn elimination_substitutes() {
        let lp = toy();
        let red = lp.eliminate("x", "sum").unwrap();
        assert_eq!(red.variables, vec!["y"]);
        // x = 4 − 2y: objective 3(4 − 2y) + y = 12 − 5y
        assert_eq!(red.objective, vec![q(-5)]);
        assert_eq!(red.objective_constant, q(12));
        // x ≥ 0 becomes −2y ≥ −4
        let xpos = red.constraint("xpos").unwrap();
        assert_eq!(xpos.coeffs, vec![q(-2)]);
        assert_eq!(xpos.rhs, q(-4));
        assert!(lp.eliminate("x", "xpos").is_err());
    }

    #[test]
    fn rescaling_and_negation() {
        let lp = toy();
        let s = lp.rescaled(&qf(3, 2)).unwrap();
        assert_eq!(s.constraint("sum").unwrap().rhs, q(6));
        assert!(lp.rescaled(&q(0)).is_err());
        assert_eq!(lp.negated_objective().objective, vec![q(-3), q(-1)]);
    }
}
