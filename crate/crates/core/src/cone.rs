//! The moving-curve argument as an exact linear program.
//!
//! A putative component `D′ = aλ − b₀′δ₀′ − b₀″δ₀″ − b₀^ram δ₀^ram − b₁δ₁ − ⋯`
//! of the genus-9 Brill–Noether divisor is constrained by the test curves
//! that cannot lie inside it. Minimizing `R · D′` over those constraints and
//! combining the result with `R · K < 0` rules out a pseudo-effective `K`.
//!
//! The higher boundary coefficients are not LP variables: every test curve
//! used here pairs to zero with `δ_i`, `δ_{g−i}`, `δ_{i:g−i}` for `i ≥ 2` and
//! with `δ_{g−1}`, `δ_{1:g−1}`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::divisor::{canonical_class, pair, CurveClass, Label, PrymBasis};
use crate::error::{Error, Result};
use crate::lp::{
    minimize, verify_ray, CertificateCheck, CertificateDocument, Constraint, ExactLP, Sense,
    Solution, UnboundedRay,
};
use crate::pencil::{a0pp_pairing, k3_pencil_a, nikulin_pencil, pencil_r_intersections, PencilSpec};
use crate::rational::{parse_q, q, qf, Q};

pub const GENUS: u32 = 9;

/// LP variables, in order.
pub const VARIABLES: [&str; 5] = ["a", "b0p", "b0pp", "b0ram", "b1"];

/// Labels whose coefficients in `D′` are the LP variables, with the sign
/// they carry in `D′`.
const VARIABLE_LABELS: [(Label, i64); 5] = [
    (Label::Lambda, 1),
    (Label::Delta0p, -1),
    (Label::Delta0pp, -1),
    (Label::Delta0Ram, -1),
    (Label::Delta(1), -1),
];

/// The coarser bound `a ≤ (36/5)·b₀′` sometimes quoted for the reduced system.
pub fn rounded_ratio() -> Q {
    qf(36, 5)
}

/// The four test curves entering the constraint system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestCurves {
    /// The sweeping rational curve inside `D′`; pairs with the objective.
    pub r: CurveClass,
    /// Nikulin pencil, disjoint from `D′`.
    pub xi: CurveClass,
    /// K3 pencil, sweeping the whole moduli space.
    pub a: CurveClass,
    /// Sweeping curve of `Δ₀″`.
    pub a0pp: CurveClass,
}

impl TestCurves {
    pub fn standard() -> Result<Self> {
        let basis = PrymBasis::new(GENUS)?;
        let a0pp = CurveClass::from_terms(
            basis,
            [
                (Label::Delta0pp, -a0pp_pairing(GENUS, &Q::one(), &Q::zero())?),
                (Label::Delta(1), -a0pp_pairing(GENUS, &Q::zero(), &Q::one())?),
            ],
        )?;
        Ok(Self {
            r: pencil_r_intersections(&PencilSpec::octic_pencil())?,
            xi: nikulin_pencil(GENUS)?,
            a: k3_pencil_a(GENUS)?,
            a0pp,
        })
    }

    /// Applies `curve.label=value`, e.g. `R.lambda=10`.
    pub fn perturb(&mut self, key: &str, value: &Q) -> Result<()> {
        let (curve, label) = key
            .split_once('.')
            .ok_or_else(|| Error::InvalidInput(format!("perturbation key `{key}` is not `curve.label`")))?;
        let target = match curve {
            "R" => &mut self.r,
            "Xi" => &mut self.xi,
            "A" => &mut self.a,
            "A0pp" => &mut self.a0pp,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown test curve `{other}`; expected R, Xi, A or A0pp"
                )))
            }
        };
        let label = target.basis().parse_label(label)?;
        *target = target.clone().with_pairing(label, value.clone())?;
        Ok(())
    }

    /// Parses and applies a `key=value` perturbation.
    pub fn perturb_str(&mut self, spec: &str) -> Result<()> {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("perturbation `{spec}` is not `key=value`")))?;
        self.perturb(key.trim(), &parse_q(value.trim())?)
    }

    pub fn named(&self) -> [(&'static str, &CurveClass); 4] {
        [("R", &self.r), ("Xi", &self.xi), ("A", &self.a), ("A0pp", &self.a0pp)]
    }
}

/// `C · D′` as a linear form in the LP variables.
pub fn pairing_form(curve: &CurveClass) -> Vec<Q> {
    VARIABLE_LABELS
        .iter()
        .map(|(label, sign)| curve.pairing(*label) * q(*sign))
        .collect()
}

/// The constraint system for `g = 9` with the standard test curves.
pub fn build_constraints(g: u32) -> Result<ExactLP> {
    if g != GENUS {
        return Err(Error::genus(g, "the cone constraints are only set up for g = 9"));
    }
    build_constraints_from(&TestCurves::standard()?)
}

pub fn build_constraints_from(curves: &TestCurves) -> Result<ExactLP> {
    let mut lp = ExactLP::new(&VARIABLES);
    let row = |name: &str, coeffs: Vec<Q>, sense| Constraint {
        name: name.into(),
        coeffs,
        sense,
        rhs: Q::zero(),
    };
    let unit = |k: usize| {
        let mut v = vec![Q::zero(); VARIABLES.len()];
        v[k] = Q::one();
        v
    };
    lp.push_constraint(row("xi", pairing_form(&curves.xi), Sense::Eq))?;
    lp.push_constraint(row("A", pairing_form(&curves.a), Sense::Ge))?;
    lp.push_constraint(row("A0pp", pairing_form(&curves.a0pp), Sense::Ge))?;
    lp.push_constraint(row("b1_nonneg", unit(4), Sense::Ge))?;
    lp.push_constraint(row("a_nonneg", unit(0), Sense::Ge))?;
    lp.objective = pairing_form(&curves.r);
    Ok(lp)
}

/// The system with `b₀^ram` eliminated through the Nikulin equality.
pub fn reduced_lp(lp: &ExactLP) -> Result<ExactLP> {
    lp.eliminate("b0ram", "xi")
}

/// Exact constant `κ` with `a ≤ κ·b₀′` on the reduced system, read off the
/// reduced `A` row once `b₀″ ≥ 0` is used. `None` if the row has another shape.
pub fn exact_ratio_bound(reduced: &ExactLP) -> Option<Q> {
    let row = reduced.constraint("A")?;
    let ia = reduced.var_index("a").ok()?;
    let ib = reduced.var_index("b0p").ok()?;
    let (ca, cb) = (&row.coeffs[ia], &row.coeffs[ib]);
    (ca.is_negative() && cb.is_positive() && row.rhs.is_zero()).then(|| -(cb / ca))
}

/// Maximizes a common slack `s ≤ 1` on every inequality; returns a point that
/// satisfies all inequalities strictly, if one exists.
pub fn strictly_interior_point(lp: &ExactLP) -> Result<Option<Vec<Q>>> {
    let mut vars = lp.variables.clone();
    vars.push("__slack".into());
    let n = lp.num_vars();
    let mut aux = ExactLP::new(&vars);
    for c in &lp.constraints {
        let mut coeffs = c.coeffs.clone();
        coeffs.push(match c.sense {
            Sense::Ge => -Q::one(),
            Sense::Le => Q::one(),
            Sense::Eq => Q::zero(),
        });
        aux.push_constraint(Constraint { coeffs, ..c.clone() })?;
    }
    let mut cap = vec![Q::zero(); n + 1];
    cap[n] = Q::one();
    aux.push_constraint(Constraint {
        name: "__slack_cap".into(),
        coeffs: cap,
        sense: Sense::Le,
        rhs: Q::one(),
    })?;
    aux.objective[n] = -Q::one();
    match minimize(&aux)? {
        Solution::Optimal(c) if c.optimal_value.is_negative() => Ok(Some(c.primal_point[..n].to_vec())),
        _ => Ok(None),
    }
}

/// The direction `b₀′ = 1, b₀^ram` fixed by the Nikulin equality, other variables 0.
pub fn b0p_ray(lp: &ExactLP) -> Option<UnboundedRay> {
    let xi = lp.constraint("xi")?;
    let (ib, ir) = (lp.var_index("b0p").ok()?, lp.var_index("b0ram").ok()?);
    if xi.coeffs[ir].is_zero() {
        return None;
    }
    let mut d = vec![Q::zero(); lp.num_vars()];
    d[ib] = Q::one();
    d[ir] = -(&xi.coeffs[ib] / &xi.coeffs[ir]);
    let rate = crate::lp::dot(&lp.objective, &d);
    Some(UnboundedRay {
        point: vec![Q::zero(); lp.num_vars()],
        direction: d,
        rate,
    })
}

/// Geometric input taken on trust, kept visible in the chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Axiom {
    pub id: &'static str,
    pub statement: &'static str,
}

pub fn axioms() -> Vec<Axiom> {
    vec![
        Axiom {
            id: "transversality",
            statement: "some component D′ contains a sweeping pencil R whose intersection numbers are the computed ones",
        },
        Axiom {
            id: "R_moving",
            statement: "R is a moving curve in D′, so R·M ≥ 0 for every pseudo-effective M without D′ in its support",
        },
        Axiom {
            id: "A_sweeping",
            statement: "the K3 pencil A and the curve A0pp sweep their ambient spaces, so they pair nonnegatively with D′",
        },
        Axiom {
            id: "BDPP",
            statement: "a projective variety whose canonical class is not pseudo-effective is uniruled",
        },
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Computed,
    Axiom,
    Inference,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub id: &'static str,
    pub kind: StepKind,
    pub statement: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Conclusion {
    NotPseudoEffective,
    NoContradiction { reason: String },
}

impl Conclusion {
    pub fn established(&self) -> bool {
        matches!(self, Conclusion::NotPseudoEffective)
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::NotPseudoEffective => f.write_str(
                "K of the genus-9 Prym moduli space is not pseudo-effective; the space is uniruled (modulo BDPP, transversality and sweeping hypotheses)",
            ),
            Conclusion::NoContradiction { reason } => write!(f, "no contradiction derived: {reason}"),
        }
    }
}

/// Everything the certifier computed, in reportable form.
#[derive(Clone, Debug)]
pub struct ConeReport {
    pub curves: TestCurves,
    pub r_dot_k: Q,
    pub lp: ExactLP,
    pub solution: Solution,
    pub check: CertificateCheck,
    /// SHA-256 of the JSON [`CertificateDocument`].
    pub certificate_digest: String,
    pub certificate_json: String,
    pub reduced_minimum: Option<Q>,
    pub rescaled_consistent: bool,
    pub flipped: Solution,
    pub flipped_check: CertificateCheck,
    pub b0p_ray: Option<(UnboundedRay, CertificateCheck)>,
    pub interior_point: Option<Vec<Q>>,
    pub exact_ratio: Option<Q>,
    pub omitted_variables: Vec<String>,
    pub axioms: Vec<Axiom>,
    pub steps: Vec<ChainStep>,
    pub conclusion: Conclusion,
}

impl ConeReport {
    pub fn minimum(&self) -> Option<&Q> {
        self.solution.optimal().map(|c| &c.optimal_value)
    }

    /// Whether the coarser ratio bound follows from the exact constraints.
    pub fn rounded_bound_implied(&self) -> Option<bool> {
        self.exact_ratio.as_ref().map(|k| rounded_ratio() >= *k)
    }
}

fn lp_minimum(lp: &ExactLP) -> Result<Option<Q>> {
    Ok(minimize(lp)?.optimal().map(|c| c.optimal_value.clone()))
}

/// Runs the certifier with the standard test curves.
pub fn certify_not_pseudoeffective() -> Result<ConeReport> {
    certify_with(&TestCurves::standard()?)
}

/// Runs the certifier on arbitrary (e.g. perturbed) test curves.
///
/// Fails only if a certificate produced by the solver does not verify.
pub fn certify_with(curves: &TestCurves) -> Result<ConeReport> {
    let basis = PrymBasis::new(GENUS)?;
    let r_dot_k = pair(&curves.r, &canonical_class(GENUS)?)?;

    let lp = build_constraints_from(curves)?;
    let solution = minimize(&lp)?;
    let check = solution.verify(&lp);
    if !check.passed() {
        return Err(Error::Computation(format!(
            "LP certificate failed verification: {:?}",
            check.violations
        )));
    }
    let doc = CertificateDocument::new(&lp, solution.clone());
    let certificate_json = serde_json::to_string(&doc)
        .map_err(|e| Error::Computation(format!("certificate serialization: {e}")))?;
    let certificate_digest = hex::encode(Sha256::digest(certificate_json.as_bytes()));

    let reduced = reduced_lp(&lp).ok();
    let reduced_minimum = match &reduced {
        Some(r) => lp_minimum(r)?,
        None => None,
    };
    let scale = qf(7, 3);
    let rescaled_min = lp_minimum(&lp.rescaled(&scale)?)?;
    let minimum = solution.optimal().map(|c| c.optimal_value.clone());
    let rescaled_consistent = rescaled_min == minimum.as_ref().map(|m| m * &scale);

    let flipped_lp = lp.negated_objective();
    let flipped = minimize(&flipped_lp)?;
    let flipped_check = flipped.verify(&flipped_lp);
    let b0p_ray = b0p_ray(&flipped_lp).map(|ray| {
        let c = verify_ray(&flipped_lp, &ray);
        (ray, c)
    });
    let interior_point = strictly_interior_point(&lp)?;
    let exact_ratio = reduced.as_ref().and_then(exact_ratio_bound);

    let omitted_variables = basis
        .labels()
        .into_iter()
        .filter(|l| !VARIABLE_LABELS.iter().any(|(v, _)| v == l))
        .filter(|l| !matches!(l, Label::Lambda | Label::Delta0p | Label::Delta0pp | Label::Delta0Ram))
        .map(|l| l.name(GENUS))
        .collect();

    let k_negative = r_dot_k.is_negative();
    let lp_nonneg = minimum.as_ref().is_some_and(|m| !m.is_negative());
    let mut steps = vec![
        ChainStep {
            id: "R.K",
            kind: StepKind::Computed,
            statement: format!("R·K = {r_dot_k} < 0"),
            holds: k_negative,
        },
        ChainStep {
            id: "lp.min",
            kind: StepKind::Computed,
            statement: match &minimum {
                Some(m) => format!("min R·D′ = {m} ≥ 0 (certificate {})", &certificate_digest[..16]),
                None => format!("R·D′ is {} on the constraint system", solution.status()),
            },
            holds: lp_nonneg,
        },
    ];
    for a in axioms().iter().filter(|a| a.id != "BDPP") {
        steps.push(ChainStep {
            id: a.id,
            kind: StepKind::Axiom,
            statement: a.statement.into(),
            holds: true,
        });
    }
    steps.push(ChainStep {
        id: "decomposition",
        kind: StepKind::Inference,
        statement: "K = t·D′ + M with t > 0 gives R·K = t·R·D′ + R·M ≥ 0".into(),
        holds: k_negative && lp_nonneg,
    });
    steps.push(ChainStep {
        id: "t0_branch",
        kind: StepKind::Inference,
        statement: "K = M gives R·K = R·M ≥ 0".into(),
        holds: k_negative,
    });
    let conclusion = if !k_negative {
        Conclusion::NoContradiction {
            reason: format!("R·K = {r_dot_k} is not negative"),
        }
    } else if !lp_nonneg {
        Conclusion::NoContradiction {
            reason: format!("R·D′ is not bounded below by 0 ({})", solution.status()),
        }
    } else {
        Conclusion::NotPseudoEffective
    };
    steps.push(ChainStep {
        id: "BDPP",
        kind: StepKind::Axiom,
        statement: "K not pseudo-effective implies uniruled".into(),
        holds: conclusion.established(),
    });

    Ok(ConeReport {
        curves: curves.clone(),
        r_dot_k,
        lp,
        solution,
        check,
        certificate_digest,
        certificate_json,
        reduced_minimum,
        rescaled_consistent,
        flipped,
        flipped_check,
        b0p_ray,
        interior_point,
        exact_ratio,
        omitted_variables,
        axioms: axioms(),
        steps,
        conclusion,
    })
}
