//! The full verification pipeline as a list of claim items.
//!
//! Items are produced module by module in dependency order: divisor, grr,
//! lattice, pencil, cone. Claim identifiers are stable across versions.

use std::time::Instant;

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cone::{certify_with, ConeReport, TestCurves, GENUS};
use crate::divisor::{canonical_class, d9_class, pair, DivisorClass, Label};
use crate::error::{Error, Result};
use crate::lattice::{mukai_pairing, nikulin_picard, slope, stability_obstruction_report, MukaiVector};
use crate::lp::Solution;
use crate::pencil::{
    castelnuovo_number, expected_dim_linear_system, noether_c2, pencil_boundary_total,
    plane_curve_genus, reducible_locus_codim, PencilSpec,
};
use crate::rational::{fmt_q, q, qf, Q};
use crate::taut::{bundle_ranks, degeneracy_class, push_sigma, BaseSymbol};

/// Module names accepted by `only`, in execution order.
pub const MODULES: [&str; 5] = ["divisor", "grr", "lattice", "pencil", "cone"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportItem {
    pub claim_id: String,
    /// Human-readable topic of the claim.
    pub location: String,
    pub computed_value: String,
    pub expected_value: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub items: Vec<ReportItem>,
    pub overall: Status,
    /// Facts surfaced alongside the items, such as omitted LP variables.
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }

    pub fn item(&self, claim_id: &str) -> Option<&ReportItem> {
        self.items.iter().find(|i| i.claim_id == claim_id)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report is always serializable")
    }

    pub fn to_text(&self) -> String {
        let width = self.items.iter().map(|i| i.claim_id.len()).max().unwrap_or(0);
        let mut out = String::new();
        for i in &self.items {
            let mark = match i.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            out.push_str(&format!(
                "{mark}  {:width$}  {}  (expected {}; {})\n",
                i.claim_id, i.computed_value, i.expected_value, i.location
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        let passed = self.items.iter().filter(|i| i.status == Status::Pass).count();
        out.push_str(&format!(
            "overall: {} ({passed}/{} claims)\n",
            if self.passed() { "pass" } else { "fail" },
            self.items.len()
        ));
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// A module name, a claim id, or a claim-id prefix.
    pub only: Option<String>,
    /// `curve.label=value` overrides for the test curves.
    pub perturbations: Vec<String>,
    pub timing: bool,
    /// Run modules on separate threads; the item order is unchanged.
    pub parallel: bool,
}

struct Collector {
    module: &'static str,
    timing: bool,
    items: Vec<ReportItem>,
}

impl Collector {
    fn new(module: &'static str, timing: bool) -> Self {
        Self {
            module,
            timing,
            items: Vec::new(),
        }
    }

    fn check(&mut self, id: &str, location: &str, expected: String, f: impl FnOnce() -> Result<String>) {
        let start = Instant::now();
        let computed = f().unwrap_or_else(|e| format!("error: {e}"));
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let status = if computed == expected { Status::Pass } else { Status::Fail };
        self.items.push(ReportItem {
            claim_id: format!("{}.{id}", self.module),
            location: location.into(),
            computed_value: computed,
            expected_value: expected,
            status,
            timing_ms: self.timing.then(|| (elapsed * 1e3).round() / 1e3),
        });
    }

    fn rational(&mut self, id: &str, location: &str, expected: Q, f: impl FnOnce() -> Result<Q>) {
        self.check(id, location, fmt_q(&expected), || f().map(|v| fmt_q(&v)));
    }

    fn class(&mut self, id: &str, location: &str, expected: &[(Label, Q)], f: impl Fn() -> Result<DivisorClass>) {
        for (label, value) in expected {
            let name = label.name(GENUS);
            self.rational(&format!("{id}.{name}"), location, value.clone(), || {
                Ok(f()?.coeff(*label))
            });
        }
    }
}

fn head(l: i64, d0p: i64, d0pp: i64, d0ram: Q) -> Vec<(Label, Q)> {
    vec![
        (Label::Lambda, q(l)),
        (Label::Delta0p, q(d0p)),
        (Label::Delta0pp, q(d0pp)),
        (Label::Delta0Ram, d0ram),
    ]
}

fn divisor_items(timing: bool) -> Vec<ReportItem> {
    let mut c = Collector::new("divisor", timing);
    let mut k = head(13, -2, -2, q(-3));
    k.push((Label::Delta(1), q(-3)));
    k.push((Label::Delta(2), q(-2)));
    c.class("K", "canonical class of the Prym moduli space", &k, || canonical_class(GENUS));
    c.class("D9", "Brill–Noether divisor class", &head(366, -52, -52, qf(-187, 2)), || {
        d9_class(&q(0))
    });
    c.rational("D9.alpha_shift", "Brill–Noether divisor class, δ₀″ correction 3/2", qf(-107, 2), || {
        Ok(d9_class(&qf(3, 2))?.coeff(Label::Delta0pp))
    });
    c.items
}

fn grr_items(timing: bool) -> Vec<ReportItem> {
    let mut c = Collector::new("grr", timing);
    let loc = "degeneracy class c₁(B) − c₁(A) by Grothendieck–Riemann–Roch";
    for (sym, value) in [
        (BaseSymbol::Lambda, q(-1)),
        (BaseSymbol::A, qf(-1, 2)),
        (BaseSymbol::B, qf(1, 2)),
        (BaseSymbol::V, q(0)),
        (BaseSymbol::SigmaDelta0p, q(0)),
        (BaseSymbol::SigmaDelta0pp, q(0)),
        (BaseSymbol::SigmaDelta0Ram, qf(1, 4)),
    ] {
        c.rational(&format!("Z.{}", sym.name()), loc, value, || {
            Ok(degeneracy_class().coeff(sym))
        });
    }
    let (ra, rb) = bundle_ranks(9, 2, 8);
    c.rational("rank.A", "ranks of the degeneracy-locus bundles", q(24), || Ok(q(ra)));
    c.rational("rank.B", "ranks of the degeneracy-locus bundles", q(24), || Ok(q(rb)));
    c.class(
        "D9",
        "pushforward of the degeneracy class along the degree-42 forgetful map",
        &head(366, -52, -52, qf(-187, 2)),
        || {
            let degree = castelnuovo_number(9, 2, 8)?
                .to_i64()
                .ok_or_else(|| Error::Computation("Castelnuovo number overflows".into()))?;
            push_sigma(&degeneracy_class(), degree)
        },
    );
    c.items
}

fn lattice_items(timing: bool) -> Vec<ReportItem> {
    let mut c = Collector::new("lattice", timing);
    let loc = "Picard lattice of a polarized Nikulin surface of genus 9";
    c.rational("C2", loc, q(16), || {
        let l = nikulin_picard(GENUS)?;
        l.square(&l.c())
    });
    c.rational("e2", loc, q(-4), || {
        let l = nikulin_picard(GENUS)?;
        l.square(&l.e())
    });
    c.rational("vE2", "Mukai vector (4, C + e, 2) of the extension bundle", q(-4), || {
        let l = nikulin_picard(GENUS)?;
        let v = MukaiVector::new(4, l.c().add(&l.e()), 2);
        mukai_pairing(&l, &v, &v)
    });
    c.rational("slope", "slope of the extension bundle with respect to C", q(4), || {
        let l = nikulin_picard(GENUS)?;
        slope(&l, &l.c().add(&l.e()), 4, &l.c())
    });
    let forced = || -> Result<(i64, i64)> {
        stability_obstruction_report(GENUS)?
            .forced
            .ok_or_else(|| Error::Computation("no admissible destabilizing subsheaf".into()))
    };
    c.rational("destabilizer.rank", "maximal destabilizing subsheaf", q(3), || Ok(q(forced()?.0)));
    c.rational("destabilizer.a", "maximal destabilizing subsheaf", q(1), || Ok(q(forced()?.1)));
    c.items
}

fn pencil_items(curves: &TestCurves, timing: bool) -> Vec<ReportItem> {
    let mut c = Collector::new("pencil", timing);
    let spec = PencilSpec::octic_pencil();
    c.rational("R.c2", "Euler number of the blown-up plane", q(31), || Ok(q(noether_c2(&spec.surface))));
    c.rational("R.boundary_total", "singular members of the octic pencil", q(63), || {
        Ok(q(pencil_boundary_total(&spec)))
    });
    let expected = [
        ("R", head(9, 47, 0, q(8))),
        ("Xi", head(10, 56, 0, q(8))),
        (
            "A",
            vec![
                (Label::Lambda, q(2621430)),
                (Label::Delta0p, q(9437040)),
                (Label::Delta0pp, q(72)),
                (Label::Delta0Ram, q(4718592)),
            ],
        ),
    ];
    let locations = [
        ("R", "sweeping pencil of 12-nodal octics"),
        ("Xi", "Lefschetz pencil on a Nikulin surface"),
        ("A", "Prym structures over a K3 Lefschetz pencil"),
    ];
    for ((name, values), (_, loc)) in expected.iter().zip(locations) {
        let curve = curves.named().into_iter().find(|(n, _)| n == name).map(|(_, c)| c.clone());
        // every standard test curve misses δ₁
        for (label, value) in values.iter().chain([&(Label::Delta(1), q(0))]) {
            let curve = curve.clone();
            c.rational(&format!("{name}.{}", label.name(GENUS)), loc, value.clone(), move || {
                Ok(curve.expect("named curve").pairing(*label))
            });
        }
    }
    for (tag, alpha) in [("0", q(0)), ("1", q(1)), ("187_2", qf(187, 2))] {
        c.rational(&format!("R.D9.alpha{tag}"), "R against the Brill–Noether divisor", q(102), || {
            pair(&curves.r, &d9_class(&alpha)?)
        });
    }
    c.rational("Xi.D9", "Nikulin pencil against the Brill–Noether divisor", q(0), || {
        pair(&curves.xi, &d9_class(&q(0))?)
    });
    c.rational("castelnuovo", "number of g²₈ on a general genus-9 curve", q(42), || {
        Ok(Q::from_integer(castelnuovo_number(9, 2, 8)?.into()))
    });
    c.rational("octic_genus", "genus of a 12-nodal plane octic", q(9), || Ok(q(plane_curve_genus(8, 12)?)));
    c.rational("expdim.octic", "octics singular at 12 points", q(8), || {
        Ok(q(expected_dim_linear_system(8, &[2; 12])?.value))
    });
    c.rational("expdim.quartic", "quartics through 12 points", q(2), || {
        Ok(q(expected_dim_linear_system(4, &[1; 12])?.value))
    });
    c.rational("reducible_codim", "codimension of reducible 12-nodal octics", q(4), || {
        Ok(q(reducible_locus_codim()?.codim))
    });
    c.items
}

fn cone_items(curves: &TestCurves, timing: bool, notes: &mut Vec<String>) -> Vec<ReportItem> {
    let mut c = Collector::new("cone", timing);
    let report = certify_with(curves);
    let rep = |f: &dyn Fn(&ConeReport) -> Result<String>| -> Result<String> {
        match &report {
            Ok(r) => f(r),
            Err(e) => Err(e.clone()),
        }
    };
    let loc = "moving-curve certificate for the genus-9 canonical class";
    c.check("R.K", "R against the canonical class", fmt_q(&q(-1)), || rep(&|r| Ok(fmt_q(&r.r_dot_k))));
    c.check("lp.min", loc, "0".into(), || {
        rep(&|r| Ok(r.minimum().map(fmt_q).unwrap_or_else(|| r.solution.status().into())))
    });
    c.check("lp.violations", loc, "0".into(), || rep(&|r| Ok(r.check.violations.len().to_string())));
    c.check("lp.reduced_min", "the same program with b0ram eliminated", "0".into(), || {
        rep(&|r| Ok(r.reduced_minimum.as_ref().map(fmt_q).unwrap_or_else(|| "none".into())))
    });
    c.check("lp.rescaled", "the same program rescaled by 7/3", "consistent".into(), || {
        rep(&|r| Ok(if r.rescaled_consistent { "consistent" } else { "inconsistent" }.into()))
    });
    c.check("flipped.status", "maximizing R·D′ instead", "unbounded".into(), || {
        rep(&|r| {
            let ok = r.flipped_check.passed();
            Ok(format!("{}{}", r.flipped.status(), if ok { "" } else { " (unverified)" }))
        })
    });
    c.check("flipped.b0p_rate", "objective rate along the b0p ray", "-9".into(), || {
        rep(&|r| match &r.b0p_ray {
            Some((ray, check)) if check.passed() => Ok(fmt_q(&ray.rate)),
            Some(_) => Ok("unverified".into()),
            None => Ok("none".into()),
        })
    });
    c.check("interior", "strictly feasible point of the constraint system", "exists".into(), || {
        rep(&|r| Ok(if r.interior_point.is_some() { "exists" } else { "none" }.into()))
    });
    c.check("ratio.exact", "exact bound a ≤ κ·b0p on the reduced system", fmt_q(&exact_ratio_value()), || {
        rep(&|r| Ok(r.exact_ratio.as_ref().map(fmt_q).unwrap_or_else(|| "none".into())))
    });
    c.check("conclusion", loc, "not_pseudo_effective".into(), || {
        rep(&|r| {
            Ok(if r.conclusion.established() {
                "not_pseudo_effective".into()
            } else {
                r.conclusion.to_string()
            })
        })
    });
    if let Ok(r) = &report {
        notes.push(format!(
            "LP variables omitted because every test curve pairs to zero with them: {}",
            r.omitted_variables.join(", ")
        ));
        if r.rounded_bound_implied() == Some(false) {
            notes.push(format!(
                "the coarser bound a ≤ (36/5)·b0p does not follow from the exact constraints (exact κ = {}); R·D′ ≥ 0 is certified directly",
                r.exact_ratio.as_ref().map(fmt_q).unwrap_or_default()
            ));
        }
        notes.push(format!("LP certificate sha256 {}", r.certificate_digest));
        notes.push(format!("conclusion: {}", r.conclusion));
    }
    c.items
}

/// `23593104/3276810`, the `b0p : a` coefficient ratio of the reduced `A` row.
fn exact_ratio_value() -> Q {
    Q::new(23593104.into(), 3276810.into())
}

fn selected(only: &Option<String>, module: &str) -> bool {
    match only {
        None => true,
        Some(o) => o == module || o.starts_with(&format!("{module}.")),
    }
}

fn filter_items(only: &Option<String>, items: Vec<ReportItem>) -> Vec<ReportItem> {
    match only {
        Some(o) if !MODULES.contains(&o.as_str()) => items
            .into_iter()
            .filter(|i| i.claim_id == *o || i.claim_id.starts_with(&format!("{o}.")))
            .collect(),
        _ => items,
    }
}

/// Runs every selected claim. Errors only on invalid options.
pub fn verify_all(opts: &VerifyOptions) -> Result<VerificationReport> {
    if let Some(o) = &opts.only {
        if !MODULES.iter().any(|m| selected(&opts.only, m)) {
            return Err(Error::InvalidInput(format!(
                "`{o}` is neither a module ({}) nor a claim id",
                MODULES.join(", ")
            )));
        }
    }
    let mut curves = TestCurves::standard()?;
    for p in &opts.perturbations {
        curves.perturb_str(p)?;
    }
    let t = opts.timing;
    let run = |module: &str| -> (Vec<ReportItem>, Vec<String>) {
        let mut notes = Vec::new();
        let items = match module {
            "divisor" => divisor_items(t),
            "grr" => grr_items(t),
            "lattice" => lattice_items(t),
            "pencil" => pencil_items(&curves, t),
            _ => cone_items(&curves, t, &mut notes),
        };
        (items, notes)
    };
    let modules: Vec<&str> = MODULES.iter().copied().filter(|m| selected(&opts.only, m)).collect();
    let results: Vec<(Vec<ReportItem>, Vec<String>)> = if opts.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = modules.iter().map(|m| s.spawn(|| run(m))).collect();
            handles.into_iter().map(|h| h.join().expect("module thread panicked")).collect()
        })
    } else {
        modules.iter().map(|m| run(m)).collect()
    };
    let mut items = Vec::new();
    let mut notes = Vec::new();
    for (i, n) in results {
        items.extend(i);
        notes.extend(n);
    }
    let items = filter_items(&opts.only, items);
    if items.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no claim matches `{}`",
            opts.only.as_deref().unwrap_or_default()
        )));
    }
    let overall = if items.iter().all(|i| i.status == Status::Pass) {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(VerificationReport { items, overall, notes })
}

/// JSON form of a certifier run, including the LP and its certificate.
pub fn cone_report_json(r: &ConeReport) -> Value {
    let constraints: Vec<Value> = r
        .lp
        .constraints
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "coeffs": c.coeffs.iter().map(fmt_q).collect::<Vec<_>>(),
                "sense": c.sense.symbol(),
                "rhs": fmt_q(&c.rhs),
            })
        })
        .collect();
    let certificate: Value = serde_json::from_str(&r.certificate_json).unwrap_or(Value::Null);
    json!({
        "r_dot_k": fmt_q(&r.r_dot_k),
        "lp": {
            "variables": r.lp.variables,
            "constraints": constraints,
            "objective": r.lp.objective.iter().map(fmt_q).collect::<Vec<_>>(),
        },
        "certificate": certificate,
        "certificate_sha256": r.certificate_digest,
        "certificate_verified": r.check.passed(),
        "flipped_status": r.flipped.status(),
        "reduced_minimum": r.reduced_minimum.as_ref().map(fmt_q),
        "interior_point": r.interior_point.as_ref().map(|p| p.iter().map(fmt_q).collect::<Vec<_>>()),
        "exact_ratio": r.exact_ratio.as_ref().map(fmt_q),
        "rounded_ratio_implied": r.rounded_bound_implied(),
        "omitted_variables": r.omitted_variables,
        "axioms": r.axioms,
        "steps": r.steps,
        "conclusion": r.conclusion,
        "conclusion_text": r.conclusion.to_string(),
    })
}

/// Whether the certifier's minimum is a verified optimum.
pub fn has_verified_optimum(r: &ConeReport) -> bool {
    matches!(r.solution, Solution::Optimal(_)) && r.check.passed() && r.minimum().is_some_and(|m| !m.is_negative())
}
