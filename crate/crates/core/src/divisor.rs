//! Divisor and curve classes on the compactified Prym moduli space.
//!
//! The rational Picard group is free on the Hodge class `λ`, the three
//! irreducible-node boundary classes `δ₀′`, `δ₀″`, `δ₀^ram`, and for every
//! `1 ≤ i ≤ ⌊g/2⌋` the triple `δ_i`, `δ_{g−i}`, `δ_{i:g−i}`. Classes are
//! stored as dense coefficient vectors in that fixed order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, q, qf, Q};

/// One generator of the Picard group.
///
/// The boundary variants carry the index `i` of the triple they belong to,
/// so `Complement(i)` is `δ_{g−i}` and `Mixed(i)` is `δ_{i:g−i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Lambda,
    Delta0p,
    Delta0pp,
    Delta0Ram,
    Delta(u32),
    Complement(u32),
    Mixed(u32),
}

impl Label {
    /// ASCII name used in JSON and on the command line.
    pub fn name(&self, genus: u32) -> String {
        match *self {
            Label::Lambda => "lambda".into(),
            Label::Delta0p => "delta0p".into(),
            Label::Delta0pp => "delta0pp".into(),
            Label::Delta0Ram => "delta0ram".into(),
            Label::Delta(i) => format!("delta{i}"),
            // for even g the middle triple would otherwise repeat `delta{g/2}`
            Label::Complement(i) if 2 * i == genus => format!("delta{i}b"),
            Label::Complement(i) => format!("delta{}", genus - i),
            Label::Mixed(i) => format!("delta{}:{}", i, genus - i),
        }
    }

    /// Typeset name for human-readable output.
    pub fn pretty(&self, genus: u32) -> String {
        match *self {
            Label::Lambda => "λ".into(),
            Label::Delta0p => "δ₀′".into(),
            Label::Delta0pp => "δ₀″".into(),
            Label::Delta0Ram => "δ₀^ram".into(),
            Label::Delta(i) => format!("δ{}", subscript(i)),
            Label::Complement(i) if 2 * i == genus => format!("δ{}′", subscript(i)),
            Label::Complement(i) => format!("δ{}", subscript(genus - i)),
            Label::Mixed(i) => format!("δ{}:{}", subscript(i), subscript(genus - i)),
        }
    }
}

fn subscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

/// The ordered generator list of `Pic(R̄_g) ⊗ Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrymBasis {
    genus: u32,
}

impl PrymBasis {
    pub fn new(genus: u32) -> Result<Self> {
        if genus < 2 {
            return Err(Error::genus(genus, "Prym boundary basis needs g >= 2"));
        }
        Ok(Self { genus })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn half(&self) -> u32 {
        self.genus / 2
    }

    pub fn len(&self) -> usize {
        4 + 3 * self.half() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> Vec<Label> {
        let mut out = vec![
            Label::Lambda,
            Label::Delta0p,
            Label::Delta0pp,
            Label::Delta0Ram,
        ];
        for i in 1..=self.half() {
            out.extend([Label::Delta(i), Label::Complement(i), Label::Mixed(i)]);
        }
        out
    }

    pub fn index(&self, label: Label) -> Result<usize> {
        let check = |i: u32| {
            if i == 0 || i > self.half() {
                Err(Error::UnknownLabel(format!(
                    "{label:?} outside genus {}",
                    self.genus
                )))
            } else {
                Ok(4 + 3 * (i as usize - 1))
            }
        };
        match label {
            Label::Lambda => Ok(0),
            Label::Delta0p => Ok(1),
            Label::Delta0pp => Ok(2),
            Label::Delta0Ram => Ok(3),
            Label::Delta(i) => check(i),
            Label::Complement(i) => check(i).map(|k| k + 1),
            Label::Mixed(i) => check(i).map(|k| k + 2),
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.labels().iter().map(|l| l.name(self.genus)).collect()
    }

    pub fn parse_label(&self, name: &str) -> Result<Label> {
        self.labels()
            .into_iter()
            .find(|l| l.name(self.genus) == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    fn check_same(&self, other: &PrymBasis) -> Result<()> {
        if self != other {
            return Err(Error::BasisMismatch {
                left: self.genus,
                right: other.genus,
            });
        }
        Ok(())
    }
}

/// A divisor class with exact rational coefficients.
///
/// `partial` marks classes only known on the partial compactification, where
/// the coefficients of `δ_i`, `δ_{g−i}`, `δ_{i:g−i}` are not determined and
/// are stored as zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    basis: PrymBasis,
    coeffs: Vec<Q>,
    partial: bool,
}

impl DivisorClass {
    pub fn zero(basis: PrymBasis) -> Self {
        Self {
            basis,
            coeffs: vec![Q::zero(); basis.len()],
            partial: false,
        }
    }

    pub fn from_terms<I>(basis: PrymBasis, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Label, Q)>,
    {
        let mut d = Self::zero(basis);
        for (label, c) in terms {
            let k = basis.index(label)?;
            d.coeffs[k] += c;
        }
        Ok(d)
    }

    pub fn basis(&self) -> PrymBasis {
        self.basis
    }

    pub fn genus(&self) -> u32 {
        self.basis.genus
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, label: Label) -> Q {
        self.basis
            .index(label)
            .map(|k| self.coeffs[k].clone())
            .unwrap_or_else(|_| Q::zero())
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    /// Marks the class as known only modulo the higher boundary.
    pub fn into_partial(mut self) -> Self {
        self.partial = true;
        for c in self.coeffs.iter_mut().skip(4) {
            *c = Q::zero();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.basis.check_same(&other.basis)?;
        Ok(DivisorClass {
            basis: self.basis,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            partial: self.partial || other.partial,
        })
    }

    pub fn scale(&self, k: &Q) -> DivisorClass {
        DivisorClass {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            partial: self.partial,
        }
    }

    pub fn to_json(&self) -> Value {
        labelled_json(self.basis, "coeffs", &self.coeffs, self.partial)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (basis, coeffs) = parse_labelled_json(v, "coeffs")?;
        let partial = v.get("partial").and_then(Value::as_bool).unwrap_or(false);
        Ok(Self {
            basis,
            coeffs,
            partial,
        })
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .basis
            .labels()
            .iter()
            .zip(&self.coeffs)
            .map(|(l, c)| (l.pretty(self.basis.genus), c.clone()))
            .collect::<Vec<_>>();
        f.write_str(&format_linear(&terms))
    }
}

/// Renders `Σ c·x` with signs folded into the separators, e.g. `366λ − 52δ₀′`.
pub(crate) fn format_linear(terms: &[(String, Q)]) -> String {
    let mut out = String::new();
    for (name, c) in terms.iter().filter(|(_, c)| !c.is_zero()) {
        let mag = c.abs();
        let body = if name.is_empty() {
            mag.to_string()
        } else if mag == q(1) {
            name.clone()
        } else if mag.is_integer() {
            format!("{mag}{name}")
        } else {
            format!("({mag}){name}")
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('−');
            }
        } else {
            out.push_str(if c.is_negative() { " − " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A one-parameter family recorded by its intersection numbers with the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClass {
    basis: PrymBasis,
    pairings: Vec<Q>,
}

impl CurveClass {
    pub fn zero(basis: PrymBasis) -> Self {
        Self {
            basis,
            pairings: vec![Q::zero(); basis.len()],
        }
    }

    pub fn from_terms<I>(basis: PrymBasis, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Label, Q)>,
    {
        let mut c = Self::zero(basis);
        for (label, v) in terms {
            let k = basis.index(label)?;
            c.pairings[k] = v;
        }
        Ok(c)
    }

    pub fn basis(&self) -> PrymBasis {
        self.basis
    }

    pub fn pairings(&self) -> &[Q] {
        &self.pairings
    }

    pub fn pairing(&self, label: Label) -> Q {
        self.basis
            .index(label)
            .map(|k| self.pairings[k].clone())
            .unwrap_or_else(|_| Q::zero())
    }

    pub fn with_pairing(mut self, label: Label, value: Q) -> Result<Self> {
        let k = self.basis.index(label)?;
        self.pairings[k] = value;
        Ok(self)
    }

    /// The `(λ, δ₀′, δ₀″, δ₀^ram)` part.
    pub fn head(&self) -> [Q; 4] {
        [
            self.pairings[0].clone(),
            self.pairings[1].clone(),
            self.pairings[2].clone(),
            self.pairings[3].clone(),
        ]
    }

    pub fn to_json(&self) -> Value {
        labelled_json(self.basis, "pairings", &self.pairings, false)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (basis, pairings) = parse_labelled_json(v, "pairings")?;
        Ok(Self { basis, pairings })
    }
}

fn labelled_json(basis: PrymBasis, key: &str, values: &[Q], partial: bool) -> Value {
    let mut m = Map::new();
    for (name, c) in basis.names().into_iter().zip(values) {
        m.insert(name, Value::String(fmt_q(c)));
    }
    let mut root = Map::new();
    root.insert("genus".into(), Value::from(basis.genus));
    root.insert(key.into(), Value::Object(m));
    if partial {
        root.insert("partial".into(), Value::Bool(true));
    }
    Value::Object(root)
}

fn parse_labelled_json(v: &Value, key: &str) -> Result<(PrymBasis, Vec<Q>)> {
    let genus = v
        .get("genus")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput("missing integer `genus`".into()))?;
    let basis = PrymBasis::new(genus as u32)?;
    let map = v
        .get(key)
        .and_then(Value::as_object)
        .ok_or_else(|| Error::InvalidInput(format!("missing object `{key}`")))?;
    let mut values = vec![Q::zero(); basis.len()];
    for (name, raw) in map {
        let label = basis.parse_label(name)?;
        let s = raw
            .as_str()
            .ok_or_else(|| Error::InvalidInput(format!("`{name}` must be a rational string")))?;
        values[basis.index(label)?] = parse_q(s)?;
    }
    Ok((basis, values))
}

/// Diagnostics attached to a pairing of a curve with a partial class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingWarning {
    pub label: String,
    pub curve_value: Q,
}

/// Evaluates `curve · divisor`.
pub fn pair(curve: &CurveClass, divisor: &DivisorClass) -> Result<Q> {
    let (value, warnings) = pair_checked(curve, divisor)?;
    for w in &warnings {
        log::warn!(
            "pairing a partial class against a curve meeting {} ({}); value is only valid modulo the higher boundary",
            w.label,
            w.curve_value
        );
    }
    Ok(value)
}

/// Like [`pair`], but returns the higher-boundary warnings instead of logging.
pub fn pair_checked(curve: &CurveClass, divisor: &DivisorClass) -> Result<(Q, Vec<PairingWarning>)> {
    curve.basis.check_same(&divisor.basis)?;
    let value = curve
        .pairings
        .iter()
        .zip(&divisor.coeffs)
        .map(|(a, b)| a * b)
        .sum();
    let mut warnings = Vec::new();
    if divisor.partial {
        let labels = curve.basis.labels();
        for (k, v) in curve.pairings.iter().enumerate().skip(4) {
            if !v.is_zero() {
                warnings.push(PairingWarning {
                    label: labels[k].name(curve.basis.genus),
                    curve_value: v.clone(),
                });
            }
        }
    }
    Ok((value, warnings))
}

/// `13λ − 2(δ₀′+δ₀″) − 3δ₀^ram − 3(δ₁+δ_{g−1}+δ_{1:g−1}) − 2Σ_{i≥2}(δ_i+δ_{g−i}+δ_{i:g−i})`.
pub fn canonical_class(genus: u32) -> Result<DivisorClass> {
    let basis = PrymBasis::new(genus)?;
    let mut terms = vec![
        (Label::Lambda, q(13)),
        (Label::Delta0p, q(-2)),
        (Label::Delta0pp, q(-2)),
        (Label::Delta0Ram, q(-3)),
    ];
    for i in 1..=basis.half() {
        let c = if i == 1 { q(-3) } else { q(-2) };
        terms.extend([
            (Label::Delta(i), c.clone()),
            (Label::Complement(i), c.clone()),
            (Label::Mixed(i), c),
        ]);
    }
    DivisorClass::from_terms(basis, terms)
}

/// Generators of `Pic(M̄_g) ⊗ Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MgLabel {
    Lambda,
    Delta0,
    Delta(u32),
}

impl FromStr for MgLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(MgLabel::Lambda),
            "delta0" => Ok(MgLabel::Delta0),
            _ => s
                .strip_prefix("delta")
                .and_then(|n| n.parse::<u32>().ok())
                .filter(|&i| i > 0)
                .map(MgLabel::Delta)
                .ok_or_else(|| Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Pulls a class back along the forgetful map `R̄_g → M̄_g`.
pub fn pullback_from_mg(genus: u32, mg_class: &BTreeMap<MgLabel, Q>) -> Result<DivisorClass> {
    let basis = PrymBasis::new(genus)?;
    let mut terms = Vec::new();
    for (label, c) in mg_class {
        match *label {
            MgLabel::Lambda => terms.push((Label::Lambda, c.clone())),
            MgLabel::Delta0 => terms.extend([
                (Label::Delta0p, c.clone()),
                (Label::Delta0pp, c.clone()),
                (Label::Delta0Ram, c * q(2)),
            ]),
            MgLabel::Delta(i) => {
                if i == 0 || i > basis.half() {
                    return Err(Error::InvalidInput(format!(
                        "δ_{i} is not a generator of Pic(M̄_{genus}) (need 1 ≤ i ≤ {})",
                        basis.half()
                    )));
                }
                terms.extend([
                    (Label::Delta(i), c.clone()),
                    (Label::Complement(i), c.clone()),
                    (Label::Mixed(i), c.clone()),
                ]);
            }
        }
    }
    DivisorClass::from_terms(basis, terms)
}

/// Class of the genus-9 Brill–Noether divisor on the partial compactification,
/// `366λ − 52δ₀′ − (52+α)δ₀″ − (187/2)δ₀^ram`.
pub fn d9_class(alpha: &Q) -> Result<DivisorClass> {
    if alpha.is_negative() {
        return Err(Error::InvalidInput(format!(
            "the δ₀″ correction must be nonnegative, got {alpha}"
        )));
    }
    let basis = PrymBasis::new(9)?;
    let d = DivisorClass::from_terms(
        basis,
        [
            (Label::Lambda, q(366)),
            (Label::Delta0p, q(-52)),
            (Label::Delta0pp, q(-52) - alpha),
            (Label::Delta0Ram, qf(-187, 2)),
        ],
    )?;
    Ok(d.into_partial())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r_curve() -> CurveClass {
        CurveClass::from_terms(
            PrymBasis::new(9).unwrap(),
            [
                (Label::Lambda, q(9)),
                (Label::Delta0p, q(47)),
                (Label::Delta0pp, q(0)),
                (Label::Delta0Ram, q(8)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn basis_layout() {
        let b = PrymBasis::new(9).unwrap();
        assert_eq!(b.len(), 16);
        let names = b.names();
        assert_eq!(&names[..7], &["lambda", "delta0p", "delta0pp", "delta0ram", "delta1", "delta8", "delta1:8"]);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert!(PrymBasis::new(1).is_err());
    }

    #[test]
    fn even_genus_labels_stay_unique() {
        for g in 2..=12 {
            let b = PrymBasis::new(g).unwrap();
            let mut names = b.names();
            assert_eq!(names.len(), 4 + 3 * (g as usize / 2));
            names.sort();
            names.dedup();
            assert_eq!(names.len(), b.len(), "genus {g}");
        }
    }

    #[test]
    fn canonical_class_genus_nine() {
        let k = canonical_class(9).unwrap();
        assert_eq!(k.coeff(Label::Lambda), q(13));
        assert_eq!(k.coeff(Label::Delta0p), q(-2));
        assert_eq!(k.coeff(Label::Delta0pp), q(-2));
        assert_eq!(k.coeff(Label::Delta0Ram), q(-3));
        assert_eq!(k.coeff(Label::Delta(2)), q(-2));
        assert_eq!(k.coeff(Label::Delta(1)), q(-3));
        assert_eq!(k.coeff(Label::Complement(1)), q(-3));
        assert_eq!(k.coeff(Label::Mixed(1)), q(-3));
        assert_eq!(k.coeff(Label::Mixed(4)), q(-2));
    }

    #[test]
    fn canonical_class_genus_two() {
        let k = canonical_class(2).unwrap();
        assert_eq!(k.coeffs().len(), 7);
        assert_eq!(k.coeff(Label::Delta(1)), q(-3));
        assert_eq!(k.coeff(Label::Complement(1)), q(-3));
        assert_eq!(k.coeff(Label::Mixed(1)), q(-3));
        assert!(matches!(canonical_class(1), Err(Error::InvalidGenus { .. })));
    }

    #[test]
    fn pullback_examples() {
        let mut m = BTreeMap::new();
        m.insert(MgLabel::Delta0, q(1));
        let d = pullback_from_mg(9, &m).unwrap();
        assert_eq!(d.coeff(Label::Delta0p), q(1));
        assert_eq!(d.coeff(Label::Delta0pp), q(1));
        assert_eq!(d.coeff(Label::Delta0Ram), q(2));
        assert_eq!(d.coeff(Label::Lambda), q(0));

        let mut m = BTreeMap::new();
        m.insert(MgLabel::Delta(2), q(1));
        let d = pullback_from_mg(9, &m).unwrap();
        assert_eq!(d.coeff(Label::Delta(2)), q(1));
        assert_eq!(d.coeff(Label::Complement(2)), q(1));
        assert_eq!(d.coeff(Label::Mixed(2)), q(1));
        assert_eq!(d.to_json()["coeffs"]["delta7"], "1");
        assert_eq!(d.to_json()["coeffs"]["delta2:7"], "1");

        assert!(pullback_from_mg(9, &BTreeMap::new()).unwrap().is_zero());

        let mut bad = BTreeMap::new();
        bad.insert(MgLabel::Delta(5), q(1));
        assert!(matches!(pullback_from_mg(9, &bad), Err(Error::InvalidInput(_))));
        assert!("delta0x".parse::<MgLabel>().is_err());
        assert_eq!("delta3".parse::<MgLabel>().unwrap(), MgLabel::Delta(3));
    }

    #[test]
    fn d9_alpha_shift() {
        let d = d9_class(&q(0)).unwrap();
        assert_eq!(
            &d.coeffs()[..4],
            &[q(366), q(-52), q(-52), qf(-187, 2)]
        );
        assert!(d.is_partial());
        let d1 = d9_class(&q(1)).unwrap();
        assert_eq!(d1.coeff(Label::Delta0pp), q(-53));
        assert_eq!(d1.coeff(Label::Lambda), q(366));
        assert_eq!(d1.coeff(Label::Delta0Ram), qf(-187, 2));
        assert_eq!(d9_class(&qf(3, 2)).unwrap().coeff(Label::Delta0pp), qf(-107, 2));
        assert!(d9_class(&q(-1)).is_err());
    }

    #[test]
    fn pairing_examples() {
        let r = r_curve();
        assert_eq!(pair(&r, &canonical_class(9).unwrap()).unwrap(), q(-1));
        for alpha in [q(0), q(1), q(7)] {
            assert_eq!(pair(&r, &d9_class(&alpha).unwrap()).unwrap(), q(102));
        }
        assert_eq!(pair(&r, &DivisorClass::zero(r.basis())).unwrap(), q(0));
        let other = canonical_class(8).unwrap();
        assert!(matches!(pair(&r, &other), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn partial_class_warns_on_higher_boundary() {
        let r = r_curve().with_pairing(Label::Delta(1), q(2)).unwrap();
        let (_, warnings) = pair_checked(&r, &d9_class(&q(0)).unwrap()).unwrap();
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].label, "delta1");
        let (_, none) = pair_checked(&r, &canonical_class(9).unwrap()).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn json_round_trip_and_ordering() {
        let d = d9_class(&q(0)).unwrap();
        let v = d.to_json();
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.starts_with(r#"{"genus":9,"coeffs":{"lambda":"366","delta0p":"-52","delta0pp":"-52","delta0ram":"-187/2","delta1":"0""#));
        assert_eq!(DivisorClass::from_json(&v).unwrap(), d);
        let c = r_curve();
        assert_eq!(CurveClass::from_json(&c.to_json()).unwrap(), c);
        let bad = serde_json::json!({"genus": 9, "coeffs": {"delta42": "1"}});
        assert!(matches!(DivisorClass::from_json(&bad), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn display() {
        let d = d9_class(&q(0)).unwrap();
        assert_eq!(d.to_string(), "366λ − 52δ₀′ − 52δ₀″ − (187/2)δ₀^ram");
        let k = canonical_class(2).unwrap();
        assert_eq!(k.to_string(), "13λ − 2δ₀′ − 2δ₀″ − 3δ₀^ram − 3δ₁ − 3δ₁′ − 3δ₁:₁");
    }
}
