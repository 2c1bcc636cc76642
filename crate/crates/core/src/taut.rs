//! Degree-2 tautological bookkeeping on the universal Prym curve.
//!
//! [`FiberRingElement`] lives on the total space of the universal curve
//! `f: 𝒞 → 𝓡𝓖` and is truncated above degree 2. [`BaseRingElement`] is a
//! linear combination of divisor symbols on the base. The fibre pushforward
//! `f_*` is driven by an explicit [`PushRules`] table, and the finite map
//! `σ` to the moduli space by [`push_sigma`].

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde_json::{Map, Value};

use crate::divisor::{format_linear, DivisorClass, Label, PrymBasis};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, q, qf, Q};

/// Generators of the fibre ring.
///
/// Declaration order is the printing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberGen {
    /// `c₁(ℒ)`, the Poincaré bundle.
    L,
    /// `c₁(𝒫)`, the Prym bundle.
    P,
    /// `c₁(ω_f)`.
    W,
    /// `f*c₁(𝒱)`.
    V,
    /// `f*c₂(𝒱)`.
    C2V,
    /// `[Sing(f)]`, the locus of nodes.
    S,
}

impl FiberGen {
    pub const ALL: [FiberGen; 6] = [
        FiberGen::L,
        FiberGen::P,
        FiberGen::W,
        FiberGen::V,
        FiberGen::C2V,
        FiberGen::S,
    ];

    pub fn degree(self) -> u32 {
        match self {
            FiberGen::C2V | FiberGen::S => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FiberGen::L => "l",
            FiberGen::P => "p",
            FiberGen::W => "w",
            FiberGen::V => "V",
            FiberGen::C2V => "C2V",
            FiberGen::S => "S",
        }
    }

    fn pretty(self) -> &'static str {
        match self {
            FiberGen::L => "ℓ",
            FiberGen::P => "p",
            FiberGen::W => "w",
            FiberGen::V => "V",
            FiberGen::C2V => "C2V",
            FiberGen::S => "S",
        }
    }
}

impl FromStr for FiberGen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FiberGen::ALL
            .into_iter()
            .find(|g| g.name() == s || g.pretty() == s)
            .ok_or_else(|| Error::UnsupportedSymbol {
                symbol: s.to_string(),
                reason: "not a generator of the fibre ring".into(),
            })
    }
}

/// A commutative monomial, stored as a sorted list of generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<FiberGen>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut gens: Vec<FiberGen>) -> Self {
        gens.sort();
        Monomial(gens)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|g| g.degree()).sum()
    }

    pub fn gens(&self) -> &[FiberGen] {
        &self.0
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial::new(v)
    }

    pub fn name(&self) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0.iter().map(|g| g.name()).collect::<Vec<_>>().join("*")
    }

    fn pretty(&self) -> String {
        match self.0.as_slice() {
            [] => "1".into(),
            [a, b] if a == b => format!("{}²", a.pretty()),
            gens => gens.iter().map(|g| g.pretty()).collect(),
        }
    }
}

/// Upper bound on the degree of a nonzero fibre-ring monomial.
pub const TRUNCATION_DEGREE: u32 = 2;

/// Element of the fibre ring truncated above degree 2.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiberRingElement {
    terms: BTreeMap<Monomial, Q>,
}

impl FiberRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn gen(g: FiberGen) -> Self {
        Self::term(Monomial::new(vec![g]), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if m.degree() > TRUNCATION_DEGREE || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, k: &Q) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            let d1 = m1.degree();
            for (m2, c2) in &other.terms {
                if d1 + m2.degree() <= TRUNCATION_DEGREE {
                    out.add_term(m1.times(m2), c1 * c2);
                }
            }
        }
        out
    }

    /// The homogeneous component of the given degree.
    pub fn degree_part(&self, degree: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }
}

impl fmt::Display for FiberRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, Q)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let name = if m.0.is_empty() { String::new() } else { m.pretty() };
                (name, c.clone())
            })
            .collect();
        f.write_str(&format_linear(&terms))
    }
}

/// Divisor symbols on the space of linear series over Prym curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseSymbol {
    Lambda,
    /// `𝔞 = f_*(c₁(ℒ)²)`.
    A,
    /// `𝔟 = f_*(c₁(ℒ)·c₁(ω_f))`.
    B,
    /// `c₁(𝒱)`.
    V,
    SigmaDelta0p,
    SigmaDelta0pp,
    SigmaDelta0Ram,
}

impl BaseSymbol {
    pub const ALL: [BaseSymbol; 7] = [
        BaseSymbol::Lambda,
        BaseSymbol::A,
        BaseSymbol::B,
        BaseSymbol::V,
        BaseSymbol::SigmaDelta0p,
        BaseSymbol::SigmaDelta0pp,
        BaseSymbol::SigmaDelta0Ram,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseSymbol::Lambda => "lambda",
            BaseSymbol::A => "a",
            BaseSymbol::B => "b",
            BaseSymbol::V => "v",
            BaseSymbol::SigmaDelta0p => "s_delta0p",
            BaseSymbol::SigmaDelta0pp => "s_delta0pp",
            BaseSymbol::SigmaDelta0Ram => "s_delta0ram",
        }
    }

    fn pretty(self) -> &'static str {
        match self {
            BaseSymbol::Lambda => "λ",
            BaseSymbol::A => "𝔞",
            BaseSymbol::B => "𝔟",
            BaseSymbol::V => "c₁(𝒱)",
            BaseSymbol::SigmaDelta0p => "σ*δ₀′",
            BaseSymbol::SigmaDelta0pp => "σ*δ₀″",
            BaseSymbol::SigmaDelta0Ram => "σ*δ₀^ram",
        }
    }
}

/// Linear combination of [`BaseSymbol`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BaseRingElement {
    terms: BTreeMap<BaseSymbol, Q>,
}

impl BaseRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (BaseSymbol, Q)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (s, c) in terms {
            e.add_term(s, c);
        }
        e
    }

    pub fn symbol(s: BaseSymbol) -> Self {
        Self::from_terms([(s, Q::one())])
    }

    fn add_term(&mut self, s: BaseSymbol, c: Q) {
        let entry = self.terms.entry(s).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn coeff(&self, s: BaseSymbol) -> Q {
        self.terms.get(&s).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::from_terms(self.terms.iter().map(|(s, c)| (*s, c * k)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (BaseSymbol, &Q)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for s in BaseSymbol::ALL {
            m.insert(s.name().into(), Value::String(fmt_q(&self.coeff(s))));
        }
        Value::Object(m)
    }
}

impl fmt::Display for BaseRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, Q)> = self
            .terms
            .iter()
            .map(|(s, c)| (s.pretty().to_string(), c.clone()))
            .collect();
        f.write_str(&format_linear(&terms))
    }
}

fn fiber(g: FiberGen) -> FiberRingElement {
    FiberRingElement::gen(g)
}

fn base(terms: &[(BaseSymbol, Q)]) -> BaseRingElement {
    BaseRingElement::from_terms(terms.iter().cloned())
}

/// `σ*(δ₀′ + δ₀″ + 2δ₀^ram)`, the pushforward of the node locus.
fn node_pushforward() -> BaseRingElement {
    base(&[
        (BaseSymbol::SigmaDelta0p, q(1)),
        (BaseSymbol::SigmaDelta0pp, q(1)),
        (BaseSymbol::SigmaDelta0Ram, q(2)),
    ])
}

/// Table of `f_*` values on degree-2 monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushRules {
    rules: BTreeMap<Monomial, BaseRingElement>,
}

impl PushRules {
    /// The rule table for the universal Prym curve with a `g²₈` attached.
    pub fn standard() -> Self {
        use FiberGen::*;
        let m2 = |a, b| Monomial::new(vec![a, b]);
        let mut rules = BTreeMap::new();
        rules.insert(m2(L, L), BaseRingElement::symbol(BaseSymbol::A));
        rules.insert(m2(L, W), BaseRingElement::symbol(BaseSymbol::B));
        // Mumford
        rules.insert(
            m2(W, W),
            base(&[(BaseSymbol::Lambda, q(12))]).sub(&node_pushforward()),
        );
        rules.insert(m2(P, P), base(&[(BaseSymbol::SigmaDelta0Ram, qf(-1, 2))]));
        rules.insert(m2(P, W), BaseRingElement::zero());
        rules.insert(m2(L, P), BaseRingElement::zero());
        rules.insert(m2(P, V), BaseRingElement::zero());
        rules.insert(m2(W, V), base(&[(BaseSymbol::V, q(16))]));
        rules.insert(m2(L, V), base(&[(BaseSymbol::V, q(8))]));
        // pulled back from the base twice: dies under f_*
        rules.insert(m2(V, V), BaseRingElement::zero());
        rules.insert(Monomial::new(vec![C2V]), BaseRingElement::zero());
        rules.insert(Monomial::new(vec![S]), node_pushforward());
        Self { rules }
    }

    /// Replaces one rule, for sensitivity experiments.
    pub fn with_rule(mut self, monomial: Monomial, value: BaseRingElement) -> Result<Self> {
        if monomial.degree() != 2 {
            return Err(Error::Contract(format!(
                "push rules are indexed by degree-2 monomials, got {}",
                monomial.name()
            )));
        }
        self.rules.insert(monomial, value);
        Ok(self)
    }

    pub fn get(&self, m: &Monomial) -> Option<&BaseRingElement> {
        self.rules.get(m)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Audit dump: `{ "l*l": {"a": "1", ...}, ... }`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (mono, val) in &self.rules {
            let mut inner = Map::new();
            for (s, c) in val.terms() {
                inner.insert(s.name().into(), Value::String(fmt_q(c)));
            }
            m.insert(mono.name(), Value::Object(inner));
        }
        Value::Object(m)
    }
}

impl Default for PushRules {
    fn default() -> Self {
        Self::standard()
    }
}

/// Fibre pushforward of a homogeneous degree-2 element.
pub fn push_f(expr: &FiberRingElement, rules: &PushRules) -> Result<BaseRingElement> {
    let mut out = BaseRingElement::zero();
    for (m, c) in expr.terms() {
        if m.degree() != 2 {
            return Err(Error::Contract(format!(
                "f_* is only defined on degree-2 classes; found {} of degree {}",
                m.name(),
                m.degree()
            )));
        }
        let image = rules.get(m).ok_or_else(|| Error::UnsupportedSymbol {
            symbol: m.name(),
            reason: "no pushforward rule".into(),
        })?;
        out = out.add(&image.scale(c));
    }
    Ok(out)
}

/// Chern classes `(c₁, c₂)` of a rank-2 bundle as fibre-ring elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2Chern {
    pub c1: FiberRingElement,
    pub c2: FiberRingElement,
}

impl Rank2Chern {
    /// The syzygy bundle `ℳ = ker(f*𝒱 → ℒ)`: `c₁ = V − ℓ`, `c₂ = C2V + ℓ² − Vℓ`.
    pub fn syzygy() -> Self {
        let l = fiber(FiberGen::L);
        let v = fiber(FiberGen::V);
        Self {
            c1: v.sub(&l),
            c2: fiber(FiberGen::C2V).add(&l.mul(&l)).sub(&v.mul(&l)),
        }
    }

    /// Twist by a line bundle with first Chern class `x`.
    pub fn twist(&self, x: &FiberRingElement) -> Self {
        Self {
            c1: self.c1.add(&x.scale(&q(2))),
            c2: self.c2.add(&self.c1.mul(x)).add(&x.mul(x)),
        }
    }

    /// `ch = 2 + c₁ + (c₁² − 2c₂)/2`.
    pub fn chern_character(&self) -> FiberRingElement {
        let ch2 = self.c1.mul(&self.c1).scale(&qf(1, 2)).sub(&self.c2);
        FiberRingElement::constant(q(2)).add(&self.c1).add(&ch2)
    }
}

/// Todd class of the relative tangent complex of a family of nodal curves,
/// `1 − w/2 + (w² + S)/12`.
pub fn relative_todd() -> FiberRingElement {
    let w = fiber(FiberGen::W);
    FiberRingElement::constant(q(1))
        .sub(&w.scale(&qf(1, 2)))
        .add(&w.mul(&w).add(&fiber(FiberGen::S)).scale(&qf(1, 12)))
}

/// The three pieces of `f_*[ch(ℳ⊗𝒫)·td]₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrrTerms {
    /// `f_*(ch₂)`.
    pub ch2: BaseRingElement,
    /// `f_*(−½ c₁·w)`.
    pub c1_td1: BaseRingElement,
    /// `f_*(rank·(w² + S)/12)`.
    pub rank_td2: BaseRingElement,
}

impl GrrTerms {
    pub fn total(&self) -> BaseRingElement {
        self.ch2.add(&self.c1_td1).add(&self.rank_td2)
    }
}

/// Splits the GRR integrand for `ℳ⊗𝒫` into its three degree-2 pieces.
pub fn grr_terms(rules: &PushRules) -> Result<GrrTerms> {
    let bundle = Rank2Chern::syzygy().twist(&fiber(FiberGen::P));
    let ch = bundle.chern_character();
    let td = relative_todd();
    let ch2 = push_f(&ch.degree_part(2), rules)?;
    let c1_td1 = push_f(&ch.degree_part(1).mul(&td.degree_part(1)), rules)?;
    let rank_td2 = push_f(&ch.degree_part(0).mul(&td.degree_part(2)), rules)?;
    let terms = GrrTerms {
        ch2,
        c1_td1,
        rank_td2,
    };
    // the split must agree with the full truncated product
    debug_assert_eq!(
        push_f(&ch.mul(&td).degree_part(2), rules).ok(),
        Some(terms.total())
    );
    Ok(terms)
}

/// `c₁(𝒜)` for `𝒜 = R¹f_*(ℳ⊗𝒫)`, using `f_*(ℳ⊗𝒫) = 0`.
pub fn c1_a_with(rules: &PushRules) -> Result<BaseRingElement> {
    Ok(grr_terms(rules)?.total().scale(&q(-1)))
}

pub fn c1_a() -> BaseRingElement {
    c1_a_with(&PushRules::standard()).expect("standard rule table is complete")
}

/// Inputs for `c₁(ℬ)` where `ℬ = 𝒱 ⊗ R¹f_*𝒫`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorInputs {
    pub rank_v: u32,
    pub rank_r1p: u32,
    pub c1_r1p: BaseRingElement,
}

impl TensorInputs {
    /// `rank 𝒱 = 3`, `rank R¹f_*𝒫 = 8`, `c₁(R¹f_*𝒫) = −λ + σ*δ₀^ram/4`.
    pub fn standard() -> Self {
        Self {
            rank_v: 3,
            rank_r1p: 8,
            c1_r1p: base(&[
                (BaseSymbol::Lambda, q(-1)),
                (BaseSymbol::SigmaDelta0Ram, qf(1, 4)),
            ]),
        }
    }
}

/// `c₁(𝒱⊗W) = rank(W)·c₁(𝒱) + rank(𝒱)·c₁(W)`.
pub fn c1_b_with(inputs: &TensorInputs) -> BaseRingElement {
    BaseRingElement::symbol(BaseSymbol::V)
        .scale(&q(inputs.rank_r1p as i64))
        .add(&inputs.c1_r1p.scale(&q(inputs.rank_v as i64)))
}

pub fn c1_b() -> BaseRingElement {
    c1_b_with(&TensorInputs::standard())
}

/// `(rank 𝒜, rank ℬ)` for a `g^r_d` twisted by a nontrivial 2-torsion bundle.
pub fn bundle_ranks(g: u32, r: u32, d: u32) -> (i64, i64) {
    let (g, r, d) = (g as i64, r as i64, d as i64);
    // h¹(M_L⊗η) = −deg M_L − rank·(1−g), with deg M_L = −d and rank M_L = r
    let rank_a = d + r * (g - 1);
    // h⁰(L)·h¹(η) = (r+1)(g−1)
    let rank_b = (r + 1) * (g - 1);
    (rank_a, rank_b)
}

/// `c₁(ℬ) − c₁(𝒜)`, the class of the degeneracy locus of `𝒜 → ℬ`.
pub fn degeneracy_class_with(rules: &PushRules, inputs: &TensorInputs) -> Result<BaseRingElement> {
    Ok(c1_b_with(inputs).sub(&c1_a_with(rules)?))
}

pub fn degeneracy_class() -> BaseRingElement {
    c1_b().sub(&c1_a())
}

/// Pushforward along the generically finite map to the genus-9 Prym moduli space.
///
/// `degree` is the number of `g²₈`s on a general curve. The result is a
/// class on the partial compactification.
pub fn push_sigma(expr: &BaseRingElement, degree: i64) -> Result<DivisorClass> {
    if degree <= 0 {
        return Err(Error::InvalidInput(format!(
            "pushforward degree must be positive, got {degree}"
        )));
    }
    let basis = PrymBasis::new(9)?;
    let deg = q(degree);
    let node = |lambda: i64, boundary: i64| {
        DivisorClass::from_terms(
            basis,
            [
                (Label::Lambda, q(lambda)),
                (Label::Delta0p, q(boundary)),
                (Label::Delta0pp, q(boundary)),
                (Label::Delta0Ram, q(2 * boundary)),
            ],
        )
    };
    let mut out = DivisorClass::zero(basis);
    for (s, c) in expr.terms() {
        let image = match s {
            BaseSymbol::A => node(-564, 83)?,
            BaseSymbol::B => node(252, -21)?,
            BaseSymbol::Lambda => DivisorClass::from_terms(basis, [(Label::Lambda, deg.clone())])?,
            BaseSymbol::SigmaDelta0p => {
                DivisorClass::from_terms(basis, [(Label::Delta0p, deg.clone())])?
            }
            BaseSymbol::SigmaDelta0pp => {
                DivisorClass::from_terms(basis, [(Label::Delta0pp, deg.clone())])?
            }
            BaseSymbol::SigmaDelta0Ram => {
                DivisorClass::from_terms(basis, [(Label::Delta0Ram, deg.clone())])?
            }
            BaseSymbol::V => {
                return Err(Error::UnsupportedSymbol {
                    symbol: "c1(V)".into(),
                    reason: "no pushforward formula for c₁(𝒱) is available".into(),
                })
            }
        };
        out = out.add(&image.scale(c))?;
    }
    Ok(out.into_partial())
}
