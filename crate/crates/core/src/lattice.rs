//! Lattice and Mukai-vector arithmetic on a polarized Nikulin surface.
//!
//! The Picard lattice `ℤ[C] ⊕ 𝔑` is stored over the rational basis
//! `(C, N₁, …, N₈)` together with the glue vector `𝔢 = ½ΣNᵢ`, so a vector
//! with half-integral `Nᵢ` coordinates can still be a lattice element.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{determinant, fmt_q, is_integral, q, qf, q_mat, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeVector(pub Vec<Q>);

impl LatticeVector {
    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![Q::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Q) -> Self {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A symmetric bilinear form on `Q^rank`, with an overlattice described by
/// glue vectors on top of the coordinate lattice `ℤ^rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralLattice {
    labels: Vec<String>,
    gram: Vec<Vec<Q>>,
    glue: Vec<LatticeVector>,
}

impl IntegralLattice {
    pub fn new(labels: Vec<String>, gram: Vec<Vec<Q>>) -> Result<Self> {
        let n = labels.len();
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!(
                "Gram matrix must be {n}×{n} to match the labels"
            )));
        }
        for (i, row) in gram.iter().enumerate() {
            for (j, v) in row.iter().enumerate().take(i) {
                if *v != gram[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "Gram matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self {
            labels,
            gram,
            glue: Vec::new(),
        })
    }

    /// Adjoins a glue vector; some positive multiple of it must be integral.
    pub fn with_glue(mut self, v: LatticeVector) -> Result<Self> {
        self.check(&v)?;
        self.glue.push(v);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    pub fn glue(&self) -> &[LatticeVector] {
        &self.glue
    }

    pub fn basis_vector(&self, i: usize) -> LatticeVector {
        let mut v = LatticeVector::zero(self.rank());
        v.0[i] = Q::one();
        v
    }

    fn check(&self, v: &LatticeVector) -> Result<()> {
        if v.rank() != self.rank() {
            return Err(Error::InvalidInput(format!(
                "vector of rank {} does not live in a lattice of rank {}",
                v.rank(),
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn dot(&self, u: &LatticeVector, v: &LatticeVector) -> Result<Q> {
        self.check(u)?;
        self.check(v)?;
        let mut acc = Q::zero();
        for (i, ui) in u.0.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in v.0.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                acc += ui * &self.gram[i][j] * vj;
            }
        }
        Ok(acc)
    }

    pub fn square(&self, v: &LatticeVector) -> Result<Q> {
        self.dot(v, v)
    }

    /// Whether `v` lies in the overlattice generated by `ℤ^rank` and the glue.
    pub fn contains(&self, v: &LatticeVector) -> Result<bool> {
        self.check(v)?;
        let orders: Vec<i64> = self.glue.iter().map(glue_order).collect();
        let mut counts = vec![0i64; self.glue.len()];
        loop {
            let mut w = v.clone();
            for (g, k) in self.glue.iter().zip(&counts) {
                w = w.sub(&g.scale(&q(*k)));
            }
            if w.0.iter().all(is_integral) {
                return Ok(true);
            }
            // odometer over Π [0, order)
            let mut i = 0;
            loop {
                if i == counts.len() {
                    return Ok(false);
                }
                counts[i] += 1;
                if counts[i] < orders[i] {
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
        }
    }

    pub fn leading_minor(&self, rows: std::ops::Range<usize>) -> Q {
        let m: Vec<Vec<Q>> = rows
            .clone()
            .map(|i| rows.clone().map(|j| self.gram[i][j].clone()).collect())
            .collect();
        determinant(&m)
    }

    pub fn gram_to_json(&self) -> Value {
        q_mat::serialize(&self.gram, serde_json::value::Serializer)
            .expect("rational strings always serialize")
    }

    pub fn gram_from_json(labels: Vec<String>, v: &Value) -> Result<Self> {
        let gram = q_mat::deserialize(v).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Self::new(labels, gram)
    }
}

fn glue_order(v: &LatticeVector) -> i64 {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    v.0.iter()
        .map(|x| x.denom().to_i64().unwrap_or(i64::MAX))
        .fold(1, |acc, d| acc.lcm(&d))
}

/// Picard lattice `ℤ[C] ⊕ 𝔑` of a general polarized Nikulin surface of genus `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NikulinLattice {
    genus: u32,
    lattice: IntegralLattice,
}

pub const NIKULIN_CURVES: usize = 8;

impl NikulinLattice {
    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn lattice(&self) -> &IntegralLattice {
        &self.lattice
    }

    pub fn c(&self) -> LatticeVector {
        self.lattice.basis_vector(0)
    }

    /// `Nᵢ` for `1 ≤ i ≤ 8`.
    pub fn n(&self, i: usize) -> LatticeVector {
        assert!((1..=NIKULIN_CURVES).contains(&i), "N_{i} out of range");
        self.lattice.basis_vector(i)
    }

    /// `𝔢 = ½(N₁ + ⋯ + N₈)`.
    pub fn e(&self) -> LatticeVector {
        self.lattice.glue[0].clone()
    }

    /// Coordinates in the ℤ-basis `(C, 𝔢, N₁, …, N₇)`.
    pub fn extended_coordinates(&self, v: &LatticeVector) -> Result<Vec<Q>> {
        self.lattice.check(v)?;
        let n8 = &v.0[NIKULIN_CURVES];
        let mut out = vec![v.0[0].clone(), n8 * q(2)];
        out.extend((1..NIKULIN_CURVES).map(|i| &v.0[i] - n8));
        Ok(out)
    }

    /// Inverse of [`extended_coordinates`](Self::extended_coordinates).
    pub fn from_extended(&self, coords: &[Q]) -> Result<LatticeVector> {
        if coords.len() != NIKULIN_CURVES + 1 {
            return Err(Error::InvalidInput("expected 9 extended coordinates".into()));
        }
        let half_e = &coords[1] * qf(1, 2);
        let mut v = vec![coords[0].clone()];
        v.extend((0..NIKULIN_CURVES - 1).map(|i| &coords[2 + i] + &half_e));
        v.push(half_e);
        Ok(LatticeVector(v))
    }

    pub fn is_integral(&self, v: &LatticeVector) -> Result<bool> {
        Ok(self.extended_coordinates(v)?.iter().all(is_integral))
    }
}

impl std::ops::Deref for NikulinLattice {
    type Target = IntegralLattice;

    fn deref(&self) -> &IntegralLattice {
        &self.lattice
    }
}

pub fn nikulin_picard(genus: u32) -> Result<NikulinLattice> {
    if genus < 2 {
        return Err(Error::genus(genus, "polarized Nikulin surfaces need g >= 2"));
    }
    let mut labels = vec!["C".to_string()];
    labels.extend((1..=NIKULIN_CURVES).map(|i| format!("N{i}")));
    let n = labels.len();
    let mut gram = vec![vec![Q::zero(); n]; n];
    gram[0][0] = q(2 * genus as i64 - 2);
    for (i, row) in gram.iter_mut().enumerate().skip(1) {
        row[i] = q(-2);
    }
    let mut e = LatticeVector::zero(n);
    for x in e.0.iter_mut().skip(1) {
        *x = qf(1, 2);
    }
    let lattice = IntegralLattice::new(labels, gram)?.with_glue(e)?;
    Ok(NikulinLattice { genus, lattice })
}

/// `v = (rank, c₁, χ − rank)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MukaiVector {
    pub r0: Q,
    pub c1: LatticeVector,
    pub s: Q,
}

impl MukaiVector {
    pub fn new(r0: i64, c1: LatticeVector, s: i64) -> Self {
        Self {
            r0: q(r0),
            c1,
            s: q(s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            r0: &self.r0 + &other.r0,
            c1: self.c1.add(&other.c1),
            s: &self.s + &other.s,
        }
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self {
            r0: &self.r0 * k,
            c1: self.c1.scale(k),
            s: &self.s * k,
        }
    }
}

/// `⟨v, w⟩ = v₁·w₁ − v₂w₀ − v₀w₂`.
pub fn mukai_pairing(lattice: &IntegralLattice, v: &MukaiVector, w: &MukaiVector) -> Result<Q> {
    Ok(lattice.dot(&v.c1, &w.c1)? - &v.s * &w.r0 - &v.r0 * &w.s)
}

/// `μ = (c₁ · H) / rank`.
pub fn slope(
    lattice: &IntegralLattice,
    c1: &LatticeVector,
    rank: i64,
    polarization: &LatticeVector,
) -> Result<Q> {
    if rank <= 0 {
        return Err(Error::InvalidInput(format!(
            "slope needs positive rank, got {rank}"
        )));
    }
    Ok(lattice.dot(c1, polarization)? / q(rank))
}

/// One exact comparison in a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub claim: String,
    pub lhs: Q,
    pub relation: Relation,
    pub rhs: Q,
    pub holds: bool,
    pub justification: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Lt,
    Ge,
}

impl Relation {
    fn eval(self, a: &Q, b: &Q) -> bool {
        match self {
            Relation::Eq => a == b,
            Relation::Lt => a < b,
            Relation::Ge => a >= b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Lt => "<",
            Relation::Ge => "≥",
        }
    }
}

impl DerivationStep {
    fn new(claim: &str, lhs: Q, relation: Relation, rhs: Q, justification: &str) -> Self {
        let holds = relation.eval(&lhs, &rhs);
        Self {
            claim: claim.into(),
            lhs,
            relation,
            rhs,
            holds,
            justification: justification.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateStatus {
    NotDestabilizing,
    /// Excluded by μ-semistability of the Lazarsfeld–Mukai bundle.
    ExcludedBySemistability,
    Admissible,
}

/// A putative destabilizing subsheaf `E₁` with `rk E₁ = r`, `c₁(E₁) ≡ aC + N′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub rank: i64,
    pub a: i64,
    pub slope: Q,
    pub status: CandidateStatus,
}

/// Arithmetic skeleton of the non-stability argument for the extension bundle `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub c_square: Q,
    pub mukai_vector: MukaiVector,
    pub steps: Vec<DerivationStep>,
    pub candidates: Vec<Candidate>,
    /// The admissible candidate of maximal rank.
    pub forced: Option<(i64, i64)>,
    /// Sheaf-theoretic inputs used as opaque labels.
    pub hypotheses: Vec<String>,
}

impl StabilityReport {
    pub fn admissible(&self) -> Vec<(i64, i64)> {
        self.candidates
            .iter()
            .filter(|c| c.status == CandidateStatus::Admissible)
            .map(|c| (c.rank, c.a))
            .collect()
    }

    pub fn status_of(&self, rank: i64, a: i64) -> Option<CandidateStatus> {
        self.candidates
            .iter()
            .find(|c| c.rank == rank && c.a == a)
            .map(|c| c.status)
    }
}

const EXT_RANK: i64 = 4;
const EXT_S: i64 = 2;
const LM_RANK: i64 = 2;

/// Runs the slope bookkeeping for the genus-9 case.
pub fn stability_obstruction_report(genus: u32) -> Result<StabilityReport> {
    if genus != 9 {
        return Err(Error::genus(
            genus,
            "the destabilization argument is only set up for g = 9",
        ));
    }
    let lat = nikulin_picard(genus)?;
    stability_chain(&lat, &lat.c().add(&lat.e()))
}

/// Same chain with an arbitrary value of `C²`, for sensitivity checks.
pub fn stability_obstruction_chain(c_square: i64) -> Result<StabilityReport> {
    if c_square <= 0 || c_square % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "C² must be positive and even on a K3 surface, got {c_square}"
        )));
    }
    let lat = nikulin_picard((c_square / 2 + 1) as u32)?;
    stability_chain(&lat, &lat.c().add(&lat.e()))
}

fn stability_chain(lat: &NikulinLattice, c1_e: &LatticeVector) -> Result<StabilityReport> {
    let c = lat.c();
    let c_sq = lat.square(&c)?;
    let v = MukaiVector::new(EXT_RANK, c1_e.clone(), EXT_S);
    let v_sq = mukai_pairing(lat, &v, &v)?;
    let mu_e = slope(lat, c1_e, EXT_RANK, &c)?;
    let mu_lm = slope(lat, &c, LM_RANK, &c)?;

    let mut steps = vec![
        DerivationStep::new(
            "v(E)² < −2, so E is not stable",
            v_sq.clone(),
            Relation::Lt,
            q(-2),
            "stable sheaves have moduli of dimension v² + 2 ≥ 0",
        ),
        DerivationStep::new(
            "μ(E) = (C + 𝔢)·C / 4",
            mu_e.clone(),
            Relation::Eq,
            lat.dot(c1_e, &c)? / q(EXT_RANK),
            "definition of μ_C",
        ),
        DerivationStep::new(
            "μ(E_{C,L}) = C² / 2",
            mu_lm.clone(),
            Relation::Eq,
            &c_sq / q(LM_RANK),
            "c₁(E_{C,L}) = C, rank 2",
        ),
    ];

    let mut candidates = Vec::new();
    for rank in 1..EXT_RANK {
        // c₁(E₁)·C = a·C² since N′·C = 0; enumerate a up to the rank bound
        for a in 0..=EXT_RANK {
            let mu = &c_sq * q(a) / q(rank);
            let destab = mu >= mu_e;
            // c₁(E_{C,L} ⊗ E₁^∨)·C = r·C² − 2·a·C²
            let tensor = &c_sq * q(rank) - &c_sq * q(LM_RANK * a);
            let status = if !destab {
                CandidateStatus::NotDestabilizing
            } else if tensor.is_negative() {
                CandidateStatus::ExcludedBySemistability
            } else {
                CandidateStatus::Admissible
            };
            if destab {
                steps.push(DerivationStep::new(
                    &format!("(r, a) = ({rank}, {a}): c₁(E_{{C,L}} ⊗ E₁^∨)·C ≥ 0"),
                    tensor,
                    Relation::Ge,
                    q(0),
                    "μ-semistability of the Lazarsfeld–Mukai bundle",
                ));
            }
            candidates.push(Candidate {
                rank,
                a,
                slope: mu,
                status,
            });
        }
    }
    let forced = candidates
        .iter()
        .filter(|c| c.status == CandidateStatus::Admissible)
        .max_by_key(|c| (c.rank, -c.a))
        .map(|c| (c.rank, c.a));

    Ok(StabilityReport {
        c_square: c_sq,
        mukai_vector: v,
        steps,
        candidates,
        forced,
        hypotheses: vec![
            "E is a non-split extension of E_{C,L} by 𝔢 with v(E) = (4, C + 𝔢, 2)".into(),
            "E₁ is a maximally destabilizing subsheaf of maximal rank r ≤ 3, locally free".into(),
            "Hom(E₁, 𝔢) = 0, so E₁ maps nontrivially to E_{C,L}".into(),
            "E_{C,L} is μ_C-semistable".into(),
            "μ_C-stability is taken with respect to the big and nef class C rather than an ample class".into(),
        ],
    })
}
