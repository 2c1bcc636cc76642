//! Test curves and the plane-geometry counts behind them.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::divisor::{CurveClass, Label, PrymBasis};
use crate::error::{Error, Result};
use crate::rational::{q, qb, Q};

/// A rational surface obtained by blowing up the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlowupSurface {
    pub chi_o: i64,
    pub k_square: i64,
    pub blowup_count: u32,
}

impl BlowupSurface {
    /// The plane blown up `n` times; infinitely near points count like any other.
    pub fn plane_blowup(n: u32) -> Self {
        Self {
            chi_o: 1,
            k_square: 9 - n as i64,
            blowup_count: n,
        }
    }
}

/// A pencil of curves of genus `fiber_genus` on a [`BlowupSurface`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PencilSpec {
    pub fiber_genus: u32,
    /// Base points with a common tangent; each contributes one `δ₀^ram` member.
    pub tangency_base_points: u32,
    pub surface: BlowupSurface,
}

impl PencilSpec {
    /// Octics nodal at 12 general points and mutually tangent at 8 further
    /// points: blow up the 12 nodes, the 8 tangency points and the 8 tangent
    /// directions.
    pub fn octic_pencil() -> Self {
        Self {
            fiber_genus: 9,
            tangency_base_points: 8,
            surface: BlowupSurface::plane_blowup(12 + 8 + 8),
        }
    }
}

pub fn plane_curve_genus(degree: i64, nodes: i64) -> Result<i64> {
    if degree < 1 {
        return Err(Error::InvalidInput(format!("degree must be positive, got {degree}")));
    }
    let arithmetic = (degree - 1) * (degree - 2) / 2;
    if !(0..=arithmetic).contains(&nodes) {
        return Err(Error::InvalidInput(format!(
            "a degree-{degree} curve has at most {arithmetic} nodes, got {nodes}"
        )));
    }
    Ok(arithmetic - nodes)
}

/// Virtual dimension of plane curves of degree `d` with prescribed multiplicities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpectedDimension {
    pub value: i64,
    /// Negative expected dimension: the system is expected to be empty.
    pub empty_expected: bool,
}

impl ExpectedDimension {
    /// Always true: the count assumes general points and no superabundance.
    pub fn is_expected_only(&self) -> bool {
        true
    }
}

pub fn expected_dim_linear_system(degree: i64, multiplicities: &[i64]) -> Result<ExpectedDimension> {
    if degree < 1 {
        return Err(Error::InvalidInput(format!("degree must be positive, got {degree}")));
    }
    if let Some(m) = multiplicities.iter().find(|&&m| m < 1) {
        return Err(Error::InvalidInput(format!("multiplicity {m} is not positive")));
    }
    let conditions: i64 = multiplicities.iter().map(|m| m * (m + 1) / 2).sum();
    let value = degree * (degree + 3) / 2 - conditions;
    Ok(ExpectedDimension {
        value,
        empty_expected: value < 0,
    })
}

pub fn brill_noether_number(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of `g^r_d`s on a general curve of genus `g` when `ρ = 0`:
/// `g! · Π_{i=0}^{r} i! / (g−d+r+i)!`.
pub fn castelnuovo_number(g: i64, r: i64, d: i64) -> Result<BigUint> {
    let rho = brill_noether_number(g, r, d);
    if rho != 0 {
        return Err(Error::InvalidInput(format!(
            "Brill–Noether number of (g, r, d) = ({g}, {r}, {d}) is {rho}, not 0"
        )));
    }
    if g < 0 || r < 0 || g - d + r < 0 {
        return Err(Error::InvalidInput(format!("(g, r, d) = ({g}, {r}, {d}) out of range")));
    }
    let s = (g - d + r) as u64;
    let mut num = factorial(g as u64);
    let mut den = BigUint::one();
    for i in 0..=r as u64 {
        num *= factorial(i);
        den *= factorial(s + i);
    }
    let (quot, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::Computation(format!(
            "factorial quotient for ({g}, {r}, {d}) is not integral"
        )));
    }
    Ok(quot)
}

/// `c₂ = 12χ(𝒪) − K²`.
pub fn noether_c2(surface: &BlowupSurface) -> i64 {
    12 * surface.chi_o - surface.k_square
}

/// Intersection numbers of a pencil of irreducible nodal curves, all of whose
/// Prym structures are locally free except at the tangency members.
pub fn pencil_r_intersections(spec: &PencilSpec) -> Result<CurveClass> {
    let g = spec.fiber_genus as i64;
    let basis = PrymBasis::new(spec.fiber_genus)?;
    let lambda = spec.surface.chi_o + g - 1;
    let boundary_total = noether_c2(&spec.surface) + 4 * (g - 1);
    let ram = spec.tangency_base_points as i64;
    let delta0p = boundary_total - 2 * ram;
    if delta0p < 0 {
        return Err(Error::Computation(format!(
            "inconsistent pencil: δ₀′ would be {delta0p}"
        )));
    }
    CurveClass::from_terms(
        basis,
        [
            (Label::Lambda, q(lambda)),
            (Label::Delta0p, q(delta0p)),
            (Label::Delta0pp, q(0)),
            (Label::Delta0Ram, q(ram)),
        ],
    )
}

/// `R · (δ₀′ + δ₀″ + 2δ₀^ram) = c₂ + 4(g − 1)`.
pub fn pencil_boundary_total(spec: &PencilSpec) -> i64 {
    noether_c2(&spec.surface) + 4 * (spec.fiber_genus as i64 - 1)
}

/// Lefschetz pencil of Prym curves on a general polarized Nikulin surface.
pub fn nikulin_pencil(g: u32) -> Result<CurveClass> {
    let basis = PrymBasis::new(g)?;
    let g = g as i64;
    CurveClass::from_terms(
        basis,
        [
            (Label::Lambda, q(g + 1)),
            (Label::Delta0p, q(6 * g + 2)),
            (Label::Delta0pp, q(0)),
            (Label::Delta0Ram, q(8)),
        ],
    )
}

/// All Prym structures over a Lefschetz pencil on a K3 surface of genus `g`.
pub fn k3_pencil_a(g: u32) -> Result<CurveClass> {
    let basis = PrymBasis::new(g)?;
    let two = BigInt::from(2);
    let pow = |e: u32| -> BigInt { two.pow(e) };
    let gg = BigInt::from(g);
    let nodal: BigInt = &gg * 6 + 18;
    CurveClass::from_terms(
        basis,
        [
            (Label::Lambda, qb((&gg + 1) * (pow(2 * g) - 1))),
            (Label::Delta0p, qb(&nodal * (pow(2 * g - 1) - 2))),
            (Label::Delta0pp, qb(nodal.clone())),
            (Label::Delta0Ram, qb(&nodal * pow(2 * g - 2))),
        ],
    )
}

/// Pairing of the sweeping curve of `Δ₀″` with `aλ − b₀″δ₀″ − b₁δ₁ − ⋯`.
pub fn a0pp_pairing(g: u32, b0pp: &Q, b1: &Q) -> Result<Q> {
    if g < 2 {
        return Err(Error::genus(g, "needs g >= 2"));
    }
    Ok(q(2 * g as i64 - 2) * b0pp - b1)
}

/// Breakdown of the codimension bound for reducible 12-nodal octics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReducibleLocus {
    pub ambient_dim: i64,
    pub reducible_dim: i64,
    pub codim: i64,
}

/// Codimension of reducible members of `|8h − 2E₁ − ⋯ − 2E₁₂|`: the largest
/// family is a pair of quartics through the 12 points.
pub fn reducible_locus_codim() -> Result<ReducibleLocus> {
    let ambient = expected_dim_linear_system(8, &[2; 12])?.value;
    let quartic = expected_dim_linear_system(4, &[1; 12])?.value;
    let reducible_dim = 2 * quartic;
    Ok(ReducibleLocus {
        ambient_dim: ambient,
        reducible_dim,
        codim: ambient - reducible_dim,
    })
}

/// One row of the CLI table of test curves.
pub fn curve_row(name: &str, c: &CurveClass) -> Vec<String> {
    let mut row = vec![name.to_string()];
    row.extend(c.head().iter().map(|x| x.to_string()));
    row.push(c.pairing(Label::Delta(1)).to_string());
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn plane_curve_genus_examples() {
        assert_eq!(plane_curve_genus(8, 12).unwrap(), 9);
        assert_eq!(plane_curve_genus(4, 0).unwrap(), 3);
        assert_eq!(plane_curve_genus(8, 0).unwrap(), 21);
        assert!(plane_curve_genus(4, 4).is_err());
        assert!(plane_curve_genus(0, 0).is_err());
    }

    #[test]
    fn expected_dimensions() {
        assert_eq!(expected_dim_linear_system(8, &[2; 12]).unwrap().value, 8);
        assert_eq!(expected_dim_linear_system(4, &[1; 12]).unwrap().value, 2);
        let cubic = expected_dim_linear_system(3, &[1; 12]).unwrap();
        assert_eq!(cubic.value, -3);
        assert!(cubic.empty_expected);
        assert!(cubic.is_expected_only());
        // septics nodal at 12 points
        assert_eq!(expected_dim_linear_system(7, &[2; 12]).unwrap().value, -1);
        assert!(expected_dim_linear_system(3, &[0]).is_err());
    }

    #[test]
    fn castelnuovo_examples() {
        assert_eq!(castelnuovo_number(9, 2, 8).unwrap(), BigUint::from(42u32));
        assert_eq!(castelnuovo_number(4, 1, 3).unwrap(), BigUint::from(2u32));
        assert_eq!(castelnuovo_number(2, 1, 2).unwrap(), BigUint::from(1u32));
        assert!(castelnuovo_number(9, 2, 7).is_err());
    }

    #[test]
    fn noether_examples() {
        assert_eq!(noether_c2(&BlowupSurface { chi_o: 1, k_square: -19, blowup_count: 28 }), 31);
        assert_eq!(noether_c2(&BlowupSurface::plane_blowup(0)), 3);
        assert_eq!(noether_c2(&BlowupSurface::plane_blowup(12)), 15);
    }

    #[test]
    fn octic_pencil_numbers() {
        let spec = PencilSpec::octic_pencil();
        assert_eq!(spec.surface.k_square, -19);
        assert_eq!(pencil_boundary_total(&spec), 63);
        let r = pencil_r_intersections(&spec).unwrap();
        assert_eq!(r.head(), [q(9), q(47), q(0), q(8)]);
        assert_eq!(r.pairing(Label::Delta(1)), q(0));

        let flat = PencilSpec {
            tangency_base_points: 0,
            ..spec
        };
        assert_eq!(pencil_r_intersections(&flat).unwrap().pairing(Label::Delta0p), q(63));

        let bad = PencilSpec {
            tangency_base_points: 40,
            ..spec
        };
        assert!(matches!(pencil_r_intersections(&bad), Err(Error::Computation(_))));
    }

    #[test]
    fn nikulin_pencils() {
        assert_eq!(nikulin_pencil(9).unwrap().head(), [q(10), q(56), q(0), q(8)]);
        assert_eq!(nikulin_pencil(7).unwrap().head(), [q(8), q(44), q(0), q(8)]);
        assert_eq!(nikulin_pencil(9).unwrap().pairing(Label::Delta(3)), q(0));
        assert!(nikulin_pencil(1).is_err());
    }

    #[test]
    fn k3_pencils() {
        let a9 = k3_pencil_a(9).unwrap();
        assert_eq!(a9.head(), [q(2621430), q(9437040), q(72), q(4718592)]);
        // 2^18 − 1 = 262143, 2^17 − 2 = 131070, 2^16 = 65536
        assert_eq!(q(10) * q(262143), q(2621430));
        assert_eq!(q(72) * q(131070), q(9437040));
        assert_eq!(q(72) * q(65536), q(4718592));
        assert_eq!(k3_pencil_a(2).unwrap().head(), [q(45), q(180), q(30), q(120)]);
        assert_eq!(a9.pairing(Label::Delta(3)), q(0));
    }

    #[test]
    fn a0pp_examples() {
        assert_eq!(a0pp_pairing(9, &q(1), &q(0)).unwrap(), q(16));
        assert_eq!(a0pp_pairing(9, &q(0), &q(0)).unwrap(), q(0));
        assert_eq!(a0pp_pairing(9, &q(1), &q(16)).unwrap(), q(0));
    }

    #[test]
    fn reducible_octics() {
        let r = reducible_locus_codim().unwrap();
        assert_eq!(r.ambient_dim, 8);
        assert_eq!(r.reducible_dim, 4);
        assert_eq!(r.codim, 4);
    }

    #[test]
    fn table_rows() {
        let row = curve_row("R", &pencil_r_intersections(&PencilSpec::octic_pencil()).unwrap());
        assert_eq!(row, vec!["R", "9", "47", "0", "8", "0"]);
    }
}
