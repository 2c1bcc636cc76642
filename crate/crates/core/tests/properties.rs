mod common;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::collection::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prym_core::divisor::{pair, CurveClass, DivisorClass, Label, PrymBasis};
use prym_core::lattice::{mukai_pairing, nikulin_picard, slope, LatticeVector, MukaiVector};
use prym_core::lp::{minimize, parse_lp, write_lp, Solution};
use prym_core::pencil::{castelnuovo_number, k3_pencil_a, noether_c2, BlowupSurface};
use prym_core::rational::{q, qf, Q};
use prym_core::taut::{
    push_f, push_sigma, BaseRingElement, BaseSymbol, FiberGen, FiberRingElement, Monomial, PushRules,
};

fn rat() -> impl Strategy<Value = Q> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| qf(n, d))
}

fn positive_rat() -> impl Strategy<Value = Q> {
    (1i64..=60, 1i64..=12).prop_map(|(n, d)| qf(n, d))
}

fn divisor(genus: u32) -> impl Strategy<Value = DivisorClass> {
    let basis = PrymBasis::new(genus).unwrap();
    vec(rat(), basis.len()).prop_map(move |c| DivisorClass::from_terms(basis, basis.labels().into_iter().zip(c)).unwrap())
}

fn curve_values(genus: u32) -> impl Strategy<Value = Vec<Q>> {
    vec(rat(), PrymBasis::new(genus).unwrap().len())
}

fn curve(genus: u32, values: &[Q]) -> CurveClass {
    let basis = PrymBasis::new(genus).unwrap();
    CurveClass::from_terms(basis, basis.labels().into_iter().zip(values.iter().cloned())).unwrap()
}

/// Degree ≤ 2 element with every monomial present with some coefficient.
fn fiber_element() -> impl Strategy<Value = FiberRingElement> {
    let gens = FiberGen::ALL;
    let mut monomials = vec![Monomial::one()];
    for (i, a) in gens.iter().enumerate() {
        monomials.push(Monomial::new(vec![*a]));
        for b in &gens[i..] {
            if a.degree() + b.degree() <= 2 {
                monomials.push(Monomial::new(vec![*a, *b]));
            }
        }
    }
    let monomials: Vec<Monomial> = monomials.into_iter().filter(|m| m.degree() <= 2).collect();
    let len = monomials.len();
    vec(rat(), len).prop_map(move |cs| {
        monomials
            .iter()
            .zip(cs)
            .fold(FiberRingElement::zero(), |acc, (m, c)| acc.add(&FiberRingElement::term(m.clone(), c)))
    })
}

fn base_element() -> impl Strategy<Value = BaseRingElement> {
    let syms: Vec<BaseSymbol> = BaseSymbol::ALL.into_iter().filter(|s| *s != BaseSymbol::V).collect();
    let n = syms.len();
    vec(rat(), n).prop_map(move |cs| BaseRingElement::from_terms(syms.iter().copied().zip(cs)))
}

fn lattice_vector() -> impl Strategy<Value = LatticeVector> {
    vec(rat(), 9).prop_map(LatticeVector)
}

fn mukai() -> impl Strategy<Value = MukaiVector> {
    (rat(), lattice_vector(), rat()).prop_map(|(r0, c1, s)| MukaiVector { r0, c1, s })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn pairing_is_linear_in_the_divisor(
        (g, d1, d2, values) in (2u32..=10).prop_flat_map(|g| (Just(g), divisor(g), divisor(g), curve_values(g))),
        k in rat(),
    ) {
        let c = curve(g, &values);
        let lhs = pair(&c, &d1.add(&d2).unwrap()).unwrap();
        prop_assert_eq!(lhs, pair(&c, &d1).unwrap() + pair(&c, &d2).unwrap());
        prop_assert_eq!(pair(&c, &d1.scale(&k)).unwrap(), k * pair(&c, &d1).unwrap());
    }

    #[test]
    fn pairing_is_linear_in_the_curve(d in divisor(9), u in curve_values(9), v in curve_values(9), k in rat()) {
        let sum: Vec<Q> = u.iter().zip(&v).map(|(a, b)| a + b * &k).collect();
        let lhs = pair(&curve(9, &sum), &d).unwrap();
        prop_assert_eq!(lhs, pair(&curve(9, &u), &d).unwrap() + k * pair(&curve(9, &v), &d).unwrap());
    }

    #[test]
    fn genus_mismatch_is_rejected(d in divisor(8), u in curve_values(9)) {
        prop_assert!(pair(&curve(9, &u), &d).is_err());
    }

    #[test]
    fn push_f_is_linear(x in fiber_element(), y in fiber_element(), k in rat()) {
        let rules = PushRules::standard();
        let (x2, y2) = (x.degree_part(2), y.degree_part(2));
        let lhs = push_f(&x2.add(&y2.scale(&k)), &rules).unwrap();
        let rhs = push_f(&x2, &rules).unwrap().add(&push_f(&y2, &rules).unwrap().scale(&k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn push_sigma_is_linear(x in base_element(), y in base_element(), k in rat(), deg in 1i64..100) {
        let lhs = push_sigma(&x.add(&y.scale(&k)), deg).unwrap();
        let rhs = push_sigma(&x, deg).unwrap().add(&push_sigma(&y, deg).unwrap().scale(&k)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fiber_ring_laws(x in fiber_element(), y in fiber_element(), z in fiber_element()) {
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.mul(&FiberRingElement::constant(q(1))), x.clone());
        prop_assert!(x.sub(&x).is_zero());
        prop_assert!(x.mul(&y).max_degree().is_none_or(|d| d <= 2));
    }

    #[test]
    fn products_of_three_positive_degree_parts_vanish(x in fiber_element(), y in fiber_element(), z in fiber_element()) {
        let pos = |e: &FiberRingElement| e.sub(&e.degree_part(0));
        prop_assert!(pos(&x).mul(&pos(&y)).mul(&pos(&z)).is_zero());
        prop_assert!(x.degree_part(2).mul(&pos(&y)).is_zero());
    }

    #[test]
    fn noether_round_trip(chi in -20i64..20, k2 in -200i64..200, n in 0u32..60) {
        let s = BlowupSurface { chi_o: chi, k_square: k2, blowup_count: 0 };
        prop_assert_eq!(noether_c2(&s) + s.k_square, 12 * s.chi_o);
        // each blow-up adds one to the Euler number of the plane (3)
        prop_assert_eq!(noether_c2(&BlowupSurface::plane_blowup(n)), 3 + n as i64);
    }

    #[test]
    fn mukai_pairing_is_symmetric_and_bilinear(v in mukai(), w in mukai(), u in mukai(), k in rat()) {
        let lat = nikulin_picard(9).unwrap();
        let p = |a: &MukaiVector, b: &MukaiVector| mukai_pairing(&lat, a, b).unwrap();
        prop_assert_eq!(p(&v, &w), p(&w, &v));
        prop_assert_eq!(p(&v.add(&u.scale(&k)), &w), p(&v, &w) + k * p(&u, &w));
    }

    #[test]
    fn slope_is_homogeneous(c1 in lattice_vector(), rank in 1i64..10, m in 1i64..10, k in positive_rat()) {
        let lat = nikulin_picard(9).unwrap();
        let h = lat.c();
        let base = slope(&lat, &c1, rank, &h).unwrap();
        prop_assert_eq!(slope(&lat, &c1.scale(&q(m)), rank * m, &h).unwrap(), base.clone());
        prop_assert_eq!(slope(&lat, &c1.scale(&k), rank, &h).unwrap(), base * k);
        prop_assert!(slope(&lat, &c1, 0, &h).is_err());
    }

    #[test]
    fn random_lps_have_verified_certificates(seed in any::<u64>()) {
        let lp = common::random_boxed_lp(&mut ChaCha8Rng::seed_from_u64(seed));
        let sol = minimize(&lp).unwrap();
        prop_assert!(sol.verify(&lp).passed(), "{:?}", sol.verify(&lp).violations);
        match (&sol, common::vertex_minimum(&lp)) {
            (Solution::Optimal(c), Some(v)) => prop_assert_eq!(&c.optimal_value, &v),
            (Solution::Infeasible(_), None) => {}
            (s, v) => prop_assert!(false, "solver {} vs oracle {:?}", s.status(), v),
        }
    }

    #[test]
    fn lp_text_round_trip(seed in any::<u64>()) {
        let lp = common::random_boxed_lp(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(parse_lp(&write_lp(&lp)).unwrap(), lp);
    }

    #[test]
    fn rescaling_preserves_the_optimum(seed in any::<u64>(), k in positive_rat()) {
        let lp = common::random_boxed_lp(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = minimize(&lp).unwrap();
        let b = minimize(&lp.rescaled(&k).unwrap()).unwrap();
        prop_assert_eq!(a.status(), b.status());
        if let (Some(x), Some(y)) = (a.optimal(), b.optimal()) {
            prop_assert_eq!(&x.optimal_value * &k, y.optimal_value.clone());
        }
    }
}

#[test]
fn k3_pencil_counts_every_nodal_fibre_once_per_prym_structure() {
    for g in 2u32..=9 {
        let a = k3_pencil_a(g).unwrap();
        let structures = (BigInt::from(1) << (2 * g as usize)) - 1;
        let nodal = BigInt::from(6 * g + 18);
        let lambda = Q::from_integer((BigInt::from(g) + 1) * &structures);
        let boundary = a.pairing(Label::Delta0p) + a.pairing(Label::Delta0pp) + a.pairing(Label::Delta0Ram) * q(2);
        assert_eq!(a.pairing(Label::Lambda), lambda, "g = {g}");
        assert_eq!(boundary, Q::from_integer(nodal * structures), "g = {g}");
    }
}

#[test]
fn castelnuovo_matches_tableaux_count() {
    let mut cases = 0;
    for r in 0i64..=4 {
        for s in 1i64..=5 {
            let g = (r + 1) * s;
            let d = g - s + r;
            let expected = common::syt_rectangle((r + 1) as usize, s as usize);
            assert_eq!(castelnuovo_number(g, r, d).unwrap(), expected, "(g, r, d) = ({g}, {r}, {d})");
            cases += 1;
        }
    }
    assert_eq!(cases, 25);
    assert!(castelnuovo_number(9, 2, 7).is_err());
}

#[test]
fn optimal_duals_are_sign_feasible_on_random_lps() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut optimal = 0;
    for _ in 0..200 {
        let lp = common::random_boxed_lp(&mut rng);
        if let Solution::Optimal(c) = minimize(&lp).unwrap() {
            optimal += 1;
            for (row, y) in lp.constraints.iter().zip(&c.dual_multipliers) {
                assert!(row.sense.dual_sign_ok(y));
                assert!((y * (row.lhs(&c.primal_point) - &row.rhs)).is_zero());
            }
        }
    }
    assert!(optimal >= 50, "only {optimal} feasible instances");
}
