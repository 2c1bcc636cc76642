//! Oracles shared by the property and acceptance targets. None of them call
//! into the code they check.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use prym_core::lp::{Constraint, ExactLP, Sense};
use prym_core::rational::{q, qf, Q};
use rand::Rng;

/// Standard Young tableaux of a `rows × cols` rectangle, counted by adding
/// one box at a time.
pub fn syt_rectangle(rows: usize, cols: usize) -> BigUint {
    fn count(shape: &mut Vec<usize>, cols: usize, memo: &mut HashMap<Vec<usize>, BigUint>) -> BigUint {
        if shape.iter().all(|&r| r == cols) {
            return BigUint::one();
        }
        if let Some(v) = memo.get(shape) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for i in 0..shape.len() {
            let fits = shape[i] < cols && (i == 0 || shape[i - 1] > shape[i]);
            if fits {
                shape[i] += 1;
                total += count(shape, cols, memo);
                shape[i] -= 1;
            }
        }
        memo.insert(shape.clone(), total.clone());
        total
    }
    count(&mut vec![0; rows], cols, &mut HashMap::new())
}

/// Solves the square system `m x = b` exactly; `None` if singular.
pub fn solve(mut m: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        b.swap(col, piv);
        let pivot = m[col].clone();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &pivot[col];
                for (x, p) in m[r].iter_mut().zip(&pivot).skip(col) {
                    *x -= &f * p;
                }
                let sub = &f * &b[col];
                b[r] -= sub;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

fn feasible(lp: &ExactLP, x: &[Q]) -> bool {
    lp.constraints.iter().all(|c| {
        let lhs: Q = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match c.sense {
            Sense::Ge => lhs >= c.rhs,
            Sense::Le => lhs <= c.rhs,
            Sense::Eq => lhs == c.rhs,
        }
    })
}

/// Minimum over all vertices of a bounded program, `None` if infeasible.
pub fn vertex_minimum(lp: &ExactLP) -> Option<Q> {
    let n = lp.num_vars();
    let m = lp.constraints.len();
    let mut best: Option<Q> = None;
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let mat = idx.iter().map(|&i| lp.constraints[i].coeffs.clone()).collect();
        let rhs = idx.iter().map(|&i| lp.constraints[i].rhs.clone()).collect();
        if let Some(x) = solve(mat, rhs) {
            if feasible(lp, &x) {
                let v: Q = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum::<Q>() + &lp.objective_constant;
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        // next n-subset of 0..m in lexicographic order
        let mut k = n;
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            if idx[k] < m - n + k {
                break;
            }
        }
        idx[k] += 1;
        for j in k + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub const BOX: i64 = 10;

/// A small random program with `−10 ≤ xᵢ ≤ 10`, so it is bounded and every
/// feasible instance has a vertex.
pub fn random_boxed_lp<R: Rng>(rng: &mut R) -> ExactLP {
    let n = rng.gen_range(1..=3);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut lp = ExactLP::new(&names);
    let m = rng.gen_range(1..=4);
    for k in 0..m {
        let coeffs = (0..n).map(|_| q(rng.gen_range(-5..=5))).collect();
        let sense = match rng.gen_range(0..5) {
            0 => Sense::Eq,
            1 | 2 => Sense::Le,
            _ => Sense::Ge,
        };
        let rhs = qf(rng.gen_range(-20..=20), rng.gen_range(1..=3));
        lp.push_constraint(Constraint {
            name: format!("r{k}"),
            coeffs,
            sense,
            rhs,
        })
        .unwrap();
    }
    for i in 0..n {
        let mut e = vec![Q::zero(); n];
        e[i] = Q::one();
        for (tag, sense, rhs) in [("lo", Sense::Ge, q(-BOX)), ("hi", Sense::Le, q(BOX))] {
            lp.push_constraint(Constraint {
                name: format!("{tag}{i}"),
                coeffs: e.clone(),
                sense,
                rhs,
            })
            .unwrap();
        }
    }
    lp.objective = (0..n).map(|_| qf(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect();
    lp.objective_constant = q(rng.gen_range(-3..=3));
    lp
}

/// A random rational with small numerator and denominator.
pub fn small_q<R: Rng>(rng: &mut R) -> Q {
    qf(rng.gen_range(-40..=40), rng.gen_range(1..=9))
}

#[test]
fn oracle_self_checks() {
    // hook-length values for small rectangles
    assert_eq!(syt_rectangle(2, 2), BigUint::from(2u32));
    assert_eq!(syt_rectangle(2, 3), BigUint::from(5u32));
    assert_eq!(syt_rectangle(3, 3), BigUint::from(42u32));
    let x = solve(vec![vec![q(2), q(1)], vec![q(1), q(3)]], vec![q(5), q(10)]).unwrap();
    assert_eq!(x, vec![q(1), q(3)]);
    assert!(solve(vec![vec![q(1), q(2)], vec![q(2), q(4)]], vec![q(1), q(2)]).is_none());
}
