//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::{Certificate, ExactLP, FarkasCertificate, Sense, Solution, UnboundedRay};
use crate::error::Result;
use crate::rational::Q;

/// Standard-form tableau `A′z = b′, z ≥ 0, b′ ≥ 0`.
///
/// Column blocks: `x⁺` (n), `x⁻` (n), one slack per inequality, one
/// artificial per row. The artificial block starts as the identity, so it
/// always holds `B⁻¹`.
struct Tableau {
    n: usize,
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    art_start: usize,
    /// `±1`: whether the original row was negated to make `b′ ≥ 0`.
    row_sign: Vec<Q>,
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn build(lp: &ExactLP) -> Self {
        let n = lp.num_vars();
        let m = lp.constraints.len();
        let n_slack = lp
            .constraints
            .iter()
            .filter(|c| c.sense != Sense::Eq)
            .count();
        let art_start = 2 * n + n_slack;
        let width = art_start + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let mut slack = 2 * n;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Q::zero(); width];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = a.clone();
                row[n + j] = -a;
            }
            match c.sense {
                Sense::Ge => {
                    row[slack] = -Q::one();
                    slack += 1;
                }
                Sense::Le => {
                    row[slack] = Q::one();
                    slack += 1;
                }
                Sense::Eq => {}
            }
            let mut b = c.rhs.clone();
            let sign = if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
                b = -b;
                -Q::one()
            } else {
                Q::one()
            };
            row[art_start + i] = Q::one();
            rows.push(row);
            rhs.push(b);
            row_sign.push(sign);
        }
        Self {
            n,
            rows,
            rhs,
            basis: (art_start..art_start + m).collect(),
            art_start,
            row_sign,
        }
    }

    fn width(&self) -> usize {
        self.art_start + self.rows.len()
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.art_start
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        self.rhs[r] /= &p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, pr) in self.rows[i].iter_mut().zip(&prow) {
                if !pr.is_zero() {
                    *x -= &f * pr;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, costs: &[Q], j: usize) -> Q {
        let mut d = costs[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !costs[b].is_zero() && !self.rows[i][j].is_zero() {
                d -= &costs[b] * &self.rows[i][j];
            }
        }
        d
    }

    fn run(&mut self, costs: &[Q], allow_artificial: bool) -> Phase {
        loop {
            let entering = (0..self.width())
                .filter(|&j| allow_artificial || !self.is_artificial(j))
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(costs, j).is_negative());
            let Some(j) = entering else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, j),
                None => return Phase::Unbounded(j),
            }
        }
    }

    /// `y′ = c_Bᵀ B⁻¹`, mapped back through the row negations.
    fn duals(&self, costs: &[Q]) -> Vec<Q> {
        (0..self.rows.len())
            .map(|k| {
                let col = self.art_start + k;
                let y: Q = self
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| &costs[b] * &self.rows[i][col])
                    .sum();
                y * &self.row_sign[k]
            })
            .collect()
    }

    fn standard_point(&self) -> Vec<Q> {
        let mut z = vec![Q::zero(); self.width()];
        for (i, &b) in self.basis.iter().enumerate() {
            z[b] = self.rhs[i].clone();
        }
        z
    }

    fn to_x(&self, z: &[Q]) -> Vec<Q> {
        (0..self.n).map(|j| &z[j] - &z[self.n + j]).collect()
    }

    fn drive_out_artificials(&mut self) {
        for r in 0..self.rows.len() {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            if let Some(c) = (0..self.art_start).find(|&c| !self.rows[r][c].is_zero()) {
                self.pivot(r, c);
            }
            // otherwise the row is redundant and its artificial stays at zero
        }
    }
}

/// Minimizes `lp` exactly and returns the matching certificate.
pub fn minimize(lp: &ExactLP) -> Result<Solution> {
    lp.validate()?;
    let mut t = Tableau::build(lp);
    let width = t.width();

    let phase1: Vec<Q> = (0..width)
        .map(|j| if t.is_artificial(j) { Q::one() } else { Q::zero() })
        .collect();
    // phase I is bounded below by 0, so it always terminates optimally
    let _ = t.run(&phase1, true);
    let infeasibility: Q = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(b, _)| t.is_artificial(**b))
        .map(|(_, v)| v.clone())
        .sum();
    if infeasibility.is_positive() {
        return Ok(Solution::Infeasible(FarkasCertificate {
            multipliers: t.duals(&phase1),
        }));
    }
    t.drive_out_artificials();

    let n = lp.num_vars();
    let mut phase2 = vec![Q::zero(); width];
    for (j, c) in lp.objective.iter().enumerate() {
        phase2[j] = c.clone();
        phase2[n + j] = -c;
    }
    match t.run(&phase2, false) {
        Phase::Optimal => {
            let x = t.to_x(&t.standard_point());
            Ok(Solution::Optimal(Certificate {
                optimal_value: lp.objective_value(&x),
                primal_point: x,
                dual_multipliers: t.duals(&phase2),
            }))
        }
        Phase::Unbounded(j) => {
            let point = t.to_x(&t.standard_point());
            let mut dz = vec![Q::zero(); width];
            dz[j] = Q::one();
            for (i, &b) in t.basis.iter().enumerate() {
                dz[b] = -&t.rows[i][j];
            }
            let direction = t.to_x(&dz);
            let rate = super::dot(&lp.objective, &direction);
            Ok(Solution::Unbounded(UnboundedRay {
                point,
                direction,
                rate,
            }))
        }
    }
}
