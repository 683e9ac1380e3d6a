//! Two-phase simplex over exact rationals with Bland's anti-cycling rule.
//!
//! The solver works on the standard form `max c·y s.t. A y = b, y >= 0`;
//! [`lp_solve`] wraps it for the half-space form with free variables used
//! throughout the crate.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Halfspace, Point, Scalar};
use crate::error::{check_dim, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub optimizer: Option<Point>,
    pub value: Option<Scalar>,
}

/// Optimizes `<objective, x>` over `{x : <u_i, x> <= lambda_i}` with `x` free.
pub fn lp_solve(objective: &[Scalar], constraints: &[Halfspace], sense: Sense) -> Result<LpResult> {
    let n = objective.len();
    for h in constraints {
        check_dim(n, h.dim())?;
    }
    let m = constraints.len();
    // Columns: x+ (n), x- (n), slack (m).
    let a: Vec<Vec<Scalar>> = constraints
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let mut row = Vec::with_capacity(2 * n + m);
            row.extend(h.normal().iter().cloned());
            row.extend(h.normal().iter().map(|c| -c));
            row.extend((0..m).map(|k| if k == i { one() } else { Scalar::zero() }));
            row
        })
        .collect();
    let b: Vec<Scalar> = constraints.iter().map(|h| h.offset().clone()).collect();
    let signed: Vec<Scalar> = match sense {
        Sense::Maximize => objective.to_vec(),
        Sense::Minimize => objective.iter().map(|c| -c).collect(),
    };
    let mut c = Vec::with_capacity(2 * n + m);
    c.extend(signed.iter().cloned());
    c.extend(signed.iter().map(|v| -v));
    c.extend((0..m).map(|_| Scalar::zero()));

    let res = solve_standard(&a, &b, &c);
    Ok(match res.status {
        LpStatus::Optimal => {
            let y = res.solution.expect("optimal solution");
            let x: Vec<Scalar> = (0..n).map(|j| &y[j] - &y[n + j]).collect();
            let value = match sense {
                Sense::Maximize => res.value.expect("optimal value"),
                Sense::Minimize => -res.value.expect("optimal value"),
            };
            LpResult {
                status: LpStatus::Optimal,
                optimizer: Some(Point::new(x)),
                value: Some(value),
            }
        }
        status => LpResult {
            status,
            optimizer: None,
            value: None,
        },
    })
}

/// Result of [`solve_standard`].
#[derive(Clone, Debug)]
pub struct StandardResult {
    pub status: LpStatus,
    pub solution: Option<Vec<Scalar>>,
    pub value: Option<Scalar>,
}

fn one() -> Scalar {
    Scalar::from_integer(1.into())
}

/// Revised simplex state: the basis inverse and the basic values. Columns
/// `n..n + m` are the artificial unit columns.
struct Revised<'a> {
    a: &'a [Vec<Scalar>],
    /// `-1` or `1` per row, so that the right-hand side is nonnegative.
    sign: Vec<bool>,
    n: usize,
    binv: Vec<Vec<Scalar>>,
    xb: Vec<Scalar>,
    basis: Vec<usize>,
}

impl Revised<'_> {
    fn entry(&self, i: usize, j: usize) -> Scalar {
        if j < self.n {
            if self.sign[i] {
                -&self.a[i][j]
            } else {
                self.a[i][j].clone()
            }
        } else if j - self.n == i {
            one()
        } else {
            Scalar::zero()
        }
    }

    /// `B^-1 A_j`.
    fn column(&self, j: usize) -> Vec<Scalar> {
        let m = self.basis.len();
        let col: Vec<Scalar> = (0..m).map(|i| self.entry(i, j)).collect();
        self.binv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&col)
                    .filter(|(_, c)| !c.is_zero())
                    .fold(Scalar::zero(), |acc, (r, c)| acc + r * c)
            })
            .collect()
    }

    fn artificials_at_zero(&self) -> bool {
        self.basis
            .iter()
            .zip(&self.xb)
            .all(|(&bv, x)| bv < self.n || x.is_zero())
    }

    fn pivot(&mut self, r: usize, j: usize, w: &[Scalar]) {
        let piv = w[r].clone();
        for x in self.binv[r].iter_mut() {
            *x /= &piv;
        }
        self.xb[r] /= &piv;
        let (prow, px) = (self.binv[r].clone(), self.xb[r].clone());
        for (i, wi) in w.iter().enumerate() {
            if i == r || wi.is_zero() {
                continue;
            }
            for (x, p) in self.binv[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= wi * p;
                }
            }
            self.xb[i] -= wi * &px;
        }
        self.basis[r] = j;
    }

    /// Maximizes `sum cost(j) y_j`, entering only columns below `allowed`.
    /// Returns `false` when the objective is unbounded.
    fn optimize(
        &mut self,
        cost: &dyn Fn(usize) -> Scalar,
        allowed: usize,
        stop_when_feasible: bool,
    ) -> bool {
        let m = self.basis.len();
        loop {
            if stop_when_feasible && self.artificials_at_zero() {
                return true;
            }
            // duals y = c_B B^-1
            let mut y = vec![Scalar::zero(); m];
            for (i, &bv) in self.basis.iter().enumerate() {
                let cb = cost(bv);
                if cb.is_zero() {
                    continue;
                }
                for (yk, v) in y.iter_mut().zip(&self.binv[i]) {
                    *yk += &cb * v;
                }
            }
            // Bland: lowest-index improving column.
            let enter = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = (0..m).fold(cost(j), |acc, i| {
                    let e = self.entry(i, j);
                    if e.is_zero() {
                        acc
                    } else {
                        acc - &y[i] * e
                    }
                });
                reduced.is_positive()
            });
            let Some(enter) = enter else {
                return true;
            };
            let w = self.column(enter);
            let mut leave: Option<(usize, Scalar)> = None;
            for (i, wi) in w.iter().enumerate() {
                if !wi.is_positive() {
                    continue;
                }
                let ratio = &self.xb[i] / wi;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, enter, &w);
        }
    }
}

/// Solves `max c·y s.t. A y = b, y >= 0` exactly.
pub fn solve_standard(a: &[Vec<Scalar>], b: &[Scalar], c: &[Scalar]) -> StandardResult {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let sign: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    let mut lp = Revised {
        a,
        n,
        binv: (0..m)
            .map(|i| {
                (0..m)
                    .map(|k| if k == i { one() } else { Scalar::zero() })
                    .collect()
            })
            .collect(),
        xb: b.iter().map(Signed::abs).collect(),
        basis: (n..n + m).collect(),
        sign,
    };

    // Phase 1: maximize -sum(artificials).
    let phase1 = |j: usize| if j < n { Scalar::zero() } else { -one() };
    // Zero infeasibility is already optimal, so phase 1 stops there.
    lp.optimize(&phase1, n, true);
    if !lp.artificials_at_zero() {
        return StandardResult {
            status: LpStatus::Infeasible,
            solution: None,
            value: None,
        };
    }

    // Drive artificials out of the basis. Rows where that is impossible are
    // redundant; their artificial stays basic at zero and never moves again.
    for r in 0..m {
        if lp.basis[r] < n {
            continue;
        }
        let found = (0..n).filter(|j| !lp.basis.contains(j)).find_map(|j| {
            let w = lp.column(j);
            (!w[r].is_zero()).then_some((j, w))
        });
        if let Some((j, w)) = found {
            lp.pivot(r, j, &w);
        }
    }

    // Phase 2.
    let phase2 = |j: usize| if j < n { c[j].clone() } else { Scalar::zero() };
    if !lp.optimize(&phase2, n, false) {
        return StandardResult {
            status: LpStatus::Unbounded,
            solution: None,
            value: None,
        };
    }
    let mut y = vec![Scalar::zero(); n];
    for (i, &bv) in lp.basis.iter().enumerate() {
        if bv < n {
            y[bv] = lp.xb[i].clone();
        }
    }
    let value = y
        .iter()
        .zip(c)
        .fold(Scalar::zero(), |acc, (v, cj)| acc + v * cj);
    StandardResult {
        status: LpStatus::Optimal,
        solution: Some(y),
        value: Some(value),
    }
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

/// Solves with the columns in the given order and maps the weights back.
/// Bland's rule stays exact under any column order; a good order only
/// saves pivots.
fn solve_ordered(a: &[Vec<Scalar>], b: &[Scalar], order: &[usize]) -> Option<Vec<Scalar>> {
    let permuted: Vec<Vec<Scalar>> = a
        .iter()
        .map(|row| order.iter().map(|&j| row[j].clone()).collect())
        .collect();
    let c = vec![Scalar::zero(); order.len()];
    let y = solve_standard(&permuted, b, &c).solution?;
    let mut out = vec![Scalar::zero(); order.len()];
    for (k, &j) in order.iter().enumerate() {
        out[j] = y[k].clone();
    }
    Some(out)
}

/// Nonnegative weights `mu` with `sum_j mu_j g_j = target`, if any.
/// Generators closest in angle to the target are tried first.
pub fn conic_combination(generators: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let dim = target.len();
    let a: Vec<Vec<Scalar>> = (0..dim)
        .map(|r| generators.iter().map(|g| g[r].clone()).collect())
        .collect();
    // signed squared cosine, up to the common factor |target|^2
    let key: Vec<Scalar> = generators
        .iter()
        .map(|g| {
            let d = dot(g, target);
            let n = dot(g, g);
            if n.is_zero() {
                Scalar::zero()
            } else {
                &d * d.abs() / n
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..generators.len()).collect();
    order.sort_by(|&i, &j| key[j].cmp(&key[i]).then(i.cmp(&j)));
    solve_ordered(&a, target, &order)
}

/// Convex weights expressing `target` by `points`, if `target` lies in
/// their convex hull. Points nearest the target are tried first.
pub fn convex_combination(points: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let dim = target.len();
    let mut a: Vec<Vec<Scalar>> = (0..dim)
        .map(|r| points.iter().map(|g| g[r].clone()).collect())
        .collect();
    a.push(vec![one(); points.len()]);
    let mut b = target.to_vec();
    b.push(one());
    let key: Vec<Scalar> = points
        .iter()
        .map(|p| {
            p.iter()
                .zip(target)
                .fold(Scalar::zero(), |acc, (x, t)| acc + (x - t) * (x - t))
        })
        .collect();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| key[i].cmp(&key[j]).then(i.cmp(&j)));
    solve_ordered(&a, &b, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, ratio};

    fn hs(n: &[i64], l: i64) -> Halfspace {
        Halfspace::from_ints(n, l).unwrap()
    }

    #[test]
    fn single_upper_bound_is_optimal() {
        let r = lp_solve(&[int(1)], &[hs(&[1], 1)], Sense::Maximize).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, Some(int(1)));
        assert_eq!(r.optimizer, Some(Point::from_ints(&[1])));
    }

    #[test]
    fn missing_upper_bound_is_unbounded() {
        let r = lp_solve(&[int(1)], &[hs(&[-1], 0)], Sense::Maximize).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let r = lp_solve(&[int(1)], &[hs(&[1], 0), hs(&[-1], -1)], Sense::Maximize).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
    }

    #[test]
    fn dimension_mismatch_is_an_input_error() {
        assert!(lp_solve(&[int(1), int(0)], &[hs(&[1], 1)], Sense::Maximize).is_err());
    }

    #[test]
    fn minimize_over_a_triangle() {
        // x >= 0, y >= 0, x + y <= 1; min x - 2y = -2 at (0,1)
        let cons = [hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, 1], 1)];
        let r = lp_solve(&[int(1), int(-2)], &cons, Sense::Minimize).unwrap();
        assert_eq!(r.value, Some(int(-2)));
        assert_eq!(r.optimizer, Some(Point::from_ints(&[0, 1])));
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // Many constraints through the same vertex (1,1): a classic cycling trap.
        let cons = [
            hs(&[1, 0], 1),
            hs(&[0, 1], 1),
            hs(&[1, 1], 2),
            hs(&[2, 1], 3),
            hs(&[1, 2], 3),
            hs(&[3, 1], 4),
            hs(&[-1, 0], 0),
            hs(&[0, -1], 0),
        ];
        let r = lp_solve(&[int(1), int(1)], &cons, Sense::Maximize).unwrap();
        assert_eq!(r.value, Some(int(2)));
    }

    #[test]
    fn no_constraints() {
        let r = lp_solve(&[int(0), int(0)], &[], Sense::Maximize).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        let r = lp_solve(&[int(1), int(0)], &[], Sense::Maximize).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
    }

    #[test]
    fn combinations() {
        let gens = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        let w = conic_combination(&gens, &[int(2), int(3)]).unwrap();
        assert_eq!(w, vec![int(2), int(3)]);
        assert!(conic_combination(&gens, &[int(-1), int(0)]).is_none());
        let pts = vec![
            vec![int(0), int(0)],
            vec![int(2), int(0)],
            vec![int(0), int(2)],
        ];
        assert!(convex_combination(&pts, &[ratio(1, 2), ratio(1, 2)]).is_some());
        assert!(convex_combination(&pts, &[int(2), int(2)]).is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn instance() -> impl Strategy<Value = (Vec<Scalar>, Vec<Halfspace>)> {
            (2usize..=3).prop_flat_map(|n| {
                let coef = (-6i64..=6, 1i64..=4).prop_map(|(a, b)| ratio(a, b));
                let cons = prop::collection::vec(
                    (
                        prop::collection::vec(coef.clone(), n),
                        (0i64..=20, 1i64..=3),
                    ),
                    1..=6,
                );
                (prop::collection::vec(coef, n), cons).prop_map(move |(obj, cons)| {
                    let mut hs: Vec<Halfspace> = cons
                        .into_iter()
                        .filter(|(u, _)| u.iter().any(|c| !c.is_zero()))
                        .map(|(u, (a, b))| Halfspace::new(u, ratio(a, b)).unwrap())
                        .collect();
                    // bounding box keeps the program bounded; offsets >= 0 keep it feasible
                    for i in 0..n {
                        for s in [1, -1] {
                            let mut u = vec![int(0); n];
                            u[i] = int(s);
                            hs.push(Halfspace::new(u, int(10)).unwrap());
                        }
                    }
                    (obj, hs)
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn optimum_is_feasible_and_matches_dual((obj, cons) in instance()) {
                let r = lp_solve(&obj, &cons, Sense::Maximize).unwrap();
                prop_assert_eq!(r.status, LpStatus::Optimal);
                let x = r.optimizer.unwrap();
                let value = r.value.unwrap();
                for h in &cons {
                    prop_assert!(h.contains(&x));
                }
                prop_assert_eq!(&x.coords().iter().zip(&obj).fold(int(0), |a, (p, q)| a + p * q), &value);

                // dual: min b.y  s.t.  A^T y = c, y >= 0
                let n = obj.len();
                let a: Vec<Vec<Scalar>> = (0..n)
                    .map(|j| cons.iter().map(|h| h.normal()[j].clone()).collect())
                    .collect();
                let neg_b: Vec<Scalar> = cons.iter().map(|h| -h.offset()).collect();
                let dual = solve_standard(&a, &obj, &neg_b);
                prop_assert_eq!(dual.status, LpStatus::Optimal);
                prop_assert_eq!(-dual.value.unwrap(), value);
            }
        }
    }
}
