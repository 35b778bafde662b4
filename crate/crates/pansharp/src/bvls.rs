//! Bounded-variable least squares: minimize `‖A·w − b‖₂` subject to
//! per-variable box constraints `l_k <= w_k <= u_k`.
//!
//! The solver is an active-set iteration over the normal equations in the
//! Stark–Parker style. Variables move between the free set and the two bound
//! sets until the Karush-Kuhn-Tucker conditions hold: a free variable has
//! (near) zero gradient, a variable at its lower bound has non-negative
//! gradient, and a variable at its upper bound has non-positive gradient.
//! Rank-deficient free sets are handled with a least-norm sub-solve, so
//! duplicate or zero columns are not an error.

use crate::error::{Error, Result};

/// Dense box-constrained least-squares problem.
///
/// `design` is row-major with one row per observation and one column per
/// variable; for spectral-weight estimation rows are pixels and columns are
/// bands.
#[derive(Debug, Clone)]
pub struct BoundedLsqProblem {
    rows: usize,
    cols: usize,
    design: Vec<f64>,
    target: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoundedLsqProblem {
    pub fn new(
        rows: usize,
        cols: usize,
        design: Vec<f64>,
        target: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter {
                name: "problem shape",
                reason: format!("need at least one row and one column, got {rows}x{cols}"),
            });
        }
        if design.len() != rows * cols {
            return Err(Error::LengthMismatch {
                what: "design matrix",
                expected: rows * cols,
                actual: design.len(),
            });
        }
        if target.len() != rows {
            return Err(Error::LengthMismatch {
                what: "target vector",
                expected: rows,
                actual: target.len(),
            });
        }
        if lower.len() != cols || upper.len() != cols {
            return Err(Error::LengthMismatch {
                what: "bound vector",
                expected: cols,
                actual: if lower.len() != cols { lower.len() } else { upper.len() },
            });
        }
        let finite = design.iter().chain(&target).chain(&lower).chain(&upper);
        if !finite.into_iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                context: "least-squares problem",
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::InvalidParameter {
                name: "bounds",
                reason: "lower bound exceeds upper bound".to_string(),
            });
        }
        Ok(Self {
            rows,
            cols,
            design,
            target,
            lower,
            upper,
        })
    }

    /// Box-constrained problem with the unit box `[0, 1]^K` used for
    /// spectral-weight estimation.
    pub fn unit_box(rows: usize, cols: usize, design: Vec<f64>, target: Vec<f64>) -> Result<Self> {
        let lower = vec![0.0; cols];
        let upper = vec![1.0; cols];
        Self::new(rows, cols, design, target, lower, upper)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `‖A·w − b‖₂` for an arbitrary candidate, evaluated row by row.
    pub fn residual_norm_of(&self, w: &[f64]) -> f64 {
        assert_eq!(w.len(), self.cols);
        let mut acc = 0.0;
        for i in 0..self.rows {
            let row = &self.design[i * self.cols..(i + 1) * self.cols];
            let fit: f64 = row.iter().zip(w).map(|(a, x)| a * x).sum();
            let r = fit - self.target[i];
            acc += r * r;
        }
        acc.sqrt()
    }

    /// Accumulates the normal-equation data: Gram matrix `AᵀA`, moment vector
    /// `Aᵀb` and `bᵀb`.
    fn normal_data(&self) -> (Vec<f64>, Vec<f64>, f64) {
        let k = self.cols;
        let mut gram = vec![0.0; k * k];
        let mut atb = vec![0.0; k];
        let mut btb = 0.0;
        for i in 0..self.rows {
            let row = &self.design[i * k..(i + 1) * k];
            let y = self.target[i];
            btb += y * y;
            for p in 0..k {
                atb[p] += row[p] * y;
                for q in p..k {
                    gram[p * k + q] += row[p] * row[q];
                }
            }
        }
        for p in 0..k {
            for q in 0..p {
                gram[p * k + q] = gram[q * k + p];
            }
        }
        (gram, atb, btb)
    }
}

/// Where a variable sits relative to its box at the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStatus {
    Free,
    AtLower,
    AtUpper,
}

/// Per-variable optimality certificate entry.
#[derive(Debug, Clone, Copy)]
pub struct KktEntry {
    pub status: BoundStatus,
    /// Gradient component of `½‖A·w − b‖²` at the solution.
    pub gradient: f64,
}

/// Solution with its optimality certificate.
#[derive(Debug, Clone)]
pub struct BoundedLsqSolution {
    pub weights: Vec<f64>,
    pub residual_norm: f64,
    pub kkt_report: Vec<KktEntry>,
}

impl BoundedLsqSolution {
    /// True when every certificate entry satisfies its KKT condition at the
    /// given tolerance.
    pub fn kkt_satisfied(&self, tol: f64) -> bool {
        self.kkt_report.iter().all(|e| match e.status {
            BoundStatus::Free => e.gradient.abs() <= tol,
            BoundStatus::AtLower => e.gradient >= -tol,
            BoundStatus::AtUpper => e.gradient <= tol,
        })
    }
}

/// Default optimality tolerance: `1e-10` relative to `‖Aᵀb‖∞`.
pub fn default_kkt_tol(problem: &BoundedLsqProblem) -> f64 {
    let (_, atb, _) = problem.normal_data();
    let scale = atb.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    1e-10 * scale.max(1.0)
}

/// Default iteration budget for a K-variable problem.
pub fn default_max_iters(cols: usize) -> usize {
    (10 * cols * cols).max(16)
}

/// Solves the box-constrained problem to the requested KKT tolerance.
///
/// On success the weights are feasible exactly (bound values are assigned,
/// never approximated) and the attached certificate passes
/// [`BoundedLsqSolution::kkt_satisfied`] at `kkt_tol`. Exceeding `max_iters`
/// yields [`Error::IterationLimit`] carrying the best iterate found.
pub fn bvls_solve(
    problem: &BoundedLsqProblem,
    kkt_tol: f64,
    max_iters: usize,
) -> Result<BoundedLsqSolution> {
    if !kkt_tol.is_finite() || kkt_tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "kkt_tol",
            reason: format!("must be positive and finite, got {kkt_tol}"),
        });
    }
    let k = problem.cols;
    let (gram, atb, btb) = problem.normal_data();
    let lower = &problem.lower;
    let upper = &problem.upper;

    let mut w: Vec<f64> = lower.clone();
    let mut status: Vec<BoundStatus> = vec![BoundStatus::AtLower; k];
    // Variables that bounced straight back to their bound; cleared whenever
    // the iterate makes real progress.
    let mut banned = vec![false; k];
    let mut iterations = 0usize;

    let gradient = |w: &[f64]| -> Vec<f64> {
        (0..k)
            .map(|p| {
                let mut g = -atb[p];
                for q in 0..k {
                    g += gram[p * k + q] * w[q];
                }
                g
            })
            .collect()
    };

    let build = |w: &[f64], status: &[BoundStatus], g: &[f64]| -> BoundedLsqSolution {
        let sq = {
            let mut wgw = 0.0;
            for p in 0..k {
                for q in 0..k {
                    wgw += w[p] * gram[p * k + q] * w[q];
                }
            }
            let hw: f64 = atb.iter().zip(w).map(|(h, x)| h * x).sum();
            (wgw - 2.0 * hw + btb).max(0.0)
        };
        BoundedLsqSolution {
            weights: w.to_vec(),
            residual_norm: sq.sqrt(),
            kkt_report: status
                .iter()
                .zip(g)
                .map(|(&s, &grad)| KktEntry {
                    status: s,
                    gradient: grad,
                })
                .collect(),
        }
    };

    loop {
        let g = gradient(&w);

        // Most violating bound variable; ties go to the lowest index.
        let mut pick: Option<(usize, f64)> = None;
        for p in 0..k {
            if banned[p] {
                continue;
            }
            let viol = match status[p] {
                BoundStatus::AtLower if lower[p] < upper[p] => -g[p],
                BoundStatus::AtUpper if lower[p] < upper[p] => g[p],
                _ => continue,
            };
            if viol > kkt_tol && pick.is_none_or(|(_, best)| viol > best) {
                pick = Some((p, viol));
            }
        }
        let Some((freed, _)) = pick else {
            return Ok(build(&w, &status, &g));
        };
        status[freed] = BoundStatus::Free;

        // Re-optimize over the free set, binding one variable per pass until
        // the sub-solution is feasible.
        loop {
            iterations += 1;
            if iterations > max_iters {
                let g = gradient(&w);
                return Err(Error::IterationLimit {
                    iterations: max_iters,
                    best: Box::new(build(&w, &status, &g)),
                });
            }

            let free: Vec<usize> = (0..k)
                .filter(|&p| status[p] == BoundStatus::Free)
                .collect();
            if free.is_empty() {
                break;
            }
            let nf = free.len();
            let mut sub = vec![0.0; nf * nf];
            let mut rhs = vec![0.0; nf];
            for (a, &p) in free.iter().enumerate() {
                rhs[a] = atb[p];
                for q in 0..k {
                    if status[q] != BoundStatus::Free {
                        rhs[a] -= gram[p * k + q] * w[q];
                    }
                }
                for (b, &q) in free.iter().enumerate() {
                    sub[a * nf + b] = gram[p * k + q];
                }
            }
            let z = solve_least_norm(&sub, nf, &rhs);

            let feasible = free
                .iter()
                .enumerate()
                .all(|(a, &p)| z[a] >= lower[p] && z[a] <= upper[p]);
            if feasible {
                for (a, &p) in free.iter().enumerate() {
                    w[p] = z[a];
                }
                banned = vec![false; k];
                break;
            }

            // Step from w toward z until the first variable hits a bound.
            let mut alpha = 1.0f64;
            let mut blocker: Option<(usize, BoundStatus)> = None;
            for (a, &p) in free.iter().enumerate() {
                let dir = z[a] - w[p];
                let (bound, side) = if z[a] > upper[p] {
                    (upper[p], BoundStatus::AtUpper)
                } else if z[a] < lower[p] {
                    (lower[p], BoundStatus::AtLower)
                } else {
                    continue;
                };
                let step = if dir == 0.0 { 0.0 } else { (bound - w[p]) / dir };
                if step < alpha {
                    alpha = step;
                    blocker = Some((p, side));
                }
            }
            let Some((hit, side)) = blocker else {
                // All candidates were feasible after all (fp edge); accept.
                for (a, &p) in free.iter().enumerate() {
                    w[p] = z[a].clamp(lower[p], upper[p]);
                }
                banned = vec![false; k];
                break;
            };
            let alpha = alpha.clamp(0.0, 1.0);
            for (a, &p) in free.iter().enumerate() {
                w[p] = (w[p] + alpha * (z[a] - w[p])).clamp(lower[p], upper[p]);
            }
            w[hit] = match side {
                BoundStatus::AtUpper => upper[hit],
                _ => lower[hit],
            };
            status[hit] = side;
            if hit == freed && alpha == 0.0 {
                // The freshly freed variable went straight back; skip it until
                // some other variable changes the iterate.
                banned[freed] = true;
                break;
            }
        }
    }
}

/// Least-norm solution of the symmetric positive semi-definite system
/// `m·z = rhs` via a Jacobi eigendecomposition; eigenvalues below the
/// numerical rank threshold are treated as zero.
fn solve_least_norm(m: &[f64], n: usize, rhs: &[f64]) -> Vec<f64> {
    let (vals, vecs) = jacobi_eigen(m.to_vec(), n);
    let max_ev = vals.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let cutoff = max_ev * n as f64 * f64::EPSILON;
    let mut z = vec![0.0; n];
    for j in 0..n {
        if vals[j].abs() <= cutoff || vals[j] <= 0.0 {
            continue;
        }
        let mut proj = 0.0;
        for r in 0..n {
            proj += vecs[r * n + j] * rhs[r];
        }
        let coef = proj / vals[j];
        for r in 0..n {
            z[r] += coef * vecs[r * n + j];
        }
    }
    z
}

/// Cyclic Jacobi eigendecomposition of a small symmetric matrix. Returns the
/// eigenvalues and the column-major eigenvector matrix.
fn jacobi_eigen(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n <= 1 {
        return (a, v);
    }
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        let diag: f64 = (0..n).map(|i| a[i * n + i] * a[i * n + i]).sum::<f64>();
        if off.sqrt() <= f64::EPSILON * diag.sqrt().max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    1.0 / (theta - (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let app = a[p * n + p];
                let aqq = a[q * n + q];
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[r * n + p];
                        let arq = a[r * n + q];
                        a[r * n + p] = c * arp - s * arq;
                        a[p * n + r] = a[r * n + p];
                        a[r * n + q] = s * arp + c * arq;
                        a[q * n + r] = a[r * n + q];
                    }
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[i * n + i]).collect();
    (vals, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha12Rng;
    use rand_core::{RngCore, SeedableRng};

    fn uniform(rng: &mut ChaCha12Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn random_problem(rng: &mut ChaCha12Rng, rows: usize, cols: usize) -> BoundedLsqProblem {
        let design: Vec<f64> = (0..rows * cols).map(|_| uniform(rng) * 2.0 - 0.5).collect();
        let target: Vec<f64> = (0..rows).map(|_| uniform(rng) * 3.0 - 1.0).collect();
        BoundedLsqProblem::unit_box(rows, cols, design, target).unwrap()
    }

    /// Exhaustive grid search over [0,1]^2; independent of the active-set path.
    fn grid_search_2d(problem: &BoundedLsqProblem, step: f64) -> [f64; 2] {
        assert_eq!(problem.cols(), 2);
        // The oracle builds its own quadratic data so each candidate costs O(1).
        let (gram, atb, btb) = problem.normal_data();
        let n = (1.0 / step).round() as usize;
        let mut best = (f64::INFINITY, [0.0, 0.0]);
        for i in 0..=n {
            let w0 = i as f64 * step;
            for j in 0..=n {
                let w1 = j as f64 * step;
                let cost = gram[0] * w0 * w0
                    + 2.0 * gram[1] * w0 * w1
                    + gram[3] * w1 * w1
                    - 2.0 * (atb[0] * w0 + atb[1] * w1)
                    + btb;
                if cost < best.0 {
                    best = (cost, [w0, w1]);
                }
            }
        }
        best.1
    }

    /// Unconstrained normal-equation solve by Gaussian elimination with
    /// partial pivoting; independent of the solver internals.
    fn normal_equation_solve(problem: &BoundedLsqProblem) -> Vec<f64> {
        let k = problem.cols();
        let (gram, atb, _) = problem.normal_data();
        let mut m: Vec<Vec<f64>> = (0..k)
            .map(|p| {
                let mut row: Vec<f64> = gram[p * k..(p + 1) * k].to_vec();
                row.push(atb[p]);
                row
            })
            .collect();
        for col in 0..k {
            let pivot = (col..k)
                .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
                .unwrap();
            m.swap(col, pivot);
            let diag = m[col][col];
            for row in 0..k {
                if row != col {
                    let f = m[row][col] / diag;
                    for c in col..=k {
                        m[row][c] -= f * m[col][c];
                    }
                }
            }
        }
        (0..k).map(|p| m[p][k] / m[p][p]).collect()
    }

    #[test]
    fn exact_interpolation_scalar() {
        let p = BoundedLsqProblem::unit_box(2, 1, vec![2.0, 2.0], vec![1.0, 1.0]).unwrap();
        let sol = bvls_solve(&p, default_kkt_tol(&p), default_max_iters(1)).unwrap();
        assert!((sol.weights[0] - 0.5).abs() < 1e-12);
        assert!(sol.residual_norm < 1e-10);
        assert_eq!(sol.kkt_report[0].status, BoundStatus::Free);
    }

    #[test]
    fn bound_clipped_scalar() {
        let p = BoundedLsqProblem::unit_box(1, 1, vec![1.0], vec![5.0]).unwrap();
        let sol = bvls_solve(&p, default_kkt_tol(&p), default_max_iters(1)).unwrap();
        assert_eq!(sol.weights[0], 1.0);
        assert!((sol.residual_norm - 4.0).abs() < 1e-12);
        assert_eq!(sol.kkt_report[0].status, BoundStatus::AtUpper);
    }

    #[test]
    fn matches_grid_search_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..5 {
            let p = random_problem(&mut rng, 50, 2);
            let sol = bvls_solve(&p, default_kkt_tol(&p), default_max_iters(2)).unwrap();
            let grid = grid_search_2d(&p, 1e-3);
            for k in 0..2 {
                assert!(
                    (sol.weights[k] - grid[k]).abs() <= 2e-3,
                    "weight {k}: solver {} vs grid {}",
                    sol.weights[k],
                    grid[k]
                );
            }
        }
    }

    #[test]
    fn matches_normal_equations_when_interior() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 5 {
            let rows = 60;
            let design: Vec<f64> = (0..rows * 2).map(|_| uniform(&mut rng) + 0.1).collect();
            // Build the target near an interior point so the unconstrained
            // optimum tends to stay inside the box.
            let w_star = [0.3 + 0.3 * uniform(&mut rng), 0.3 + 0.3 * uniform(&mut rng)];
            let target: Vec<f64> = (0..rows)
                .map(|i| {
                    design[i * 2] * w_star[0]
                        + design[i * 2 + 1] * w_star[1]
                        + (uniform(&mut rng) - 0.5) * 0.01
                })
                .collect();
            let p = BoundedLsqProblem::unit_box(rows, 2, design, target).unwrap();
            let unconstrained = normal_equation_solve(&p);
            if unconstrained.iter().any(|&w| w <= 0.01 || w >= 0.99) {
                continue;
            }
            let sol = bvls_solve(&p, default_kkt_tol(&p), default_max_iters(2)).unwrap();
            for k in 0..2 {
                assert!((sol.weights[k] - unconstrained[k]).abs() < 1e-8);
            }
            checked += 1;
        }
    }

    #[test]
    fn feasible_and_certified_on_random_problems() {
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for round in 0..40 {
            let cols = 1 + (rng.next_u64() % 8) as usize;
            let rows = cols + (rng.next_u64() % 200) as usize;
            let p = random_problem(&mut rng, rows, cols);
            let tol = default_kkt_tol(&p);
            let sol = bvls_solve(&p, tol, default_max_iters(cols)).unwrap();
            for k in 0..cols {
                assert!(sol.weights[k] >= p.lower()[k] && sol.weights[k] <= p.upper()[k]);
            }
            assert!(sol.kkt_satisfied(tol), "round {round} failed KKT");
        }
    }

    #[test]
    fn no_feasible_point_beats_solution() {
        let mut rng = ChaCha12Rng::seed_from_u64(4242);
        let p = random_problem(&mut rng, 120, 4);
        let sol = bvls_solve(&p, default_kkt_tol(&p), default_max_iters(4)).unwrap();
        for _ in 0..100 {
            let w0: Vec<f64> = (0..4).map(|_| uniform(&mut rng)).collect();
            assert!(sol.residual_norm <= p.residual_norm_of(&w0) + 1e-9);
        }
    }

    #[test]
    fn scale_equivariance_on_interior_instances() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let rows = 80;
        let design: Vec<f64> = (0..rows * 3).map(|_| uniform(&mut rng) + 0.05).collect();
        let w_star = [0.2, 0.4, 0.3];
        let target: Vec<f64> = (0..rows)
            .map(|i| (0..3).map(|k| design[i * 3 + k] * w_star[k]).sum())
            .collect();
        let p1 = BoundedLsqProblem::unit_box(rows, 3, design.clone(), target.clone()).unwrap();
        let s1 = bvls_solve(&p1, default_kkt_tol(&p1), default_max_iters(3)).unwrap();

        let c = 2.0;
        let scaled: Vec<f64> = target.iter().map(|t| c * t).collect();
        let p2 = BoundedLsqProblem::new(
            rows,
            3,
            design,
            scaled,
            vec![0.0; 3],
            vec![c; 3],
        )
        .unwrap();
        let s2 = bvls_solve(&p2, default_kkt_tol(&p2), default_max_iters(3)).unwrap();
        for k in 0..3 {
            assert!(s1.weights[k] > 0.01 && s1.weights[k] < 0.99, "not interior");
            assert!((s2.weights[k] - c * s1.weights[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn iteration_limit_carries_best_iterate() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let p = random_problem(&mut rng, 40, 3);
        match bvls_solve(&p, default_kkt_tol(&p), 1) {
            Err(Error::IterationLimit { iterations, best }) => {
                assert_eq!(iterations, 1);
                assert_eq!(best.weights.len(), 3);
                for (k, &w) in best.weights.iter().enumerate() {
                    assert!(w >= p.lower()[k] && w <= p.upper()[k]);
                }
            }
            other => panic!("expected iteration limit, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_columns_use_least_norm() {
        // Two identical columns: any split of the weight is optimal; the
        // least-norm sub-solve balances them and must still certify.
        let rows = 20;
        let col: Vec<f64> = (0..rows).map(|i| 0.5 + (i as f64) * 0.01).collect();
        let mut design = Vec::with_capacity(rows * 2);
        for &v in &col {
            design.push(v);
            design.push(v);
        }
        let target: Vec<f64> = col.iter().map(|v| 0.6 * v).collect();
        let p = BoundedLsqProblem::unit_box(rows, 2, design, target).unwrap();
        let tol = default_kkt_tol(&p);
        let sol = bvls_solve(&p, tol, default_max_iters(2)).unwrap();
        assert!(sol.kkt_satisfied(tol));
        assert!((sol.weights[0] + sol.weights[1] - 0.6).abs() < 1e-9);
        assert!(sol.residual_norm < 1e-9);
    }

    #[test]
    fn rejects_inverted_bounds() {
        let err = BoundedLsqProblem::new(1, 1, vec![1.0], vec![1.0], vec![1.0], vec![0.0]);
        assert!(err.is_err());
    }
}
