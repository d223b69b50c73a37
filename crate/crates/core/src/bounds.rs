//! Closed-form upper bounds on `E(S)` and `E(S^2)` for `D`-regular graphs.
//!
//! The small-`p` bounds are the moments of the total progeny up to
//! generation `R = N - 1` of a branching process with `Binomial(D, p)` root
//! offspring and `Binomial(D - 1, p)` offspring afterwards. Every geometric
//! quotient `(1 - ν^k) / (1 - ν)` is evaluated as the power sum
//! `1 + ν + ... + ν^(k-1)`, which has no singularity at `ν = 1`.
//!
//! The large-`p` bounds use only that a vertex whose incident edges are all
//! closed is outside the cluster.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    degree: usize,
    n_vertices: usize,
    p: f64,
}

impl BoundInputs {
    pub fn new(degree: usize, n_vertices: usize, p: f64) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidInput("degree must be at least 1".into()));
        }
        if n_vertices < 2 {
            return Err(Error::InvalidInput("need at least 2 vertices".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Ok(BoundInputs {
            degree,
            n_vertices,
            p,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Mean offspring of a non-root individual, `(D - 1) p`.
    pub fn nu(&self) -> f64 {
        (self.degree - 1) as f64 * self.p
    }

    /// Number of generations after the root, `N - 1`.
    pub fn generations(&self) -> usize {
        self.n_vertices - 1
    }
}

/// `1 + ν + ... + ν^(k-1)`.
fn power_sum(nu: f64, k: usize) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for _ in 0..k {
        sum += term;
        term *= nu;
    }
    sum
}

/// `E(X̄_R) = 1 + D p (1 + ν + ... + ν^(R-1))`.
pub fn branching_first_moment_bound(input: &BoundInputs) -> f64 {
    let dp = input.degree as f64 * input.p;
    1.0 + dp * power_sum(input.nu(), input.generations())
}

/// `E(X̄_R^2)`.
///
/// Written as `(1 + Dp G_R)^2 + Dp(1-p) (G_R^2 + ν Σ_{k=1}^{R-1} ν^(R-1-k) G_k^2)`
/// with `G_k = 1 + ν + ... + ν^(k-1)`; expanding `G_k` recovers the usual
/// quotient form `Dp(1-p)/(1-ν)^2 ((1-ν^R)(1+ν^(R+1))/(1-ν) - 2Rν^R)` for
/// the second term.
pub fn branching_second_moment_bound(input: &BoundInputs) -> f64 {
    let nu = input.nu();
    let r = input.generations();
    let dp = input.degree as f64 * input.p;
    let g_r = power_sum(nu, r);
    let mean = 1.0 + dp * g_r;
    let mut tail = 0.0;
    let mut g_k = 0.0;
    let mut nu_k = 1.0;
    for k in 1..r {
        g_k += nu_k;
        nu_k *= nu;
        tail += nu.powi((r - 1 - k) as i32) * g_k * g_k;
    }
    mean * mean + dp * (1.0 - input.p) * (g_r * g_r + nu * tail)
}

/// `N - (N - 1)(1 - p)^D`.
pub fn plarge_first_moment_bound(input: &BoundInputs) -> f64 {
    let n = input.n_vertices as f64;
    let q = (1.0 - input.p).powi(input.degree as i32);
    n - (n - 1.0) * q
}

/// `N^2 - (N - 1)(2N - 1)(1 - p)^D + (N - 1)(N - 2)(1 - p)^(2D - 1)`.
pub fn plarge_second_moment_bound(input: &BoundInputs) -> f64 {
    let n = input.n_vertices as f64;
    let q = 1.0 - input.p;
    let d = input.degree as i32;
    n * n - (n - 1.0) * (2.0 * n - 1.0) * q.powi(d) + (n - 1.0) * (n - 2.0) * q.powi(2 * d - 1)
}

/// A bound value clamped into its trivial envelope, alongside the raw value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Clamped {
    pub value: f64,
    pub raw: f64,
}

impl Clamped {
    fn new(raw: f64, lo: f64, hi: f64) -> Self {
        Clamped {
            value: raw.clamp(lo, hi),
            raw,
        }
    }
}

/// All four bounds at one `p`, clamped to `[1, N]` and `[1, N^2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub p: f64,
    pub branching_first: Clamped,
    pub branching_second: Clamped,
    pub plarge_first: Clamped,
    pub plarge_second: Clamped,
}

pub fn bound_row(degree: usize, n_vertices: usize, p: f64) -> Result<BoundRow> {
    let input = BoundInputs::new(degree, n_vertices, p)?;
    let n = n_vertices as f64;
    Ok(BoundRow {
        p,
        branching_first: Clamped::new(branching_first_moment_bound(&input), 1.0, n),
        branching_second: Clamped::new(branching_second_moment_bound(&input), 1.0, n * n),
        plarge_first: Clamped::new(plarge_first_moment_bound(&input), 1.0, n),
        plarge_second: Clamped::new(plarge_second_moment_bound(&input), 1.0, n * n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(d: usize, n: usize, p: f64) -> BoundInputs {
        BoundInputs::new(d, n, p).unwrap()
    }

    /// The quotient form, valid away from `ν = 1`.
    fn second_closed_form(i: &BoundInputs) -> f64 {
        let (nu, r, p) = (i.nu(), i.generations() as i32, i.p());
        let dp = i.degree() as f64 * p;
        let first = 1.0 + dp * (1.0 - nu.powi(r)) / (1.0 - nu);
        first * first
            + dp * (1.0 - p) / (1.0 - nu).powi(2)
                * ((1.0 - nu.powi(r)) * (1.0 + nu.powi(r + 1)) / (1.0 - nu)
                    - 2.0 * r as f64 * nu.powi(r))
    }

    #[test]
    fn first_moment_examples() {
        assert_eq!(branching_first_moment_bound(&input(3, 4, 0.0)), 1.0);
        assert_eq!(branching_first_moment_bound(&input(3, 4, 1.0)), 22.0);
        assert_eq!(branching_first_moment_bound(&input(3, 4, 0.5)), 5.5);
    }

    #[test]
    fn second_moment_examples() {
        assert_eq!(branching_second_moment_bound(&input(3, 4, 0.0)), 1.0);
        assert_eq!(branching_second_moment_bound(&input(3, 4, 1.0)), 484.0);
    }

    #[test]
    fn sum_form_matches_quotient_form() {
        for (d, n) in [(3, 4), (3, 8), (4, 6), (3, 20), (5, 12)] {
            for i in 1..20 {
                let p = i as f64 / 20.0;
                let inp = input(d, n, p);
                if (inp.nu() - 1.0).abs() < 1e-3 {
                    continue;
                }
                let ours = branching_second_moment_bound(&inp);
                let closed = second_closed_form(&inp);
                assert!(
                    (ours - closed).abs() <= 1e-9 * closed.abs().max(1.0),
                    "D={d} N={n} p={p}: {ours} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn continuous_at_critical_nu() {
        let at = input(3, 4, 0.5);
        for p in [0.5 - 1e-9, 0.5 + 1e-9] {
            let near = input(3, 4, p);
            assert!(
                (branching_first_moment_bound(&near) - branching_first_moment_bound(&at)).abs()
                    < 1e-6
            );
            assert!(
                (branching_second_moment_bound(&near) - branching_second_moment_bound(&at)).abs()
                    < 1e-6
            );
        }
        // Larger graphs have slopes of order 1e5 at the critical point, so
        // the jump over 1e-9 is compared relative to the value.
        for (d, n) in [(3, 8), (4, 6), (3, 20), (5, 12)] {
            let pc = 1.0 / (d - 1) as f64;
            let at = input(d, n, pc);
            for p in [pc - 1e-9, pc + 1e-9] {
                let near = input(d, n, p);
                for bound in [branching_first_moment_bound, branching_second_moment_bound] {
                    let (a, b) = (bound(&at), bound(&near));
                    assert!((a - b).abs() < 1e-6 * a, "D={d} N={n}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn branching_variance_nonnegative() {
        for (d, n) in [(3, 4), (3, 8), (4, 6), (3, 20), (5, 12)] {
            for i in 0..=20 {
                let inp = input(d, n, i as f64 / 20.0);
                let mean = branching_first_moment_bound(&inp);
                assert!(branching_second_moment_bound(&inp) - mean * mean >= -1e-9 * mean * mean);
            }
        }
    }

    #[test]
    fn plarge_examples() {
        assert_eq!(plarge_first_moment_bound(&input(3, 8, 1.0)), 8.0);
        assert_eq!(plarge_first_moment_bound(&input(3, 8, 0.0)), 1.0);
        assert_eq!(plarge_first_moment_bound(&input(3, 8, 0.5)), 7.125);
        assert_eq!(plarge_second_moment_bound(&input(4, 6, 1.0)), 36.0);
        assert_eq!(plarge_second_moment_bound(&input(4, 6, 0.0)), 1.0);
        assert_eq!(plarge_second_moment_bound(&input(4, 6, 0.5)), 32.71875);
    }

    #[test]
    fn invalid_inputs() {
        assert!(BoundInputs::new(0, 4, 0.5).is_err());
        assert!(BoundInputs::new(3, 1, 0.5).is_err());
        assert_eq!(
            BoundInputs::new(3, 4, 1.5),
            Err(Error::ProbabilityOutOfRange(1.5))
        );
    }

    #[test]
    fn rows_clamp_but_keep_raw() {
        let row = bound_row(3, 4, 1.0).unwrap();
        assert_eq!(row.branching_first.raw, 22.0);
        assert_eq!(row.branching_first.value, 4.0);
        assert_eq!(row.branching_second.value, 16.0);
        assert_eq!(row.plarge_first.value, 4.0);
    }
}
