//! Replays of recorded rounds that check the per-element accounting behind
//! the framework's regret bound.
//!
//! Alongside `X` and `Y`, a third chain starts from a fixed comparison set
//! `OPT` and is overwritten element by element with the round's decisions,
//! ending at `S^t`. For submodular `f`, each step satisfies two exact
//! equalities for `X`/`Y` and one relation for the `OPT` chain: equality
//! when the decision agrees with `OPT` on `i`, otherwise a drop of at most
//! the marginal the decision forwent.

use alloc::vec;
use alloc::vec::Vec;

use super::RoundTranscript;
use crate::submodular::{SetFunction, Subset, EXHAUSTIVE_MAX_N};
use crate::{Error, Result, TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `X_{i-1} ⊆ Y_{i-1}` and the chains meet at `S^t`.
    Nesting,
    /// `f(X_i) = f(X_{i-1}) + alpha_i` on yes, `f(X_i) = f(X_{i-1})` on no.
    XStep,
    /// `f(Y_i) = f(Y_{i-1})` on yes, `f(Y_i) = f(Y_{i-1}) + beta_i` on no.
    YStep,
    /// `f(OPT_i) = f(OPT_{i-1})` when the decision agrees with `OPT` on `i`.
    OptUnchanged,
    /// `f(OPT_i) >= f(OPT_{i-1}) - beta_i` (yes, `i ∉ OPT`) or
    /// `f(OPT_i) >= f(OPT_{i-1}) - alpha_i` (no, `i ∈ OPT`).
    OptDrop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tracking {
    Pass,
    /// `element` is 1-based; `lhs`/`rhs` are the two sides that disagree.
    Violation { element: u32, relation: Relation, lhs: f64, rhs: f64 },
}

impl Tracking {
    pub fn is_pass(&self) -> bool {
        matches!(self, Tracking::Pass)
    }
}

/// Checks every per-element relation of one recorded round against `f`,
/// starting the comparison chain at `opt`.
pub fn opt_tracking_check<F: SetFunction>(
    transcript: &RoundTranscript,
    f: &F,
    opt: Subset,
) -> Result<Tracking> {
    let ground = f.ground();
    ground.check_enumerable("opt tracking check", EXHAUSTIVE_MAX_N)?;
    ground.check(opt)?;
    let n = ground.n();
    if transcript.n() != n || transcript.xs.len() != n as usize + 1 || transcript.ys.len() != n as usize + 1 {
        return Err(Error::Config("transcript does not match the function's ground set".into()));
    }
    let violation = |element, relation, lhs, rhs| Ok(Tracking::Violation { element, relation, lhs, rhs });
    let (xs, ys) = (&transcript.xs, &transcript.ys);
    if xs[0] != Subset::EMPTY || ys[0] != ground.full() || xs[n as usize] != transcript.chosen {
        return violation(0, Relation::Nesting, 0.0, 0.0);
    }

    let mut opt_prev = opt;
    for k in 0..n as usize {
        let i = k as u32 + 1;
        if !xs[k].is_subset_of(ys[k]) {
            return violation(i, Relation::Nesting, 0.0, 0.0);
        }
        let (alpha, beta) = transcript.marginals[k];
        let yes = transcript.decisions[k].chose_yes;
        let opt_next = if yes { opt_prev.with(i) } else { opt_prev.without(i) };

        let (fx0, fx1) = (f.value(xs[k]), f.value(xs[k + 1]));
        let (fy0, fy1) = (f.value(ys[k]), f.value(ys[k + 1]));
        let (x_rhs, y_rhs) = if yes { (fx0 + alpha, fy0) } else { (fx0, fy0 + beta) };
        if (fx1 - x_rhs).abs() > TOLERANCE {
            return violation(i, Relation::XStep, fx1, x_rhs);
        }
        if (fy1 - y_rhs).abs() > TOLERANCE {
            return violation(i, Relation::YStep, fy1, y_rhs);
        }

        let (fo0, fo1) = (f.value(opt_prev), f.value(opt_next));
        if opt_next == opt_prev {
            if (fo1 - fo0).abs() > TOLERANCE {
                return violation(i, Relation::OptUnchanged, fo1, fo0);
            }
        } else {
            let forgone = if yes { beta } else { alpha };
            if fo1 < fo0 - forgone - TOLERANCE {
                return violation(i, Relation::OptDrop, fo1, fo0 - forgone);
            }
        }
        opt_prev = opt_next;
    }
    if opt_prev != transcript.chosen || ys[n as usize] != transcript.chosen {
        return violation(n, Relation::Nesting, 0.0, 0.0);
    }
    Ok(Tracking::Pass)
}

fn check_rounds<F: SetFunction>(rounds: &[(&RoundTranscript, &F)]) -> Result<u32> {
    let n = rounds.first().map_or(0, |(t, _)| t.n());
    if rounds.iter().any(|(t, f)| t.n() != n || f.ground().n() != n) {
        return Err(Error::Config("rounds disagree on the ground set size".into()));
    }
    Ok(n)
}

/// Per element `i`, the residual
/// `sum_t [f(X_i) - f(X_{i-1}) + f(Y_i) - f(Y_{i-1})] - (sum_{yes} alpha_i + sum_{no} beta_i)`,
/// which is zero up to rounding for any `f`.
pub fn marginal_identity_residuals<F: SetFunction>(rounds: &[(&RoundTranscript, &F)]) -> Result<Vec<f64>> {
    let n = check_rounds(rounds)? as usize;
    let mut lhs = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for (t, f) in rounds {
        for k in 0..n {
            lhs[k] += f.value(t.xs[k + 1]) - f.value(t.xs[k]) + f.value(t.ys[k + 1]) - f.value(t.ys[k]);
            let (alpha, beta) = t.marginals[k];
            rhs[k] += if t.decisions[k].chose_yes { alpha } else { beta };
        }
    }
    Ok(lhs.iter().zip(&rhs).map(|(l, r)| l - r).collect())
}

/// Cumulative drop of the comparison chain at element `i` against the two
/// piles of forgone marginals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptDrop {
    /// `sum_t f(OPT_{i-1}) - f(OPT_i)`.
    pub drop: f64,
    /// `sum_{no} alpha_i`.
    pub c_yes: f64,
    /// `sum_{yes} beta_i`.
    pub c_no: f64,
    pub in_opt: bool,
    pub rounds: usize,
}

impl OptDrop {
    /// The pile matching membership of `i` in `OPT`.
    pub fn bound(&self) -> f64 {
        if self.in_opt {
            self.c_yes
        } else {
            self.c_no
        }
    }

    /// `drop <= bound <= max(c_yes, c_no)`, with tolerance scaled by rounds.
    pub fn holds(&self) -> bool {
        let tol = TOLERANCE * (self.rounds.max(1) as f64);
        self.drop <= self.bound() + tol && self.bound() <= self.c_yes.max(self.c_no)
    }
}

pub fn opt_drop_bounds<F: SetFunction>(rounds: &[(&RoundTranscript, &F)], opt: Subset) -> Result<Vec<OptDrop>> {
    let n = check_rounds(rounds)?;
    let mut out: Vec<OptDrop> = (1..=n)
        .map(|i| OptDrop { drop: 0.0, c_yes: 0.0, c_no: 0.0, in_opt: opt.contains(i), rounds: rounds.len() })
        .collect();
    for (t, f) in rounds {
        let mut prev = opt;
        for (k, acc) in out.iter_mut().enumerate() {
            let i = k as u32 + 1;
            let (alpha, beta) = t.marginals[k];
            let next = if t.decisions[k].chose_yes {
                acc.c_no += beta;
                prev.with(i)
            } else {
                acc.c_yes += alpha;
                prev.without(i)
            };
            acc.drop += f.value(prev) - f.value(next);
            prev = next;
        }
    }
    Ok(out)
}
