//! Aggregated arc weights `c(α) = a + α·b` in exact integer arithmetic.
//!
//! With `α = p/q` every comparison is done on the scaled weight `q·a + p·b`,
//! which orders paths exactly like `c(α)` does. Ties are broken by a
//! secondary key so that each probe returns, among the min-weight paths, the
//! one of smallest length (or smallest cost for the pure length objective).

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::graph::{ArcId, Graph};

/// Exact rational used for multipliers, bounds and ratios.
pub type Rational = Ratio<i128>;

/// Lexicographic path key: scaled aggregated weight, then the tie breaker.
pub type Key = (i128, i128);

pub const UNREACHABLE: Key = (i128::MAX, i128::MAX);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tie {
    Length,
    Cost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightView {
    alpha: Option<Rational>,
    cost_coef: i128,
    length_coef: i128,
    tie: Tie,
}

impl WeightView {
    /// Weights `a + α·b` for a finite, non-negative `α`.
    pub fn at(alpha: Rational) -> Self {
        assert!(!alpha.is_negative(), "alpha must be non-negative");
        WeightView {
            cost_coef: *alpha.denom(),
            length_coef: *alpha.numer(),
            alpha: Some(alpha),
            tie: Tie::Length,
        }
    }

    pub fn at_int(alpha: i128) -> Self {
        Self::at(Rational::from_integer(alpha))
    }

    /// The `α → ∞` limit: minimise length, then cost.
    pub fn length_first() -> Self {
        WeightView { alpha: None, cost_coef: 0, length_coef: 1, tie: Tie::Cost }
    }

    /// `None` for the length-first view.
    pub fn alpha(&self) -> Option<Rational> {
        self.alpha
    }

    #[inline]
    pub fn key_of(&self, cost: u64, length: u64) -> Key {
        let primary = self.cost_coef * cost as i128 + self.length_coef * length as i128;
        let secondary = match self.tie {
            Tie::Length => length as i128,
            Tie::Cost => cost as i128,
        };
        (primary, secondary)
    }

    #[inline]
    pub fn arc_key(&self, g: &Graph, arc: ArcId) -> Key {
        self.key_of(g.cost(arc), g.length(arc))
    }

    /// `c_ij(α)` as an exact rational (equals the length for the
    /// length-first view).
    pub fn aggregated(&self, cost: u64, length: u64) -> Rational {
        Rational::new(self.key_of(cost, length).0, self.cost_coef.max(1))
    }

    /// Converts a scaled primary key back to the aggregated weight.
    pub fn unscale(&self, primary: i128) -> Rational {
        Rational::new(primary, self.cost_coef.max(1))
    }

    /// Aggregated weight as a float, used only for geometric scoring.
    pub fn aggregated_f64(&self, cost: u64, length: u64) -> f64 {
        self.cost_coef as f64 * cost as f64 + self.length_coef as f64 * length as f64
    }

    /// Whether every path of cost at most `max_cost` and length at most
    /// `max_length` has a key that fits in `i128` with room for summation.
    pub fn fits(&self, max_cost: u128, max_length: u128) -> bool {
        let primary = (self.cost_coef as u128)
            .checked_mul(max_cost)
            .and_then(|c| (self.length_coef as u128).checked_mul(max_length).and_then(|l| c.checked_add(l)));
        matches!(primary, Some(p) if p < (i128::MAX as u128) / 2)
    }
}

/// `(a₂ − a₁)/(b₁ − b₂)`: the multiplier where two path lines cross.
pub fn intersection(cheap: (u64, u64), short: (u64, u64)) -> Rational {
    let (a1, b1) = (cheap.0 as i128, cheap.1 as i128);
    let (a2, b2) = (short.0 as i128, short.1 as i128);
    debug_assert!(b1 != b2);
    Rational::new(a2 - a1, b1 - b2)
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        0.0
    } else {
        *r.numer() as f64 / *r.denom() as f64
    }
}
