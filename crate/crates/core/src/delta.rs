//! The coefficients `a_j` defined by
//! `exp(−Σ a_j x^{j+1} ∂/∂x)·x = (1+x)^k/k − 1/k`, and the operator
//! `Δ_k(x) = exp(Σ a_j x^{−j/k} L(j)) · k^{−L(0)} · x^{−(k−1)L(0)/k}`
//! acting on homogeneous states of a module with a Virasoro action.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::DeltaError;
use crate::scalar::{rat, ExactScalar};
use crate::series::{FracExp, Series, Variable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaCoefficients {
    pub k: i64,
    /// `a[0] = a_1`, `a[1] = a_2`, ...
    pub a: Vec<BigRational>,
}

impl DeltaCoefficients {
    pub fn get(&self, j: usize) -> &BigRational {
        &self.a[j - 1]
    }
}

/// Dense coefficients of `exp(−Σ a_j x^{j+1} d/dx)·x` through `x^order`.
pub fn exp_flow(a: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut total = vec![BigRational::zero(); order + 1];
    if order == 0 {
        return total;
    }
    let mut term = total.clone();
    term[1] = BigRational::one();
    total[1] = BigRational::one();
    // Every application of the vector field raises the degree by at least one.
    for n in 1..=order {
        let mut next = vec![BigRational::zero(); order + 1];
        for (deg, c) in term.iter().enumerate() {
            if c.is_zero() || deg == 0 {
                continue;
            }
            let deriv = c * BigRational::from_integer(BigInt::from(deg));
            for (j0, aj) in a.iter().enumerate() {
                let target = deg - 1 + j0 + 2;
                if target > order {
                    break;
                }
                next[target] -= aj * &deriv;
            }
        }
        let inv_n = rat(1, n as i64);
        for c in next.iter_mut() {
            *c *= &inv_n;
        }
        if next.iter().all(Zero::is_zero) {
            break;
        }
        for (t, c) in total.iter_mut().zip(&next) {
            *t += c;
        }
        term = next;
    }
    total
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// Coefficients of `(1+x)^k/k − 1/k` through `x^order`.
fn target_polynomial(k: i64, order: usize) -> Vec<BigRational> {
    (0..=order as i64)
        .map(|m| {
            if m == 0 {
                BigRational::zero()
            } else {
                BigRational::new(binomial(k, m), BigInt::from(k))
            }
        })
        .collect()
}

/// Solve for `a_1..a_terms` order by order: the `x^{j+1}` coefficient of
/// the flow is `(terms fixed by a_1..a_{j−1}) − a_j`.
pub fn delta_coefficients(k: i64, terms: usize) -> DeltaCoefficients {
    assert!(k >= 1, "k must be positive");
    let target = target_polynomial(k, terms + 1);
    let mut a: Vec<BigRational> = Vec::with_capacity(terms);
    for j in 1..=terms {
        a.push(BigRational::zero());
        let flow = exp_flow(&a, j + 1);
        a[j - 1] = &flow[j + 1] - &target[j + 1];
    }
    DeltaCoefficients { k, a }
}

/// Residual `exp(−Σ a_j x^{j+1}∂_x)·x − ((1+x)^k − 1)/k` through `x^order`,
/// recomputed from scratch with the given coefficients.
pub fn delta_residual(a: &[BigRational], k: i64, order: usize) -> Series {
    let flow = exp_flow(a, order);
    let target = target_polynomial(k, order);
    Series::from_terms(
        Variable::X,
        FracExp::int(order as i64 + 1),
        flow.iter()
            .zip(&target)
            .enumerate()
            .map(|(d, (f, t))| (FracExp::int(d as i64), ExactScalar::from_rational(f - t))),
    )
}

/// Residual of the defining equation using only `a_1..a_terms`. Fails with
/// `InsufficientTerms` when an omitted coefficient `a_j`, `j < order`, is
/// nonzero (so the truncation itself would show up in the residual).
pub fn verify_delta_equation(k: i64, terms: usize, order: usize) -> Result<Series, DeltaError> {
    let coeffs = delta_coefficients(k, terms);
    if terms + 1 < order {
        let full = delta_coefficients(k, order - 1);
        if full.a[terms..].iter().any(|a| !a.is_zero()) {
            return Err(DeltaError::InsufficientTerms { terms, order });
        }
    }
    Ok(delta_residual(&coeffs.a, k, order))
}

/// A graded space carrying positive Virasoro modes; weights lie in `½ℤ`
/// and are reported doubled.
pub trait VirasoroModule {
    type Vector: Clone;

    fn zero(&self) -> Self::Vector;
    fn is_zero(&self, v: &Self::Vector) -> bool;
    /// `acc += s · v`
    fn axpy(&self, acc: &mut Self::Vector, s: &ExactScalar, v: &Self::Vector);
    /// Twice the weight, when `v` is nonzero and homogeneous.
    fn weight2(&self, v: &Self::Vector) -> Option<i64>;
    /// Twice the lowest weight present in the module.
    fn min_weight2(&self) -> i64;
    fn virasoro(&self, n: i64, v: &Self::Vector) -> Self::Vector;
}

/// `Δ_k(x) v` as a finite sum of `x`-monomials with state coefficients.
#[derive(Clone, Debug)]
pub struct XGradedState<V> {
    pub terms: BTreeMap<FracExp, V>,
}

pub fn apply_delta<M: VirasoroModule>(
    module: &M,
    v: &M::Vector,
    k: i64,
) -> Result<XGradedState<M::Vector>, DeltaError> {
    if k != 1 && k != 2 {
        return Err(DeltaError::UnsupportedK(k));
    }
    let mut terms = BTreeMap::new();
    if module.is_zero(v) {
        return Ok(XGradedState { terms });
    }
    let wt2 = module.weight2(v).ok_or(DeltaError::NonHomogeneous)?;
    if k == 1 {
        terms.insert(FracExp::int(0), v.clone());
        return Ok(XGradedState { terms });
    }

    // k^{−L(0)} x^{−(k−1)L(0)/k} with k = 2: 2^{−wt} x^{−wt/2}
    let mut start = module.zero();
    module.axpy(&mut start, &ExactScalar::pow2_half(-wt2), v);
    let e0 = FracExp::new(-wt2, 4);

    let depth = ((wt2 - module.min_weight2()).max(0) / 2) as usize;
    let coeffs = delta_coefficients(2, depth.max(1));

    // exp(Σ_j a_j x^{−j/2} L(j)) applied term by term; each L(j) lowers the
    // weight by j, so the series stops after `depth` steps.
    let mut current: BTreeMap<FracExp, M::Vector> = BTreeMap::new();
    current.insert(e0, start);
    let mut n = 0i64;
    while !current.is_empty() {
        for (e, u) in &current {
            let slot = terms.entry(*e).or_insert_with(|| module.zero());
            module.axpy(slot, &ExactScalar::one(), u);
        }
        n += 1;
        let mut next: BTreeMap<FracExp, M::Vector> = BTreeMap::new();
        let inv_n = ExactScalar::frac(1, n);
        for (e, u) in &current {
            let Some(w2) = module.weight2(u) else { continue };
            let max_j = (w2 - module.min_weight2()) / 2;
            for j in 1..=max_j {
                let lu = module.virasoro(j, u);
                if module.is_zero(&lu) {
                    continue;
                }
                let c = &ExactScalar::from_rational(coeffs.get(j as usize).clone()) * &inv_n;
                let slot = next.entry(*e + FracExp::new(-j, 2)).or_insert_with(|| module.zero());
                module.axpy(slot, &c, &lu);
            }
        }
        next.retain(|_, u| !module.is_zero(u));
        current = next;
    }
    terms.retain(|_, u| !module.is_zero(u));
    Ok(XGradedState { terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: expand the flow with a_j left symbolic-by-probing.
    /// The `x^{j+1}` coefficient is affine in `a_j`; evaluate at `a_j = 0` and
    /// `a_j = 1` with a naive Lie-series expansion and solve.
    fn oracle_coefficients(k: i64, terms: usize) -> Vec<BigRational> {
        fn lie_series(a: &[BigRational], order: usize) -> Vec<BigRational> {
            // repeated application of D = −Σ a_j x^{j+1} d/dx to the monomial x,
            // keeping a full list of all powers of D (no early exit)
            let mut total = vec![BigRational::zero(); order + 1];
            let mut power = vec![BigRational::zero(); order + 1];
            power[1] = BigRational::one();
            let mut fact = BigRational::one();
            for n in 0..=order {
                for d in 0..=order {
                    total[d] += &power[d] / &fact;
                }
                let mut next = vec![BigRational::zero(); order + 1];
                for d in 1..=order {
                    for (i, aj) in a.iter().enumerate() {
                        let t = d + i + 1;
                        if t <= order {
                            next[t] -= aj * &power[d] * BigRational::from_integer(BigInt::from(d));
                        }
                    }
                }
                power = next;
                fact *= BigRational::from_integer(BigInt::from(n as i64 + 1));
            }
            total
        }
        let mut a = Vec::new();
        for j in 1..=terms {
            let order = j + 1;
            let target = BigRational::new(binomial(k, order as i64), BigInt::from(k));
            a.push(BigRational::zero());
            let c0 = lie_series(&a, order)[order].clone();
            a[j - 1] = BigRational::one();
            let c1 = lie_series(&a, order)[order].clone();
            // c(a_j) = c0 + (c1 − c0) a_j
            a[j - 1] = (&target - &c0) / (&c1 - &c0);
        }
        a
    }

    #[test]
    fn identity_flow_for_k_one() {
        assert!(delta_coefficients(1, 5).a.iter().all(Zero::is_zero));
    }

    #[test]
    fn closed_forms() {
        for k in 1..=12 {
            let c = delta_coefficients(k, 2);
            assert_eq!(c.a, vec![rat(1 - k, 2), rat(k * k - 1, 12)], "k = {k}");
        }
        assert_eq!(delta_coefficients(3, 2).a, vec![rat(-1, 1), rat(2, 3)]);
    }

    #[test]
    fn third_coefficient_matches_oracle() {
        let a = delta_coefficients(2, 3);
        assert_eq!(a.get(3), &rat(-3, 16));
        for k in 1..=5 {
            assert_eq!(delta_coefficients(k, 6).a, oracle_coefficients(k, 6), "k = {k}");
        }
    }

    #[test]
    fn residual_vanishes() {
        for k in 1..=6 {
            assert!(verify_delta_equation(k, 10, 10).unwrap().is_zero(), "k = {k}");
        }
        assert!(verify_delta_equation(1, 1, 5).unwrap().is_zero());
    }

    #[test]
    fn perturbed_coefficient_shows_up_at_x_cubed() {
        let mut a = delta_coefficients(2, 4).a;
        a[1] = rat(1, 3);
        let res = delta_residual(&a, 2, 4);
        assert_eq!(res.valuation(), FracExp::int(3));
        assert!(!res.coeff(FracExp::int(3)).is_zero());
    }

    #[test]
    fn too_few_terms() {
        assert_eq!(
            verify_delta_equation(2, 3, 6),
            Err(DeltaError::InsufficientTerms { terms: 3, order: 6 })
        );
    }

    /// A toy module: span{u₂, u₀} with L(2)u₂ = u₀, weights 2 and 0.
    struct Toy;
    impl VirasoroModule for Toy {
        type Vector = [ExactScalar; 2];
        fn zero(&self) -> Self::Vector {
            [ExactScalar::zero(), ExactScalar::zero()]
        }
        fn is_zero(&self, v: &Self::Vector) -> bool {
            v[0].is_zero() && v[1].is_zero()
        }
        fn axpy(&self, acc: &mut Self::Vector, s: &ExactScalar, v: &Self::Vector) {
            acc[0] += &(s * &v[0]);
            acc[1] += &(s * &v[1]);
        }
        fn weight2(&self, v: &Self::Vector) -> Option<i64> {
            match (v[0].is_zero(), v[1].is_zero()) {
                (false, true) => Some(4),
                (true, false) => Some(0),
                _ => None,
            }
        }
        fn min_weight2(&self) -> i64 {
            0
        }
        fn virasoro(&self, n: i64, v: &Self::Vector) -> Self::Vector {
            if n == 2 {
                [ExactScalar::zero(), v[0].clone()]
            } else {
                self.zero()
            }
        }
    }

    #[test]
    fn delta_on_toy_module() {
        let v = [ExactScalar::one(), ExactScalar::zero()];
        let out = apply_delta(&Toy, &v, 2).unwrap();
        // (1/4) x^{-1} u₂ + (1/4)(1/4) x^{-2} u₀
        assert_eq!(out.terms.len(), 2);
        assert_eq!(out.terms[&FracExp::int(-1)][0], ExactScalar::frac(1, 4));
        assert_eq!(out.terms[&FracExp::int(-2)][1], ExactScalar::frac(1, 16));
        assert!(matches!(apply_delta(&Toy, &v, 3), Err(DeltaError::UnsupportedK(3))));
        let mixed = [ExactScalar::one(), ExactScalar::one()];
        assert!(matches!(apply_delta(&Toy, &mixed, 2), Err(DeltaError::NonHomogeneous)));
        let id = apply_delta(&Toy, &v, 1).unwrap();
        assert_eq!(id.terms[&FracExp::int(0)], v);
    }
}
