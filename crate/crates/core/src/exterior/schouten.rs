//! The Schouten–Nijenhuis bracket, by two independent routes.
//!
//! Sign convention: `[P, Q] = (−1)^{pq} [Q, P]`, `[X, P] = L_X P` for a
//! vector field `X`, and `[π, π] = 2E∧π` is the Jacobi condition for the
//! bracket `{f, g} = π(df, dg) + f E·g − g E·f` with `π(α, β) = i_π(α∧β)`.
//! It differs from the "odd-variable" convention `[P, Q]ₖ` by
//! `[P, Q] = (−1)^{p+1} [P, Q]ₖ`.
//!
//! [`schouten_bracket`] computes `[P, Q]ₖ` with odd variables `ξ_k ↔ ∂_k`:
//!
//! `[P, Q]ₖ = Σ_k ∂ᴿ_{ξ_k}P ∧ ∂_{x_k}Q − (−1)^{(p−1)(q−1)} ∂ᴿ_{ξ_k}Q ∧ ∂_{x_k}P`
//!
//! with `∂ᴿ` the right derivative. [`schouten_leibniz`] expands both
//! arguments into decomposable terms and applies
//!
//! `[X_1∧…∧X_p, Y_1∧…∧Y_q]ₖ = Σ_{i,j} (−1)^{i+j} [X_i, Y_j] ∧ X_1…X̂_i…X_p ∧ Y_1…Ŷ_j…Y_q`,
//!
//! using only the Lie bracket of vector fields and the wedge product. The
//! two must agree exactly; the tests and acceptance suite hold them to it.

use super::{lie_bracket, Components, MultiVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Right derivative `∂ᴿ/∂ξ_k` of a multivector.
fn right_derivative(p: &MultiVector, k: usize) -> MultiVector {
    let n = p.chart_dim();
    let deg = p.degree();
    let mut out = Components::zero(deg.saturating_sub(1), n);
    if deg == 0 {
        return MultiVector(out);
    }
    for (idx, v) in p.components() {
        if let Some(r) = idx.iter().position(|&i| i == k) {
            // move ξ_k from position r to the end
            let rest: Vec<usize> = idx.iter().copied().filter(|&i| i != k).collect();
            let flips = deg - 1 - r;
            out.add_sorted(rest, if flips.is_multiple_of(2) { v.clone() } else { -v });
        }
    }
    MultiVector(out)
}

fn check_pair(p: &MultiVector, q: &MultiVector) -> Result<()> {
    if p.chart_dim() != q.chart_dim() {
        return Err(Error::ChartMismatch(p.chart_dim(), q.chart_dim()));
    }
    Ok(())
}

/// Degree of `[P, Q]`; a bracket of two functions is the zero function.
fn bracket_degree(p: usize, q: usize) -> usize {
    (p + q).saturating_sub(1)
}

/// `(−1)^{p+1}` applied to a bracket computed in the odd-variable convention.
fn normalize(p_degree: usize, b: MultiVector) -> MultiVector {
    if p_degree.is_multiple_of(2) {
        -b
    } else {
        b
    }
}

pub fn schouten_bracket(p: &MultiVector, q: &MultiVector) -> Result<MultiVector> {
    Ok(normalize(p.degree(), odd_variable_bracket(p, q)?))
}

fn odd_variable_bracket(p: &MultiVector, q: &MultiVector) -> Result<MultiVector> {
    check_pair(p, q)?;
    let n = p.chart_dim();
    let (dp, dq) = (p.degree(), q.degree());
    let mut acc = MultiVector::zero(bracket_degree(dp, dq), n);
    if dp + dq == 0 {
        return Ok(acc);
    }
    let odd = dp > 0 && dq > 0 && (dp - 1) * (dq - 1) % 2 == 1;
    for k in 0..n {
        if dp > 0 {
            let rp = right_derivative(p, k);
            if !rp.is_zero() {
                let term = rp.wedge(&q.partial(k));
                acc = &acc + &term;
            }
        }
        if dq > 0 {
            let rq = right_derivative(q, k);
            if !rq.is_zero() {
                let term = rq.wedge(&p.partial(k));
                // sign −(−1)^{(p−1)(q−1)}; with p = 0 the exponent is −(q−1)
                let minus = if dp == 0 {
                    (dq - 1) % 2 == 0
                } else {
                    !odd
                };
                acc = if minus { &acc - &term } else { &acc + &term };
            }
        }
    }
    Ok(acc)
}

/// Splits a multivector into decomposable terms `X_1 ∧ … ∧ X_p`, with the
/// coefficient carried by the first factor.
fn decompose(p: &MultiVector) -> Vec<Vec<MultiVector>> {
    let n = p.chart_dim();
    p.components()
        .map(|(idx, v)| {
            idx.iter()
                .enumerate()
                .map(|(pos, &i)| {
                    let e = MultiVector::partial_basis(i, n);
                    if pos == 0 {
                        e.scale(v)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect()
}

fn wedge_all(factors: impl IntoIterator<Item = MultiVector>, n: usize) -> MultiVector {
    factors
        .into_iter()
        .fold(MultiVector::from_scalar(Scalar::one(n)), |acc, f| acc.wedge(&f))
}

fn without(v: &[MultiVector], skip: usize) -> impl Iterator<Item = MultiVector> + '_ {
    v.iter()
        .enumerate()
        .filter(move |(i, _)| *i != skip)
        .map(|(_, x)| x.clone())
}

/// `[X_1∧…∧X_p, f] = Σ_i (−1)^{p−i} (X_i·f) X_1…X̂_i…X_p` (1-based `i`).
fn decomposable_with_function(xs: &[MultiVector], f: &Scalar, n: usize) -> MultiVector {
    let p = xs.len();
    let mut acc = MultiVector::zero(p - 1, n);
    for i in 0..p {
        let c = xs[i].apply(f);
        if c.is_zero() {
            continue;
        }
        let term = wedge_all(without(xs, i), n).scale(&c);
        // 0-based i: exponent p − (i+1)
        acc = if (p - 1 - i).is_multiple_of(2) { &acc + &term } else { &acc - &term };
    }
    acc
}

/// The decomposable-expansion route; see the module docs.
pub fn schouten_leibniz(p: &MultiVector, q: &MultiVector) -> Result<MultiVector> {
    Ok(normalize(p.degree(), leibniz_odd(p, q)?))
}

fn leibniz_odd(p: &MultiVector, q: &MultiVector) -> Result<MultiVector> {
    check_pair(p, q)?;
    let n = p.chart_dim();
    let (dp, dq) = (p.degree(), q.degree());
    let mut acc = MultiVector::zero(bracket_degree(dp, dq), n);
    match (dp, dq) {
        (0, 0) => return Ok(acc),
        (_, 0) => {
            let f = q.as_scalar();
            for xs in decompose(p) {
                acc = &acc + &decomposable_with_function(&xs, &f, n);
            }
            return Ok(acc);
        }
        (0, _) => {
            // graded antisymmetry: [f, Q] = −(−1)^{(−1)(q−1)} [Q, f]
            let back = leibniz_odd(q, p)?;
            return Ok(if (dq - 1) % 2 == 0 { -back } else { back });
        }
        _ => {}
    }
    for xs in decompose(p) {
        for ys in decompose(q) {
            for i in 0..dp {
                for j in 0..dq {
                    let b = lie_bracket(&xs[i], &ys[j])?;
                    if b.is_zero() {
                        continue;
                    }
                    let term = wedge_all(
                        std::iter::once(b).chain(without(&xs, i)).chain(without(&ys, j)),
                        n,
                    );
                    // (−1)^{i+j} with 1-based indices equals (−1)^{i+j} 0-based
                    acc = if (i + j) % 2 == 0 { &acc + &term } else { &acc - &term };
                }
            }
        }
    }
    Ok(acc)
}
