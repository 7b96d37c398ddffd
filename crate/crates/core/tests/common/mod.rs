//! Fixtures shared by the integration targets.
#![allow(dead_code)]

use dirac_core::conformal::{conformal_transform, find_conformal_section};
use dirac_core::dirac::{build_graph, GraphPayload, SubBundle};
use dirac_core::structures::{ExactPair, HomogeneousPair, JacobiPair, LcpsPair};
use dirac_core::{Form, MultiVector, Scalar};

pub fn x(i: usize, n: usize) -> Scalar {
    Scalar::coordinate(i, n)
}

pub fn k(c: i64, n: usize) -> Scalar {
    Scalar::from_int(c, n)
}

pub fn del(i: usize, n: usize) -> MultiVector {
    MultiVector::partial_basis(i, n)
}

/// `1 + x_i²`.
pub fn one_plus_sq(i: usize, n: usize) -> Scalar {
    &k(1, n) + &x(i, n).pow(2)
}

/// `π = (∂x + y∂z)∧∂y`, `E = ∂z` on ℝ³.
pub fn contact() -> JacobiPair {
    let n = 3;
    let w = &del(0, n) + &del(2, n).scale(&x(1, n));
    JacobiPair::new(w.wedge(&del(1, n)), del(2, n)).unwrap()
}

/// `(∂x∧∂y, ∂z)`: `[π,π]_s = 0 ≠ 2E∧π`.
pub fn not_jacobi() -> JacobiPair {
    JacobiPair::new(MultiVector::basis(&[0, 1], 3), del(2, 3)).unwrap()
}

/// `π = ∂x∧∂y + x∂y∧∂z` with `E = 0`, a Poisson structure on ℝ³.
pub fn poisson3() -> JacobiPair {
    let n = 3;
    let pi = &MultiVector::basis(&[0, 1], n) + &MultiVector::basis(&[1, 2], n).scale(&x(0, n));
    JacobiPair::new(pi, MultiVector::zero(1, n)).unwrap()
}

/// `ω = h dx₃∧dx₄`, `η = dh/h` with `h = 1 + x₁²` on ℝ⁴.
pub fn lcps4() -> LcpsPair {
    let n = 4;
    let h = one_plus_sq(0, n);
    let eta = Form::differential(&h).scale(&h.inv().unwrap());
    LcpsPair::new(Form::basis(&[2, 3], n).scale(&h), eta).unwrap()
}

/// [`lcps4`] with `dx₂` added to `η`; `η` stays closed but `dω ≠ η∧ω`.
pub fn lcps4_perturbed() -> LcpsPair {
    let l = lcps4();
    LcpsPair::new(l.omega.clone(), &l.eta + &Form::dx(1, 4)).unwrap()
}

/// `ω = h dy∧dz`, `η = dh/h` with `h = 1 + x²` on ℝ³.
pub fn lcps3() -> LcpsPair {
    let n = 3;
    let h = one_plus_sq(0, n);
    let eta = Form::differential(&h).scale(&h.inv().unwrap());
    LcpsPair::new(Form::basis(&[1, 2], n).scale(&h), eta).unwrap()
}

/// `(∂x∧∂y, x∂x)` on ℝ².
pub fn homogeneous() -> HomogeneousPair {
    HomogeneousPair::new(MultiVector::basis(&[0, 1], 2), del(0, 2).scale(&x(0, 2))).unwrap()
}

/// `(∂x∧∂y, ∂x)` on ℝ²: `[∂x, π]_s = 0 ≠ −π`.
pub fn not_homogeneous() -> HomogeneousPair {
    HomogeneousPair::new(MultiVector::basis(&[0, 1], 2), del(0, 2)).unwrap()
}

/// `α = x dy + z² dx`, `ω = dα` on ℝ³.
pub fn exact_pair() -> ExactPair {
    let n = 3;
    let alpha = &Form::dx(1, n).scale(&x(0, n)) + &Form::dx(0, n).scale(&x(2, n).pow(2));
    ExactPair::new(alpha.exterior_derivative(), alpha).unwrap()
}

/// [`exact_pair`] with `ω` doubled.
pub fn not_exact_pair() -> ExactPair {
    let e = exact_pair();
    ExactPair::new(e.omega.scale(&k(2, 3)), e.alpha).unwrap()
}

pub fn graph(p: GraphPayload) -> SubBundle {
    build_graph(&p).unwrap()
}

pub fn contact_graph() -> SubBundle {
    graph(GraphPayload::Jacobi(contact()))
}

/// The function family `{1, x, y, z, xy, x², x+z}` on ℝ³.
pub fn family7() -> Vec<Scalar> {
    let n = 3;
    vec![
        k(1, n),
        x(0, n),
        x(1, n),
        x(2, n),
        &x(0, n) * &x(1, n),
        x(0, n).pow(2),
        &x(0, n) + &x(2, n),
    ]
}

/// Dirac sub-bundles on ℝ³, each with seven admissible test functions.
pub fn admissible_examples() -> Vec<(&'static str, SubBundle, Vec<Scalar>)> {
    let l = contact_graph();
    let c = find_conformal_section(&l, &one_plus_sq(0, 3)).unwrap();
    // for (h dy∧dz, dh/h) the admissible functions are h·f(y, z)
    let n = 3;
    let h = one_plus_sq(0, n);
    let (y, z) = (x(1, n), x(2, n));
    let lcps_family = [k(1, n), y.clone(), z.clone(), &y * &z, y.pow(2), &y + &z, z.pow(2)]
        .iter()
        .map(|f| &h * f)
        .collect();
    vec![
        ("contact", l.clone(), family7()),
        ("poisson", graph(GraphPayload::Jacobi(poisson3())), family7()),
        ("exact", graph(GraphPayload::ExactPair(exact_pair())), family7()),
        ("conformal contact", conformal_transform(&l, &c).unwrap(), family7()),
        ("lcps", graph(GraphPayload::Lcps(lcps3())), lcps_family),
    ]
}
