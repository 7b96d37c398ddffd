//! Differential forms and multivector fields on a single chart.
//!
//! Components are stored on strictly increasing index sets. Contraction is
//! anchored by `i_{X_1∧…∧X_p} ω = ω(X_1, …, X_p, ·)`, which gives
//! `i_{∂x}(dx∧dy) = dy`, `i_{∂x∧∂y}(dx∧dy) = 1` and
//! `i_{X∧Y} = i_Y ∘ i_X`. The same anchor fixes the evaluation
//! `Π(α_1, …, α_p) = i_Π(α_1 ∧ … ∧ α_p)`.

mod schouten;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use schouten::{schouten_bracket, schouten_leibniz};

/// Sorts `idx` in place, returning the permutation sign, or `None` on a repeated index.
pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

/// Sign of the shuffle taking `a ++ b` (both sorted, disjoint) to sorted order.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<i32> {
    let mut inversions = 0usize;
    for x in a {
        for y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Antisymmetric component storage shared by forms and multivectors.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Components {
    n: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Scalar>,
}

impl Components {
    fn zero(degree: usize, n: usize) -> Self {
        Components {
            n,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    fn from_scalar(s: Scalar) -> Self {
        let mut c = Self::zero(0, s.chart_dim());
        c.add_sorted(Vec::new(), s);
        c
    }

    fn add_sorted(&mut self, key: Vec<usize>, v: Scalar) {
        if v.is_zero() {
            return;
        }
        match self.coeffs.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &v;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Adds `v · e_{idx}` for an arbitrary index list.
    fn add_unsorted(&mut self, mut idx: Vec<usize>, v: Scalar) {
        if let Some(sign) = sort_with_sign(&mut idx) {
            let v = if sign < 0 { -v } else { v };
            self.add_sorted(idx, v);
        }
    }

    fn checked(degree: usize, n: usize, comps: impl IntoIterator<Item = (Vec<usize>, Scalar)>) -> Result<Self> {
        let mut c = Self::zero(degree, n);
        for (idx, v) in comps {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: idx.len(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
                return Err(Error::IndexOutOfRange { index: bad, dim: n });
            }
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Malformed(format!(
                    "component indices {idx:?} are not strictly increasing"
                )));
            }
            if v.chart_dim() != n {
                return Err(Error::ChartMismatch(n, v.chart_dim()));
            }
            c.add_sorted(idx, v);
        }
        Ok(c)
    }

    fn get(&self, idx: &[usize]) -> Scalar {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.n))
    }

    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "chart mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch in sum");
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_sorted(k.clone(), v.clone());
        }
        out
    }

    fn neg(&self) -> Self {
        Components {
            n: self.n,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.degree, self.n);
        }
        let mut out = Self::zero(self.degree, self.n);
        for (k, v) in &self.coeffs {
            out.add_sorted(k.clone(), v * s);
        }
        out
    }

    fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "chart mismatch");
        let mut out = Self::zero(self.degree + other.degree, self.n);
        if self.degree + other.degree > self.n {
            return out;
        }
        for (a, va) in &self.coeffs {
            for (b, vb) in &other.coeffs {
                if let Some(sign) = merge_sign(a, b) {
                    let mut key: Vec<usize> = a.iter().chain(b).copied().collect();
                    key.sort_unstable();
                    let v = va * vb;
                    out.add_sorted(key, if sign < 0 { -v } else { v });
                }
            }
        }
        out
    }

    /// Componentwise ∂/∂x_k.
    fn partial(&self, k: usize) -> Self {
        let mut out = Self::zero(self.degree, self.n);
        for (idx, v) in &self.coeffs {
            out.add_sorted(idx.clone(), v.d(k));
        }
        out
    }

    fn display_with(&self, names: &[String], basis: impl Fn(usize) -> String) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|(idx, v)| {
                if idx.is_empty() {
                    return v.display_with(names);
                }
                let b: Vec<String> = idx.iter().map(|&i| basis(i)).collect();
                format!("({})·{}", v.display_with(names), b.join("∧"))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

macro_rules! tensor_common {
    ($ty:ident) => {
        impl $ty {
            pub fn zero(degree: usize, n: usize) -> Self {
                $ty(Components::zero(degree, n))
            }

            pub fn from_scalar(s: Scalar) -> Self {
                $ty(Components::from_scalar(s))
            }

            /// Builds from components on strictly increasing index lists.
            pub fn from_components(
                degree: usize,
                n: usize,
                comps: impl IntoIterator<Item = (Vec<usize>, Scalar)>,
            ) -> Result<Self> {
                Components::checked(degree, n, comps).map($ty)
            }

            /// Builds from components on arbitrary index lists, antisymmetrizing by sign.
            pub fn from_unsorted(
                degree: usize,
                n: usize,
                comps: impl IntoIterator<Item = (Vec<usize>, Scalar)>,
            ) -> Self {
                let mut c = Components::zero(degree, n);
                for (idx, v) in comps {
                    assert_eq!(idx.len(), degree);
                    c.add_unsorted(idx, v);
                }
                $ty(c)
            }

            /// The unit basis element on `idx` (any order; sign applied).
            pub fn basis(idx: &[usize], n: usize) -> Self {
                Self::from_unsorted(idx.len(), n, [(idx.to_vec(), Scalar::one(n))])
            }

            #[inline]
            pub fn degree(&self) -> usize {
                self.0.degree
            }

            #[inline]
            pub fn chart_dim(&self) -> usize {
                self.0.n
            }

            pub fn is_zero(&self) -> bool {
                self.0.coeffs.is_empty()
            }

            /// Coefficient on a strictly increasing index list.
            pub fn coeff(&self, idx: &[usize]) -> Scalar {
                self.0.get(idx)
            }

            pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
                self.0.coeffs.iter()
            }

            /// The degree-0 value as a scalar.
            pub fn as_scalar(&self) -> Scalar {
                assert_eq!(self.degree(), 0, "not a degree-0 element");
                self.0.get(&[])
            }

            pub fn scale(&self, s: &Scalar) -> Self {
                $ty(self.0.scale(s))
            }

            pub fn wedge(&self, other: &Self) -> Self {
                $ty(self.0.wedge(&other.0))
            }

            pub fn try_wedge(&self, other: &Self) -> Result<Self> {
                if self.chart_dim() != other.chart_dim() {
                    return Err(Error::ChartMismatch(self.chart_dim(), other.chart_dim()));
                }
                Ok(self.wedge(other))
            }

            /// Componentwise partial derivative of the coefficients.
            pub fn partial(&self, k: usize) -> Self {
                $ty(self.0.partial(k))
            }
        }

        impl std::ops::Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                $ty(self.0.add(&rhs.0))
            }
        }

        impl std::ops::Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                $ty(self.0.add(&rhs.0.neg()))
            }
        }

        impl std::ops::Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty(self.0.neg())
            }
        }

        impl std::ops::Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                &self + &rhs
            }
        }

        impl std::ops::Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                &self - &rhs
            }
        }

        impl std::ops::Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                -&self
            }
        }
    };
}

/// A differential k-form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form(Components);

/// A p-vector field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiVector(Components);

tensor_common!(Form);
tensor_common!(MultiVector);

impl Form {
    /// `dx_i`.
    pub fn dx(i: usize, n: usize) -> Self {
        Self::basis(&[i], n)
    }

    /// The 1-form `Σ c_i dx_i`.
    pub fn one_form(coeffs: Vec<Scalar>) -> Self {
        let n = coeffs.len();
        Self::from_unsorted(1, n, coeffs.into_iter().enumerate().map(|(i, c)| (vec![i], c)))
    }

    /// Differential of a function.
    pub fn differential(f: &Scalar) -> Self {
        let n = f.chart_dim();
        Self::from_unsorted(1, n, (0..n).map(|i| (vec![i], f.d(i))))
    }

    pub fn exterior_derivative(&self) -> Form {
        let n = self.chart_dim();
        let mut out = Components::zero(self.degree() + 1, n);
        if self.degree() >= n {
            return Form(out);
        }
        for (idx, v) in &self.0.coeffs {
            for k in 0..n {
                if idx.contains(&k) {
                    continue;
                }
                let dv = v.d(k);
                if dv.is_zero() {
                    continue;
                }
                let mut key = Vec::with_capacity(idx.len() + 1);
                key.push(k);
                key.extend_from_slice(idx);
                out.add_unsorted(key, dv);
            }
        }
        Form(out)
    }

    /// `i_A ω` for a p-vector `A` with `p ≤ k`.
    pub fn interior(&self, a: &MultiVector) -> Result<Form> {
        interior_product(a, self)
    }

    /// `L_X ω = d i_X ω + i_X dω`.
    pub fn lie_derivative(&self, x: &MultiVector) -> Result<Form> {
        lie_derivative(x, self)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        self.0.display_with(names, |i| format!("d{}", names[i]))
    }
}

impl MultiVector {
    /// `∂/∂x_i`.
    pub fn partial_basis(i: usize, n: usize) -> Self {
        Self::basis(&[i], n)
    }

    /// The vector field `Σ c_i ∂_i`.
    pub fn vector_field(coeffs: Vec<Scalar>) -> Self {
        let n = coeffs.len();
        Self::from_unsorted(1, n, coeffs.into_iter().enumerate().map(|(i, c)| (vec![i], c)))
    }

    /// Coefficients of a vector field as a dense list.
    pub fn vector_coeffs(&self) -> Vec<Scalar> {
        assert_eq!(self.degree(), 1, "not a vector field");
        (0..self.chart_dim()).map(|i| self.coeff(&[i])).collect()
    }

    /// `X · h = i_X dh`.
    pub fn apply(&self, h: &Scalar) -> Scalar {
        assert_eq!(self.degree(), 1, "not a vector field");
        let n = self.chart_dim();
        Scalar::sum_in(
            n,
            self.components()
                .map(|(idx, v)| (idx[0], v))
                .filter_map(|(i, v)| {
                    let dh = h.d(i);
                    (!dh.is_zero()).then(|| v * &dh)
                }),
        )
    }

    /// `Π(α_1, …, α_p) = i_Π(α_1 ∧ … ∧ α_p)`.
    pub fn evaluate(&self, forms: &[Form]) -> Result<Scalar> {
        if forms.len() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                got: forms.len(),
            });
        }
        let n = self.chart_dim();
        let mut w = Form::from_scalar(Scalar::one(n));
        for f in forms {
            if f.degree() != 1 {
                return Err(Error::DegreeMismatch {
                    expected: 1,
                    got: f.degree(),
                });
            }
            w = w.try_wedge(f)?;
        }
        Ok(interior_product(self, &w)?.as_scalar())
    }

    /// For a bivector π, the vector field πα defined by `i_{πα} β = π(α, β)`.
    pub fn sharp(&self, alpha: &Form) -> Result<MultiVector> {
        if self.degree() != 2 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                got: self.degree(),
            });
        }
        if alpha.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                got: alpha.degree(),
            });
        }
        if alpha.chart_dim() != self.chart_dim() {
            return Err(Error::ChartMismatch(self.chart_dim(), alpha.chart_dim()));
        }
        let n = self.chart_dim();
        // π(α, dx_j) = Σ_{i<j} α_i π^{ij} − Σ_{j<i} α_i π^{ji}
        let mut comps = vec![Scalar::zero(n); n];
        for (idx, v) in self.components() {
            let (i, j) = (idx[0], idx[1]);
            let ai = alpha.coeff(&[i]);
            let aj = alpha.coeff(&[j]);
            if !ai.is_zero() {
                comps[j] = &comps[j] + &(&ai * v);
            }
            if !aj.is_zero() {
                comps[i] = &comps[i] - &(&aj * v);
            }
        }
        Ok(MultiVector::vector_field(comps))
    }

    /// Lie bracket of vector fields.
    pub fn lie_bracket(&self, other: &MultiVector) -> Result<MultiVector> {
        lie_bracket(self, other)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        self.0.display_with(names, |i| format!("∂{}", names[i]))
    }
}

/// `i_A ω = ω(A, ·)`; errors when `deg A > deg ω`.
pub fn interior_product(a: &MultiVector, omega: &Form) -> Result<Form> {
    if a.chart_dim() != omega.chart_dim() {
        return Err(Error::ChartMismatch(a.chart_dim(), omega.chart_dim()));
    }
    let (p, k) = (a.degree(), omega.degree());
    if p > k {
        return Err(Error::ContractionDegree { vector: p, form: k });
    }
    let n = omega.chart_dim();
    let mut out = Components::zero(k - p, n);
    for (i_idx, av) in a.components() {
        for (j_idx, wv) in omega.components() {
            if !i_idx.iter().all(|i| j_idx.contains(i)) {
                continue;
            }
            let rest: Vec<usize> = j_idx.iter().copied().filter(|j| !i_idx.contains(j)).collect();
            // dx^J = sign · dx^I ∧ dx^{J∖I}
            let sign = merge_sign(i_idx, &rest).expect("disjoint");
            let v = av * wv;
            out.add_sorted(rest, if sign < 0 { -v } else { v });
        }
    }
    Ok(Form(out))
}

pub fn lie_bracket(x: &MultiVector, y: &MultiVector) -> Result<MultiVector> {
    for v in [x, y] {
        if v.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                got: v.degree(),
            });
        }
    }
    if x.chart_dim() != y.chart_dim() {
        return Err(Error::ChartMismatch(x.chart_dim(), y.chart_dim()));
    }
    let n = x.chart_dim();
    let coeffs = (0..n)
        .map(|j| &x.apply(&y.coeff(&[j])) - &y.apply(&x.coeff(&[j])))
        .collect();
    Ok(MultiVector::vector_field(coeffs))
}

pub fn lie_derivative(x: &MultiVector, omega: &Form) -> Result<Form> {
    if x.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            got: x.degree(),
        });
    }
    let first = if omega.degree() == 0 {
        Form::zero(0, omega.chart_dim())
    } else {
        interior_product(x, omega)?.exterior_derivative()
    };
    let second = interior_product(x, &omega.exterior_derivative())?;
    Ok(&first + &second)
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.chart_dim()).map(|i| format!("x{i}")).collect();
        write!(f, "Form<{}>({})", self.degree(), self.display_with(&names))
    }
}

impl fmt::Debug for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.chart_dim()).map(|i| format!("x{i}")).collect();
        write!(f, "MultiVector<{}>({})", self.degree(), self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(k: i64, n: usize) -> Scalar {
        Scalar::from_int(k, n)
    }
    fn x(i: usize, n: usize) -> Scalar {
        Scalar::coordinate(i, n)
    }
    fn dx(i: usize, n: usize) -> Form {
        Form::dx(i, n)
    }
    fn del(i: usize, n: usize) -> MultiVector {
        MultiVector::partial_basis(i, n)
    }

    #[test]
    fn wedge_antisymmetry_and_products() {
        let n = 2;
        assert_eq!(dx(0, n).wedge(&dx(1, n)), -dx(1, n).wedge(&dx(0, n)));
        let a = dx(0, n).scale(&x(0, n));
        let b = dx(1, n).scale(&x(1, n));
        assert_eq!(a.wedge(&b), Form::basis(&[0, 1], n).scale(&(&x(0, n) * &x(1, n))));
        assert!(dx(0, n).wedge(&dx(0, n)).is_zero());
    }

    #[test]
    fn wedge_of_vectors_uses_permutation_sign() {
        let n = 3;
        let lhs = del(2, n).wedge(&del(0, n).wedge(&del(1, n)));
        assert_eq!(lhs, MultiVector::basis(&[0, 1, 2], n));
    }

    #[test]
    fn exterior_derivative_examples() {
        let n = 3;
        assert_eq!(Form::from_scalar(x(0, n)).exterior_derivative(), dx(0, n));
        let w = Form::basis(&[0, 1], n).scale(&x(2, n));
        assert_eq!(w.exterior_derivative(), Form::basis(&[0, 1, 2], n));
        let one = Scalar::one(1);
        let xx = Scalar::coordinate(0, 1);
        let eta = Form::dx(0, 1).scale(&(&(&Scalar::from_int(2, 1) * &xx) / &(&one + &(&xx * &xx))));
        assert!(eta.exterior_derivative().is_zero());
    }

    #[test]
    fn interior_product_anchors() {
        let n = 2;
        let w = Form::basis(&[0, 1], n);
        assert_eq!(w.interior(&del(0, n)).unwrap(), dx(1, n));
        assert_eq!(w.interior(&del(1, n)).unwrap(), -dx(0, n));
        assert_eq!(w.interior(&MultiVector::basis(&[0, 1], n)).unwrap().as_scalar(), s(1, n));
        let err = dx(0, n).interior(&MultiVector::basis(&[0, 1], n)).unwrap_err();
        assert_eq!(err, Error::ContractionDegree { vector: 2, form: 1 });
    }

    #[test]
    fn interior_of_wedge_is_composition_in_reverse() {
        let n = 3;
        let w = Form::basis(&[0, 1, 2], n).scale(&x(1, n));
        let a = MultiVector::vector_field(vec![x(2, n), s(1, n), s(0, n)]);
        let b = MultiVector::vector_field(vec![s(0, n), x(0, n), s(3, n)]);
        let direct = w.interior(&a.wedge(&b)).unwrap();
        let composed = w.interior(&a).unwrap().interior(&b).unwrap();
        assert_eq!(direct, composed);
    }

    #[test]
    fn top_form_contraction_sign() {
        // i_{∂1∧∂2}(f dx1∧dx2∧dx3∧dx4) = +f dx3∧dx4 under the anchor
        let n = 4;
        let f = &s(1, n) + &(&x(0, n) * &x(0, n));
        let omega = Form::basis(&[0, 1, 2, 3], n).scale(&f);
        let out = omega.interior(&MultiVector::basis(&[0, 1], n)).unwrap();
        assert_eq!(out, Form::basis(&[2, 3], n).scale(&f));
    }

    #[test]
    fn lie_bracket_examples() {
        let n = 2;
        assert!(lie_bracket(&del(0, n), &del(1, n)).unwrap().is_zero());
        let xdy = del(1, n).scale(&x(0, n));
        assert_eq!(lie_bracket(&del(0, n), &xdy).unwrap(), del(1, n));
        let xdx = del(0, n).scale(&x(0, n));
        assert_eq!(lie_bracket(&xdx, &del(0, n)).unwrap(), -del(0, n));
        assert!(matches!(
            lie_bracket(&MultiVector::basis(&[0, 1], n), &del(0, n)),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn lie_derivative_examples() {
        let n = 2;
        let xdy = dx(1, n).scale(&x(0, n));
        assert_eq!(xdy.lie_derivative(&del(0, n)).unwrap(), dx(1, n));
        assert!(dx(1, n).lie_derivative(&del(0, n)).unwrap().is_zero());
        // coordinate formula: (L_X α)_j = X^i ∂_i α_j + α_i ∂_j X^i
        let xdx = del(0, n).scale(&x(0, n));
        assert_eq!(dx(0, n).lie_derivative(&xdx).unwrap(), dx(0, n));
    }

    #[test]
    fn sharp_matches_evaluation() {
        let n = 2;
        let pi = MultiVector::basis(&[0, 1], n);
        assert_eq!(pi.sharp(&dx(0, n)).unwrap(), del(1, n));
        assert_eq!(pi.sharp(&dx(1, n)).unwrap(), -del(0, n));
        assert_eq!(pi.evaluate(&[dx(0, n), dx(1, n)]).unwrap(), s(1, n));
    }

    #[test]
    fn components_must_be_increasing() {
        let err = Form::from_components(2, 3, [(vec![1, 0], s(1, 3))]).unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
        let err = Form::from_components(1, 3, [(vec![3], s(1, 3))]).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { .. }));
    }
}
