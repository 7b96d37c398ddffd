//! The extended Courant algebroid `E¹(M) = (TM × ℝ) ⊕ (T*M × ℝ)`.
//!
//! A section is written `(X, f) + (α, g)`. The bracket, the two pairings
//! and the anchor are the ones that make `E¹(M)` a Courant algebroid with
//! the standard Courant algebroid `TM ⊕ T*M` sitting inside it as the
//! sections with `f = g = 0`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::{Form, MultiVector};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct E1Section {
    pub x: MultiVector,
    pub f: Scalar,
    pub alpha: Form,
    pub g: Scalar,
}

/// `i_X α` for a vector field and a 1-form.
pub(crate) fn contract(x: &MultiVector, alpha: &Form) -> Scalar {
    alpha
        .components()
        .filter_map(|(idx, a)| {
            let xi = x.coeff(idx);
            (!xi.is_zero()).then(|| &xi * a)
        })
        .fold(Scalar::zero(x.chart_dim()), |acc, t| &acc + &t)
}

fn half(n: usize) -> Scalar {
    Scalar::from_ratio(1, 2, n)
}

impl E1Section {
    pub fn new(x: MultiVector, f: Scalar, alpha: Form, g: Scalar) -> Result<Self> {
        if x.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                got: x.degree(),
            });
        }
        if alpha.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                got: alpha.degree(),
            });
        }
        let n = x.chart_dim();
        for m in [alpha.chart_dim(), f.chart_dim(), g.chart_dim()] {
            if m != n {
                return Err(Error::ChartMismatch(n, m));
            }
        }
        Ok(E1Section { x, f, alpha, g })
    }

    pub fn zero(n: usize) -> Self {
        E1Section {
            x: MultiVector::zero(1, n),
            f: Scalar::zero(n),
            alpha: Form::zero(1, n),
            g: Scalar::zero(n),
        }
    }

    /// `(X, 0) + (α, 0)`, a section of `TM ⊕ T*M`.
    pub fn from_pair(x: MultiVector, alpha: Form) -> Result<Self> {
        let n = x.chart_dim();
        Self::new(x, Scalar::zero(n), alpha, Scalar::zero(n))
    }

    /// `(0, 0) + (α, f)`.
    pub fn jet(alpha: Form, f: Scalar) -> Result<Self> {
        let n = alpha.chart_dim();
        Self::new(MultiVector::zero(1, n), Scalar::zero(n), alpha, f)
    }

    /// `(0, 0) + (df, f)`, the image of a function under the 1-jet map.
    pub fn one_jet_of(f: &Scalar) -> Self {
        Self::jet(Form::differential(f), f.clone()).expect("same chart")
    }

    pub fn chart_dim(&self) -> usize {
        self.x.chart_dim()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.f.is_zero() && self.alpha.is_zero() && self.g.is_zero()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        E1Section {
            x: self.x.scale(s),
            f: &self.f * s,
            alpha: self.alpha.scale(s),
            g: &self.g * s,
        }
    }

    /// The `2n + 2` components `(X^1..X^n, f, α_1..α_n, g)`.
    pub fn components(&self) -> Vec<Scalar> {
        let n = self.chart_dim();
        let mut out = Vec::with_capacity(2 * n + 2);
        out.extend((0..n).map(|i| self.x.coeff(&[i])));
        out.push(self.f.clone());
        out.extend((0..n).map(|i| self.alpha.coeff(&[i])));
        out.push(self.g.clone());
        out
    }

    pub fn from_components(c: &[Scalar]) -> Result<Self> {
        if c.len() < 2 || !c.len().is_multiple_of(2) {
            return Err(Error::Malformed(format!("{} section components", c.len())));
        }
        let n = c.len() / 2 - 1;
        Self::new(
            MultiVector::vector_field(c[..n].to_vec()),
            c[n].clone(),
            Form::one_form(c[n + 1..2 * n + 1].to_vec()),
            c[2 * n + 1].clone(),
        )
    }

    pub fn display_with(&self, names: &[String]) -> String {
        format!(
            "({}, {}) + ({}, {})",
            self.x.display_with(names),
            self.f.display_with(names),
            self.alpha.display_with(names),
            self.g.display_with(names)
        )
    }
}

impl fmt::Debug for E1Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.chart_dim()).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl std::ops::Add for &E1Section {
    type Output = E1Section;
    fn add(self, o: &E1Section) -> E1Section {
        E1Section {
            x: &self.x + &o.x,
            f: &self.f + &o.f,
            alpha: &self.alpha + &o.alpha,
            g: &self.g + &o.g,
        }
    }
}

impl std::ops::Sub for &E1Section {
    type Output = E1Section;
    fn sub(self, o: &E1Section) -> E1Section {
        E1Section {
            x: &self.x - &o.x,
            f: &self.f - &o.f,
            alpha: &self.alpha - &o.alpha,
            g: &self.g - &o.g,
        }
    }
}

impl std::ops::Neg for &E1Section {
    type Output = E1Section;
    fn neg(self) -> E1Section {
        E1Section {
            x: -&self.x,
            f: -&self.f,
            alpha: -&self.alpha,
            g: -&self.g,
        }
    }
}

fn same_chart(a: &E1Section, b: &E1Section) -> Result<()> {
    if a.chart_dim() != b.chart_dim() {
        return Err(Error::ChartMismatch(a.chart_dim(), b.chart_dim()));
    }
    Ok(())
}

/// `⟨e1, e2⟩₊ = ½(i_{X2}α1 + i_{X1}α2 + g1 f2 + g2 f1)`.
pub fn pair_plus(e1: &E1Section, e2: &E1Section) -> Result<Scalar> {
    same_chart(e1, e2)?;
    let s = &(&contract(&e2.x, &e1.alpha) + &contract(&e1.x, &e2.alpha))
        + &(&(&e1.g * &e2.f) + &(&e2.g * &e1.f));
    Ok(&s * &half(e1.chart_dim()))
}

/// `⟨e1, e2⟩₋ = ½(i_{X2}α1 − i_{X1}α2 + g1 f2 − g2 f1)`.
pub fn pair_minus(e1: &E1Section, e2: &E1Section) -> Result<Scalar> {
    same_chart(e1, e2)?;
    let s = &(&contract(&e2.x, &e1.alpha) - &contract(&e1.x, &e2.alpha))
        + &(&(&e1.g * &e2.f) - &(&e2.g * &e1.f));
    Ok(&s * &half(e1.chart_dim()))
}

/// The bracket on `E¹(M)`.
pub fn extended_bracket(e1: &E1Section, e2: &E1Section) -> Result<E1Section> {
    same_chart(e1, e2)?;
    let n = e1.chart_dim();
    let h = half(n);
    let (x1, f1, a1, g1) = (&e1.x, &e1.f, &e1.alpha, &e1.g);
    let (x2, f2, a2, g2) = (&e2.x, &e2.f, &e2.alpha, &e2.g);

    let x = x1.lie_bracket(x2)?;
    let f = &x1.apply(f2) - &x2.apply(f1);

    let skew = &contract(x2, a1) - &contract(x1, a2);
    let mut alpha = &a2.lie_derivative(x1)? - &a1.lie_derivative(x2)?;
    alpha = &alpha + &Form::differential(&skew).scale(&h);
    alpha = &alpha + &(&a2.scale(f1) - &a1.scale(f2));
    let jets = &(&Form::differential(f1).scale(g2) - &Form::differential(f2).scale(g1))
        + &(&Form::differential(g1).scale(f2) - &Form::differential(g2).scale(f1));
    alpha = &alpha + &jets.scale(&h);

    let inner = &(&skew - &(f2 * g1)) + &(f1 * g2);
    let g = &(&x1.apply(g2) - &x2.apply(g1)) + &(&inner * &h);
    Ok(E1Section { x, f, alpha, g })
}

/// The Courant bracket on `TM ⊕ T*M`:
/// `[(X1,α1),(X2,α2)] = ([X1,X2], L_{X1}α2 − L_{X2}α1 + ½ d(i_{X2}α1 − i_{X1}α2))`.
pub fn courant_bracket(
    x1: &MultiVector,
    a1: &Form,
    x2: &MultiVector,
    a2: &Form,
) -> Result<(MultiVector, Form)> {
    let e1 = E1Section::from_pair(x1.clone(), a1.clone())?;
    let e2 = E1Section::from_pair(x2.clone(), a2.clone())?;
    let n = e1.chart_dim();
    same_chart(&e1, &e2)?;
    let skew = &contract(x2, a1) - &contract(x1, a2);
    let alpha = &(&a2.lie_derivative(x1)? - &a1.lie_derivative(x2)?)
        + &Form::differential(&skew).scale(&half(n));
    Ok((x1.lie_bracket(x2)?, alpha))
}

/// Anchor `ρ(e) h = X · h`.
pub fn anchor_rho(e: &E1Section, h: &Scalar) -> Scalar {
    e.x.apply(h)
}

/// `T(e1, e2, e3) = ⅓⟨[e1,e2], e3⟩₊ + cyclic permutations`.
pub fn jacobiator_t(e1: &E1Section, e2: &E1Section, e3: &E1Section) -> Result<Scalar> {
    let n = e1.chart_dim();
    let t = &(&pair_plus(&extended_bracket(e1, e2)?, e3)?
        + &pair_plus(&extended_bracket(e2, e3)?, e1)?)
        + &pair_plus(&extended_bracket(e3, e1)?, e2)?;
    Ok(&t * &Scalar::from_ratio(1, 3, n))
}

/// The section `(0, 0) + (dT, T)` that the Jacobiator of the bracket must
/// equal.
pub fn jacobiator_target(e1: &E1Section, e2: &E1Section, e3: &E1Section) -> Result<E1Section> {
    Ok(E1Section::one_jet_of(&jacobiator_t(e1, e2, e3)?))
}

/// `[[e1,e2],e3] + cyclic permutations`.
pub fn jacobiator(e1: &E1Section, e2: &E1Section, e3: &E1Section) -> Result<E1Section> {
    let a = extended_bracket(&extended_bracket(e1, e2)?, e3)?;
    let b = extended_bracket(&extended_bracket(e2, e3)?, e1)?;
    let c = extended_bracket(&extended_bracket(e3, e1)?, e2)?;
    Ok(&(&a + &b) + &c)
}

/// The failure of the Leibniz rule
/// `[e1, h e2] − h[e1,e2] − (ρ(e1)h) e2 + ⟨e1,e2⟩₊ ((0,0) + (dh, 0))`, which
/// is zero in a Courant algebroid.
pub fn leibniz_defect(e1: &E1Section, e2: &E1Section, h: &Scalar) -> Result<E1Section> {
    let lhs = extended_bracket(e1, &e2.scale(h))?;
    let b = extended_bracket(e1, e2)?.scale(h);
    let r = e2.scale(&anchor_rho(e1, h));
    let corr = E1Section::jet(Form::differential(h), Scalar::zero(h.chart_dim()))?
        .scale(&pair_plus(e1, e2)?);
    Ok(&(&(&lhs - &b) - &r) + &corr)
}

/// Lifts a sub-bundle of `TM ⊕ T*M`, given by generators `(X_i, α_i)`, to
/// `L̃ = { (X, 0) + (α, g) : (X, α) ∈ L, g arbitrary }`.
pub fn lift_tilde(generators: &[(MultiVector, Form)]) -> Result<Vec<E1Section>> {
    let n = generators
        .first()
        .map(|(x, _)| x.chart_dim())
        .ok_or_else(|| Error::Malformed("empty generator list".into()))?;
    let mut out = generators
        .iter()
        .map(|(x, a)| E1Section::from_pair(x.clone(), a.clone()))
        .collect::<Result<Vec<_>>>()?;
    out.push(E1Section::jet(Form::zero(1, n), Scalar::one(n))?);
    Ok(out)
}
