//! Admissible functions of a maximal isotropic sub-bundle and their bracket.
//!
//! `f` is admissible when some section `(X_f, φ_f) + (df, f)` lies in `L`.
//! The bracket `{f, g} = −⟨e_f, e_g⟩₋ = X_f·g + g φ_f` does not depend on the
//! section chosen.

use crate::courant::{pair_minus, E1Section};
use crate::dirac::{build_graph, GraphPayload, SubBundle};
use crate::error::{Error, Result};
use crate::exterior::{Form, MultiVector};
use crate::scalar::Scalar;
use crate::structures::{check_jacobi, ConditionReport, JacobiPair};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleWitness {
    pub f: Scalar,
    pub x_f: MultiVector,
    pub phi_f: Scalar,
    /// Coefficients of `e_f` on the generators.
    pub coefficients: Vec<Scalar>,
    /// Nonzero sections of `L ∩ (TM × ℝ)` spanning the ambiguity in `e_f`.
    pub freedom: Vec<E1Section>,
    pub denominators: Vec<Scalar>,
}

impl AdmissibleWitness {
    /// `e_f = (X_f, φ_f) + (df, f)`.
    pub fn section(&self) -> E1Section {
        E1Section::new(
            self.x_f.clone(),
            self.phi_f.clone(),
            Form::differential(&self.f),
            self.f.clone(),
        )
        .expect("same chart")
    }

    /// The same witness with `e_f` moved by a section of `L ∩ (TM × ℝ)`.
    pub fn shifted(&self, by: &E1Section) -> Self {
        let mut w = self.clone();
        w.x_f = &w.x_f + &by.x;
        w.phi_f = &w.phi_f + &by.f;
        w
    }
}

/// The rows holding `(α, g)` in [`E1Section::components`].
fn jet_rows(n: usize) -> Vec<usize> {
    (n + 1..2 * n + 2).collect()
}

/// Solves for a section `(X, φ) + (df, f)` of `L`.
pub fn find_admissible(l: &SubBundle, f: &Scalar) -> Result<AdmissibleWitness> {
    let n = l.chart_dim();
    if f.chart_dim() != n {
        return Err(Error::ChartMismatch(n, f.chart_dim()));
    }
    let mut target: Vec<Scalar> = (0..n).map(|i| f.d(i)).collect();
    target.push(f.clone());
    let m = l.solve_rows(&jet_rows(n), &target);
    let Some(coeffs) = m.witness else {
        let names = crate::scalar::default_names(n);
        return Err(Error::NotAdmissible(format!(
            "{}: leftover equation 0 = {}",
            f.display_with(&names),
            m.residual.expect("no solution carries a residual").display_with(&names)
        )));
    };
    let e = l.combine(&coeffs);
    let freedom = m
        .freedom
        .iter()
        .map(|c| l.combine(c))
        .filter(|s| !s.is_zero())
        .collect();
    Ok(AdmissibleWitness {
        f: f.clone(),
        x_f: e.x,
        phi_f: e.f,
        coefficients: coeffs,
        freedom,
        denominators: m.denominators,
    })
}

/// `{f, g}` from two witnesses.
pub fn bracket_of(wf: &AdmissibleWitness, wg: &AdmissibleWitness) -> Scalar {
    -pair_minus(&wf.section(), &wg.section()).expect("same chart")
}

pub fn admissible_bracket(l: &SubBundle, f: &Scalar, g: &Scalar) -> Result<Scalar> {
    Ok(bracket_of(&find_admissible(l, f)?, &find_admissible(l, g)?))
}

/// `{f, gh} − (g{f,h} + {f,g}h − gh φ_f)`; zero whenever `f, g, h, gh` are
/// admissible.
pub fn leibniz_defect(l: &SubBundle, f: &Scalar, g: &Scalar, h: &Scalar) -> Result<Scalar> {
    let wf = find_admissible(l, f)?;
    let gh = g * h;
    let lhs = bracket_of(&wf, &find_admissible(l, &gh)?);
    let fh = bracket_of(&wf, &find_admissible(l, h)?);
    let fg = bracket_of(&wf, &find_admissible(l, g)?);
    let rhs = &(&(g * &fh) + &(&fg * h)) - &(&gh * &wf.phi_f);
    Ok(&lhs - &rhs)
}

/// `g e_f + f s_g`, the section showing `gf` is admissible when
/// `s_g = (Y_g, θ_g) + (dg, 0)` lies in `L`.
pub fn product_section(wf: &AdmissibleWitness, g: &Scalar, s_g: &E1Section) -> E1Section {
    &wf.section().scale(g) + &s_g.scale(&wf.f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredJacobi {
    pub pair: JacobiPair,
    /// The Jacobi identities of the recovered pair.
    pub conditions: ConditionReport,
    /// Whether the graph of the pair spans the same module as `L`.
    pub reproduces: bool,
}

impl RecoveredJacobi {
    pub fn is_consistent(&self) -> bool {
        self.conditions.holds() && self.reproduces
    }
}

/// Reads off `(π, E)` from a sub-bundle for which `1` and every coordinate
/// are admissible: `E = X_1` and
/// `π(dx_i, dx_j) = {x_i, x_j} − x_i E^j + x_j E^i`.
pub fn recover_jacobi(l: &SubBundle) -> Result<RecoveredJacobi> {
    let n = l.chart_dim();
    let one = find_admissible(l, &Scalar::one(n))?;
    let e = one.x_f.clone();
    let coords: Vec<AdmissibleWitness> = (0..n)
        .map(|i| find_admissible(l, &Scalar::coordinate(i, n)))
        .collect::<Result<_>>()?;
    let mut comps = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let b = bracket_of(&coords[i], &coords[j]);
            let xi = Scalar::coordinate(i, n);
            let xj = Scalar::coordinate(j, n);
            let v = &(&b - &(&xi * &e.coeff(&[j]))) + &(&xj * &e.coeff(&[i]));
            if !v.is_zero() {
                comps.push((vec![i, j], v));
            }
        }
    }
    let pi = MultiVector::from_components(2, n, comps)?;
    let pair = JacobiPair::new(pi, e)?;
    let conditions = check_jacobi(&pair)?;
    let graph = build_graph(&GraphPayload::Jacobi(pair.clone()))?;
    let reproduces = graph.same_module(l)?.is_equal();
    Ok(RecoveredJacobi {
        pair,
        conditions,
        reproduces,
    })
}
