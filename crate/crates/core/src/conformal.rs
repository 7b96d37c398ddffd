//! Conformal change of a Dirac structure by a nonvanishing function `a`.
//!
//! Given a section `s_a = (Y_a, θ_a) + (da, 0)` of `L`, the transform
//!
//! `(X, φ) + (α, f) ↦ (aX + f Y_a, aφ − i_{Y_a} α) + (α, f)`
//!
//! is linear over functions (the `f` in `f Y_a` is the section's own last
//! component), so `L^a` is spanned by the images of the generators of `L`.

use crate::admissible::{bracket_of, find_admissible, AdmissibleWitness};
use crate::courant::{contract, E1Section};
use crate::dirac::{ModuleComparison, SubBundle};
use crate::error::{Error, Result};
use crate::exterior::{Form, MultiVector};
use crate::scalar::{generic_rank, Matrix, Scalar};

/// A nonvanishing `a` together with `(Y_a, θ_a)` such that
/// `(Y_a, θ_a) + (da, 0)` lies in the sub-bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalFactor {
    pub a: Scalar,
    pub y: MultiVector,
    pub theta: Scalar,
}

impl ConformalFactor {
    pub fn section(&self) -> E1Section {
        E1Section::new(
            self.y.clone(),
            self.theta.clone(),
            Form::differential(&self.a),
            Scalar::zero(self.a.chart_dim()),
        )
        .expect("same chart")
    }

    /// The factor `1/a` for `L^a`: `Z_a = −Y_a / a`, `η_a = −θ_a / a`.
    pub fn inverse(&self) -> Result<ConformalFactor> {
        let inv = self.a.inv()?;
        Ok(ConformalFactor {
            y: -&self.y.scale(&inv),
            theta: -&(&self.theta * &inv),
            a: inv,
        })
    }
}

/// Solves for `(Y_a, θ_a)` with `(Y_a, θ_a) + (da, 0)` in the span of `L`.
pub fn find_conformal_section(l: &SubBundle, a: &Scalar) -> Result<ConformalFactor> {
    let n = l.chart_dim();
    if a.chart_dim() != n {
        return Err(Error::ChartMismatch(n, a.chart_dim()));
    }
    if a.is_zero() {
        return Err(Error::NoConformalSection("the factor is identically zero".into()));
    }
    let rows: Vec<usize> = (n + 1..2 * n + 2).collect();
    let mut target: Vec<Scalar> = (0..n).map(|i| a.d(i)).collect();
    target.push(Scalar::zero(n));
    let m = l.solve_rows(&rows, &target);
    let names = crate::scalar::default_names(n);
    let Some(c) = m.witness else {
        return Err(Error::NoConformalSection(format!(
            "no section (Y, θ) + (d({}), 0); leftover equation 0 = {}",
            a.display_with(&names),
            m.residual.expect("inconsistent").display_with(&names)
        )));
    };
    let s = l.combine(&c);
    Ok(ConformalFactor {
        a: a.clone(),
        y: s.x,
        theta: s.f,
    })
}

/// `(aX + f Y_a, aφ − i_{Y_a} α) + (α, f)`.
pub fn transform_section(e: &E1Section, c: &ConformalFactor) -> E1Section {
    E1Section {
        x: &e.x.scale(&c.a) + &c.y.scale(&e.g),
        f: &(&e.f * &c.a) - &contract(&c.y, &e.alpha),
        alpha: e.alpha.clone(),
        g: e.g.clone(),
    }
}

/// `L^a`, generated by the transforms of the generators of `L`.
pub fn conformal_transform(l: &SubBundle, c: &ConformalFactor) -> Result<SubBundle> {
    if c.a.chart_dim() != l.chart_dim() {
        return Err(Error::ChartMismatch(l.chart_dim(), c.a.chart_dim()));
    }
    if c.a.is_zero() {
        return Err(Error::NoConformalSection("the factor is identically zero".into()));
    }
    let gens = l.generators().iter().map(|g| transform_section(g, c)).collect();
    let mut assumptions: Vec<Scalar> = l.assumptions().to_vec();
    assumptions.push(c.a.clone());
    Ok(SubBundle::new(gens)?.with_assumptions(assumptions))
}

/// `{f, g}^a` computed as `(1/a){af, ag}` in `L` and as `−⟨δ_f, δ_g⟩₋` in `L^a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalBracket {
    pub via_rescaling: Scalar,
    pub via_transform: Scalar,
}

impl ConformalBracket {
    pub fn agree(&self) -> bool {
        self.via_rescaling == self.via_transform
    }
}

pub fn conformal_bracket(
    l: &SubBundle,
    c: &ConformalFactor,
    f: &Scalar,
    g: &Scalar,
) -> Result<ConformalBracket> {
    let la = conformal_transform(l, c)?;
    conformal_bracket_in(l, &la, c, f, g)
}

/// As [`conformal_bracket`] with `L^a` already built.
pub fn conformal_bracket_in(
    l: &SubBundle,
    la: &SubBundle,
    c: &ConformalFactor,
    f: &Scalar,
    g: &Scalar,
) -> Result<ConformalBracket> {
    let af = &c.a * f;
    let ag = &c.a * g;
    let inner = bracket_of(&find_admissible(l, &af)?, &find_admissible(l, &ag)?);
    let via_rescaling = &inner / &c.a;
    let via_transform = bracket_of(&find_admissible(la, f)?, &find_admissible(la, g)?);
    Ok(ConformalBracket {
        via_rescaling,
        via_transform,
    })
}

/// Outcome of the three checks making conformal equivalence an equivalence
/// relation, each as a comparison of spans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// `L^1 = L`.
    pub reflexive: ModuleComparison,
    /// `(aY_a, aθ_a) + (da, 0) ∈ L^a`.
    pub scaled_section_in_image: bool,
    /// `(Z_a, η_a) + (d(1/a), 0) ∈ L^a`.
    pub inverse_section_in_image: bool,
    /// `(L^a)^{1/a} = L`.
    pub symmetric: ModuleComparison,
    /// `(L^a)^b = L^{ab}`.
    pub transitive: ModuleComparison,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.reflexive.is_equal()
            && self.scaled_section_in_image
            && self.inverse_section_in_image
            && self.symmetric.is_equal()
            && self.transitive.is_equal()
    }
}

pub fn check_equivalence_axioms(
    l: &SubBundle,
    c: &ConformalFactor,
    b: &Scalar,
) -> Result<EquivalenceReport> {
    let n = l.chart_dim();
    let one = find_conformal_section(l, &Scalar::one(n))?;
    let reflexive = l.same_module(&conformal_transform(l, &one)?)?;

    let la = conformal_transform(l, c)?;
    let scaled = E1Section::new(
        c.y.scale(&c.a),
        &c.theta * &c.a,
        Form::differential(&c.a),
        Scalar::zero(n),
    )?;
    let scaled_section_in_image = la.contains_section(&scaled)?.contained();
    let inv = c.inverse()?;
    let inverse_section_in_image = la.contains_section(&inv.section())?.contained();
    let symmetric = l.same_module(&conformal_transform(&la, &inv)?)?;

    let cb = find_conformal_section(&la, b)?;
    let lab = conformal_transform(&la, &cb)?;
    let cab = find_conformal_section(l, &(&c.a * b))?;
    let transitive = lab.same_module(&conformal_transform(l, &cab)?)?;
    Ok(EquivalenceReport {
        reflexive,
        scaled_section_in_image,
        inverse_section_in_image,
        symmetric,
        transitive,
    })
}

/// Whether `L` is spanned by sections `(X_f, φ_f) + (df, f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningCheck {
    /// Functions from the family found admissible.
    pub admissible: Vec<Scalar>,
    /// Rank of their witnesses together with `L ∩ (TM × ℝ)`.
    pub rank: usize,
    pub expected_rank: usize,
}

impl SpanningCheck {
    pub fn spanned(&self) -> bool {
        self.rank == self.expected_rank
    }
}

/// The default probe family: `{b, b·x_i}` where `b` runs over `1`, the
/// declared nonvanishing functions, and the denominators of the generators.
/// A heuristic: a negative answer only means this family did not suffice.
pub fn default_family(l: &SubBundle) -> Vec<Scalar> {
    let n = l.chart_dim();
    let mut bases = vec![Scalar::one(n)];
    let dens = l
        .generators()
        .iter()
        .flat_map(E1Section::components)
        .map(|s| Scalar::from_poly(s.denominator().clone()))
        .filter(|d| !d.is_constant());
    for b in l.assumptions().iter().cloned().chain(dens) {
        if !bases.contains(&b) {
            bases.push(b);
        }
    }
    let mut out = Vec::new();
    for b in &bases {
        out.push(b.clone());
        for i in 0..n {
            out.push(b * &Scalar::coordinate(i, n));
        }
    }
    out
}

/// Checks the spanning hypothesis under which `L^a` is again Dirac: the
/// sections `e_f` for admissible `f` in `family`, together with
/// `L ∩ (TM × ℝ)` (the sections `e_0`), have rank `n + 1`.
pub fn spanning_hypothesis(l: &SubBundle, family: &[Scalar]) -> Result<SpanningCheck> {
    let n = l.chart_dim();
    let mut admissible = Vec::new();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut freedom_added = false;
    for f in family {
        let w: AdmissibleWitness = match find_admissible(l, f) {
            Ok(w) => w,
            Err(Error::NotAdmissible(_)) => continue,
            Err(e) => return Err(e),
        };
        if !freedom_added {
            rows.extend(w.freedom.iter().map(E1Section::components));
            freedom_added = true;
        }
        rows.push(w.section().components());
        admissible.push(f.clone());
    }
    let rank = if rows.is_empty() {
        0
    } else {
        generic_rank(&Matrix::from_rows(rows, n)?)
    };
    Ok(SpanningCheck {
        admissible,
        rank,
        expected_rank: n + 1,
    })
}
