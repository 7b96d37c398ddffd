//! Tensor-level checks for Poisson, Jacobi, homogeneous Poisson, locally
//! conformal presymplectic and Nambu structures, plus the 1-jet bracket of a
//! Jacobi pair and its isomorphism onto the graph of the pair.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::courant::{contract, E1Section};
use crate::error::{Error, Result};
use crate::exterior::{interior_product, schouten_bracket, Form, MultiVector};
use crate::sample::subsets;
use crate::scalar::Scalar;

fn expect_degree(got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::DegreeMismatch { expected, got });
    }
    Ok(())
}

fn expect_chart(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::ChartMismatch(a, b));
    }
    Ok(())
}

/// A bivector `π` and a vector field `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiPair {
    pub pi: MultiVector,
    pub e: MultiVector,
}

impl JacobiPair {
    pub fn new(pi: MultiVector, e: MultiVector) -> Result<Self> {
        expect_degree(pi.degree(), 2)?;
        expect_degree(e.degree(), 1)?;
        expect_chart(pi.chart_dim(), e.chart_dim())?;
        Ok(JacobiPair { pi, e })
    }

    pub fn chart_dim(&self) -> usize {
        self.pi.chart_dim()
    }
}

/// A bivector `π` and a vector field `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPair {
    pub pi: MultiVector,
    pub z: MultiVector,
}

impl HomogeneousPair {
    pub fn new(pi: MultiVector, z: MultiVector) -> Result<Self> {
        expect_degree(pi.degree(), 2)?;
        expect_degree(z.degree(), 1)?;
        expect_chart(pi.chart_dim(), z.chart_dim())?;
        Ok(HomogeneousPair { pi, z })
    }

    pub fn chart_dim(&self) -> usize {
        self.pi.chart_dim()
    }
}

/// A 2-form `ω` and a 1-form `η`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcpsPair {
    pub omega: Form,
    pub eta: Form,
}

impl LcpsPair {
    pub fn new(omega: Form, eta: Form) -> Result<Self> {
        expect_degree(omega.degree(), 2)?;
        expect_degree(eta.degree(), 1)?;
        expect_chart(omega.chart_dim(), eta.chart_dim())?;
        Ok(LcpsPair { omega, eta })
    }

    pub fn chart_dim(&self) -> usize {
        self.omega.chart_dim()
    }
}

/// A 2-form `ω` and a 1-form `α`; the graph is Dirac iff `ω = dα`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPair {
    pub omega: Form,
    pub alpha: Form,
}

impl ExactPair {
    pub fn new(omega: Form, alpha: Form) -> Result<Self> {
        expect_degree(omega.degree(), 2)?;
        expect_degree(alpha.degree(), 1)?;
        expect_chart(omega.chart_dim(), alpha.chart_dim())?;
        Ok(ExactPair { omega, alpha })
    }

    pub fn chart_dim(&self) -> usize {
        self.omega.chart_dim()
    }
}

/// A p-vector field with `2 ≤ p ≤ n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NambuField {
    pub pi: MultiVector,
}

impl NambuField {
    pub fn new(pi: MultiVector) -> Result<Self> {
        let (p, n) = (pi.degree(), pi.chart_dim());
        if p < 2 || p > n {
            return Err(Error::Malformed(format!(
                "Nambu order {p} outside 2..={n}"
            )));
        }
        Ok(NambuField { pi })
    }

    pub fn order(&self) -> usize {
        self.pi.degree()
    }

    /// `{f_1, …, f_p} = Π(df_1, …, df_p)`.
    pub fn bracket(&self, fs: &[Scalar]) -> Result<Scalar> {
        let forms: Vec<Form> = fs.iter().map(Form::differential).collect();
        self.pi.evaluate(&forms)
    }
}

/// A pair `(α, f)` of a 1-form and a function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneJet {
    pub alpha: Form,
    pub f: Scalar,
}

impl OneJet {
    pub fn new(alpha: Form, f: Scalar) -> Result<Self> {
        expect_degree(alpha.degree(), 1)?;
        expect_chart(alpha.chart_dim(), f.chart_dim())?;
        Ok(OneJet { alpha, f })
    }

    /// `(dh, h)`.
    pub fn of(h: &Scalar) -> Self {
        OneJet {
            alpha: Form::differential(h),
            f: h.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.f.is_zero()
    }
}

/// What is left over from an identity that should hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residual {
    Vector(MultiVector),
    Form(Form),
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Vector(v) => v.is_zero(),
            Residual::Form(w) => w.is_zero(),
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        match self {
            Residual::Vector(v) => v.display_with(names),
            Residual::Form(w) => w.display_with(names),
        }
    }
}

/// An expression that must vanish; `label` names it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub label: String,
    pub residual: Residual,
}

impl Condition {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConditionReport {
    pub conditions: Vec<Condition>,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.conditions.iter().all(Condition::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.holds())
    }

    fn push_vector(&mut self, label: &str, v: MultiVector) {
        self.conditions.push(Condition {
            label: label.to_string(),
            residual: Residual::Vector(v),
        });
    }

    fn push_form(&mut self, label: String, w: Form) {
        self.conditions.push(Condition {
            label,
            residual: Residual::Form(w),
        });
    }
}

/// `[π, π]_s = 0`.
pub fn check_poisson(pi: &MultiVector) -> Result<ConditionReport> {
    expect_degree(pi.degree(), 2)?;
    let mut r = ConditionReport::default();
    r.push_vector("[π,π]_s", schouten_bracket(pi, pi)?);
    Ok(r)
}

/// `[E, π]_s = 0` and `[π, π]_s = 2E ∧ π`.
pub fn check_jacobi(j: &JacobiPair) -> Result<ConditionReport> {
    let n = j.chart_dim();
    let mut r = ConditionReport::default();
    r.push_vector("[E,π]_s", schouten_bracket(&j.e, &j.pi)?);
    let two_e_pi = j.e.wedge(&j.pi).scale(&Scalar::from_int(2, n));
    r.push_vector("[π,π]_s − 2E∧π", &schouten_bracket(&j.pi, &j.pi)? - &two_e_pi);
    Ok(r)
}

/// `[π, π]_s = 0` and `[Z, π]_s = −π`.
pub fn check_homogeneous(h: &HomogeneousPair) -> Result<ConditionReport> {
    let mut r = ConditionReport::default();
    r.push_vector("[π,π]_s", schouten_bracket(&h.pi, &h.pi)?);
    r.push_vector("[Z,π]_s + π", &schouten_bracket(&h.z, &h.pi)? + &h.pi);
    Ok(r)
}

/// `dη = 0` and `dω = η ∧ ω`.
pub fn check_lcps(l: &LcpsPair) -> Result<ConditionReport> {
    let mut r = ConditionReport::default();
    r.push_form("dη".into(), l.eta.exterior_derivative());
    r.push_form(
        "dω − η∧ω".into(),
        &l.omega.exterior_derivative() - &l.eta.wedge(&l.omega),
    );
    Ok(r)
}

/// `ω = dα`.
pub fn check_exact_pair(e: &ExactPair) -> Result<ConditionReport> {
    let mut r = ConditionReport::default();
    r.push_form("ω − dα".into(), &e.omega - &e.alpha.exterior_derivative());
    Ok(r)
}

/// The co-Nambu conditions `(i_A ω) ∧ ω = 0` and `(i_A ω) ∧ dω = 0`, with
/// `A` running over coordinate `(k−1)`-vectors; both sides are linear in
/// `A` over functions, so that is enough.
pub fn check_conambu(omega: &Form) -> Result<ConditionReport> {
    let (k, n) = (omega.degree(), omega.chart_dim());
    let mut r = ConditionReport::default();
    if k == 0 {
        return Ok(r);
    }
    let d_omega = omega.exterior_derivative();
    for idx in subsets(n, k - 1) {
        let a = MultiVector::basis(&idx, n);
        let ia = interior_product(&a, omega)?;
        let tag: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        let tag = tag.join(",");
        r.push_form(format!("(i_A ω)∧ω, A = ∂[{tag}]"), ia.wedge(omega));
        r.push_form(format!("(i_A ω)∧dω, A = ∂[{tag}]"), ia.wedge(&d_omega));
    }
    Ok(r)
}

/// A Fundamental Identity failure: indices into the test family and the
/// nonzero difference of the two sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiFailure {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub residual: Scalar,
}

/// Outcome of testing the Fundamental Identity on a finite family. Passing
/// is a necessary condition only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiReport {
    pub family_size: usize,
    pub checked: usize,
    pub failure: Option<FiFailure>,
}

impl FiReport {
    pub fn passed_on_family(&self) -> bool {
        self.failure.is_none()
    }
}

/// Tests the Fundamental Identity on all choices of `f_1..f_{p−1}` and
/// `g_1..g_p` from `family`.
///
/// Both sides are alternating in the `f`s and in the `g`s, so strictly
/// increasing index tuples cover every choice.
pub fn check_fundamental_identity(nambu: &NambuField, family: &[Scalar]) -> Result<FiReport> {
    let p = nambu.order();
    let n = nambu.pi.chart_dim();
    if family.len() < 2 * p - 1 {
        return Err(Error::FamilyTooSmall {
            needed: 2 * p - 1,
            got: family.len(),
        });
    }
    if let Some(h) = family.iter().find(|h| h.chart_dim() != n) {
        return Err(Error::ChartMismatch(n, h.chart_dim()));
    }
    let m = family.len();
    // brackets of family members only, on increasing tuples
    let inner: HashMap<Vec<usize>, Scalar> = subsets(m, p)
        .into_par_iter()
        .map(|idx| {
            let fs: Vec<Scalar> = idx.iter().map(|&i| family[i].clone()).collect();
            let v = nambu.bracket(&fs).expect("degree checked");
            (idx, v)
        })
        .collect();
    let lookup = |idx: &[usize]| -> Scalar {
        let mut sorted = idx.to_vec();
        match crate::exterior::sort_with_sign(&mut sorted) {
            None => Scalar::zero(n),
            Some(s) => {
                let v = inner[&sorted].clone();
                if s < 0 {
                    -v
                } else {
                    v
                }
            }
        }
    };

    let fs_all = subsets(m, p - 1);
    let gs_all = subsets(m, p);
    let checked = fs_all.len() * gs_all.len();
    let failure = fs_all.par_iter().find_map_first(|fi| {
        let fvals: Vec<Scalar> = fi.iter().map(|&i| family[i].clone()).collect();
        for gi in &gs_all {
            let mut args = fvals.clone();
            args.push(lookup(gi));
            let lhs = nambu.bracket(&args).expect("degree checked");
            let mut rhs = Scalar::zero(n);
            for k in 0..p {
                let mut idx = fi.clone();
                idx.push(gi[k]);
                let b = lookup(&idx);
                if b.is_zero() {
                    continue;
                }
                let args: Vec<Scalar> = gi
                    .iter()
                    .enumerate()
                    .map(|(j, &g)| if j == k { b.clone() } else { family[g].clone() })
                    .collect();
                rhs = &rhs + &nambu.bracket(&args).expect("degree checked");
            }
            let residual = &lhs - &rhs;
            if !residual.is_zero() {
                return Some(FiFailure {
                    f: fi.clone(),
                    g: gi.clone(),
                    residual,
                });
            }
        }
        None
    });
    Ok(FiReport {
        family_size: m,
        checked: if failure.is_some() { 0 } else { checked },
        failure,
    })
}

/// `ω = i_Π Ω` for a volume form `Ω`.
pub fn nambu_to_form(nambu: &NambuField, volume: &Form) -> Result<Form> {
    let n = nambu.pi.chart_dim();
    expect_chart(n, volume.chart_dim())?;
    expect_degree(volume.degree(), n)?;
    if volume.is_zero() {
        return Err(Error::Malformed("degenerate volume form".into()));
    }
    interior_product(&nambu.pi, volume)
}

/// The bracket of 1-jets attached to a Jacobi pair `(π, E)`:
///
/// `{(α,f),(β,g)} = (L_{πα}β − L_{πβ}α − dπ(α,β) + f L_Eβ − g L_Eα − i_E(α∧β),
///                   −π(α,β) + π(α,dg) − π(β,df) + f E·g − g E·f)`
pub fn ks_bracket(j: &JacobiPair, u: &OneJet, v: &OneJet) -> Result<OneJet> {
    let n = j.chart_dim();
    for w in [u, v] {
        expect_chart(n, w.alpha.chart_dim())?;
    }
    let (a, f) = (&u.alpha, &u.f);
    let (b, g) = (&v.alpha, &v.f);
    let pi_ab = j.pi.evaluate(&[a.clone(), b.clone()])?;

    let mut form = &b.lie_derivative(&j.pi.sharp(a)?)? - &a.lie_derivative(&j.pi.sharp(b)?)?;
    form = &form - &Form::differential(&pi_ab);
    form = &form + &(&b.lie_derivative(&j.e)?.scale(f) - &a.lie_derivative(&j.e)?.scale(g));
    form = &form - &interior_product(&j.e, &a.wedge(b))?;

    let pi_a_dg = j.pi.evaluate(&[a.clone(), Form::differential(g)])?;
    let pi_b_df = j.pi.evaluate(&[b.clone(), Form::differential(f)])?;
    let func = &(&(&pi_a_dg - &pi_ab) - &pi_b_df) + &(&(f * &j.e.apply(g)) - &(g * &j.e.apply(f)));
    Ok(OneJet {
        alpha: form,
        f: func,
    })
}

/// `Φ(α, f) = (πα + fE, −i_E α) + (α, f)`.
pub fn phi_iso(j: &JacobiPair, u: &OneJet) -> Result<E1Section> {
    let x = &j.pi.sharp(&u.alpha)? + &j.e.scale(&u.f);
    let phi = -&contract(&j.e, &u.alpha);
    E1Section::new(x, phi, u.alpha.clone(), u.f.clone())
}
