//! Sub-bundles of `E¹(M)` given by generating sections, and the exact
//! decision of the Dirac condition.
//!
//! All answers are generic: they hold on the open dense set where the pivots
//! used by elimination do not vanish. Those pivots are reported.

use rayon::prelude::*;

use crate::courant::{contract, extended_bracket, pair_plus, E1Section};
use crate::error::{Error, Result};
use crate::exterior::{Form, MultiVector};
use crate::scalar::{
    generic_rank, nullspace, rank_with_pivots, solve_linear, LinearSystem, Matrix, SolveOutcome,
};
use crate::scalar::Scalar;
use crate::structures::{
    check_exact_pair, check_homogeneous, check_jacobi, check_lcps, check_poisson, Condition,
    ConditionReport, ExactPair, HomogeneousPair, JacobiPair, LcpsPair, Residual,
};

/// A sub-bundle presented by generating sections over the function field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubBundle {
    generators: Vec<E1Section>,
    n: usize,
    assumptions: Vec<Scalar>,
}

/// Result of asking whether a section lies in the span of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    /// Coefficients `c` with `Σ c_i g_i = e`, when they exist.
    pub witness: Option<Vec<Scalar>>,
    /// Basis of the relations among the generators.
    pub freedom: Vec<Vec<Scalar>>,
    /// A nonzero leftover proving non-membership.
    pub residual: Option<Scalar>,
    pub denominators: Vec<Scalar>,
}

impl Membership {
    pub fn contained(&self) -> bool {
        self.witness.is_some()
    }
}

impl SubBundle {
    pub fn new(generators: Vec<E1Section>) -> Result<Self> {
        let n = generators
            .first()
            .map(E1Section::chart_dim)
            .ok_or_else(|| Error::Malformed("a sub-bundle needs at least one generator".into()))?;
        if let Some(g) = generators.iter().find(|g| g.chart_dim() != n) {
            return Err(Error::ChartMismatch(n, g.chart_dim()));
        }
        Ok(SubBundle {
            generators,
            n,
            assumptions: Vec::new(),
        })
    }

    /// Records functions the construction divided by or assumed nonvanishing.
    pub fn with_assumptions(mut self, extra: impl IntoIterator<Item = Scalar>) -> Self {
        for a in extra {
            if !a.is_constant() && !self.assumptions.contains(&a) {
                self.assumptions.push(a);
            }
        }
        self
    }

    pub fn generators(&self) -> &[E1Section] {
        &self.generators
    }

    pub fn chart_dim(&self) -> usize {
        self.n
    }

    pub fn assumptions(&self) -> &[Scalar] {
        &self.assumptions
    }

    /// Rows are generators, columns the `2n + 2` section components.
    pub fn component_matrix(&self) -> Matrix {
        let rows = self.generators.iter().map(E1Section::components).collect();
        Matrix::from_rows(rows, self.n).expect("generators share a chart")
    }

    /// `Σ c_i g_i`.
    pub fn combine(&self, coeffs: &[Scalar]) -> E1Section {
        assert_eq!(coeffs.len(), self.generators.len());
        self.generators
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .fold(E1Section::zero(self.n), |acc, (g, c)| &acc + &g.scale(c))
    }

    /// Solves `Σ c_i g_i = target` on the component rows selected by `rows`.
    pub(crate) fn solve_rows(&self, rows: &[usize], target: &[Scalar]) -> Membership {
        let comps: Vec<Vec<Scalar>> = self.generators.iter().map(E1Section::components).collect();
        let m: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|&r| comps.iter().map(|g| g[r].clone()).collect())
            .collect();
        let matrix = Matrix::from_rows(m, self.n).expect("rectangular");
        let sys = LinearSystem::new(matrix, target.to_vec()).expect("sizes agree");
        match solve_linear(&sys) {
            SolveOutcome::Solved(s) => Membership {
                witness: Some(s.particular),
                freedom: s.nullspace,
                residual: None,
                denominators: s.denominators,
            },
            SolveOutcome::NoSolution { residual } => Membership {
                witness: None,
                freedom: Vec::new(),
                residual: Some(residual),
                denominators: Vec::new(),
            },
        }
    }

    pub fn contains_section(&self, e: &E1Section) -> Result<Membership> {
        if e.chart_dim() != self.n {
            return Err(Error::ChartMismatch(self.n, e.chart_dim()));
        }
        let rows: Vec<usize> = (0..2 * self.n + 2).collect();
        Ok(self.solve_rows(&rows, &e.components()))
    }

    /// Equality of the spans, by containment both ways. On failure returns
    /// which side's generator is missing from the other.
    pub fn same_module(&self, other: &SubBundle) -> Result<ModuleComparison> {
        for (i, g) in other.generators.iter().enumerate() {
            if !self.contains_section(g)?.contained() {
                return Ok(ModuleComparison::MissingFromLeft(i));
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            if !other.contains_section(g)?.contained() {
                return Ok(ModuleComparison::MissingFromRight(i));
            }
        }
        Ok(ModuleComparison::Equal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleComparison {
    Equal,
    /// Generator `i` of the right-hand bundle is not in the left span.
    MissingFromLeft(usize),
    /// Generator `i` of the left-hand bundle is not in the right span.
    MissingFromRight(usize),
}

impl ModuleComparison {
    pub fn is_equal(self) -> bool {
        self == ModuleComparison::Equal
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyFailure {
    pub i: usize,
    pub j: usize,
    pub value: Scalar,
}

/// A nonzero `⟨[g_i, g_j], g_k⟩₊`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracVerdict {
    pub is_isotropic: bool,
    pub isotropy_failures: Vec<IsotropyFailure>,
    pub generic_rank: usize,
    pub expected_rank: usize,
    pub is_maximal: bool,
    /// Non-constant pivots of the rank computation; the rank may drop where
    /// one vanishes.
    pub rank_pivots: Vec<Scalar>,
    /// False for the partial verdict of [`is_maximal_isotropic`].
    pub closure_checked: bool,
    pub closure_obstructions: Vec<Obstruction>,
    pub assumptions_used: Vec<Scalar>,
}

impl DiracVerdict {
    pub fn is_maximal_isotropic(&self) -> bool {
        self.is_isotropic && self.is_maximal
    }

    pub fn is_dirac(&self) -> bool {
        self.is_maximal_isotropic() && self.closure_checked && self.closure_obstructions.is_empty()
    }

    pub fn caveats(&self, names: &[String]) -> Vec<String> {
        let mut out = Vec::new();
        if !self.rank_pivots.is_empty() {
            let ps: Vec<String> = self.rank_pivots.iter().map(|p| p.display_with(names)).collect();
            out.push(format!(
                "generic rank; may drop where any of [{}] vanishes",
                ps.join(", ")
            ));
        }
        if !self.assumptions_used.is_empty() {
            let ps: Vec<String> =
                self.assumptions_used.iter().map(|p| p.display_with(names)).collect();
            out.push(format!("assumed nonvanishing: [{}]", ps.join(", ")));
        }
        out
    }
}

/// Pairwise isotropy of the generators and rank `n + 1`.
pub fn is_maximal_isotropic(l: &SubBundle) -> DiracVerdict {
    let gens = &l.generators;
    let mut isotropy_failures = Vec::new();
    for i in 0..gens.len() {
        for j in i..gens.len() {
            let v = pair_plus(&gens[i], &gens[j]).expect("same chart");
            if !v.is_zero() {
                isotropy_failures.push(IsotropyFailure { i, j, value: v });
            }
        }
    }
    let (rank, pivots) = rank_with_pivots(&l.component_matrix());
    let expected = l.n + 1;
    DiracVerdict {
        is_isotropic: isotropy_failures.is_empty(),
        isotropy_failures,
        generic_rank: rank,
        expected_rank: expected,
        is_maximal: rank == expected,
        rank_pivots: pivots,
        closure_checked: false,
        closure_obstructions: Vec::new(),
        assumptions_used: l.assumptions.clone(),
    }
}

/// Decides the Dirac condition: maximal isotropy plus
/// `⟨[g_i, g_j], g_k⟩₊ = 0` for all `i < j` and all `k`. On an isotropic
/// span the triple pairing is tensorial, so the generators suffice.
pub fn is_dirac(l: &SubBundle) -> DiracVerdict {
    let mut verdict = is_maximal_isotropic(l);
    let gens = &l.generators;
    let m = gens.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let obstructions: Vec<Obstruction> = pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let b = extended_bracket(&gens[i], &gens[j]).expect("same chart");
            (0..m)
                .filter_map(|k| {
                    let v = pair_plus(&b, &gens[k]).expect("same chart");
                    (!v.is_zero()).then_some(Obstruction { i, j, k, value: v })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    verdict.closure_checked = true;
    verdict.closure_obstructions = obstructions;
    verdict
}

/// The structures whose graphs are built by [`build_graph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphPayload {
    TwoForm(Form),
    Bivector(MultiVector),
    /// Vector fields spanning a regular distribution.
    Distribution(Vec<MultiVector>),
    Jacobi(JacobiPair),
    Lcps(LcpsPair),
    Homogeneous(HomogeneousPair),
    ExactPair(ExactPair),
}

impl GraphPayload {
    pub fn kind(&self) -> &'static str {
        match self {
            GraphPayload::TwoForm(_) => "two_form",
            GraphPayload::Bivector(_) => "bivector",
            GraphPayload::Distribution(_) => "distribution",
            GraphPayload::Jacobi(_) => "jacobi",
            GraphPayload::Lcps(_) => "lcps",
            GraphPayload::Homogeneous(_) => "homogeneous",
            GraphPayload::ExactPair(_) => "exact_pair",
        }
    }

    pub fn chart_dim(&self) -> usize {
        match self {
            GraphPayload::TwoForm(w) => w.chart_dim(),
            GraphPayload::Bivector(p) => p.chart_dim(),
            GraphPayload::Distribution(xs) => xs.first().map_or(0, MultiVector::chart_dim),
            GraphPayload::Jacobi(j) => j.chart_dim(),
            GraphPayload::Lcps(l) => l.chart_dim(),
            GraphPayload::Homogeneous(h) => h.chart_dim(),
            GraphPayload::ExactPair(e) => e.chart_dim(),
        }
    }

    /// The tensor identities equivalent to the graph being Dirac.
    pub fn tensor_conditions(&self) -> Result<ConditionReport> {
        match self {
            GraphPayload::TwoForm(w) => Ok(ConditionReport {
                conditions: vec![Condition {
                    label: "dω".into(),
                    residual: Residual::Form(w.exterior_derivative()),
                }],
            }),
            GraphPayload::Bivector(p) => check_poisson(p),
            GraphPayload::Distribution(xs) => involutivity(xs),
            GraphPayload::Jacobi(j) => check_jacobi(j),
            GraphPayload::Lcps(l) => check_lcps(l),
            GraphPayload::Homogeneous(h) => check_homogeneous(h),
            GraphPayload::ExactPair(e) => check_exact_pair(e),
        }
    }
}

fn field_matrix(xs: &[MultiVector], n: usize) -> Matrix {
    let rows = xs.iter().map(MultiVector::vector_coeffs).collect();
    Matrix::from_rows(rows, n).expect("same chart")
}

/// `[X_k, X_l] ∈ span{X}`; a failing pair's bracket is the residual.
fn involutivity(xs: &[MultiVector]) -> Result<ConditionReport> {
    let n = xs.first().map_or(0, MultiVector::chart_dim);
    let r = generic_rank(&field_matrix(xs, n));
    let mut report = ConditionReport::default();
    for k in 0..xs.len() {
        for l in k + 1..xs.len() {
            let b = xs[k].lie_bracket(&xs[l])?;
            let mut with = xs.to_vec();
            with.push(b.clone());
            let inside = generic_rank(&field_matrix(&with, n)) == r;
            report.conditions.push(Condition {
                label: format!("[X{k},X{l}] mod span"),
                residual: Residual::Vector(if inside { MultiVector::zero(1, n) } else { b }),
            });
        }
    }
    Ok(report)
}

fn check_degree(got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::DegreeMismatch { expected, got });
    }
    Ok(())
}

fn unit_jet(n: usize) -> E1Section {
    E1Section::jet(Form::zero(1, n), Scalar::one(n)).expect("chart")
}

/// Builds the (lifted) graph of a structure. Isotropy is re-verified.
pub fn build_graph(payload: &GraphPayload) -> Result<SubBundle> {
    let n = payload.chart_dim();
    let zero = || Scalar::zero(n);
    let mut gens = Vec::with_capacity(n + 1);
    match payload {
        GraphPayload::TwoForm(w) => {
            check_degree(w.degree(), 2)?;
            for i in 0..n {
                let del = MultiVector::partial_basis(i, n);
                let a = w.interior(&del)?;
                gens.push(E1Section::from_pair(del, a)?);
            }
            gens.push(unit_jet(n));
        }
        GraphPayload::Bivector(p) => {
            check_degree(p.degree(), 2)?;
            for i in 0..n {
                let dx = Form::dx(i, n);
                gens.push(E1Section::from_pair(p.sharp(&dx)?, dx)?);
            }
            gens.push(unit_jet(n));
        }
        GraphPayload::Distribution(xs) => {
            if xs.is_empty() {
                return Err(Error::Malformed("a distribution needs spanning fields".into()));
            }
            for x in xs {
                check_degree(x.degree(), 1)?;
                if x.chart_dim() != n {
                    return Err(Error::ChartMismatch(n, x.chart_dim()));
                }
            }
            let m = field_matrix(xs, n);
            if generic_rank(&m) != xs.len() {
                return Err(Error::Malformed(
                    "distribution fields must be linearly independent".into(),
                ));
            }
            for x in xs {
                gens.push(E1Section::from_pair(x.clone(), Form::zero(1, n))?);
            }
            for beta in nullspace(&m) {
                gens.push(E1Section::jet(Form::one_form(beta), zero())?);
            }
            gens.push(unit_jet(n));
        }
        GraphPayload::Jacobi(j) => {
            for i in 0..n {
                let dx = Form::dx(i, n);
                let x = j.pi.sharp(&dx)?;
                gens.push(E1Section::new(x, -&j.e.coeff(&[i]), dx, zero())?);
            }
            gens.push(E1Section::new(j.e.clone(), zero(), Form::zero(1, n), Scalar::one(n))?);
        }
        GraphPayload::Lcps(l) => {
            for i in 0..n {
                let del = MultiVector::partial_basis(i, n);
                let a = l.omega.interior(&del)?;
                gens.push(E1Section::new(del, -&l.eta.coeff(&[i]), a, zero())?);
            }
            gens.push(E1Section::jet(l.eta.clone(), Scalar::one(n))?);
        }
        GraphPayload::Homogeneous(h) => {
            for i in 0..n {
                let dx = Form::dx(i, n);
                gens.push(E1Section::new(h.pi.sharp(&dx)?, zero(), dx, h.z.coeff(&[i]))?);
            }
            gens.push(E1Section::new(h.z.clone(), -Scalar::one(n), Form::zero(1, n), zero())?);
        }
        GraphPayload::ExactPair(e) => {
            for i in 0..n {
                let del = MultiVector::partial_basis(i, n);
                let w = e.omega.interior(&del)?;
                let g = -&contract(&del, &e.alpha);
                gens.push(E1Section::new(del, zero(), w, g)?);
            }
            gens.push(E1Section::new(
                MultiVector::zero(1, n),
                Scalar::one(n),
                e.alpha.clone(),
                zero(),
            )?);
        }
    }
    let l = SubBundle::new(gens)?;
    let v = is_maximal_isotropic(&l);
    if !v.is_isotropic {
        return Err(Error::Malformed(format!(
            "{} graph failed the isotropy re-check",
            payload.kind()
        )));
    }
    Ok(l)
}

/// Lifts a sub-bundle of `TM ⊕ T*M` given by generators `(X_i, α_i)`.
pub fn lift(generators: &[(MultiVector, Form)]) -> Result<SubBundle> {
    SubBundle::new(crate::courant::lift_tilde(generators)?)
}
