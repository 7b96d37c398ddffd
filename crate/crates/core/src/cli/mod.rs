//! The `dirac` command line: manifests in, `key: value` reports out.
//!
//! Exit codes: `0` when the property holds or the operation succeeded, `1`
//! when it fails (the report carries the obstructions), `2` on bad input.

pub mod expr;
pub mod manifest;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::admissible::{bracket_of, find_admissible, recover_jacobi, AdmissibleWitness};
use crate::conformal::{conformal_transform, default_family, find_conformal_section, spanning_hypothesis};
use crate::courant::extended_bracket;
use crate::dirac::{build_graph, is_dirac, lift, DiracVerdict, GraphPayload, SubBundle};
use crate::error::Error;
use crate::exterior::Form;
use crate::scalar::Scalar;
use crate::structures::{
    check_conambu, check_fundamental_identity, nambu_to_form, ConditionReport, LcpsPair, NambuField,
};

pub use expr::{parse_expression, ParseError, ParseErrorKind};
pub use manifest::{Manifest, Structure};
pub use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{context}: {error}")]
    Expression { context: String, error: ParseError },
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
}

#[derive(Debug, Parser)]
#[command(name = "dirac", version, about = "Exact checks for Dirac structures on the extended 1-jet bundle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Decide the property that matches the manifest's kind.
    Check { manifest: PathBuf },
    /// Extended bracket of two generators.
    Bracket {
        manifest: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    /// Find a section (X_f, φ_f) + (df, f) of the sub-bundle.
    Admissible {
        manifest: PathBuf,
        #[arg(long)]
        function: String,
    },
    /// The bracket {f, g} of two admissible functions.
    PoissonBracket {
        manifest: PathBuf,
        #[arg(short)]
        f: String,
        #[arg(short)]
        g: String,
    },
    /// Conformal transform by a nonvanishing factor.
    Conformal {
        manifest: PathBuf,
        #[arg(long)]
        factor: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Lift a sub-bundle of TM ⊕ T*M to the extended 1-jet bundle.
    Lift {
        manifest: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Read off the Jacobi pair whose graph is the sub-bundle.
    RecoverJacobi {
        manifest: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

impl Command {
    pub fn manifest(&self) -> &Path {
        match self {
            Command::Check { manifest }
            | Command::Bracket { manifest, .. }
            | Command::Admissible { manifest, .. }
            | Command::PoissonBracket { manifest, .. }
            | Command::Conformal { manifest, .. }
            | Command::Lift { manifest, .. }
            | Command::RecoverJacobi { manifest, .. } => manifest,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Bracket { .. } => "bracket",
            Command::Admissible { .. } => "admissible",
            Command::PoissonBracket { .. } => "poisson-bracket",
            Command::Conformal { .. } => "conformal",
            Command::Lift { .. } => "lift",
            Command::RecoverJacobi { .. } => "recover-jacobi",
        }
    }
}

/// Loads the manifest and runs `command` on it.
pub fn run(command: &Command) -> Result<Report, CliError> {
    let manifest = Manifest::load(command.manifest())?;
    run_on(command, &manifest)
}

pub fn run_on(command: &Command, m: &Manifest) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut r = Report::new(command.name(), m.structure.kind());
    let ctx = Ctx { m, names: &m.coordinates };
    match command {
        Command::Check { .. } => ctx.check(&mut r)?,
        Command::Bracket { i, j, .. } => ctx.bracket(&mut r, *i, *j)?,
        Command::Admissible { function, .. } => ctx.admissible(&mut r, function)?,
        Command::PoissonBracket { f, g, .. } => ctx.poisson_bracket(&mut r, f, g)?,
        Command::Conformal { factor, emit, .. } => ctx.conformal(&mut r, factor, emit.as_deref())?,
        Command::Lift { emit, .. } => ctx.lift(&mut r, emit.as_deref())?,
        Command::RecoverJacobi { emit, .. } => ctx.recover_jacobi(&mut r, emit.as_deref())?,
    }
    r.elapsed = start.elapsed();
    Ok(r)
}

/// Parses arguments, runs, prints, and returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli.command) {
        Ok(r) => {
            print!("{}", r.render());
            r.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

struct Ctx<'a> {
    m: &'a Manifest,
    names: &'a [String],
}

impl Ctx<'_> {
    fn show(&self, s: &Scalar) -> String {
        s.display_with(self.names)
    }

    fn parse(&self, text: &str, what: &str) -> Result<Scalar, CliError> {
        parse_expression(text, self.names).map_err(|e| CliError::Expression {
            context: format!("{what} \"{text}\""),
            error: e,
        })
    }

    fn conditions(&self, r: &mut Report, c: &ConditionReport) {
        for f in c.failures() {
            r.obstructions.push(format!(
                "{} ≠ 0 [residual: {}]",
                f.label,
                f.residual.display_with(self.names)
            ));
        }
    }

    fn verdict_details(&self, r: &mut Report, v: &DiracVerdict) {
        r.detail("generic_rank", format!("{} of {}", v.generic_rank, v.expected_rank));
        for f in &v.isotropy_failures {
            r.obstructions.push(format!("⟨e{},e{}⟩₊ ≠ 0 [value: {}]", f.i, f.j, self.show(&f.value)));
        }
        if !v.is_maximal {
            r.obstructions.push(format!("rank {} ≠ {}", v.generic_rank, v.expected_rank));
        }
        for o in &v.closure_obstructions {
            r.obstructions.push(format!(
                "⟨[e{},e{}],e{}⟩₊ ≠ 0 [value: {}]",
                o.i,
                o.j,
                o.k,
                self.show(&o.value)
            ));
        }
        r.assumptions_used = v.assumptions_used.iter().map(|a| self.show(a)).collect();
        r.caveats.extend(
            v.rank_pivots
                .iter()
                .map(|p| format!("generic rank; may drop where {} = 0", self.show(p))),
        );
    }

    fn sections(&self, r: &mut Report, key: &str, l: &SubBundle) {
        for (i, g) in l.generators().iter().enumerate() {
            r.detail(format!("{key}[{i}]"), g.display_with(self.names));
        }
    }

    fn emit(&self, r: &mut Report, path: Option<&Path>, out: &Manifest) -> Result<(), CliError> {
        if let Some(p) = path {
            out.save(p)?;
            r.detail("emitted", p.display().to_string());
        }
        Ok(())
    }

    fn check(&self, r: &mut Report) -> Result<(), CliError> {
        match &self.m.structure {
            Structure::Graph(p) => self.check_graph(r, p),
            Structure::Pairs(_) | Structure::Subbundle(_) => {
                let v = is_dirac(&self.m.sub_bundle()?);
                r.verdict = format!("dirac: {}", v.is_dirac());
                r.holds = v.is_dirac();
                self.verdict_details(r, &v);
                Ok(())
            }
            Structure::Nambu {
                field,
                density,
                family,
            } => self.check_nambu(r, field, density.as_ref(), family.as_deref()),
            Structure::Conambu(w) => {
                let c = check_conambu(w)?;
                r.verdict = format!("conambu: {}", c.holds());
                r.holds = c.holds();
                self.conditions(r, &c);
                Ok(())
            }
        }
    }

    fn check_graph(&self, r: &mut Report, p: &GraphPayload) -> Result<(), CliError> {
        let name = match p {
            GraphPayload::TwoForm(_) => "closed",
            GraphPayload::Bivector(_) => "poisson",
            GraphPayload::Distribution(_) => "involutive",
            GraphPayload::Jacobi(_) => "jacobi",
            GraphPayload::Lcps(_) => "lcps",
            GraphPayload::Homogeneous(_) => "homogeneous",
            GraphPayload::ExactPair(_) => "exact",
        };
        let tensor = p.tensor_conditions()?;
        let v = is_dirac(&self.m.sub_bundle()?);
        r.verdict = format!("{name}: {}; graph is Dirac: {}", tensor.holds(), v.is_dirac());
        r.holds = tensor.holds() && v.is_dirac();
        self.conditions(r, &tensor);
        self.verdict_details(r, &v);
        Ok(())
    }

    fn check_nambu(
        &self,
        r: &mut Report,
        field: &NambuField,
        density: Option<&Scalar>,
        family: Option<&[Scalar]>,
    ) -> Result<(), CliError> {
        let n = self.m.chart_dim();
        let family: Vec<Scalar> = match family {
            Some(f) => f.to_vec(),
            None => default_nambu_family(n),
        };
        let fi = check_fundamental_identity(field, &family)?;
        let rho = density.cloned().unwrap_or_else(|| Scalar::one(n));
        let all: Vec<usize> = (0..n).collect();
        let omega = nambu_to_form(field, &Form::basis(&all, n).scale(&rho))?;
        let co = check_conambu(&omega)?;
        let mut verdict = format!(
            "fundamental identity on family: {}; conambu: {}",
            fi.passed_on_family(),
            co.holds()
        );
        r.holds = fi.passed_on_family() && co.holds();
        r.detail("family_size", fi.family_size.to_string());
        r.detail("checked", fi.checked.to_string());
        r.detail("omega", omega.display_with(self.names));
        if let Some(f) = &fi.failure {
            let pick = |ix: &[usize]| {
                let v: Vec<String> = ix.iter().map(|&i| self.show(&family[i])).collect();
                v.join(", ")
            };
            r.obstructions.push(format!(
                "fundamental identity fails at f = ({}), g = ({}) [residual: {}]",
                pick(&f.f),
                pick(&f.g),
                self.show(&f.residual)
            ));
        }
        self.conditions(r, &co);
        if omega.degree() == 2 {
            // the pair (ω, dρ/ρ) of a codimension-two Nambu structure
            let eta = Form::differential(&rho).scale(&rho.inv()?);
            r.detail("eta", eta.display_with(self.names));
            let l = build_graph(&GraphPayload::Lcps(LcpsPair::new(omega, eta)?))?
                .with_assumptions(self.m.assumptions.iter().cloned().chain([rho]));
            let v = is_dirac(&l);
            verdict.push_str(&format!("; graph is Dirac: {}", v.is_dirac()));
            r.holds &= v.is_dirac();
            self.verdict_details(r, &v);
        }
        r.verdict = verdict;
        r.caveats.push("the fundamental identity is only tested on the family".into());
        Ok(())
    }

    fn bracket(&self, r: &mut Report, i: usize, j: usize) -> Result<(), CliError> {
        let l = self.m.sub_bundle()?;
        let gens = l.generators();
        for k in [i, j] {
            if k >= gens.len() {
                return Err(CliError::Manifest(format!(
                    "generator {k} out of range; there are {}",
                    gens.len()
                )));
            }
        }
        let b = extended_bracket(&gens[i], &gens[j])?;
        let inside = l.contains_section(&b)?;
        r.verdict = format!("bracket of e{i} and e{j}");
        r.detail("e_i", gens[i].display_with(self.names));
        r.detail("e_j", gens[j].display_with(self.names));
        r.detail("bracket", b.display_with(self.names));
        r.detail("in_bundle", inside.contained().to_string());
        Ok(())
    }

    /// `None` when `f` is not admissible; the obstruction is recorded.
    fn witness(&self, r: &mut Report, l: &SubBundle, f: &Scalar) -> Result<Option<AdmissibleWitness>, CliError> {
        match find_admissible(l, f) {
            Ok(w) => Ok(Some(w)),
            Err(Error::NotAdmissible(_)) => {
                let n = l.chart_dim();
                let mut target: Vec<Scalar> = (0..n).map(|i| f.d(i)).collect();
                target.push(f.clone());
                let rows: Vec<usize> = (n + 1..2 * n + 2).collect();
                let m = l.solve_rows(&rows, &target);
                let left = m.residual.map_or_else(String::new, |s| format!(" [leftover: {}]", self.show(&s)));
                r.obstructions.push(format!(
                    "{} is not admissible: no section (X, φ) + (df, f) in L{left}",
                    self.show(f)
                ));
                r.holds = false;
                Ok(None)
            }
            Err(e) => Err(e.into()),
        }
    }

    fn admissible(&self, r: &mut Report, function: &str) -> Result<(), CliError> {
        let l = self.m.sub_bundle()?;
        let f = self.parse(function, "function")?;
        let Some(w) = self.witness(r, &l, &f)? else {
            r.verdict = "admissible: false".into();
            return Ok(());
        };
        r.verdict = "admissible: true".into();
        r.detail("function", self.show(&f));
        r.detail("x_f", w.x_f.display_with(self.names));
        r.detail("phi_f", self.show(&w.phi_f));
        let cs: Vec<String> = w.coefficients.iter().map(|c| self.show(c)).collect();
        r.detail("coefficients", format!("[{}]", cs.join(", ")));
        for (i, s) in w.freedom.iter().enumerate() {
            r.detail(format!("freedom[{i}]"), s.display_with(self.names));
        }
        r.assumptions_used = l.assumptions().iter().map(|a| self.show(a)).collect();
        r.caveats
            .extend(w.denominators.iter().map(|d| format!("valid where {} ≠ 0", self.show(d))));
        Ok(())
    }

    fn poisson_bracket(&self, r: &mut Report, f: &str, g: &str) -> Result<(), CliError> {
        let l = self.m.sub_bundle()?;
        let f = self.parse(f, "f")?;
        let g = self.parse(g, "g")?;
        let wf = self.witness(r, &l, &f)?;
        let wg = self.witness(r, &l, &g)?;
        let (Some(wf), Some(wg)) = (wf, wg) else {
            r.verdict = "admissible: false".into();
            return Ok(());
        };
        let b = bracket_of(&wf, &wg);
        r.verdict = format!("{{f,g}} = {}", self.show(&b));
        r.detail("f", self.show(&f));
        r.detail("g", self.show(&g));
        r.detail("bracket", self.show(&b));
        r.assumptions_used = l.assumptions().iter().map(|a| self.show(a)).collect();
        Ok(())
    }

    fn conformal(&self, r: &mut Report, factor: &str, emit: Option<&Path>) -> Result<(), CliError> {
        let l = self.m.sub_bundle()?;
        let a = self.parse(factor, "factor")?;
        if a.is_zero() {
            return Err(CliError::Manifest(format!("factor \"{factor}\" is identically zero")));
        }
        let c = match find_conformal_section(&l, &a) {
            Ok(c) => c,
            Err(Error::NoConformalSection(_)) => {
                r.verdict = "conformal section: false".into();
                r.holds = false;
                r.obstructions
                    .push(format!("no section (Y, θ) + (da, 0) in L for a = {}", self.show(&a)));
                return Ok(());
            }
            Err(e) => return Err(e.into()),
        };
        let la = conformal_transform(&l, &c)?;
        let v = is_dirac(&la);
        let hyp = spanning_hypothesis(&l, &default_family(&l))?;
        r.verdict = format!(
            "transformed is Dirac: {}; spanning hypothesis: {}",
            v.is_dirac(),
            hyp.spanned()
        );
        r.holds = v.is_dirac();
        r.detail("factor", self.show(&a));
        r.detail("y_a", c.y.display_with(self.names));
        r.detail("theta_a", self.show(&c.theta));
        r.detail("spanning_rank", format!("{} of {}", hyp.rank, hyp.expected_rank));
        self.sections(r, "generator", &la);
        self.verdict_details(r, &v);
        if !hyp.spanned() {
            r.caveats
                .push("the default admissible family did not span the sub-bundle".into());
        }
        self.emit(r, emit, &Manifest::of_sub_bundle(self.m.coordinates.clone(), &la))
    }

    fn lift(&self, r: &mut Report, emit: Option<&Path>) -> Result<(), CliError> {
        let pairs = self.m.pairs()?;
        let l = lift(&pairs)?.with_assumptions(self.m.assumptions.iter().cloned());
        let v = is_dirac(&l);
        r.verdict = format!("lift is Dirac: {}", v.is_dirac());
        r.holds = v.is_dirac();
        self.sections(r, "generator", &l);
        self.verdict_details(r, &v);
        self.emit(r, emit, &Manifest::of_sub_bundle(self.m.coordinates.clone(), &l))
    }

    fn recover_jacobi(&self, r: &mut Report, emit: Option<&Path>) -> Result<(), CliError> {
        let l = self.m.sub_bundle()?;
        let rec = match recover_jacobi(&l) {
            Ok(rec) => rec,
            Err(Error::NotAdmissible(msg)) => {
                r.verdict = "jacobi: false".into();
                r.holds = false;
                r.obstructions.push(format!("1 and the coordinates must be admissible ({msg})"));
                return Ok(());
            }
            Err(e) => return Err(e.into()),
        };
        r.verdict = format!(
            "jacobi: {}; reproduces L: {}",
            rec.conditions.holds(),
            rec.reproduces
        );
        r.holds = rec.is_consistent();
        r.detail("pi", rec.pair.pi.display_with(self.names));
        r.detail("e", rec.pair.e.display_with(self.names));
        self.conditions(r, &rec.conditions);
        let out = Manifest {
            coordinates: self.m.coordinates.clone(),
            assumptions: self.m.assumptions.clone(),
            structure: Structure::Graph(GraphPayload::Jacobi(rec.pair)),
        };
        self.emit(r, emit, &out)
    }
}

/// Coordinates and their pairwise products.
fn default_nambu_family(n: usize) -> Vec<Scalar> {
    let x = |i| Scalar::coordinate(i, n);
    let mut out: Vec<Scalar> = (0..n).map(x).collect();
    for i in 0..n {
        for j in i..n {
            out.push(&x(i) * &x(j));
        }
    }
    out
}
