//! The TOML manifest format.
//!
//! ```toml
//! coordinates = ["x", "y", "z"]
//! assumptions = ["1 + x^2"]
//!
//! [structure]
//! kind = "jacobi"
//! pi = [{ indices = [0, 1], coeff = "1" }, { indices = [1, 2], coeff = "-y" }]
//! e = [{ indices = [2], coeff = "1" }]
//! ```
//!
//! Indices are 0-based and strictly increasing; omitted components are zero.
//! Serializing prints every coefficient in canonical form, so
//! parse → serialize → parse is the identity and serialization is stable.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::expr::parse_expression;
use super::CliError;
use crate::courant::E1Section;
use crate::dirac::{build_graph, lift, GraphPayload, SubBundle};
use crate::exterior::{Form, MultiVector};
use crate::scalar::Scalar;
use crate::structures::{ExactPair, HomogeneousPair, JacobiPair, LcpsPair, NambuField};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    indices: Vec<usize>,
    coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    x: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    #[serde(default)]
    x: Vec<Term>,
    #[serde(default)]
    alpha: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSection {
    #[serde(default)]
    x: Vec<Term>,
    #[serde(default = "zero_text")]
    f: String,
    #[serde(default)]
    alpha: Vec<Term>,
    #[serde(default = "zero_text")]
    g: String,
}

fn zero_text() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawStructure {
    TwoForm {
        omega: Vec<Term>,
    },
    Bivector {
        pi: Vec<Term>,
    },
    Distribution {
        fields: Vec<RawField>,
    },
    Jacobi {
        pi: Vec<Term>,
        e: Vec<Term>,
    },
    Lcps {
        omega: Vec<Term>,
        eta: Vec<Term>,
    },
    Homogeneous {
        pi: Vec<Term>,
        z: Vec<Term>,
    },
    ExactPair {
        omega: Vec<Term>,
        alpha: Vec<Term>,
    },
    Nambu {
        pi: Vec<Term>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        density: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        family: Option<Vec<String>>,
    },
    Conambu {
        omega: Vec<Term>,
    },
    Pairs {
        generators: Vec<RawPair>,
    },
    Subbundle {
        generators: Vec<RawSection>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    assumptions: Vec<String>,
    structure: RawStructure,
}

/// What a manifest describes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Graph(GraphPayload),
    Nambu {
        field: NambuField,
        /// `ρ` in the volume form `ρ dx_1∧…∧dx_n`; `1` when absent.
        density: Option<Scalar>,
        /// Test family for the Fundamental Identity.
        family: Option<Vec<Scalar>>,
    },
    Conambu(Form),
    /// Generators `(X_i, α_i)` of a sub-bundle of `TM ⊕ T*M`.
    Pairs(Vec<(MultiVector, Form)>),
    Subbundle(Vec<E1Section>),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Graph(p) => p.kind(),
            Structure::Nambu { .. } => "nambu",
            Structure::Conambu(_) => "conambu",
            Structure::Pairs(_) => "pairs",
            Structure::Subbundle(_) => "subbundle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub coordinates: Vec<String>,
    pub assumptions: Vec<Scalar>,
    pub structure: Structure,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Manifest(msg.into())
}

struct Reader<'a> {
    names: &'a [String],
}

impl Reader<'_> {
    fn n(&self) -> usize {
        self.names.len()
    }

    fn scalar(&self, text: &str, at: &str) -> Result<Scalar, CliError> {
        parse_expression(text, self.names).map_err(|e| CliError::Expression {
            context: format!("{at}: \"{text}\""),
            error: e,
        })
    }

    fn components(
        &self,
        terms: &[Term],
        degree: usize,
        at: &str,
    ) -> Result<Vec<(Vec<usize>, Scalar)>, CliError> {
        let mut seen: Vec<&[usize]> = Vec::new();
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            if t.indices.len() != degree {
                return Err(bad(format!(
                    "{at}: indices {:?} have length {}, expected {degree}",
                    t.indices,
                    t.indices.len()
                )));
            }
            if let Some(&i) = t.indices.iter().find(|&&i| i >= self.n()) {
                return Err(bad(format!("{at}: index {i} out of range for {} coordinates", self.n())));
            }
            if t.indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad(format!("{at}: indices {:?} are not strictly increasing", t.indices)));
            }
            if seen.contains(&t.indices.as_slice()) {
                return Err(bad(format!("{at}: indices {:?} listed twice", t.indices)));
            }
            seen.push(&t.indices);
            out.push((t.indices.clone(), self.scalar(&t.coeff, at)?));
        }
        Ok(out)
    }

    fn multivector(&self, terms: &[Term], degree: usize, at: &str) -> Result<MultiVector, CliError> {
        Ok(MultiVector::from_components(degree, self.n(), self.components(terms, degree, at)?)?)
    }

    fn form(&self, terms: &[Term], degree: usize, at: &str) -> Result<Form, CliError> {
        Ok(Form::from_components(degree, self.n(), self.components(terms, degree, at)?)?)
    }

    /// The degree is read off the first term; an empty list cannot be typed.
    fn degree_of(&self, terms: &[Term], at: &str) -> Result<usize, CliError> {
        terms
            .first()
            .map(|t| t.indices.len())
            .ok_or_else(|| bad(format!("{at}: needs at least one component")))
    }

    fn structure(&self, raw: &RawStructure) -> Result<Structure, CliError> {
        let s = match raw {
            RawStructure::TwoForm { omega } => {
                Structure::Graph(GraphPayload::TwoForm(self.form(omega, 2, "omega")?))
            }
            RawStructure::Bivector { pi } => {
                Structure::Graph(GraphPayload::Bivector(self.multivector(pi, 2, "pi")?))
            }
            RawStructure::Distribution { fields } => {
                let xs = fields
                    .iter()
                    .enumerate()
                    .map(|(i, f)| self.multivector(&f.x, 1, &format!("fields[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                if xs.is_empty() {
                    return Err(bad("distribution: needs at least one field"));
                }
                Structure::Graph(GraphPayload::Distribution(xs))
            }
            RawStructure::Jacobi { pi, e } => Structure::Graph(GraphPayload::Jacobi(JacobiPair::new(
                self.multivector(pi, 2, "pi")?,
                self.multivector(e, 1, "e")?,
            )?)),
            RawStructure::Lcps { omega, eta } => Structure::Graph(GraphPayload::Lcps(LcpsPair::new(
                self.form(omega, 2, "omega")?,
                self.form(eta, 1, "eta")?,
            )?)),
            RawStructure::Homogeneous { pi, z } => {
                Structure::Graph(GraphPayload::Homogeneous(HomogeneousPair::new(
                    self.multivector(pi, 2, "pi")?,
                    self.multivector(z, 1, "z")?,
                )?))
            }
            RawStructure::ExactPair { omega, alpha } => {
                Structure::Graph(GraphPayload::ExactPair(ExactPair::new(
                    self.form(omega, 2, "omega")?,
                    self.form(alpha, 1, "alpha")?,
                )?))
            }
            RawStructure::Nambu { pi, density, family } => {
                let p = self.degree_of(pi, "pi")?;
                let field = NambuField::new(self.multivector(pi, p, "pi")?)?;
                let density = match density {
                    Some(t) => {
                        let d = self.scalar(t, "density")?;
                        if d.is_zero() {
                            return Err(bad("density: must be nonzero"));
                        }
                        Some(d)
                    }
                    None => None,
                };
                let family = family
                    .as_ref()
                    .map(|fs| fs.iter().map(|t| self.scalar(t, "family")).collect::<Result<Vec<_>, _>>())
                    .transpose()?;
                Structure::Nambu {
                    field,
                    density,
                    family,
                }
            }
            RawStructure::Conambu { omega } => {
                let k = self.degree_of(omega, "omega")?;
                Structure::Conambu(self.form(omega, k, "omega")?)
            }
            RawStructure::Pairs { generators } => {
                if generators.is_empty() {
                    return Err(bad("pairs: needs at least one generator"));
                }
                let mut out = Vec::with_capacity(generators.len());
                for (i, g) in generators.iter().enumerate() {
                    let at = format!("generators[{i}]");
                    out.push((
                        self.multivector(&g.x, 1, &format!("{at}.x"))?,
                        self.form(&g.alpha, 1, &format!("{at}.alpha"))?,
                    ));
                }
                Structure::Pairs(out)
            }
            RawStructure::Subbundle { generators } => {
                if generators.is_empty() {
                    return Err(bad("subbundle: needs at least one generator"));
                }
                let mut out = Vec::with_capacity(generators.len());
                for (i, g) in generators.iter().enumerate() {
                    let at = format!("generators[{i}]");
                    out.push(E1Section::new(
                        self.multivector(&g.x, 1, &format!("{at}.x"))?,
                        self.scalar(&g.f, &format!("{at}.f"))?,
                        self.form(&g.alpha, 1, &format!("{at}.alpha"))?,
                        self.scalar(&g.g, &format!("{at}.g"))?,
                    )?);
                }
                Structure::Subbundle(out)
            }
        };
        Ok(s)
    }
}

struct Writer<'a> {
    names: &'a [String],
}

impl Writer<'_> {
    fn scalar(&self, s: &Scalar) -> String {
        s.display_with(self.names)
    }

    fn terms<'b>(&self, comps: impl Iterator<Item = (&'b Vec<usize>, &'b Scalar)>) -> Vec<Term> {
        comps
            .map(|(idx, c)| Term {
                indices: idx.clone(),
                coeff: self.scalar(c),
            })
            .collect()
    }

    fn mv(&self, v: &MultiVector) -> Vec<Term> {
        self.terms(v.components())
    }

    fn form(&self, w: &Form) -> Vec<Term> {
        self.terms(w.components())
    }

    fn structure(&self, s: &Structure) -> RawStructure {
        match s {
            Structure::Graph(GraphPayload::TwoForm(w)) => RawStructure::TwoForm { omega: self.form(w) },
            Structure::Graph(GraphPayload::Bivector(p)) => RawStructure::Bivector { pi: self.mv(p) },
            Structure::Graph(GraphPayload::Distribution(xs)) => RawStructure::Distribution {
                fields: xs.iter().map(|x| RawField { x: self.mv(x) }).collect(),
            },
            Structure::Graph(GraphPayload::Jacobi(j)) => RawStructure::Jacobi {
                pi: self.mv(&j.pi),
                e: self.mv(&j.e),
            },
            Structure::Graph(GraphPayload::Lcps(l)) => RawStructure::Lcps {
                omega: self.form(&l.omega),
                eta: self.form(&l.eta),
            },
            Structure::Graph(GraphPayload::Homogeneous(h)) => RawStructure::Homogeneous {
                pi: self.mv(&h.pi),
                z: self.mv(&h.z),
            },
            Structure::Graph(GraphPayload::ExactPair(e)) => RawStructure::ExactPair {
                omega: self.form(&e.omega),
                alpha: self.form(&e.alpha),
            },
            Structure::Nambu {
                field,
                density,
                family,
            } => RawStructure::Nambu {
                pi: self.mv(&field.pi),
                density: density.as_ref().map(|d| self.scalar(d)),
                family: family.as_ref().map(|fs| fs.iter().map(|f| self.scalar(f)).collect()),
            },
            Structure::Conambu(w) => RawStructure::Conambu { omega: self.form(w) },
            Structure::Pairs(gs) => RawStructure::Pairs {
                generators: gs
                    .iter()
                    .map(|(x, a)| RawPair {
                        x: self.mv(x),
                        alpha: self.form(a),
                    })
                    .collect(),
            },
            Structure::Subbundle(gs) => RawStructure::Subbundle {
                generators: gs
                    .iter()
                    .map(|e| RawSection {
                        x: self.mv(&e.x),
                        f: self.scalar(&e.f),
                        alpha: self.form(&e.alpha),
                        g: self.scalar(&e.g),
                    })
                    .collect(),
            },
        }
    }
}

fn check_coordinates(names: &[String]) -> Result<(), CliError> {
    if names.is_empty() {
        return Err(bad("coordinates: at least one is required"));
    }
    for (i, v) in names.iter().enumerate() {
        let mut chars = v.chars();
        let ok = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && chars.all(|c| c.is_alphanumeric() || c == '_');
        if !ok {
            return Err(bad(format!("coordinates: '{v}' is not an identifier")));
        }
        if names[..i].contains(v) {
            return Err(bad(format!("coordinates: '{v}' declared twice")));
        }
    }
    Ok(())
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawManifest = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        check_coordinates(&raw.coordinates)?;
        let r = Reader {
            names: &raw.coordinates,
        };
        let mut assumptions = Vec::with_capacity(raw.assumptions.len());
        for t in &raw.assumptions {
            let a = r.scalar(t, "assumptions")?;
            if a.is_zero() {
                return Err(bad(format!("assumptions: \"{t}\" is identically zero")));
            }
            assumptions.push(a);
        }
        let structure = r.structure(&raw.structure)?;
        Ok(Manifest {
            coordinates: raw.coordinates.clone(),
            assumptions,
            structure,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        let w = Writer {
            names: &self.coordinates,
        };
        let raw = RawManifest {
            coordinates: self.coordinates.clone(),
            assumptions: self.assumptions.iter().map(|a| w.scalar(a)).collect(),
            structure: w.structure(&self.structure),
        };
        toml::to_string(&raw).expect("manifest types serialize")
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_toml()).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }

    pub fn chart_dim(&self) -> usize {
        self.coordinates.len()
    }

    /// The sub-bundle of `E¹` the manifest describes, carrying its assumptions.
    pub fn sub_bundle(&self) -> Result<SubBundle, CliError> {
        let l = match &self.structure {
            Structure::Graph(p) => build_graph(p)?,
            Structure::Pairs(gs) => lift(gs)?,
            Structure::Subbundle(gs) => SubBundle::new(gs.clone())?,
            s => {
                return Err(bad(format!(
                    "kind '{}' does not describe a sub-bundle",
                    s.kind()
                )))
            }
        };
        Ok(l.with_assumptions(self.assumptions.iter().cloned()))
    }

    /// Generators `(X_i, α_i)` in `TM ⊕ T*M`, for the kinds that have them.
    pub fn pairs(&self) -> Result<Vec<(MultiVector, Form)>, CliError> {
        match &self.structure {
            Structure::Pairs(gs) => Ok(gs.clone()),
            Structure::Graph(
                p @ (GraphPayload::TwoForm(_)
                | GraphPayload::Bivector(_)
                | GraphPayload::Distribution(_)),
            ) => {
                // every generator but the unit jet is of the form (X, 0) + (α, 0)
                let l = build_graph(p)?;
                let gs = l.generators();
                Ok(gs[..gs.len() - 1]
                    .iter()
                    .map(|e| (e.x.clone(), e.alpha.clone()))
                    .collect())
            }
            s => Err(bad(format!(
                "kind '{}' is not a sub-bundle of TM ⊕ T*M",
                s.kind()
            ))),
        }
    }

    /// A manifest over the same chart describing `l` by its generators.
    pub fn of_sub_bundle(coordinates: Vec<String>, l: &SubBundle) -> Self {
        Manifest {
            coordinates,
            assumptions: l.assumptions().to_vec(),
            structure: Structure::Subbundle(l.generators().to_vec()),
        }
    }
}
