//! Seeded random instances for property checks.
//!
//! Coefficients are small integers and polynomials have few terms, which
//! keeps exact identity checks fast while still exercising every code path.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::courant::E1Section;
use crate::exterior::{Form, MultiVector};
use crate::scalar::{Poly, Scalar};

pub struct Sampler {
    rng: ChaCha8Rng,
    n: usize,
    max_degree: u32,
    max_terms: usize,
}

impl Sampler {
    pub fn new(seed: u64, n: usize, max_degree: u32) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
            max_degree,
            max_terms: 3,
        }
    }

    pub fn with_max_terms(mut self, t: usize) -> Self {
        self.max_terms = t.max(1);
        self
    }

    pub fn chart_dim(&self) -> usize {
        self.n
    }

    fn coefficient(&mut self) -> BigRational {
        let mut c = 0;
        while c == 0 {
            c = self.rng.gen_range(-3i64..=3);
        }
        BigRational::from_integer(BigInt::from(c))
    }

    fn monomial(&mut self) -> Vec<u32> {
        let total = self.rng.gen_range(0..=self.max_degree);
        let mut e = vec![0u32; self.n];
        for _ in 0..total {
            let v = self.rng.gen_range(0..self.n);
            e[v] += 1;
        }
        e
    }

    /// A polynomial with between 0 and `max_terms` terms.
    pub fn polynomial(&mut self) -> Scalar {
        let terms = self.rng.gen_range(0..=self.max_terms);
        self.polynomial_with_terms(terms)
    }

    fn polynomial_with_terms(&mut self, terms: usize) -> Scalar {
        let mut p = Poly::zero(self.n);
        for _ in 0..terms {
            let c = self.coefficient();
            let e = self.monomial();
            p = &p + &Poly::monomial(c, e);
        }
        Scalar::from_poly(p)
    }

    pub fn nonzero_polynomial(&mut self) -> Scalar {
        loop {
            let t = self.rng.gen_range(1..=self.max_terms);
            let p = self.polynomial_with_terms(t);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// A quotient of random polynomials.
    pub fn rational(&mut self) -> Scalar {
        let num = self.polynomial();
        let den = self.nonzero_polynomial();
        &num / &den
    }

    pub fn nonzero_rational(&mut self) -> Scalar {
        let num = self.nonzero_polynomial();
        let den = self.nonzero_polynomial();
        &num / &den
    }

    pub fn vector_field(&mut self) -> MultiVector {
        self.multivector(1)
    }

    pub fn one_form(&mut self) -> Form {
        self.form(1)
    }

    pub fn multivector(&mut self, degree: usize) -> MultiVector {
        let comps = self.components(degree);
        MultiVector::from_components(degree, self.n, comps).expect("sampled components are valid")
    }

    pub fn form(&mut self, degree: usize) -> Form {
        let comps = self.components(degree);
        Form::from_components(degree, self.n, comps).expect("sampled components are valid")
    }

    fn components(&mut self, degree: usize) -> Vec<(Vec<usize>, Scalar)> {
        subsets(self.n, degree)
            .into_iter()
            .filter_map(|idx| {
                let c = self.polynomial();
                (!c.is_zero()).then_some((idx, c))
            })
            .collect()
    }

    pub fn section(&mut self) -> E1Section {
        let x = self.vector_field();
        let f = self.polynomial();
        let a = self.one_form();
        let g = self.polynomial();
        E1Section::new(x, f, a, g).expect("same chart")
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }
}

/// All strictly increasing index lists of length `k` from `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}
