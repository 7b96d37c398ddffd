//! The Lie algebra of admissible functions.

mod common;

use common::*;
use dirac_core::admissible::{
    bracket_of, find_admissible, leibniz_defect, product_section, recover_jacobi, AdmissibleWitness,
};
use dirac_core::conformal::find_conformal_section;
use dirac_core::courant::extended_bracket;
use dirac_core::dirac::{build_graph, GraphPayload, SubBundle};
use dirac_core::sample::Sampler;
use dirac_core::{E1Section, Error, Form, MultiVector, Scalar};
use rayon::prelude::*;

/// A random combination of the family with constant coefficients.
fn pick(s: &mut Sampler, fam: &[Scalar]) -> Scalar {
    let n = fam[0].chart_dim();
    let a = s.index(fam.len());
    let b = s.index(fam.len());
    let c = Scalar::from_int(s.index(5) as i64 - 2, n);
    &fam[a] + &(&c * &fam[b])
}

fn jacobi_sum(l: &SubBundle, w: &[AdmissibleWitness], i: usize, j: usize, k: usize) -> Scalar {
    let nested = |a: usize, b: usize, c: usize| {
        let inner = bracket_of(&w[b], &w[c]);
        bracket_of(&w[a], &find_admissible(l, &inner).unwrap())
    };
    &(&nested(i, j, k) + &nested(j, k, i)) + &nested(k, i, j)
}

#[test]
fn jacobi_identity_on_family() {
    for (name, l, fam) in admissible_examples() {
        let w: Vec<AdmissibleWitness> = fam.iter().map(|f| find_admissible(&l, f).unwrap()).collect();
        let m = fam.len();
        let triples: Vec<(usize, usize, usize)> = (0..m)
            .flat_map(|i| (0..m).flat_map(move |j| (0..m).map(move |k| (i, j, k))))
            .collect();
        let bad: Vec<_> = triples
            .par_iter()
            .filter(|&&(i, j, k)| !jacobi_sum(&l, &w, i, j, k).is_zero())
            .collect();
        assert!(bad.is_empty(), "{name}: {bad:?}");
    }
}

#[test]
fn bracket_is_antisymmetric() {
    for (name, l, fam) in admissible_examples() {
        for f in &fam {
            for g in &fam {
                let (wf, wg) = (find_admissible(&l, f).unwrap(), find_admissible(&l, g).unwrap());
                assert_eq!(bracket_of(&wf, &wg), -bracket_of(&wg, &wf), "{name}");
            }
        }
    }
}

/// `[e_f, e_g] = ([X_f,X_g], X_f·φ_g − X_g·φ_f) + (d{f,g}, {f,g})`.
#[test]
fn bracket_of_witness_sections() {
    for (name, l, fam) in admissible_examples() {
        let mut s = Sampler::new(31, 3, 2);
        for _ in 0..8 {
            let (f, g) = (pick(&mut s, &fam), pick(&mut s, &fam));
            let (wf, wg) = (find_admissible(&l, &f).unwrap(), find_admissible(&l, &g).unwrap());
            let fg = bracket_of(&wf, &wg);
            let lhs = extended_bracket(&wf.section(), &wg.section()).unwrap();
            let rhs = E1Section::new(
                wf.x_f.lie_bracket(&wg.x_f).unwrap(),
                &wf.x_f.apply(&wg.phi_f) - &wg.x_f.apply(&wf.phi_f),
                Form::differential(&fg),
                fg,
            )
            .unwrap();
            assert_eq!(lhs, rhs, "{name}");
        }
    }
}

/// Moving `e_f` along `L ∩ (TM × ℝ)` does not change `{f, g}`.
#[test]
fn bracket_is_independent_of_witness() {
    // a sub-bundle with genuine freedom: the graph of a degenerate 2-form
    let n = 3;
    let omega = Form::basis(&[0, 1], n);
    let l = build_graph(&GraphPayload::TwoForm(omega)).unwrap();
    let f = x(0, n);
    let wf = find_admissible(&l, &f).unwrap();
    assert!(!wf.freedom.is_empty());
    let mut s = Sampler::new(3, n, 2);
    for _ in 0..10 {
        // functions depending on z are not admissible here
        let g = s.polynomial();
        let Ok(wg) = find_admissible(&l, &g) else { continue };
        for e0 in &wf.freedom {
            let shift = e0.scale(&s.polynomial());
            assert_eq!(bracket_of(&wf.shifted(&shift), &wg), bracket_of(&wf, &wg));
        }
    }
    // the contact graph has none
    assert!(find_admissible(&contact_graph(), &f).unwrap().freedom.is_empty());
}

#[test]
fn leibniz_rule_with_defect() {
    for (name, l, fam) in admissible_examples() {
        let mut s = Sampler::new(99, 3, 1).with_max_terms(2);
        for _ in 0..5 {
            let (f, g, h) = (pick(&mut s, &fam), pick(&mut s, &fam), pick(&mut s, &fam));
            match leibniz_defect(&l, &f, &g, &h) {
                Ok(d) => assert!(d.is_zero(), "{name}"),
                // gh need not be admissible
                Err(Error::NotAdmissible(_)) => assert!(find_admissible(&l, &(&g * &h)).is_err()),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

/// When `(Y_g, θ_g) + (dg, 0)` lies in `L`, so does `g e_f + f s_g`, and it
/// is a witness for `gf`.
#[test]
fn products_of_admissible_functions() {
    let l = contact_graph();
    let n = 3;
    let g = one_plus_sq(0, n);
    let c = find_conformal_section(&l, &g).unwrap();
    let s_g = c.section();
    let mut s = Sampler::new(12, n, 2);
    for _ in 0..5 {
        let f = s.polynomial();
        let wf = find_admissible(&l, &f).unwrap();
        let e = product_section(&wf, &g, &s_g);
        assert!(l.contains_section(&e).unwrap().contained());
        assert_eq!(e.alpha, Form::differential(&(&g * &f)));
        assert_eq!(e.g, &g * &f);
    }
}

#[test]
fn round_trip_through_jacobi_pairs() {
    for j in [contact(), poisson3()] {
        let r = recover_jacobi(&graph(GraphPayload::Jacobi(j.clone()))).unwrap();
        assert_eq!(r.pair, j);
        assert!(r.is_consistent());
    }
    let l = contact_graph();
    let one = find_admissible(&l, &k(1, 3)).unwrap();
    assert_eq!(one.x_f, contact().e);
    assert!(one.phi_f.is_zero());
    let pi2 = MultiVector::basis(&[0, 1], 2);
    let r = recover_jacobi(&graph(GraphPayload::Bivector(pi2.clone()))).unwrap();
    assert_eq!(r.pair.pi, pi2);
}
