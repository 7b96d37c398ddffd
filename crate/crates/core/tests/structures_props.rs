//! Φ as a bracket morphism, and the Nambu / co-Nambu pipeline.

mod common;

use common::*;
use dirac_core::courant::extended_bracket;
use dirac_core::dirac::{build_graph, is_dirac, GraphPayload};
use dirac_core::sample::Sampler;
use dirac_core::structures::{
    check_conambu, check_fundamental_identity, check_jacobi, ks_bracket, nambu_to_form, phi_iso,
    JacobiPair, LcpsPair, NambuField, OneJet,
};
use dirac_core::{Form, MultiVector, Scalar};
use rayon::prelude::*;

fn jet(s: &mut Sampler) -> OneJet {
    OneJet::new(s.one_form(), s.polynomial()).unwrap()
}

/// `Φ{u, v} = [Φu, Φv]` for the Jacobi pairs at hand.
#[test]
fn phi_is_a_bracket_morphism() {
    let pairs = [contact(), poisson3()];
    for (which, j) in pairs.iter().enumerate() {
        assert!(check_jacobi(j).unwrap().holds());
        let failures: Vec<u64> = (0..60u64)
            .into_par_iter()
            .filter(|&seed| {
                let mut s = Sampler::new(seed, 3, 2);
                let (u, v) = (jet(&mut s), jet(&mut s));
                let lhs = phi_iso(j, &ks_bracket(j, &u, &v).unwrap()).unwrap();
                let rhs = extended_bracket(&phi_iso(j, &u).unwrap(), &phi_iso(j, &v).unwrap()).unwrap();
                lhs != rhs
            })
            .collect();
        assert!(failures.is_empty(), "pair {which}: seeds {failures:?}");
    }
}

#[test]
fn phi_lands_in_the_graph() {
    let j = contact();
    let l = build_graph(&GraphPayload::Jacobi(j.clone())).unwrap();
    let mut s = Sampler::new(11, 3, 2);
    for _ in 0..10 {
        let e = phi_iso(&j, &jet(&mut s)).unwrap();
        assert!(l.contains_section(&e).unwrap().contained());
    }
}

#[test]
fn ks_bracket_on_constant_poisson() {
    let n = 2;
    let j = JacobiPair::new(MultiVector::basis(&[0, 1], n), MultiVector::zero(1, n)).unwrap();
    let u = OneJet::of(&x(0, n));
    let v = OneJet::of(&x(1, n));
    let b = ks_bracket(&j, &u, &v).unwrap();
    assert_eq!(b, OneJet::new(Form::zero(1, n), k(1, n)).unwrap());
    assert!(ks_bracket(&j, &u, &u).unwrap().is_zero());
}

fn volume(n: usize, f: &Scalar) -> Form {
    let all: Vec<usize> = (0..n).collect();
    Form::basis(&all, n).scale(f)
}

#[test]
fn nambu_pipeline_on_r4() {
    let n = 4;
    let f = one_plus_sq(0, n);
    let nambu = NambuField::new(MultiVector::basis(&[0, 1], n)).unwrap();
    let omega = nambu_to_form(&nambu, &volume(n, &f)).unwrap();
    assert_eq!(omega, Form::basis(&[2, 3], n).scale(&f));
    assert!(check_conambu(&omega).unwrap().holds());
    let eta = Form::differential(&f).scale(&f.inv().unwrap());
    let l = build_graph(&GraphPayload::Lcps(LcpsPair::new(omega, eta).unwrap())).unwrap();
    assert!(is_dirac(&l).is_dirac());
}

#[test]
fn conambu_examples() {
    let n = 4;
    let sum = &Form::basis(&[0, 1], n) + &Form::basis(&[2, 3], n);
    assert!(!check_conambu(&sum).unwrap().holds());
    // decomposable closed forms pass
    let mut s = Sampler::new(5, n, 1).with_max_terms(2);
    for _ in 0..5 {
        let w = Form::differential(&s.polynomial()).wedge(&Form::differential(&s.polynomial()));
        assert!(check_conambu(&w).unwrap().holds());
    }
}

fn monomials_up_to_2(n: usize) -> Vec<Scalar> {
    let mut out = vec![k(1, n)];
    for i in 0..n {
        out.push(x(i, n));
        for j in i..n {
            out.push(&x(i, n) * &x(j, n));
        }
    }
    out
}

#[test]
fn fundamental_identity_examples() {
    let n = 4;
    let fam = monomials_up_to_2(n);
    let constant = NambuField::new(MultiVector::basis(&[0, 1], n)).unwrap();
    assert!(check_fundamental_identity(&constant, &fam).unwrap().passed_on_family());

    let n = 3;
    let top = NambuField::new(MultiVector::basis(&[0, 1, 2], n)).unwrap();
    assert!(check_fundamental_identity(&top, &monomials_up_to_2(n)).unwrap().passed_on_family());

    // x1 ∂1∧∂2 + ∂3∧∂4 fails: it is not Poisson
    let n = 4;
    let pi = &MultiVector::basis(&[0, 1], n).scale(&x(0, n)) + &MultiVector::basis(&[2, 3], n);
    let report = check_fundamental_identity(&NambuField::new(pi.clone()).unwrap(), &monomials_up_to_2(n)).unwrap();
    let poisson = dirac_core::structures::check_poisson(&pi).unwrap().holds();
    assert_eq!(report.passed_on_family(), poisson);
}
