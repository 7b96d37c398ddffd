//! Multivariate polynomial gcd over ℚ.
//!
//! Strategy, cheapest first:
//! 1. trivial cases (zero, constants, monomials, equal inputs);
//! 2. a coprimality certificate from univariate images: if `lc_v(a)` does not
//!    vanish at an evaluation point of the other variables, then
//!    `deg_v gcd(a, b) <= deg gcd(a(pt), b(pt))`, so a degree-0 image in every
//!    shared variable proves the gcd is 1;
//! 3. the heuristic gcd: evaluate one variable at a large integer `ξ`,
//!    recurse, rebuild the candidate `ξ`-adically and keep it only if it
//!    divides both inputs (with `ξ ≥ 2·min(‖a‖∞, ‖b‖∞) + 2` that makes it the
//!    gcd, not merely a common factor);
//! 4. recursive content / primitive pseudo-remainder sequence as fallback.
//!
//! The result is always monic (leading coefficient 1 in lex order).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;

pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    if a.is_monomial() {
        return monomial_gcd(a, b);
    }
    if b.is_monomial() {
        return monomial_gcd(b, a);
    }
    let am = a.monic();
    let bm = b.monic();
    if am == bm {
        return am;
    }

    // Monomial factors split off cheaply.
    let (ma, ra) = split_monomial_content(&am);
    let (mb, rb) = split_monomial_content(&bm);
    let mono: Vec<u32> = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    let mono = Poly::monomial(BigRational::one(), mono);

    let core = gcd_no_monomial(&ra, &rb);
    (&mono * &core).monic()
}

pub fn gcd_many<'a>(items: impl IntoIterator<Item = &'a Poly>, nvars: usize) -> Poly {
    let mut acc = Poly::zero(nvars);
    for p in items {
        acc = gcd(&acc, p);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn monomial_gcd(mono: &Poly, other: &Poly) -> Poly {
    let (e, _) = mono.leading_term().expect("nonzero monomial");
    let mut m = e.clone();
    for (oe, _) in other.terms() {
        for (x, y) in m.iter_mut().zip(oe) {
            *x = (*x).min(*y);
        }
    }
    Poly::monomial(BigRational::one(), m)
}

/// Splits `p = x^m * r` with `m` the componentwise minimum exponent.
fn split_monomial_content(p: &Poly) -> (Vec<u32>, Poly) {
    let n = p.nvars();
    let mut m: Option<Vec<u32>> = None;
    for (e, _) in p.terms() {
        m = Some(match m {
            None => e.clone(),
            Some(cur) => cur.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    let m = m.unwrap_or_else(|| vec![0; n]);
    if m.iter().all(|&k| k == 0) {
        return (m, p.clone());
    }
    let r = Poly::from_terms(
        n,
        p.terms()
            .map(|(e, c)| (e.iter().zip(&m).map(|(a, b)| a - b).collect(), c.clone())),
    );
    (m, r)
}

fn gcd_no_monomial(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    let shared: Vec<usize> = (0..n)
        .filter(|&v| a.degree_in(v) > 0 && b.degree_in(v) > 0)
        .collect();
    if shared.is_empty() {
        // Any common factor would have to be free of every variable.
        return Poly::one(n);
    }
    if certified_coprime(a, b, &shared) {
        return Poly::one(n);
    }
    let vars: Vec<usize> = (0..n)
        .filter(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
        .collect();
    if let Some(h) = heuristic_gcd(&integer_primitive(a).1, &integer_primitive(b).1, &vars) {
        return h.monic();
    }
    prs_gcd(a, b, shared[0])
}

fn certified_coprime(a: &Poly, b: &Poly, shared: &[usize]) -> bool {
    let n = a.nvars();
    'vars: for &v in shared {
        let lc = a.lead_coeff_in(v);
        for attempt in 0..4i64 {
            let point: Vec<BigRational> = (0..n)
                .map(|i| BigRational::from_integer(BigInt::from(2 + 3 * i as i64 + 7 * attempt)))
                .collect();
            if lc.eval(&point).is_zero() {
                continue;
            }
            let ua = a.eval_except(v, &point);
            let ub = b.eval_except(v, &point);
            if univariate_gcd_degree(ua, ub) == 0 {
                continue 'vars;
            }
            return false;
        }
        return false;
    }
    true
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree of the univariate gcd over ℚ; `usize::MAX` if both are zero.
fn univariate_gcd_degree(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> usize {
    trim(&mut a);
    trim(&mut b);
    loop {
        if b.is_empty() {
            return if a.is_empty() { usize::MAX } else { a.len() - 1 };
        }
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // a <- a mod b
        let lb = b.last().unwrap().clone();
        while a.len() >= b.len() && !a.is_empty() {
            let q = a.last().unwrap() / &lb;
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[i + shift] -= &q * c;
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Attempts per level before giving up on the heuristic.
const HEURISTIC_TRIES: usize = 6;

/// Splits `p = c·q` with `q` integral, primitive over ℤ and `c` rational.
fn integer_primitive(p: &Poly) -> (BigRational, Poly) {
    let den = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let num = p
        .terms()
        .fold(BigInt::zero(), |acc, (_, c)| acc.gcd(&(c.numer() * (&den / c.denom()))));
    if num.is_zero() {
        return (BigRational::one(), p.clone());
    }
    let c = BigRational::new(num, den);
    (c.clone(), p.scale(&c.recip()))
}

fn max_norm(p: &Poly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// `p` with `x_var = value`.
fn substitute(p: &Poly, var: usize, value: &BigInt) -> Poly {
    let value = BigRational::from_integer(value.clone());
    Poly::from_terms(
        p.nvars(),
        p.terms().map(|(e, c)| {
            let mut e = e.clone();
            let k = std::mem::replace(&mut e[var], 0);
            (e, c * num_traits::pow(value.clone(), k as usize))
        }),
    )
}

/// Representative of `c mod m` in `(−m/2, m/2]`.
fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Reads the integer coefficients of `image` as base-`ξ` digits in `x_var`.
fn xi_adic(image: &Poly, var: usize, xi: &BigInt) -> Poly {
    let n = image.nvars();
    let mut rest = image.clone();
    let mut terms = Vec::new();
    let mut k = 0u32;
    while !rest.is_zero() {
        let digit = Poly::from_terms(
            n,
            rest.terms()
                .map(|(e, c)| (e.clone(), BigRational::from_integer(symmetric_mod(c.numer(), xi)))),
        );
        for (e, c) in digit.terms() {
            let mut e = e.clone();
            e[var] = k;
            terms.push((e, c.clone()));
        }
        rest = (&rest - &digit).scale(&BigRational::from_integer(xi.clone()).recip());
        k += 1;
    }
    Poly::from_terms(n, terms)
}

/// gcd over ℤ of integral `a`, `b` in the variables `vars`, or `None` when
/// every evaluation point tried was unlucky.
fn heuristic_gcd(a: &Poly, b: &Poly, vars: &[usize]) -> Option<Poly> {
    let n = a.nvars();
    let (ca, pa) = integer_primitive(a);
    let (cb, pb) = integer_primitive(b);
    let content = Poly::constant(BigRational::from_integer(ca.numer().gcd(cb.numer())), n);
    let Some((&var, inner)) = vars.split_first() else {
        return Some(content);
    };
    if pa.degree_in(var) == 0 && pb.degree_in(var) == 0 {
        return heuristic_gcd(&pa, &pb, inner).map(|g| &g * &content);
    }
    let mut xi: BigInt = max_norm(&pa).min(max_norm(&pb)) * 2 + 29;
    for _ in 0..HEURISTIC_TRIES {
        let (ia, ib) = (substitute(&pa, var, &xi), substitute(&pb, var, &xi));
        if !ia.is_zero() && !ib.is_zero() {
            if let Some(image) = heuristic_gcd(&ia, &ib, inner) {
                let h = integer_primitive(&xi_adic(&image, var, &xi)).1;
                if !h.is_zero() && pa.div_exact(&h).is_some() && pb.div_exact(&h).is_some() {
                    return Some(&h * &content);
                }
            }
        }
        // grow by roughly ξ^(1/4), away from small multiples of the old point
        xi = &xi * 73794 * xi.sqrt().sqrt() / 27011;
    }
    None
}

/// Content of `p` viewed as a polynomial in `var`: gcd of its coefficients.
pub fn content_in(p: &Poly, var: usize) -> Poly {
    let coeffs = p.coeffs_in(var);
    gcd_many(coeffs.iter().filter(|c| !c.is_zero()), p.nvars())
}

fn primitive_part_in(p: &Poly, var: usize) -> Poly {
    let c = content_in(p, var);
    p.div_exact(&c).expect("content divides")
}

fn pseudo_remainder(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.degree_in(var);
    let lb = b.lead_coeff_in(var);
    let n = a.nvars();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.lead_coeff_in(var);
        let mut e = vec![0; n];
        e[var] = dr - db;
        let shift = Poly::monomial(BigRational::one(), e);
        r = &(&r * &lb) - &(&(&lr * &shift) * b);
    }
    r
}

fn prs_gcd(a: &Poly, b: &Poly, var: usize) -> Poly {
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(var) < q.degree_in(var) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = pseudo_remainder(&p, &q, var);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(var) == 0 {
            break Poly::one(a.nvars());
        }
        p = q;
        q = primitive_part_in(&r, var);
    };
    let g = if g.degree_in(var) == 0 {
        Poly::one(a.nvars())
    } else {
        primitive_part_in(&g, var)
    };
    (&c * &g).monic()
}
