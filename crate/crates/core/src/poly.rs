//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Terms are kept in canonical form: graded-lexicographic descending order on
//! the full variable list, no zero coefficients, unique exponent vectors.
//! Two polynomials over equal arenas are equal iff their term lists are equal.

use crate::arena::{VarId, VariableArena};
use crate::num::GaussianRational;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Graded-lex comparison of exponent vectors (total degree first, then lex).
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Pure lexicographic comparison of exponent vectors.
pub fn lex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    a.cmp(b)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arena: Arc<VariableArena>,
    /// `(exponents, coefficient)` sorted grlex-descending, no zero coefficients.
    terms: Vec<(Vec<u32>, GaussianRational)>,
}

impl Polynomial {
    pub fn zero(arena: &Arc<VariableArena>) -> Self {
        Polynomial { arena: arena.clone(), terms: Vec::new() }
    }

    pub fn constant(arena: &Arc<VariableArena>, c: GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(arena);
        }
        Polynomial { arena: arena.clone(), terms: vec![(vec![0; arena.len()], c)] }
    }

    pub fn one(arena: &Arc<VariableArena>) -> Self {
        Self::constant(arena, GaussianRational::one())
    }

    pub fn var(arena: &Arc<VariableArena>, v: VarId) -> Self {
        let mut e = vec![0u32; arena.len()];
        e[v] = 1;
        Polynomial { arena: arena.clone(), terms: vec![(e, GaussianRational::one())] }
    }

    pub fn monomial(arena: &Arc<VariableArena>, expo: Vec<u32>, c: GaussianRational) -> Self {
        assert_eq!(expo.len(), arena.len());
        if c.is_zero() {
            return Self::zero(arena);
        }
        Polynomial { arena: arena.clone(), terms: vec![(expo, c)] }
    }

    /// Canonicalize an arbitrary term list.
    pub fn from_terms(
        arena: &Arc<VariableArena>,
        terms: impl IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    ) -> Self {
        let mut acc: BTreeMap<Vec<u32>, GaussianRational> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), arena.len(), "exponent arity mismatch");
            if c.is_zero() {
                continue;
            }
            match acc.entry(e) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get() + &c;
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().collect();
        terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
        Polynomial { arena: arena.clone(), terms }
    }

    pub fn arena(&self) -> &Arc<VariableArena> {
        &self.arena
    }

    pub fn terms(&self) -> &[(Vec<u32>, GaussianRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    /// The constant value if `self` is constant.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.terms.is_empty() {
            Some(GaussianRational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.iter().sum::<u32>()).max()
    }

    /// Order of vanishing at the origin; `None` for the zero polynomial.
    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.iter().sum::<u32>()).min()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0)
    }

    pub fn involves(&self, v: VarId) -> bool {
        self.terms.iter().any(|(e, _)| e[v] > 0)
    }

    fn check_same_arena(&self, other: &Polynomial) {
        assert_eq!(self.arena, other.arena, "polynomials from different arenas");
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_same_arena(other);
        // Merge two grlex-desc sorted lists.
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match grlex_cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { arena: self.arena.clone(), terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            arena: self.arena.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.arena);
        }
        Polynomial {
            arena: self.arena.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_same_arena(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.arena);
        }
        let mut acc: BTreeMap<Vec<u32>, GaussianRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                match acc.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let s = o.get() + &c;
                        if s.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = s;
                        }
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().collect();
        terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
        Polynomial { arena: self.arena.clone(), terms }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.arena);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative with respect to one variable.
    pub fn partial(&self, v: VarId) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[v] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[v] -= 1;
                (e2, c * &GaussianRational::from_int(e[v] as i64))
            })
            .collect::<Vec<_>>();
        Polynomial::from_terms(&self.arena, terms)
    }

    /// The conjugation involution: swap `zk <-> conj(zk)`, conjugate coefficients,
    /// fix auxiliaries.
    pub fn conjugate_swap(&self) -> Polynomial {
        let n = self.arena.len();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = vec![0u32; n];
            for v in 0..n {
                e2[self.arena.conj_partner(v)] = e[v];
            }
            (e2, c.conj())
        });
        Polynomial::from_terms(&self.arena, terms.collect::<Vec<_>>())
    }

    /// True iff fixed by the conjugation involution (a real polynomial).
    pub fn is_real(&self) -> bool {
        self.conjugate_swap() == *self
    }

    /// Full evaluation: one value per arena variable.
    pub fn eval(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.arena.len());
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    t = &t * &point[v].pow(exp);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitute constants for a subset of variables, staying in the same arena.
    pub fn eval_partial(&self, assignments: &[(VarId, GaussianRational)]) -> Polynomial {
        let mut out = Vec::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let mut c2 = c.clone();
            for (v, val) in assignments {
                if e2[*v] > 0 {
                    c2 = &c2 * &val.pow(e2[*v]);
                    e2[*v] = 0;
                }
            }
            out.push((e2, c2));
        }
        Polynomial::from_terms(&self.arena, out)
    }

    /// Ring homomorphism: replace every variable `v` by `images[v]` (polynomials
    /// over `target`).
    pub fn map_into(&self, target: &Arc<VariableArena>, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.arena.len());
        for im in images {
            assert_eq!(im.arena, *target);
        }
        let mut acc = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (v, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    t = t.mul(&images[v].pow(exp));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Lift into an extended arena (append-only extension of the current one).
    pub fn lift_to(&self, target: &Arc<VariableArena>) -> Polynomial {
        assert!(self.arena.is_prefix_of(target), "not an arena extension");
        let pad = target.len() - self.arena.len();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2.extend(std::iter::repeat_n(0, pad));
                (e2, c.clone())
            })
            .collect::<Vec<_>>();
        let mut p = Polynomial { arena: target.clone(), terms };
        // grlex order is preserved by zero padding; keep canonical anyway.
        p.terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
        p
    }

    /// Substitute `var := var + c` for each `(var, c)`; an exact shift.
    pub fn shift(&self, offsets: &[(VarId, GaussianRational)]) -> Polynomial {
        let images: Vec<Polynomial> = (0..self.arena.len())
            .map(|v| {
                let base = Polynomial::var(&self.arena, v);
                match offsets.iter().find(|(w, _)| *w == v) {
                    Some((_, c)) => base.add(&Polynomial::constant(&self.arena, c.clone())),
                    None => base,
                }
            })
            .collect();
        self.map_into(&self.arena, &images)
    }

    /// View as univariate in `v`: coefficient polynomials of `v^0..v^deg`.
    pub fn coeffs_in(&self, v: VarId) -> Vec<Polynomial> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Vec<u32>, GaussianRational)>> = vec![Vec::new(); d + 1];
        for (e, c) in &self.terms {
            let k = e[v] as usize;
            let mut e2 = e.clone();
            e2[v] = 0;
            buckets[k].push((e2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|b| Polynomial::from_terms(&self.arena, b))
            .collect()
    }

    /// Rebuild from univariate coefficients in `v`.
    pub fn from_coeffs_in(arena: &Arc<VariableArena>, v: VarId, coeffs: &[Polynomial]) -> Polynomial {
        let xv = Polynomial::var(arena, v);
        let mut acc = Polynomial::zero(arena);
        for (k, c) in coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&xv.pow(k as u32)));
        }
        acc
    }

    /// Leading term under a given exponent ordering.
    pub fn leading_term(
        &self,
        cmp: impl Fn(&[u32], &[u32]) -> Ordering,
    ) -> Option<(&[u32], &GaussianRational)> {
        self.terms
            .iter()
            .max_by(|a, b| cmp(&a.0, &b.0))
            .map(|(e, c)| (e.as_slice(), c))
    }

    /// Exact division: `Some(q)` with `self = q * d` when the division has no
    /// remainder; `None` otherwise.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        self.check_same_arena(d);
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = Polynomial::zero(&self.arena);
        let (dl, dc) = d.leading_term(grlex_cmp).map(|(e, c)| (e.to_vec(), c.clone())).unwrap();
        let dc_inv = dc.inv().unwrap();
        while !rem.is_zero() {
            let (rl, rc) = {
                let (e, c) = rem.leading_term(grlex_cmp).unwrap();
                (e.to_vec(), c.clone())
            };
            if !divides(&dl, &rl) {
                return None;
            }
            let e: Vec<u32> = rl.iter().zip(&dl).map(|(a, b)| a - b).collect();
            let c = &rc * &dc_inv;
            let m = Polynomial::monomial(&self.arena, e, c);
            quo = quo.add(&m);
            rem = rem.sub(&m.mul(d));
        }
        Some(quo)
    }

    /// Divisibility test (`d | self`).
    pub fn divisible_by(&self, d: &Polynomial) -> bool {
        self.exact_div(d).is_some()
    }

    /// Normalize the grlex leading coefficient to 1 (zero stays zero).
    pub fn monic(&self) -> Polynomial {
        match self.leading_term(grlex_cmp) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().unwrap();
                self.scale(&inv)
            }
        }
    }
}

/// Componentwise divisibility of exponent vectors.
pub fn divides(d: &[u32], m: &[u32]) -> bool {
    d.iter().zip(m).all(|(a, b)| a <= b)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_expr(self))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_expr(self))
    }
}

fn fmt_ratio_plain(r: &num_rational::BigRational) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical expression form, parseable by [`crate::parse::parse_expression`].
///
/// Terms appear in graded-lex descending order; the round trip
/// `parse(print(p)) == p` is exact.
pub fn print_expr(p: &Polynomial) -> String {
    use num_traits::{Signed, Zero};
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (e, c)) in p.terms().iter().enumerate() {
        let mut vars = String::new();
        for (v, &exp) in e.iter().enumerate() {
            if exp == 0 {
                continue;
            }
            if !vars.is_empty() {
                vars.push('*');
            }
            vars.push_str(&p.arena().name(v));
            if exp > 1 {
                vars.push('^');
                vars.push_str(&exp.to_string());
            }
        }
        // Determine a display sign and the unsigned coefficient body.
        let (negative, body): (bool, String) = if c.im.is_zero() {
            let neg = c.re.is_negative();
            let mag = if neg { -c.re.clone() } else { c.re.clone() };
            let is_one = num_traits::One::is_one(&mag);
            let s = if is_one && !vars.is_empty() {
                String::new()
            } else {
                fmt_ratio_plain(&mag)
            };
            (neg, s)
        } else if c.re.is_zero() {
            let neg = c.im.is_negative();
            let mag = if neg { -c.im.clone() } else { c.im.clone() };
            let s = if num_traits::One::is_one(&mag) {
                "i".to_string()
            } else {
                format!("{}*i", fmt_ratio_plain(&mag))
            };
            (neg, s)
        } else {
            // Mixed coefficient: parenthesized, real part printed first when
            // positive, imaginary part first otherwise (no leading minus).
            let neg = c.re.is_negative();
            let cc = if neg { -c } else { c.clone() };
            let im_mag = cc.im.abs();
            let im_body = if num_traits::One::is_one(&im_mag) {
                "i".to_string()
            } else {
                format!("{}*i", fmt_ratio_plain(&im_mag))
            };
            let s = if cc.im.is_negative() {
                format!("({}-{})", fmt_ratio_plain(&cc.re), im_body)
            } else {
                format!("({}+{})", fmt_ratio_plain(&cc.re), im_body)
            };
            (neg, s)
        };
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        match (body.is_empty(), vars.is_empty()) {
            (true, true) => out.push('1'),
            (true, false) => out.push_str(&vars),
            (false, true) => out.push_str(&body),
            (false, false) => {
                out.push_str(&body);
                out.push('*');
                out.push_str(&vars);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::VariableArena;

    fn c2() -> Arc<VariableArena> {
        VariableArena::complex_space(2)
    }

    #[test]
    fn sphere_defining_polynomial_is_real() {
        let a = c2();
        // z2 + conj(z2) + z1*conj(z1)
        let rho = Polynomial::var(&a, a.holo(1))
            .add(&Polynomial::var(&a, a.anti(1)))
            .add(&Polynomial::var(&a, a.holo(0)).mul(&Polynomial::var(&a, a.anti(0))));
        assert!(rho.is_real());
        assert_eq!(rho.conjugate_swap(), rho);
        assert_eq!(rho.total_degree(), Some(2));
    }

    #[test]
    fn conjugate_swap_of_i_z1() {
        let a = c2();
        let p = Polynomial::var(&a, a.holo(0)).scale(&GaussianRational::i());
        let q = p.conjugate_swap();
        let expect = Polynomial::var(&a, a.anti(0)).scale(&-GaussianRational::i());
        assert_eq!(q, expect);
        assert_eq!(q.conjugate_swap(), p);
    }

    #[test]
    fn partial_derivatives() {
        let a = c2();
        let z1 = Polynomial::var(&a, a.holo(0));
        let zeta1 = Polynomial::var(&a, a.anti(0));
        // d/dz1 (z1*conj(z1)) = conj(z1)
        assert_eq!(z1.mul(&zeta1).partial(a.holo(0)), zeta1);
        // d/dconj(z1) (z1^2*conj(z1)^3) = 3 z1^2 conj(z1)^2
        let p = z1.pow(2).mul(&zeta1.pow(3));
        let expect = z1.pow(2).mul(&zeta1.pow(2)).scale(&GaussianRational::from_int(3));
        assert_eq!(p.partial(a.anti(0)), expect);
    }

    #[test]
    fn exact_division_round_trip() {
        let a = c2();
        let z1 = Polynomial::var(&a, a.holo(0));
        let z2 = Polynomial::var(&a, a.holo(1));
        let p = z1.add(&z2).mul(&z1.sub(&z2)).mul(&z1.add(&Polynomial::one(&a)));
        let d = z1.add(&z2);
        let q = p.exact_div(&d).expect("divides");
        assert_eq!(q.mul(&d), p);
        assert!(p.add(&Polynomial::one(&a)).exact_div(&d).is_none());
    }

    #[test]
    fn conjugation_involution_on_random_polynomials() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(5);
        for trial in 0..1000 {
            let n = 1 + (trial % 3);
            let arena = VariableArena::complex_space(n);
            let mut p = Polynomial::zero(&arena);
            for _ in 0..6 {
                let e: Vec<u32> = (0..arena.len()).map(|_| rng.gen_range(0..3)).collect();
                if e.iter().sum::<u32>() > 6 {
                    continue;
                }
                let c = GaussianRational::new(
                    num_rational::BigRational::new(
                        rng.gen_range(-4i64..=4).into(),
                        rng.gen_range(1i64..=3).into(),
                    ),
                    num_rational::BigRational::new(
                        rng.gen_range(-4i64..=4).into(),
                        rng.gen_range(1i64..=3).into(),
                    ),
                );
                p = p.add(&Polynomial::monomial(&arena, e, c));
            }
            assert_eq!(p.conjugate_swap().conjugate_swap(), p);
        }
    }

    #[test]
    fn mixed_partials_commute() {
        let a = c2();
        let z1 = Polynomial::var(&a, a.holo(0));
        let zeta2 = Polynomial::var(&a, a.anti(1));
        let p = z1.pow(3).mul(&zeta2.pow(2)).add(&z1.mul(&zeta2));
        assert_eq!(
            p.partial(a.holo(0)).partial(a.anti(1)),
            p.partial(a.anti(1)).partial(a.holo(0))
        );
    }
}
