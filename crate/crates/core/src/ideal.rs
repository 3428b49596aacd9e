//! Ideal certificates: Groebner bases (Buchberger with sugar selection),
//! normal forms, radical membership, and finite-codimension tests in the
//! local ring at the origin.

use crate::arena::VariableArena;
use crate::linalg::RowReducer;
use crate::num::GaussianRational;
use crate::poly::{divides, grlex_cmp, lex_cmp, Polynomial};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

/// Monomial order used by a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    GradedLex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::GradedLex => grlex_cmp(a, b),
            MonomialOrder::Lex => lex_cmp(a, b),
        }
    }
}

/// Generators plus a monomial order.
#[derive(Clone, Debug)]
pub struct IdealPresentation {
    arena: Arc<VariableArena>,
    gens: Vec<Polynomial>,
    order: MonomialOrder,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("ideal presentation requires at least one nonzero generator")]
    Empty,
    #[error("S-pair budget of {budget} exceeded; result unknown")]
    BudgetExceeded { budget: usize },
    #[error("generator {index} does not vanish at the origin")]
    GeneratorNotVanishing { index: usize },
}

/// Default S-pair budget for Buchberger runs.
pub const DEFAULT_SPAIR_BUDGET: usize = 50_000;

impl IdealPresentation {
    pub fn new(gens: Vec<Polynomial>, order: MonomialOrder) -> Result<Self, IdealError> {
        let gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let arena = gens.first().ok_or(IdealError::Empty)?.arena().clone();
        for g in &gens {
            assert_eq!(*g.arena(), arena, "generators share one arena");
        }
        Ok(IdealPresentation { arena, gens, order })
    }

    pub fn arena(&self) -> &Arc<VariableArena> {
        &self.arena
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }
}

fn leading(
    p: &Polynomial,
    order: MonomialOrder,
) -> (&[u32], &GaussianRational) {
    p.leading_term(|a, b| order.cmp(a, b))
        .expect("leading term of nonzero polynomial")
}

/// Multivariate division with quotient tracking:
/// `f = sum quotients[k] * divisors[k] + remainder`, with no remainder
/// monomial divisible by any divisor's leading monomial.
pub fn division_with_quotients(
    f: &Polynomial,
    divisors: &[Polynomial],
    order: MonomialOrder,
) -> (Vec<Polynomial>, Polynomial) {
    let arena = f.arena().clone();
    let mut rem = Polynomial::zero(&arena);
    let mut quotients = vec![Polynomial::zero(&arena); divisors.len()];
    let mut work = f.clone();
    let lts: Vec<(Vec<u32>, GaussianRational)> = divisors
        .iter()
        .map(|d| {
            let (e, c) = leading(d, order);
            (e.to_vec(), c.clone())
        })
        .collect();
    while !work.is_zero() {
        let (we, wc) = {
            let (e, c) = leading(&work, order);
            (e.to_vec(), c.clone())
        };
        match lts.iter().position(|(de, _)| divides(de, &we)) {
            Some(k) => {
                let e: Vec<u32> = we.iter().zip(&lts[k].0).map(|(a, b)| a - b).collect();
                let c = &wc * &lts[k].1.inv().unwrap();
                let m = Polynomial::monomial(&arena, e, c);
                quotients[k] = quotients[k].add(&m);
                work = work.sub(&m.mul(&divisors[k]));
            }
            None => {
                let m = Polynomial::monomial(&arena, we, wc);
                rem = rem.add(&m);
                work = work.sub(&m);
            }
        }
    }
    (quotients, rem)
}

/// Remainder of `f` under multivariate division by `divisors`.
///
/// Deterministic: at each step the first divisor (in slice order) whose
/// leading monomial divides the current leading monomial is used.
pub fn division_remainder(
    f: &Polynomial,
    divisors: &[Polynomial],
    order: MonomialOrder,
) -> Polynomial {
    let arena = f.arena().clone();
    let mut rem = Polynomial::zero(&arena);
    let mut work = f.clone();
    let lts: Vec<(Vec<u32>, GaussianRational)> = divisors
        .iter()
        .map(|d| {
            let (e, c) = leading(d, order);
            (e.to_vec(), c.clone())
        })
        .collect();
    while !work.is_zero() {
        let (we, wc) = {
            let (e, c) = leading(&work, order);
            (e.to_vec(), c.clone())
        };
        match lts.iter().position(|(de, _)| divides(de, &we)) {
            Some(k) => {
                let e: Vec<u32> = we.iter().zip(&lts[k].0).map(|(a, b)| a - b).collect();
                let c = &wc * &lts[k].1.inv().unwrap();
                let m = Polynomial::monomial(&arena, e, c);
                work = work.sub(&m.mul(&divisors[k]));
            }
            None => {
                // Move the leading term to the remainder.
                let m = Polynomial::monomial(&arena, we, wc);
                rem = rem.add(&m);
                work = work.sub(&m);
            }
        }
    }
    rem
}

fn lcm_expo(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Reduced Groebner basis of the presentation.
///
/// Pair selection follows the sugar strategy: pairs are processed in
/// increasing (sugar, lcm, i, j) order, which makes the run deterministic.
/// Exceeding the S-pair budget is an explicit error, never a truncation.
pub fn groebner_basis(
    ideal: &IdealPresentation,
    budget: usize,
) -> Result<Vec<Polynomial>, IdealError> {
    let order = ideal.order;
    let mut basis: Vec<Polynomial> = ideal.gens.clone();
    let mut sugars: Vec<u32> = basis.iter().map(|g| g.total_degree().unwrap_or(0)).collect();

    // Pair queue ordered by (sugar, lcm exponents, i, j).
    let mut queue: BTreeSet<(u32, Vec<u32>, usize, usize)> = BTreeSet::new();
    let push_pairs =
        |queue: &mut BTreeSet<(u32, Vec<u32>, usize, usize)>,
         basis: &[Polynomial],
         sugars: &[u32],
         j: usize| {
            let (lj, _) = leading(&basis[j], order);
            for i in 0..j {
                let (li, _) = leading(&basis[i], order);
                let lcm = lcm_expo(li, lj);
                let deg_lcm: u32 = lcm.iter().sum();
                let di: u32 = li.iter().sum();
                let dj: u32 = lj.iter().sum();
                let sugar = (sugars[i] + deg_lcm - di).max(sugars[j] + deg_lcm - dj);
                queue.insert((sugar, lcm, i, j));
            }
        };
    for j in 0..basis.len() {
        push_pairs(&mut queue, &basis, &sugars, j);
    }

    let mut processed = 0usize;
    while let Some(item) = queue.iter().next().cloned() {
        queue.remove(&item);
        let (sugar, lcm, i, j) = item;
        processed += 1;
        if processed > budget {
            return Err(IdealError::BudgetExceeded { budget });
        }
        let (li, ci) = {
            let (e, c) = leading(&basis[i], order);
            (e.to_vec(), c.clone())
        };
        let (lj, cj) = {
            let (e, c) = leading(&basis[j], order);
            (e.to_vec(), c.clone())
        };
        // Product criterion: coprime leading monomials reduce to zero.
        if li.iter().zip(&lj).all(|(a, b)| *a.min(b) == 0) {
            continue;
        }
        let ei: Vec<u32> = lcm.iter().zip(&li).map(|(a, b)| a - b).collect();
        let ej: Vec<u32> = lcm.iter().zip(&lj).map(|(a, b)| a - b).collect();
        let mi = Polynomial::monomial(&ideal.arena, ei, cj.clone());
        let mj = Polynomial::monomial(&ideal.arena, ej, ci.clone());
        let spoly = mi.mul(&basis[i]).sub(&mj.mul(&basis[j]));
        let rem = division_remainder(&spoly, &basis, order);
        if !rem.is_zero() {
            basis.push(rem);
            sugars.push(sugar);
            let j = basis.len() - 1;
            push_pairs(&mut queue, &basis, &sugars, j);
        }
    }

    // Inter-reduce: drop members whose leading monomial is divisible by
    // another's, then fully reduce each against the rest and normalize.
    let mut keep: Vec<Polynomial> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let (lg, _) = leading(g, order);
        let redundant = basis.iter().enumerate().any(|(m, h)| {
            if m == k || h.is_zero() {
                return false;
            }
            let (lh, _) = leading(h, order);
            divides(lh, lg) && (lh != lg || m < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced: Vec<Polynomial> = Vec::new();
    for k in 0..keep.len() {
        let others: Vec<Polynomial> = keep
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != k)
            .map(|(_, h)| h.clone())
            .collect();
        let r = if others.is_empty() {
            keep[k].clone()
        } else {
            division_remainder(&keep[k], &others, order)
        };
        if !r.is_zero() {
            let (_, c) = leading(&r, order);
            let inv = c.inv().unwrap();
            reduced.push(r.scale(&inv));
        }
    }
    reduced.sort_by(|a, b| {
        let (la, _) = leading(a, order);
        let (lb, _) = leading(b, order);
        order.cmp(la, lb)
    });
    Ok(reduced)
}

/// Normal form of `f` modulo the ideal: the remainder after division by a
/// Groebner basis. Zero iff `f` lies in the ideal.
pub fn normal_form(
    f: &Polynomial,
    ideal: &IdealPresentation,
    budget: usize,
) -> Result<Polynomial, IdealError> {
    let gb = groebner_basis(ideal, budget)?;
    Ok(division_remainder(f, &gb, ideal.order))
}

/// Radical membership by the Rabinowitsch trick: `f` is in the radical of `I`
/// iff `1` lies in `I + (1 - t*f)` for a fresh variable `t`.
pub fn radical_membership(
    f: &Polynomial,
    ideal: &IdealPresentation,
    budget: usize,
) -> Result<bool, IdealError> {
    if f.is_zero() {
        return Ok(true);
    }
    // Fresh auxiliary name unused by the arena.
    let mut name = "t_rad".to_string();
    while ideal.arena.lookup(&name).is_some() {
        name.push('_');
    }
    let ext = ideal.arena.extend_aux(&[name.as_str()]);
    let t = ext.lookup(&name).unwrap();
    let mut gens: Vec<Polynomial> = ideal.gens.iter().map(|g| g.lift_to(&ext)).collect();
    let one = Polynomial::one(&ext);
    gens.push(one.sub(&Polynomial::var(&ext, t).mul(&f.lift_to(&ext))));
    let ext_ideal = IdealPresentation::new(gens, MonomialOrder::GradedLex)?;
    let gb = groebner_basis(&ext_ideal, budget)?;
    Ok(gb.iter().any(|g| g.is_constant() && !g.is_zero()))
}

/// Outcome of the Macaulay-style truncation test at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodimResult {
    /// Every monomial of degree `certifying_degree` lies in the truncated
    /// ideal span; `codimension` counts the standard monomials below it.
    FiniteCertified { codimension: usize, certifying_degree: usize },
    NotDetectedUpTo(usize),
}

/// Enumerate exponent vectors in `nvars` variables of total degree `deg`,
/// in lexicographically descending order.
fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if nvars == 1 {
            let mut m = prefix.clone();
            m.push(deg);
            out.push(m);
            return;
        }
        for d in (0..=deg).rev() {
            prefix.push(d);
            rec(nvars - 1, deg - d, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, deg, &mut Vec::new(), &mut out);
    out
}

/// Finite-codimension certificate for an ideal all of whose generators vanish
/// at the origin.
///
/// For each `D = 1..=d_max` the span of all truncations `trunc_D(m * g)` is
/// row-reduced over the monomial basis of degrees `1..=D` (columns ordered
/// degree-descending so that degree-`D` monomials are eliminated first). If
/// every degree-`D` monomial is a pivot, Nakayama's lemma certifies that the
/// maximal ideal power `m^D` lies inside the ideal in the local ring, and the
/// codimension equals the number of standard monomials of degree `< D`
/// (including the constant monomial) outside the span.
pub fn finite_codimension_at_origin(
    ideal: &IdealPresentation,
    d_max: usize,
) -> Result<CodimResult, IdealError> {
    let nvars = ideal.arena.len();
    for (index, g) in ideal.gens.iter().enumerate() {
        if g.min_total_degree() == Some(0) {
            return Err(IdealError::GeneratorNotVanishing { index });
        }
    }

    for cap in 1..=d_max {
        let d = cap as u32;
        // Column indices: monomials of degree D first (to be eliminated
        // first), then descending degree D-1, ..., 1.
        let mut col_of: std::collections::HashMap<Vec<u32>, usize> = Default::default();
        let mut cols_by_degree: Vec<Vec<Vec<u32>>> = Vec::new();
        for deg in (1..=d).rev() {
            cols_by_degree.push(monomials_of_degree(nvars, deg));
        }
        let mut idx = 0usize;
        for group in &cols_by_degree {
            for m in group {
                col_of.insert(m.clone(), idx);
                idx += 1;
            }
        }
        let n_deg_d = cols_by_degree[0].len();

        let mut reducer = RowReducer::new();
        for g in &ideal.gens {
            let ord = g.min_total_degree().unwrap_or(d + 1);
            if ord > d {
                continue;
            }
            for mult_deg in 0..=(d - ord) {
                for m in monomials_of_degree(nvars, mult_deg) {
                    // trunc_D(m * g) as a sparse row.
                    let mut row: Vec<(usize, GaussianRational)> = Vec::new();
                    for (e, c) in g.terms() {
                        let prod: Vec<u32> = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                        let deg: u32 = prod.iter().sum();
                        if deg <= d {
                            row.push((col_of[&prod], c.clone()));
                        }
                    }
                    row.sort_by_key(|(c, _)| *c);
                    // Merge duplicate columns (cannot occur: monomial keys are
                    // unique per term), then insert.
                    reducer.insert(row);
                }
            }
        }

        let all_top_spanned = (0..n_deg_d).all(|c| reducer.has_pivot(c));
        if all_top_spanned {
            // Standard monomials: constant 1 plus non-pivot columns of
            // degree < D.
            let total_cols = idx;
            let low_cols = n_deg_d..total_cols;
            let standard = 1 + low_cols.filter(|c| !reducer.has_pivot(*c)).count();
            return Ok(CodimResult::FiniteCertified {
                codimension: standard,
                certifying_degree: cap,
            });
        }
    }
    Ok(CodimResult::NotDetectedUpTo(d_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expression;

    fn ideal_from(exprs: &[&str], arena: &Arc<VariableArena>) -> IdealPresentation {
        let gens = exprs
            .iter()
            .map(|e| parse_expression(e, arena).unwrap())
            .collect();
        IdealPresentation::new(gens, MonomialOrder::GradedLex).unwrap()
    }

    #[test]
    fn groebner_already_reduced() {
        let a = VariableArena::aux_only(&["x", "y"]);
        let i = ideal_from(&["x", "y"], &a);
        let gb = groebner_basis(&i, DEFAULT_SPAIR_BUDGET).unwrap();
        // Ascending by leading monomial: grlex has x > y.
        assert_eq!(gb.len(), 2);
        assert_eq!(gb[0], parse_expression("y", &a).unwrap());
        assert_eq!(gb[1], parse_expression("x", &a).unwrap());
    }

    #[test]
    fn groebner_single_spair_reduces_to_zero() {
        // {x^2, xy}: the single S-polynomial reduces to zero by hand:
        // S = y*x^2 - x*xy = 0.
        let a = VariableArena::aux_only(&["x", "y"]);
        let i = ideal_from(&["x^2", "x*y"], &a);
        let gb = groebner_basis(&i, DEFAULT_SPAIR_BUDGET).unwrap();
        assert_eq!(gb.len(), 2);
        assert_eq!(gb[0], parse_expression("x*y", &a).unwrap());
        assert_eq!(gb[1], parse_expression("x^2", &a).unwrap());
    }

    #[test]
    fn groebner_two_buchberger_steps() {
        // {y - x^2, x^3}: leading-term ideal of the result contains y and x^3.
        let a = VariableArena::aux_only(&["x", "y"]);
        let i = ideal_from(&["y - x^2", "x^3"], &a);
        let gb = groebner_basis(&i, DEFAULT_SPAIR_BUDGET).unwrap();
        // Every input generator reduces to zero against the basis.
        for g in i.generators() {
            assert!(division_remainder(g, &gb, MonomialOrder::GradedLex).is_zero());
        }
        let has_lt = |target: &str| {
            let t = parse_expression(target, &a).unwrap();
            let te = t.leading_term(grlex_cmp).unwrap().0.to_vec();
            gb.iter().any(|g| {
                let ge = g.leading_term(grlex_cmp).unwrap().0.to_vec();
                ge == te
            })
        };
        // grlex on (x, y): leading term of y - x^2 is x^2; the basis closes up
        // with xy and y^2 staircase members.
        assert!(has_lt("x^2"));
        assert!(division_remainder(
            &parse_expression("x^3", &a).unwrap(),
            &gb,
            MonomialOrder::GradedLex
        )
        .is_zero());
        assert!(division_remainder(
            &parse_expression("x*y", &a).unwrap(),
            &gb,
            MonomialOrder::GradedLex
        )
        .is_zero());
    }

    #[test]
    fn normal_form_cases() {
        let a = VariableArena::aux_only(&["x", "y"]);
        let i = ideal_from(&["x"], &a);
        let f = parse_expression("x^2", &a).unwrap();
        assert!(normal_form(&f, &i, DEFAULT_SPAIR_BUDGET).unwrap().is_zero());
        let g = parse_expression("y", &a).unwrap();
        assert_eq!(normal_form(&g, &i, DEFAULT_SPAIR_BUDGET).unwrap(), g);
        // Scalar multiples of the generator reduce to zero.
        let c = VariableArena::complex_space(2);
        let rho = parse_expression("z2 + conj(z2) + z1*conj(z1)", &c).unwrap();
        let i = IdealPresentation::new(vec![rho.clone()], MonomialOrder::GradedLex).unwrap();
        let four_rho = rho.scale(&GaussianRational::from_int(4));
        assert!(normal_form(&four_rho, &i, DEFAULT_SPAIR_BUDGET).unwrap().is_zero());
    }

    #[test]
    fn radical_membership_cases() {
        let a = VariableArena::aux_only(&["x", "y"]);
        let i = ideal_from(&["x^2"], &a);
        let x = parse_expression("x", &a).unwrap();
        let y = parse_expression("y", &a).unwrap();
        assert!(radical_membership(&x, &i, DEFAULT_SPAIR_BUDGET).unwrap());
        assert!(!radical_membership(&y, &i, DEFAULT_SPAIR_BUDGET).unwrap());
    }

    #[test]
    fn codim_maximal_ideal() {
        let a = VariableArena::aux_only(&["x", "y"]);
        let i = ideal_from(&["x", "y"], &a);
        assert_eq!(
            finite_codimension_at_origin(&i, 12).unwrap(),
            CodimResult::FiniteCertified { codimension: 1, certifying_degree: 1 }
        );
    }

    #[test]
    fn codim_line_survives() {
        let a = VariableArena::aux_only(&["x", "y"]);
        let i = ideal_from(&["y"], &a);
        assert_eq!(
            finite_codimension_at_origin(&i, 9).unwrap(),
            CodimResult::NotDetectedUpTo(9)
        );
    }

    #[test]
    fn codim_staircase_by_hand() {
        // (x^2, y): standard monomials {1, x}, certified at D = 2.
        let a = VariableArena::aux_only(&["x", "y"]);
        let i = ideal_from(&["x^2", "y"], &a);
        assert_eq!(
            finite_codimension_at_origin(&i, 12).unwrap(),
            CodimResult::FiniteCertified { codimension: 2, certifying_degree: 2 }
        );
    }

    #[test]
    fn codim_rejects_unit_generator() {
        let a = VariableArena::aux_only(&["x"]);
        let i = ideal_from(&["x + 1"], &a);
        assert_eq!(
            finite_codimension_at_origin(&i, 3),
            Err(IdealError::GeneratorNotVanishing { index: 0 })
        );
    }

    #[test]
    fn division_quotients_reconstruct_members() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let a = VariableArena::aux_only(&["x", "y"]);
        let mut rng = StdRng::seed_from_u64(31);
        let random_poly = |rng: &mut StdRng| {
            let mut p = Polynomial::zero(&a);
            for _ in 0..4 {
                let e = vec![rng.gen_range(0..3u32), rng.gen_range(0..3u32)];
                let c = crate::num::GaussianRational::from_int(rng.gen_range(-2..=2));
                p = p.add(&Polynomial::monomial(&a, e, c));
            }
            p
        };
        for _ in 0..25 {
            let g1 = random_poly(&mut rng);
            let g2 = random_poly(&mut rng);
            if g1.is_zero() || g2.is_zero() {
                continue;
            }
            let i = IdealPresentation::new(vec![g1.clone(), g2.clone()], MonomialOrder::GradedLex)
                .unwrap();
            let gb = groebner_basis(&i, DEFAULT_SPAIR_BUDGET).unwrap();
            // A constructed member has zero normal form, and the tracked
            // quotients reconstruct it exactly.
            let member = g1.mul(&random_poly(&mut rng)).add(&g2.mul(&random_poly(&mut rng)));
            let (quotients, rem) = division_with_quotients(&member, &gb, MonomialOrder::GradedLex);
            assert!(rem.is_zero());
            let rebuilt = quotients
                .iter()
                .zip(&gb)
                .fold(Polynomial::zero(&a), |acc, (q, g)| acc.add(&q.mul(g)));
            assert_eq!(rebuilt, member);
            // Division identity holds for arbitrary inputs too.
            let f = random_poly(&mut rng);
            let (quotients, rem) = division_with_quotients(&f, &gb, MonomialOrder::GradedLex);
            let rebuilt = quotients
                .iter()
                .zip(&gb)
                .fold(rem, |acc, (q, g)| acc.add(&q.mul(g)));
            assert_eq!(rebuilt, f);
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let a = VariableArena::aux_only(&["x", "y", "u"]);
        let i = ideal_from(&["x^4 - y*u + 1", "y^3 - x*u^2", "u^2*x - y^2"], &a);
        assert_eq!(
            groebner_basis(&i, 1),
            Err(IdealError::BudgetExceeded { budget: 1 })
        );
    }
}
