//! Multivariate polynomial gcd and square-freeness, via primitive
//! pseudo-remainder sequences with recursive content extraction.

use crate::poly::Polynomial;

/// Pseudo-remainder of `a` by `b` in the variable `v`:
/// `lc(b)^(da-db+1) * a = q*b + r` with `deg_v r < deg_v b`.
fn pseudo_rem(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let db = b.degree_in(v);
    debug_assert!(db > 0 || !b.is_zero());
    let bc = b.coeffs_in(v);
    let lb = bc.last().unwrap().clone();
    let xv = Polynomial::var(a.arena(), v);
    let mut r = a.clone();
    loop {
        let dr = r.degree_in(v);
        if r.is_zero() || dr < db {
            return r;
        }
        let rc = r.coeffs_in(v);
        let lr = rc.last().unwrap().clone();
        // r := lb*r - lr * x^(dr-db) * b
        r = r.mul(&lb).sub(&lr.mul(&xv.pow(dr - db)).mul(b));
    }
}

/// Content of `p` viewed as univariate in `v`: gcd of its coefficients.
fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let coeffs = p.coeffs_in(v);
    let mut g = Polynomial::zero(p.arena());
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() && !g.is_zero() {
            return Polynomial::one(p.arena());
        }
    }
    g
}

/// Greatest common divisor, normalized so the grlex leading coefficient is 1.
///
/// `gcd(0, p) = monic(p)`; `gcd` of two constants (not both zero) is 1.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.arena());
    }
    // Main variable: lowest index present in either operand.
    let n = a.arena().len();
    let v = (0..n)
        .find(|&v| a.involves(v) || b.involves(v))
        .expect("nonconstant polynomial involves a variable");

    if !a.involves(v) {
        // a is a "constant" with respect to v: gcd(a, b) = gcd(a, content_v(b)).
        return gcd(a, &content_in(b, v));
    }
    if !b.involves(v) {
        return gcd(&content_in(a, v), b);
    }

    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let cg = gcd(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    // Primitive PRS.
    loop {
        let r = pseudo_rem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        let cr = content_in(&r, v);
        p = q;
        q = r.exact_div(&cr).expect("content divides");
        if q.degree_in(v) == 0 {
            // Coprime as univariates in v.
            return cg.monic();
        }
    }
    cg.mul(&q).monic()
}

/// True iff `p` has no repeated nonconstant factor.
///
/// Over characteristic zero this holds iff `gcd(p, dp/dv_1, ..., dp/dv_m)`
/// is constant.
pub fn is_squarefree(p: &Polynomial) -> bool {
    if p.is_zero() {
        return false;
    }
    if p.is_constant() {
        return true;
    }
    let n = p.arena().len();
    let mut g = p.clone();
    for v in 0..n {
        if !p.involves(v) {
            continue;
        }
        g = gcd(&g, &p.partial(v));
        if g.is_constant() {
            return true;
        }
    }
    g.is_constant()
}

/// The square-free part of `p`: `p / gcd(p, all partials)`, monic-normalized.
pub fn squarefree_part(p: &Polynomial) -> Polynomial {
    if p.is_zero() || p.is_constant() {
        return p.clone();
    }
    let n = p.arena().len();
    let mut g = p.clone();
    for v in 0..n {
        if p.involves(v) {
            g = gcd(&g, &p.partial(v));
        }
    }
    if g.is_constant() {
        return p.clone();
    }
    p.exact_div(&g).expect("gcd divides").monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::VariableArena;
    use crate::parse::parse_expression;

    #[test]
    fn univariate_gcd() {
        let a = VariableArena::aux_only(&["x"]);
        let p = parse_expression("x^2 - 1", &a).unwrap();
        let q = parse_expression("x^2 - 2*x + 1", &a).unwrap();
        let g = gcd(&p, &q);
        let expect = parse_expression("x - 1", &a).unwrap();
        assert_eq!(g, expect);
    }

    #[test]
    fn multivariate_gcd() {
        let a = VariableArena::aux_only(&["x", "y"]);
        let f = parse_expression("(x + y)*(x - y)", &a).unwrap();
        let g = parse_expression("(x + y)^2 * y", &a).unwrap();
        let d = gcd(&f, &g);
        let expect = parse_expression("x + y", &a).unwrap();
        assert_eq!(d, expect);
        let coprime = gcd(
            &parse_expression("x + 1", &a).unwrap(),
            &parse_expression("y + 1", &a).unwrap(),
        );
        assert!(coprime.is_constant());
    }

    #[test]
    fn squarefree_detection() {
        let a = VariableArena::complex_space(2);
        let rho = parse_expression("z2 + conj(z2) + z1*conj(z1)", &a).unwrap();
        assert!(is_squarefree(&rho));
        let sq = rho.mul(&rho);
        assert!(!is_squarefree(&sq));
        assert_eq!(squarefree_part(&sq), rho.monic());
    }
}
