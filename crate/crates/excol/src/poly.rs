//! Dense-free multivariate polynomials over exact scalars, sized for the
//! elimination and determinant work in the noncommutative-plane module:
//! few variables, modest degrees, exact arithmetic throughout.

use crate::field::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vectors are fixed-length (one entry per variable).
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub vars: usize,
    pub terms: BTreeMap<Vec<u32>, Scalar>,
}

impl Poly {
    pub fn zero(vars: usize) -> Poly {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Scalar) -> Poly {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn var(vars: usize, i: usize) -> Poly {
        assert!(i < vars);
        let mut e = vec![0; vars];
        e[i] = 1;
        let mut p = Poly::zero(vars);
        p.terms.insert(e, Scalar::one());
        p
    }

    pub fn monomial(vars: usize, exps: Vec<u32>, c: Scalar) -> Poly {
        assert_eq!(exps.len(), vars);
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        assert_eq!(self.vars, rhs.vars);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let v = terms.entry(e.clone()).or_insert_with(Scalar::zero);
            *v = v.add(c);
        }
        terms.retain(|_, v| !v.is_zero());
        Poly { vars: self.vars, terms }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.vars);
        }
        Poly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k.mul(c))).collect(),
        }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        assert_eq!(self.vars, rhs.vars);
        let mut terms: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = terms.entry(e).or_insert_with(Scalar::zero);
                *v = v.add(&c1.mul(c2));
            }
        }
        terms.retain(|_, v| !v.is_zero());
        Poly { vars: self.vars, terms }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(self.vars, Scalar::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.vars);
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&point[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitute polynomials for the variables.
    pub fn subst(&self, args: &[Poly]) -> Poly {
        assert_eq!(args.len(), self.vars);
        let vars = args[0].vars;
        let mut acc = Poly::zero(vars);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&args[i].pow(k));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    fn leading(&self) -> Option<(&Vec<u32>, &Scalar)> {
        // BTreeMap order on exponent vectors is lexicographic, which is a
        // valid monomial order for single-divisor exact division
        self.terms.iter().next_back()
    }

    /// Exact division: Some(q) with self = q * divisor, None otherwise.
    pub fn divide_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let (dlead, dcoef) = divisor.leading().unwrap();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.vars);
        while let Some((rlead, rcoef)) = rem.leading() {
            let exps: Option<Vec<u32>> =
                rlead.iter().zip(dlead).map(|(a, b)| a.checked_sub(*b)).collect();
            let Some(exps) = exps else {
                return None;
            };
            let t = Poly::monomial(self.vars, exps, rcoef.div(dcoef));
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(divisor));
        }
        Some(quot)
    }

    pub fn display(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut vs = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => vs.push(names[i].to_string()),
                    _ => vs.push(format!("{}^{}", names[i], k)),
                }
            }
            if vs.is_empty() {
                parts.push(format!("{c}"));
            } else if *c == Scalar::one() {
                parts.push(vs.join("*"));
            } else {
                parts.push(format!("{}*{}", c, vs.join("*")));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.vars).map(|i| format!("t{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.display(&refs))
    }
}

pub fn det3(m: &[[Poly; 3]; 3]) -> Poly {
    let t = |a: usize, b: usize, c: usize| m[0][a].mul(&m[1][b]).mul(&m[2][c]);
    t(0, 1, 2)
        .add(&t(1, 2, 0))
        .add(&t(2, 0, 1))
        .sub(&t(2, 1, 0))
        .sub(&t(1, 0, 2))
        .sub(&t(0, 2, 1))
}

/// All exponent vectors of total degree d in `vars` variables, in
/// deterministic order.
pub fn monomials_of_degree(vars: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; vars];
    fn rec(vars: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == vars - 1 {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(vars, i + 1, left - k, cur, out);
        }
    }
    rec(vars, 0, d, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(3, 0)
    }
    fn y() -> Poly {
        Poly::var(3, 1)
    }
    fn z() -> Poly {
        Poly::var(3, 2)
    }

    #[test]
    fn arithmetic_and_degree() {
        let p = x().mul(&y()).add(&z().pow(2));
        assert_eq!(p.degree(), Some(2));
        assert!(p.is_homogeneous());
        let q = p.add(&Poly::constant(3, Scalar::one()));
        assert!(!q.is_homogeneous());
    }

    #[test]
    fn eval_point() {
        let p = x().pow(2).add(&y().mul(&z()).scale(&Scalar::from_i64(2)));
        let v = p.eval(&[Scalar::from_i64(3), Scalar::from_i64(1), Scalar::from_i64(5)]);
        assert_eq!(v, Scalar::from_i64(19));
    }

    #[test]
    fn exact_division() {
        let f = x().add(&y());
        let g = x().sub(&y());
        let prod = f.mul(&g);
        assert_eq!(prod.divide_exact(&f).unwrap(), g);
        assert!(prod.add(&Poly::constant(3, Scalar::one())).divide_exact(&f).is_none());
    }

    #[test]
    fn determinant_of_scalar_matrix() {
        let c = |v: i64| Poly::constant(3, Scalar::from_i64(v));
        let m = [
            [c(1), c(2), c(3)],
            [c(4), c(5), c(6)],
            [c(7), c(8), c(10)],
        ];
        assert_eq!(det3(&m), c(-3));
    }

    #[test]
    fn substitution() {
        // (x + y) with x -> u^2, y -> v^2
        let f = x().add(&y());
        let u2 = Poly::var(2, 0).pow(2);
        let v2 = Poly::var(2, 1).pow(2);
        let g = f.subst(&[u2.clone(), v2.clone(), Poly::zero(2)]);
        assert_eq!(g, u2.add(&v2));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(3, 3).len(), 10);
        assert_eq!(monomials_of_degree(2, 5).len(), 6);
    }
}
