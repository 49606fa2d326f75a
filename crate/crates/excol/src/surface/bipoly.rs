//! Laurent bihomogeneous forms in the coordinates x0, x1, y0, y1 of
//! P^1 x P^1, plus binary-form utilities used for fiberwise surjectivity
//! checks. Exponents may be negative internally (Cech representatives);
//! parsed input forms are honest polynomials.

use crate::field::{parse_rational, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// Exponents of x0, x1, y0, y1.
pub type Mono = [i64; 4];

#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    pub terms: BTreeMap<Mono, Scalar>,
}

impl BiPoly {
    pub fn zero() -> BiPoly {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn mono(m: Mono, c: Scalar) -> BiPoly {
        let mut p = BiPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn constant(c: Scalar) -> BiPoly {
        BiPoly::mono([0; 4], c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &BiPoly) -> BiPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            let v = terms.entry(*m).or_insert_with(Scalar::zero);
            *v = v.add(c);
        }
        terms.retain(|_, v| !v.is_zero());
        BiPoly { terms }
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn sub(&self, rhs: &BiPoly) -> BiPoly {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &Scalar) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(m, k)| (*m, k.mul(c))).collect() }
    }

    pub fn mul(&self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m = [m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3]];
                let v = out.terms.entry(m).or_insert_with(Scalar::zero);
                *v = v.add(&c1.mul(c2));
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn mul_mono(&self, m: Mono, c: &Scalar) -> BiPoly {
        self.mul(&BiPoly::mono(m, c.clone()))
    }

    /// (x-degree, y-degree) when bihomogeneous, None otherwise (or for 0).
    pub fn bidegree(&self) -> Option<(i64, i64)> {
        let mut degs = self.terms.keys().map(|m| (m[0] + m[1], m[2] + m[3]));
        let first = degs.next()?;
        if degs.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_y_only(&self) -> bool {
        self.terms.keys().all(|m| m[0] == 0 && m[1] == 0)
    }

    /// Evaluate the x-part at a point of the base P^1, leaving a y-form.
    /// Panics if a negative exponent meets a zero coordinate.
    pub fn eval_x(&self, p: &[Scalar; 2]) -> BiPoly {
        let mut out = BiPoly::zero();
        for (m, c) in &self.terms {
            let v = scalar_pow(&p[0], m[0]).mul(&scalar_pow(&p[1], m[1]));
            let t = BiPoly::mono([0, 0, m[2], m[3]], c.mul(&v));
            out = out.add(&t);
        }
        out
    }

    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let names = ["x0", "x1", "y0", "y1"];
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut vs = Vec::new();
            for (i, &k) in m.iter().enumerate() {
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

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// Exact power with negative exponents; panics on 0^negative.
pub fn scalar_pow(s: &Scalar, e: i64) -> Scalar {
    if e == 0 {
        return Scalar::one();
    }
    let (base, n) = if e > 0 {
        (s.clone(), e)
    } else {
        (s.inv().expect("negative power of zero"), -e)
    };
    let mut out = Scalar::one();
    for _ in 0..n {
        out = out.mul(&base);
    }
    out
}

/// Parse a polynomial form like `x0^2*y1 - 1/2*x1^2*y0 + 3`.
pub fn parse_form(text: &str) -> Result<BiPoly, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty form".into());
    }
    // split into signed terms at top level
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut sign = 1i64;
    let mut pending_sign = 1i64;
    for ch in s.chars() {
        match ch {
            '+' | '-' if !cur.trim().is_empty() => {
                terms.push((sign, cur.trim().to_string()));
                cur = String::new();
                sign = if ch == '-' { -1 } else { 1 };
            }
            '+' => {}
            '-' if cur.trim().is_empty() => {
                pending_sign = -pending_sign;
            }
            _ => {
                if pending_sign == -1 {
                    sign = -sign;
                    pending_sign = 1;
                }
                cur.push(ch);
            }
        }
    }
    if cur.trim().is_empty() {
        return Err("dangling operator in form".into());
    }
    terms.push((sign, cur.trim().to_string()));

    let mut out = BiPoly::zero();
    for (sgn, term) in terms {
        let mut coeff =
            if sgn < 0 { Scalar::one().neg() } else { Scalar::one() };
        let mut exps: Mono = [0; 4];
        for factor in term.split('*') {
            let f = factor.trim();
            if f.is_empty() {
                return Err(format!("empty factor in term `{term}`"));
            }
            let (name, pow) = match f.split_once('^') {
                Some((n, p)) => {
                    let k: i64 =
                        p.trim().parse().map_err(|_| format!("bad exponent `{p}`"))?;
                    if k < 0 {
                        return Err("negative exponents not allowed in input forms".into());
                    }
                    (n.trim(), k)
                }
                None => (f, 1),
            };
            let slot = match name {
                "x0" => Some(0),
                "x1" => Some(1),
                "y0" => Some(2),
                "y1" => Some(3),
                _ => None,
            };
            match slot {
                Some(i) => exps[i] += pow,
                None => {
                    let r = parse_rational(name)?;
                    coeff = coeff.mul(&Scalar::from_rat(r));
                }
            }
        }
        out = out.add(&BiPoly::mono(exps, coeff));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Binary forms in y0, y1
// ---------------------------------------------------------------------------

fn upoly_trim(p: &mut Vec<Scalar>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn upoly_rem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r: Vec<Scalar> = a.to_vec();
    upoly_trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let q = r[dr].div(lead);
        for k in 0..=db {
            let idx = dr - db + k;
            r[idx] = r[idx].sub(&q.mul(&b[k]));
        }
        upoly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn upoly_gcd(mut a: Vec<Scalar>, mut b: Vec<Scalar>) -> Vec<Scalar> {
    upoly_trim(&mut a);
    upoly_trim(&mut b);
    while !b.is_empty() {
        let r = upoly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Whether a family of y-only binary forms has a common projective zero
/// over the algebraic closure. The zero form imposes no condition.
pub fn binary_forms_have_common_zero(forms: &[BiPoly]) -> bool {
    let nonzero: Vec<&BiPoly> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return true;
    }
    for f in &nonzero {
        assert!(f.is_y_only(), "binary-form check expects y-only forms");
        assert!(f.bidegree().is_some(), "binary-form check expects homogeneous forms");
    }
    // the point [0:1] (y0 = 0): survives iff every form has zero pure-y1 term
    let at_01 = nonzero.iter().all(|f| {
        f.terms.iter().all(|(m, _)| m[2] != 0)
    });
    if at_01 {
        return true;
    }
    // finite points [1:t]: dehomogenize at y0 = 1 and take the gcd
    let mut gcd: Option<Vec<Scalar>> = None;
    for f in &nonzero {
        let deg = f.bidegree().unwrap().1 as usize;
        let mut p = vec![Scalar::zero(); deg + 1];
        for (m, c) in &f.terms {
            p[m[3] as usize] = c.clone();
        }
        gcd = Some(match gcd {
            None => p,
            Some(g) => upoly_gcd(g, p),
        });
        if gcd.as_ref().unwrap().len() == 1 {
            return false;
        }
    }
    gcd.unwrap().len() > 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(i: usize) -> BiPoly {
        let mut m = [0i64; 4];
        m[2 + i] = 1;
        BiPoly::mono(m, Scalar::one())
    }

    #[test]
    fn parse_and_arithmetic() {
        let f = parse_form("x0^2*y1 - 1/2*x1^2*y0 + 3").unwrap();
        assert_eq!(f.terms.len(), 3);
        assert!(f.bidegree().is_none());
        let g = parse_form("x0*y0 + x1*y1").unwrap();
        assert_eq!(g.bidegree(), Some((1, 1)));
        let h = g.mul(&g);
        assert_eq!(h.bidegree(), Some((2, 2)));
        assert!(parse_form("x2").is_err());
        assert!(parse_form("x0^-1").is_err());
    }

    #[test]
    fn eval_x_at_point() {
        let f = parse_form("x0*y0 + 2*x1*y1").unwrap();
        let v = f.eval_x(&[Scalar::from_i64(3), Scalar::from_i64(1)]);
        assert_eq!(v, parse_form("3*y0 + 2*y1").unwrap());
    }

    #[test]
    fn binary_common_zeros() {
        // proportional linear forms share their zero
        let f = y(0).add(&y(1));
        let g = f.scale(&Scalar::from_i64(2));
        assert!(binary_forms_have_common_zero(&[f.clone(), g]));
        // independent linear forms do not
        assert!(!binary_forms_have_common_zero(&[f.clone(), y(0)]));
        // common factor of higher-degree forms is detected
        let h1 = f.mul(&y(0));
        let h2 = f.mul(&y(1).sub(&y(0)));
        assert!(binary_forms_have_common_zero(&[h1, h2]));
        // common zero at [0:1]
        assert!(binary_forms_have_common_zero(&[y(0), y(0).mul(&y(1))]));
        // the zero family vanishes everywhere
        assert!(binary_forms_have_common_zero(&[BiPoly::zero()]));
    }
}
