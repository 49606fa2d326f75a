//! Closed-form monomial cohomology on P^1 x P^1: line bundles O(a, b) and
//! degree-d sheaves on fibers of the first projection, with induced maps
//! computed by monomial multiplication and projection to the target basis.

use super::bipoly::{scalar_pow, BiPoly, Mono};
use super::SurfaceError;
use crate::field::Scalar;
use crate::linalg::Mat;
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq)]
pub enum Sheaf {
    /// O(a, b).
    LB { a: i64, b: i64 },
    /// O_{L_p}(d) on the fiber of the first projection over p = [p0 : p1].
    Fiber { p: [Scalar; 2], d: i64 },
}

fn pos(x: i64) -> usize {
    x.max(0) as usize
}

/// Exponent pairs (e0, e1) with e0 + e1 = d and both >= 0, ascending in e0.
fn nonneg_pairs(d: i64) -> Vec<(i64, i64)> {
    (0..=d.max(-1)).map(|e0| (e0, d - e0)).filter(|_| d >= 0).collect()
}

/// Exponent pairs with e0 + e1 = d and both <= -1, ascending in e0.
fn neg_pairs(d: i64) -> Vec<(i64, i64)> {
    if d > -2 {
        return Vec::new();
    }
    ((d + 1)..=-1).map(|e0| (e0, d - e0)).collect()
}

impl Sheaf {
    pub fn rank(&self) -> i64 {
        match self {
            Sheaf::LB { .. } => 1,
            Sheaf::Fiber { .. } => 0,
        }
    }

    pub fn chi(&self) -> i64 {
        match self {
            Sheaf::LB { a, b } => (a + 1) * (b + 1),
            Sheaf::Fiber { d, .. } => d + 1,
        }
    }

    pub fn h(&self) -> [usize; 3] {
        match self {
            Sheaf::LB { a, b } => [
                pos(a + 1) * pos(b + 1),
                pos(a + 1) * pos(-b - 1) + pos(-a - 1) * pos(b + 1),
                pos(-a - 1) * pos(-b - 1),
            ],
            Sheaf::Fiber { d, .. } => [pos(d + 1), pos(-d - 1), 0],
        }
    }

    /// Monomial basis of H^j, in a fixed deterministic order. Fiber-sheaf
    /// monomials carry only y-exponents.
    pub fn basis(&self, j: usize) -> Vec<Mono> {
        match self {
            Sheaf::LB { a, b } => {
                let x0 = nonneg_pairs(*a);
                let x1 = neg_pairs(*a);
                let y0 = nonneg_pairs(*b);
                let y1 = neg_pairs(*b);
                let prod = |xs: &[(i64, i64)], ys: &[(i64, i64)]| -> Vec<Mono> {
                    let mut out = Vec::new();
                    for &(e0, e1) in xs {
                        for &(f0, f1) in ys {
                            out.push([e0, e1, f0, f1]);
                        }
                    }
                    out
                };
                match j {
                    0 => prod(&x0, &y0),
                    1 => {
                        let mut v = prod(&x0, &y1);
                        v.extend(prod(&x1, &y0));
                        v
                    }
                    2 => prod(&x1, &y1),
                    _ => Vec::new(),
                }
            }
            Sheaf::Fiber { d, .. } => {
                let pairs = match j {
                    0 => nonneg_pairs(*d),
                    1 => neg_pairs(*d),
                    _ => Vec::new(),
                };
                pairs.into_iter().map(|(f0, f1)| [0, 0, f0, f1]).collect()
            }
        }
    }

    pub fn twist(&self, a: i64, b: i64) -> Sheaf {
        match self {
            Sheaf::LB { a: a0, b: b0 } => Sheaf::LB { a: a0 + a, b: b0 + b },
            // restriction of O(a, b) to a fiber of the first projection
            // contributes only the second degree
            Sheaf::Fiber { p, d } => Sheaf::Fiber { p: p.clone(), d: d + b },
        }
    }
}

/// Basis of H^j of a direct sum, as (summand index, monomial) pairs.
pub fn sum_basis(atoms: &[Sheaf], j: usize) -> Vec<(usize, Mono)> {
    let mut out = Vec::new();
    for (s, atom) in atoms.iter().enumerate() {
        for m in atom.basis(j) {
            out.push((s, m));
        }
    }
    out
}

/// Validate that a form matrix has the right bidegrees for a map
/// (+) sources -> (+) targets. Zero entries are always admissible; maps out
/// of fiber sheaves must be zero.
pub fn validate_map(
    sources: &[Sheaf],
    targets: &[Sheaf],
    phi: &[Vec<BiPoly>],
) -> Result<(), SurfaceError> {
    if phi.len() != targets.len() || phi.iter().any(|r| r.len() != sources.len()) {
        return Err(SurfaceError::DegreeMismatch(format!(
            "matrix shape {}x{} does not match {} targets x {} sources",
            phi.len(),
            phi.first().map_or(0, |r| r.len()),
            targets.len(),
            sources.len()
        )));
    }
    for (r, tgt) in targets.iter().enumerate() {
        for (c, src) in sources.iter().enumerate() {
            let e = &phi[r][c];
            if e.is_zero() {
                continue;
            }
            let bad = |msg: String| Err(SurfaceError::DegreeMismatch(msg));
            match (src, tgt) {
                (Sheaf::LB { a, b }, Sheaf::LB { a: a2, b: b2 }) => {
                    if e.bidegree() != Some((a2 - a, b2 - b)) {
                        return bad(format!(
                            "entry ({r},{c}) must have bidegree ({},{})",
                            a2 - a,
                            b2 - b
                        ));
                    }
                }
                (Sheaf::LB { b, .. }, Sheaf::Fiber { d, .. }) => {
                    if !e.is_y_only() || e.bidegree() != Some((0, d - b)) {
                        return bad(format!(
                            "entry ({r},{c}) must be a y-form of degree {}",
                            d - b
                        ));
                    }
                }
                (Sheaf::Fiber { .. }, _) => {
                    return bad(format!("entry ({r},{c}) maps out of a fiber sheaf"));
                }
            }
        }
    }
    Ok(())
}

/// Apply one matrix entry to a source monomial, producing target-basis terms
/// (before projection). `src`/`tgt` fix the evaluation behavior.
fn apply_entry(src: &Sheaf, tgt: &Sheaf, entry: &BiPoly, m: Mono) -> Vec<(Mono, Scalar)> {
    match tgt {
        Sheaf::LB { .. } => entry
            .terms
            .iter()
            .map(|(f, c)| ([m[0] + f[0], m[1] + f[1], m[2] + f[2], m[3] + f[3]], c.clone()))
            .collect(),
        Sheaf::Fiber { p, .. } => {
            let _ = src;
            // classes with a negative x-exponent restrict to zero on fibers
            if m[0] < 0 || m[1] < 0 {
                return Vec::new();
            }
            let v = scalar_pow(&p[0], m[0]).mul(&scalar_pow(&p[1], m[1]));
            if v.is_zero() {
                return Vec::new();
            }
            entry
                .terms
                .iter()
                .map(|(f, c)| ([0, 0, m[2] + f[2], m[3] + f[3]], c.mul(&v)))
                .collect()
        }
    }
}

/// The induced matrix on H^j, rows over the target sum basis, columns over
/// the source sum basis. Monomials outside the target basis project to zero.
pub fn coh_map(
    j: usize,
    sources: &[Sheaf],
    targets: &[Sheaf],
    phi: &[Vec<BiPoly>],
) -> Result<Mat, SurfaceError> {
    validate_map(sources, targets, phi)?;
    let src_basis = sum_basis(sources, j);
    let tgt_basis = sum_basis(targets, j);
    let index: HashMap<(usize, Mono), usize> =
        tgt_basis.iter().enumerate().map(|(r, &(s, m))| ((s, m), r)).collect();
    let mut out = Mat::zero(tgt_basis.len(), src_basis.len());
    for (col, &(s, m)) in src_basis.iter().enumerate() {
        for (t, tgt) in targets.iter().enumerate() {
            let entry = &phi[t][s];
            if entry.is_zero() {
                continue;
            }
            for (m2, c) in apply_entry(&sources[s], tgt, entry, m) {
                if let Some(&row) = index.get(&(t, m2)) {
                    out[(row, col)] = out[(row, col)].add(&c);
                }
            }
        }
    }
    Ok(out)
}

/// Cup product with a fixed Laurent representative: multiply each domain
/// monomial by every term of `rep` and project to the target basis.
pub fn cup_matrix(domain: &[Mono], rep: &BiPoly, target: &[Mono]) -> Mat {
    let index: HashMap<Mono, usize> =
        target.iter().enumerate().map(|(r, &m)| (m, r)).collect();
    let mut out = Mat::zero(target.len(), domain.len());
    for (col, m) in domain.iter().enumerate() {
        for (f, c) in &rep.terms {
            let m2 = [m[0] + f[0], m[1] + f[1], m[2] + f[2], m[3] + f[3]];
            if let Some(&row) = index.get(&m2) {
                out[(row, col)] = out[(row, col)].add(c);
            }
        }
    }
    out
}
