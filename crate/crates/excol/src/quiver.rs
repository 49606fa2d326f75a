//! Quivers with relations on ordered vertices and their finite-dimensional
//! path algebras.
//!
//! Vertices are labeled `1..=n` and every arrow satisfies `s(a) < t(a)`, so
//! all path algebras here are finite dimensional and directed. Paths are
//! stored in traversal order (first arrow applied first) but displayed
//! right-to-left: `a2*a1` means "a1 then a2".
//!
//! The algebra is presented by a per-(i,j) normal-form basis of path
//! monomials: the two-sided ideal generated by the relations is spanned,
//! component by component, by all flanked products `u·g·v`, and the basis is
//! the complement picked by echelon reduction over the path monomials
//! ordered by length then lexicographically.

use crate::field::{parse_rational, FieldSpec, Scalar};
use crate::linalg::Mat;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug)]
pub struct Arrow {
    pub name: String,
    pub s: usize,
    pub t: usize,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    pub name: String,
    pub n: usize,
    pub arrows: Vec<Arrow>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("arrow `{name}`: {s} -> {t} violates directedness (need s < t)")]
    Directedness { name: String, s: usize, t: usize },
    #[error("vertex {0} out of range")]
    UnknownVertex(usize),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("relation terms are not parallel: {0}")]
    NonParallel(String),
    #[error("relation contains a path of length < 2: {0}")]
    ShortRelation(String),
    #[error("non-composable path expression: {0}")]
    NonComposable(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Quiver {
    pub fn validate(&self) -> Result<(), QuiverError> {
        let mut seen = std::collections::HashSet::new();
        for a in &self.arrows {
            if a.s < 1 || a.s > self.n {
                return Err(QuiverError::UnknownVertex(a.s));
            }
            if a.t < 1 || a.t > self.n {
                return Err(QuiverError::UnknownVertex(a.t));
            }
            if a.s >= a.t {
                return Err(QuiverError::Directedness { name: a.name.clone(), s: a.s, t: a.t });
            }
            if !seen.insert(a.name.clone()) {
                return Err(QuiverError::DuplicateArrow(a.name.clone()));
            }
        }
        Ok(())
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
}

/// A path, stored in traversal order: `arrows[0]` is applied first.
/// The empty path is the idempotent `e_source`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path { source: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.source, |&a| q.arrows[a].t)
    }

    /// `other` then `self` (right-to-left composition `self * other`).
    pub fn compose_after(&self, other: &Path, q: &Quiver) -> Option<Path> {
        if other.target(q) != self.source {
            return None;
        }
        let mut arrows = other.arrows.clone();
        arrows.extend(&self.arrows);
        Some(Path { source: other.source, arrows })
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", self.source)
        } else {
            self.arrows.iter().rev().map(|&a| q.arrows[a].name.clone()).collect::<Vec<_>>().join("*")
        }
    }

    fn sort_key(&self, q: &Quiver) -> (usize, Vec<String>) {
        (self.len(), self.arrows.iter().map(|&a| q.arrows[a].name.clone()).collect())
    }
}

/// A linear combination of parallel paths. Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct PathVector {
    pub source: usize,
    pub target: usize,
    pub terms: BTreeMap<Path, Scalar>,
}

impl PathVector {
    pub fn new(source: usize, target: usize) -> PathVector {
        PathVector { source, target, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, p: Path, c: Scalar) {
        let entry = self.terms.entry(p).or_insert_with(Scalar::zero);
        *entry = entry.add(&c);
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(p, c)| format!("{}*{}", c, p.display(q)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Clone, Debug, Default)]
pub struct RelationSet {
    pub generators: Vec<PathVector>,
}

impl RelationSet {
    pub fn validate(&self, q: &Quiver) -> Result<(), QuiverError> {
        for g in &self.generators {
            for (p, _) in &g.terms {
                if p.len() < 2 {
                    return Err(QuiverError::ShortRelation(g.display(q)));
                }
                if p.source != g.source || p.target(q) != g.target {
                    return Err(QuiverError::NonParallel(g.display(q)));
                }
            }
        }
        Ok(())
    }
}

/// All directed paths `i -> j`, sorted by length then lexicographically by
/// arrow names. For `i == j` this is exactly the trivial path.
pub fn enumerate_paths(q: &Quiver, i: usize, j: usize) -> Vec<Path> {
    assert!(i >= 1 && i <= q.n && j >= 1 && j <= q.n);
    let mut out = Vec::new();
    let mut stack = vec![Path::trivial(i)];
    while let Some(p) = stack.pop() {
        let at = p.target(q);
        if at == j {
            out.push(p.clone());
        }
        for (idx, a) in q.arrows.iter().enumerate() {
            if a.s == at && a.t <= j {
                let mut next = p.clone();
                next.arrows.push(idx);
                stack.push(next);
            }
        }
    }
    out.sort_by_key(|p| p.sort_key(q));
    out
}

#[derive(Clone, Debug)]
pub struct QuiverAlgebra {
    pub quiver: Quiver,
    pub relations: RelationSet,
    /// `basis[i-1][j-1]`: normal-form path monomials spanning e_j·A·e_i.
    pub basis: Vec<Vec<Vec<Path>>>,
    /// Normal form of every path, as sparse coordinates in its basis component.
    reduce: HashMap<Path, Vec<(usize, Scalar)>>,
    pub dim: usize,
    pub field: FieldSpec,
}

impl QuiverAlgebra {
    pub fn n(&self) -> usize {
        self.quiver.n
    }

    pub fn basis_at(&self, i: usize, j: usize) -> &[Path] {
        &self.basis[i - 1][j - 1]
    }

    /// Normal form of a path as coordinates in `basis(source, target)`.
    pub fn reduce_path(&self, p: &Path) -> &[(usize, Scalar)] {
        self.reduce.get(p).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn scalar(&self, s: &Scalar) -> Scalar {
        self.field.convert(s)
    }

    /// Dimension of the projective module `P_i` (all basis paths with target i).
    pub fn projective_dim(&self, i: usize) -> usize {
        (1..=self.n()).map(|j| self.basis_at(j, i).len()).sum()
    }
}

/// Build the quiver algebra `kQ/I` with a normal-form monomial basis.
pub fn build_algebra(
    quiver: Quiver,
    relations: RelationSet,
    field: FieldSpec,
) -> Result<QuiverAlgebra, QuiverError> {
    quiver.validate()?;
    relations.validate(&quiver)?;
    let n = quiver.n;
    let mut basis = vec![vec![Vec::new(); n]; n];
    let mut reduce: HashMap<Path, Vec<(usize, Scalar)>> = HashMap::new();
    let mut dim = 0;

    for i in 1..=n {
        for j in i..=n {
            let paths = enumerate_paths(&quiver, i, j);
            if paths.is_empty() {
                continue;
            }
            let col_of: HashMap<&Path, usize> =
                paths.iter().enumerate().map(|(c, p)| (p, c)).collect();
            // Span of the ideal component: every flanked product u·g·v landing in (i,j).
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            for g in &relations.generators {
                if g.source < i || g.target > j {
                    continue;
                }
                let suffixes = enumerate_paths(&quiver, i, g.source);
                let prefixes = enumerate_paths(&quiver, g.target, j);
                for v in &suffixes {
                    for u in &prefixes {
                        let mut row = vec![Scalar::zero(); paths.len()];
                        for (p, c) in &g.terms {
                            let mut arrows = v.arrows.clone();
                            arrows.extend(&p.arrows);
                            arrows.extend(&u.arrows);
                            let full = Path { source: i, arrows };
                            let col = col_of[&full];
                            row[col] = row[col].add(&field.convert(c));
                        }
                        rows.push(row);
                    }
                }
            }
            let (pivots, rref) = if rows.is_empty() {
                (Vec::new(), Mat::zero(0, paths.len()))
            } else {
                let mut m = Mat::from_rows(rows);
                let p = m.rref();
                (p, m)
            };
            let free: Vec<usize> = (0..paths.len()).filter(|c| !pivots.contains(c)).collect();
            let idx_of_free: HashMap<usize, usize> =
                free.iter().enumerate().map(|(k, &c)| (c, k)).collect();
            for (row, &pc) in pivots.iter().enumerate() {
                let mut nf = Vec::new();
                for &fc in &free {
                    let c = rref[(row, fc)].neg();
                    if !c.is_zero() {
                        nf.push((idx_of_free[&fc], c));
                    }
                }
                reduce.insert(paths[pc].clone(), nf);
            }
            for (k, &fc) in free.iter().enumerate() {
                reduce.insert(paths[fc].clone(), vec![(k, Scalar::one())]);
            }
            basis[i - 1][j - 1] = free.iter().map(|&c| paths[c].clone()).collect();
            dim += basis[i - 1][j - 1].len();
        }
    }

    Ok(QuiverAlgebra { quiver, relations, basis, reduce, dim, field })
}

/// A general algebra element: a linear combination of basis path monomials,
/// not necessarily parallel.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgElem {
    pub terms: BTreeMap<Path, Scalar>,
}

impl AlgElem {
    pub fn zero() -> AlgElem {
        AlgElem { terms: BTreeMap::new() }
    }

    pub fn monomial(p: Path) -> AlgElem {
        let mut terms = BTreeMap::new();
        terms.insert(p, Scalar::one());
        AlgElem { terms }
    }

    pub fn idempotent(v: usize) -> AlgElem {
        AlgElem::monomial(Path::trivial(v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &AlgElem) -> AlgElem {
        let mut terms = self.terms.clone();
        for (p, c) in &other.terms {
            let e = terms.entry(p.clone()).or_insert_with(Scalar::zero);
            *e = e.add(c);
        }
        terms.retain(|_, v| !v.is_zero());
        AlgElem { terms }
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(p, c)| format!("{}*{}", c, p.display(q)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Product `x · y` (apply `y` first, then `x`), returned in normal form.
pub fn multiply(alg: &QuiverAlgebra, x: &AlgElem, y: &AlgElem) -> AlgElem {
    let q = &alg.quiver;
    let mut out: BTreeMap<Path, Scalar> = BTreeMap::new();
    for (px, cx) in &x.terms {
        for (py, cy) in &y.terms {
            let Some(composed) = px.compose_after(py, q) else {
                continue;
            };
            let c = cx.mul(cy);
            let i = composed.source;
            let j = composed.target(q);
            for (bidx, coef) in alg.reduce_path(&composed) {
                let bp = alg.basis_at(i, j)[*bidx].clone();
                let e = out.entry(bp).or_insert_with(Scalar::zero);
                *e = e.add(&c.mul(coef));
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    AlgElem { terms: out }
}

// ---------------------------------------------------------------------------
// DSL parsing
// ---------------------------------------------------------------------------

fn is_name(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

struct RelTerm {
    coeff: Scalar,
    arrows_rtl: Vec<String>,
}

/// Split a linear combination into signed terms at top-level `+` / `-`.
fn split_terms(expr: &str) -> Vec<(i64, String)> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut sign = 1i64;
    for ch in expr.chars() {
        if ch == '+' || ch == '-' {
            if !cur.trim().is_empty() {
                terms.push((sign, cur.trim().to_string()));
            }
            cur = String::new();
            sign = if ch == '-' { -1 } else { 1 };
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() {
        terms.push((sign, cur.trim().to_string()));
    }
    terms
}

fn parse_rel_term(term: &str, line: usize) -> Result<RelTerm, QuiverError> {
    let toks: Vec<&str> = term.split('*').map(|t| t.trim()).collect();
    if toks.iter().any(|t| t.is_empty()) {
        return Err(QuiverError::Parse { line, msg: format!("empty factor in `{term}`") });
    }
    let (coeff, rest) = if is_name(toks[0]) {
        (Scalar::one(), &toks[..])
    } else {
        let r = parse_rational(toks[0]).map_err(|msg| QuiverError::Parse { line, msg })?;
        (Scalar::from_rat(r), &toks[1..])
    };
    if rest.is_empty() {
        return Err(QuiverError::Parse { line, msg: format!("term `{term}` has no arrows") });
    }
    for t in rest {
        if !is_name(t) {
            return Err(QuiverError::Parse { line, msg: format!("bad arrow name `{t}`") });
        }
    }
    Ok(RelTerm { coeff, arrows_rtl: rest.iter().map(|s| s.to_string()).collect() })
}

/// Parse the line-oriented quiver DSL into a validated quiver presentation.
pub fn parse_quiver(text: &str) -> Result<(Quiver, RelationSet), QuiverError> {
    let mut name = String::from("quiver");
    let mut n: Option<usize> = None;
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut raw_relations: Vec<(usize, Vec<RelTerm>)> = Vec::new();

    for (lno, raw) in text.lines().enumerate() {
        let line = lno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (kw, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match kw {
            "quiver" => {
                if rest.is_empty() {
                    return Err(QuiverError::Parse { line, msg: "missing quiver name".into() });
                }
                name = rest.to_string();
            }
            "vertices" => {
                let v: usize = rest
                    .parse()
                    .map_err(|_| QuiverError::Parse { line, msg: format!("bad vertex count `{rest}`") })?;
                if v == 0 {
                    return Err(QuiverError::Parse { line, msg: "need at least one vertex".into() });
                }
                n = Some(v);
            }
            "arrow" => {
                // arrow <name> <s> -> <t>
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let (aname, s, t) = match parts.as_slice() {
                    [a, s, "->", t] => (*a, *s, *t),
                    _ => {
                        return Err(QuiverError::Parse {
                            line,
                            msg: format!("expected `arrow <name> <s> -> <t>`, got `{rest}`"),
                        })
                    }
                };
                if !is_name(aname) {
                    return Err(QuiverError::Parse { line, msg: format!("bad arrow name `{aname}`") });
                }
                let s: usize = s
                    .parse()
                    .map_err(|_| QuiverError::Parse { line, msg: format!("bad vertex `{s}`") })?;
                let t: usize = t
                    .parse()
                    .map_err(|_| QuiverError::Parse { line, msg: format!("bad vertex `{t}`") })?;
                arrows.push(Arrow { name: aname.to_string(), s, t });
            }
            "relation" => {
                if rest.is_empty() {
                    return Err(QuiverError::Parse { line, msg: "empty relation".into() });
                }
                let mut terms = Vec::new();
                for (sign, term) in split_terms(rest) {
                    let mut t = parse_rel_term(&term, line)?;
                    if sign < 0 {
                        t.coeff = t.coeff.neg();
                    }
                    terms.push(t);
                }
                raw_relations.push((line, terms));
            }
            other => {
                return Err(QuiverError::Parse { line, msg: format!("unknown directive `{other}`") })
            }
        }
    }

    let n = n.ok_or(QuiverError::Parse { line: 0, msg: "missing `vertices` directive".into() })?;
    let quiver = Quiver { name, n, arrows };
    quiver.validate()?;

    let mut generators = Vec::new();
    for (_line, terms) in raw_relations {
        let mut pv: Option<PathVector> = None;
        for t in terms {
            // arrows are written right-to-left; traversal order is the reverse
            let mut idxs = Vec::new();
            for aname in t.arrows_rtl.iter().rev() {
                let idx = quiver
                    .arrow_index(aname)
                    .ok_or_else(|| QuiverError::UnknownArrow(aname.clone()))?;
                idxs.push(idx);
            }
            // composability along the chain
            for w in idxs.windows(2) {
                if quiver.arrows[w[0]].t != quiver.arrows[w[1]].s {
                    return Err(QuiverError::NonComposable(
                        t.arrows_rtl.join("*"),
                    ));
                }
            }
            let source = quiver.arrows[idxs[0]].s;
            let path = Path { source, arrows: idxs };
            let target = path.target(&quiver);
            if path.len() < 2 {
                return Err(QuiverError::ShortRelation(path.display(&quiver)));
            }
            match &mut pv {
                None => {
                    let mut v = PathVector::new(source, target);
                    v.add_term(path, t.coeff);
                    pv = Some(v);
                }
                Some(v) => {
                    if v.source != source || v.target != target {
                        return Err(QuiverError::NonParallel(path.display(&quiver)));
                    }
                    v.add_term(path, t.coeff);
                }
            }
        }
        if let Some(v) = pv {
            if !v.is_zero() {
                generators.push(v);
            }
        }
    }

    Ok((quiver, RelationSet { generators }))
}

pub fn parse_and_build(text: &str, field: FieldSpec) -> Result<QuiverAlgebra, QuiverError> {
    let (q, r) = parse_quiver(text)?;
    build_algebra(q, r, field)
}

/// Restriction of the algebra to the first `k` vertices: the full subquiver
/// together with the relation generators supported on it.
pub fn restrict(alg: &QuiverAlgebra, k: usize) -> QuiverAlgebra {
    assert!(k >= 1 && k <= alg.n());
    let mut arrows = Vec::new();
    let mut arrow_map = HashMap::new(); // old index -> new index
    for (idx, a) in alg.quiver.arrows.iter().enumerate() {
        if a.t <= k {
            arrow_map.insert(idx, arrows.len());
            arrows.push(a.clone());
        }
    }
    let quiver = Quiver { name: format!("{}_le{}", alg.quiver.name, k), n: k, arrows };
    let mut generators = Vec::new();
    for g in &alg.relations.generators {
        if g.target <= k {
            let mut pv = PathVector::new(g.source, g.target);
            for (p, c) in &g.terms {
                let arrows = p.arrows.iter().map(|a| arrow_map[a]).collect();
                pv.add_term(Path { source: p.source, arrows }, c.clone());
            }
            generators.push(pv);
        }
    }
    build_algebra(quiver, RelationSet { generators }, alg.field).expect("restriction is valid")
}

impl fmt::Display for QuiverAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "quiver {}", self.quiver.name)?;
        writeln!(f, "vertices {}", self.n())?;
        for a in &self.quiver.arrows {
            writeln!(f, "arrow {} {} -> {}", a.name, a.s, a.t)?;
        }
        for g in &self.relations.generators {
            writeln!(f, "relation {}", g.display(&self.quiver))?;
        }
        Ok(())
    }
}

pub const ISING_DSL: &str = "\
quiver ising
vertices 3
arrow a1 1 -> 2
arrow b1 1 -> 2
arrow a2 2 -> 3
arrow b2 2 -> 3
relation a2*b1
relation b2*a1
";

pub const BEILINSON_DSL: &str = "\
quiver beilinson
vertices 3
arrow a1 1 -> 2
arrow b1 1 -> 2
arrow c1 1 -> 2
arrow a2 2 -> 3
arrow b2 2 -> 3
arrow c2 2 -> 3
relation a2*b1 - b2*a1
relation a2*c1 - c2*a1
relation b2*c1 - c2*b1
";

#[cfg(test)]
mod tests {
    use super::*;

    fn ising() -> QuiverAlgebra {
        parse_and_build(ISING_DSL, FieldSpec::Q).unwrap()
    }

    #[test]
    fn parse_ising() {
        let (q, r) = parse_quiver(ISING_DSL).unwrap();
        assert_eq!(q.n, 3);
        assert_eq!(q.arrows.len(), 4);
        assert_eq!(r.generators.len(), 2);
    }

    #[test]
    fn parse_one_vertex() {
        let alg = parse_and_build("vertices 1\n", FieldSpec::Q).unwrap();
        assert_eq!(alg.dim, 1);
    }

    #[test]
    fn parse_rejects_backward_arrow() {
        let err = parse_quiver("vertices 2\narrow a 2 -> 1\n").unwrap_err();
        assert!(matches!(err, QuiverError::Directedness { .. }));
    }

    #[test]
    fn parse_rejects_unknown_arrow_and_short_relation() {
        let err = parse_quiver("vertices 2\narrow a 1 -> 2\nrelation a*zz\n").unwrap_err();
        assert!(matches!(err, QuiverError::UnknownArrow(_)));
        let err = parse_quiver("vertices 2\narrow a 1 -> 2\nrelation a\n").unwrap_err();
        assert!(matches!(err, QuiverError::ShortRelation(_)));
    }

    #[test]
    fn parse_rejects_non_parallel_and_non_composable() {
        let text = "vertices 3\narrow a 1 -> 2\narrow b 2 -> 3\narrow c 1 -> 3\nrelation b*a - c*a\n";
        assert!(parse_quiver(text).is_err());
        let text = "vertices 3\narrow a 1 -> 2\narrow b 1 -> 3\nrelation b*a\n";
        assert!(matches!(parse_quiver(text), Err(QuiverError::NonComposable(_))));
    }

    #[test]
    fn ising_paths_1_to_3() {
        let alg = ising();
        let paths = enumerate_paths(&alg.quiver, 1, 3);
        assert_eq!(paths.len(), 4);
        let shown: Vec<String> = paths.iter().map(|p| p.display(&alg.quiver)).collect();
        assert_eq!(shown, vec!["a2*a1", "b2*a1", "a2*b1", "b2*b1"]);
    }

    #[test]
    fn trivial_and_backward_paths() {
        let alg = ising();
        let p = enumerate_paths(&alg.quiver, 2, 2);
        assert_eq!(p, vec![Path::trivial(2)]);
        assert!(enumerate_paths(&alg.quiver, 3, 1).is_empty());
    }

    #[test]
    fn ising_dimension_nine() {
        let alg = ising();
        assert_eq!(alg.dim, 9);
        // 3 idempotents + 4 arrows + 2 surviving length-2 paths
        assert_eq!(alg.basis_at(1, 3).len(), 2);
        let names: Vec<String> =
            alg.basis_at(1, 3).iter().map(|p| p.display(&alg.quiver)).collect();
        assert_eq!(names, vec!["a2*a1", "b2*b1"]);
    }

    #[test]
    fn beilinson_dimension_fifteen() {
        let alg = parse_and_build(BEILINSON_DSL, FieldSpec::Q).unwrap();
        assert_eq!(alg.dim, 15);
        assert_eq!(alg.basis_at(1, 3).len(), 6);
    }

    #[test]
    fn single_arrow_no_relations() {
        let alg = parse_and_build("vertices 2\narrow a 1 -> 2\n", FieldSpec::Q).unwrap();
        assert_eq!(alg.dim, 3);
    }

    #[test]
    fn multiply_examples() {
        let alg = ising();
        let a2 = AlgElem::monomial(Path {
            source: 2,
            arrows: vec![alg.quiver.arrow_index("a2").unwrap()],
        });
        let b1 = AlgElem::monomial(Path {
            source: 1,
            arrows: vec![alg.quiver.arrow_index("b1").unwrap()],
        });
        let a1 = AlgElem::monomial(Path {
            source: 1,
            arrows: vec![alg.quiver.arrow_index("a1").unwrap()],
        });
        assert!(multiply(&alg, &a2, &b1).is_zero());
        let prod = multiply(&alg, &a2, &a1);
        assert_eq!(prod.terms.len(), 1);
        // idempotents
        let e1 = AlgElem::idempotent(1);
        let e2 = AlgElem::idempotent(2);
        assert_eq!(multiply(&alg, &e1, &e1), e1);
        assert!(multiply(&alg, &e1, &e2).is_zero());
    }

    #[test]
    fn multiplication_associative_on_basis() {
        let alg = ising();
        let mut monos = Vec::new();
        for i in 1..=3 {
            for j in 1..=3 {
                for p in alg.basis_at(i, j) {
                    monos.push(AlgElem::monomial(p.clone()));
                }
            }
        }
        assert_eq!(monos.len(), 9);
        for x in &monos {
            for y in &monos {
                for z in &monos {
                    let xy_z = multiply(&alg, &multiply(&alg, x, y), z);
                    let x_yz = multiply(&alg, x, &multiply(&alg, y, z));
                    assert_eq!(xy_z, x_yz);
                }
            }
        }
    }

    #[test]
    fn dim_plus_ideal_equals_path_count() {
        let alg = ising();
        let total_paths: usize = (1..=3)
            .flat_map(|i| (1..=3).map(move |j| (i, j)))
            .map(|(i, j)| enumerate_paths(&alg.quiver, i, j).len())
            .sum();
        assert_eq!(total_paths, 11); // dim kQ
        assert_eq!(alg.dim, total_paths - 2);
    }

    #[test]
    fn permuted_relations_same_dims() {
        let permuted = "\
quiver ising
vertices 3
arrow a1 1 -> 2
arrow b1 1 -> 2
arrow a2 2 -> 3
arrow b2 2 -> 3
relation b2*a1
relation a2*b1
";
        let a = ising();
        let b = parse_and_build(permuted, FieldSpec::Q).unwrap();
        assert_eq!(a.dim, b.dim);
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(a.basis_at(i, j).len(), b.basis_at(i, j).len());
            }
        }
    }

    #[test]
    fn restrict_ising_is_kronecker() {
        let alg = ising();
        let sub = restrict(&alg, 2);
        assert_eq!(sub.dim, 4);
        assert_eq!(sub.quiver.arrows.len(), 2);
        assert!(sub.relations.generators.is_empty());
    }

    #[test]
    fn collapse_to_vertices_is_legal() {
        // relations that kill everything of length >= 1 between 1 and 2
        let text = "vertices 3\narrow a 1 -> 2\narrow b 2 -> 3\nrelation b*a\n";
        let alg = parse_and_build(text, FieldSpec::Q).unwrap();
        assert_eq!(alg.dim, 5); // e1,e2,e3,a,b
    }

    #[test]
    fn fp_mode_matches_q_dims_for_ising() {
        let a = parse_and_build(ISING_DSL, FieldSpec::Q).unwrap();
        let b = parse_and_build(ISING_DSL, FieldSpec::Fp(7)).unwrap();
        assert_eq!(a.dim, b.dim);
    }
}
