//! Exceptionality and strongness verdicts for ordered collections of
//! modules, presentation of the endomorphism algebra of a strong
//! exceptional collection as a quiver with relations, and the Cartan and
//! Euler forms of an algebra.

use crate::linalg::Mat;
use crate::module::{ext, hom, simple, Module, ModuleMap};
use crate::quiver::{
    build_algebra, enumerate_paths, Arrow, Path, PathVector, Quiver, QuiverAlgebra, RelationSet,
};
use crate::field::Scalar;
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum CollectionError {
    #[error("collection mixes modules over different algebras")]
    MixedAlgebras,
    #[error("collection is empty")]
    Empty,
    #[error("collection contains a zero module at position {0}")]
    ZeroMember(usize),
    #[error("collection is not exceptional: {0:?}")]
    NotExceptional(Vec<Witness>),
    #[error("collection is not strong: {0:?}")]
    NotStrong(Vec<Witness>),
}

/// A violated vanishing condition: dim Ext^l(M_i, M_j) = dim, nonzero where
/// the definition demands zero. Indices are 1-based positions in the
/// collection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub l: usize,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct ExtTable {
    pub k: usize,
    /// entries[i][j] = ext(M_{i+1}, M_{j+1}), a full length-n vector.
    pub entries: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub exceptional: bool,
    pub strong: bool,
    pub witnesses: Vec<Witness>,
}

pub fn ext_table(collection: &[Module]) -> Result<ExtTable, CollectionError> {
    if collection.is_empty() {
        return Err(CollectionError::Empty);
    }
    for (idx, m) in collection.iter().enumerate() {
        if !m.same_algebra(&collection[0]) {
            return Err(CollectionError::MixedAlgebras);
        }
        if m.is_zero() {
            return Err(CollectionError::ZeroMember(idx + 1));
        }
    }
    let k = collection.len();
    let entries = collection
        .iter()
        .map(|mi| collection.iter().map(|mj| ext(mi, mj)).collect())
        .collect();
    Ok(ExtTable { k, entries })
}

/// Exceptional: each End is one-dimensional, self-Ext^{>0} vanish, and all
/// backward Ext (i > j) vanish in every degree. Strong: in addition, every
/// forward Ext^{>0} vanishes.
pub fn verdict_of(table: &ExtTable) -> Verdict {
    let mut exc_witnesses = Vec::new();
    let mut strong_witnesses = Vec::new();
    for i in 0..table.k {
        for j in 0..table.k {
            let e = &table.entries[i][j];
            if i == j {
                if e[0] != 1 {
                    exc_witnesses.push(Witness { i: i + 1, j: j + 1, l: 0, dim: e[0] });
                }
                for (l, &d) in e.iter().enumerate().skip(1) {
                    if d != 0 {
                        exc_witnesses.push(Witness { i: i + 1, j: j + 1, l, dim: d });
                    }
                }
            } else if i > j {
                for (l, &d) in e.iter().enumerate() {
                    if d != 0 {
                        exc_witnesses.push(Witness { i: i + 1, j: j + 1, l, dim: d });
                    }
                }
            } else {
                for (l, &d) in e.iter().enumerate().skip(1) {
                    if d != 0 {
                        strong_witnesses.push(Witness { i: i + 1, j: j + 1, l, dim: d });
                    }
                }
            }
        }
    }
    let exceptional = exc_witnesses.is_empty();
    let strong = exceptional && strong_witnesses.is_empty();
    let mut witnesses = exc_witnesses;
    witnesses.extend(strong_witnesses);
    Verdict { exceptional, strong, witnesses }
}

pub fn verdict(collection: &[Module]) -> Result<(ExtTable, Verdict), CollectionError> {
    let table = ext_table(collection)?;
    let v = verdict_of(&table);
    Ok((table, v))
}

/// Presentation of End(+M_i) of a strong exceptional collection as a quiver
/// with relations, plus a bijectivity certificate for the canonical map from
/// the presented algebra.
#[derive(Clone, Debug)]
pub struct EndPresentation {
    pub algebra: QuiverAlgebra,
    /// The module map realizing each arrow, in quiver arrow order.
    pub arrow_maps: Vec<ModuleMap>,
    /// dim of the presented algebra, equal to the total Hom dimension.
    pub hom_dim_total: usize,
    /// The canonical evaluation map is injective with matching dimension.
    pub canonical_bijective: bool,
}

pub fn end_algebra(collection: &[Module]) -> Result<EndPresentation, CollectionError> {
    let (table, v) = verdict(collection)?;
    if !v.exceptional {
        return Err(CollectionError::NotExceptional(v.witnesses));
    }
    if !v.strong {
        return Err(CollectionError::NotStrong(v.witnesses));
    }
    let k = table.k;
    let field = collection[0].alg.field;

    // Hom bases for every ordered pair i < j
    let mut hom_bases: Vec<Vec<Vec<ModuleMap>>> = vec![vec![Vec::new(); k]; k];
    let mut hom_dim_total = k; // identities
    for i in 0..k {
        for j in (i + 1)..k {
            hom_bases[i][j] = hom(&collection[i], &collection[j]);
            hom_dim_total += hom_bases[i][j].len();
        }
    }

    // Arrows i -> j: a complement of the composite span inside Hom(M_i, M_j).
    let mut arrows = Vec::new();
    let mut arrow_maps = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            if hom_bases[i][j].is_empty() {
                continue;
            }
            let flat_len = hom_bases[i][j][0].flatten().len();
            let mut composite_cols: Vec<Vec<Scalar>> = Vec::new();
            for mid in (i + 1)..j {
                for f in &hom_bases[i][mid] {
                    for g in &hom_bases[mid][j] {
                        composite_cols.push(g.compose(f).flatten());
                    }
                }
            }
            let ncomp = composite_cols.len();
            let mut cols = composite_cols;
            cols.extend(hom_bases[i][j].iter().map(|f| f.flatten()));
            let mat = Mat::from_rows(cols).transpose();
            assert_eq!(mat.rows, flat_len);
            let chosen = mat.independent_cols();
            for (r, &c) in chosen.iter().filter(|&&c| c >= ncomp).enumerate() {
                arrows.push(Arrow {
                    name: format!("a{}_{}_{}", i + 1, j + 1, r + 1),
                    s: i + 1,
                    t: j + 1,
                });
                arrow_maps.push(hom_bases[i][j][c - ncomp].clone());
            }
        }
    }

    let quiver = Quiver { name: "end".into(), n: k, arrows };

    // Relations: per (i, j), the kernel of path evaluation in Hom(M_i, M_j).
    // Arrows are independent modulo composites, so kernel vectors are
    // supported on paths of length >= 2.
    let mut generators = Vec::new();
    for i in 1..=k {
        for j in (i + 1)..=k {
            let paths: Vec<Path> = enumerate_paths(&quiver, i, j)
                .into_iter()
                .filter(|p| !p.is_empty())
                .collect();
            if paths.is_empty() {
                continue;
            }
            let cols: Vec<Vec<Scalar>> = paths
                .iter()
                .map(|p| eval_path(p, &arrow_maps, collection, i).flatten())
                .collect();
            let mat = Mat::from_rows(cols).transpose();
            let ker = mat.kernel();
            for c in 0..ker.cols {
                let mut pv = PathVector::new(i, j);
                for (row, p) in paths.iter().enumerate() {
                    let coef = ker[(row, c)].clone();
                    if !coef.is_zero() {
                        assert!(p.len() >= 2, "arrow appeared in an evaluation relation");
                        pv.add_term(p.clone(), coef);
                    }
                }
                if !pv.is_zero() {
                    generators.push(pv);
                }
            }
        }
    }

    let algebra = build_algebra(quiver, RelationSet { generators }, field)
        .expect("end presentation is a valid quiver algebra");

    // Certificate: evaluate every basis path; injectivity per (i,j) plus the
    // dimension identity makes the canonical map bijective.
    let mut canonical_bijective = algebra.dim == hom_dim_total;
    if canonical_bijective {
        'outer: for i in 1..=k {
            for j in (i + 1)..=k {
                let basis = algebra.basis_at(i, j);
                if basis.is_empty() {
                    continue;
                }
                let cols: Vec<Vec<Scalar>> = basis
                    .iter()
                    .map(|p| eval_path(p, &arrow_maps, collection, i).flatten())
                    .collect();
                let rank = Mat::from_rows(cols).rank();
                if rank != basis.len() || basis.len() != hom_bases[i - 1][j - 1].len() {
                    canonical_bijective = false;
                    break 'outer;
                }
            }
        }
    }

    Ok(EndPresentation { algebra, arrow_maps, hom_dim_total, canonical_bijective })
}

/// Evaluate a path of the end-presentation quiver on the collection: compose
/// the arrow maps in traversal order.
fn eval_path(p: &Path, arrow_maps: &[ModuleMap], collection: &[Module], i: usize) -> ModuleMap {
    let mut f = ModuleMap::identity(&collection[i - 1]);
    for &a in &p.arrows {
        f = arrow_maps[a].compose(&f);
    }
    f
}

/// Cartan matrix C_{ij} = dim hom(P_i, P_j) and Euler matrix
/// E_{ij} = sum_l (-1)^l dim Ext^l(S_i, S_j).
pub fn cartan_euler(alg: &Arc<QuiverAlgebra>) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let n = alg.n();
    let cartan: Vec<Vec<i64>> = (1..=n)
        .map(|i| (1..=n).map(|j| alg.basis_at(i, j).len() as i64).collect())
        .collect();
    let simples: Vec<Module> = (1..=n).map(|i| simple(alg, i)).collect();
    let euler: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    ext(&simples[i], &simples[j])
                        .iter()
                        .enumerate()
                        .map(|(l, &d)| if l % 2 == 0 { d as i64 } else { -(d as i64) })
                        .sum()
                })
                .collect()
        })
        .collect();
    (cartan, euler)
}

/// Euler characteristic of (M, N) from dimension vectors and the Euler matrix.
pub fn euler_pairing(euler: &[Vec<i64>], dm: &[usize], dn: &[usize]) -> i64 {
    let mut acc = 0i64;
    for (i, &di) in dm.iter().enumerate() {
        for (j, &dj) in dn.iter().enumerate() {
            acc += di as i64 * euler[i][j] * dj as i64;
        }
    }
    acc
}
