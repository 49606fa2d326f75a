//! Line-oriented sheaf recipe files.
//!
//! Atoms are declared first, one per line:
//!   `lb <a> <b>`             — the line bundle O(a, b)
//!   `fiber <p0> <p1> <d>`    — O_{L_p}(d) on the fiber over [p0 : p1]
//! An optional directive then combines them:
//!   `kernel <ns> <nt>`       — kernel of a map from the first ns atoms to
//!                              the next nt atoms; followed by nt lines of
//!                              ns comma-separated forms in x0, x1, y0, y1
//!   `ext <n>`                — extension of atom n+1 by the first n atoms;
//!                              followed by n lines of comma-separated
//!                              rational class coordinates
//! Without a directive the file must declare exactly one atom.
//! `#` starts a comment.

use super::bipoly::parse_form;
use super::build::{build, BuiltSheaf, Recipe};
use super::coh::Sheaf;
use super::SurfaceError;
use crate::field::{parse_rational, Scalar};

fn perr(line: usize, msg: impl Into<String>) -> SurfaceError {
    SurfaceError::Parse { line, msg: msg.into() }
}

pub fn parse_recipe(text: &str) -> Result<BuiltSheaf, SurfaceError> {
    let lines: Vec<(usize, String)> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim().to_string()))
        .filter(|(_, s)| !s.is_empty())
        .collect();

    let mut atoms: Vec<Sheaf> = Vec::new();
    let mut idx = 0;
    while idx < lines.len() {
        let (lno, line) = &lines[idx];
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "lb" => {
                if toks.len() != 3 {
                    return Err(perr(*lno, "expected `lb <a> <b>`"));
                }
                let a = toks[1].parse().map_err(|_| perr(*lno, "bad integer"))?;
                let b = toks[2].parse().map_err(|_| perr(*lno, "bad integer"))?;
                atoms.push(Sheaf::LB { a, b });
                idx += 1;
            }
            "fiber" => {
                if toks.len() != 4 {
                    return Err(perr(*lno, "expected `fiber <p0> <p1> <d>`"));
                }
                let p0 = parse_rational(toks[1]).map_err(|m| perr(*lno, m))?;
                let p1 = parse_rational(toks[2]).map_err(|m| perr(*lno, m))?;
                let d = toks[3].parse().map_err(|_| perr(*lno, "bad integer"))?;
                let p = [Scalar::from_rat(p0), Scalar::from_rat(p1)];
                if p[0].is_zero() && p[1].is_zero() {
                    return Err(perr(*lno, "fiber point must be nonzero"));
                }
                atoms.push(Sheaf::Fiber { p, d });
                idx += 1;
            }
            "kernel" => {
                if toks.len() != 3 {
                    return Err(perr(*lno, "expected `kernel <ns> <nt>`"));
                }
                let ns: usize = toks[1].parse().map_err(|_| perr(*lno, "bad count"))?;
                let nt: usize = toks[2].parse().map_err(|_| perr(*lno, "bad count"))?;
                if atoms.len() != ns + nt || ns == 0 || nt == 0 {
                    return Err(perr(
                        *lno,
                        format!("kernel needs {} atoms declared, found {}", ns + nt, atoms.len()),
                    ));
                }
                let rows = take_rows(&lines, idx + 1, nt)?;
                let mut phi = Vec::new();
                for (rlno, row) in rows {
                    let entries: Result<Vec<_>, _> = row
                        .split(',')
                        .map(|e| parse_form(e).map_err(|m| perr(rlno, m)))
                        .collect();
                    let entries = entries?;
                    if entries.len() != ns {
                        return Err(perr(rlno, format!("expected {ns} entries")));
                    }
                    phi.push(entries);
                }
                expect_end(&lines, idx + 1 + nt)?;
                let sources = atoms[..ns].to_vec();
                let targets = atoms[ns..].to_vec();
                return build(Recipe::Kernel { sources, targets, phi });
            }
            "ext" => {
                if toks.len() != 2 {
                    return Err(perr(*lno, "expected `ext <n>`"));
                }
                let n: usize = toks[1].parse().map_err(|_| perr(*lno, "bad count"))?;
                if atoms.len() != n + 1 || n == 0 {
                    return Err(perr(
                        *lno,
                        format!("ext needs {} atoms declared, found {}", n + 1, atoms.len()),
                    ));
                }
                let rows = take_rows(&lines, idx + 1, n)?;
                let mut class = Vec::new();
                for (rlno, row) in rows {
                    let coords: Result<Vec<_>, _> = row
                        .split(',')
                        .map(|e| {
                            parse_rational(e.trim())
                                .map(Scalar::from_rat)
                                .map_err(|m| perr(rlno, m))
                        })
                        .collect();
                    class.push(coords?);
                }
                expect_end(&lines, idx + 1 + n)?;
                let subs = atoms[..n].to_vec();
                let quot = atoms[n].clone();
                return build(Recipe::Extension { subs, quot, class });
            }
            other => return Err(perr(*lno, format!("unknown directive `{other}`"))),
        }
    }
    if atoms.len() != 1 {
        return Err(perr(0, format!("expected exactly one atom, found {}", atoms.len())));
    }
    build(Recipe::Atom(atoms.pop().unwrap()))
}

fn take_rows(
    lines: &[(usize, String)],
    from: usize,
    count: usize,
) -> Result<Vec<(usize, String)>, SurfaceError> {
    if lines.len() < from + count {
        return Err(perr(
            lines.last().map_or(0, |(l, _)| *l),
            format!("expected {count} matrix rows"),
        ));
    }
    Ok(lines[from..from + count].to_vec())
}

fn expect_end(lines: &[(usize, String)], from: usize) -> Result<(), SurfaceError> {
    if let Some((lno, _)) = lines.get(from) {
        return Err(perr(*lno, "trailing content after recipe"));
    }
    Ok(())
}
