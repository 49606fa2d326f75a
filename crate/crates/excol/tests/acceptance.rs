//! Acceptance gate: every headline quantity and property suite, one
//! pass/fail line per criterion. Run with `--nocapture` to see the lines on
//! success; they are always shown on failure.

use std::process::Command;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use excol::collections::{cartan_euler, end_algebra, euler_pairing, verdict};
use excol::field::FieldSpec;
use excol::module::{
    ext, isomorphic, min_resolution, parse_module, projective, radical, random_module,
    resolution_exact, Module,
};
use excol::ncplane::{gamma_correspondence, random_nondegenerate, standard};
use excol::quiver::{parse_and_build, restrict, QuiverAlgebra, BEILINSON_DSL, ISING_DSL};
use excol::realize::{
    alt_step_bundle, extend_decompose_round_trip, random_algebra, realize, restrict_module,
    MPolicy,
};
use excol::surface::{
    build_f_from, build_f_seeded, build_u, ext_pair, golden_phi, o, p2_f_mu, rhom_module,
    twist, SurfaceError,
};

fn ising() -> Arc<QuiverAlgebra> {
    Arc::new(parse_and_build(ISING_DSL, FieldSpec::Q).unwrap())
}

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn criterion(&mut self, name: &str, run: impl FnOnce() -> Result<(), String>) {
        match run() {
            Ok(()) => println!("PASS: {name}"),
            Err(msg) => {
                println!("FAIL: {name} — {msg}");
                self.failures.push(format!("{name}: {msg}"));
            }
        }
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

#[test]
fn acceptance() {
    let mut gate = Gate { failures: Vec::new() };

    gate.criterion(
        "1. three-vertex algebra: dim 9, all upper Hom spaces 2-dimensional, projectives strong",
        || {
            let alg = ising();
            expect("dim", alg.dim, 9)?;
            let (cartan, _) = cartan_euler(&alg);
            for i in 0..3 {
                for j in (i + 1)..3 {
                    expect(&format!("hom(P{}, P{})", i + 1, j + 1), cartan[i][j], 2)?;
                }
            }
            let projectives: Vec<Module> = (1..=3).map(|i| projective(&alg, i)).collect();
            let (_, v) = verdict(&projectives).map_err(|e| e.to_string())?;
            expect("exceptional", v.exceptional, true)?;
            expect("strong", v.strong, true)
        },
    );

    gate.criterion("2. the distinguished module is exceptional: ext(M, M) = (1, 0, 0)", || {
        let alg = ising();
        let text = "module m over ising\ndims 1 1 1\nmap a1 = [[1]]\nmap a2 = [[1]]\n";
        let m = parse_module(text, &alg).map_err(|e| e.to_string())?;
        expect("ext(M, M)", ext(&m, &m), vec![1, 0, 0])
    });

    gate.criterion(
        "3. algebra of the standard tensor: dim 15, Hom dims (3, 3, 6), relations match",
        || {
            let alg = standard().algebra(FieldSpec::Q);
            expect("dim", alg.dim, 15)?;
            let (cartan, _) = cartan_euler(&alg);
            expect("hom(P1, P2)", cartan[0][1], 3)?;
            expect("hom(P2, P3)", cartan[1][2], 3)?;
            expect("hom(P1, P3)", cartan[0][2], 6)?;
            let reference = Arc::new(parse_and_build(BEILINSON_DSL, FieldSpec::Q).unwrap());
            let (ref_cartan, _) = cartan_euler(&reference);
            expect("cartan matches the reference presentation", cartan, ref_cartan)?;
            expect("relation count", alg.relations.generators.len(), 3)?;
            // the canonical map from the presented endomorphism algebra of
            // the projectives back onto the algebra is bijective
            let projectives: Vec<Module> = (1..=3).map(|i| projective(&alg, i)).collect();
            let pres = end_algebra(&projectives).map_err(|e| e.to_string())?;
            expect("canonical map bijective", pres.canonical_bijective, true)?;
            expect("presented dim", pres.algebra.dim, 15)
        },
    );

    gate.criterion(
        "4. surface cohomology: U and F have H = (2,0,0), ext(U, F) = (2,0,0) on 50 seeds",
        || {
            expect("h(O(2,-1))", o(2, -1).h, [0, 0, 0])?;
            expect(
                "ext1(O(2,-1), O)",
                ext_pair(&o(2, -1), &o(0, 0)).map_err(|e| e.to_string())?,
                [0, 2, 0],
            )?;
            let u = build_u();
            expect("h(U)", u.h, [2, 0, 0])?;
            expect("ext(U, U)", ext_pair(&u, &u).map_err(|e| e.to_string())?, [1, 0, 0])?;
            let mut admissible = 0u32;
            let mut seed = 0u64;
            while admissible < 50 {
                let f = match build_f_seeded(seed) {
                    Ok(f) => f,
                    Err(SurfaceError::DegenerateMap) => {
                        seed += 1;
                        continue;
                    }
                    Err(e) => return Err(e.to_string()),
                };
                expect(&format!("h(F) at seed {seed}"), f.h, [2, 0, 0])?;
                expect(
                    &format!("ext(U, F) at seed {seed}"),
                    ext_pair(&u, &f).map_err(|e| e.to_string())?,
                    [2, 0, 0],
                )?;
                expect(
                    &format!("ext(O, F) at seed {seed}"),
                    ext_pair(&o(0, 0), &f).map_err(|e| e.to_string())?,
                    [2, 0, 0],
                )?;
                admissible += 1;
                seed += 1;
            }
            Ok(())
        },
    );

    gate.criterion("5. the module induced by F is the radical of P3, by explicit intertwiner", || {
        let f = build_f_from(golden_phi()).map_err(|e| e.to_string())?;
        let rep = rhom_module(&f).map_err(|e| e.to_string())?;
        // rhom_module verifies the intertwiner internally when the pencil
        // splits; re-verify here against an independently built radical
        expect("pencil splits rationally", rep.rational_split, true)?;
        let alg = ising();
        let kron = Arc::new(restrict(&alg, 2));
        let (rad, _) = radical(&projective(&alg, 3));
        let rad = restrict_module(&rad, &kron);
        // transport onto the algebra the report's module lives over (the
        // same restriction, built independently, with identical arrow order)
        let rad = Module::new(rep.module.alg.clone(), rad.dims.clone(), rad.action.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        match isomorphic(&rep.module, &rad, &mut rng) {
            Some(_) => Ok(()),
            None => Err("no intertwiner with rad P3 found".into()),
        }
    });

    gate.criterion(
        "6. realization bookkeeping: tower (5; 1,3,5; 9), threefold X, fourfold with rank-3 F",
        || {
            let alg = ising();
            let tower = realize(&alg, MPolicy::Default).map_err(|e| e.to_string())?;
            expect("total_dim", tower.total_dim, 5)?;
            expect("bundle_ranks", tower.bundle_ranks.clone(), vec![1, 3, 5])?;
            expect("rank sum = dim A", tower.bundle_ranks.iter().sum::<usize>(), alg.dim)?;
            let f = build_f_from(golden_phi()).map_err(|e| e.to_string())?;
            let rep = rhom_module(&f).map_err(|e| e.to_string())?;
            let step = alt_step_bundle(2, &rep.module, 2).map_err(|e| e.to_string())?;
            expect("dim X over the surface", 2 + step.dim_increment, 3)?;
            let p2 = p2_f_mu(&standard(), 8).map_err(|e| e.to_string())?;
            expect("rank F on the plane", p2.rank, 3)?;
            expect("dim X over the plane", 2 + (p2.rank - 1), 4)
        },
    );

    gate.criterion("7. property suites (round trip, arrow counts, Euler form, resolutions, chi, tensors)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);

        // (a) extend-compose-decompose round trip on random algebras
        for i in 0..10 {
            let alg = random_algebra(&mut rng);
            if !extend_decompose_round_trip(&alg, &mut rng) {
                return Err(format!("round trip failed on random algebra {i}"));
            }
        }

        // (b) dim Ext^1(S_i, S_j) counts the arrows j -> i
        let mut algebras: Vec<Arc<QuiverAlgebra>> = vec![
            ising(),
            Arc::new(parse_and_build(BEILINSON_DSL, FieldSpec::Q).unwrap()),
        ];
        for _ in 0..4 {
            algebras.push(random_algebra(&mut rng));
        }
        for alg in &algebras {
            let n = alg.n();
            for i in 1..=n {
                for j in 1..=n {
                    let e = ext(&excol::module::simple(alg, i), &excol::module::simple(alg, j));
                    let arrows =
                        alg.quiver.arrows.iter().filter(|a| a.s == j && a.t == i).count();
                    expect(&format!("ext1(S{i}, S{j}) on {}", alg.quiver.name), e[1], arrows)?;
                }
            }
        }

        // (c) the Euler form factors through dimension vectors
        for alg in &algebras {
            let (_, euler) = cartan_euler(alg);
            for _ in 0..20 {
                let m = random_module(alg, &mut rng);
                let n = random_module(alg, &mut rng);
                let e = ext(&m, &n);
                let alternating: i64 = e
                    .iter()
                    .enumerate()
                    .map(|(l, &d)| if l % 2 == 0 { d as i64 } else { -(d as i64) })
                    .sum();
                expect(
                    &format!("euler pairing on {}", alg.quiver.name),
                    alternating,
                    euler_pairing(&euler, &m.dims, &n.dims),
                )?;
            }
        }

        // (d) resolution exactness and gldim <= n - 1
        for alg in &algebras {
            let n = alg.n();
            for _ in 0..5 {
                let m = random_module(alg, &mut rng);
                let res = min_resolution(&m);
                if !resolution_exact(&res) {
                    return Err(format!("inexact resolution on {}", alg.quiver.name));
                }
                if res.terms.len() > n {
                    return Err(format!(
                        "resolution of length {} exceeds gldim bound {} on {}",
                        res.terms.len() - 1,
                        n - 1,
                        alg.quiver.name
                    ));
                }
            }
        }

        // (e) chi additivity on built sheaves of every shape
        let u = build_u();
        let f = build_f_from(golden_phi()).map_err(|e| e.to_string())?;
        for bs in [&u, &f, &o(2, -1), &o(-3, 2), &o(0, 0)] {
            expect(
                "chi = h0 - h1 + h2",
                bs.chi,
                bs.h[0] as i64 - bs.h[1] as i64 + bs.h[2] as i64,
            )?;
        }
        for (a, b) in [(-2, 1), (1, -1), (2, 0), (-1, -1)] {
            let t = twist(&f, a, b).map_err(|e| e.to_string())?;
            expect("chi after twisting", t.chi, t.h[0] as i64 - t.h[1] as i64 + t.h[2] as i64)?;
        }

        // (f) opposite involution and Gamma divisibility on nondegenerate tensors
        let mut certified = 0;
        while certified < 10 {
            for t in random_nondegenerate(&mut rng, 3) {
                expect("opposite involution", t.opposite().opposite().mu == t.mu, true)?;
                match gamma_correspondence(&t) {
                    Ok(cert) => {
                        expect("quotient degree", cert.quotient.degree(), Some(3))?;
                        certified += 1;
                    }
                    Err(excol::ncplane::NcError::GammaZero) => continue,
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
        Ok(())
    });

    gate.criterion(
        "8. facts outside desk scale are surfaced as paper-asserted, never computed",
        || {
            let alg = ising();
            let tower = realize(&alg, MPolicy::Default).map_err(|e| e.to_string())?;
            for step in &tower.steps {
                if !step.assumptions.iter().any(|a| a.contains("paper-asserted")) {
                    return Err(format!("step {} carries no provenance-flagged assumption", step.k));
                }
            }
            let out = Command::new(env!("CARGO_BIN_EXE_excol"))
                .args(["--json", "ising"])
                .output()
                .map_err(|e| e.to_string())?;
            let report: serde_json::Value =
                serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
            let asserted = report["paper_asserted"]
                .as_array()
                .ok_or("missing paper_asserted list")?;
            let has = |needle: &str| {
                asserted.iter().any(|v| v.as_str().is_some_and(|s| s.contains(needle)))
            };
            expect("length-8 collection flagged", has("length 8"), true)?;
            expect("smoothness flagged", has("smoothness"), true)?;
            expect("deformation flagged", has("Hilbert scheme"), true)
        },
    );

    assert!(
        gate.failures.is_empty(),
        "acceptance failures:\n{}",
        gate.failures.join("\n")
    );
}
