//! Acceptance suite: one test per shipped guarantee, each printing a
//! single `ACCEPTANCE n: PASS` (or `FAIL`) line. Run with `--nocapture`
//! to see the lines on success.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use incidence::binomial::{
    chain_collapse, verify_cancellation, verify_numeric, BinomialProof, BracketMonomial,
    IncidenceTag, Role,
};
use incidence::certify::{certify_proof_forms, CertifyOptions, ConstructionStep, ProofForms};
use incidence::cm::{
    ceva3d_check, ceva_check, cm_parity_check, menelaus3d_check, menelaus_check, verify_cm_proof,
    CellKind,
};
use incidence::doc::fixture_documents;
use incidence::fixtures::{all, fixture, FixtureId};
use incidence::geom::{gp_residual, join2, join3, Configuration, Coords, Dim, Scalar};
use incidence::label::{lab, labels};
use incidence::parse::parse_document;
use incidence::quad::verify_quad_proof;
use incidence::serialize::serialize_document;
use incidence::surface::validate_surface;
use incidence::translate::{
    menelaus_to_quad, quad_to_binomial, quad_to_menelaus, split_adjacent_cevas, tilings_equivalent,
    BinomialMode,
};

mod common;
use common::{certified_instance, with_derived};

/// Run one criterion body and print exactly one verdict line for it.
fn criterion<F: FnOnce() + std::panic::UnwindSafe>(n: usize, what: &str, body: F) {
    let result = catch_unwind(body);
    let verdict = if result.is_ok() { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {n}: {verdict} ({what})");
    if let Err(cause) = result {
        resume_unwind(cause);
    }
}

fn rational(rng: &mut ChaCha8Rng) -> Scalar {
    let num = rng.gen_range(-1000_i64..=1000);
    let den = rng.gen_range(1_i64..=40);
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

fn rational_point(rng: &mut ChaCha8Rng, dim: Dim) -> Coords {
    let mut v: Vec<Scalar> = (0..dim.coords() - 1).map(|_| rational(rng)).collect();
    v.push(Scalar::one());
    v
}

#[test]
fn acceptance_1_three_term_determinant_identity() {
    criterion(1, "zero residual on 1000 random integer quintuples", || {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let names = ["A", "B", "C", "D", "E"];
        for _ in 0..1000 {
            let mut config = Configuration::new(Dim::Two);
            for name in names {
                let coords: Coords = (0..3)
                    .map(|_| incidence::geom::s(rng.gen_range(-1000_i64..=1000)))
                    .collect();
                config.insert(lab(name), coords).unwrap();
            }
            let ls = labels(&names);
            let r = gp_residual(&config, &ls[0], &ls[1], &ls[2], &ls[3], &ls[4]).unwrap();
            assert!(r.is_zero(), "nonzero three-term residual");
        }
    });
}

#[test]
fn acceptance_2_ratio_product_constants() {
    criterion(2, "ratio products are exactly -1/+1 on 200 instances each", || {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tri = [lab("A"), lab("B"), lab("C")];
        let cycle = [lab("p1"), lab("p2"), lab("p3"), lab("p4")];

        // Plane Menelaus: a line cuts the triangle sides in ratios with
        // product exactly -1.
        let mut done = 0;
        let mut attempts = 0;
        while done < 200 {
            attempts += 1;
            assert!(attempts < 20_000, "too many degenerate draws");
            let mut config = Configuration::new(Dim::Two);
            for name in ["A", "B", "C", "S", "T"] {
                let p = rational_point(&mut rng, Dim::Two);
                config.insert(lab(name), p).unwrap();
            }
            let s = config.point(&lab("S")).unwrap();
            let t = config.point(&lab("T")).unwrap();
            let Ok(cutter) = join2(s, t) else { continue };
            match menelaus_check(&config, &tri, &cutter) {
                Ok(v) => {
                    assert_eq!(v, -Scalar::one());
                    done += 1;
                }
                Err(_) => continue,
            }
        }

        // Plane Ceva: cevians through a common point cut the opposite
        // sides in ratios with product exactly +1.
        let mut done = 0;
        let mut attempts = 0;
        while done < 200 {
            attempts += 1;
            assert!(attempts < 20_000, "too many degenerate draws");
            let mut config = Configuration::new(Dim::Two);
            for name in ["A", "B", "C", "O"] {
                let p = rational_point(&mut rng, Dim::Two);
                config.insert(lab(name), p).unwrap();
            }
            match ceva_check(&config, &tri, &lab("O")) {
                Ok(v) => {
                    assert_eq!(v, Scalar::one());
                    done += 1;
                }
                Err(_) => continue,
            }
        }

        // Spatial Menelaus: a plane cuts the edges of a closed spatial
        // 4-cycle in ratios with product exactly +1.
        let mut done = 0;
        let mut attempts = 0;
        while done < 200 {
            attempts += 1;
            assert!(attempts < 20_000, "too many degenerate draws");
            let mut config = Configuration::new(Dim::Three);
            for name in ["p1", "p2", "p3", "p4", "X", "Y", "Z"] {
                let p = rational_point(&mut rng, Dim::Three);
                config.insert(lab(name), p).unwrap();
            }
            let x = config.point(&lab("X")).unwrap();
            let y = config.point(&lab("Y")).unwrap();
            let z = config.point(&lab("Z")).unwrap();
            let Ok(cutter) = join3(x, y, z) else { continue };
            match menelaus3d_check(&config, &cycle, &cutter) {
                Ok(v) => {
                    assert_eq!(v, Scalar::one());
                    done += 1;
                }
                Err(_) => continue,
            }
        }

        // Spatial Ceva: planes through a center and each opposite edge cut
        // the cycle edges in ratios with product exactly +1.
        let mut done = 0;
        let mut attempts = 0;
        while done < 200 {
            attempts += 1;
            assert!(attempts < 20_000, "too many degenerate draws");
            let mut config = Configuration::new(Dim::Three);
            for name in ["p1", "p2", "p3", "p4", "a"] {
                let p = rational_point(&mut rng, Dim::Three);
                config.insert(lab(name), p).unwrap();
            }
            match ceva3d_check(&config, &cycle, &lab("a")) {
                Ok(v) => {
                    assert_eq!(v, Scalar::one());
                    done += 1;
                }
                Err(_) => continue,
            }
        }
    });
}

#[test]
fn acceptance_3_desargues_bundle() {
    criterion(3, "desargues cube, translations, and 100/100 certification", || {
        let fx = fixture(FixtureId::Desargues);
        let tiling = fx.quad.as_ref().unwrap();

        let top = validate_surface(&tiling.to_surface_faces()).unwrap();
        assert_eq!((top.vertices, top.edges, top.faces), (8, 12, 6));
        assert_eq!(top.genus, Some(0));

        let complex = quad_to_menelaus(tiling, &fx.meets).unwrap();
        assert_eq!(complex.cells.len(), 4);
        assert!(complex
            .cells
            .iter()
            .all(|c| c.kind == CellKind::Menelaus && c.edges.len() == 3));

        let proof = quad_to_binomial(tiling, &fx.meets, BinomialMode::Full).unwrap();
        assert_eq!(proof.equations.len(), 10);
        let rep = verify_cancellation(&proof).unwrap();
        assert!(rep.ok);
        assert!(rep.residue.is_empty());

        let spec = fx.spec.as_ref().unwrap();
        let forms = ProofForms {
            binomial: fx.binomial.as_ref(),
            quad: fx.quad.as_ref(),
            cm: fx.cm.as_ref(),
            derived: &[],
        };
        assert!(forms.binomial.is_some() && forms.quad.is_some() && forms.cm.is_some());
        let report = certify_proof_forms(spec, &forms, &CertifyOptions::new(100, 3)).unwrap();
        assert_eq!(report.requested, 100);
        assert_eq!(report.certified(), 100);
    });
}

#[test]
fn acceptance_4_pappus_bundle() {
    criterion(4, "pappus torus forms and 100/100 certification", || {
        let fx = fixture(FixtureId::Pappus);

        let proof = fx.binomial.as_ref().unwrap();
        assert_eq!(proof.equations.len(), 9);
        let rep = verify_cancellation(proof).unwrap();
        assert!(rep.ok);
        assert!(rep.residue.is_empty());

        let cevas = fx.cm.as_ref().unwrap();
        assert_eq!(cevas.cells.len(), 6);
        assert!(cevas.cells.iter().all(|c| c.kind == CellKind::Ceva));
        let top = validate_surface(&cevas.to_surface_faces()).unwrap();
        assert_eq!(top.genus, Some(1));

        let (menelauses, derived) = split_adjacent_cevas(cevas).unwrap();
        assert_eq!(derived.len(), 3);
        assert_eq!(menelauses.cells.len(), 12);
        assert!(menelauses
            .cells
            .iter()
            .all(|c| c.kind == CellKind::Menelaus && c.edges.len() == 3));
        let top = validate_surface(&menelauses.to_surface_faces()).unwrap();
        assert_eq!(top.genus, Some(1));
        assert!(cm_parity_check(&menelauses).ok);

        let spec = fx.spec.as_ref().unwrap();
        let mut verified = false;
        for seed in 40.. {
            assert!(seed < 140, "no instance verified the split complex");
            let Some(config) = with_derived(certified_instance(spec, seed), &derived) else {
                continue;
            };
            let Ok(rep) = verify_cm_proof(&menelauses, &config) else {
                continue;
            };
            assert!(rep.conclusion_ok);
            verified = true;
            break;
        }
        assert!(verified);

        let forms = ProofForms {
            binomial: fx.binomial.as_ref(),
            quad: fx.quad.as_ref(),
            cm: fx.cm.as_ref(),
            derived: &[],
        };
        let report = certify_proof_forms(spec, &forms, &CertifyOptions::new(100, 4)).unwrap();
        assert_eq!(report.requested, 100);
        assert_eq!(report.certified(), 100);

        let split_forms = ProofForms {
            cm: Some(&menelauses),
            derived: &derived,
            ..Default::default()
        };
        let report = certify_proof_forms(spec, &split_forms, &CertifyOptions::new(100, 5)).unwrap();
        assert_eq!(report.certified(), 100);
    });
}

#[test]
fn acceptance_5_sixteen_point_bundle() {
    criterion(5, "sixteen-point torus forms and 100/100 certification", || {
        let fx = fixture(FixtureId::SixteenPointV1);

        let proof = fx.binomial.as_ref().unwrap();
        assert_eq!(proof.equations.len(), 8);
        let rep = verify_cancellation(proof).unwrap();
        assert!(rep.ok);
        assert!(rep.residue.is_empty());

        let tiling = fx.quad.as_ref().unwrap();
        assert_eq!(tiling.faces.len(), 8);
        let top = validate_surface(&tiling.to_surface_faces()).unwrap();
        assert_eq!(top.euler, 0);

        let spec = fx.spec.as_ref().unwrap();
        for seed in [50, 150, 250] {
            let config = certified_instance(spec, seed);
            let rep = verify_quad_proof(tiling, &config).unwrap();
            assert!(rep.formal_ok);
            assert!(rep.conclusion_coherent);
            assert!(rep.fractions.iter().all(|(_, v)| v.is_one()));
        }

        let complex = fx.cm.as_ref().unwrap();
        assert_eq!(complex.cells.len(), 4);
        assert!(complex.cells.iter().all(|c| c.kind == CellKind::Menelaus));
        let top = validate_surface(&complex.to_surface_faces()).unwrap();
        assert_eq!(top.euler, 0);
        let config = certified_instance(spec, 350);
        let rep = verify_cm_proof(complex, &config).unwrap();
        assert!(rep.conclusion_ok);

        assert!(spec
            .recipe
            .iter()
            .any(|s| matches!(s, ConstructionStep::Transversal { .. })));
        let forms = ProofForms {
            binomial: fx.binomial.as_ref(),
            quad: fx.quad.as_ref(),
            cm: fx.cm.as_ref(),
            derived: &[],
        };
        let report = certify_proof_forms(spec, &forms, &CertifyOptions::new(100, 6)).unwrap();
        assert_eq!(report.requested, 100);
        assert_eq!(report.certified(), 100);
    });
}

#[test]
fn acceptance_6_toblerone_bundle() {
    criterion(6, "toblerone chain collapse, sphere forms, certification, <30s", || {
        let start = Instant::now();
        let fx = fixture(FixtureId::Toblerone);

        let proof = fx.binomial.as_ref().unwrap();
        assert_eq!(proof.equations.len(), 9);
        let base = labels(&["1", "2", "3"]);
        let other = labels(&["4", "5", "6"]);
        let pairs = [("7", "8"), ("8", "9"), ("9", "7")];
        for (block, (x, y)) in proof.equations.chunks(3).zip(pairs) {
            let collapsed = chain_collapse(block).unwrap();
            let mut bx = base.clone();
            bx.push(lab(x));
            let mut by = base.clone();
            by.push(lab(y));
            let mut ox = other.clone();
            ox.push(lab(x));
            let mut oy = other.clone();
            oy.push(lab(y));
            let want_lhs = BracketMonomial::from_raw(&[bx, oy]).unwrap();
            let want_rhs = BracketMonomial::from_raw(&[by, ox]).unwrap();
            let negate = |m: &BracketMonomial| {
                BracketMonomial::from_parts(-m.sign(), m.factors().to_vec())
            };
            let as_written = collapsed.lhs == want_lhs && collapsed.rhs == want_rhs;
            let swapped = collapsed.lhs == want_rhs && collapsed.rhs == want_lhs;
            let negated = collapsed.lhs == negate(&want_lhs) && collapsed.rhs == negate(&want_rhs);
            let negated_swapped =
                collapsed.lhs == negate(&want_rhs) && collapsed.rhs == negate(&want_lhs);
            assert!(
                as_written || swapped || negated || negated_swapped,
                "block for ({x},{y}) collapsed to {} = {}",
                collapsed.lhs,
                collapsed.rhs
            );
        }
        // The middle block is pure hypothesis; the block holding the
        // conclusion equation collapses to a conclusion.
        assert_eq!(chain_collapse(&proof.equations[3..6]).unwrap().role, Role::Hypothesis);
        assert_eq!(chain_collapse(&proof.equations[6..9]).unwrap().role, Role::Conclusion);

        let tiling = fx.quad.as_ref().unwrap();
        let top = validate_surface(&tiling.to_surface_faces()).unwrap();
        assert_eq!((top.vertices, top.edges, top.faces), (5, 6, 3));
        assert_eq!(top.euler, 2);

        let complex = fx.cm.as_ref().unwrap();
        assert_eq!(complex.cells.len(), 2);
        assert!(complex.cells.iter().all(|c| c.kind == CellKind::Menelaus));
        let top = validate_surface(&complex.to_surface_faces()).unwrap();
        assert_eq!(top.euler, 2);

        let spec = fx.spec.as_ref().unwrap();
        let config = certified_instance(spec, 0);
        let rep = verify_quad_proof(tiling, &config).unwrap();
        assert!(rep.formal_ok && rep.conclusion_coherent);
        let rep = verify_cm_proof(complex, &config).unwrap();
        assert!(rep.conclusion_ok);

        let forms = ProofForms {
            binomial: fx.binomial.as_ref(),
            quad: fx.quad.as_ref(),
            cm: fx.cm.as_ref(),
            derived: &[],
        };
        let report = certify_proof_forms(spec, &forms, &CertifyOptions::new(100, 7)).unwrap();
        assert_eq!(report.requested, 100);
        assert_eq!(report.certified(), 100);

        assert!(
            start.elapsed() < Duration::from_secs(30),
            "suite took {:?}",
            start.elapsed()
        );
    });
}

#[test]
fn acceptance_7_parity_suite() {
    criterion(7, "parity laws on every shipped complex; type flips rejected", || {
        let mut shipped = 0;
        for fx in all() {
            let Some(complex) = fx.cm.as_ref() else { continue };
            shipped += 1;
            let parity = cm_parity_check(complex);
            assert!(parity.ok, "{} fails parity", fx.id);
            assert_eq!(parity.arity_sum, 2 * parity.edge_count);
            if complex.cells.iter().all(|c| c.edges.len() == 3) {
                assert_eq!(3 * parity.faces, 2 * parity.edge_count);
            }
            assert_eq!(parity.faces % 2, 0);
            assert_eq!(parity.menelaus_cells % 2, 0);
            assert_eq!(parity.ceva_cells % 2, 0);

            let mut mutated = complex.clone();
            mutated.cells[0].kind = match mutated.cells[0].kind {
                CellKind::Menelaus => CellKind::Ceva,
                CellKind::Ceva => CellKind::Menelaus,
            };
            assert!(
                !cm_parity_check(&mutated).ok,
                "{} accepts a flipped cell type",
                fx.id
            );
        }
        assert_eq!(shipped, 5);
    });
}

#[test]
fn acceptance_8_round_trips() {
    criterion(8, "tiling round trips and byte-stable serialization", || {
        for id in [FixtureId::Desargues, FixtureId::SixteenPointV1] {
            let fx = fixture(id);
            let tiling = fx.quad.as_ref().unwrap();
            let complex = quad_to_menelaus(tiling, &fx.meets).unwrap();
            let (back, _meets) = menelaus_to_quad(&complex).unwrap();
            assert!(
                tilings_equivalent(tiling, &back).unwrap(),
                "{id} round trip is not an isomorphism"
            );
        }

        let mut documents = 0;
        for fx in all() {
            for doc in fixture_documents(&fx) {
                let text = serialize_document(&doc);
                let reparsed = parse_document(&text).unwrap();
                assert_eq!(
                    serialize_document(&reparsed),
                    text,
                    "{} does not round trip byte-identically",
                    doc.file_stem()
                );
                documents += 1;
            }
        }
        assert_eq!(documents, 17);
    });
}

#[test]
fn acceptance_9_negative_controls() {
    criterion(9, "broken proofs and perturbed instances are caught", || {
        // Removing any single hypothesis equation leaves its cancellation
        // partners unmatched: each bracket occurs exactly twice, so the
        // four brackets of the removed equation survive as residue.
        let fx = fixture(FixtureId::Pappus);
        let proof = fx.binomial.as_ref().unwrap();
        let hypothesis_indices: Vec<usize> = proof
            .equations
            .iter()
            .enumerate()
            .filter(|(_, e)| e.role == Role::Hypothesis)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(hypothesis_indices.len(), 8);
        for i in hypothesis_indices {
            let mut equations = proof.equations.clone();
            equations.remove(i);
            let pruned = BinomialProof {
                equations,
                nondeg: proof.nondeg.clone(),
            };
            let rep = verify_cancellation(&pruned).unwrap();
            assert!(!rep.ok);
            assert!(!rep.residue.is_empty());
            assert_eq!(rep.residue.len(), 4);
        }

        // Moving one free point of a certified instance breaks exactly the
        // hypotheses that mention it, and the numeric verifier names them.
        let fx = fixture(FixtureId::Desargues);
        let spec = fx.spec.as_ref().unwrap();
        let free = spec
            .recipe
            .iter()
            .find_map(|s| match s {
                ConstructionStep::Free(l) => Some(l.clone()),
                _ => None,
            })
            .unwrap();
        let mut config = certified_instance(spec, 0);
        let mut moved = config.point(&free).unwrap().clone();
        moved[0] += Scalar::one();
        config.insert(free.clone(), moved).unwrap();

        let proof = fx.binomial.as_ref().unwrap();
        let rep = verify_numeric(proof, &config).unwrap();
        assert!(!rep.hypotheses_hold);

        // A binomial equation holds exactly when its tagged incidence
        // bracket vanishes (its side condition stays nonzero here because
        // no side-condition bracket of a failing equation mentions the
        // moved point).
        let mut broken = BTreeSet::new();
        for (e, check) in proof.equations.iter().zip(&rep.checks) {
            let IncidenceTag::Collinear(a, b, c) = &e.tag else {
                panic!("untagged equation");
            };
            let bracket = config
                .bracket(&[a.clone(), b.clone(), c.clone()])
                .unwrap();
            assert_eq!(check.holds, bracket.is_zero(), "{:?}", e.name);
            if e.role == Role::Hypothesis && !bracket.is_zero() {
                broken.insert(check.name.clone().unwrap());
            }
        }
        assert!(!broken.is_empty());
        let failing: BTreeSet<String> = rep
            .checks
            .iter()
            .filter(|c| c.role == Role::Hypothesis && !c.holds)
            .map(|c| c.name.clone().unwrap())
            .collect();
        assert_eq!(failing, broken);
        let expected: BTreeSet<String> =
            ["e1", "e4", "e7"].iter().map(|s| s.to_string()).collect();
        assert_eq!(failing, expected);
    });
}
