//! Cross-checks of the constructions against independent recomputations.

mod common;

use std::collections::BTreeMap;

use pathalg::algebra::ideal_by_padding;
use pathalg::dual::{pairing, quadratic_dual, same_relation_span};
use pathalg::fixtures;
use pathalg::linalg::{int, kernel, to_dense, Matrix, Scalar};
use pathalg::preproj::{fstar_oracle, koszul_complex_maps, preproj_presentation, relation_rank};
use pathalg::resolution::{finite_bound, koszul_witness, minimal_resolution};
use pathalg::trivext::{returning_arrow_quiver, trivext_relations, TrivExtAlgebra, TwistSpec};
use pathalg::verify::{theorem_data, verify_main_theorem, verify_orthogonality};
use pathalg::{GradedBasis, Path, Presentation, Quiver, RelationElement};

fn corpus() -> Vec<(&'static str, Presentation)> {
    vec![
        ("a3", fixtures::a_rad_square_zero(3)),
        ("a4", fixtures::a_rad_square_zero(4)),
        ("a5", fixtures::a_rad_square_zero(5)),
        ("a6", fixtures::a_rad_square_zero(6)),
        ("beilinson", fixtures::beilinson()),
        ("exterior3", fixtures::exterior3()),
        ("kronecker", fixtures::kronecker()),
        ("a2", fixtures::a_path_algebra(2)),
        ("a3 free", fixtures::a_path_algebra(3)),
    ]
}

fn basis(p: &Presentation) -> GradedBasis {
    GradedBasis::finite(p, finite_bound(p)).unwrap()
}

fn rel(q: &Quiver, terms: &[(&[&str], i64)]) -> RelationElement {
    RelationElement::new(terms.iter().map(|(names, c)| (q.path(names).unwrap(), int(*c)))).unwrap()
}

fn spans_equal(q: &Quiver, a: Vec<RelationElement>, b: Vec<RelationElement>) -> bool {
    let pa = Presentation::new(q.clone(), a).unwrap();
    let pb = Presentation::new(q.clone(), b).unwrap();
    same_relation_span(&pa, &pb).unwrap()
}

#[test]
fn type_a_three_relations_by_hand() {
    let gb = basis(&fixtures::a_rad_square_zero(3));
    let data = theorem_data(&gb, 1).unwrap();
    let q = &data.raq.quiver;
    let star = vec![
        rel(q, &[(&["α", "ret:α"], 1)]),
        rel(q, &[(&["ret:α", "α"], 1), (&["β", "ret:β"], -1)]),
        rel(q, &[(&["ret:β", "β"], 1)]),
    ];
    let nu = vec![
        rel(q, &[(&["α", "β"], 1)]),
        rel(q, &[(&["ret:β", "ret:α"], 1)]),
        rel(q, &[(&["ret:α", "α"], 1), (&["β", "ret:β"], 1)]),
    ];
    let got_star = data.rho_star();
    let got_nu = data.rho_nu();
    assert_eq!(got_star.len(), 3);
    assert_eq!(got_nu.len(), 3);
    for e in &star {
        assert!(got_star.iter().any(|g| g.proportional_to(e)), "{} missing", e.render(q));
    }
    for e in &nu {
        assert!(got_nu.iter().any(|g| g.proportional_to(e)), "{} missing", e.render(q));
    }
}

#[test]
fn blockwise_dimensions_add_up_on_type_a() {
    for m in 3..=6 {
        let gb = basis(&fixtures::a_rad_square_zero(m));
        let data = theorem_data(&gb, 1).unwrap();
        for (_, _, paths, a, b) in data.block_spans() {
            assert_eq!(a.dim() + b.dim(), paths, "A{m}");
        }
    }
}

#[test]
fn beilinson_worked_coefficients() {
    let p = fixtures::beilinson();
    let gb = basis(&p);
    assert_eq!(gb.dims(), vec![3, 4, 1, 0]);
    assert_eq!(gb.homogeneity_degree(), Some(2));

    let q = p.quiver();
    let gamma = quadratic_dual(&p).unwrap();
    assert!(spans_equal(q, gamma.relations().to_vec(), vec![rel(q, &[(&["a0", "b1"], 1), (&["b0", "a1"], -1)])]));

    let pp = preproj_presentation(&gb, 2).unwrap();
    let qt = &pp.raq.quiver;
    let beta = pp.raq.returning_arrows().next().unwrap();
    let beta = qt.arrow(beta).name.clone();
    let b = beta.as_str();
    let expected = vec![
        rel(qt, &[(&["b1", b], 1)]),
        rel(qt, &[(&["a1", b], 1)]),
        rel(qt, &[(&[b, "b0"], 1)]),
        rel(qt, &[(&[b, "a0"], 1)]),
    ];
    assert!(spans_equal(qt, pp.rho_m_perp(), expected));

    let tr = trivext_relations(&gb, 2, &TwistSpec::nu(q, 2)).unwrap();
    assert!(tr.rho_sigma0.is_empty());
}

#[test]
fn zeta_equals_koszul_complex_oracle_on_corpus() {
    for (name, p) in corpus() {
        let gb = basis(&p);
        let n = gb.homogeneity_degree().unwrap();
        let pp = preproj_presentation(&gb, n).unwrap();
        let complex = koszul_complex_maps(&gb, n).unwrap();
        assert_eq!(pp.zeta.len(), gb.dim(n - 1), "{name}");
        for (q, z) in &pp.zeta {
            let o = fstar_oracle(&complex, &pp.raq, q).expect("oracle is nonzero");
            assert_eq!(&o, z, "{name}: {}", p.quiver().render(q));
        }
    }
}

#[test]
fn zeta_family_rank_is_dim_lower_degree() {
    for (name, p) in corpus() {
        let gb = basis(&p);
        let n = gb.homogeneity_degree().unwrap();
        let pp = preproj_presentation(&gb, n).unwrap();
        let rank = relation_rank(&pp.raq.quiver, &pp.rho_m_perp());
        assert_eq!(rank, gb.dim(n - 1), "{name}");
        assert_eq!(rank, pp.zeta.len(), "{name}: family is independent");
    }
}

#[test]
fn orthogonality_and_sign_perturbed_control() {
    let gb = basis(&fixtures::a_rad_square_zero(3));
    let data = theorem_data(&gb, 1).unwrap();
    let zetas = data.preproj.rho_m_perp();
    let lhs = &data.trivext.rho_sigma0;
    assert!(!lhs.is_empty());
    for x in lhs {
        for z in &zetas {
            if (x.source(), x.target()) == (z.source(), z.target()) {
                assert_eq!(pairing(x, z).unwrap(), int(0));
            }
        }
    }
    assert!(verify_orthogonality(&data.raq, lhs, &zetas).unwrap());

    // flip the sign of one term of the two-term ζ
    let perturbed: Vec<RelationElement> = zetas
        .iter()
        .map(|z| {
            if z.terms().len() < 2 {
                return z.clone();
            }
            let mut first = true;
            let terms = z.terms().iter().map(|(p, c)| {
                let c = if std::mem::take(&mut first) { -c.clone() } else { c.clone() };
                (p.clone(), c)
            });
            RelationElement::new(terms).unwrap()
        })
        .collect();
    assert_ne!(perturbed, zetas);
    assert!(!verify_orthogonality(&data.raq, lhs, &perturbed).unwrap());
}

#[test]
fn graded_basis_matches_padding_oracle() {
    let mut cases = corpus();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
    for _ in 0..8 {
        cases.push(("random", common::random_quadratic(&mut rng, 4)));
    }
    for (name, p) in cases {
        let gb = GradedBasis::new(&p, 4);
        let q = p.quiver();
        let blocks = gb.block_dims();
        for t in 0..=4 {
            for i in q.vertex_ids() {
                for j in q.vertex_ids() {
                    let (paths, ideal) = ideal_by_padding(&p, t, i, j);
                    let got = blocks[t].get(&(i, j)).copied().unwrap_or(0);
                    assert_eq!(got, paths.len() - ideal.dim(), "{name} t={t}");
                }
            }
        }
    }
}

/// The matrix sending each path of a block to its basis coordinates has
/// kernel exactly `I_t`.
#[test]
fn expansion_vanishes_exactly_on_the_ideal() {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
    let mut cases: Vec<Presentation> = corpus().into_iter().map(|(_, p)| p).collect();
    for _ in 0..6 {
        cases.push(common::random_quadratic(&mut rng, 4));
    }
    for p in cases {
        let gb = GradedBasis::new(&p, 3);
        let q = p.quiver();
        for t in 0..=3 {
            let width = gb.basis(t).len();
            for i in q.vertex_ids() {
                for j in q.vertex_ids() {
                    let (paths, ideal) = ideal_by_padding(&p, t, i, j);
                    if paths.is_empty() {
                        continue;
                    }
                    // columns are paths, rows are basis coordinates
                    let cols: Vec<Vec<Scalar>> =
                        paths.iter().map(|path| to_dense(&gb.expand(path).unwrap(), width)).collect();
                    let rows: Vec<Vec<Scalar>> =
                        (0..width).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
                    let m = Matrix::from_rows(paths.len(), rows);
                    assert_eq!(kernel(&m), ideal);
                }
            }
        }
    }
}

#[test]
fn koszul_witness_on_named_fixtures() {
    for p in [fixtures::a_rad_square_zero(3), fixtures::beilinson(), fixtures::exterior3()] {
        let dual = quadratic_dual(&p).unwrap();
        assert!(koszul_witness(&p, 6).unwrap().passed());
        assert!(koszul_witness(&dual, 6).unwrap().passed());
    }
}

#[test]
fn resolutions_square_to_zero() {
    for (_, p) in corpus() {
        let gb = basis(&p);
        for v in p.quiver().vertex_ids() {
            let r = minimal_resolution(&gb, v, 6).unwrap();
            assert!(r.is_complex(&gb));
        }
    }
}

#[test]
fn trivial_extension_is_associative() {
    for p in [fixtures::a_rad_square_zero(3), fixtures::beilinson(), fixtures::kronecker()] {
        let gb = basis(&p);
        let n = gb.homogeneity_degree().unwrap();
        for twist in [TwistSpec::nu(p.quiver(), n), TwistSpec::identity(p.quiver())] {
            let alg = TrivExtAlgebra::new(&gb, n, twist).unwrap();
            let b = alg.basis();
            assert_eq!(b.len(), 2 * gb.total_dim());
            for x in &b {
                for y in &b {
                    let xy = alg.multiply(x, y);
                    for z in &b {
                        assert_eq!(alg.multiply(&xy, z), alg.multiply(x, &alg.multiply(y, z)));
                    }
                }
            }
        }
    }
}

#[test]
fn mu_kills_the_trivext_relations() {
    for p in [fixtures::a_rad_square_zero(4), fixtures::beilinson(), fixtures::exterior3()] {
        let gb = basis(&p);
        let n = gb.homogeneity_degree().unwrap();
        let alg = TrivExtAlgebra::new(&gb, n, TwistSpec::nu(p.quiver(), n)).unwrap();
        let raq = returning_arrow_quiver(&gb, n).unwrap();
        let tr = trivext_relations(&gb, n, &TwistSpec::nu(p.quiver(), n)).unwrap();
        for r in tr.presentation().relations() {
            assert!(alg.mu_combination(&raq, r).is_zero(), "{}", r.render(&raq.quiver));
        }
    }
}

#[test]
fn corroboration_on_passing_fixtures() {
    for (name, p) in corpus() {
        let r = verify_main_theorem(&p, 6);
        if !r.passed() {
            continue;
        }
        let c = r.corroboration.as_ref().unwrap();
        assert!(c.equal(), "{name}");
        assert_eq!(c.depth, 6);
    }
}

#[test]
fn returning_arrow_count_is_top_dimension() {
    for (name, p) in corpus() {
        let gb = basis(&p);
        let n = gb.homogeneity_degree().unwrap();
        let raq = returning_arrow_quiver(&gb, n).unwrap();
        let paths: BTreeMap<Path, ()> = raq.returning_arrows().map(|a| (raq.returning_path(a).unwrap().clone(), ())).collect();
        assert_eq!(paths.len(), gb.dim(n), "{name}");
        assert_eq!(raq.quiver.arrow_count(), p.quiver().arrow_count() + gb.dim(n));
    }
}

#[test]
fn dual_relation_span_is_the_complement() {
    for (_, p) in corpus() {
        if !p.is_quadratic() {
            continue;
        }
        let d = quadratic_dual(&p).unwrap();
        let q = p.quiver();
        for i in q.vertex_ids() {
            for j in q.vertex_ids() {
                let (paths, a) = p.relation_span(2, i, j);
                let (_, b) = d.relation_span(2, i, j);
                assert_eq!(a.dim() + b.dim(), paths.len());
                for x in a.basis_vectors() {
                    for y in b.basis_vectors() {
                        let s: Scalar = x.iter().zip(&y).map(|(u, v)| u * v).sum();
                        assert_eq!(s, int(0));
                    }
                }
            }
        }
    }
}
