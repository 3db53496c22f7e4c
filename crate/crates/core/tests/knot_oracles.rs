mod common;

use std::collections::BTreeMap;

use mqknot::fox::{alexander_matrix, alexander_polynomial, elementary_ideal_generators, AlexanderData};
use mqknot::indices::fibered_necessary;
use mqknot::laurent::{integer::smith_invariants, rank_over_field, smith_reduce_heuristic, FieldSpec, LaurentPoly, PolyMatrix};
use mqknot::notation::{goeritz_determinant, parse_braid, parse_pd, wirtinger_presentation, KnotDiagram, NotationError};
use num_bigint::BigInt;
use num_traits::{One, Signed};

const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

fn delta(d: &KnotDiagram) -> LaurentPoly {
    alexander_polynomial(&alexander_matrix(&wirtinger_presentation(d)).unwrap())
}

/// The same diagram seen from the other side: every over-strand becomes the
/// under-strand, so each tuple restarts at the incoming over-strand.
fn mirror(d: &KnotDiagram) -> KnotDiagram {
    let raw = d
        .crossings()
        .iter()
        .enumerate()
        .map(|(i, &[a, b, c, e])| if d.crossing_sign(i) > 0 { [e, a, b, c] } else { [b, c, e, a] })
        .collect();
    KnotDiagram::from_crossings(raw).unwrap()
}

fn small_knots() -> impl Iterator<Item = &'static mqknot::tables::KnotRecord> {
    common::knots_10().iter().filter(|r| common::crossing_number(&r.name) <= 8)
}

fn rank_profile(d: &KnotDiagram) -> Vec<usize> {
    let a = alexander_matrix(&wirtinger_presentation(d)).unwrap();
    let fields = [(2, vec![1, 1, 1]), (3, vec![1, 1]), (5, vec![2, 0, 1]), (7, vec![3, 1])];
    fields
        .iter()
        .map(|(p, m)| {
            let s = FieldSpec::new(*p, m).unwrap();
            a.presentation_matrix.cols() - rank_over_field(&a.presentation_matrix, &s)
        })
        .collect()
}

#[test]
fn trefoil_diagram_shape() {
    let d = parse_pd(TREFOIL).unwrap();
    assert_eq!((d.crossing_count(), d.arc_count()), (3, 6));
    let mut seen = BTreeMap::new();
    for t in d.crossings() {
        for &l in t {
            *seen.entry(l).or_insert(0) += 1;
        }
    }
    assert_eq!(seen.keys().copied().collect::<Vec<_>>(), (1..=6).collect::<Vec<_>>());
    assert!(seen.values().all(|&c| c == 2));
}

#[test]
fn degenerate_inputs() {
    assert!(matches!(parse_pd(""), Err(NotationError::Empty)));
    assert!(matches!(parse_pd("X(1,3,2,4) X(3,1,4,2)"), Err(NotationError::Components(2))));
    let curl = parse_pd("X(1,1,2,2)").unwrap();
    assert_eq!(curl.crossing_count(), 1);
    assert!(delta(&curl).is_one());
    assert!(matches!(parse_braid("braid(2; 1 1)"), Err(NotationError::Components(2))));
    assert!(matches!(parse_braid("braid(3; 1 3)"), Err(NotationError::BraidLetter { .. })));
    let u = parse_braid("braid(1; )").unwrap();
    assert_eq!(u.crossing_count(), 0);
    let p = wirtinger_presentation(&u);
    assert_eq!((p.generator_count(), p.relators().len()), (1, 0));
}

#[test]
fn wirtinger_smith_forms() {
    for (pd, n) in [(TREFOIL, 3), (FIGURE_EIGHT, 4)] {
        let p = wirtinger_presentation(&parse_pd(pd).unwrap());
        assert_eq!((p.generator_count(), p.relators().len()), (n, n));
        let inv = smith_invariants(&p.exponent_matrix());
        assert_eq!(inv, vec![BigInt::one(); n - 1], "abelianization is Z");
    }
}

#[test]
fn wirtinger_dataset_shape() {
    for r in common::knots_10() {
        let d: KnotDiagram = r.pd.parse().unwrap();
        let p = wirtinger_presentation(&d);
        let n = d.crossing_count();
        assert_eq!((p.generator_count(), p.relators().len()), (n, n), "{}", r.name);
        for i in [0, n / 2, n - 1] {
            let inv = smith_invariants(&p.without_relator(i).exponent_matrix());
            assert_eq!(inv.len(), n - 1, "{} without relator {i}", r.name);
            assert!(inv.iter().all(One::is_one), "{} without relator {i}", r.name);
        }
    }
}

#[test]
fn braid_and_pd_agree() {
    let pairs = [(TREFOIL, "braid(2; 1 1 1)"), (FIGURE_EIGHT, "braid(3; 1 -2 1 -2)")];
    for (pd, braid) in pairs {
        let (a, b) = (parse_pd(pd).unwrap(), parse_braid(braid).unwrap());
        assert_eq!(delta(&a), delta(&b), "{braid}");
        assert_eq!(rank_profile(&a), rank_profile(&b), "{braid}");
        assert_eq!(goeritz_determinant(&a).unwrap(), goeritz_determinant(&b).unwrap());
    }
    assert_eq!(delta(&parse_pd(TREFOIL).unwrap()).to_string(), "t^2 - t + 1");
    assert_eq!(delta(&parse_pd(FIGURE_EIGHT).unwrap()).to_string(), "t^2 - 3*t + 1");
}

#[test]
fn mirror_images() {
    for r in small_knots() {
        let d: KnotDiagram = r.pd.parse().unwrap();
        let m = mirror(&d);
        assert_eq!(m.writhe(), -d.writhe(), "{}", r.name);
        assert_eq!(delta(&m), delta(&d), "{}", r.name);
        assert_eq!(goeritz_determinant(&m).unwrap(), goeritz_determinant(&d).unwrap(), "{}", r.name);
    }
}

#[test]
fn figure_eight_two_diagrams() {
    let d = parse_pd(FIGURE_EIGHT).unwrap();
    let shipped = common::knots_10().iter().find(|r| r.name == "4_1").unwrap();
    let e: KnotDiagram = shipped.pd.parse().unwrap();
    let m = mirror(&d);
    for other in [&e, &m] {
        assert_eq!(delta(other), delta(&d));
        assert_eq!(rank_profile(other), rank_profile(&d));
    }
}

#[test]
fn goeritz_examples() {
    assert_eq!(goeritz_determinant(&parse_pd(TREFOIL).unwrap()).unwrap(), BigInt::from(3));
    assert_eq!(goeritz_determinant(&parse_pd(FIGURE_EIGHT).unwrap()).unwrap(), BigInt::from(5));
    assert_eq!(goeritz_determinant(&KnotDiagram::unknot()).unwrap(), BigInt::one());
}

#[test]
fn elementary_ideal_examples() {
    let f: LaurentPoly = "t^2 - t + 1".parse().unwrap();
    let a = alexander_matrix(&wirtinger_presentation(&parse_pd(TREFOIL).unwrap())).unwrap();
    let e0: Vec<LaurentPoly> = elementary_ideal_generators(&a, 0).iter().filter(|g| !g.is_zero()).map(LaurentPoly::normalize_unit).collect();
    assert!(e0.iter().all(|g| *g == f));
    assert!(elementary_ideal_generators(&a, 1).iter().any(LaurentPoly::is_unit));
    assert_eq!(elementary_ideal_generators(&a, 2), vec![LaurentPoly::one()]);
    let reduced = smith_reduce_heuristic(&a.presentation_matrix);
    assert_eq!((reduced.rows(), reduced.cols()), (1, 1));
    assert_eq!(reduced.get(0, 0).normalize_unit(), f);

    let granny = AlexanderData::from_presentation(PolyMatrix::diag(&[f.clone(), f.clone()]));
    let mut e1 = elementary_ideal_generators(&granny, 1);
    e1.sort();
    let mut want = vec![f.clone(), f.clone(), LaurentPoly::zero(), LaurentPoly::zero()];
    want.sort();
    assert_eq!(e1, want);
}

#[test]
fn fibered_screen_examples() {
    let p = |s: &str| s.parse::<LaurentPoly>().unwrap();
    assert!(fibered_necessary(&p("t^2 - t + 1")));
    assert!(!fibered_necessary(&p("2*t^2 - 3*t + 2")));
    assert!(fibered_necessary(&LaurentPoly::one()));
}

#[test]
fn delta_at_one_and_symmetry() {
    for r in common::knots_10() {
        let d = delta(&r.pd.parse().unwrap());
        assert!(d.eval_at_one().abs().is_one(), "{}: {d}", r.name);
        assert_eq!(d.reflect().normalize_unit(), d.normalize_unit(), "{}", r.name);
    }
}

#[test]
fn fundamental_identity_rows() {
    for r in common::knots_10() {
        let a = alexander_matrix(&wirtinger_presentation(&r.pd.parse().unwrap())).unwrap();
        let m = &a.full_matrix;
        for i in 0..m.rows() {
            let s: BigInt = m.row(i).iter().map(LaurentPoly::eval_at_one).sum();
            assert_eq!(s, BigInt::from(0), "{} row {i}", r.name);
        }
    }
}

#[test]
fn column_deletion_independence() {
    for r in small_knots() {
        let a = alexander_matrix(&wirtinger_presentation(&r.pd.parse().unwrap())).unwrap();
        let d = alexander_polynomial(&a);
        for col in 0..a.generator_count() {
            let other = alexander_polynomial(&a.with_deleted_column(col).unwrap());
            assert_eq!(other, d, "{} deleting column {col}", r.name);
        }
    }
}

#[test]
fn determinant_two_ways() {
    for r in common::knots_10() {
        let d: KnotDiagram = r.pd.parse().unwrap();
        assert_eq!(goeritz_determinant(&d).unwrap(), delta(&d).eval_at_minus_one().abs(), "{}", r.name);
    }
}

#[test]
fn reference_polynomials_agree() {
    let mut checked = 0;
    for r in common::knots_10() {
        if let Some(text) = &r.reference_delta {
            let expected = text.parse::<LaurentPoly>().unwrap().normalize_unit();
            assert_eq!(delta(&r.pd.parse().unwrap()), expected, "{}", r.name);
            checked += 1;
        }
    }
    assert!(checked > 200);
}

#[test]
fn fibered_knots_pass_the_screen() {
    for r in common::knots_10().iter().filter(|r| r.fibered == Some(true)) {
        assert!(fibered_necessary(&delta(&r.pd.parse().unwrap())), "{}", r.name);
    }
}
