//! Worked examples with values derived by hand or by brute force.

use quotcount::description::parse_module_str;
use quotcount::graded::{box_module_of_ideal, ext1, ideal_presentation, MonomialIdeal, Weight};
use quotcount::series::{macmahon, FinitePoly, TruncSeries};
use quotcount::verify::check_locfree;

fn weights(ideal: &[[u32; 3]], bound: usize) -> Vec<Weight> {
    let m = box_module_of_ideal(&MonomialIdeal::new(ideal.to_vec()).unwrap(), bound).unwrap();
    let mut w: Vec<Weight> = m.boxes().iter().map(|b| b.weight).collect();
    w.sort();
    w
}

#[test]
fn series_arithmetic() {
    let m3 = macmahon(3, 1).unwrap();
    let one_plus_q = TruncSeries::from_coeffs(vec![1, 1], 3);
    assert_eq!(m3.mul(&one_plus_q).unwrap().ordinary_coeffs(), [1, 2, 4, 9]);
    assert_eq!(macmahon(2, 1).unwrap().inverse().unwrap().ordinary_coeffs(), [1, -1, -2]);
    assert_eq!(macmahon(0, 3).unwrap().ordinary_coeffs(), [1]);
    assert_eq!(macmahon(4, 2).unwrap().ordinary_coeffs(), [1, 2, 7, 18, 47]);
    let p = FinitePoly::new(vec![2, 3, 0, 5]);
    assert_eq!(p.reciprocal().coeffs(), [5, 0, 3, 2]);
    assert!(!FinitePoly::new(vec![1, 2, 0, 1]).is_palindromic());
    assert!(FinitePoly::new(vec![]).is_palindromic());
}

#[test]
fn box_models() {
    assert_eq!(weights(&[[0, 0, 0]], 2), [[0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0]]);
    assert_eq!(weights(&[[0, 1, 0], [0, 0, 1]], 1), [[0, 0, 1], [0, 1, 0]]);
    // x times {1, x, x^2, y, y^2, z, z^2}: down-sets of size at most 3 in (x)
    assert_eq!(
        weights(&[[1, 0, 0]], 3),
        [[1, 0, 0], [1, 0, 1], [1, 0, 2], [1, 1, 0], [1, 2, 0], [2, 0, 0], [3, 0, 0]]
    );
}

#[test]
fn ext_of_reduced_line() {
    let i = MonomialIdeal::new(vec![[0, 1, 0], [0, 0, 1]]).unwrap();
    let e = ext1(&ideal_presentation(&i).unwrap(), 4).unwrap();
    let w: Vec<Weight> = e.boxes().iter().map(|b| b.weight).collect();
    assert_eq!(w.len(), 4);
    assert!(w.windows(2).all(|p| p[1][0] == p[0][0] + 1 && p[1][1] == p[0][1] && p[1][2] == p[0][2]));
    assert!(e.edges().iter().all(|edge| edge.var == 0));
}

#[test]
fn locfree_cube() {
    let r = check_locfree(3, 3).unwrap();
    assert!(r.matches);
    assert_eq!(r.lhs, [1, 3, 12, 37]);
}

#[test]
fn reflexive_description() {
    let m = parse_module_str(
        r#"{"kind":"cokernel","matrix":[[{"sign":1,"exp":[1,0,0]}],[{"sign":1,"exp":[0,1,0]}],[{"sign":1,"exp":[0,0,1]}]]}"#,
    )
    .unwrap();
    assert_eq!(m.rank().unwrap(), 2);
    let e = m.ext1(1).unwrap();
    assert_eq!(e.len(), 1);
    assert!(e.is_finite());
}
