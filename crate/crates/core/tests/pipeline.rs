//! End-to-end flows across modules: file in, exact answers out.

use qperm_core::eval::{qperm_naive, qperm_substituted, schur_apply};
use qperm_core::exact::{int, rat, BaseSign, Laurent};
use qperm_core::format::{parse_matrix, parse_rat_matrix, print_matrix};
use qperm_core::hessenberg::{h0, membership, qperm_hessenberg_fast, Classification, QSpec};
use qperm_core::mixed::{recover_base_matrix, search_consistent_targets, verify_mixed_identity};
use qperm_core::perm::Perm;
use qperm_core::preservers::{basis, verify_preserver_action};
use qperm_core::tau::{solve_tau, verify_converter};

#[test]
fn matrix_file_to_q_permanent() {
    let a = parse_matrix(r#"{"n": 2, "entries": [["1", "q"], ["1 - q - q^2", "3/2*q^(1/2)"]]}"#).unwrap();
    let p = qperm_naive(&a).unwrap().value;
    // 3/2 q^{1/2} + q · q (1 - q - q^2) at q = 4.
    assert_eq!(p.substitute(&int(4)).unwrap(), int(3) + int(16) * int(1 - 4 - 16));
    assert_eq!(qperm_substituted(&a, &int(4)).unwrap(), int(-301));
    assert_eq!(parse_matrix(&print_matrix(&a)).unwrap(), a);
}

#[test]
fn hessenberg_file_through_both_paths() {
    let a =
        parse_matrix(r#"{"n": 3, "entries": [["2", "q", 0], ["1/3", "-1", "q^-1"], ["5", "7", "1 + q"]]}"#).unwrap();
    assert_eq!(qperm_hessenberg_fast(&a).unwrap().value, qperm_naive(&a).unwrap().value);
    let h = parse_rat_matrix(r#"{"n": 3, "entries": [[0, 1, 0], [0, 0, 1], [0, 0, 0]]}"#).unwrap();
    assert_eq!(h, h0(3));
    assert_eq!(
        membership(&h, &QSpec::GenericModulus).unwrap().classification,
        Classification::PlusAndMinus
    );
}

#[test]
fn preserver_shift_leaves_a_solved_converter_valid() {
    let tau = Perm::from_cycles(3, "(13)").unwrap();
    let c = solve_tau(&tau).unwrap().converter().unwrap().converter.clone();
    let r = &basis(3).unwrap().matrices[1];
    assert!(verify_preserver_action(r, 2, 0).unwrap());
    assert!(verify_converter(&tau, &c.lambda.add(r), &c.x, 3, 1).unwrap());
}

#[test]
fn recovered_components_satisfy_the_mixed_identity() {
    for t in search_consistent_targets(3, 1).unwrap() {
        let c = recover_base_matrix(&t).unwrap();
        assert!(verify_mixed_identity(&c.m0, 1, 4).unwrap());
    }
}

#[test]
fn half_integer_schur_exponents_need_the_plus_base() {
    let a = parse_matrix(r#"{"n": 1, "entries": [["2"]]}"#).unwrap();
    let half = parse_rat_matrix(r#"{"n": 1, "entries": [["1/2"]]}"#).unwrap();
    let b = schur_apply(&half, &a, BaseSign::Plus).unwrap();
    assert_eq!(b[(0, 0)], Laurent::monomial(int(2), &rat(1, 2)));
    assert!(schur_apply(&half, &a, BaseSign::Minus).is_err());
}
