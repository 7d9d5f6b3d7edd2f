use jet_invariants::cli::parse::{parse_expr, parse_monomial};
use jet_invariants::invariants::{
    dimension_report, functional_independence, is_invariant, iterate_diff_op, search_invariants,
    strict_independence, Sampling,
};
use jet_invariants::{JetSpace, LieAlgebraBasis, RationalExpr};

const SCHWARZIAN: &str = "(2*u1*u3 - 3*u2^2)/(2*u1^4)";

fn expr(text: &str, n: usize) -> RationalExpr {
    parse_expr(text, &JetSpace::new(1, 1, n)).unwrap()
}

#[test]
fn sl2_sequences() {
    let report = dimension_report(&LieAlgebraBasis::sl2(), 10, &Sampling::default()).unwrap();
    assert_eq!(report.column(|r| r.s as i64), [1, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3]);
    assert_eq!(report.column(|r| r.h as i64), [2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    assert_eq!(report.column(|r| r.i as i64), [1, 1, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
    assert_eq!(report.column(|r| r.j), [1, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1]);
    assert!(report.flags.is_empty(), "{:?}", report.flags);
}

#[test]
fn sl3_sequences() {
    let report = dimension_report(&LieAlgebraBasis::sl3(), 10, &Sampling::default()).unwrap();
    assert_eq!(report.column(|r| r.s as i64), [2, 3, 4, 5, 6, 7, 8, 8, 8, 8, 8]);
    assert_eq!(report.column(|r| r.h as i64), [6, 5, 4, 3, 2, 1, 0, 0, 0, 0, 0]);
    assert_eq!(report.column(|r| r.i as i64), [0, 0, 0, 0, 0, 0, 0, 1, 2, 3, 4]);
    assert_eq!(report.column(|r| r.j), [0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1]);
    assert!(report.flags.is_empty(), "{:?}", report.flags);
}

#[test]
fn counting_laws_hold_for_presets() {
    for basis in [LieAlgebraBasis::sl2(), LieAlgebraBasis::sl3()] {
        let r = basis.group_dim();
        let report = dimension_report(&basis, 10, &Sampling::default()).unwrap();
        assert!(!report.has_inequality_violation());
        for row in &report.rows {
            assert_eq!(row.i + row.s, row.dim_jet);
            assert_eq!(row.h + row.s, r);
            assert!(row.s <= r);
        }
        for pair in report.rows.windows(2) {
            let (prev, row) = (&pair[0], &pair[1]);
            let qn = row.q_n.unwrap();
            assert!(prev.i <= row.i && row.i <= prev.i + qn, "{} n={}", basis.name(), row.n);
            assert!(prev.s <= row.s && row.s <= (prev.s + qn).min(r), "{} n={}", basis.name(), row.n);
        }
    }
}

#[test]
fn sampled_ranks_agree_across_samples_and_seeds() {
    for basis in [LieAlgebraBasis::sl2(), LieAlgebraBasis::sl3()] {
        let reference = dimension_report(&basis, 10, &Sampling::default()).unwrap();
        for seed in [1, 7, 12345] {
            let sampling = Sampling { seed, ..Sampling::default() };
            let report = dimension_report(&basis, 10, &sampling).unwrap();
            assert!(report.flags.is_empty(), "{} seed {seed}: {:?}", basis.name(), report.flags);
            assert_eq!(report.rows, reference.rows);
        }
    }
}

#[test]
fn same_seed_same_report() {
    let basis = LieAlgebraBasis::sl3();
    let a = dimension_report(&basis, 6, &Sampling::default()).unwrap();
    let b = dimension_report(&basis, 6, &Sampling::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn schwarzian_is_invariant_and_misprint_is_not() {
    let sl2 = LieAlgebraBasis::sl2();
    assert!(is_invariant(&sl2, 3, &expr(SCHWARZIAN, 3)).unwrap().holds());
    let printed = is_invariant(&sl2, 3, &expr("(2*u1*u3 - 3*u1^2)/(2*u1^4)", 3)).unwrap();
    assert!(!printed.holds());
}

#[test]
fn diff_op_builds_a_complete_system() {
    let sl2 = LieAlgebraBasis::sl2();
    let (i, j) = (expr("u", 0), expr(SCHWARZIAN, 3));
    let derived = iterate_diff_op(&i, &j, 2).unwrap();
    assert_eq!(derived[0].order(), 4);
    assert_eq!(derived[1].order(), 5);
    for (e, n) in derived.iter().zip([4, 5]) {
        assert!(is_invariant(&sl2, n, e).unwrap().holds());
    }
    let system = [i, j, derived[0].clone(), derived[1].clone()];
    let space = JetSpace::new(1, 1, 5);
    assert_eq!(functional_independence(&system, &space, &Sampling::default()).unwrap(), 4);
    let i5 = dimension_report(&sl2, 5, &Sampling::default()).unwrap().rows[5].i;
    assert_eq!(i5, 4);
}

#[test]
fn strict_independence_of_schwarzian() {
    let space = JetSpace::new(1, 1, 3);
    assert!(strict_independence(&[expr(SCHWARZIAN, 3)], &space, &Sampling::default()).unwrap());
    assert!(!strict_independence(&[expr("u", 0)], &space, &Sampling::default()).unwrap());
}

#[test]
fn search_recovers_schwarzian() {
    let sl2 = LieAlgebraBasis::sl2();
    let space = JetSpace::new(1, 1, 3);
    let m = parse_monomial("u1^4", &space).unwrap();
    let found = search_invariants(&sl2, 3, &m, 2).unwrap();
    assert_eq!(found.len(), 1);
    let ratio = found[0].div(&expr(SCHWARZIAN, 3)).unwrap();
    let scalar = ratio.numerator().leading_coefficient() / ratio.denominator().leading_coefficient();
    assert!(ratio.equals(&RationalExpr::constant(scalar)), "{ratio}");
    assert!(is_invariant(&sl2, 3, &found[0]).unwrap().holds());
}

#[test]
fn low_order_search_finds_only_functions_of_u() {
    let sl2 = LieAlgebraBasis::sl2();
    let space = JetSpace::new(1, 1, 2);
    let found = search_invariants(&sl2, 2, &parse_monomial("1", &space).unwrap(), 2).unwrap();
    assert!(!found.is_empty());
    for e in &found {
        assert_eq!(e.order(), 0);
        assert!(e.vars().iter().all(|v| *v == jet_invariants::JetVar::u(0)));
    }
    assert_eq!(functional_independence(&found, &space, &Sampling::default()).unwrap(), 1);
}

#[test]
fn sl3_has_no_low_order_polynomial_invariants() {
    let sl3 = LieAlgebraBasis::sl3();
    let space = JetSpace::new(1, 1, 3);
    let found = search_invariants(&sl3, 3, &parse_monomial("1", &space).unwrap(), 3).unwrap();
    assert!(found.is_empty());
}
