use num_bigint::BigInt;
use proptest::prelude::*;

use super::ast::*;
use super::*;
use crate::rational::Rational;

fn parse_ok(src: &str) -> Program {
    parse(src).unwrap_or_else(|d| panic!("{src}: {d:?}"))
}

fn first_error(src: &str) -> Diagnostic {
    parse(src).expect_err(src).remove(0)
}

fn report_value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{report}"))
        .to_string()
}

#[test]
fn rational_function_binding() {
    let p = parse_ok("x = 1/(n+1)");
    let StmtKind::LetSeq(name, e) = &p.stmts[0].kind else { panic!() };
    assert_eq!(name, "x");
    assert!(matches!(e.kind, ExprKind::Bin(BinOp::Div, ..)));
    assert_eq!(e.to_string(), "1 / (n + 1)");
}

#[test]
fn piecewise_binding() {
    let p = parse_ok("y = piecewise(mod 2; 0: 0; 1: n)");
    let StmtKind::LetSeq(_, e) = &p.stmts[0].kind else { panic!() };
    let ExprKind::Piecewise { modulus, branches } = &e.kind else { panic!() };
    assert_eq!(*modulus, 2);
    assert_eq!(branches.len(), 2);
}

#[test]
fn vanishing_denominator_is_a_warning() {
    let p = parse_ok("z = 1/(n-3)\nclassify z");
    let diags = check(&p);
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].severity, Severity::Warning);
    assert_eq!(diags[0].code, Code::PatchedDenominator);
    assert!(diags[0].message.contains("n = 3"), "{}", diags[0].message);
    let out = run(&p, &RunOptions::default());
    assert!(!out.failed());
    assert_eq!(report_value(&out.report, "classify z"), "Infinitesimal");
}

#[test]
fn sets_and_precedence() {
    let p = parse_ok("A = residue(3; {0, 1}) & !finite{0} | tail(5) \\ cofinite{7}");
    assert_eq!(p.stmts[0].to_string(), "A = residue(3; {0, 1}) & !finite{0} | tail(5) \\ cofinite{7}");
    let p = parse_ok("A = (omega | empty) & cmp(n ^ 2 >= 2 * n)");
    assert_eq!(p.stmts[0].to_string(), "A = (omega | empty) & cmp(n^2 >= 2 * n)");
    let p = parse_ok("x = (n + 1) * 2\nB = (cmp(x < 3))");
    assert!(matches!(p.stmts[0].kind, StmtKind::LetSeq(..)));
    assert!(matches!(p.stmts[1].kind, StmtKind::LetSet(..)));
}

#[test]
fn statements_split_on_semicolons() {
    let p = parse_ok("x = (2*n+3)/(n+1); st x");
    assert_eq!(p.stmts.len(), 2);
}

#[test]
fn syntax_errors_carry_spans() {
    let d = first_error("x = 1 +\n");
    assert_eq!(d.code, Code::Syntax);
    assert_eq!((d.span.line, d.span.column), (1, 8));
    let d = first_error("classify y");
    assert_eq!(d.code, Code::Unbound);
    assert_eq!((d.span.line, d.span.column), (1, 10));
    let d = first_error("x = 1\nx = 2");
    assert_eq!(d.code, Code::Rebound);
    assert_eq!(d.span.line, 2);
    let d = first_error("x = 1.5");
    assert_eq!(d.code, Code::Lex);
    let d = first_error("A = finite{1}\nx = A + 1");
    assert_eq!(d.code, Code::Kind);
    let d = first_error("classify 1\nseed 4");
    assert_eq!(d.code, Code::Directive);
    let d = first_error("n = 3");
    assert_eq!(d.code, Code::Syntax);
}

#[test]
fn every_failing_line_is_reported() {
    let errs = parse("x = (\ny = 2\nz = )").unwrap_err();
    assert_eq!(errs.len(), 2);
    assert_eq!(errs[0].span.line, 1);
    assert_eq!(errs[1].span.line, 3);
}

#[test]
fn lowering_errors() {
    let p = parse_ok("x = piecewise(mod 2; 0: 1)");
    assert!(check(&p).iter().any(|d| d.is_error() && d.message.contains("residue 1")));
    let p = parse_ok("x = 1 / 0");
    assert!(check(&p).iter().any(|d| d.is_error()));
    let p = parse_ok("decide residue(2; {5})");
    assert!(check(&p).iter().any(|d| d.is_error()));
}

#[test]
fn st_reports_within_digits() {
    let opts = RunOptions { digits: 6, ..RunOptions::default() };
    let out = run_source("x = (2*n+3)/(n+1); st x", &opts);
    assert!(!out.failed(), "{:?}", out.diagnostics);
    let v = report_value(&out.report, "st x");
    let (exact, approx) = v.split_once(" ~ ").unwrap();
    let q: Rational = exact.parse().unwrap();
    assert!((&q - &Rational::from(2i64)).abs() < Rational::ten_to_minus(6));
    assert_eq!(approx, "2.000000");
}

#[test]
fn decide_uses_the_residue_policy() {
    let out = run_source("decide residue(2;{0})", &RunOptions::default());
    assert_eq!(report_value(&out.report, "decide residue(2; {0})"), "Big (residue-policy)");
}

#[test]
fn report_covers_every_query() {
    let src = "seed 3\nhorizon 5000\nx = 1/(n+1)\nA = residue(4; {1})\nclassify x\nmonotone x\ncompare x, 0\n\
               decide A\nramsey sum(3; {0})\nselect block(4)\nramsey order(n)\nselect level(n * (n - 1))";
    let out = run_source(src, &RunOptions { prefix: 5, ..RunOptions::default() });
    assert!(!out.failed(), "{:?}", out.diagnostics);
    let lines: Vec<&str> = out.report.lines().collect();
    assert_eq!(lines[0], "seed: 3");
    assert_eq!(lines[1], "horizon: 5000");
    assert_eq!(lines.len(), 2 + 8);
    assert!(report_value(&out.report, "monotone x").starts_with("StrictlyDecreasing FiniteOrInfinitesimal; indices "));
    assert_eq!(report_value(&out.report, "compare x, 0"), ">");
    assert!(report_value(&out.report, "ramsey order(n)").starts_with("color 0; "));
    assert!(out.journal.starts_with("#seed 3\n"));
}

#[test]
fn flags_override_directives() {
    let out = run_source("seed 3\ndecide finite{1}", &RunOptions { seed: Some(8), ..RunOptions::default() });
    assert_eq!(out.report.lines().next(), Some("seed: 8"));
}

#[test]
fn runs_are_deterministic_and_replayable() {
    let src = "x = piecewise(mod 3; 0: n; 1: 1/(n+1); 2: 2)\nclassify x\nmonotone x\nramsey distance({1, 2})\nst 1/(n+2)";
    let opts = RunOptions { seed: Some(11), ..RunOptions::default() };
    let a = run_source(src, &opts);
    let b = run_source(src, &opts);
    assert!(!a.failed(), "{:?}", a.diagnostics);
    assert_eq!(a.report, b.report);
    assert_eq!(a.journal, b.journal);
    let replayed = run_source(src, &RunOptions { replay: Some(a.journal.clone()), ..opts.clone() });
    assert!(!replayed.failed(), "{:?}", replayed.diagnostics);
    assert_eq!(replayed.report, a.report);
    assert_eq!(replayed.journal, a.journal);
}

#[test]
fn replay_of_a_different_program_fails() {
    let opts = RunOptions { seed: Some(2), ..RunOptions::default() };
    let a = run_source("decide residue(2; {0})\ndecide residue(3; {1})", &opts);
    let other = run_source("decide residue(2; {0})", &RunOptions { replay: Some(a.journal), ..opts });
    assert!(other.diagnostics.iter().any(|d| d.code == Code::Replay), "{:?}", other.diagnostics);
}

#[test]
fn infinite_standard_part_is_an_error() {
    let out = run_source("classify n\nst n", &RunOptions::default());
    assert!(out.failed());
    assert_eq!(out.report.lines().count(), 3);
    assert_eq!(out.diagnostics[0].span.line, 2);
}

#[test]
fn decimal_rounding() {
    let q = |s: &str| s.parse::<Rational>().unwrap();
    assert_eq!(run::decimal(&q("2"), 3), "2.000");
    assert_eq!(run::decimal(&q("1/3"), 4), "0.3333");
    assert_eq!(run::decimal(&q("2/3"), 2), "0.67");
    assert_eq!(run::decimal(&q("-1/8"), 2), "-0.12");
    assert_eq!(run::decimal(&q("-1/7"), 3), "-0.143");
    assert_eq!(run::decimal(&q("7/2"), 0), "4");
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(ExprKind::Var),
        (0u64..50).prop_map(|k| ExprKind::Int(BigInt::from(k))),
        Just(ExprKind::Name("x".into())),
    ]
    .prop_map(|k| Expr::new(k, Span::default()));
    leaf.prop_recursive(4, 24, 3, |inner| {
        let e = |k| Expr::new(k, Span::default());
        prop_oneof![
            inner.clone().prop_map(move |a| e(ExprKind::Neg(Box::new(a)))),
            (inner.clone(), 0u32..4).prop_map(move |(a, k)| e(ExprKind::Pow(Box::new(a), k))),
            (
                prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)],
                inner.clone(),
                inner.clone()
            )
                .prop_map(move |(op, a, b)| e(ExprKind::Bin(op, Box::new(a), Box::new(b)))),
            (inner.clone(), inner.clone()).prop_map(move |(a, b)| e(ExprKind::Piecewise {
                modulus: 2,
                branches: vec![(1, a), (0, b)]
            })),
            (inner, -9i64..9, 1i64..5).prop_map(move |(a, p, q)| e(ExprKind::Patch {
                points: vec![(3, Rational::new(p, q).unwrap())],
                base: Box::new(a)
            })),
        ]
    })
}

fn arb_set() -> impl Strategy<Value = SetExpr> {
    let leaf = prop_oneof![
        Just(SetKind::Omega),
        Just(SetKind::Empty),
        Just(SetKind::Name("A".into())),
        prop::collection::vec(0u64..20, 0..4).prop_map(SetKind::Finite),
        prop::collection::vec(0u64..20, 0..4).prop_map(SetKind::Cofinite),
        (1u64..6).prop_map(|m| SetKind::Residue(m, vec![0])),
        (0u64..9).prop_map(SetKind::Tail),
        (arb_expr(), arb_expr()).prop_map(|(a, b)| SetKind::Cmp(a, CmpOp::Le, b)),
    ]
    .prop_map(|k| SetExpr::new(k, Span::default()));
    leaf.prop_recursive(3, 16, 2, |inner| {
        let s = |k| SetExpr::new(k, Span::default());
        prop_oneof![
            inner.clone().prop_map(move |a| s(SetKind::Not(Box::new(a)))),
            (
                prop_oneof![Just(SetBinOp::And), Just(SetBinOp::Or), Just(SetBinOp::Minus)],
                inner.clone(),
                inner
            )
                .prop_map(move |(op, a, b)| s(SetKind::Bin(op, Box::new(a), Box::new(b)))),
        ]
    })
}

fn with_prelude(stmt: StmtKind) -> Program {
    let e = |k| Expr::new(k, Span::default());
    let s = |k| SetExpr::new(k, Span::default());
    Program {
        stmts: vec![
            Stmt::new(StmtKind::LetSeq("x".into(), e(ExprKind::Var)), Span::default()),
            Stmt::new(StmtKind::LetSet("A".into(), s(SetKind::Omega)), Span::default()),
            Stmt::new(stmt, Span::default()),
        ],
    }
}

proptest! {
    #[test]
    fn expressions_round_trip(e in arb_expr()) {
        let p = with_prelude(StmtKind::LetSeq("y".into(), e));
        let text = p.to_string();
        prop_assert_eq!(parse(&text).map_err(|d| format!("{text}: {d:?}")).unwrap(), p);
    }

    #[test]
    fn sets_round_trip(s in arb_set()) {
        let p = with_prelude(StmtKind::Decide(s));
        let text = p.to_string();
        prop_assert_eq!(parse(&text).map_err(|d| format!("{text}: {d:?}")).unwrap(), p);
    }

    #[test]
    fn diagnostics_point_into_the_source(src in "[a-z0-9 =+*/();{}<>!&|\\n-]{0,40}") {
        if let Err(diags) = parse(&src) {
            for d in diags {
                prop_assert!(d.span.offset + d.span.len <= src.len());
                prop_assert!(d.span.line >= 1 && d.span.line <= src.lines().count().max(1) + 1);
            }
        }
    }
}
