use super::*;
use crate::poly::PolyQ;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn poly(cs: &[i64]) -> PolyQ {
    PolyQ::new(cs.iter().map(|&c| Rational::from(c)).collect())
}

fn ratio(s: &OracleSession, num: &[i64], den: &[i64]) -> Hyperrational {
    Hyperrational::new(s, SeqExpr::ratio(poly(num), poly(den)).unwrap()).unwrap()
}

fn recip_n1(s: &OracleSession) -> Hyperrational {
    ratio(s, &[1], &[1, 1])
}

fn vs(s: &mut OracleSession, x: &Hyperrational, c: &str) -> Ordering {
    let c = embed(s, q(c));
    h_compare(s, x, &c).unwrap()
}

fn strictly(values: &[Rational], kind: MonotoneKind) -> bool {
    values.windows(2).all(|w| match kind {
        MonotoneKind::StrictlyIncreasing => w[0] < w[1],
        MonotoneKind::StrictlyDecreasing => w[0] > w[1],
        MonotoneKind::Stationary => w[0] == w[1],
    })
}

#[test]
fn embed_is_a_homomorphism_on_constants() {
    let mut s = OracleSession::new(0);
    let half = embed(&s, q("1/2"));
    assert_eq!(half.term(17), q("1/2"));
    let two = embed(&s, q("2"));
    let three = embed(&s, q("3"));
    let six = h_arith(&mut s, &two, &three, ArithOp::Mul).unwrap();
    assert_eq!(vs(&mut s, &six, "6"), Ordering::Equal);
    let zero = embed(&s, Rational::zero());
    let sum = h_arith(&mut s, &half, &zero, ArithOp::Add).unwrap();
    assert_eq!(h_compare(&mut s, &sum, &half).unwrap(), Ordering::Equal);
}

#[test]
fn sum_of_complementary_fractions_is_one() {
    let mut s = OracleSession::new(0);
    let x = recip_n1(&s);
    let y = ratio(&s, &[0, 1], &[1, 1]);
    let z = h_arith(&mut s, &x, &y, ArithOp::Add).unwrap();
    for n in 0..20 {
        assert_eq!(z.term(n), Rational::one());
    }
}

#[test]
fn division_by_itself_and_by_small_zero_sets() {
    let mut s = OracleSession::new(3);
    let n = ratio(&s, &[0, 1], &[1]);
    let one = h_arith(&mut s, &n, &n, ArithOp::Div).unwrap();
    assert_eq!(vs(&mut s, &one, "1"), Ordering::Equal);

    let zeros: Vec<(u64, Rational)> = (0..5).map(|i| (i, Rational::zero())).collect();
    let y = Hyperrational::new(&s, SeqExpr::patch(zeros, SeqExpr::constant(q("2"))).unwrap()).unwrap();
    let x = embed(&s, q("4"));
    let d = h_arith(&mut s, &x, &y, ArithOp::Div).unwrap();
    assert_eq!(vs(&mut s, &d, "2"), Ordering::Equal);

    let zero = embed(&s, Rational::zero());
    assert!(matches!(h_arith(&mut s, &x, &zero, ArithOp::Div), Err(Error::DivisionByZeroHyperrational)));
}

#[test]
fn order_examples() {
    let mut s = OracleSession::new(0);
    let x = recip_n1(&s);
    assert_eq!(vs(&mut s, &x, "0"), Ordering::Greater);
    let y = ratio(&s, &[1, 2], &[0, 1]);
    assert_eq!(vs(&mut s, &y, "2"), Ordering::Greater);
    let patched: Vec<(u64, Rational)> = (0..10).map(|i| (i, Rational::from(i as i64))).collect();
    let p = Hyperrational::new(&s, SeqExpr::patch(patched, SeqExpr::constant(q("7"))).unwrap()).unwrap();
    assert_eq!(vs(&mut s, &p, "7"), Ordering::Equal);
}

#[test]
fn sessions_do_not_mix() {
    let mut a = OracleSession::new(1);
    let b = OracleSession::new(1);
    let x = embed(&a, q("1"));
    let y = embed(&b, q("1"));
    assert!(matches!(h_arith(&mut a, &x, &y, ArithOp::Add), Err(Error::SessionMismatch)));
    assert!(matches!(h_compare(&mut a, &y, &y), Err(Error::SessionMismatch)));
}

#[test]
fn classification_examples() {
    let mut s = OracleSession::new(0);
    let sq = ratio(&s, &[0, 0, 1], &[1]);
    assert_eq!(classify(&mut s, &sq).unwrap(), Magnitude::InfinitelyLarge);
    let r = recip_n1(&s);
    assert_eq!(classify(&mut s, &r).unwrap(), Magnitude::Infinitesimal);
    let f = ratio(&s, &[3, 2], &[1, 1]);
    assert_eq!(classify(&mut s, &f).unwrap(), Magnitude::FiniteNonInfinitesimal);
    let zero = embed(&s, Rational::zero());
    assert_eq!(classify(&mut s, &zero).unwrap(), Magnitude::Infinitesimal);
}

#[test]
fn piecewise_classification_follows_the_big_branch() {
    for seed in 0..6 {
        let mut s = OracleSession::new(seed);
        let e = SeqExpr::piecewise(2, vec![SeqExpr::constant(Rational::zero()), SeqExpr::var()]).unwrap();
        let x = Hyperrational::new(&s, e).unwrap();
        let even_big = s.decide(&IndexSet::Structured(EpSet::residue(2, &[0]).unwrap())).unwrap().is_big();
        let want = if even_big { Magnitude::Infinitesimal } else { Magnitude::InfinitelyLarge };
        assert_eq!(classify(&mut s, &x).unwrap(), want, "seed {seed}");
    }
}

#[test]
fn stationary_witness_for_a_constant() {
    let mut s = OracleSession::new(0);
    let x = embed(&s, q("5"));
    let w = extract_monotone(&mut s, &x).unwrap();
    assert_eq!(w.kind, MonotoneKind::Stationary);
    assert_eq!(w.limit, Some(q("5")));
    let idx = w.prefix(&mut s, 100).unwrap();
    assert!(idx.windows(2).all(|p| p[0] < p[1]));
    assert!(idx.iter().all(|&n| x.term(n) == q("5")));
}

#[test]
fn decreasing_witness_for_reciprocal() {
    let mut s = OracleSession::new(0);
    let x = recip_n1(&s);
    let w = extract_monotone(&mut s, &x).unwrap();
    assert_eq!(w.kind, MonotoneKind::StrictlyDecreasing);
    assert_eq!(w.finiteness, Finiteness::FiniteOrInfinitesimal);
    let idx = w.prefix(&mut s, 100).unwrap();
    let vals: Vec<Rational> = idx.iter().map(|&n| x.term(n)).collect();
    assert!(strictly(&vals, w.kind));
    for s_band in 1..=20u64 {
        let b = w.bound(&mut s, s_band).unwrap();
        let eps = Rational::from(s_band).recip().unwrap();
        let tail: Vec<Rational> = w.prefix(&mut s, b + 30).unwrap()[b..].iter().map(|&n| x.term(n)).collect();
        for v in &tail {
            assert!(v.abs() <= eps, "band {s_band}: {v}");
        }
    }
}

#[test]
fn increasing_witness_for_identity() {
    let mut s = OracleSession::new(5);
    let x = ratio(&s, &[0, 1], &[1]);
    let w = extract_monotone(&mut s, &x).unwrap();
    assert_eq!(w.kind, MonotoneKind::StrictlyIncreasing);
    assert_eq!(w.finiteness, Finiteness::InfinitePositive);
    assert!(matches!(w.bound(&mut s, 3), Err(Error::InfiniteArgument)));
    let neg = ratio(&s, &[0, -1], &[1]);
    let w = extract_monotone(&mut s, &neg).unwrap();
    assert_eq!(w.kind, MonotoneKind::StrictlyDecreasing);
    assert_eq!(w.finiteness, Finiteness::InfiniteNegative);
}

#[test]
fn metric_equivalence_of_witnesses() {
    let mut a = OracleSession::new(2);
    let x = ratio(&a, &[1, 1], &[2, 1]);
    let w = extract_monotone(&mut a, &x).unwrap();
    let t = w.export(&mut a, 120, 20).unwrap();
    let same = metric_equiv_check(&mut a, &t, &t).unwrap();
    assert!(same.iter().all(|(_, g)| g.is_zero()));

    let mut b = OracleSession::new(9);
    let _ = b.decide(&IndexSet::Structured(EpSet::residue(3, &[1]).unwrap())).unwrap();
    let y = ratio(&b, &[1, 1], &[2, 1]);
    let w2 = extract_monotone(&mut b, &y).unwrap();
    let t2 = w2.export(&mut b, 120, 20).unwrap();
    for (s_band, gap) in metric_equiv_check(&mut a, &t, &t2).unwrap() {
        assert!(gap < Rational::from(s_band).recip().unwrap(), "band {s_band}: {gap}");
    }

    let z = recip_n1(&a);
    let wz = extract_monotone(&mut a, &z).unwrap();
    let tz = wz.export(&mut a, 50, 5).unwrap();
    assert!(matches!(metric_equiv_check(&mut a, &t, &tz), Err(Error::WitnessMismatch)));
}

#[test]
fn standard_part_examples() {
    let mut s = OracleSession::new(0);
    let eps = q("1/1000000");
    assert_eq!({ let c = embed(&s, q("3/4")); standard_part(&mut s, &c, &eps) }.unwrap(), q("3/4"));
    let f = ratio(&s, &[3, 2], &[1, 1]);
    let v = standard_part(&mut s, &f, &eps).unwrap();
    assert!((&v - &q("2")).abs() < eps);
    // far-out term agrees with the limit
    assert!((&f.term(10_000_000) - &v).abs() < eps);
    let r = recip_n1(&s);
    assert!(standard_part(&mut s, &r, &q("1/1000")).unwrap().abs() < q("1/1000"));
    let big = ratio(&s, &[0, 0, 1], &[1]);
    assert!(matches!(standard_part(&mut s, &big, &eps), Err(Error::InfiniteArgument)));
}

#[test]
fn band_route_agrees_with_limit() {
    let mut s = OracleSession::new(4);
    for (num, den) in [(&[3i64, 2][..], &[1i64, 1][..]), (&[1][..], &[1, 1][..]), (&[0, 1][..], &[1, 1][..])] {
        let x = ratio(&s, num, den);
        let exact = standard_part(&mut s, &x, &q("1/100")).unwrap();
        let w = extract_monotone(&mut s, &x).unwrap();
        for band in [1u64, 5, 20] {
            let by_bands = standard_part_by_bands(&mut s, &w, band).unwrap();
            assert!((&by_bands - &exact).abs() <= Rational::from(band).recip().unwrap());
        }
    }
}

#[test]
fn units_of_the_finite_ring() {
    let mut s = OracleSession::new(0);
    let f = ratio(&s, &[3, 2], &[1, 1]);
    assert!(is_unit_in_finite_ring(&mut s, &f).unwrap());
    let one = embed(&s, Rational::one());
    let inv = h_arith(&mut s, &one, &f, ArithOp::Div).unwrap();
    let v = standard_part(&mut s, &inv, &q("1/1000000")).unwrap();
    assert!((&v - &q("1/2")).abs() < q("1/1000000"));
    let r = recip_n1(&s);
    assert!(!is_unit_in_finite_ring(&mut s, &r).unwrap());
    assert!(is_unit_in_finite_ring(&mut s, &one).unwrap());
    let big = ratio(&s, &[0, 1], &[1]);
    assert!(matches!(is_unit_in_finite_ring(&mut s, &big), Err(Error::InfiniteArgument)));
}

#[test]
fn sides() {
    let mut s = OracleSession::new(0);
    let left = ratio(&s, &[0, 1], &[1, 1]);
    assert_eq!(side(&mut s, &left).unwrap(), Side::Left);
    let r = recip_n1(&s);
    assert_eq!(side(&mut s, &r).unwrap(), Side::Right);
    let nine = embed(&s, q("9"));
    assert_eq!(side(&mut s, &nine).unwrap(), Side::RationalPoint);
    let big = ratio(&s, &[0, 1], &[1]);
    assert!(matches!(side(&mut s, &big), Err(Error::InfiniteArgument)));
}

#[test]
fn real_approx_rejects_nonpositive_precision() {
    let mut s = OracleSession::new(0);
    let x = recip_n1(&s);
    let a = standard_part_approx(&mut s, &x).unwrap();
    assert!(a.approx(&Rational::zero()).is_err());
    assert_eq!(a.approx(&q("1/10")).unwrap(), *a.exact());
}
