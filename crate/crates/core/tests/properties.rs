mod common;

use common::*;
use exformal::connection::{covariant_derivative_1form, evolutionary_commutator, riemann, Connection};
use exformal::exterior::{ext_d, pullback, wedge, Form, SubmanifoldMap};
use exformal::geometry::{double_dual_sign, hodge, Metric};
use exformal::symbolic::{
    diff, eval_at, is_zero, parse_expr, simplify, Assignment, Chart, Expr, FunctionTable, ZeroTest,
};
use exformal::transform::{inverse_legendre, legendre, poisson_bracket, PhaseSpace};
use proptest::prelude::*;
use rand::Rng;

fn zero(e: &Expr) -> bool {
    is_zero(e, &policy()) == ZeroTest::Zero
}

fn forms_equal(a: &Form, b: &Form) -> bool {
    form_vanishes(&a.sub(b).unwrap())
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn simplify_is_idempotent(seed in any::<u64>(), n in 1usize..=4) {
        let e = expr(&mut rng(seed), &chart(n), true);
        let once = simplify(&e);
        prop_assert_eq!(simplify(&once), once);
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let c = chart(n);
        let e = simplify(&expr(&mut rng(seed), &c, true));
        let back = parse_expr(&e.to_string(), &c, &[]).unwrap();
        prop_assert_eq!(simplify(&back), e);
    }

    #[test]
    fn derivative_matches_finite_difference(seed in any::<u64>(), n in 1usize..=3) {
        let c = chart(n);
        let mut r = rng(seed);
        let e = expr(&mut r, &c, true);
        let var = c.names()[r.gen_range(0..n)].clone();
        let d = diff(&e, &var);
        let mut at: Assignment = c.names().iter().map(|v| (v.clone(), r.gen_range(-1.5..1.5))).collect();
        let table = FunctionTable::new();
        let exact = eval_at(&d, &at, &table).unwrap();
        let h = 1e-5;
        let x0 = at[&var];
        at.insert(var.clone(), x0 + h);
        let up = eval_at(&e, &at, &table).unwrap();
        at.insert(var.clone(), x0 - h);
        let down = eval_at(&e, &at, &table).unwrap();
        let approx = (up - down) / (2.0 * h);
        prop_assert!((exact - approx).abs() < 1e-5 * (1.0 + exact.abs()), "{} vs {}", exact, approx);
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let c = chart(n);
        let p = r.gen_range(0..=n - 2);
        let a = form(&mut r, &c, p, true);
        prop_assert!(form_vanishes(&ext_d(&ext_d(&a))));
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let c = chart(n);
        let p = r.gen_range(0..n);
        let q = r.gen_range(0..n - p);
        let (a, b) = (form(&mut r, &c, p, true), form(&mut r, &c, q, true));
        let lhs = ext_d(&wedge(&a, &b).unwrap());
        let sign = Expr::int(if p % 2 == 0 { 1 } else { -1 });
        let rhs = wedge(&ext_d(&a), &b).unwrap().add(&wedge(&a, &ext_d(&b)).unwrap().scale(&sign)).unwrap();
        prop_assert!(forms_equal(&lhs, &rhs));
    }

    #[test]
    fn graded_commutativity(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let c = chart(n);
        let p = r.gen_range(0..=n);
        let q = r.gen_range(0..=n - p);
        let (a, b) = (form(&mut r, &c, p, false), form(&mut r, &c, q, false));
        let sign = Expr::int(if (p * q) % 2 == 0 { 1 } else { -1 });
        prop_assert!(forms_equal(&wedge(&a, &b).unwrap(), &wedge(&b, &a).unwrap().scale(&sign)));
    }

    #[test]
    fn pullback_is_natural(seed in any::<u64>()) {
        let mut r = rng(seed);
        let target = chart(3);
        let source = Chart::new(&["u", "w"]).unwrap();
        let map: Vec<Expr> = (0..3).map(|_| poly(&mut r, &source)).collect();
        let phi = SubmanifoldMap::new(source, target.clone(), map).unwrap();
        let p = r.gen_range(0..=1);
        let a = form(&mut r, &target, p, true);
        let b = form(&mut r, &target, 1 - p, false);
        prop_assert!(forms_equal(&pullback(&phi, &ext_d(&a)).unwrap(), &ext_d(&pullback(&phi, &a).unwrap())));
        prop_assert!(forms_equal(
            &pullback(&phi, &wedge(&a, &b).unwrap()).unwrap(),
            &wedge(&pullback(&phi, &a).unwrap(), &pullback(&phi, &b).unwrap()).unwrap()
        ));
    }

    #[test]
    fn hodge_involution_and_linearity(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let c = chart(n);
        let g = if n == 4 { Metric::minkowski(&c) } else { Metric::euclidean(&c) };
        let p = r.gen_range(0..=n);
        let a = form(&mut r, &c, p, true);
        let b = form(&mut r, &c, p, true);
        let twice = hodge(&hodge(&a, &g).unwrap(), &g).unwrap();
        prop_assert!(forms_equal(&twice, &a.scale(&Expr::int(double_dual_sign(&g, p)))));
        let k = small_int(&mut r);
        let lhs = hodge(&a.add(&b.scale(&k)).unwrap(), &g).unwrap();
        let rhs = hodge(&a, &g).unwrap().add(&hodge(&b, &g).unwrap().scale(&k)).unwrap();
        prop_assert!(forms_equal(&lhs, &rhs));
    }

    #[test]
    fn commutator_is_antisymmetrized_covariant_derivative(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let c = chart(n);
        let conn = connection(&mut r, &c);
        let a = form(&mut r, &c, 1, true);
        let k = evolutionary_commutator(&a, &conn).unwrap();
        let d = covariant_derivative_1form(&a, &conn).unwrap();
        for al in 0..n {
            for be in al + 1..n {
                let oracle = d.get(&[be, al]).clone() - d.get(&[al, be]).clone();
                prop_assert!(zero(&(k.component(&[al, be]) - oracle)));
            }
        }
    }

    #[test]
    fn riemann_symmetries(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = chart(3);
        let n = 3;
        let conn = connection(&mut r, &c);
        let rm = riemann(&conn);
        // symmetric part of a random connection is torsion-free
        let sym = Connection::new(&c, (0..n).map(|s| (0..n).map(|a| (0..n).map(|b| {
            (conn.get(s, a, b).clone() + conn.get(s, b, a).clone()) / Expr::int(2)
        }).collect()).collect()).collect()).unwrap();
        let rs = riemann(&sym);
        for i in 0..n { for j in 0..n { for m in 0..n { for l in 0..n {
            prop_assert!(zero(&(rm.get(&[i, j, m, l]).clone() + rm.get(&[i, j, l, m]).clone())));
            let cyc = rs.get(&[i, j, m, l]).clone() + rs.get(&[i, m, l, j]).clone() + rs.get(&[i, l, j, m]).clone();
            prop_assert!(zero(&cyc));
        }}}}
    }

    #[test]
    fn legendre_round_trip(seed in any::<u64>(), k in 1usize..=3) {
        let mut r = rng(seed);
        let l = random_lagrangian(&mut r, k);
        let (sys, _) = legendre(&l, &policy()).unwrap();
        let back = inverse_legendre(&sys, &policy()).unwrap();
        for e in l.difference(&back).unwrap() {
            prop_assert!(zero(&e));
        }
    }

    #[test]
    fn poisson_antisymmetry_and_jacobi(seed in any::<u64>()) {
        let mut r = rng(seed);
        let space = PhaseSpace::new(&["q1", "q2"], &["p1", "p2"]).unwrap();
        let c = space.chart().clone();
        let (f, g, h) = (poly(&mut r, &c), poly(&mut r, &c), poly(&mut r, &c));
        let pb = |a: &Expr, b: &Expr| poisson_bracket(a, b, &space);
        prop_assert!(zero(&(pb(&f, &g) + pb(&g, &f))));
        let jacobi = pb(&f, &pb(&g, &h)) + pb(&g, &pb(&h, &f)) + pb(&h, &pb(&f, &g));
        prop_assert!(zero(&jacobi));
    }
}
