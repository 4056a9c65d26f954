//! Worked examples for each module. Values marked "oracle" are recomputed here
//! by brute force before being compared with the main algorithms.

use sprank_core::graph::{children, find_path, is_edge, reach_root, Vertex};
use sprank_core::ideals::{self, contains, generators, key_of, valuation, FgMonomialIdeal};
use sprank_core::index_seq::in_u;
use sprank_core::monoid::{
    content, monomial_equal, monomial_gcd, root_exponent, vertex_divides, vertex_quotient, Monomial,
};
use sprank_core::oracle::{brute_paths, peel, verify_gcd, window_exponents, IndexBox};
use sprank_core::ordinal::{Ordinal, OrdinalKind};
use sprank_core::sprank::{
    crit_chain_report, crit_stage, is_critical, is_n_critical, sp_rank, Justification, NValue,
};
use sprank_core::{Construction, IndexSeq, MaxIdealKey, WeightScheme};

const TWO: WeightScheme = WeightScheme::Constant(2);

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}
fn seq(s: &str) -> IndexSeq {
    s.parse().unwrap()
}
fn v(s: &str) -> Vertex {
    s.parse().unwrap()
}
fn m(s: &str) -> Monomial {
    s.parse().unwrap()
}
fn k(s: &str) -> MaxIdealKey {
    s.parse().unwrap()
}
fn a3_box() -> IndexBox {
    "{1<=8, 2<=8, depth<=3, branch<=8}".parse().unwrap()
}

#[test]
fn ordinal_examples() {
    assert!(o("w") > o("5"));
    assert_eq!(o("w*2+3").cmp(&o("w*2+3")), std::cmp::Ordering::Equal);
    assert!(o("w^2+1") > o("w*7+9"));
    assert_eq!(o("0").classify(), OrdinalKind::Zero);
    assert_eq!(
        o("w+1").classify(),
        OrdinalKind::Successor {
            predecessor: o("w")
        }
    );
    assert_eq!(o("w*2").classify(), OrdinalKind::Limit);
    assert_eq!(o("w+3").split_limit(), (o("w"), 3));
    assert_eq!(o("4").split_limit(), (o("0"), 4));
    assert_eq!(o("w^2").split_limit(), (o("w^2"), 0));
    assert_eq!(
        o("w+1").successors_below(&o("0"), 3),
        vec![o("1"), o("2"), o("3")]
    );
    assert_eq!(o("5").successors_below(&o("2"), 10), vec![o("3"), o("4")]);
    assert_eq!(
        o("w*2").successors_below(&o("w"), 2),
        vec![o("w+1"), o("w+2")]
    );
}

#[test]
fn index_seq_examples() {
    assert_eq!(seq("{1=2, 2=1}").tau(&o("1")), seq("{2=1}"));
    assert_eq!(seq("{1=2, 2=1}").tau(&o("0")), seq("{1=2, 2=1}"));
    assert_eq!(seq("{3=5, w=2}").tau(&o("w")), seq("{}"));
    assert_eq!(seq("{}").add_e_nat(&o("1"), 1).unwrap(), seq("{1=1}"));
    assert_eq!(
        seq("{1=2, 2=1}").add_e_nat(&o("1"), 3).unwrap(),
        seq("{1=5, 2=1}")
    );
    assert_eq!(seq("{}").add_e(&o("w"), &o("w+1")).unwrap(), seq("{w=w+1}"));
    assert!(in_u(&o("3"), &seq("{3=2, 4=1, w=w}")));
    assert!(!in_u(&o("w"), &seq("{w=w}")));
    assert!(!in_u(&o("2"), &seq("{1=1}")));
}

#[test]
fn graph_examples() {
    for n in 0..4 {
        for kk in 1..4 {
            assert!(is_edge(
                &v(&format!("X[2; {{2={n}}}]")),
                &v(&format!("X[1; {{2={}}}]", n + kk))
            ));
        }
    }
    assert!(!is_edge(&v("X[1; {1=1, 2=2}]"), &v("X[0; {1=1, 2=2}]")));
    assert!(is_edge(&v("X[w; {w=3}]"), &v("X[5; {}]")));
    assert_eq!(
        children(&v("X[1; {1=3, 2=1}]"), 3).unwrap(),
        vec![
            v("X[0; {1=4, 2=1}]"),
            v("X[0; {1=5, 2=1}]"),
            v("X[0; {1=6, 2=1}]")
        ]
    );
    assert_eq!(
        children(&v("X[w; {w=2}]"), 2).unwrap(),
        vec![v("X[3; {}]"), v("X[4; {}]")]
    );
    assert!(children(&v("X[0; {1=1}]"), 2).is_err());
    assert_eq!(
        find_path(&v("X[1; {1=1, 2=2}]"), &v("X[0; {1=3, 2=2}]"))
            .unwrap()
            .len(),
        1
    );
    assert!(find_path(&v("X[1; {1=1, 2=2}]"), &v("X[0; {1=1, 2=2}]")).is_none());
    let x = v("X[0; {1=3}]");
    assert_eq!(reach_root(&x), x);
    assert_eq!(reach_root(&v("X[1; {1=2, 2=7}]")), v("X[0; {1=3, 2=7}]"));
}

#[test]
fn path_through_middle_matches_oracle() {
    let (top, leaf) = (v("X[2; {}]"), v("X[0; {1=2, 2=3}]"));
    let bx: IndexBox = "{1<=6, 2<=6, depth<=3, branch<=5}".parse().unwrap();
    let brute = brute_paths(&top, &leaf, &bx);
    assert_eq!(brute.len(), 1);
    let p = find_path(&top, &leaf).unwrap();
    assert_eq!(brute[0], p);
    assert_eq!(p.len(), 2);
    assert_eq!(p.vertices()[1], v("X[1; {2=3}]"));
}

#[test]
fn reach_root_of_w_n_matches_oracle() {
    for n in 0..4 {
        let w = v(&format!("X[2; {{2={n}}}]"));
        let r = reach_root(&w);
        assert_eq!(r, v(&format!("X[0; {{1=1, 2={}}}]", n + 1)));
        assert!(find_path(&w, &r).is_some());
        let window = window_exponents(&w.clone().into(), &a3_box(), &TWO).unwrap();
        assert!(window.contains_key(r.index()));
    }
}

#[test]
fn root_exponents() {
    assert_eq!(
        root_exponent(&v("X[1; {1=1, 2=3}]"), &seq("{1=2, 2=3}"), &TWO).unwrap(),
        2
    );
    assert_eq!(
        root_exponent(&v("X[0; {1=1}]"), &seq("{1=1}"), &TWO).unwrap(),
        1
    );
    let bx = a3_box();
    for n in 0..3u64 {
        let w = v(&format!("X[2; {{2={n}}}]"));
        let window = window_exponents(&w.clone().into(), &bx, &TWO).unwrap();
        for r in bx.leaves() {
            let (a, b) = (
                r.get(&o("1")).as_nat().unwrap(),
                r.get(&o("2")).as_nat().unwrap(),
            );
            let want = if b > n && a >= 1 { 4 } else { 0 };
            assert_eq!(window.get(&r).copied().unwrap_or(0), want);
            assert_eq!(root_exponent(&w, &r, &TWO).unwrap(), want);
        }
    }
}

#[test]
fn divisibility_examples() {
    let bx = a3_box();
    assert!(vertex_divides(&v("X[1; {1=3, 2=1}]"), &v("X[1; {1=2, 2=1}]"), &TWO).unwrap());
    assert!(!vertex_divides(&v("X[2; {2=1}]"), &v("X[1; {1=1, 2=3}]"), &TWO).unwrap());
    // X[1; {2=2}]^2 inside W_0, checked on exponent windows first
    let w0 = window_exponents(&m("X[2; {}]"), &bx, &TWO).unwrap();
    let z2 = window_exponents(&m("X[1; {2=2}]^2"), &bx, &TWO).unwrap();
    assert!(z2
        .iter()
        .all(|(r, e)| w0.get(r).copied().unwrap_or(0) >= *e));
    assert!(vertex_divides(&v("X[1; {2=2}]"), &v("X[2; {}]"), &TWO).unwrap());
    assert_eq!(
        vertex_quotient(&v("X[1; {1=2, 2=1}]"), &v("X[1; {1=3, 2=1}]"), &TWO).unwrap(),
        m("X[0; {1=3, 2=1}]^2")
    );
    let x = v("X[w; {w=4}]");
    assert!(vertex_quotient(&x, &x, &TWO).unwrap().is_one());
}

#[test]
fn limit_quotient_matches_windows() {
    let bx: IndexBox = "{1<=4, 2<=4, 3<=4, 4<=4, w<=3}".parse().unwrap();
    let (big, small) = (v("X[w; {w=1}]"), v("X[w; {w=3}]"));
    let want = m("X[2; {}]^2 * X[3; {}]^2");
    let lhs = window_exponents(&big.clone().into(), &bx, &TWO).unwrap();
    let rhs = window_exponents(&m("X[w; {w=3}] * X[2; {}]^2 * X[3; {}]^2"), &bx, &TWO).unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(vertex_quotient(&big, &small, &TWO).unwrap(), want);
}

#[test]
fn gcd_examples() {
    let bx = a3_box();
    let x = m("X[w; {w=4}]");
    let g = monomial_gcd(&x, &x, &TWO).unwrap();
    assert_eq!(g.gcd, x);
    assert!(g.left_quotient.is_one() && g.right_quotient.is_one());
    let g = monomial_gcd(&m("X[0; {1=1}]"), &m("X[0; {1=2}]"), &TWO).unwrap();
    assert!(g.gcd.is_one());
    let (a, b) = (m("X[w; {w=5}]"), m("X[w; {w=2}]"));
    let g = monomial_gcd(&a, &b, &TWO).unwrap();
    assert_eq!(g.gcd, a);
    let wb: IndexBox = "{1<=7, 2<=7, 3<=7, 4<=7, 5<=7, 6<=7, w<=1}"
        .parse()
        .unwrap();
    assert!(verify_gcd(&g, &a, &b, &wb, &TWO).unwrap());
    let g = monomial_gcd(&m("X[2; {}]"), &m("X[1; {2=2}]"), &TWO).unwrap();
    assert_eq!(g.gcd, m("X[1; {2=2}]"));
    assert!(g.right_quotient.is_one());
    assert!(verify_gcd(&g, &m("X[2; {}]"), &m("X[1; {2=2}]"), &bx, &TWO).unwrap());
    let g = monomial_gcd(
        &m("X[0; {1=1}] * X[0; {1=2}]"),
        &m("X[0; {1=1}] * X[0; {1=3}]"),
        &TWO,
    )
    .unwrap();
    assert_eq!(g.gcd, m("X[0; {1=1}]"));
    assert!(monomial_gcd(&x, &Monomial::one(), &TWO)
        .unwrap()
        .gcd
        .is_one());
}

#[test]
fn equality_and_content() {
    assert!(monomial_equal(
        &m("X[1; {1=1, 2=2}]"),
        &m("X[0; {1=2, 2=2}]^2 * X[1; {1=2, 2=2}]"),
        &TWO
    )
    .unwrap());
    assert!(!monomial_equal(&m("X[1; {}]"), &Monomial::one(), &TWO).unwrap());
    assert!(!monomial_equal(&m("X[0; {1=1}]"), &m("X[0; {1=2}]"), &TWO).unwrap());
    let x = m("X[1; {2=4}] * X[0; {1=1}]");
    assert_eq!(content(std::slice::from_ref(&x), &TWO).unwrap(), x);
    assert_eq!(
        content(
            &[
                m("X[0; {1=1}] * X[0; {1=2}]"),
                m("X[0; {1=1}] * X[0; {1=3}]")
            ],
            &TWO
        )
        .unwrap(),
        m("X[0; {1=1}]")
    );
    let w0 = window_exponents(&m("X[2; {}]"), &a3_box(), &TWO).unwrap();
    let z1 = window_exponents(&m("X[1; {2=1}]"), &a3_box(), &TWO).unwrap();
    assert!(z1.iter().all(|(r, e)| w0[r] >= *e));
    assert_eq!(
        content(&[m("X[1; {2=1}]"), m("X[2; {}]")], &TWO).unwrap(),
        m("X[1; {2=1}]")
    );
}

#[test]
fn ideal_examples() {
    for a in 0..4 {
        assert_eq!(
            key_of(&o("1"), &seq(&format!("{{1={a}, 2=3}}"))).unwrap(),
            k("M[1; {2=3}]")
        );
        assert_eq!(
            key_of(&o("2"), &seq(&format!("{{2={a}}}"))).unwrap(),
            k("M[2; {}]")
        );
    }
    assert_eq!(key_of(&o("0"), &seq("{1=1}")).unwrap(), k("M[0; {1=1}]"));
    assert_eq!(generators(&k("M[1; {2=5}]"), 3).unwrap().len(), 3);
    assert_eq!(
        generators(&k("M[2; {}]"), 2).unwrap(),
        vec![v("X[2; {}]"), v("X[2; {2=1}]")]
    );
    assert!(contains(&k("M[1; {2=5}]"), &m("X[1; {1=3, 2=5}]"), &TWO).unwrap());
    assert!(!contains(&k("M[1; {2=5}]"), &m("X[0; {1=3, 2=5}]"), &TWO).unwrap());
    for n in 0..3 {
        let wn = m(&format!("X[2; {{2={n}}}]"));
        assert!(contains(&k(&format!("M[1; {{2={}}}]", n + 1)), &wn, &TWO).unwrap());
    }
}

#[test]
fn valuation_examples_match_peeling() {
    for n in 0..3u64 {
        let wn = v(&format!("X[2; {{2={n}}}]"));
        let peeled = peel(&wn, 1, &TWO).unwrap();
        assert_eq!(
            peeled,
            m(&format!("X[1; {{2={}}}]^2 * X[2; {{2={}}}]", n + 1, n + 1))
        );
        assert_eq!(
            valuation(&k("M[2; {}]"), &wn.clone().into(), &TWO).unwrap(),
            1
        );
        for b in n + 1..n + 4 {
            let key = k(&format!("M[1; {{2={b}}}]"));
            assert_eq!(valuation(&key, &wn.clone().into(), &TWO).unwrap(), 2);
        }
    }
    for a2 in 0..3u64 {
        let z = m(&format!("X[1; {{1={a2}, 2=1}}]"));
        for a in 0..6u64 {
            let key = k(&format!("M[0; {{1={a}, 2=1}}]"));
            let want = if a > a2 { 2 } else { 0 };
            assert_eq!(valuation(&key, &z, &TWO).unwrap(), want);
        }
    }
}

#[test]
fn ideal_function_examples() {
    let i: FgMonomialIdeal = "( X[1; {2=2}] )".parse().unwrap();
    assert_eq!(
        ideals::ideal_function(&i, &k("M[1; {2=2}]"), &TWO).unwrap(),
        1
    );
    for a in 1..4 {
        let key = k(&format!("M[0; {{1={a}, 2=2}}]"));
        assert_eq!(ideals::ideal_function(&i, &key, &TWO).unwrap(), 2);
    }
    assert_eq!(
        ideals::ideal_function(&i, &k("M[0; {2=2}]"), &TWO).unwrap(),
        0
    );
    assert_eq!(
        ideals::ideal_function(&i, &k("M[1; {2=3}]"), &TWO).unwrap(),
        0
    );
    let j: FgMonomialIdeal = "( X[0; {1=1}] ; X[0; {1=2}] )".parse().unwrap();
    assert_eq!(
        ideals::ideal_function(&j, &k("M[0; {1=1}]"), &TWO).unwrap(),
        0
    );
}

#[test]
fn sprank_examples() {
    let a3 = Construction::example_a3();
    assert!(
        !is_critical(&k("M[0; {1=2, 2=2}]"), &o("0"), &TWO)
            .unwrap()
            .verdict
    );
    let d = is_critical(&k("M[2; {}]"), &o("1"), &TWO).unwrap();
    assert!(d.verdict);
    let Justification::ChildSquareWitness { witnesses } = d.justification else {
        panic!("expected a square witness")
    };
    assert!(witnesses.iter().all(|w| w.child.height() == &o("1")));
    let d = is_critical(&k("M[1; {2=4}]"), &o("1"), &TWO).unwrap();
    assert!(matches!(
        d.justification,
        Justification::PrincipalAtStage { .. }
    ));
    assert_eq!(crit_stage(&o("1"), &a3).unwrap().threshold, o("1"));
    assert_eq!(crit_stage(&o("2"), &a3).unwrap().threshold, o("2"));
    assert!(crit_stage(&o("3"), &a3).unwrap().is_empty());
    assert_eq!(crit_stage(&o("0"), &a3).unwrap().threshold, o("0"));
    assert_eq!(sp_rank(&a3).unwrap(), o("3"));
    let one = Construction::new(o("1"), TWO).unwrap();
    assert_eq!(sp_rank(&one).unwrap(), o("1"));
    let wp1 = Construction::new(o("w+1"), TWO).unwrap();
    assert_eq!(sp_rank(&wp1).unwrap(), o("w+1"));
}

#[test]
fn n_critical_examples() {
    let d = is_n_critical(&k("M[1; {}]"), &o("0"), NValue::Nat(2), &TWO).unwrap();
    assert!(!d.verdict);
    let Justification::WitnessIdeal { ideal, sup } = d.justification else {
        panic!("expected a witness ideal")
    };
    assert_eq!(sup, 2);
    assert_eq!(ideal.generators(), &[m("X[1; {}]")]);
    let three = WeightScheme::Constant(3);
    assert!(
        is_n_critical(&k("M[1; {}]"), &o("0"), NValue::Nat(2), &three)
            .unwrap()
            .verdict
    );
    for n in 1..=6u64 {
        let d = is_n_critical(&k("M[w; {}]"), &o("0"), NValue::Nat(n), &TWO).unwrap();
        assert!(d.verdict);
        // oracle: some descent of length <= 6 from X[w; {}] has weight 2^len > n
        let bx: IndexBox = "{1<=6, 2<=6, 3<=6, 4<=6, 5<=6, 6<=6, depth<=7, branch<=6}"
            .parse()
            .unwrap();
        let w = window_exponents(&m("X[w; {}]"), &bx, &TWO).unwrap();
        assert!(w.values().any(|&e| e > n));
    }
    assert!(
        is_n_critical(&k("M[w; {}]"), &o("0"), NValue::Omega, &TWO)
            .unwrap()
            .verdict
    );
}

#[test]
fn chain_report_examples() {
    let two = Construction::new(o("2"), TWO).unwrap();
    let r = crit_chain_report(&two, &[NValue::Nat(2)], &[o("0"), o("1"), o("2")]).unwrap();
    assert_eq!(r.stages[1].n_critical["2"], o("2"));
    let three = Construction::new(o("2"), WeightScheme::Constant(3)).unwrap();
    let r = crit_chain_report(
        &three,
        &[NValue::Nat(2), NValue::Nat(3)],
        &[o("0"), o("1"), o("2")],
    )
    .unwrap();
    for row in &r.stages {
        assert_eq!(row.n_critical["2"], row.threshold);
    }
    assert_eq!(r.stages[1].n_critical["3"], o("2"));
    assert!(r.discrepancies.is_empty());
}
