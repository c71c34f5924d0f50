use occlogic::{parse_formula, Answer, Base, Caps, Relation, Session};
use occlogic_testkit::suites::{containment_suite, separation_suite, K2, SEPARATIONS};

#[test]
fn inclusions_hold_on_random_queries() {
    for t in containment_suite(0x5eed_0003, 600) {
        println!("{t}");
        assert!(t.checked > 0 && t.passed(), "{t}");
    }
}

fn verdict(base: &str, query: &str, r: Relation) -> bool {
    let b = Base::parse(base).unwrap();
    let s = Session::new(&b, Caps::default());
    s.entails(r, &parse_formula(query).unwrap())
        .unwrap()
        .holds()
}

#[test]
fn documented_separations_reproduce() {
    let t = separation_suite();
    assert!(t.checked == SEPARATIONS.len() && t.passed(), "{t}");
}

#[test]
fn k2_verdict_rows() {
    let row = |q: &str| -> Vec<bool> {
        [Relation::M1, Relation::M2, Relation::MB1, Relation::MB2]
            .into_iter()
            .map(|r| verdict(K2, q, r))
            .collect()
    };
    assert_eq!(row("p"), [true, false, true, false]);
    assert_eq!(row("q"), [false, false, true, true]);
}

#[test]
fn negative_answers_carry_witnesses() {
    let b = Base::parse(K2).unwrap();
    let s = Session::new(&b, Caps::default());
    let p = parse_formula("p").unwrap();
    match s.entails(Relation::M2, &p).unwrap() {
        Answer::Renaming(v) => {
            assert!(!v.holds);
            let w = &v.witnesses[0];
            assert_eq!(
                w.substitution.as_deref(),
                Some(&[("p".to_string(), "p__2".to_string())][..])
            );
        }
        other => panic!("{other:?}"),
    }
    match s.entails(Relation::A2, &p).unwrap() {
        Answer::OSem(v) => {
            assert!(!v.holds);
            let w = v.witness.unwrap();
            assert_eq!(w.valuation.unwrap().get("p"), Some(false));
        }
        other => panic!("{other:?}"),
    }
    match s
        .entails(Relation::Lpm, &parse_formula("q").unwrap())
        .unwrap()
    {
        Answer::Lpm(v) => {
            assert!(!v.holds);
            assert_eq!(v.counter_model.unwrap().to_string(), "{p={0,1}, q={0}}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn off_base_query_variables_are_not_chosen() {
    // a consistent base says nothing about t
    for r in Relation::ALL {
        assert!(!verdict("p", "t", r), "{r}");
        assert!(verdict("p", "t | !t", r), "{r}");
    }
}
