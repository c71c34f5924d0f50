use occlogic::{parse_formula, Base, Formula};
use proptest::prelude::*;

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(vec!["p", "q", "r", "s_1", "long_name"]).prop_map(Formula::var);
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn display_parses_back(f in formula()) {
        let shown = f.to_string();
        prop_assert_eq!(parse_formula(&shown).unwrap(), f);
    }

    #[test]
    fn desugared_form_keeps_its_variables(f in formula()) {
        prop_assert_eq!(f.desugar().variables(), f.variables());
    }

    #[test]
    fn occurrences_are_numbered_in_order(fs in prop::collection::vec(formula(), 1..4)) {
        let text: Vec<String> = fs.iter().map(|f| f.to_string()).collect();
        let base = Base::parse(&text.join("\n")).unwrap();
        for (i, o) in base.occurrences().iter().enumerate() {
            prop_assert_eq!(o.id().0, i);
        }
    }
}
