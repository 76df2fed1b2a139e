mod common;

use common::*;
use proptest::prelude::*;
use sft_core::json::{
    delement_from_json, delement_to_json, polynomial_from_json, polynomial_to_json, weyl_from_json, weyl_to_json,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_round_trip(model in any_model(), raw in raw_terms(5, 4)) {
        let p = polynomial(&model, &raw);
        let text = polynomial_to_json(&p);
        prop_assert_eq!(polynomial_from_json(&text, &model).unwrap(), p.clone());
        prop_assert_eq!(polynomial_to_json(&polynomial_from_json(&text, &model).unwrap()), text);
    }

    #[test]
    fn weyl_round_trip(model in any_model(), raw in raw_terms(5, 4), tag in 0usize..3) {
        let w = weyl(&model, &raw, &[-1, 0, 2]);
        let alphabet = [None, Some("+"), Some("-")][tag];
        let text = weyl_to_json(&w, alphabet);
        prop_assert_eq!(weyl_from_json(&text, &model).unwrap(), w);
    }

    #[test]
    fn boundary_round_trip(model in any_model(), raw in raw_terms(5, 4)) {
        let x = boundary(&model, &raw);
        let text = delement_to_json(&x);
        prop_assert_eq!(delement_from_json(&text, &model, &model).unwrap(), x);
    }
}
