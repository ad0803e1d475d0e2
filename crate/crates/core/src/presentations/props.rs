use proptest::prelude::*;

use super::*;
use crate::testing::presentation;

proptest! {
    #[test]
    fn expanded_algebras_validate(p in presentation()) {
        let a = expand(&p).unwrap();
        prop_assert!(a.validate().is_ok());
        prop_assert_eq!(a.dim(), 1 << p.generators.len());
    }

    #[test]
    fn render_parses_back_to_the_same_presentation(p in presentation()) {
        prop_assert_eq!(parse_presentation(p.render().as_bytes()).unwrap(), p);
    }
}
