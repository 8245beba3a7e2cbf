#![allow(dead_code)]

use proptest::prelude::*;
use symlift_core::rep_expr::RepExpr;

/// Random expression trees; dimensions stay small enough for exhaustive
/// character arithmetic.
pub fn expr_strategy() -> impl Strategy<Value = RepExpr> {
    let leaf = prop_oneof![
        4 => Just(RepExpr::Pi),
        1 => (-3i64..=3).prop_map(RepExpr::Det),
    ];
    leaf.prop_recursive(4, 12, 2, |inner| {
        prop_oneof![
            (0u64..=3, inner.clone()).prop_map(|(n, e)| RepExpr::sym(n, e)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RepExpr::tensor(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RepExpr::isobaric_sum(a, b)),
            inner.prop_map(RepExpr::dual),
        ]
    })
    .prop_filter("dimension at most 40", |e| e.dimension_by_shape() <= 40.into())
}
