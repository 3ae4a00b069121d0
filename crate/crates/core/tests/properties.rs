use proptest::prelude::*;

use kchlint_core::extraction::extract;
use kchlint_core::syntax::is_identifier;
use kchlint_core::validation::{distance, levenshtein};
use kchlint_core::{fix, parse, unparse, validate, KnowledgeBase};

fn kb() -> &'static KnowledgeBase {
    static KB: std::sync::OnceLock<KnowledgeBase> = std::sync::OnceLock::new();
    KB.get_or_init(KnowledgeBase::bundled)
}

fn ident() -> impl Strategy<Value = String> {
    "[a-z_][a-z0-9_]{0,7}".prop_filter("not a keyword", |s| is_identifier(s))
}

fn atom() -> impl Strategy<Value = String> {
    prop_oneof![
        ident(),
        (0u32..1000).prop_map(|n| n.to_string()),
        "[a-z]{0,6}\\.(csv|json|xlsx|txt)".prop_map(|s| format!("'{s}'")),
        Just("None".to_string()),
    ]
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = atom();
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (ident(), prop::collection::vec(inner.clone(), 0..3)).prop_map(|(f, a)| format!("{f}({})", a.join(", "))),
            (
                prop_oneof![Just("np"), Just("pd"), Just("plt"), Just("requests"), Just("json")],
                ident(),
                prop::collection::vec(inner.clone(), 0..3)
            )
                .prop_map(|(m, f, a)| format!("{m}.{f}({})", a.join(", "))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
            prop::collection::vec(inner.clone(), 0..3).prop_map(|a| format!("[{}]", a.join(", "))),
            (inner, ident()).prop_map(|(a, m)| format!("({a}).{m}()")),
        ]
    })
}

fn statement() -> impl Strategy<Value = String> {
    prop_oneof![
        (ident(), expr()).prop_map(|(n, e)| format!("{n} = {e}\n")),
        expr().prop_map(|e| format!("{e}\n")),
        (expr(), ident(), expr()).prop_map(|(c, n, e)| format!("if {c}:\n    {n} = {e}\nelse:\n    pass\n")),
        (ident(), ident(), expr()).prop_map(|(f, p, e)| format!("def {f}({p}):\n    return {e}\n")),
        (ident(), expr(), expr()).prop_map(|(n, it, e)| format!("for {n} in {it}:\n    print({e})\n")),
    ]
}

fn program() -> impl Strategy<Value = String> {
    let imports = prop::sample::subsequence(
        vec![
            "import numpy as np\n",
            "import pandas as pd\n",
            "import json\n",
            "import requests\n",
            "import matplotlib.pyplot as plt\n",
        ],
        0..=5,
    );
    (imports, prop::collection::vec(statement(), 1..6)).prop_map(|(i, s)| format!("{}{}", i.concat(), s.concat()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn levenshtein_is_a_metric(a in "[ab_é]{0,10}", b in "[ab_é]{0,10}", c in "[ab_é]{0,10}") {
        prop_assert_eq!(levenshtein(&a, &a), 0);
        prop_assert_eq!(levenshtein(&a, &b), levenshtein(&b, &a));
        prop_assert!(levenshtein(&a, &c) <= levenshtein(&a, &b) + levenshtein(&b, &c));
        let (la, lb) = (a.chars().count(), b.chars().count());
        let d = levenshtein(&a, &b);
        prop_assert!(la.abs_diff(lb) <= d && d <= la.max(lb));
        prop_assert_eq!(d == 0, a == b);
    }

    #[test]
    fn threshold_never_exceeds_two(name in "[a-z_]{0,30}") {
        let limit = distance::max_accepted(&name);
        prop_assert!(limit <= 2);
        prop_assert!(limit <= name.chars().count().div_ceil(3));
    }

    #[test]
    fn round_trip_is_structural(src in program()) {
        let first = parse(&src).unwrap();
        let text = unparse(&first);
        let second = parse(&text).unwrap();
        prop_assert!(first.structurally_eq(&second), "{}\n---\n{}", src, text);
        prop_assert_eq!(unparse(&second), text);
    }

    #[test]
    fn every_call_is_extracted(src in program()) {
        let module = parse(&src).unwrap();
        prop_assert_eq!(extract(&module).call_sites.len(), module.call_count());
    }

    #[test]
    fn diagnostics_point_into_source(src in program()) {
        let module = parse(&src).unwrap();
        let diags = validate(&module, kb());
        for d in &diags {
            prop_assert!(d.span.start <= d.span.end && d.span.end <= src.len());
        }
        prop_assert!(diags.windows(2).all(|w| (w[0].span.start, w[0].span.end) <= (w[1].span.start, w[1].span.end)));
    }

    #[test]
    fn fix_converges(src in program()) {
        let first = fix(&src, kb());
        prop_assert!(first.parse_failure.is_none());
        prop_assert!(parse(&first.fixed_source).is_ok(), "{}", first.fixed_source);
        let second = fix(&first.fixed_source, kb());
        prop_assert!(!second.changed(), "{}\n---\n{}\n{:?}", src, first.fixed_source, second.edits);
        prop_assert_eq!(second.fixed_source, first.fixed_source);
    }
}

#[test]
fn bundled_kb_survives_json_round_trip() {
    let kb = kb();
    let again = KnowledgeBase::load_manifest(kb.to_json().as_bytes()).unwrap();
    assert_eq!(&again, kb);
    assert_eq!(&kb.merge(kb), kb);
}
