//! Deterministic rule set over extracted features.
//!
//! Rules, per call site:
//! - unknown API: a qualified callee (or a tracked object's method) that the
//!   knowledge base does not list;
//! - argument shape: a reader whose file-literal extension maps to a
//!   different reader;
//! - intent: a comment or assigned name cues a different callable of the
//!   same library.
//!
//! At most one of these fires per callee, in that order. Module-wide rules
//! flag bare calls to library functions, canonical aliases used without an
//! import, and undefined identifiers.

mod builtins;
mod diagnostic;
pub mod distance;
mod rules;

pub use builtins::{is_builtin, BUILTINS};
pub use diagnostic::{Category, Confidence, Diagnostic, FixKind, RequiredImport, SuggestedFix};
pub use distance::levenshtein;

use crate::extraction::{self, Features};
use crate::knowledge_base::KnowledgeBase;
use crate::syntax::Module;
use rules::Rules;

/// Per-rule switches. Disabling a rule removes only its own diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    pub unknown_api: bool,
    pub bare_call: bool,
    pub argument_shape: bool,
    pub intent: bool,
    pub identifiers: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { unknown_api: true, bare_call: true, argument_shape: true, intent: true, identifiers: true }
    }
}

impl ValidationOptions {
    pub fn only(category: Category) -> ValidationOptions {
        let mut o = ValidationOptions {
            unknown_api: false,
            bare_call: false,
            argument_shape: false,
            intent: false,
            identifiers: false,
        };
        o.set(category, true);
        o
    }

    pub fn set(&mut self, category: Category, on: bool) {
        match category {
            Category::UnknownApi => self.unknown_api = on,
            Category::BareCriticalCall => self.bare_call = on,
            Category::SemanticArgumentShape => self.argument_shape = on,
            Category::SemanticIntent => self.intent = on,
            Category::IdentifierConflict => self.identifiers = on,
        }
    }
}

/// All diagnostics for `module`, in source order.
pub fn validate(module: &Module, kb: &KnowledgeBase) -> Vec<Diagnostic> {
    validate_with(module, kb, ValidationOptions::default())
}

pub fn validate_with(module: &Module, kb: &KnowledgeBase, options: ValidationOptions) -> Vec<Diagnostic> {
    validate_features(&extraction::extract(module), kb, options)
}

pub fn validate_features(features: &Features, kb: &KnowledgeBase, options: ValidationOptions) -> Vec<Diagnostic> {
    let rules = Rules { kb, features };
    let mut out = Vec::new();
    for site in &features.call_sites {
        // Precedence is decided on what each rule finds, not on which
        // rules are switched on, so toggling one never changes another.
        let unknown = rules.unknown_api(site);
        let shape = if unknown.is_none() { rules.argument_shape(site) } else { None };
        let intent = if unknown.is_none() && shape.is_none() { rules.intent(site) } else { None };
        if options.unknown_api {
            out.extend(unknown);
        }
        if options.argument_shape {
            out.extend(shape);
        }
        if options.intent {
            out.extend(intent);
        }
        if options.bare_call {
            out.extend(rules.bare_call(site));
        }
    }
    if options.bare_call {
        out.extend(rules.missing_imports());
    }
    if options.identifiers {
        out.extend(rules.identifiers());
    }
    out.sort_by_key(|a| (a.span.start, a.span.end, a.category));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use std::sync::OnceLock;

    fn kb() -> &'static KnowledgeBase {
        static KB: OnceLock<KnowledgeBase> = OnceLock::new();
        KB.get_or_init(KnowledgeBase::bundled)
    }

    fn check(src: &str) -> Vec<Diagnostic> {
        validate(&parse(src).unwrap(), kb())
    }

    fn summary(src: &str) -> Vec<(Category, String, Option<String>)> {
        check(src).into_iter().map(|d| (d.category, d.subject, d.suggestion.map(|s| s.replacement))).collect()
    }

    fn one(cat: Category, subject: &str, fix: Option<&str>) -> Vec<(Category, String, Option<String>)> {
        vec![(cat, subject.to_string(), fix.map(str::to_string))]
    }

    #[test]
    fn clean_snippet() {
        assert!(check("import pandas as pd\ndf = pd.read_csv('f.csv')\nprint(df.head())\n").is_empty());
    }

    #[test]
    fn read_exel_with_csv_context() {
        let d = check("import pandas as pd\npd.read_exel('data.csv')");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].category, Category::UnknownApi);
        let fix = d[0].suggestion.as_ref().unwrap();
        assert_eq!(fix.kind, FixKind::RewriteCalleeForContext);
        assert_eq!(fix.replacement, "pd.read_csv");
    }

    #[test]
    fn two_errors_in_source_order() {
        let got = summary("import numpy as np\nimport pandas as pd\na = np.arrya([1])\nb = pd.read_exel('x.xlsx')\n");
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].1, "np.arrya");
        assert_eq!(got[1].2.as_deref(), Some("pd.read_excel"));
    }

    #[test]
    fn unknown_api() {
        assert_eq!(
            summary("import pandas as pd\np = 1\npd.read_exel(p)"),
            one(Category::UnknownApi, "pd.read_exel", Some("pd.read_excel"))
        );
        assert_eq!(
            summary("import numpy as np\nnp.arrya([1, 2])"),
            one(Category::UnknownApi, "np.arrya", Some("np.array"))
        );
        assert_eq!(
            summary("import matplotlib.pyplot as plt\nx = [1]\nplt.plotx(x)\n"),
            one(Category::UnknownApi, "plt.plotx", Some("plt.plot"))
        );
        assert_eq!(summary("import pandas as pd\npd.zzqq()"), one(Category::UnknownApi, "pd.zzqq", None));
        assert!(check("import pandas as pd\npd.read_csv('f.csv')").is_empty());
    }

    #[test]
    fn unknown_libraries_and_submodules_are_skipped() {
        assert!(check("import scipy\nscipy.anything(1)\n").is_empty());
        assert!(check("import numpy as np\nx = np.random.rand(3)\n").is_empty());
    }

    #[test]
    fn from_import_typo_is_detect_only() {
        let d = check("from json import loadz\ns = 1\nloadz(s)\n");
        assert_eq!(d.len(), 1);
        assert!(d[0].suggestion.is_none());
        assert!(check("from json import loads\ns = 1\nloads(s)\n").is_empty());
    }

    #[test]
    fn bare_calls() {
        let got = check("df = read_csv('f.csv')");
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].category, Category::BareCriticalCall);
        let fix = got[0].suggestion.as_ref().unwrap();
        assert_eq!(fix.replacement, "pd.read_csv");
        assert_eq!(fix.required_import.as_ref().unwrap().to_string(), "import pandas as pd");

        let got = summary("data = [1, 2]\nplot(data, data)\n");
        assert_eq!(got, one(Category::BareCriticalCall, "plot", Some("plt.plot")));
        assert!(check("x = 1\nprint(x)\n").is_empty());
    }

    #[test]
    fn bare_call_reuses_existing_alias() {
        let d = check("import pandas as pandas_lib\ndf = read_csv('a.csv')\n");
        let fix = d[0].suggestion.as_ref().unwrap();
        assert_eq!(fix.replacement, "pandas_lib.read_csv");
        assert!(fix.required_import.is_none());
    }

    #[test]
    fn bare_call_preference_and_ambiguity() {
        assert_eq!(summary("r = get('https://x.org')").last().unwrap().2.as_deref(), Some("requests.get"));
        let d = check("x = unique(v)\nv = 1\n");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].category, Category::BareCriticalCall);
        assert_eq!(d[0].suggestion.as_ref().unwrap().replacement, "np.unique");
        let d = check("v = 1\ntest(v)\n");
        assert_eq!(d.len(), 1);
        assert!(d[0].suggestion.is_none(), "{d:?}");
    }

    #[test]
    fn locally_defined_bare_names_are_fine() {
        assert!(check("def read_csv(p):\n    return p\nread_csv('a.csv')\n").is_empty());
    }

    #[test]
    fn canonical_alias_without_import() {
        let got = summary("a = np.array([1])\n");
        assert_eq!(got, one(Category::BareCriticalCall, "np", Some("np")));
        let got = summary("a = np.arrya([1])\n");
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn argument_shape() {
        assert_eq!(
            summary("import pandas as pd\ndf = pd.read_excel('f.csv')\n"),
            one(Category::SemanticArgumentShape, "pd.read_excel", Some("pd.read_csv"))
        );
        assert!(check("import pandas as pd\ndf = pd.read_csv('f.csv')\n").is_empty());
        assert!(check("import pandas as pd\ndf = pd.read_csv(path_var)\npath_var = 1\n").is_empty());
        assert!(check("import pandas as pd\ndf = pd.read_csv('f.txt')\n").is_empty());
        assert_eq!(summary("import pandas as pd\ndf = pd.read_csv('f.json')\n")[0].2.as_deref(), Some("pd.read_json"));
    }

    #[test]
    fn intent_synonym() {
        assert_eq!(
            summary("import numpy as np\navg = np.sum(x)  # compute the average\nx = 1\n"),
            one(Category::SemanticIntent, "np.sum", Some("np.mean"))
        );
        assert!(check("import numpy as np\nx = [1]\ntotal = np.sum(x)\n").is_empty());
        assert!(check("import numpy as np\nx = [1]\navg = np.mean(x)  # the average\n").is_empty());
        assert_eq!(summary("import numpy as np\nx = [1]\nx_average = np.sum(x)\n").len(), 1);
        // Nested calls carry no cue.
        assert!(check("import numpy as np\nx = [1]\navg = np.round(np.sum(x))  # the average\n").len() == 1);
    }

    #[test]
    fn identifiers() {
        assert_eq!(
            summary("max_len_str = 0\ny = max_len_len_str\n"),
            one(Category::IdentifierConflict, "max_len_len_str", Some("max_len_str"))
        );
        assert_eq!(summary("y = xqz\n"), one(Category::IdentifierConflict, "xqz", None));
        assert!(check("x = 1\ny = x + 1\n").is_empty());
        assert!(check("def f(a):\n    return a + g\ng = 2\n").is_empty());
        assert!(check("def f(a):\n    return a\nb = a\n").len() == 1);
    }

    #[test]
    fn tracked_object_methods() {
        assert_eq!(
            summary("import pandas as pd\ndf = pd.read_csv('a.csv')\ndf.hed()\n"),
            one(Category::UnknownApi, "df.hed", Some("df.head"))
        );
        assert!(check("import pandas as pd\ndf = pd.read_csv('a.csv')\ndf.head()\n").is_empty());
        // Untracked receivers are skipped.
        assert!(check("import pandas as pd\ndf = load()\ndf.hed()\ndef load():\n    return 1\n").is_empty());
        // Mixed bindings are not tracked.
        assert!(check("import pandas as pd\ndf = pd.read_csv('a.csv')\ndf = 3\ndf.hed()\n").is_empty());
        assert_eq!(summary("import pandas as pd\npd.read_csv('a.csv').hed()\n").len(), 1);
    }

    #[test]
    fn star_imports_silence_bare_names() {
        assert!(check("from numpy import *\nx = array([1])\n").is_empty());
        assert!(check("from somewhere import *\nx = thing(1)\n").is_empty());
    }

    #[test]
    fn rule_independence() {
        let src = "import numpy as np\nimport pandas as pd\navg = np.sum(xs)  # average\nd = pd.read_excel('a.csv')\ne = np.arrya([1])\nread_json('a.json')\nz = undefined_thing\n";
        let module = parse(src).unwrap();
        let all = validate(&module, kb());
        for cat in Category::ALL {
            let mut opts = ValidationOptions::default();
            opts.set(cat, false);
            let without = validate_with(&module, kb(), opts);
            let expected: Vec<Diagnostic> = all.iter().filter(|d| d.category != cat).cloned().collect();
            assert_eq!(without, expected, "disabling {cat}");
            let only = validate_with(&module, kb(), ValidationOptions::only(cat));
            let expected: Vec<Diagnostic> = all.iter().filter(|d| d.category == cat).cloned().collect();
            assert_eq!(only, expected, "only {cat}");
        }
    }

    #[test]
    fn render_format() {
        let d = &check("import pandas as pd\npd.read_exel('data.csv')")[0];
        assert!(d.render().starts_with("2:0: UnknownApi "), "{}", d.render());
        assert!(d.render().ends_with("[use pd.read_csv]"));
    }
}
