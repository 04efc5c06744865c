use serde_json::{json, Map, Value};

use crate::formula::Formula;

use super::print_term;

/// One object per node with `kind` and `children`; shifts and modalities
/// carry the printed `term`, atoms a `name`, quantifiers a `var`.
pub fn formula_to_json(f: &Formula) -> Value {
    let mut obj = Map::new();
    let kind = match f {
        Formula::Atom(a) => {
            obj.insert("name".into(), json!(a));
            "atom"
        }
        Formula::Shift(_, t) => {
            obj.insert("term".into(), json!(print_term(t)));
            "shift"
        }
        Formula::Not(_) => "not",
        Formula::And(..) => "and",
        Formula::Or(..) => "or",
        Formula::Box(t, _) => {
            obj.insert("term".into(), json!(print_term(t)));
            "box"
        }
        Formula::Diamond(t, _) => {
            obj.insert("term".into(), json!(print_term(t)));
            "diamond"
        }
        Formula::Exists(x, _) => {
            obj.insert("var".into(), json!(x));
            "exists"
        }
        Formula::Forall(x, _) => {
            obj.insert("var".into(), json!(x));
            "forall"
        }
    };
    obj.insert("kind".into(), json!(kind));
    obj.insert("children".into(), Value::Array(f.children().into_iter().map(formula_to_json).collect()));
    Value::Object(obj)
}
