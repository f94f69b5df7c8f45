//! JSON and CSV forms of prefixes and prefix sets.
//!
//! A prefix is a JSON array of letter strings, each in the domain's textual
//! form (`"1/2"`, `"a"`, `"(1,0)"`). A prefix set is a sorted array of such
//! arrays, or `{"length": n, "members": [...]}` when the length must be
//! stated explicitly (an empty set).

use serde_json::{json, Value};

use crate::coeff::Domain;
use crate::error::{Error, Result};
use crate::prefix::{Prefix, PrefixSet};

pub fn prefix_to_json(p: &Prefix) -> Value {
    Value::from(p.to_strings())
}

pub fn prefixes_to_json(ps: &[Prefix]) -> Value {
    Value::Array(ps.iter().map(prefix_to_json).collect())
}

pub fn set_to_json(s: &PrefixSet) -> Value {
    if s.is_empty() {
        json!({"length": s.length(), "members": []})
    } else {
        Value::Array(s.iter().map(prefix_to_json).collect())
    }
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

pub fn prefix_from_json(domain: &Domain, v: &Value) -> Result<Prefix> {
    let letters = v.as_array().ok_or_else(|| format_err("a prefix must be an array of strings"))?;
    let word = letters
        .iter()
        .map(|l| match l {
            Value::String(s) => domain.parse(s),
            Value::Number(n) => domain.parse(&n.to_string()),
            _ => Err(format_err("a letter must be a string")),
        })
        .collect::<Result<Vec<_>>>()?;
    Prefix::new(domain.clone(), word)
}

pub fn prefixes_from_json(domain: &Domain, v: &Value) -> Result<Vec<Prefix>> {
    v.as_array()
        .ok_or_else(|| format_err("expected an array of prefixes"))?
        .iter()
        .map(|p| prefix_from_json(domain, p))
        .collect()
}

/// Reads a prefix set; `length` is required only for an empty bare array.
pub fn set_from_json(domain: &Domain, v: &Value, length: Option<usize>) -> Result<PrefixSet> {
    let (members, stated) = match v {
        Value::Object(o) => {
            let n = o
                .get("length")
                .and_then(Value::as_u64)
                .ok_or_else(|| format_err("set object needs a numeric `length`"))?;
            let members = o.get("members").ok_or_else(|| format_err("set object needs `members`"))?;
            (prefixes_from_json(domain, members)?, Some(n as usize))
        }
        _ => (prefixes_from_json(domain, v)?, None),
    };
    let n = stated
        .or_else(|| members.first().map(Prefix::len))
        .or(length)
        .ok_or_else(|| format_err("cannot tell the length of an empty set"))?;
    PrefixSet::from_prefixes(domain.clone(), n, members)
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| format_err(format!("invalid JSON: {e}")))
}

/// Renders rows as CSV text.
pub fn csv_string<I, R>(rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for row in rows {
        w.write_record(row).map_err(|e| format_err(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| format_err(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| format_err(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_round_trip() {
        let d = Domain::product(vec![Domain::Gf2, Domain::Rational]);
        let set = PrefixSet::from_prefixes(
            d.clone(),
            2,
            [
                Prefix::parse(&d, &["(1,1/2)", "(0,-3)"]).unwrap(),
                Prefix::parse(&d, &["(0,0)", "(0,0)"]).unwrap(),
            ],
        )
        .unwrap();
        let v = set_to_json(&set);
        assert_eq!(v[0], json!(["(0,0)", "(0,0)"]));
        assert_eq!(set_from_json(&d, &v, None).unwrap(), set);

        let empty = PrefixSet::empty(Domain::Gf2, 3);
        assert_eq!(set_from_json(&Domain::Gf2, &set_to_json(&empty), None).unwrap(), empty);
        assert!(set_from_json(&Domain::Gf2, &json!([]), None).is_err());
        assert_eq!(set_from_json(&Domain::Gf2, &json!([]), Some(2)).unwrap().length(), 2);
    }

    #[test]
    fn rejects_bad_letters() {
        assert!(prefix_from_json(&Domain::Gf2, &json!(["2"])).is_err());
        assert!(set_from_json(&Domain::Gf2, &json!([["1"], ["1", "0"]]), None).is_err());
    }

    #[test]
    fn csv_rows() {
        let text = csv_string([vec!["y", "1", "1/2"], vec!["f", "a,b"]]).unwrap();
        assert_eq!(text, "y,1,1/2\nf,\"a,b\"\n");
    }
}
