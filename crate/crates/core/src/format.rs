//! The TOML subshift file format, window descriptors and pattern syntax.
//!
//! ```toml
//! group = "Z"
//! alphabet = ["0", "1"]
//!
//! [rule]
//! kind = "forbidden"
//! patterns = [[["0", "1"], ["1", "1"]]]
//!
//! [metadata]
//! name = "golden-mean"
//! ```
//!
//! Forbidden patterns are lists of `[element, symbol]` pairs. A
//! `linear-gf2` rule lists `supports` (lists of elements) and needs the
//! alphabet `["0", "1"]`. A `predicate` rule gives a `name` from
//! [`Predicate::CATALOGUE`] and, for `at-most-one`, the `symbol`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toml::Spanned;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement, GroupSpec};
use crate::pattern::{Alphabet, Pattern};
use crate::spec::{Predicate, Rule, SubshiftSpec};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    group: Spanned<String>,
    alphabet: Spanned<Vec<String>>,
    rule: Spanned<RawRule>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

type RawPattern = Spanned<Vec<(Spanned<String>, Spanned<String>)>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    kind: Spanned<String>,
    patterns: Option<Vec<RawPattern>>,
    supports: Option<Vec<Spanned<Vec<Spanned<String>>>>>,
    name: Option<Spanned<String>>,
    symbol: Option<Spanned<String>>,
}

#[derive(Serialize)]
struct NormSpec {
    group: String,
    alphabet: Vec<String>,
    rule: NormRule,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct NormRule {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    patterns: Option<Vec<Vec<(String, String)>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    supports: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    symbol: Option<String>,
}

struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn line(&self, offset: usize) -> usize {
        self.0[..offset.min(self.0.len())].matches('\n').count() + 1
    }

    fn err<T>(&self, span: std::ops::Range<usize>, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line(span.start),
            message: message.into(),
        })
    }
}

/// Parses and validates a subshift file.
pub fn parse_spec(text: &str) -> Result<SubshiftSpec> {
    let lines = Lines(text);
    let raw: RawSpec = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map_or(1, |s| lines.line(s.start)),
        message: e.message().to_string(),
    })?;
    let group: GroupSpec = match raw.group.get_ref().parse() {
        Ok(g) => g,
        Err(e) => return lines.err(raw.group.span(), e.to_string()),
    };
    let alphabet = match Alphabet::new(raw.alphabet.get_ref().iter().cloned()) {
        Ok(a) => a,
        Err(e) => return lines.err(raw.alphabet.span(), e.to_string()),
    };
    let rule_span = raw.rule.span();
    let r = raw.rule.into_inner();
    let element = |s: &Spanned<String>| -> Result<GroupElement> {
        group
            .parse_element(s.get_ref())
            .or_else(|e| lines.err(s.span(), e.to_string()))
    };
    let symbol = |s: &Spanned<String>, alphabet: &Alphabet| {
        alphabet.symbol(s.get_ref()).map_or_else(
            || lines.err(s.span(), format!("unknown symbol `{}`", s.get_ref())),
            Ok,
        )
    };
    let kind = r.kind.get_ref().as_str();
    let unexpected = |field: &str| {
        lines.err(
            rule_span.clone(),
            format!("`{field}` is not used by {kind} rules"),
        )
    };
    let (alphabet, rule) = match kind {
        "forbidden" => {
            if r.supports.is_some() {
                return unexpected("supports");
            }
            if r.name.is_some() || r.symbol.is_some() {
                return unexpected("name/symbol");
            }
            let Some(raw_patterns) = r.patterns else {
                return lines.err(rule_span, "forbidden rules need `patterns`");
            };
            let mut patterns = Vec::new();
            for rp in &raw_patterns {
                let mut pairs = Vec::new();
                for (g, s) in rp.get_ref() {
                    pairs.push((element(g)?, symbol(s, &alphabet)?));
                }
                if pairs.is_empty() {
                    return lines.err(rp.span(), "forbidden patterns must be nonempty");
                }
                match Pattern::from_pairs(pairs) {
                    Ok(p) => patterns.push(p),
                    Err(e) => return lines.err(rp.span(), e.to_string()),
                }
            }
            (alphabet, Rule::Forbidden(patterns))
        }
        "linear-gf2" => {
            if r.patterns.is_some() || r.name.is_some() || r.symbol.is_some() {
                return unexpected("patterns/name/symbol");
            }
            let Some(raw_supports) = r.supports else {
                return lines.err(rule_span, "linear-gf2 rules need `supports`");
            };
            if alphabet.names() != ["0", "1"] {
                return lines.err(
                    raw.alphabet.span(),
                    "linear-gf2 rules need the alphabet [\"0\", \"1\"]",
                );
            }
            let mut supports = Vec::new();
            for rs in &raw_supports {
                let set = rs
                    .get_ref()
                    .iter()
                    .map(element)
                    .collect::<Result<FiniteSubset>>()?;
                if set.is_empty() {
                    return lines.err(rs.span(), "linear supports must be nonempty");
                }
                supports.push(set);
            }
            (Alphabet::gf2(), Rule::LinearGf2(supports))
        }
        "predicate" => {
            if r.patterns.is_some() || r.supports.is_some() {
                return unexpected("patterns/supports");
            }
            let Some(name) = r.name else {
                return lines.err(rule_span, "predicate rules need `name`");
            };
            let pred = match name.get_ref().as_str() {
                "at-most-one" => {
                    let Some(s) = &r.symbol else {
                        return lines.err(name.span(), "at-most-one needs `symbol`");
                    };
                    Predicate::AtMostOne {
                        symbol: symbol(s, &alphabet)?,
                    }
                }
                "perfect-matching" => {
                    if r.symbol.is_some() {
                        return unexpected("symbol");
                    }
                    Predicate::PerfectMatching
                }
                other => {
                    return lines.err(
                        name.span(),
                        format!(
                            "unknown predicate `{other}` (known: {})",
                            Predicate::CATALOGUE.join(", ")
                        ),
                    )
                }
            };
            (alphabet, Rule::Predicate(pred))
        }
        other => {
            return lines.err(
                r.kind.span(),
                format!(
                    "unknown rule kind `{other}` (expected forbidden, linear-gf2 or predicate)"
                ),
            )
        }
    };
    let mut spec = match SubshiftSpec::new(group, alphabet, rule) {
        Ok(s) => s,
        Err(e) => return lines.err(rule_span, e.to_string()),
    };
    for (k, v) in raw.metadata {
        spec = spec.with_metadata(k, v);
    }
    Ok(spec)
}

/// Canonical text of a spec: fixed key order, normalized elements, rules
/// sorted and deduplicated.
pub fn serialize_spec(spec: &SubshiftSpec) -> String {
    let names = spec.alphabet();
    let pairs = |p: &Pattern| -> Vec<(String, String)> {
        p.iter()
            .map(|(g, s)| (g.to_string(), names.name(s).to_string()))
            .collect()
    };
    let mut rule = NormRule {
        kind: spec.rule().kind().to_string(),
        patterns: None,
        supports: None,
        name: None,
        symbol: None,
    };
    match spec.rule() {
        Rule::Forbidden(ps) => rule.patterns = Some(ps.iter().map(pairs).collect()),
        Rule::LinearGf2(ss) => {
            rule.supports = Some(
                ss.iter()
                    .map(|s| s.iter().map(|g| g.to_string()).collect())
                    .collect(),
            )
        }
        Rule::Predicate(p) => {
            rule.name = Some(p.name().to_string());
            if let Predicate::AtMostOne { symbol } = p {
                rule.symbol = Some(names.name(*symbol).to_string());
            }
        }
    }
    let norm = NormSpec {
        group: spec.group().to_string(),
        alphabet: names.names().to_vec(),
        rule,
        metadata: spec.metadata().clone(),
    };
    toml::to_string(&norm).expect("spec serializes")
}

/// Hex SHA-256 of the canonical text.
pub fn spec_hash(spec: &SubshiftSpec) -> String {
    sha256_hex(serialize_spec(spec).as_bytes())
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parses `ball:n`, `box:n` or `set:[g1, g2, ...]`.
pub fn parse_window(group: &GroupSpec, s: &str) -> Result<FiniteSubset> {
    let s = s.trim();
    let num = |n: &str| {
        n.trim()
            .parse::<u32>()
            .map_err(|_| Error::usage(format!("bad size in window `{s}`")))
    };
    if let Some(n) = s.strip_prefix("ball:") {
        return group.ball(num(n)?);
    }
    if let Some(n) = s.strip_prefix("box:") {
        return group.folner_window(num(n)?);
    }
    if let Some(body) = s.strip_prefix("set:") {
        let body = body
            .trim()
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::usage(format!("expected set:[...] in `{s}`")))?;
        let set = split_top(body, ',')
            .into_iter()
            .filter(|t| !t.trim().is_empty())
            .map(|t| group.parse_element(t))
            .collect::<Result<FiniteSubset>>()?;
        if set.is_empty() {
            return Err(Error::usage("window sets must be nonempty"));
        }
        return Ok(set);
    }
    Err(Error::usage(format!(
        "unknown window `{s}` (expected ball:n, box:n or set:[...])"
    )))
}

/// Parses a comma-separated list of windows, each with its descriptor. A
/// bare number `n` means `box:n`.
pub fn parse_window_list(group: &GroupSpec, s: &str) -> Result<Vec<(String, FiniteSubset)>> {
    let items: Vec<&str> = split_top(s, ',')
        .into_iter()
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    if items.is_empty() {
        return Err(Error::usage("expected at least one window"));
    }
    items
        .into_iter()
        .map(|t| match t.parse::<u32>() {
            Ok(n) => Ok((format!("box:{n}"), group.folner_window(n)?)),
            Err(_) => Ok((t.to_string(), parse_window(group, t)?)),
        })
        .collect()
}

/// The `set:[...]` form of a window, accepted by [`parse_window`].
pub fn format_window(set: &FiniteSubset) -> String {
    let elems: Vec<String> = set.iter().map(|g| g.to_string()).collect();
    format!("set:[{}]", elems.join(","))
}

/// Splits at `sep` outside square brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parses `g1=s1;g2=s2;...` with symbols named as in the alphabet.
pub fn parse_pattern(spec: &SubshiftSpec, s: &str) -> Result<Pattern> {
    let mut pairs = Vec::new();
    for item in s.split(';').filter(|t| !t.trim().is_empty()) {
        let (g, sym) = item
            .split_once('=')
            .ok_or_else(|| Error::usage(format!("expected element=symbol, got `{item}`")))?;
        let g = spec.group().parse_element(g)?;
        let sym = spec
            .alphabet()
            .symbol(sym.trim())
            .ok_or_else(|| Error::usage(format!("unknown symbol `{}`", sym.trim())))?;
        pairs.push((g, sym));
    }
    Pattern::from_pairs(pairs)
}

pub fn format_pattern(spec: &SubshiftSpec, p: &Pattern) -> String {
    p.iter()
        .map(|(g, s)| format!("{g}={}", spec.alphabet().name(s)))
        .collect::<Vec<_>>()
        .join(";")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    const GOLDEN: &str = r#"
group = "Z"
alphabet = ["0", "1"]

[rule]
kind = "forbidden"
patterns = [[["1", "1"], ["0", "1"]]]

[metadata]
name = "golden-mean"
"#;

    #[test]
    fn window_lists_and_round_trip() {
        let z = GroupSpec::Lattice { dim: 1 };
        let ws = parse_window_list(&z, "4, ball:1,set:[0,2]").unwrap();
        let labels: Vec<&str> = ws.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ["box:4", "ball:1", "set:[0,2]"]);
        assert_eq!(ws[0].1.len(), 4);
        assert_eq!(ws[1].1.len(), 3);
        for (_, w) in &ws {
            assert_eq!(&parse_window(&z, &format_window(w)).unwrap(), w);
        }
        let f2 = GroupSpec::Free { rank: 2 };
        let b2 = f2.ball(2).unwrap();
        assert_eq!(parse_window(&f2, &format_window(&b2)).unwrap(), b2);
        assert!(parse_window_list(&z, " , ").is_err());
    }

    #[test]
    fn round_trip() {
        let spec = parse_spec(GOLDEN).unwrap();
        assert_eq!(spec, zoo::golden_mean());
        let text = serialize_spec(&spec);
        assert_eq!(parse_spec(&text).unwrap(), spec);
        assert_eq!(serialize_spec(&parse_spec(&text).unwrap()), text);
        for s in [
            zoo::five_dot_cross(),
            zoo::perfect_matchings(),
            zoo::ledrappier(),
        ] {
            assert_eq!(parse_spec(&serialize_spec(&s)).unwrap(), s);
        }
        let sunny = zoo::sunny_side_up(GroupSpec::lattice(2).unwrap());
        assert_eq!(parse_spec(&serialize_spec(&sunny)).unwrap(), sunny);
    }

    #[test]
    fn hash_ignores_key_order() {
        let reordered = r#"
alphabet = ["0", "1"]
group = "Z"
[metadata]
name = "golden-mean"
[rule]
patterns = [[["0", "1"], ["1", "1"]], [["1", "1"], ["0", "1"]]]
kind = "forbidden"
"#;
        let a = parse_spec(GOLDEN).unwrap();
        let b = parse_spec(reordered).unwrap();
        assert_eq!(spec_hash(&a), spec_hash(&b));
        assert_eq!(spec_hash(&a).len(), 64);
    }

    #[test]
    fn diagnostics_carry_lines() {
        let bad_symbol = GOLDEN.replace("[\"0\", \"1\"]]]", "[\"0\", \"2\"]]]");
        match parse_spec(&bad_symbol) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 7);
                assert!(message.contains("unknown symbol"));
            }
            other => panic!("{other:?}"),
        }
        let linear = r#"
group = "Z"
alphabet = ["a", "b", "c"]
[rule]
kind = "linear-gf2"
supports = [["0", "1"]]
"#;
        assert!(matches!(
            parse_spec(linear),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_spec("group = \"Z\"\nalpha = 1\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn windows_and_patterns() {
        let z2 = GroupSpec::lattice(2).unwrap();
        assert_eq!(parse_window(&z2, "ball:2").unwrap().len(), 13);
        assert_eq!(parse_window(&z2, "box:3").unwrap().len(), 9);
        assert_eq!(
            parse_window(&z2, "set:[[0,0],[1,0], [0,1]]").unwrap().len(),
            3
        );
        let f2 = GroupSpec::free(2).unwrap();
        assert_eq!(parse_window(&f2, "set:[e, a, aA, ab]").unwrap().len(), 3);
        assert!(parse_window(&f2, "box:2").is_err());
        assert!(parse_window(&f2, "disc:2").is_err());
        let gm = zoo::golden_mean();
        let p = parse_pattern(&gm, "0=1; 2=0").unwrap();
        assert_eq!(format_pattern(&gm, &p), "[0]=1;[2]=0");
        assert_eq!(parse_pattern(&gm, &format_pattern(&gm, &p)).unwrap(), p);
    }
}
