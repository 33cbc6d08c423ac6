//! Subshift specifications and admissibility levels.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement, GroupSpec};
use crate::pattern::{Alphabet, Pattern, Symbol};

/// Built-in monotone predicates: a pattern that violates one has every
/// extension violating it too.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Predicate {
    /// At most one site carries `symbol`.
    AtMostOne { symbol: Symbol },
    /// Free groups only. Symbols name generators, and every site `g` must
    /// satisfy `x(g·x(g)) = x(g)^-1`.
    PerfectMatching,
}

impl Predicate {
    pub const CATALOGUE: &'static [&'static str] = &["at-most-one", "perfect-matching"];

    pub fn name(&self) -> &'static str {
        match self {
            Predicate::AtMostOne { .. } => "at-most-one",
            Predicate::PerfectMatching => "perfect-matching",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Subshift of finite type: no translate of any listed pattern occurs.
    Forbidden(Vec<Pattern>),
    /// Each support `S` imposes `Σ_{s∈S} x(g·s) = 0` over GF(2) for every `g`.
    LinearGf2(Vec<FiniteSubset>),
    Predicate(Predicate),
}

impl Rule {
    pub fn kind(&self) -> &'static str {
        match self {
            Rule::Forbidden(_) => "forbidden",
            Rule::LinearGf2(_) => "linear-gf2",
            Rule::Predicate(_) => "predicate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubshiftSpec {
    group: GroupSpec,
    alphabet: Alphabet,
    rule: Rule,
    metadata: BTreeMap<String, String>,
    /// For perfect matchings: symbol index to generator letter code.
    letters: Vec<u8>,
}

impl SubshiftSpec {
    pub fn new(group: GroupSpec, alphabet: Alphabet, rule: Rule) -> Result<Self> {
        let rule = normalize_rule(rule);
        let mut letters = Vec::new();
        match &rule {
            Rule::Forbidden(patterns) => {
                for p in patterns {
                    if p.is_empty() {
                        return Err(Error::invalid(
                            "forbidden patterns must have nonempty support",
                        ));
                    }
                    for (g, s) in p.iter() {
                        group.check(g).map_err(|e| Error::invalid(e.to_string()))?;
                        if s as usize >= alphabet.len() {
                            return Err(Error::invalid(format!("symbol index {s} out of range")));
                        }
                    }
                }
            }
            Rule::LinearGf2(supports) => {
                if !alphabet.is_gf2() {
                    return Err(Error::invalid("linear GF(2) rules need the GF(2) alphabet"));
                }
                for s in supports {
                    if s.is_empty() {
                        return Err(Error::invalid("linear supports must be nonempty"));
                    }
                    s.check_group(&group)
                        .map_err(|e| Error::invalid(e.to_string()))?;
                }
            }
            Rule::Predicate(Predicate::AtMostOne { symbol }) => {
                if *symbol as usize >= alphabet.len() {
                    return Err(Error::invalid(format!(
                        "symbol index {symbol} out of range"
                    )));
                }
            }
            Rule::Predicate(Predicate::PerfectMatching) => {
                let GroupSpec::Free { rank } = group else {
                    return Err(Error::invalid(
                        "perfect matchings are defined on free groups",
                    ));
                };
                if alphabet.len() != 2 * rank {
                    return Err(Error::invalid(format!(
                        "perfect matchings on {group} need {} symbols, one per generator",
                        2 * rank
                    )));
                }
                for name in alphabet.names() {
                    match group.parse_element(name) {
                        Ok(GroupElement::Word(w)) if w.len() == 1 => letters.push(w[0]),
                        _ => {
                            return Err(Error::invalid(format!(
                                "symbol `{name}` is not a generator of {group}"
                            )))
                        }
                    }
                }
            }
        }
        Ok(Self {
            group,
            alphabet,
            rule,
            metadata: BTreeMap::new(),
            letters,
        })
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn name(&self) -> Option<&str> {
        self.metadata.get("name").map(String::as_str)
    }

    pub(crate) fn matching_letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn is_z_sft(&self) -> bool {
        matches!(self.group, GroupSpec::Lattice { dim: 1 })
            && matches!(self.rule, Rule::Forbidden(_))
    }

    pub fn check_level(&self, level: AdmissibilityLevel) -> Result<()> {
        if level == AdmissibilityLevel::ExactZ && !self.is_z_sft() {
            return Err(Error::usage(
                "exact-z admissibility needs a forbidden-pattern subshift over Z",
            ));
        }
        Ok(())
    }

    /// Largest word distance between two sites of one constraint; `None`
    /// when constraints are unbounded (the at-most-one predicate).
    pub fn rule_diameter(&self) -> Option<u64> {
        fn diam(set: &[GroupElement]) -> u64 {
            let mut best = 0;
            for (i, a) in set.iter().enumerate() {
                for b in &set[i + 1..] {
                    best = best.max(a.distance(b).unwrap_or(0));
                }
            }
            best
        }
        match &self.rule {
            Rule::Forbidden(ps) => Some(
                ps.iter()
                    .map(|p| diam(&p.support().to_vec()))
                    .max()
                    .unwrap_or(0),
            ),
            Rule::LinearGf2(ss) => Some(ss.iter().map(|s| diam(&s.to_vec())).max().unwrap_or(0)),
            Rule::Predicate(Predicate::PerfectMatching) => Some(1),
            Rule::Predicate(Predicate::AtMostOne { .. }) => None,
        }
    }
}

fn normalize_rule(rule: Rule) -> Rule {
    match rule {
        Rule::Forbidden(mut ps) => {
            ps.sort();
            ps.dedup();
            Rule::Forbidden(ps)
        }
        Rule::LinearGf2(mut ss) => {
            ss.sort();
            ss.dedup();
            Rule::LinearGf2(ss)
        }
        other => other,
    }
}

/// How far admissibility is checked.
///
/// `LocalMargin(r)` accepts a pattern on `F` when it extends to a locally
/// admissible pattern on `F·B_r`; the accepted sets shrink as `r` grows and
/// always contain the globally admissible patterns. `ExactZ` is exact
/// global admissibility, available for forbidden-pattern subshifts of `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdmissibilityLevel {
    LocalMargin(u32),
    ExactZ,
}

impl fmt::Display for AdmissibilityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibilityLevel::LocalMargin(r) => write!(f, "local:{r}"),
            AdmissibilityLevel::ExactZ => write!(f, "exact-z"),
        }
    }
}

impl FromStr for AdmissibilityLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "exact-z" {
            return Ok(AdmissibilityLevel::ExactZ);
        }
        let r = s
            .strip_prefix("local:")
            .or_else(|| s.strip_prefix("margin:"))
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| {
                Error::usage(format!(
                    "unknown level `{s}` (expected exact-z or local:<r>)"
                ))
            })?;
        Ok(AdmissibilityLevel::LocalMargin(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let z = GroupSpec::lattice(1).unwrap();
        let bin = Alphabet::new(["0", "1"]).unwrap();
        assert!(SubshiftSpec::new(z, bin.clone(), Rule::Forbidden(vec![Pattern::new()])).is_err());
        assert!(
            SubshiftSpec::new(z, bin.clone(), Rule::LinearGf2(vec![z.ball(1).unwrap()])).is_err()
        );
        let f2 = GroupSpec::free(2).unwrap();
        let pm = Alphabet::new(["a", "b", "A", "B"]).unwrap();
        let spec = SubshiftSpec::new(f2, pm, Rule::Predicate(Predicate::PerfectMatching)).unwrap();
        assert_eq!(spec.matching_letters(), &[0, 2, 1, 3]);
        assert!(SubshiftSpec::new(f2, bin, Rule::Predicate(Predicate::PerfectMatching)).is_err());
    }

    #[test]
    fn levels() {
        assert_eq!(
            "exact-z".parse::<AdmissibilityLevel>().unwrap(),
            AdmissibilityLevel::ExactZ
        );
        assert_eq!(
            "local:3".parse::<AdmissibilityLevel>().unwrap(),
            AdmissibilityLevel::LocalMargin(3)
        );
        assert_eq!(
            "margin:2"
                .parse::<AdmissibilityLevel>()
                .unwrap()
                .to_string(),
            "local:2"
        );
        assert!("exact".parse::<AdmissibilityLevel>().is_err());
    }
}
