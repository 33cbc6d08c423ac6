use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement};

/// Index of a symbol in an [`Alphabet`].
pub type Symbol = u16;

pub const MAX_ALPHABET: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
    gf2: bool,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > MAX_ALPHABET {
            return Err(Error::invalid(format!(
                "alphabet size must be between 1 and {MAX_ALPHABET}"
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::invalid("symbol names must be nonempty"));
            }
            if names[..i].contains(n) {
                return Err(Error::invalid(format!("duplicate symbol `{n}`")));
            }
        }
        Ok(Self { names, gf2: false })
    }

    /// The field with two elements: symbols `0` and `1` with addition mod 2.
    pub fn gf2() -> Self {
        Self {
            names: vec!["0".into(), "1".into()],
            gf2: true,
        }
    }

    pub fn with_gf2(mut self, flag: bool) -> Result<Self> {
        if flag && self.names != ["0", "1"] {
            return Err(Error::invalid(
                "GF(2) alphabets must be exactly [\"0\", \"1\"]",
            ));
        }
        self.gf2 = flag;
        Ok(self)
    }

    pub fn numbered(k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_gf2(&self) -> bool {
        self.gf2
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s as usize]
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as Symbol)
    }
}

/// A finitely supported assignment of symbols to group elements.
///
/// Patterns on the same support compare by their values read in canonical
/// site order, which is the order used to pick least witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(BTreeMap<GroupElement, Symbol>);

impl Pattern {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (GroupElement, Symbol)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (g, s) in pairs {
            if let Some(old) = map.insert(g.clone(), s) {
                if old != s {
                    return Err(Error::Conflict(g));
                }
            }
        }
        Ok(Self(map))
    }

    /// Pattern on `support` (in canonical order) with the given values.
    pub fn from_values(support: &FiniteSubset, values: &[Symbol]) -> Self {
        debug_assert_eq!(support.len(), values.len());
        Self(
            support
                .iter()
                .cloned()
                .zip(values.iter().copied())
                .collect(),
        )
    }

    pub fn constant(support: &FiniteSubset, s: Symbol) -> Self {
        Self(support.iter().map(|g| (g.clone(), s)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, g: &GroupElement) -> Option<Symbol> {
        self.0.get(g).copied()
    }

    pub fn support(&self) -> FiniteSubset {
        self.0.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, Symbol)> + '_ {
        self.0.iter().map(|(g, &s)| (g, s))
    }

    pub fn values(&self) -> Vec<Symbol> {
        self.0.values().copied().collect()
    }

    pub fn insert(&mut self, g: GroupElement, s: Symbol) -> Option<Symbol> {
        self.0.insert(g, s)
    }

    /// `g·p`: the value at `g·h` equals `p(h)`.
    pub fn translate(&self, g: &GroupElement) -> Result<Pattern> {
        let mut out = BTreeMap::new();
        for (h, &s) in &self.0 {
            out.insert(g.mul(h)?, s);
        }
        Ok(Pattern(out))
    }

    pub fn restrict(&self, set: &FiniteSubset) -> Pattern {
        Pattern(
            self.0
                .iter()
                .filter(|(g, _)| set.contains(g))
                .map(|(g, &s)| (g.clone(), s))
                .collect(),
        )
    }

    /// Union of two patterns; fails on the first (canonically least) site
    /// where they disagree.
    pub fn glue(&self, other: &Pattern) -> Result<Pattern> {
        let mut out = self.0.clone();
        for (g, &s) in &other.0 {
            match out.get(g) {
                Some(&t) if t != s => return Err(Error::Conflict(g.clone())),
                Some(_) => {}
                None => {
                    out.insert(g.clone(), s);
                }
            }
        }
        Ok(Pattern(out))
    }

    pub fn agrees_on(&self, other: &Pattern, set: &FiniteSubset) -> bool {
        set.iter().all(|g| self.get(g) == other.get(g))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> PatternDisplay<'a> {
        PatternDisplay {
            pattern: self,
            alphabet,
        }
    }
}

pub struct PatternDisplay<'a> {
    pattern: &'a Pattern,
    alphabet: &'a Alphabet,
}

impl fmt::Display for PatternDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (g, s)) in self.pattern.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}↦{}", self.alphabet.name(s))?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: i64) -> GroupElement {
        GroupElement::Lattice(vec![i])
    }

    #[test]
    fn translate_and_glue() {
        let p = Pattern::from_pairs([(z(0), 0)]).unwrap();
        assert_eq!(p.translate(&z(0)).unwrap(), p);
        assert_eq!(
            p.translate(&z(3)).unwrap(),
            Pattern::from_pairs([(z(3), 0)]).unwrap()
        );

        let q = Pattern::from_pairs([(z(1), 1)]).unwrap();
        let pq = p.glue(&q).unwrap();
        assert_eq!(pq, Pattern::from_pairs([(z(0), 0), (z(1), 1)]).unwrap());
        assert_eq!(
            pq.glue(&pq.restrict(&FiniteSubset::singleton(z(1))))
                .unwrap(),
            pq
        );

        let clash = Pattern::from_pairs([(z(0), 1)]).unwrap();
        match p.glue(&clash) {
            Err(Error::Conflict(site)) => assert_eq!(site, z(0)),
            other => panic!("expected conflict, got {other:?}"),
        }
    }

    #[test]
    fn alphabets() {
        assert!(Alphabet::new(["0", "0"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "b"]).unwrap().with_gf2(true).is_err());
        let a = Alphabet::new(["0", "1"]).unwrap().with_gf2(true).unwrap();
        assert!(a.is_gf2());
        assert_eq!(a.symbol("1"), Some(1));
    }

    #[test]
    fn ordering_follows_values_in_site_order() {
        let support: FiniteSubset = (0..3).map(z).collect();
        let a = Pattern::from_values(&support, &[0, 1, 1]);
        let b = Pattern::from_values(&support, &[1, 0, 0]);
        assert!(a < b);
    }
}
