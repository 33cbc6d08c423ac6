//! Finitely generated groups: integer lattices `Z^d` with the L1 word metric
//! and free groups `F_k` with reduced words.
//!
//! Elements are ordered canonically: by word length first, then
//! lexicographically (coordinates for `Z^d`, letters in the order
//! `a < A < b < B < ...` for `F_k`). Every enumeration in the crate follows
//! this order, which is what makes "least witness" searches reproducible.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default cap on the number of elements produced by [`GroupSpec::ball`].
pub const DEFAULT_BALL_CAP: u128 = 1_000_000;

/// Generator letters for free groups. `e` is reserved for the identity.
const LETTERS: &[u8] = b"abcdfghijklmnopqrstuvwxyz";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Lattice { dim: usize },
    Free { rank: usize },
}

/// A group element in canonical form.
///
/// Free-group letters are coded as `2i` for the i-th generator and `2i + 1`
/// for its inverse, so the numeric order of codes is the generator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Lattice(Vec<i64>),
    Word(Vec<u8>),
}

impl GroupSpec {
    pub fn lattice(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::usage("lattice dimension must be at least 1"));
        }
        Ok(GroupSpec::Lattice { dim })
    }

    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 || rank > LETTERS.len() {
            return Err(Error::usage(format!(
                "free group rank must be between 1 and {}",
                LETTERS.len()
            )));
        }
        Ok(GroupSpec::Free { rank })
    }

    pub fn identity(&self) -> GroupElement {
        match *self {
            GroupSpec::Lattice { dim } => GroupElement::Lattice(vec![0; dim]),
            GroupSpec::Free { .. } => GroupElement::Word(Vec::new()),
        }
    }

    /// The symmetric generating set, in canonical order.
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut gens: Vec<GroupElement> = match *self {
            GroupSpec::Lattice { dim } => (0..dim)
                .flat_map(|i| {
                    [-1, 1].into_iter().map(move |s| {
                        let mut v = vec![0; dim];
                        v[i] = s;
                        GroupElement::Lattice(v)
                    })
                })
                .collect(),
            GroupSpec::Free { rank } => (0..2 * rank as u8)
                .map(|c| GroupElement::Word(vec![c]))
                .collect(),
        };
        gens.sort();
        gens
    }

    pub fn is_amenable(&self) -> bool {
        matches!(self, GroupSpec::Lattice { .. })
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupSpec::Lattice { dim }, GroupElement::Lattice(v)) => v.len() == *dim,
            (GroupSpec::Free { rank }, GroupElement::Word(w)) => {
                w.iter().all(|&c| (c as usize) < 2 * rank) && w.windows(2).all(|p| p[0] != p[1] ^ 1)
            }
            _ => false,
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "element {g} does not belong to {self}"
            )))
        }
    }

    /// Number of elements of word length at most `n`.
    pub fn ball_size(&self, n: u32) -> u128 {
        match *self {
            GroupSpec::Lattice { dim } => {
                let mut total: u128 = 0;
                for i in 0..=dim.min(n as usize) {
                    let term = (1u128 << i.min(127))
                        .saturating_mul(binomial(dim as u128, i as u128))
                        .saturating_mul(binomial(n as u128, i as u128));
                    total = total.saturating_add(term);
                }
                total
            }
            GroupSpec::Free { rank } => {
                let branching = 2 * rank as u128 - 1;
                let mut layer: u128 = 2 * rank as u128;
                let mut total: u128 = 1;
                for _ in 0..n {
                    total = total.saturating_add(layer);
                    layer = layer.saturating_mul(branching);
                }
                total
            }
        }
    }

    pub fn ball(&self, n: u32) -> Result<FiniteSubset> {
        self.ball_capped(n, DEFAULT_BALL_CAP)
    }

    /// All elements of word length at most `n`, failing fast when the ball
    /// would exceed `cap` elements.
    pub fn ball_capped(&self, n: u32, cap: u128) -> Result<FiniteSubset> {
        let size = self.ball_size(n);
        if size > cap {
            return Err(Error::TooLarge { size, cap });
        }
        let elems = match *self {
            GroupSpec::Lattice { dim } => {
                let mut out = Vec::with_capacity(size as usize);
                let mut cur = vec![0i64; dim];
                lattice_ball(&mut cur, 0, n as i64, &mut out);
                out
            }
            GroupSpec::Free { rank } => {
                let mut out = vec![GroupElement::Word(Vec::new())];
                let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
                for _ in 0..n {
                    let mut next = Vec::new();
                    for w in &layer {
                        for c in 0..2 * rank as u8 {
                            if w.last().is_some_and(|&l| l == c ^ 1) {
                                continue;
                            }
                            let mut nw = w.clone();
                            nw.push(c);
                            next.push(nw);
                        }
                    }
                    out.extend(next.iter().cloned().map(GroupElement::Word));
                    layer = next;
                }
                out
            }
        };
        Ok(FiniteSubset::from_iter(elems))
    }

    /// The box `[0, n)^d`, a Følner sequence for `Z^d`.
    pub fn folner_window(&self, n: u32) -> Result<FiniteSubset> {
        match *self {
            GroupSpec::Free { .. } => Err(Error::NonAmenableGroup),
            GroupSpec::Lattice { dim } => {
                let mut out = Vec::new();
                let mut cur = vec![0i64; dim];
                box_points(&mut cur, 0, n as i64, &mut out);
                Ok(FiniteSubset::from_iter(out))
            }
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        let g = match *self {
            GroupSpec::Lattice { dim } => {
                let inner = s
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .unwrap_or(s);
                let coords = inner
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::usage(format!("cannot parse lattice element `{s}`")))?;
                if coords.len() != dim {
                    return Err(Error::usage(format!(
                        "element `{s}` has {} coordinates, expected {dim}",
                        coords.len()
                    )));
                }
                GroupElement::Lattice(coords)
            }
            GroupSpec::Free { rank } => {
                if s == "e" || s.is_empty() {
                    GroupElement::Word(Vec::new())
                } else {
                    let mut word = Vec::with_capacity(s.len());
                    for ch in s.chars() {
                        let code = letter_code(ch).filter(|&c| (c as usize) < 2 * rank);
                        match code {
                            Some(c) => push_reduced(&mut word, c),
                            None => {
                                return Err(Error::usage(format!(
                                    "`{ch}` is not a generator of {self}"
                                )))
                            }
                        }
                    }
                    GroupElement::Word(word)
                }
            }
        };
        Ok(g)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupSpec::Lattice { dim: 1 } => write!(f, "Z"),
            GroupSpec::Lattice { dim } => write!(f, "Z^{dim}"),
            GroupSpec::Free { rank } => write!(f, "F_{rank}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Z" {
            return GroupSpec::lattice(1);
        }
        let bad = || Error::usage(format!("unknown group `{s}` (expected Z, Z^d or F_k)"));
        if let Some(d) = s.strip_prefix("Z^") {
            return GroupSpec::lattice(d.parse().map_err(|_| bad())?);
        }
        if let Some(k) = s.strip_prefix("F_") {
            return GroupSpec::free(k.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn lattice_ball(cur: &mut Vec<i64>, idx: usize, left: i64, out: &mut Vec<GroupElement>) {
    if idx == cur.len() {
        out.push(GroupElement::Lattice(cur.clone()));
        return;
    }
    for v in -left..=left {
        cur[idx] = v;
        lattice_ball(cur, idx + 1, left - v.abs(), out);
    }
    cur[idx] = 0;
}

fn box_points(cur: &mut Vec<i64>, idx: usize, n: i64, out: &mut Vec<GroupElement>) {
    if idx == cur.len() {
        out.push(GroupElement::Lattice(cur.clone()));
        return;
    }
    for v in 0..n {
        cur[idx] = v;
        box_points(cur, idx + 1, n, out);
    }
    cur[idx] = 0;
}

fn letter_code(ch: char) -> Option<u8> {
    let lower = ch.to_ascii_lowercase() as u8;
    let i = LETTERS.iter().position(|&l| l == lower)? as u8;
    Some(if ch.is_ascii_uppercase() {
        2 * i + 1
    } else {
        2 * i
    })
}

fn letter_char(code: u8) -> char {
    let c = LETTERS[(code / 2) as usize] as char;
    if code % 2 == 1 {
        c.to_ascii_uppercase()
    } else {
        c
    }
}

fn push_reduced(word: &mut Vec<u8>, c: u8) {
    if word.last() == Some(&(c ^ 1)) {
        word.pop();
    } else {
        word.push(c);
    }
}

impl GroupElement {
    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Lattice(v) => v.iter().all(|&x| x == 0),
            GroupElement::Word(w) => w.is_empty(),
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (GroupElement::Lattice(a), GroupElement::Lattice(b)) if a.len() == b.len() => Ok(
                GroupElement::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            ),
            (GroupElement::Word(a), GroupElement::Word(b)) => {
                let mut w = a.clone();
                for &c in b {
                    push_reduced(&mut w, c);
                }
                Ok(GroupElement::Word(w))
            }
            _ => Err(Error::MixedGroups),
        }
    }

    pub fn inv(&self) -> GroupElement {
        match self {
            GroupElement::Lattice(v) => GroupElement::Lattice(v.iter().map(|x| -x).collect()),
            GroupElement::Word(w) => GroupElement::Word(w.iter().rev().map(|c| c ^ 1).collect()),
        }
    }

    pub fn word_length(&self) -> u64 {
        match self {
            GroupElement::Lattice(v) => v.iter().map(|x| x.unsigned_abs()).sum(),
            GroupElement::Word(w) => w.len() as u64,
        }
    }

    /// Left-invariant word metric: `|self^-1 other|`.
    pub fn distance(&self, other: &GroupElement) -> Result<u64> {
        Ok(self.inv().mul(other)?.word_length())
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word_length()
            .cmp(&other.word_length())
            .then_with(|| match (self, other) {
                (GroupElement::Lattice(a), GroupElement::Lattice(b)) => a.cmp(b),
                (GroupElement::Word(a), GroupElement::Word(b)) => a.cmp(b),
                (GroupElement::Lattice(_), GroupElement::Word(_)) => Ordering::Less,
                (GroupElement::Word(_), GroupElement::Lattice(_)) => Ordering::Greater,
            })
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Lattice(v) => {
                write!(f, "[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            GroupElement::Word(w) if w.is_empty() => write!(f, "e"),
            GroupElement::Word(w) => {
                for &c in w {
                    write!(f, "{}", letter_char(c))?;
                }
                Ok(())
            }
        }
    }
}

/// A finite set of group elements, iterated in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSubset(BTreeSet<GroupElement>);

impl FiniteSubset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(g: GroupElement) -> Self {
        Self(BTreeSet::from([g]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.0.contains(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> + '_ {
        self.0.iter()
    }

    pub fn first(&self) -> Option<&GroupElement> {
        self.0.first()
    }

    pub fn to_vec(&self) -> Vec<GroupElement> {
        self.0.iter().cloned().collect()
    }

    pub fn is_subset(&self, other: &FiniteSubset) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &FiniteSubset) -> FiniteSubset {
        Self(self.0.union(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &FiniteSubset) -> FiniteSubset {
        Self(self.0.difference(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &FiniteSubset) -> FiniteSubset {
        Self(self.0.intersection(&other.0).cloned().collect())
    }

    /// `g·F`
    pub fn left_translate(&self, g: &GroupElement) -> Result<FiniteSubset> {
        self.0.iter().map(|f| g.mul(f)).collect()
    }

    /// The product set `F·K = {f·k}`.
    pub fn product(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        let mut out = BTreeSet::new();
        for f in &self.0 {
            for k in &other.0 {
                out.insert(f.mul(k)?);
            }
        }
        Ok(Self(out))
    }

    /// The metric neighbourhood `F·B_r`.
    pub fn thicken(&self, group: &GroupSpec, r: u32) -> Result<FiniteSubset> {
        if r == 0 {
            return Ok(self.clone());
        }
        self.product(&group.ball(r)?)
    }

    pub fn check_group(&self, group: &GroupSpec) -> Result<()> {
        self.0.iter().try_for_each(|g| group.check(g))
    }
}

impl FromIterator<GroupElement> for FiniteSubset {
    fn from_iter<I: IntoIterator<Item = GroupElement>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a FiniteSubset {
    type Item = &'a GroupElement;
    type IntoIter = std::collections::btree_set::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

/// An exact half-integer, stored as its doubled value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn require_free(group: &GroupSpec) -> Result<()> {
    match group {
        GroupSpec::Free { .. } => Ok(()),
        _ => Err(Error::usage(format!(
            "operation is defined for free groups only, got {group}"
        ))),
    }
}

/// `(s,t)_g = ½(δ(s,g) + δ(t,g) − δ(s,t))`.
pub fn gromov_product(
    group: &GroupSpec,
    s: &GroupElement,
    t: &GroupElement,
    g: &GroupElement,
) -> Result<HalfInt> {
    require_free(group)?;
    for x in [s, t, g] {
        group.check(x)?;
    }
    let v = s.distance(g)? + t.distance(g)? - s.distance(t)?;
    Ok(HalfInt(v as i64))
}

/// Geodesic hull in the Cayley tree: every `g` with `(s,t)_g = 0` for some
/// `s, t ∈ F`.
pub fn span(group: &GroupSpec, set: &FiniteSubset) -> Result<FiniteSubset> {
    require_free(group)?;
    if set.is_empty() {
        return Err(Error::usage("span of an empty set"));
    }
    set.check_group(group)?;
    let elems = set.to_vec();
    let mut out = BTreeSet::new();
    for (i, s) in elems.iter().enumerate() {
        for t in &elems[i..] {
            let GroupElement::Word(path) = s.inv().mul(t)? else {
                unreachable!("free group elements are words");
            };
            let mut cur = s.clone();
            out.insert(cur.clone());
            for &c in &path {
                cur = cur.mul(&GroupElement::Word(vec![c]))?;
                out.insert(cur.clone());
            }
        }
    }
    Ok(FiniteSubset(out))
}

pub fn is_connected(group: &GroupSpec, set: &FiniteSubset) -> Result<bool> {
    Ok(span(group, set)? == *set)
}

/// `min δ(a, b)` over `a ∈ A`, `b ∈ B`; `None` when either set is empty.
pub fn set_distance(a: &FiniteSubset, b: &FiniteSubset) -> Result<Option<u64>> {
    let mut best: Option<u64> = None;
    for x in a {
        for y in b {
            let d = x.distance(y)?;
            best = Some(best.map_or(d, |m| m.min(d)));
        }
    }
    Ok(best)
}

/// Greedy maximal `k`-separated subset of `F`, scanning in canonical order.
pub fn separated_subset(set: &FiniteSubset, k: u64) -> Result<FiniteSubset> {
    if k == 0 {
        return Err(Error::usage("separation must be at least 1"));
    }
    let mut chosen: Vec<GroupElement> = Vec::new();
    'outer: for f in set {
        for c in &chosen {
            if c.distance(f)? < k {
                continue 'outer;
            }
        }
        chosen.push(f.clone());
    }
    Ok(FiniteSubset::from_iter(chosen))
}

pub fn is_pairwise_separated(sets: &[FiniteSubset], k: u64) -> Result<bool> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if set_distance(a, b)?.is_some_and(|d| d < k) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> GroupSpec {
        GroupSpec::free(2).unwrap()
    }

    fn w(s: &str) -> GroupElement {
        f2().parse_element(s).unwrap()
    }

    fn z(v: &[i64]) -> GroupElement {
        GroupElement::Lattice(v.to_vec())
    }

    /// Naive string rewriting: cancel `xX` / `Xx` until none remain.
    fn rewrite_reduce(s: &str) -> String {
        let mut cur: Vec<char> = s.chars().collect();
        loop {
            let pos = cur
                .windows(2)
                .position(|p| p[0] != p[1] && p[0].eq_ignore_ascii_case(&p[1]));
            match pos {
                Some(i) => {
                    cur.drain(i..i + 2);
                }
                None => break,
            }
        }
        if cur.is_empty() {
            "e".into()
        } else {
            cur.into_iter().collect()
        }
    }

    #[test]
    fn products() {
        assert_eq!(z(&[1, 2]).mul(&z(&[-1, 0])).unwrap(), z(&[0, 2]));
        assert!(w("a").mul(&w("A")).unwrap().is_identity());
        let prod = w("ab").mul(&w("Ba")).unwrap();
        assert_eq!(prod, w("aa"));
        assert_eq!(prod.to_string(), rewrite_reduce("abBa"));
        assert!(matches!(z(&[1]).mul(&w("a")), Err(Error::MixedGroups)));
        assert!(matches!(z(&[1]).mul(&z(&[1, 2])), Err(Error::MixedGroups)));
    }

    #[test]
    fn distances() {
        assert_eq!(w("ab").distance(&w("ab")).unwrap(), 0);
        assert_eq!(w("a").distance(&w("ab")).unwrap(), 1);
        assert_eq!(z(&[0, 0]).distance(&z(&[2, -1])).unwrap(), 3);
    }

    #[test]
    fn ball_sizes() {
        let g = f2();
        assert_eq!(g.ball(0).unwrap().to_vec(), vec![g.identity()]);
        assert_eq!(g.ball(1).unwrap().len(), 5);
        assert_eq!(g.ball(2).unwrap().len(), 17);
        let z2 = GroupSpec::lattice(2).unwrap();
        assert_eq!(z2.ball(1).unwrap().len(), 5);
        assert_eq!(z2.ball(2).unwrap().len(), 13);
        for n in 0..6 {
            assert_eq!(z2.ball(n).unwrap().len() as u128, z2.ball_size(n));
        }
        assert!(matches!(
            g.ball_capped(10, 1000),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn ball_order_is_bfs_then_lex() {
        let names: Vec<String> = f2()
            .ball(1)
            .unwrap()
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(names, ["e", "a", "A", "b", "B"]);
        let z1 = GroupSpec::lattice(1).unwrap();
        let names: Vec<String> = z1.ball(2).unwrap().iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["[0]", "[-1]", "[1]", "[-2]", "[2]"]);
    }

    #[test]
    fn folner_windows() {
        let z1 = GroupSpec::lattice(1).unwrap();
        let names: Vec<String> = z1
            .folner_window(4)
            .unwrap()
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(names, ["[0]", "[1]", "[2]", "[3]"]);
        assert_eq!(
            GroupSpec::lattice(2)
                .unwrap()
                .folner_window(2)
                .unwrap()
                .len(),
            4
        );
        assert!(matches!(
            f2().folner_window(3),
            Err(Error::NonAmenableGroup)
        ));
    }

    #[test]
    fn gromov_products() {
        let g = f2();
        let e = g.identity();
        assert_eq!(
            gromov_product(&g, &w("ab"), &w("ab"), &w("ab")).unwrap(),
            HalfInt(0)
        );
        assert_eq!(
            gromov_product(&g, &w("a"), &w("ab"), &e).unwrap(),
            HalfInt(2)
        );
        assert_eq!(
            gromov_product(&g, &w("a"), &w("A"), &e).unwrap(),
            HalfInt(0)
        );
        let z1 = GroupSpec::lattice(1).unwrap();
        assert!(gromov_product(&z1, &z(&[0]), &z(&[1]), &z(&[0])).is_err());
    }

    #[test]
    fn spans() {
        let g = f2();
        let set = FiniteSubset::from_iter([w("e"), w("aa")]);
        let sp = span(&g, &set).unwrap();
        assert_eq!(sp, FiniteSubset::from_iter([w("e"), w("a"), w("aa")]));
        assert!(!is_connected(&g, &set).unwrap());
        let single = FiniteSubset::singleton(w("a"));
        assert_eq!(span(&g, &single).unwrap(), single);
        assert!(is_connected(&g, &single).unwrap());
        assert!(is_connected(&g, &g.ball(2).unwrap()).unwrap());
    }

    #[test]
    fn separation() {
        let z1 = GroupSpec::lattice(1).unwrap();
        let set: FiniteSubset = (0..10).map(|i| z(&[i])).collect();
        let sep = separated_subset(&set, 2).unwrap();
        assert_eq!(sep, (0..5).map(|i| z(&[2 * i])).collect());
        assert_eq!(separated_subset(&set, 1).unwrap(), set);
        let g = f2();
        let b1 = g.ball(1).unwrap();
        let far = b1.left_translate(&w("aaaaa")).unwrap();
        assert!(is_pairwise_separated(&[b1.clone(), far.clone()], 3).unwrap());
        assert!(!is_pairwise_separated(&[b1, far], 4).unwrap());
        assert!(separated_subset(&z1.ball(2).unwrap(), 0).is_err());
    }

    #[test]
    fn parse_and_display() {
        let g = f2();
        for s in ["e", "a", "abA", "BBa"] {
            assert_eq!(g.parse_element(s).unwrap().to_string(), s);
        }
        assert_eq!(g.parse_element("aAb").unwrap().to_string(), "b");
        assert!(g.parse_element("c").is_err());
        let z2 = GroupSpec::lattice(2).unwrap();
        assert_eq!(z2.parse_element("[1,-2]").unwrap(), z(&[1, -2]));
        assert!(z2.parse_element("[1]").is_err());
        assert_eq!("Z^2".parse::<GroupSpec>().unwrap(), z2);
        assert_eq!("F_2".parse::<GroupSpec>().unwrap(), g);
        assert_eq!("Z".parse::<GroupSpec>().unwrap().to_string(), "Z");
        assert!("Q".parse::<GroupSpec>().is_err());
    }
}
