//! Exact languages of subshifts of finite type over `Z`.
//!
//! Forbidden patterns are expanded to forbidden words; states are the
//! allowed `m`-blocks and edges the allowed `(m+1)`-blocks. After trimming
//! every state without an infinite past or future, a word on an interval is
//! globally admissible exactly when it labels a path of the trimmed graph.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement};
use crate::pattern::{Pattern, Symbol};
use crate::spec::{Rule, SubshiftSpec};

const MAX_STATES: usize = 1 << 20;

#[derive(Clone, Debug)]
pub struct ZAutomaton {
    nsym: usize,
    block: usize,
    forbidden: Vec<Vec<Symbol>>,
    /// Trimmed states (blocks of length `block`).
    states: Vec<Vec<Symbol>>,
    succ: Vec<Vec<u32>>,
}

type StateSet = Vec<u64>;

pub(crate) fn z_coord(g: &GroupElement) -> Result<i64> {
    match g {
        GroupElement::Lattice(v) if v.len() == 1 => Ok(v[0]),
        _ => Err(Error::usage(format!("{g} is not an element of Z"))),
    }
}

/// Forbidden words of `spec` (a forbidden-pattern subshift of `Z`), with
/// gaps inside a pattern's hull filled in every possible way.
pub(crate) fn forbidden_words(spec: &SubshiftSpec) -> Result<Vec<Vec<Symbol>>> {
    let Rule::Forbidden(patterns) = spec.rule() else {
        return Err(Error::usage("expected a forbidden-pattern subshift"));
    };
    if !spec.is_z_sft() {
        return Err(Error::usage("expected a subshift of Z"));
    }
    let k = spec.alphabet().len();
    let mut words = Vec::new();
    for p in patterns {
        let cells: Vec<(i64, Symbol)> = p
            .iter()
            .map(|(g, s)| z_coord(g).map(|c| (c, s)))
            .collect::<Result<_>>()?;
        let lo = cells.iter().map(|c| c.0).min().unwrap();
        let hi = cells.iter().map(|c| c.0).max().unwrap();
        let len = (hi - lo + 1) as usize;
        let mut fixed: Vec<Option<Symbol>> = vec![None; len];
        for (c, s) in cells {
            fixed[(c - lo) as usize] = Some(s);
        }
        let free = fixed.iter().filter(|f| f.is_none()).count();
        let combos = (k as u128)
            .checked_pow(free as u32)
            .filter(|&c| c <= 1 << 20);
        let Some(combos) = combos else {
            return Err(Error::usage(
                "forbidden pattern has too many gaps to expand",
            ));
        };
        for mut code in 0..combos {
            let w: Vec<Symbol> = fixed
                .iter()
                .map(|f| {
                    f.unwrap_or_else(|| {
                        let s = (code % k as u128) as Symbol;
                        code /= k as u128;
                        s
                    })
                })
                .collect();
            words.push(w);
        }
    }
    words.sort();
    words.dedup();
    Ok(words)
}

fn contains_forbidden_suffix(word: &[Symbol], forbidden: &[Vec<Symbol>]) -> bool {
    forbidden.iter().any(|f| word.ends_with(f))
}

fn contains_forbidden(word: &[Symbol], forbidden: &[Vec<Symbol>]) -> bool {
    (1..=word.len()).any(|end| contains_forbidden_suffix(&word[..end], forbidden))
}

impl ZAutomaton {
    /// Builds the trimmed block graph with blocks of length
    /// `max(longest forbidden word - 1, min_block, 1)`.
    pub fn build(spec: &SubshiftSpec, min_block: usize) -> Result<Self> {
        let forbidden = forbidden_words(spec)?;
        let nsym = spec.alphabet().len();
        let longest = forbidden.iter().map(Vec::len).max().unwrap_or(1);
        let block = (longest - 1).max(min_block).max(1);
        let total = (nsym as u128)
            .checked_pow(block as u32)
            .unwrap_or(u128::MAX);
        if total > MAX_STATES as u128 {
            return Err(Error::TooLarge {
                size: total,
                cap: MAX_STATES as u128,
            });
        }
        let mut all: Vec<Vec<Symbol>> = Vec::new();
        for mut code in 0..total as usize {
            let mut w = vec![0; block];
            for slot in w.iter_mut().rev() {
                *slot = (code % nsym) as Symbol;
                code /= nsym;
            }
            if !contains_forbidden(&w, &forbidden) {
                all.push(w);
            }
        }
        let index: BTreeMap<&[Symbol], usize> = all
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); all.len()];
        let mut word = Vec::with_capacity(block + 1);
        for (i, s) in all.iter().enumerate() {
            for a in 0..nsym as Symbol {
                word.clear();
                word.extend_from_slice(s);
                word.push(a);
                if contains_forbidden_suffix(&word, &forbidden) {
                    continue;
                }
                if let Some(&j) = index.get(&word[1..]) {
                    succ[i].push(j);
                }
            }
        }
        // trim states without predecessors or successors until stable
        let n = all.len();
        let mut alive = vec![true; n];
        loop {
            let mut indeg = vec![0usize; n];
            let mut outdeg = vec![0usize; n];
            for i in (0..n).filter(|&i| alive[i]) {
                for &j in succ[i].iter().filter(|&&j| alive[j]) {
                    outdeg[i] += 1;
                    indeg[j] += 1;
                }
            }
            let mut changed = false;
            for i in 0..n {
                if alive[i] && (indeg[i] == 0 || outdeg[i] == 0) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut remap = vec![u32::MAX; n];
        let mut states = Vec::new();
        for i in (0..n).filter(|&i| alive[i]) {
            remap[i] = states.len() as u32;
            states.push(all[i].clone());
        }
        let succ = (0..n)
            .filter(|&i| alive[i])
            .map(|i| {
                succ[i]
                    .iter()
                    .filter(|&&j| alive[j])
                    .map(|&j| remap[j])
                    .collect()
            })
            .collect();
        Ok(Self {
            nsym,
            block,
            forbidden,
            states,
            succ,
        })
    }

    pub fn nsym(&self) -> usize {
        self.nsym
    }

    pub fn block_len(&self) -> usize {
        self.block
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn forbidden_words(&self) -> &[Vec<Symbol>] {
        &self.forbidden
    }

    fn empty_set(&self) -> StateSet {
        vec![0; self.states.len().div_ceil(64)]
    }

    fn initial(&self, sym: Option<Symbol>) -> StateSet {
        let mut set = self.empty_set();
        for (i, s) in self.states.iter().enumerate() {
            if sym.is_none_or(|a| *s.last().unwrap() == a) {
                set[i / 64] |= 1 << (i % 64);
            }
        }
        set
    }

    fn step(&self, set: &StateSet, sym: Option<Symbol>) -> StateSet {
        let mut out = self.empty_set();
        for (wi, &word) in set.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let i = wi * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                for &j in &self.succ[i] {
                    let j = j as usize;
                    if sym.is_none_or(|a| *self.states[j].last().unwrap() == a) {
                        out[j / 64] |= 1 << (j % 64);
                    }
                }
            }
        }
        out
    }

    fn positions(f: &FiniteSubset) -> Result<Vec<i64>> {
        let mut pos: Vec<i64> = f.iter().map(z_coord).collect::<Result<_>>()?;
        pos.sort_unstable();
        Ok(pos)
    }

    /// Whether `p` extends to a configuration of the subshift.
    pub fn admits(&self, p: &Pattern) -> Result<bool> {
        if p.is_empty() {
            return Ok(!self.is_empty());
        }
        let mut cells: Vec<(i64, Symbol)> = p
            .iter()
            .map(|(g, s)| z_coord(g).map(|c| (c, s)))
            .collect::<Result<_>>()?;
        cells.sort_unstable();
        let (lo, first) = cells[0];
        let mut set = self.initial(Some(first));
        let mut next = 1;
        for x in lo + 1..=cells.last().unwrap().0 {
            let sym = if cells[next].0 == x {
                next += 1;
                Some(cells[next - 1].1)
            } else {
                None
            };
            set = self.step(&set, sym);
            if set.iter().all(|&w| w == 0) {
                return Ok(false);
            }
        }
        Ok(set.iter().any(|&w| w != 0))
    }

    /// `|L_F|` by subset construction along the hull of `F`.
    pub fn count(&self, f: &FiniteSubset) -> Result<BigUint> {
        let pos = Self::positions(f)?;
        if pos.is_empty() {
            return Ok(BigUint::from(u8::from(!self.is_empty())));
        }
        let mut layer: BTreeMap<StateSet, BigUint> = BTreeMap::new();
        for a in 0..self.nsym as Symbol {
            let set = self.initial(Some(a));
            if set.iter().any(|&w| w != 0) {
                *layer.entry(set).or_default() += 1u32;
            }
        }
        let mut next = 1;
        for x in pos[0] + 1..=*pos.last().unwrap() {
            let in_f = next < pos.len() && pos[next] == x;
            if in_f {
                next += 1;
            }
            let mut out: BTreeMap<StateSet, BigUint> = BTreeMap::new();
            for (set, c) in &layer {
                if in_f {
                    for a in 0..self.nsym as Symbol {
                        let s = self.step(set, Some(a));
                        if s.iter().any(|&w| w != 0) {
                            *out.entry(s).or_default() += c;
                        }
                    }
                } else {
                    let s = self.step(set, None);
                    if s.iter().any(|&w| w != 0) {
                        *out.entry(s).or_default() += c;
                    }
                }
            }
            layer = out;
        }
        Ok(layer.values().sum())
    }

    /// Every pattern of `L_F`, in canonical pattern order.
    pub fn enumerate(&self, f: &FiniteSubset, limit: u64) -> Result<Vec<Pattern>> {
        let pos = Self::positions(f)?;
        if pos.is_empty() {
            return Ok(if self.is_empty() {
                Vec::new()
            } else {
                vec![Pattern::new()]
            });
        }
        let mut out: Vec<Vec<Symbol>> = Vec::new();
        let mut word = Vec::with_capacity(pos.len());
        let mut nodes = 0u64;
        for a in 0..self.nsym as Symbol {
            let set = self.initial(Some(a));
            if set.iter().all(|&w| w == 0) {
                continue;
            }
            word.push(a);
            self.enumerate_rec(&pos, 1, pos[0], set, &mut word, &mut out, &mut nodes, limit)?;
            word.pop();
        }
        let mut patterns: Vec<Pattern> = out
            .into_iter()
            .map(|w| {
                Pattern::from_pairs(
                    pos.iter()
                        .zip(w)
                        .map(|(&x, s)| (GroupElement::Lattice(vec![x]), s)),
                )
                .expect("distinct positions")
            })
            .collect();
        patterns.sort();
        Ok(patterns)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_rec(
        &self,
        pos: &[i64],
        next: usize,
        at: i64,
        set: StateSet,
        word: &mut Vec<Symbol>,
        out: &mut Vec<Vec<Symbol>>,
        nodes: &mut u64,
        limit: u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > limit {
            return Err(Error::Budget {
                limit,
                used: *nodes,
                progress: format!("{} patterns enumerated", out.len()),
            });
        }
        if next == pos.len() {
            out.push(word.clone());
            return Ok(());
        }
        let mut set = set;
        for _ in at + 1..pos[next] {
            set = self.step(&set, None);
        }
        for a in 0..self.nsym as Symbol {
            let s = self.step(&set, Some(a));
            if s.iter().all(|&w| w == 0) {
                continue;
            }
            word.push(a);
            self.enumerate_rec(pos, next + 1, pos[next], s, word, out, nodes, limit)?;
            word.pop();
        }
        Ok(())
    }

    /// Spectral radius of the block graph's adjacency matrix, computed per
    /// strongly connected component by power iteration on `I + M`.
    pub fn spectral_radius(&self, rel_tol: f64) -> Option<f64> {
        let mut graph = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.states.len()).map(|_| graph.add_node(())).collect();
        for (i, succ) in self.succ.iter().enumerate() {
            for &j in succ {
                graph.add_edge(nodes[i], nodes[j as usize], ());
            }
        }
        let mut best: Option<f64> = None;
        for comp in tarjan_scc(&graph) {
            let members: Vec<usize> = comp.iter().map(|n| n.index()).collect();
            let local: BTreeMap<usize, usize> =
                members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
            let edges: Vec<Vec<usize>> = members
                .iter()
                .map(|&i| {
                    self.succ[i]
                        .iter()
                        .filter_map(|&j| local.get(&(j as usize)).copied())
                        .collect()
                })
                .collect();
            if edges.iter().all(Vec::is_empty) {
                continue;
            }
            let rho = perron_root(&edges, rel_tol);
            best = Some(best.map_or(rho, |b: f64| b.max(rho)));
        }
        best
    }
}

/// Perron root of an irreducible 0/1 matrix given by out-edges. `I + M` is
/// primitive, so its power iteration converges; the Collatz–Wielandt
/// bounds `min (Av)_i/v_i ≤ ρ ≤ max (Av)_i/v_i` give the stopping rule.
fn perron_root(edges: &[Vec<usize>], rel_tol: f64) -> f64 {
    let n = edges.len();
    let mut v = vec![1.0f64; n];
    let mut estimate = 0.0;
    for _ in 0..1_000_000 {
        let mut w = v.clone();
        for (i, out) in edges.iter().enumerate() {
            for &j in out {
                w[i] += v[j];
            }
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let r = w[i] / v[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        estimate = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * hi {
            break;
        }
        let norm = w.iter().cloned().fold(0.0, f64::max);
        v = w.into_iter().map(|x| x / norm).collect();
    }
    estimate - 1.0
}
