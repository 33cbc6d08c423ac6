//! Constraint compilation and the backtracking solver behind every
//! admissibility search.
//!
//! A subshift rule restricted to a finite window becomes a list of clauses
//! over site indices. The solver keeps per-variable domains as bitmasks and
//! does forward checking: when a clause has one open variable left, values
//! that would violate it are removed from that variable's domain.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement};
use crate::pattern::{Pattern, Symbol};
use crate::spec::{Predicate, Rule, SubshiftSpec};

const UNSET: Symbol = Symbol::MAX;
pub(crate) const MAX_SEARCH_ALPHABET: usize = 64;

/// Sites of a finite window, indexed in canonical order.
#[derive(Clone, Debug)]
pub(crate) struct SiteIndex {
    elems: Vec<GroupElement>,
    index: HashMap<GroupElement, u32>,
}

impl SiteIndex {
    pub fn new(set: &FiniteSubset) -> Self {
        let elems = set.to_vec();
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as u32))
            .collect();
        Self { elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn get(&self, g: &GroupElement) -> Option<u32> {
        self.index.get(g).copied()
    }

    pub fn elem(&self, i: u32) -> &GroupElement {
        &self.elems[i as usize]
    }

    pub fn indices_of(&self, set: &FiniteSubset) -> Vec<u32> {
        set.iter().filter_map(|g| self.get(g)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Clause {
    /// Violated when every listed variable carries the listed value.
    Forbid { vars: Vec<u32>, vals: Vec<Symbol> },
    /// Violated when the values (0 or 1) sum to 1 mod 2.
    Parity { vars: Vec<u32> },
}

impl Clause {
    pub fn vars(&self) -> &[u32] {
        match self {
            Clause::Forbid { vars, .. } | Clause::Parity { vars } => vars,
        }
    }

    pub fn violated(&self, value: impl Fn(u32) -> Symbol) -> bool {
        match self {
            Clause::Forbid { vars, vals } => vars.iter().zip(vals).all(|(&v, &s)| value(v) == s),
            Clause::Parity { vars } => vars.iter().fold(0, |acc, &v| acc ^ value(v)) & 1 == 1,
        }
    }

    pub fn remap(&self, f: impl Fn(u32) -> u32) -> Clause {
        match self {
            Clause::Forbid { vars, vals } => Clause::Forbid {
                vars: vars.iter().map(|&v| f(v)).collect(),
                vals: vals.clone(),
            },
            Clause::Parity { vars } => Clause::Parity {
                vars: vars.iter().map(|&v| f(v)).collect(),
            },
        }
    }
}

/// Every translated forbidden pattern, linear constraint or predicate
/// instance whose full support lies inside `sites`.
///
/// A constraint with support `S` applies at `g` when `g·S ⊆ sites`.
pub(crate) fn compile(spec: &SubshiftSpec, sites: &SiteIndex) -> Result<Vec<Clause>> {
    let mut out = Vec::new();
    match spec.rule() {
        Rule::Forbidden(patterns) => {
            for p in patterns {
                let entries: Vec<(&GroupElement, Symbol)> = p.iter().collect();
                let vals: Vec<Symbol> = entries.iter().map(|e| e.1).collect();
                for_each_placement(
                    &entries.iter().map(|e| e.0).collect::<Vec<_>>(),
                    sites,
                    |vars| {
                        out.push(Clause::Forbid {
                            vars,
                            vals: vals.clone(),
                        })
                    },
                )?;
            }
        }
        Rule::LinearGf2(supports) => {
            for s in supports {
                let elems: Vec<&GroupElement> = s.iter().collect();
                for_each_placement(&elems, sites, |vars| out.push(Clause::Parity { vars }))?;
            }
        }
        Rule::Predicate(Predicate::AtMostOne { symbol }) => {
            for i in 0..sites.len() as u32 {
                for j in i + 1..sites.len() as u32 {
                    out.push(Clause::Forbid {
                        vars: vec![i, j],
                        vals: vec![*symbol, *symbol],
                    });
                }
            }
        }
        Rule::Predicate(Predicate::PerfectMatching) => {
            let letters = spec.matching_letters();
            let symbol_of = |code: u8| letters.iter().position(|&l| l == code).unwrap() as Symbol;
            for i in 0..sites.len() as u32 {
                for (s, &code) in letters.iter().enumerate() {
                    let partner = sites.elem(i).mul(&GroupElement::Word(vec![code]))?;
                    let Some(j) = sites.get(&partner) else {
                        continue;
                    };
                    let back = symbol_of(code ^ 1);
                    for t in 0..letters.len() as Symbol {
                        if t != back {
                            out.push(Clause::Forbid {
                                vars: vec![i, j],
                                vals: vec![s as Symbol, t],
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn for_each_placement(
    support: &[&GroupElement],
    sites: &SiteIndex,
    mut emit: impl FnMut(Vec<u32>),
) -> Result<()> {
    let Some(anchor) = support.first() else {
        return Ok(());
    };
    let anchor_inv = anchor.inv();
    'sites: for w in &sites.elems {
        let g = w.mul(&anchor_inv)?;
        let mut vars = Vec::with_capacity(support.len());
        for h in support {
            match sites.get(&g.mul(h)?) {
                Some(v) => vars.push(v),
                None => continue 'sites,
            }
        }
        emit(vars);
    }
    Ok(())
}

/// Checks every compiled clause of `spec` on the support of `p`.
pub(crate) fn pattern_violates(spec: &SubshiftSpec, p: &Pattern) -> Result<bool> {
    Ok(first_violation(spec, p)?.is_some())
}

/// Sites of the first violated clause (in compilation order), if any.
pub(crate) fn first_violation(spec: &SubshiftSpec, p: &Pattern) -> Result<Option<FiniteSubset>> {
    let support = p.support();
    let sites = SiteIndex::new(&support);
    let values = p.values();
    let clauses = compile(spec, &sites)?;
    Ok(clauses
        .iter()
        .find(|c| c.violated(|v| values[v as usize]))
        .map(|c| c.vars().iter().map(|&v| sites.elem(v).clone()).collect()))
}

/// A compiled constraint problem, shareable between solver instances.
#[derive(Debug)]
pub(crate) struct Csp {
    nvars: usize,
    nsym: usize,
    clauses: Vec<Clause>,
    occurs: Vec<Vec<u32>>,
}

impl Csp {
    pub fn new(nvars: usize, nsym: usize, clauses: Vec<Clause>) -> Result<Self> {
        if nsym > MAX_SEARCH_ALPHABET {
            return Err(Error::usage(format!(
                "search supports alphabets of at most {MAX_SEARCH_ALPHABET} symbols"
            )));
        }
        let mut occurs = vec![Vec::new(); nvars];
        for (ci, c) in clauses.iter().enumerate() {
            for &v in c.vars() {
                occurs[v as usize].push(ci as u32);
            }
        }
        Ok(Self {
            nvars,
            nsym,
            clauses,
            occurs,
        })
    }

    /// Problem over the sites of `window` for `spec`.
    pub fn for_window(spec: &SubshiftSpec, sites: &SiteIndex) -> Result<Self> {
        let clauses = compile(spec, sites)?;
        Self::new(sites.len(), spec.alphabet().len(), clauses)
    }
}

enum Undo {
    Assign(u32),
    Domain(u32, u64),
}

pub(crate) struct Solver<'c> {
    csp: &'c Csp,
    val: Vec<Symbol>,
    dom: Vec<u64>,
    open: Vec<u32>,
    trail: Vec<Undo>,
    dead: bool,
    nodes: u64,
    limit: u64,
}

impl<'c> Solver<'c> {
    pub fn new(csp: &'c Csp, limit: u64) -> Self {
        let full = if csp.nsym == 64 {
            u64::MAX
        } else {
            (1u64 << csp.nsym) - 1
        };
        let mut s = Self {
            csp,
            val: vec![UNSET; csp.nvars],
            dom: vec![full; csp.nvars],
            open: csp.clauses.iter().map(|c| c.vars().len() as u32).collect(),
            trail: Vec::new(),
            dead: false,
            nodes: 0,
            limit,
        };
        for ci in 0..csp.clauses.len() {
            if s.open[ci] == 1 && !s.narrow(ci) {
                s.dead = true;
            }
        }
        s.trail.clear();
        s
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn value(&self, v: u32) -> Option<Symbol> {
        let s = self.val[v as usize];
        (s != UNSET).then_some(s)
    }

    pub fn values_of(&self, vars: &[u32]) -> Vec<Symbol> {
        vars.iter().map(|&v| self.val[v as usize]).collect()
    }

    pub fn checkpoint(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Assign(v) => {
                    self.val[v as usize] = UNSET;
                    for &ci in &self.csp.occurs[v as usize] {
                        self.open[ci as usize] += 1;
                    }
                }
                Undo::Domain(v, old) => self.dom[v as usize] = old,
            }
        }
    }

    fn budget_error(&self) -> Error {
        Error::Budget {
            limit: self.limit,
            used: self.nodes,
            progress: "search interrupted".into(),
        }
    }

    /// Assigns `s` to `v` and propagates. Returns `false` on a conflict; the
    /// caller restores state with [`Solver::undo_to`].
    pub fn assign(&mut self, v: u32, s: Symbol) -> Result<bool> {
        if self.dead {
            return Ok(false);
        }
        let vi = v as usize;
        if self.val[vi] != UNSET {
            return Ok(self.val[vi] == s);
        }
        if (s as usize) >= 64 || self.dom[vi] & (1u64 << s) == 0 {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(self.budget_error());
        }
        self.val[vi] = s;
        self.trail.push(Undo::Assign(v));
        let csp = self.csp;
        for &ci in &csp.occurs[vi] {
            self.open[ci as usize] -= 1;
        }
        for &ci in &csp.occurs[vi] {
            let ci = ci as usize;
            let open = self.open[ci];
            match open {
                0 => {
                    let val = &self.val;
                    if csp.clauses[ci].violated(|u| val[u as usize]) {
                        return Ok(false);
                    }
                }
                1 if !self.narrow(ci) => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }

    /// Forward check on a clause with a single open variable.
    fn narrow(&mut self, ci: usize) -> bool {
        let clause = &self.csp.clauses[ci];
        let mut open = None;
        let remove: u64 = match clause {
            Clause::Forbid { vars, vals } => {
                let mut matching = true;
                for (&v, &s) in vars.iter().zip(vals) {
                    let cur = self.val[v as usize];
                    if cur == UNSET {
                        open = Some((v, s));
                    } else if cur != s {
                        matching = false;
                        break;
                    }
                }
                match open {
                    Some((_, s)) if matching => 1u64 << s,
                    _ => 0,
                }
            }
            Clause::Parity { vars } => {
                let mut parity = 0;
                for &v in vars {
                    let cur = self.val[v as usize];
                    if cur == UNSET {
                        open = Some((v, 0));
                    } else {
                        parity ^= cur & 1;
                    }
                }
                // the open variable must equal the parity of the rest
                if parity == 0 {
                    !1u64
                } else {
                    !2u64
                }
            }
        };
        let Some((u, _)) = open else {
            return true;
        };
        let ui = u as usize;
        let old = self.dom[ui];
        let new = old & !remove;
        if new != old {
            self.trail.push(Undo::Domain(u, old));
            self.dom[ui] = new;
        }
        new != 0
    }

    fn pick_mrv(&self) -> Option<u32> {
        let mut best = None;
        let mut best_count = u32::MAX;
        for (v, &s) in self.val.iter().enumerate() {
            if s == UNSET {
                let c = self.dom[v].count_ones();
                if c < best_count {
                    best = Some(v as u32);
                    best_count = c;
                    if c <= 1 {
                        break;
                    }
                }
            }
        }
        best
    }

    /// Completes the current partial assignment, leaving the solution in
    /// place on success.
    pub fn solve(&mut self) -> Result<bool> {
        if self.dead {
            return Ok(false);
        }
        let Some(v) = self.pick_mrv() else {
            return Ok(true);
        };
        let mut d = self.dom[v as usize];
        while d != 0 {
            let s = d.trailing_zeros() as Symbol;
            d &= d - 1;
            let mark = self.checkpoint();
            if self.assign(v, s)? && self.solve()? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }

    /// Whether the current partial assignment has a completion; state is
    /// left unchanged.
    pub fn feasible(&mut self) -> Result<bool> {
        let mark = self.checkpoint();
        let ok = self.solve()?;
        self.undo_to(mark);
        Ok(ok)
    }

    /// Visits, in lexicographic order, every assignment of `order` that
    /// extends to a full solution. `visit` returns `false` to stop.
    pub fn project(
        &mut self,
        order: &[u32],
        visit: &mut dyn FnMut(&[Symbol]) -> Result<bool>,
    ) -> Result<bool> {
        if self.dead {
            return Ok(true);
        }
        let mut buf = Vec::with_capacity(order.len());
        self.project_rec(order, 0, &mut buf, visit)
    }

    fn project_rec(
        &mut self,
        order: &[u32],
        depth: usize,
        buf: &mut Vec<Symbol>,
        visit: &mut dyn FnMut(&[Symbol]) -> Result<bool>,
    ) -> Result<bool> {
        if depth == order.len() {
            if self.feasible()? {
                return visit(buf);
            }
            return Ok(true);
        }
        let v = order[depth];
        if let Some(s) = self.value(v) {
            buf.push(s);
            let go = self.project_rec(order, depth + 1, buf, visit)?;
            buf.pop();
            return Ok(go);
        }
        let mut d = self.dom[v as usize];
        while d != 0 {
            let s = d.trailing_zeros() as Symbol;
            d &= d - 1;
            let mark = self.checkpoint();
            if self.assign(v, s)? {
                buf.push(s);
                let go = self.project_rec(order, depth + 1, buf, visit)?;
                buf.pop();
                if !go {
                    self.undo_to(mark);
                    return Ok(false);
                }
            }
            self.undo_to(mark);
        }
        Ok(true)
    }

    /// The lexicographically least assignment of `order` that extends to a
    /// full solution. On success the chosen values stay assigned.
    pub fn least(&mut self, order: &[u32]) -> Result<Option<Vec<Symbol>>> {
        if !self.feasible()? {
            return Ok(None);
        }
        for &v in order {
            if self.value(v).is_some() {
                continue;
            }
            let mut d = self.dom[v as usize];
            let mut placed = false;
            while d != 0 {
                let s = d.trailing_zeros() as Symbol;
                d &= d - 1;
                let mark = self.checkpoint();
                if self.assign(v, s)? && self.feasible()? {
                    placed = true;
                    break;
                }
                self.undo_to(mark);
            }
            debug_assert!(placed, "feasible state must admit some value");
            if !placed {
                return Ok(None);
            }
        }
        Ok(Some(self.values_of(order)))
    }
}
