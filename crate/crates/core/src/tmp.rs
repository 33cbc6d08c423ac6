//! Splicing checks for the topological Markov property, and searches for
//! interchangeable patterns (finite asymptotic pairs) and homoclinic points.
//!
//! Every verdict is relative to a finite window and an admissibility level.
//! Only counterexamples under `ExactZ` refute the property outright.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::One;

use crate::admissible::{enumerate_admissible, is_admissible, is_locally_admissible, CountMethod};
use crate::budget::{first_hit, Meter, SearchConfig, Task};
use crate::csp::{compile, first_violation, Clause, Csp, SiteIndex, Solver};
use crate::error::{Error, Result};
use crate::gf2::{self, Gf2Matrix};
use crate::group::{FiniteSubset, GroupSpec};
use crate::pattern::{Pattern, Symbol};
use crate::spec::{AdmissibilityLevel, Rule, SubshiftSpec};

/// `z` on `support(x)` with `z = x` on `inner` and `z = y` elsewhere.
pub fn splice(x: &Pattern, y: &Pattern, inner: &FiniteSubset) -> Result<Pattern> {
    let w = x.support();
    if w != y.support() {
        return Err(Error::usage("splice needs patterns on the same support"));
    }
    if !inner.is_subset(&w) {
        return Err(Error::usage("splice region must lie inside the support"));
    }
    let mut z = y.clone();
    for (g, s) in x.restrict(inner).iter() {
        z.insert(g.clone(), s);
    }
    Ok(z)
}

/// The sets of a splicing check: `inner ⊆ outer ⊆ window`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceProblem {
    pub inner: FiniteSubset,
    pub outer: FiniteSubset,
    pub window: FiniteSubset,
    pub level: AdmissibilityLevel,
}

impl SpliceProblem {
    pub fn new(
        inner: FiniteSubset,
        outer: FiniteSubset,
        window: FiniteSubset,
        level: AdmissibilityLevel,
    ) -> Result<Self> {
        if !inner.is_subset(&outer) || !outer.is_subset(&window) {
            return Err(Error::usage("expected inner ⊆ outer ⊆ window"));
        }
        Ok(Self {
            inner,
            outer,
            window,
            level,
        })
    }

    fn check(&self, spec: &SubshiftSpec) -> Result<()> {
        spec.check_level(self.level)?;
        self.window.check_group(spec.group())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoldsBy {
    /// Every constraint meeting the inner set lies inside the outer set.
    Structure,
    /// Every admissible pair on the window was spliced and checked.
    Exhaustion,
}

/// Two admissible patterns agreeing on `outer ∖ inner` whose splice is not
/// admissible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub inner: FiniteSubset,
    pub outer: FiniteSubset,
    pub level: AdmissibilityLevel,
    pub x: Pattern,
    pub y: Pattern,
    pub splice: Pattern,
    /// Sites of a constraint violated inside the window, when the splice is
    /// not even locally admissible.
    pub violation: Option<FiniteSubset>,
}

impl Counterexample {
    pub fn window(&self) -> FiniteSubset {
        self.x.support()
    }

    /// Rechecks every claim from the carried data.
    pub fn validate(&self, spec: &SubshiftSpec, cfg: &SearchConfig) -> Result<bool> {
        let w = self.window();
        if self.y.support() != w || !self.inner.is_subset(&self.outer) || !self.outer.is_subset(&w)
        {
            return Ok(false);
        }
        let rest = self.outer.difference(&self.inner);
        if !self.x.agrees_on(&self.y, &rest) {
            return Ok(false);
        }
        let z = splice(&self.x, &self.y, &self.inner)?;
        if z != self.splice {
            return Ok(false);
        }
        Ok(is_admissible(spec, &self.x, self.level, cfg)?
            && is_admissible(spec, &self.y, self.level, cfg)?
            && !is_admissible(spec, &z, self.level, cfg)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds {
        level: AdmissibilityLevel,
        window: FiniteSubset,
        by: HoldsBy,
    },
    Counterexample(Box<Counterexample>),
    Inconclusive {
        limit: u64,
        used: u64,
        progress: String,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Counterexample(c) => Some(c),
            _ => None,
        }
    }
}

fn inconclusive(e: Error) -> Result<Verdict> {
    match e {
        Error::Budget {
            limit,
            used,
            progress,
        } => Ok(Verdict::Inconclusive {
            limit,
            used,
            progress,
        }),
        other => Err(other),
    }
}

/// Whether every constraint touching `inner` lies inside `outer`, in which
/// case splicing can never create a violation.
fn splice_safe_by_structure(spec: &SubshiftSpec, prob: &SpliceProblem) -> Result<bool> {
    match prob.level {
        AdmissibilityLevel::LocalMargin(r) => {
            let sites = SiteIndex::new(&prob.window.thicken(spec.group(), r)?);
            let inner: Vec<bool> = (0..sites.len() as u32)
                .map(|v| prob.inner.contains(sites.elem(v)))
                .collect();
            for c in compile(spec, &sites)? {
                let vars = c.vars();
                if vars.iter().any(|&v| inner[v as usize])
                    && !vars.iter().all(|&v| prob.outer.contains(sites.elem(v)))
                {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        AdmissibilityLevel::ExactZ => {
            let Rule::Forbidden(patterns) = spec.rule() else {
                return Ok(false);
            };
            for p in patterns {
                let support = p.support();
                for a in &prob.inner {
                    for s in &support {
                        let placed = support.left_translate(&a.mul(&s.inv())?)?;
                        if !placed.is_subset(&prob.outer) {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Tests the splicing property for one `(A, B, W)`. Returns `Holds` with a
/// structural argument when one applies, otherwise searches all pairs.
pub fn check_memory_set(
    spec: &SubshiftSpec,
    prob: &SpliceProblem,
    cfg: &SearchConfig,
) -> Result<Verdict> {
    prob.check(spec)?;
    if splice_safe_by_structure(spec, prob)? {
        return Ok(Verdict::Holds {
            level: prob.level,
            window: prob.window.clone(),
            by: HoldsBy::Structure,
        });
    }
    check_memory_set_exhaustive(spec, prob, cfg)
}

/// Like [`check_memory_set`] but always splices every pair; returns the
/// least counterexample, ordering pairs by `x` and then `y`.
pub fn check_memory_set_exhaustive(
    spec: &SubshiftSpec,
    prob: &SpliceProblem,
    cfg: &SearchConfig,
) -> Result<Verdict> {
    prob.check(spec)?;
    match exhaustive(spec, prob, cfg) {
        Ok(v) => Ok(v),
        Err(e) => inconclusive(e),
    }
}

fn exhaustive(spec: &SubshiftSpec, prob: &SpliceProblem, cfg: &SearchConfig) -> Result<Verdict> {
    let lang = enumerate_admissible(spec, &prob.window, prob.level, cfg)?;
    let members: HashSet<&Pattern> = lang.iter().collect();
    let rest = prob.outer.difference(&prob.inner);
    let mut classes: HashMap<Pattern, Vec<usize>> = HashMap::new();
    for (i, p) in lang.iter().enumerate() {
        classes.entry(p.restrict(&rest)).or_default().push(i);
    }
    let class_of: Vec<&Vec<usize>> = lang.iter().map(|p| &classes[&p.restrict(&rest)]).collect();
    let xs: Vec<usize> = (0..lang.len()).collect();
    let mut meter = Meter::new(cfg);
    let hit = first_hit(&xs, &mut meter, |&i, _| {
        let x = &lang[i];
        let mut nodes = 0;
        for &j in class_of[i] {
            nodes += 1;
            let z = match splice(x, &lang[j], &prob.inner) {
                Ok(z) => z,
                Err(e) => {
                    return Task {
                        result: Err(e),
                        nodes,
                    }
                }
            };
            if !members.contains(&z) {
                return Task {
                    result: Ok(Some((j, z))),
                    nodes,
                };
            }
        }
        Task {
            result: Ok(None),
            nodes,
        }
    })?;
    let Some((i, (j, z))) = hit else {
        return Ok(Verdict::Holds {
            level: prob.level,
            window: prob.window.clone(),
            by: HoldsBy::Exhaustion,
        });
    };
    let violation = first_violation(spec, &z)?;
    let cx = Counterexample {
        inner: prob.inner.clone(),
        outer: prob.outer.clone(),
        level: prob.level,
        x: lang[i].clone(),
        y: lang[j].clone(),
        splice: z,
        violation,
    };
    if !cx.validate(spec, cfg)? {
        return Err(Error::usage(
            "internal error: counterexample failed its self-check",
        ));
    }
    Ok(Verdict::Counterexample(Box::new(cx)))
}

/// Which side the strong-TMP margin is multiplied on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MarginSide {
    /// `B = A·F`
    #[default]
    Right,
    /// `B = F·A`
    Left,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanEntry {
    pub problem: SpliceProblem,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub margin: FiniteSubset,
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.verdict.holds())
    }

    pub fn first_counterexample(&self) -> Option<&Counterexample> {
        self.entries.iter().find_map(|e| e.verdict.counterexample())
    }
}

/// Runs [`check_memory_set`] on `(A, A·F, A·F·B_w)` for every `A`.
pub fn strong_tmp_scan(
    spec: &SubshiftSpec,
    margin: &FiniteSubset,
    supports: &[FiniteSubset],
    growth: u32,
    level: AdmissibilityLevel,
    side: MarginSide,
    cfg: &SearchConfig,
) -> Result<ScanReport> {
    let group = spec.group();
    if !margin.contains(&group.identity()) {
        return Err(Error::usage("the margin must contain the identity"));
    }
    margin.check_group(group)?;
    let mut entries = Vec::new();
    for a in supports {
        a.check_group(group)?;
        let outer = match side {
            MarginSide::Right => a.product(margin)?,
            MarginSide::Left => margin.product(a)?,
        };
        let window = outer.thicken(group, growth)?;
        let problem = SpliceProblem::new(a.clone(), outer, window, level)?;
        let verdict = check_memory_set(spec, &problem, cfg)?;
        entries.push(ScanEntry { problem, verdict });
    }
    Ok(ScanReport {
        margin: margin.clone(),
        entries,
    })
}

/// Distinct patterns `p < q` on `inner` sharing a context on
/// `window ∖ inner`, both admissible at `level` once glued to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub inner: FiniteSubset,
    pub level: AdmissibilityLevel,
    pub p: Pattern,
    pub q: Pattern,
    pub context: Pattern,
}

impl PairWitness {
    pub fn window(&self) -> FiniteSubset {
        self.inner.union(&self.context.support())
    }

    pub fn validate(&self, spec: &SubshiftSpec, cfg: &SearchConfig) -> Result<bool> {
        if self.p == self.q
            || self.p.support() != self.inner
            || self.q.support() != self.inner
            || !self.context.support().intersection(&self.inner).is_empty()
        {
            return Ok(false);
        }
        let x = self.p.glue(&self.context)?;
        let y = self.q.glue(&self.context)?;
        Ok(is_admissible(spec, &x, self.level, cfg)? && is_admissible(spec, &y, self.level, cfg)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairOutcome {
    Witness(PairWitness),
    NoneUpToScale {
        inner: FiniteSubset,
        window: FiniteSubset,
        level: AdmissibilityLevel,
    },
}

/// The least `(p, q, context)` with `p < q`, or `NoneUpToScale`.
pub fn find_interchangeable_pair(
    spec: &SubshiftSpec,
    inner: &FiniteSubset,
    window: &FiniteSubset,
    level: AdmissibilityLevel,
    cfg: &SearchConfig,
) -> Result<PairOutcome> {
    spec.check_level(level)?;
    window.check_group(spec.group())?;
    if inner.is_empty() || !inner.is_subset(window) {
        return Err(Error::usage(
            "expected a nonempty inner set inside the window",
        ));
    }
    let found = match level {
        AdmissibilityLevel::ExactZ => pair_exact(spec, inner, window, cfg)?,
        AdmissibilityLevel::LocalMargin(r) => pair_margin(spec, inner, window, r, cfg)?,
    };
    Ok(match found {
        Some((p, q, context)) => {
            let w = PairWitness {
                inner: inner.clone(),
                level,
                p,
                q,
                context,
            };
            if !w.validate(spec, cfg)? {
                return Err(Error::usage(
                    "internal error: pair witness failed its self-check",
                ));
            }
            PairOutcome::Witness(w)
        }
        None => PairOutcome::NoneUpToScale {
            inner: inner.clone(),
            window: window.clone(),
            level,
        },
    })
}

type Triple = (Pattern, Pattern, Pattern);

fn pair_exact(
    spec: &SubshiftSpec,
    inner: &FiniteSubset,
    window: &FiniteSubset,
    cfg: &SearchConfig,
) -> Result<Option<Triple>> {
    let lang = enumerate_admissible(spec, window, AdmissibilityLevel::ExactZ, cfg)?;
    let rest = window.difference(inner);
    let mut classes: BTreeMap<Pattern, Vec<Pattern>> = BTreeMap::new();
    for x in &lang {
        classes
            .entry(x.restrict(&rest))
            .or_default()
            .push(x.restrict(inner));
    }
    Ok(classes
        .into_iter()
        .filter_map(|(ctx, mut ps)| {
            ps.sort();
            ps.dedup();
            (ps.len() >= 2).then(|| (ps[0].clone(), ps[1].clone(), ctx))
        })
        .min())
}

fn pair_margin(
    spec: &SubshiftSpec,
    inner: &FiniteSubset,
    window: &FiniteSubset,
    r: u32,
    cfg: &SearchConfig,
) -> Result<Option<Triple>> {
    let grown = window.thicken(spec.group(), r)?;
    let sites = SiteIndex::new(&grown);
    let n = sites.len() as u32;
    let nsym = spec.alphabet().len();
    let clauses = compile(spec, &sites)?;
    let inner_vars = sites.indices_of(inner);
    let rest = window.difference(inner);
    let ctx_vars = sites.indices_of(&rest);

    let single = Csp::new(sites.len(), nsym, clauses.clone())?;
    let mut meter = Meter::new(cfg);
    let mut cands: Vec<Vec<Symbol>> = Vec::new();
    let mut solver = Solver::new(&single, meter.remaining());
    let listed = solver.project(&inner_vars, &mut |vals| {
        cands.push(vals.to_vec());
        Ok(true)
    });
    meter.charge(solver.nodes(), || "listing inner patterns".into())?;
    listed?;

    // Copy two shares the variables of window ∖ inner with copy one.
    let shared: Vec<bool> = (0..n).map(|v| rest.contains(sites.elem(v))).collect();
    let second = |v: u32| if shared[v as usize] { v } else { n + v };
    let mut both = clauses.clone();
    both.extend(clauses.iter().map(|c| c.remap(second)));
    let pair_csp = Csp::new(2 * sites.len(), nsym, both)?;

    let fix = |solver: &mut Solver<'_>, p: &[Symbol], q: &[Symbol]| -> Result<bool> {
        for (&v, (&a, &b)) in inner_vars.iter().zip(p.iter().zip(q)) {
            if !solver.assign(v, a)? || !solver.assign(second(v), b)? {
                return Ok(false);
            }
        }
        Ok(true)
    };

    for (i, p) in cands.iter().enumerate() {
        let qs = &cands[i + 1..];
        let hit = first_hit(qs, &mut meter, |q, limit| {
            let mut s = Solver::new(&pair_csp, limit);
            let result = (|| Ok((fix(&mut s, p, q)? && s.feasible()?).then_some(())))();
            Task {
                result,
                nodes: s.nodes().max(1),
            }
        })
        .map_err(|e| with_progress(e, i, cands.len()))?;
        if let Some((j, ())) = hit {
            let q = &qs[j];
            let mut s = Solver::new(&pair_csp, meter.remaining());
            let least = (|| {
                fix(&mut s, p, q)?;
                s.least(&ctx_vars)
            })();
            meter.charge(s.nodes(), || "choosing the least context".into())?;
            let ctx = least?.expect("feasible pair has a context");
            return Ok(Some((
                Pattern::from_values(inner, p),
                Pattern::from_values(inner, q),
                Pattern::from_values(&rest, &ctx),
            )));
        }
    }
    Ok(None)
}

fn with_progress(e: Error, done: usize, total: usize) -> Error {
    match e {
        Error::Budget { limit, used, .. } => Error::Budget {
            limit,
            used,
            progress: format!("{done} of {total} first patterns finished"),
        },
        other => other,
    }
}

/// A pattern on `B_radius`, not constantly the background, that is locally
/// admissible on `B_{radius+margin}` once padded with the background.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomoclinicWitness {
    pub background: Symbol,
    pub radius: u32,
    pub margin: u32,
    pub pattern: Pattern,
}

impl HomoclinicWitness {
    pub fn validate(&self, spec: &SubshiftSpec) -> Result<bool> {
        let group = spec.group();
        let core = group.ball(self.radius)?;
        if self.pattern.support() != core || self.pattern.iter().all(|(_, s)| s == self.background)
        {
            return Ok(false);
        }
        let padded = padded(
            group,
            &self.pattern,
            self.background,
            self.radius + self.margin,
        )?;
        is_locally_admissible(spec, &padded)
    }
}

fn padded(group: &GroupSpec, p: &Pattern, b: Symbol, radius: u32) -> Result<Pattern> {
    let ball = group.ball(radius)?;
    Pattern::constant(&ball.difference(&p.support()), b).glue(p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomoclinicOutcome {
    Witness(HomoclinicWitness),
    NoneUpToScale {
        background: Symbol,
        radius: u32,
        margin: u32,
    },
}

/// Margin used when none is given: the rule diameter, at least 1.
pub fn default_homoclinic_margin(spec: &SubshiftSpec) -> u32 {
    spec.rule_diameter().unwrap_or(1).max(1) as u32
}

fn check_background(spec: &SubshiftSpec, b: Symbol) -> Result<()> {
    if b as usize >= spec.alphabet().len() {
        return Err(Error::usage(format!("background symbol {b} out of range")));
    }
    let group = spec.group();
    let ball = group.ball(default_homoclinic_margin(spec))?;
    if !is_locally_admissible(spec, &Pattern::constant(&ball, b))? {
        return Err(Error::usage(format!(
            "the constant configuration {} is not admissible",
            spec.alphabet().name(b)
        )));
    }
    Ok(())
}

struct Padded {
    core: FiniteSubset,
    sites: SiteIndex,
    core_vars: Vec<u32>,
    clauses: Vec<Clause>,
}

fn padded_system(spec: &SubshiftSpec, radius: u32, margin: u32) -> Result<Padded> {
    let group = spec.group();
    let core = group.ball(radius)?;
    let sites = SiteIndex::new(&group.ball(radius + margin)?);
    let core_vars = sites.indices_of(&core);
    let clauses = compile(spec, &sites)?;
    Ok(Padded {
        core,
        sites,
        core_vars,
        clauses,
    })
}

/// Kernel basis of the parity system with every site outside the core
/// fixed to 0, over the core's columns.
fn zero_padded_kernel(sys: &Padded) -> Vec<Vec<u64>> {
    let col: HashMap<u32, usize> = sys
        .core_vars
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let mut m = Gf2Matrix::new(sys.core_vars.len());
    for c in &sys.clauses {
        if let Clause::Parity { vars } = c {
            m.push_ones(vars.iter().filter_map(|v| col.get(v).copied()));
        }
    }
    m.kernel()
}

fn linear_zero_background(spec: &SubshiftSpec, b: Symbol) -> bool {
    b == 0 && matches!(spec.rule(), Rule::LinearGf2(_))
}

pub fn homoclinic_search(
    spec: &SubshiftSpec,
    background: Symbol,
    radius: u32,
    margin: Option<u32>,
    cfg: &SearchConfig,
) -> Result<HomoclinicOutcome> {
    check_background(spec, background)?;
    let margin = margin.unwrap_or_else(|| default_homoclinic_margin(spec));
    let sys = padded_system(spec, radius, margin)?;
    let found = if linear_zero_background(spec, background) {
        let ncols = sys.core_vars.len();
        gf2::least_nonzero(zero_padded_kernel(&sys), ncols).map(|v| {
            gf2::bits(&v, ncols)
                .into_iter()
                .map(Symbol::from)
                .collect::<Vec<_>>()
        })
    } else {
        let csp = Csp::new(sys.sites.len(), spec.alphabet().len(), sys.clauses.clone())?;
        let mut solver = Solver::new(&csp, cfg.budget);
        let mut found = None;
        let ok = pin_background(&mut solver, &sys, background)?;
        if ok {
            solver.project(&sys.core_vars, &mut |vals| {
                if vals.iter().all(|&s| s == background) {
                    return Ok(true);
                }
                found = Some(vals.to_vec());
                Ok(false)
            })?;
        }
        found
    };
    Ok(match found {
        Some(vals) => {
            let w = HomoclinicWitness {
                background,
                radius,
                margin,
                pattern: Pattern::from_values(&sys.core, &vals),
            };
            if !w.validate(spec)? {
                return Err(Error::usage(
                    "internal error: homoclinic witness failed its self-check",
                ));
            }
            HomoclinicOutcome::Witness(w)
        }
        None => HomoclinicOutcome::NoneUpToScale {
            background,
            radius,
            margin,
        },
    })
}

fn pin_background(solver: &mut Solver<'_>, sys: &Padded, b: Symbol) -> Result<bool> {
    for v in 0..sys.sites.len() as u32 {
        if !sys.core.contains(sys.sites.elem(v)) && !solver.assign(v, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of patterns on `B_radius` (the constant one included) that are
/// locally admissible on `B_{radius+margin}` over the background.
pub fn homoclinic_count(
    spec: &SubshiftSpec,
    background: Symbol,
    radius: u32,
    margin: Option<u32>,
    method: CountMethod,
    cfg: &SearchConfig,
) -> Result<BigUint> {
    check_background(spec, background)?;
    let margin = margin.unwrap_or_else(|| default_homoclinic_margin(spec));
    let sys = padded_system(spec, radius, margin)?;
    if method == CountMethod::Auto && linear_zero_background(spec, background) {
        let ncols = sys.core_vars.len();
        return Ok(BigUint::one() << gf2::span_dim(zero_padded_kernel(&sys), ncols));
    }
    let csp = Csp::new(sys.sites.len(), spec.alphabet().len(), sys.clauses.clone())?;
    let mut solver = Solver::new(&csp, cfg.budget);
    let mut count = BigUint::default();
    if pin_background(&mut solver, &sys, background)? {
        solver.project(&sys.core_vars, &mut |_| {
            count += 1u32;
            Ok(true)
        })?;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use crate::zoo;

    fn z(i: i64) -> GroupElement {
        GroupElement::Lattice(vec![i])
    }

    fn interval(a: i64, b: i64) -> FiniteSubset {
        (a..=b).map(z).collect()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn splice_basics() {
        let w = interval(0, 3);
        let x = Pattern::from_values(&w, &[1, 0, 1, 0]);
        let y = Pattern::from_values(&w, &[0, 0, 0, 1]);
        let a = interval(0, 1);
        assert_eq!(splice(&x, &x, &a).unwrap(), x);
        let s = splice(&x, &y, &a).unwrap();
        assert_eq!(s.values(), [1, 0, 0, 1]);
        assert!(splice(&x, &y.restrict(&a), &a).is_err());
    }

    #[test]
    fn sunny_side_up_fails_to_splice() {
        let spec = zoo::sunny_side_up(GroupSpec::lattice(1).unwrap());
        let prob = SpliceProblem::new(
            interval(0, 0),
            interval(0, 4),
            interval(0, 6),
            AdmissibilityLevel::LocalMargin(0),
        )
        .unwrap();
        let v = check_memory_set(&spec, &prob, &cfg()).unwrap();
        let cx = v.counterexample().expect("counterexample");
        assert_eq!(cx.x.values(), [1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(cx.y.values(), [0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(cx.x.get(&z(0)), Some(1));
        assert_eq!(cx.y.get(&z(6)), Some(1));
        assert!(cx.validate(&spec, &cfg()).unwrap());
    }

    #[test]
    fn golden_mean_memory_set() {
        let gm = zoo::golden_mean();
        let prob = SpliceProblem::new(
            interval(0, 3),
            interval(-1, 4),
            interval(-3, 6),
            AdmissibilityLevel::ExactZ,
        )
        .unwrap();
        assert_eq!(
            check_memory_set(&gm, &prob, &cfg()).unwrap(),
            Verdict::Holds {
                level: AdmissibilityLevel::ExactZ,
                window: interval(-3, 6),
                by: HoldsBy::Structure
            }
        );
        let v = check_memory_set_exhaustive(&gm, &prob, &cfg()).unwrap();
        assert!(matches!(
            v,
            Verdict::Holds {
                by: HoldsBy::Exhaustion,
                ..
            }
        ));
        let narrow = SpliceProblem::new(
            interval(0, 3),
            interval(0, 3),
            interval(-3, 6),
            AdmissibilityLevel::ExactZ,
        )
        .unwrap();
        let v = check_memory_set(&gm, &narrow, &cfg()).unwrap();
        assert!(v.counterexample().unwrap().validate(&gm, &cfg()).unwrap());
    }

    #[test]
    fn budget_becomes_inconclusive() {
        let spec = zoo::sunny_side_up(GroupSpec::lattice(1).unwrap());
        let prob = SpliceProblem::new(
            interval(0, 0),
            interval(0, 4),
            interval(0, 6),
            AdmissibilityLevel::LocalMargin(0),
        )
        .unwrap();
        let v = check_memory_set(&spec, &prob, &SearchConfig::with_budget(3)).unwrap();
        assert!(matches!(v, Verdict::Inconclusive { .. }));
    }

    #[test]
    fn hard_square_pair() {
        let gm = zoo::golden_mean();
        for level in [
            AdmissibilityLevel::ExactZ,
            AdmissibilityLevel::LocalMargin(1),
        ] {
            let out =
                find_interchangeable_pair(&gm, &interval(0, 0), &interval(-2, 2), level, &cfg())
                    .unwrap();
            let PairOutcome::Witness(w) = out else {
                panic!("expected a witness at {level}")
            };
            assert_eq!(w.p.values(), [0]);
            assert_eq!(w.q.values(), [1]);
            assert!(w.context.values().iter().all(|&s| s == 0));
        }
    }

    #[test]
    fn homoclinic_hard_square_and_cross() {
        let gm = zoo::golden_mean();
        let out = homoclinic_search(&gm, 0, 0, None, &cfg()).unwrap();
        let HomoclinicOutcome::Witness(w) = out else {
            panic!()
        };
        assert_eq!(w.pattern, Pattern::from_pairs([(z(0), 1)]).unwrap());
        assert!(homoclinic_search(&gm, 1, 0, None, &cfg()).is_err());

        let cross = zoo::five_dot_cross();
        for n in 0..=2 {
            assert!(matches!(
                homoclinic_search(&cross, 0, n, None, &cfg()).unwrap(),
                HomoclinicOutcome::NoneUpToScale { .. }
            ));
            let fast = homoclinic_count(&cross, 0, n, None, CountMethod::Auto, &cfg()).unwrap();
            let slow = homoclinic_count(&cross, 0, n, None, CountMethod::Search, &cfg()).unwrap();
            assert_eq!(fast, slow);
            assert_eq!(fast, BigUint::one());
        }
    }

    #[test]
    fn scan_margin_must_contain_identity() {
        let gm = zoo::golden_mean();
        let r = strong_tmp_scan(
            &gm,
            &interval(1, 1),
            &[interval(0, 0)],
            1,
            AdmissibilityLevel::ExactZ,
            MarginSide::Right,
            &cfg(),
        );
        assert!(r.is_err());
        let rep = strong_tmp_scan(
            &gm,
            &interval(-1, 1),
            &[interval(0, 0), interval(0, 3)],
            1,
            AdmissibilityLevel::ExactZ,
            MarginSide::Right,
            &cfg(),
        )
        .unwrap();
        assert!(rep.all_hold());
    }
}
