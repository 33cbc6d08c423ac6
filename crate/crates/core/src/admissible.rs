//! Locally and globally admissible patterns: membership, extension,
//! enumeration and counting at a chosen [`AdmissibilityLevel`].

use num_bigint::BigUint;
use num_traits::One;

use crate::automaton::ZAutomaton;
use crate::budget::{map_all, Meter, SearchConfig, Task};
use crate::csp::{compile, pattern_violates, Clause, Csp, SiteIndex, Solver};
use crate::error::{Error, Result};
use crate::gf2::{self, Gf2Matrix};
use crate::group::FiniteSubset;
use crate::pattern::{Pattern, Symbol};
use crate::spec::{AdmissibilityLevel, Rule, SubshiftSpec};

/// How [`count_admissible_with`] computes its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    /// GF(2) rank for linear rules, the block automaton for `ExactZ`, and
    /// depth-first search otherwise.
    Auto,
    /// Depth-first search with forward checking, whatever the rule.
    Search,
}

/// No constraint whose translated support lies inside `support(p)` is
/// violated by `p`.
pub fn is_locally_admissible(spec: &SubshiftSpec, p: &Pattern) -> Result<bool> {
    Ok(!pattern_violates(spec, p)?)
}

/// Admissibility of patterns supported in one fixed window.
pub(crate) struct WindowOracle {
    window: FiniteSubset,
    kind: OracleKind,
}

enum OracleKind {
    Margin {
        sites: SiteIndex,
        csp: Csp,
        vars: Vec<u32>,
    },
    Exact(ZAutomaton),
}

impl WindowOracle {
    pub fn new(
        spec: &SubshiftSpec,
        window: &FiniteSubset,
        level: AdmissibilityLevel,
    ) -> Result<Self> {
        spec.check_level(level)?;
        window.check_group(spec.group())?;
        let kind = match level {
            AdmissibilityLevel::ExactZ => OracleKind::Exact(ZAutomaton::build(spec, 1)?),
            AdmissibilityLevel::LocalMargin(r) => {
                let grown = window.thicken(spec.group(), r)?;
                let sites = SiteIndex::new(&grown);
                let csp = Csp::for_window(spec, &sites)?;
                let vars = sites.indices_of(window);
                OracleKind::Margin { sites, csp, vars }
            }
        };
        Ok(Self {
            window: window.clone(),
            kind,
        })
    }

    fn fix(&self, solver: &mut Solver<'_>, sites: &SiteIndex, p: &Pattern) -> Result<bool> {
        for (g, s) in p.iter() {
            let v = sites
                .get(g)
                .filter(|_| self.window.contains(g))
                .ok_or_else(|| Error::usage(format!("site {g} lies outside the target window")))?;
            if !solver.assign(v, s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `p` (supported inside the window) extends to a pattern on
    /// the window that is admissible at this level.
    pub fn admits(&self, p: &Pattern, limit: u64) -> Task<bool> {
        match &self.kind {
            OracleKind::Exact(aut) => Task {
                result: aut.admits(p),
                nodes: 1,
            },
            OracleKind::Margin { sites, csp, .. } => {
                let mut solver = Solver::new(csp, limit);
                let result = (|| Ok(self.fix(&mut solver, sites, p)? && solver.feasible()?))();
                Task {
                    result,
                    nodes: solver.nodes().max(1),
                }
            }
        }
    }

    /// Canonically least admissible pattern on the window restricting to `p`.
    pub fn least_extension(&self, p: &Pattern, limit: u64) -> Task<Option<Pattern>> {
        match &self.kind {
            OracleKind::Margin { sites, csp, vars } => {
                let mut solver = Solver::new(csp, limit);
                let result = (|| {
                    if !self.fix(&mut solver, sites, p)? {
                        return Ok(None);
                    }
                    Ok(solver
                        .least(vars)?
                        .map(|vals| Pattern::from_values(&self.window, &vals)))
                })();
                Task {
                    result,
                    nodes: solver.nodes().max(1),
                }
            }
            OracleKind::Exact(aut) => {
                let mut nodes = 0u64;
                let result = (|| {
                    nodes += 1;
                    if !aut.admits(p)? {
                        return Ok(None);
                    }
                    let mut cur = p.clone();
                    for g in &self.window {
                        if cur.get(g).is_some() {
                            continue;
                        }
                        let mut placed = false;
                        for s in 0..aut.nsym() as Symbol {
                            let mut next = cur.clone();
                            next.insert(g.clone(), s);
                            nodes += 1;
                            if aut.admits(&next)? {
                                cur = next;
                                placed = true;
                                break;
                            }
                        }
                        debug_assert!(placed);
                    }
                    Ok(Some(cur))
                })();
                Task { result, nodes }
            }
        }
    }
}

pub fn is_admissible(
    spec: &SubshiftSpec,
    p: &Pattern,
    level: AdmissibilityLevel,
    cfg: &SearchConfig,
) -> Result<bool> {
    is_extendable(spec, p, &p.support(), level, cfg)
}

/// Whether some pattern on `target`, admissible at `level`, restricts to `p`.
pub fn is_extendable(
    spec: &SubshiftSpec,
    p: &Pattern,
    target: &FiniteSubset,
    level: AdmissibilityLevel,
    cfg: &SearchConfig,
) -> Result<bool> {
    if !p.support().is_subset(target) {
        return Err(Error::usage("pattern support must lie inside the target"));
    }
    let oracle = WindowOracle::new(spec, target, level)?;
    let mut meter = Meter::new(cfg);
    let task = oracle.admits(p, meter.remaining());
    meter.charge(task.nodes, || "extension search".into())?;
    task.result
}

/// The canonically least extension of `p` to `target`, if any.
pub fn extend_witness(
    spec: &SubshiftSpec,
    p: &Pattern,
    target: &FiniteSubset,
    level: AdmissibilityLevel,
    cfg: &SearchConfig,
) -> Result<Option<Pattern>> {
    if !p.support().is_subset(target) {
        return Err(Error::usage("pattern support must lie inside the target"));
    }
    let oracle = WindowOracle::new(spec, target, level)?;
    let mut meter = Meter::new(cfg);
    let task = oracle.least_extension(p, meter.remaining());
    meter.charge(task.nodes, || "extension search".into())?;
    task.result
}

/// Outcome of [`all_extend`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionReport {
    /// Admissible patterns on the window that agree with the fixed values.
    pub checked: u64,
    /// The canonically least such pattern with no extension to the target.
    pub stuck: Option<Pattern>,
}

/// Checks that every pattern on `window`, admissible at `level` and agreeing
/// with `fixed`, extends to an admissible pattern on `target`.
pub fn all_extend(
    spec: &SubshiftSpec,
    fixed: &Pattern,
    window: &FiniteSubset,
    target: &FiniteSubset,
    level: AdmissibilityLevel,
    cfg: &SearchConfig,
) -> Result<ExtensionReport> {
    spec.check_level(level)?;
    if !fixed.support().is_subset(window) || !window.is_subset(target) {
        return Err(Error::usage(
            "need fixed support inside window inside target",
        ));
    }
    let oracle = WindowOracle::new(spec, target, level)?;
    let mut meter = Meter::new(cfg);
    let mut report = ExtensionReport {
        checked: 0,
        stuck: None,
    };
    let mut test = |p: Pattern, meter: &mut Meter| -> Result<bool> {
        report.checked += 1;
        let task = oracle.admits(&p, meter.remaining());
        meter.charge(task.nodes, || {
            format!("{} patterns checked", report.checked)
        })?;
        if !task.result? {
            report.stuck = Some(p);
            return Ok(false);
        }
        Ok(true)
    };
    match level {
        AdmissibilityLevel::ExactZ => {
            for p in enumerate_admissible(spec, window, level, cfg)? {
                if fixed.agrees_on(&p, &fixed.support()) && !test(p, &mut meter)? {
                    break;
                }
            }
        }
        AdmissibilityLevel::LocalMargin(r) => {
            let grown = window.thicken(spec.group(), r)?;
            let sites = SiteIndex::new(&grown);
            let csp = Csp::for_window(spec, &sites)?;
            let order = sites.indices_of(window);
            let mut solver = Solver::new(&csp, meter.remaining());
            let mut alive = true;
            for (g, s) in fixed.iter() {
                let v = sites.get(g).expect("fixed site lies in the window");
                alive = alive && solver.assign(v, s)?;
            }
            if alive {
                let mut failure = None;
                solver.project(&order, &mut |vals| match test(
                    Pattern::from_values(window, vals),
                    &mut meter,
                ) {
                    Ok(go) => Ok(go),
                    Err(e) => {
                        failure = Some(e);
                        Ok(false)
                    }
                })?;
                if let Some(e) = failure {
                    return Err(e);
                }
            }
            meter.charge(solver.nodes(), || "window enumeration".into())?;
        }
    }
    Ok(report)
}

pub fn count_admissible(
    spec: &SubshiftSpec,
    f: &FiniteSubset,
    level: AdmissibilityLevel,
    cfg: &SearchConfig,
) -> Result<BigUint> {
    count_admissible_with(spec, f, level, CountMethod::Auto, cfg)
}

pub fn count_admissible_with(
    spec: &SubshiftSpec,
    f: &FiniteSubset,
    level: AdmissibilityLevel,
    method: CountMethod,
    cfg: &SearchConfig,
) -> Result<BigUint> {
    spec.check_level(level)?;
    f.check_group(spec.group())?;
    if f.is_empty() {
        return Err(Error::usage("window must be nonempty"));
    }
    match (level, method, spec.rule()) {
        (AdmissibilityLevel::ExactZ, _, _) => ZAutomaton::build(spec, 1)?.count(f),
        (AdmissibilityLevel::LocalMargin(r), CountMethod::Auto, Rule::LinearGf2(_)) => {
            let dim = linear_projection_dim(spec, f, r)?;
            Ok(BigUint::one() << dim)
        }
        (AdmissibilityLevel::LocalMargin(r), _, _) => {
            let mut total = BigUint::default();
            search_margin(spec, f, r, cfg, false, &mut |n, _| {
                total += n;
            })?;
            Ok(total)
        }
    }
}

/// Every pattern of the level's admissible set on `F`, in canonical order.
pub fn enumerate_admissible(
    spec: &SubshiftSpec,
    f: &FiniteSubset,
    level: AdmissibilityLevel,
    cfg: &SearchConfig,
) -> Result<Vec<Pattern>> {
    spec.check_level(level)?;
    f.check_group(spec.group())?;
    match level {
        AdmissibilityLevel::ExactZ => ZAutomaton::build(spec, 1)?.enumerate(f, cfg.budget),
        AdmissibilityLevel::LocalMargin(r) => {
            let mut out = Vec::new();
            search_margin(spec, f, r, cfg, true, &mut |_, pats| {
                out.extend(pats);
            })?;
            Ok(out)
        }
    }
}

/// Dimension of the projection to `F` of the GF(2) solution space on
/// `F·B_r`.
fn linear_projection_dim(spec: &SubshiftSpec, f: &FiniteSubset, r: u32) -> Result<usize> {
    let grown = f.thicken(spec.group(), r)?;
    let sites = SiteIndex::new(&grown);
    let mut m = Gf2Matrix::new(sites.len());
    for c in compile(spec, &sites)? {
        if let Clause::Parity { vars } = c {
            m.push_ones(vars.iter().map(|&v| v as usize));
        }
    }
    let cols: Vec<usize> = sites
        .indices_of(f)
        .into_iter()
        .map(|v| v as usize)
        .collect();
    let projected = m.kernel().iter().map(|v| gf2::project(v, &cols)).collect();
    Ok(gf2::span_dim(projected, cols.len()))
}

/// Splits the depth-first search over `F` into independent prefix tasks and
/// reports each task's count (and patterns, when `collect`) in order.
fn search_margin(
    spec: &SubshiftSpec,
    f: &FiniteSubset,
    r: u32,
    cfg: &SearchConfig,
    collect: bool,
    sink: &mut dyn FnMut(u64, Vec<Pattern>),
) -> Result<()> {
    let grown = f.thicken(spec.group(), r)?;
    let sites = SiteIndex::new(&grown);
    let csp = Csp::for_window(spec, &sites)?;
    let order = sites.indices_of(f);
    let nsym = spec.alphabet().len();
    let mut depth = 0;
    let mut ntasks = 1usize;
    while depth < order.len() && ntasks < 32 {
        depth += 1;
        ntasks *= nsym;
    }
    let prefixes: Vec<Vec<Symbol>> = (0..ntasks)
        .map(|mut code| {
            let mut p = vec![0; depth];
            for slot in p.iter_mut().rev() {
                *slot = (code % nsym) as Symbol;
                code /= nsym;
            }
            p
        })
        .collect();
    let mut meter = Meter::new(cfg);
    let results = map_all(&prefixes, &mut meter, |prefix, limit| {
        let mut solver = Solver::new(&csp, limit);
        let result = (|| {
            for (&v, &s) in order.iter().zip(prefix) {
                if !solver.assign(v, s)? {
                    return Ok((0u64, Vec::new()));
                }
            }
            let mut count = 0u64;
            let mut pats = Vec::new();
            solver.project(&order, &mut |vals| {
                count += 1;
                if collect {
                    pats.push(Pattern::from_values(f, vals));
                }
                Ok(true)
            })?;
            Ok((count, pats))
        })();
        Task {
            result,
            nodes: solver.nodes(),
        }
    })?;
    for (n, pats) in results {
        sink(n, pats);
    }
    Ok(())
}

/// Counts `|L^{loc,r}_F|` for `r = 0..=r_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationReport {
    pub window: FiniteSubset,
    pub counts: Vec<BigUint>,
    /// Smallest `r < r_max` from which every count is equal.
    pub stable_from: Option<u32>,
}

pub fn local_equals_global_check(
    spec: &SubshiftSpec,
    f: &FiniteSubset,
    r_max: u32,
    cfg: &SearchConfig,
) -> Result<StabilizationReport> {
    let counts = (0..=r_max)
        .map(|r| count_admissible(spec, f, AdmissibilityLevel::LocalMargin(r), cfg))
        .collect::<Result<Vec<_>>>()?;
    let last = counts.last().unwrap();
    let start = counts.iter().rposition(|c| c != last).map_or(0, |i| i + 1);
    let stable_from = (start < r_max as usize).then_some(start as u32);
    Ok(StabilizationReport {
        window: f.clone(),
        counts,
        stable_from,
    })
}
