//! Entropy estimates from pattern counts, the transfer-matrix value for
//! `Z`, independence density and cyclic microstate counts.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::admissible::{count_admissible, WindowOracle};
use crate::automaton::{forbidden_words, ZAutomaton};
use crate::budget::{Meter, SearchConfig};
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement, GroupSpec};
use crate::pattern::{Pattern, Symbol};
use crate::spec::{AdmissibilityLevel, SubshiftSpec};

/// Natural logarithm of a big integer; `-inf` for zero.
pub fn ln_big(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesEntry {
    pub window: FiniteSubset,
    pub size: usize,
    pub count: BigUint,
    /// `ln(count) / size`
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropySeries {
    pub level: AdmissibilityLevel,
    /// True when the windows are boxes of an amenable group, so the rates
    /// approximate topological entropy. Otherwise they are plain window
    /// rates.
    pub folner: bool,
    pub entries: Vec<SeriesEntry>,
}

impl EntropySeries {
    pub fn last_rate(&self) -> Option<f64> {
        self.entries.last().map(|e| e.rate)
    }
}

/// The boxes `[0, n)^d` for each `n`.
pub fn box_windows(group: &GroupSpec, sizes: &[u32]) -> Result<Vec<FiniteSubset>> {
    sizes.iter().map(|&n| group.folner_window(n)).collect()
}

pub fn entropy_series(
    spec: &SubshiftSpec,
    windows: &[FiniteSubset],
    level: AdmissibilityLevel,
    cfg: &SearchConfig,
) -> Result<EntropySeries> {
    if windows.is_empty() {
        return Err(Error::usage("at least one window is required"));
    }
    let counts: Vec<BigUint> = windows
        .par_iter()
        .map(|w| count_admissible(spec, w, level, cfg))
        .collect::<Result<_>>()?;
    let group = spec.group();
    let folner = windows.iter().all(|w| side_of_box(group, w).is_some());
    let entries = windows
        .iter()
        .zip(counts)
        .map(|(w, count)| SeriesEntry {
            window: w.clone(),
            size: w.len(),
            rate: ln_big(&count) / w.len() as f64,
            count,
        })
        .collect();
    Ok(EntropySeries {
        level,
        folner,
        entries,
    })
}

/// Side length when `w` is the box `[0, n)^d`.
fn side_of_box(group: &GroupSpec, w: &FiniteSubset) -> Option<usize> {
    let GroupSpec::Lattice { dim } = *group else {
        return None;
    };
    let n = (w.len() as f64).powf(1.0 / dim as f64).round() as u32;
    (group.folner_window(n).ok()? == *w).then_some(n as usize)
}

/// The least window rate among the candidates: an upper bound for the
/// infimum over all finite sets.
#[derive(Clone, Debug, PartialEq)]
pub struct NaiveBound {
    pub rate: f64,
    pub argmin: FiniteSubset,
    pub rates: Vec<f64>,
}

pub fn naive_entropy_upper(
    spec: &SubshiftSpec,
    candidates: &[FiniteSubset],
    level: AdmissibilityLevel,
    cfg: &SearchConfig,
) -> Result<NaiveBound> {
    let series = entropy_series(spec, candidates, level, cfg)?;
    let rates: Vec<f64> = series.entries.iter().map(|e| e.rate).collect();
    let (i, rate) = rates
        .iter()
        .copied()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |best, (i, r)| if r < best.1 { (i, r) } else { best },
        );
    Ok(NaiveBound {
        rate,
        argmin: candidates[i].clone(),
        rates,
    })
}

/// `ln ρ` for the block graph of a forbidden-pattern subshift of `Z`, with
/// blocks of length at least `memory`.
pub fn transfer_matrix_entropy(spec: &SubshiftSpec, memory: usize) -> Result<f64> {
    let aut = ZAutomaton::build(spec, memory)?;
    if aut.is_empty() {
        return Err(Error::EntropyUndefined);
    }
    let rho = aut.spectral_radius(1e-10).ok_or(Error::EntropyUndefined)?;
    Ok(rho.ln())
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceReport {
    pub cylinders: Vec<Pattern>,
    pub ambient: FiniteSubset,
    pub level: AdmissibilityLevel,
    /// Largest independence set found, in canonical order.
    pub best: FiniteSubset,
    pub density: f64,
    /// False when the budget ran out; `best` is then only a lower bound.
    pub complete: bool,
}

/// Tests subsets `J` of an ambient set: `J` is independent when for every
/// choice `φ: J → cylinders` the glued pattern `⋃_{s∈J} s·φ(s)` is
/// admissible.
struct IndependenceTester<'a> {
    spec: &'a SubshiftSpec,
    cylinders: &'a [Pattern],
    level: AdmissibilityLevel,
    exact: Option<ZAutomaton>,
}

impl<'a> IndependenceTester<'a> {
    fn new(
        spec: &'a SubshiftSpec,
        cylinders: &'a [Pattern],
        level: AdmissibilityLevel,
    ) -> Result<Self> {
        spec.check_level(level)?;
        if cylinders.is_empty() {
            return Err(Error::usage("at least one cylinder is required"));
        }
        let support = cylinders[0].support();
        if support.is_empty() || cylinders.iter().any(|c| c.support() != support) {
            return Err(Error::usage("cylinders must share one nonempty support"));
        }
        for (i, c) in cylinders.iter().enumerate() {
            support.check_group(spec.group())?;
            if cylinders[..i].contains(c) {
                return Err(Error::usage("cylinders must be pairwise distinct"));
            }
            if c.iter().any(|(_, s)| s as usize >= spec.alphabet().len()) {
                return Err(Error::usage("cylinder symbol out of range"));
            }
        }
        let exact = match level {
            AdmissibilityLevel::ExactZ => Some(ZAutomaton::build(spec, 1)?),
            _ => None,
        };
        Ok(Self {
            spec,
            cylinders,
            level,
            exact,
        })
    }

    fn placed(&self, set: &[GroupElement]) -> Result<Vec<Vec<Pattern>>> {
        set.iter()
            .map(|s| self.cylinders.iter().map(|c| c.translate(s)).collect())
            .collect()
    }

    /// Whether `set` is independent; charges the search to `meter`.
    fn independent(&self, set: &[GroupElement], meter: &mut Meter) -> Result<bool> {
        let placed = self.placed(set)?;
        let k = self.cylinders.len();
        let window: FiniteSubset = placed
            .iter()
            .flat_map(|ps| ps[0].support().to_vec())
            .collect();
        let oracle = match self.exact {
            Some(_) => None,
            None => Some(WindowOracle::new(self.spec, &window, self.level)?),
        };
        let total = (k as u128)
            .checked_pow(set.len() as u32)
            .unwrap_or(u128::MAX);
        let mut choice = vec![0usize; set.len()];
        for _ in 0..total {
            let mut glued = Pattern::new();
            let mut clash = false;
            for (ps, &c) in placed.iter().zip(&choice) {
                match glued.glue(&ps[c]) {
                    Ok(g) => glued = g,
                    Err(Error::Conflict(_)) => {
                        clash = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            let ok = !clash
                && match (&self.exact, &oracle) {
                    (Some(aut), _) => {
                        meter.charge(1, || "independence search".into())?;
                        aut.admits(&glued)?
                    }
                    (None, Some(o)) => {
                        let task = o.admits(&glued, meter.remaining());
                        meter.charge(task.nodes, || "independence search".into())?;
                        task.result?
                    }
                    (None, None) => unreachable!(),
                };
            if !ok {
                return Ok(false);
            }
            for slot in choice.iter_mut().rev() {
                *slot += 1;
                if *slot < k {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(true)
    }
}

/// Largest independence set inside `ambient`, by branch and bound over
/// subsets in canonical order. Only independent sets are extended, which
/// loses nothing since subsets of independent sets are independent.
pub fn independence_density(
    spec: &SubshiftSpec,
    cylinders: &[Pattern],
    ambient: &FiniteSubset,
    level: AdmissibilityLevel,
    cfg: &SearchConfig,
) -> Result<IndependenceReport> {
    ambient.check_group(spec.group())?;
    if ambient.is_empty() {
        return Err(Error::usage("ambient set must be nonempty"));
    }
    let tester = IndependenceTester::new(spec, cylinders, level)?;
    let elems = ambient.to_vec();
    let mut meter = Meter::new(cfg);
    let mut best: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let complete = match grow(&tester, &elems, 0, &mut current, &mut best, &mut meter) {
        Ok(()) => true,
        Err(e) if e.is_budget() => false,
        Err(e) => return Err(e),
    };
    Ok(report(cylinders, ambient, level, &elems, &best, complete))
}

fn report(
    cylinders: &[Pattern],
    ambient: &FiniteSubset,
    level: AdmissibilityLevel,
    elems: &[GroupElement],
    best: &[usize],
    complete: bool,
) -> IndependenceReport {
    IndependenceReport {
        cylinders: cylinders.to_vec(),
        ambient: ambient.clone(),
        level,
        best: best.iter().map(|&i| elems[i].clone()).collect(),
        density: best.len() as f64 / elems.len() as f64,
        complete,
    }
}

fn grow(
    tester: &IndependenceTester<'_>,
    elems: &[GroupElement],
    from: usize,
    current: &mut Vec<usize>,
    best: &mut Vec<usize>,
    meter: &mut Meter,
) -> Result<()> {
    if current.len() > best.len() {
        *best = current.clone();
    }
    for i in from..elems.len() {
        if current.len() + (elems.len() - i) <= best.len() {
            return Ok(());
        }
        current.push(i);
        let set: Vec<_> = current.iter().map(|&j| elems[j].clone()).collect();
        if tester.independent(&set, meter)? {
            grow(tester, elems, i + 1, current, best, meter)?;
        }
        current.pop();
    }
    Ok(())
}

/// Same answer as [`independence_density`], by testing every subset.
/// Meant for cross-checking on small ambient sets.
pub fn independence_density_exhaustive(
    spec: &SubshiftSpec,
    cylinders: &[Pattern],
    ambient: &FiniteSubset,
    level: AdmissibilityLevel,
    cfg: &SearchConfig,
) -> Result<IndependenceReport> {
    let tester = IndependenceTester::new(spec, cylinders, level)?;
    let elems = ambient.to_vec();
    if elems.len() > 20 {
        return Err(Error::usage(
            "exhaustive independence search is limited to 20 sites",
        ));
    }
    let mut meter = Meter::new(cfg);
    let mut best: Vec<usize> = Vec::new();
    for mask in 1u32..(1 << elems.len()) {
        let idx: Vec<usize> = (0..elems.len()).filter(|i| mask >> i & 1 == 1).collect();
        let set: Vec<_> = idx.iter().map(|&i| elems[i].clone()).collect();
        if idx.len() > best.len() && tester.independent(&set, &mut meter)? {
            best = idx;
        }
    }
    Ok(report(cylinders, ambient, level, &elems, &best, true))
}

/// Rechecks that `report.best` is independent for its cylinders.
pub fn verify_independence(
    spec: &SubshiftSpec,
    report: &IndependenceReport,
    cfg: &SearchConfig,
) -> Result<bool> {
    let tester = IndependenceTester::new(spec, &report.cylinders, report.level)?;
    if !report.best.is_subset(&report.ambient) {
        return Ok(false);
    }
    let mut meter = Meter::new(cfg);
    tester.independent(&report.best.to_vec(), &mut meter)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MicrostateCount {
    pub n: usize,
    pub beta: u64,
    pub count: BigUint,
}

impl MicrostateCount {
    pub fn rate(&self) -> f64 {
        ln_big(&self.count) / self.n as f64
    }
}

/// `⌊δ² n⌋`, the violation budget matching an average defect of `δ`.
pub fn violation_budget(delta: f64, n: usize) -> u64 {
    (delta * delta * n as f64).floor().max(0.0) as u64
}

/// Labelings of the `n`-cycle by the alphabet with at most `beta` positions
/// where a forbidden word starts (words read cyclically).
pub fn cyclic_microstate_count(
    spec: &SubshiftSpec,
    n: usize,
    beta: u64,
    cfg: &SearchConfig,
) -> Result<MicrostateCount> {
    if n == 0 {
        return Err(Error::usage("cycle length must be positive"));
    }
    let words = forbidden_words(spec)?;
    let k = spec.alphabet().len();
    let longest = words.iter().map(Vec::len).max().unwrap_or(1);
    let m = longest.saturating_sub(1).max(1);
    let cap = beta.min(n as u64) as usize;
    let count = if n <= m || (k as f64).powi(n as i32) <= 4096.0 {
        let total = (k as u64).pow(n as u32);
        charge_upfront(cfg, total.saturating_mul(n as u64))?;
        let mut count = BigUint::zero();
        let mut x = vec![0 as Symbol; n];
        for mut code in 0..total {
            for slot in x.iter_mut() {
                *slot = (code % k as u64) as Symbol;
                code /= k as u64;
            }
            let bad = (0..n)
                .filter(|&i| {
                    words
                        .iter()
                        .any(|w| (0..w.len()).all(|j| x[(i + j) % n] == w[j]))
                })
                .count();
            if bad <= cap {
                count += 1u32;
            }
        }
        count
    } else {
        cyclic_dp(&words, k, m, n, cap, cfg)?
    };
    Ok(MicrostateCount { n, beta, count })
}

fn charge_upfront(cfg: &SearchConfig, work: u64) -> Result<()> {
    let mut meter = Meter::new(cfg);
    meter.charge(work, || "estimated work exceeds the budget".into())
}

/// Fixes the first `m` symbols, walks the remaining positions tracking the
/// last `m` symbols and the number of violations so far, then closes the
/// cycle.
fn cyclic_dp(
    words: &[Vec<Symbol>],
    k: usize,
    m: usize,
    n: usize,
    cap: usize,
    cfg: &SearchConfig,
) -> Result<BigUint> {
    let states = k
        .checked_pow(m as u32)
        .filter(|&s| s <= 1 << 16)
        .ok_or(Error::TooLarge {
            size: (k as u128).saturating_pow(m as u32),
            cap: 1 << 16,
        })?;
    let per_start = (states as u64) * (k as u64) * (n as u64) * (cap as u64 + 1);
    charge_upfront(cfg, per_start.saturating_mul(states as u64))?;
    let decode = |mut code: usize| -> Vec<Symbol> {
        let mut w = vec![0; m];
        for slot in w.iter_mut().rev() {
            *slot = (code % k) as Symbol;
            code /= k;
        }
        w
    };
    let starts_bad = |window: &[Symbol]| words.iter().any(|w| window.starts_with(w));
    // Window of length m + 1 starting at a position of the cycle.
    let mut step_bad = vec![false; states * k];
    for s in 0..states {
        let mut w = decode(s);
        for a in 0..k {
            w.push(a as Symbol);
            step_bad[s * k + a] = starts_bad(&w);
            w.pop();
        }
    }
    let counts: Vec<BigUint> = (0..states)
        .into_par_iter()
        .map(|start| {
            let first = decode(start);
            let mut layer = vec![BigUint::zero(); states * (cap + 1)];
            layer[start * (cap + 1)] = BigUint::from(1u32);
            for _ in m..n {
                let mut next = vec![BigUint::zero(); states * (cap + 1)];
                for s in 0..states {
                    for v in 0..=cap {
                        let c = &layer[s * (cap + 1) + v];
                        if c.is_zero() {
                            continue;
                        }
                        for a in 0..k {
                            let nv = v + usize::from(step_bad[s * k + a]);
                            if nv > cap {
                                continue;
                            }
                            let t = (s * k + a) % states;
                            next[t * (cap + 1) + nv] += c;
                        }
                    }
                }
                layer = next;
            }
            let mut total = BigUint::zero();
            for s in 0..states {
                let mut tail = decode(s);
                tail.extend_from_slice(&first);
                let closing = (0..m).filter(|&t| starts_bad(&tail[t..t + m + 1])).count();
                for v in 0..=cap {
                    if v + closing <= cap {
                        total += &layer[s * (cap + 1) + v];
                    }
                }
            }
            total
        })
        .collect();
    Ok(counts.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Alphabet;
    use crate::spec::Rule;
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
    fn ln_of_big_values() {
        let n = BigUint::from(1u32) << 3000u32;
        assert!((ln_big(&n) - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(ln_big(&BigUint::from(1u32)), 0.0);
    }

    #[test]
    fn golden_mean_entropy() {
        let gm = zoo::golden_mean();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let h = transfer_matrix_entropy(&gm, 1).unwrap();
        assert!((h - phi.ln()).abs() < 1e-9);
        let z = GroupSpec::lattice(1).unwrap();
        let s = entropy_series(
            &gm,
            &box_windows(&z, &[4, 8, 12]).unwrap(),
            AdmissibilityLevel::ExactZ,
            &cfg(),
        )
        .unwrap();
        assert!(s.folner);
        assert_eq!(s.entries[0].count, BigUint::from(8u32));
        assert!((s.last_rate().unwrap() - phi.ln()).abs() < 0.05);
    }

    #[test]
    fn degenerate_transfer_matrices() {
        let line = GroupSpec::lattice(1).unwrap();
        let full = zoo::full_shift(line, 2).unwrap();
        assert!((transfer_matrix_entropy(&full, 1).unwrap() - 2f64.ln()).abs() < 1e-12);
        let words = |ws: &[[Symbol; 2]]| {
            ws.iter()
                .map(|w| Pattern::from_pairs([(z(0), w[0]), (z(1), w[1])]).unwrap())
                .collect::<Vec<_>>()
        };
        let alt = SubshiftSpec::new(
            line,
            Alphabet::numbered(2).unwrap(),
            Rule::Forbidden(words(&[[0, 0], [1, 1]])),
        )
        .unwrap();
        assert!(transfer_matrix_entropy(&alt, 1).unwrap().abs() < 1e-9);
        let empty = SubshiftSpec::new(
            line,
            Alphabet::numbered(2).unwrap(),
            Rule::Forbidden(words(&[[0, 0], [1, 1], [0, 1], [1, 0]])),
        )
        .unwrap();
        assert!(matches!(
            transfer_matrix_entropy(&empty, 1),
            Err(Error::EntropyUndefined)
        ));
    }

    #[test]
    fn microstates() {
        let gm = zoo::golden_mean();
        let c = |n, b| cyclic_microstate_count(&gm, n, b, &cfg()).unwrap().count;
        assert_eq!(c(4, 0), BigUint::from(7u32));
        assert_eq!(c(3, 3), BigUint::from(8u32));
        // Lucas numbers: 2207 = L_16.
        assert_eq!(c(16, 0), BigUint::from(2207u32));
        assert_eq!(c(1, 0), BigUint::from(1u32));
        assert_eq!(c(20, 0), BigUint::from(15127u32));
        assert_eq!(violation_budget(0.5, 16), 4);
    }

    #[test]
    fn independence() {
        let gm = zoo::golden_mean();
        let cyl = [
            Pattern::from_pairs([(z(0), 0)]).unwrap(),
            Pattern::from_pairs([(z(0), 1)]).unwrap(),
        ];
        for level in [
            AdmissibilityLevel::ExactZ,
            AdmissibilityLevel::LocalMargin(1),
        ] {
            let rep = independence_density(&gm, &cyl, &interval(0, 5), level, &cfg()).unwrap();
            assert_eq!(rep.best.len(), 3);
            assert!(rep.complete);
            assert!(verify_independence(&gm, &rep, &cfg()).unwrap());
            let ex =
                independence_density_exhaustive(&gm, &cyl, &interval(0, 5), level, &cfg()).unwrap();
            assert_eq!(ex.best.len(), 3);
        }
        let sunny = zoo::sunny_side_up(GroupSpec::lattice(1).unwrap());
        let rep = independence_density(
            &sunny,
            &cyl,
            &interval(0, 4),
            AdmissibilityLevel::LocalMargin(0),
            &cfg(),
        )
        .unwrap();
        assert_eq!(rep.best.len(), 1);
    }
}
