//! Constructors for the standard example subshifts, and the catalogue of
//! named entries with the behaviour each one is expected to show.

use num_bigint::BigUint;

use crate::admissible::{all_extend, count_admissible, local_equals_global_check};
use crate::budget::SearchConfig;
use crate::entropy::{
    cyclic_microstate_count, entropy_series, independence_density, naive_entropy_upper,
    transfer_matrix_entropy,
};
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement, GroupSpec};
use crate::pattern::{Alphabet, Pattern, Symbol};
use crate::spec::{AdmissibilityLevel, Predicate, Rule, SubshiftSpec};
use crate::tmp::{
    check_memory_set, find_interchangeable_pair, homoclinic_search, strong_tmp_scan,
    HomoclinicOutcome, MarginSide, PairOutcome, SpliceProblem,
};

pub fn full_shift(group: GroupSpec, k: usize) -> Result<SubshiftSpec> {
    Ok(
        SubshiftSpec::new(group, Alphabet::numbered(k)?, Rule::Forbidden(Vec::new()))?
            .with_metadata("name", format!("full-{k}-shift")),
    )
}

/// Forbids a 1 at `e` together with a 1 at any `s ∈ neighbours`.
pub fn hard_square(group: GroupSpec, neighbours: &FiniteSubset) -> Result<SubshiftSpec> {
    let e = group.identity();
    if neighbours.contains(&e) {
        return Err(Error::usage(
            "hard-square neighbourhood must not contain the identity",
        ));
    }
    neighbours.check_group(&group)?;
    let patterns = neighbours
        .iter()
        .map(|s| Pattern::from_pairs([(e.clone(), 1), (s.clone(), 1)]))
        .collect::<Result<Vec<_>>>()?;
    Ok(
        SubshiftSpec::new(group, Alphabet::numbered(2)?, Rule::Forbidden(patterns))?
            .with_metadata("name", "hard-square"),
    )
}

/// Hard square on `Z` with neighbourhood `{1}`: no two adjacent 1s.
pub fn golden_mean() -> SubshiftSpec {
    let z = GroupSpec::Lattice { dim: 1 };
    hard_square(z, &FiniteSubset::singleton(GroupElement::Lattice(vec![1])))
        .expect("valid constant spec")
        .with_metadata("name", "golden-mean")
}

/// Configurations with at most one 1.
pub fn sunny_side_up(group: GroupSpec) -> SubshiftSpec {
    SubshiftSpec::new(
        group,
        Alphabet::numbered(2).expect("two symbols"),
        Rule::Predicate(Predicate::AtMostOne { symbol: 1 }),
    )
    .expect("valid constant spec")
    .with_metadata("name", "sunny-side-up")
}

/// Binary configurations on `F_2` whose sum over every `g·B_1` is even.
pub fn five_dot_cross() -> SubshiftSpec {
    let f2 = GroupSpec::Free { rank: 2 };
    let b1 = f2.ball(1).expect("small ball");
    SubshiftSpec::new(f2, Alphabet::gf2(), Rule::LinearGf2(vec![b1]))
        .expect("valid constant spec")
        .with_metadata("name", "five-dot-cross")
}

/// Perfect matchings of the Cayley tree of `F_2`, each site naming the
/// generator along which it is matched.
pub fn perfect_matchings() -> SubshiftSpec {
    SubshiftSpec::new(
        GroupSpec::Free { rank: 2 },
        Alphabet::new(["a", "A", "b", "B"]).expect("distinct names"),
        Rule::Predicate(Predicate::PerfectMatching),
    )
    .expect("valid constant spec")
    .with_metadata("name", "perfect-matchings")
}

/// `x(g) + x(g+e_1) + x(g+e_2) = 0` over GF(2) on `Z^2`.
pub fn ledrappier() -> SubshiftSpec {
    let support: FiniteSubset = [[0, 0], [1, 0], [0, 1]]
        .into_iter()
        .map(|v| GroupElement::Lattice(v.to_vec()))
        .collect();
    SubshiftSpec::new(
        GroupSpec::Lattice { dim: 2 },
        Alphabet::gf2(),
        Rule::LinearGf2(vec![support]),
    )
    .expect("valid constant spec")
    .with_metadata("name", "ledrappier")
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Follows at once from the definitions.
    Immediate,
    /// Computed independently (closed form, brute force or linear algebra).
    Computed,
    /// A published theorem about the system.
    Theorem,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expectation {
    Count {
        window: FiniteSubset,
        level: AdmissibilityLevel,
        count: BigUint,
    },
    /// Transfer-matrix entropy equals `value` within `tol`.
    Entropy {
        value: f64,
        tol: f64,
    },
    /// The window rate is at most `bound`.
    RateAtMost {
        window: FiniteSubset,
        level: AdmissibilityLevel,
        bound: f64,
    },
    NaiveUpper {
        candidates: Vec<FiniteSubset>,
        level: AdmissibilityLevel,
        value: f64,
        tol: f64,
    },
    LocalEqualsGlobal {
        window: FiniteSubset,
        r_max: u32,
    },
    /// Every admissible pattern on `window` agreeing with `fixed` extends to `target`.
    AllExtend {
        fixed: Pattern,
        window: FiniteSubset,
        target: FiniteSubset,
        level: AdmissibilityLevel,
    },
    MemorySetFails {
        problem: SpliceProblem,
    },
    MemorySetHolds {
        problem: SpliceProblem,
    },
    ScanHolds {
        margin: FiniteSubset,
        supports: Vec<FiniteSubset>,
        growth: u32,
        level: AdmissibilityLevel,
    },
    Pair {
        inner: FiniteSubset,
        window: FiniteSubset,
        level: AdmissibilityLevel,
        exists: bool,
    },
    Homoclinic {
        background: Symbol,
        radius: u32,
        exists: bool,
    },
    Microstates {
        n: usize,
        beta: u64,
        count: BigUint,
    },
    IndependenceSize {
        cylinders: Vec<Pattern>,
        ambient: FiniteSubset,
        level: AdmissibilityLevel,
        size: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub expectation: Expectation,
    pub source: Source,
    pub note: &'static str,
    /// Node budget the check needs, when larger than the default.
    pub min_budget: Option<u64>,
}

impl Check {
    /// Runs the expectation with at least the check's own budget.
    pub fn run(&self, spec: &SubshiftSpec, cfg: &SearchConfig) -> Result<Outcome> {
        let budget = cfg.budget.max(self.min_budget.unwrap_or(0));
        self.expectation
            .run(spec, &SearchConfig::with_budget(budget))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZooEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub spec: SubshiftSpec,
    pub checks: Vec<Check>,
}

/// Result of running one [`Expectation`].
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Expectation {
    pub fn run(&self, spec: &SubshiftSpec, cfg: &SearchConfig) -> Result<Outcome> {
        let out = |passed: bool, detail: String| Ok(Outcome { passed, detail });
        match self {
            Expectation::Count {
                window,
                level,
                count,
            } => {
                let got = count_admissible(spec, window, *level, cfg)?;
                out(&got == count, format!("count {got}, expected {count}"))
            }
            Expectation::Entropy { value, tol } => {
                let h = transfer_matrix_entropy(spec, 1)?;
                out(
                    (h - value).abs() <= *tol,
                    format!("entropy {h:.12}, expected {value:.12} ± {tol:e}"),
                )
            }
            Expectation::RateAtMost {
                window,
                level,
                bound,
            } => {
                let s = entropy_series(spec, std::slice::from_ref(window), *level, cfg)?;
                let r = s.entries[0].rate;
                out(r <= *bound, format!("rate {r:.6}, bound {bound:.6}"))
            }
            Expectation::NaiveUpper {
                candidates,
                level,
                value,
                tol,
            } => {
                let b = naive_entropy_upper(spec, candidates, *level, cfg)?;
                out(
                    (b.rate - value).abs() <= *tol,
                    format!("upper bound {:.9}, expected {value:.9}", b.rate),
                )
            }
            Expectation::LocalEqualsGlobal { window, r_max } => {
                let rep = local_equals_global_check(spec, window, *r_max, cfg)?;
                let counts: Vec<String> = rep.counts.iter().map(|c| c.to_string()).collect();
                out(
                    rep.stable_from == Some(0),
                    format!("counts {}", counts.join(", ")),
                )
            }
            Expectation::AllExtend {
                fixed,
                window,
                target,
                level,
            } => {
                let rep = all_extend(spec, fixed, window, target, *level, cfg)?;
                match rep.stuck {
                    None => out(rep.checked > 0, format!("{} patterns extend", rep.checked)),
                    Some(p) => out(
                        false,
                        format!(
                            "{} does not extend",
                            crate::format::format_pattern(spec, &p)
                        ),
                    ),
                }
            }
            Expectation::MemorySetFails { problem } => {
                let v = check_memory_set(spec, problem, cfg)?;
                let ok = v
                    .counterexample()
                    .is_some_and(|c| c.validate(spec, cfg).unwrap_or(false));
                out(ok, format!("verdict {}", verdict_name(&v)))
            }
            Expectation::MemorySetHolds { problem } => {
                let v = check_memory_set(spec, problem, cfg)?;
                out(v.holds(), format!("verdict {}", verdict_name(&v)))
            }
            Expectation::ScanHolds {
                margin,
                supports,
                growth,
                level,
            } => {
                let rep = strong_tmp_scan(
                    spec,
                    margin,
                    supports,
                    *growth,
                    *level,
                    MarginSide::Right,
                    cfg,
                )?;
                out(
                    rep.all_hold(),
                    format!("{} supports scanned", rep.entries.len()),
                )
            }
            Expectation::Pair {
                inner,
                window,
                level,
                exists,
            } => {
                let found = matches!(
                    find_interchangeable_pair(spec, inner, window, *level, cfg)?,
                    PairOutcome::Witness(_)
                );
                out(found == *exists, format!("pair found: {found}"))
            }
            Expectation::Homoclinic {
                background,
                radius,
                exists,
            } => {
                let found = matches!(
                    homoclinic_search(spec, *background, *radius, None, cfg)?,
                    HomoclinicOutcome::Witness(_)
                );
                out(
                    found == *exists,
                    format!("homoclinic witness at radius {radius}: {found}"),
                )
            }
            Expectation::Microstates { n, beta, count } => {
                let got = cyclic_microstate_count(spec, *n, *beta, cfg)?.count;
                out(
                    &got == count,
                    format!("microstates {got}, expected {count}"),
                )
            }
            Expectation::IndependenceSize {
                cylinders,
                ambient,
                level,
                size,
            } => {
                let rep = independence_density(spec, cylinders, ambient, *level, cfg)?;
                out(
                    rep.complete && rep.best.len() == *size,
                    format!("best set {}", rep.best),
                )
            }
        }
    }
}

fn verdict_name(v: &crate::tmp::Verdict) -> &'static str {
    match v {
        crate::tmp::Verdict::Holds { .. } => "holds",
        crate::tmp::Verdict::Counterexample(_) => "counterexample",
        crate::tmp::Verdict::Inconclusive { .. } => "inconclusive",
    }
}

fn z(i: i64) -> GroupElement {
    GroupElement::Lattice(vec![i])
}

fn interval(a: i64, b: i64) -> FiniteSubset {
    (a..=b).map(z).collect()
}

fn check(expectation: Expectation, source: Source, note: &'static str) -> Check {
    Check {
        expectation,
        source,
        note,
        min_budget: None,
    }
}

fn binary_cylinders(group: &GroupSpec) -> Vec<Pattern> {
    let e = group.identity();
    vec![
        Pattern::from_pairs([(e.clone(), 0)]).expect("one site"),
        Pattern::from_pairs([(e, 1)]).expect("one site"),
    ]
}

/// Every catalogued system with its expected behaviour.
pub fn entries() -> Vec<ZooEntry> {
    use Expectation as E;
    use Source::*;
    let zl = GroupSpec::Lattice { dim: 1 };
    let z2 = GroupSpec::Lattice { dim: 2 };
    let f2 = GroupSpec::Free { rank: 2 };
    let ball = |g: &GroupSpec, n| g.ball(n).expect("small ball");
    let boxed = |g: &GroupSpec, n| g.folner_window(n).expect("lattice box");
    let exact = AdmissibilityLevel::ExactZ;
    let local = AdmissibilityLevel::LocalMargin;
    let big = |n: u64| BigUint::from(n);
    let mut out = Vec::new();

    for k in [2u64, 3] {
        let spec = full_shift(zl, k as usize).expect("k >= 1");
        out.push(ZooEntry {
            name: if k == 2 {
                "full-2-shift"
            } else {
                "full-3-shift"
            },
            summary: "all configurations over k symbols on Z",
            spec,
            checks: vec![
                check(
                    E::Count {
                        window: boxed(&zl, 10),
                        level: exact,
                        count: big(k.pow(10)),
                    },
                    Immediate,
                    "no constraints",
                ),
                check(
                    E::Entropy {
                        value: (k as f64).ln(),
                        tol: 1e-9,
                    },
                    Immediate,
                    "ln k",
                ),
                check(
                    E::NaiveUpper {
                        candidates: vec![ball(&zl, 1), boxed(&zl, 7)],
                        level: local(0),
                        value: (k as f64).ln(),
                        tol: 1e-12,
                    },
                    Immediate,
                    "every window rate is ln k",
                ),
                check(
                    E::ScanHolds {
                        margin: ball(&zl, 1),
                        supports: vec![interval(0, 0), interval(0, 2)],
                        growth: 1,
                        level: exact,
                    },
                    Immediate,
                    "splicing never fails without constraints",
                ),
                check(
                    E::IndependenceSize {
                        cylinders: binary_cylinders(&zl),
                        ambient: interval(0, 7),
                        level: exact,
                        size: 8,
                    },
                    Immediate,
                    "every set is independent",
                ),
            ],
        });
    }

    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    out.push(ZooEntry {
        name: "golden-mean",
        summary: "hard square on Z: no two adjacent 1s",
        spec: golden_mean(),
        checks: vec![
            check(
                E::Entropy {
                    value: phi.ln(),
                    tol: 1e-9,
                },
                Computed,
                "Perron root of [[1,1],[1,0]]",
            ),
            check(
                E::Count {
                    window: interval(0, 3),
                    level: exact,
                    count: big(8),
                },
                Computed,
                "Fibonacci count",
            ),
            check(
                E::Microstates {
                    n: 4,
                    beta: 0,
                    count: big(7),
                },
                Computed,
                "Lucas number L_4",
            ),
            check(
                E::Microstates {
                    n: 3,
                    beta: 3,
                    count: big(8),
                },
                Immediate,
                "budget covers every position",
            ),
            check(
                E::Homoclinic {
                    background: 0,
                    radius: 0,
                    exists: true,
                },
                Immediate,
                "a single 1",
            ),
            check(
                E::Pair {
                    inner: interval(0, 0),
                    window: interval(-2, 2),
                    level: exact,
                    exists: true,
                },
                Immediate,
                "flip a 1 over zeros",
            ),
            check(
                E::MemorySetHolds {
                    problem: SpliceProblem::new(
                        interval(0, 3),
                        interval(-1, 4),
                        interval(-3, 6),
                        exact,
                    )
                    .expect("nested"),
                },
                Computed,
                "constraints reach one site",
            ),
            check(
                E::IndependenceSize {
                    cylinders: binary_cylinders(&zl),
                    ambient: interval(0, 9),
                    level: exact,
                    size: 5,
                },
                Computed,
                "every other site",
            ),
        ],
    });

    let ab: FiniteSubset = [GroupElement::Word(vec![0]), GroupElement::Word(vec![2])]
        .into_iter()
        .collect();
    out.push(ZooEntry {
        name: "hard-square-f2",
        summary: "hard square on F_2 with neighbours a and b",
        spec: hard_square(f2, &ab)
            .expect("identity excluded")
            .with_metadata("name", "hard-square-f2"),
        checks: vec![
            check(
                E::Pair {
                    inner: ball(&f2, 0),
                    window: ball(&f2, 1),
                    level: local(1),
                    exists: true,
                },
                Immediate,
                "flip a 1 over zeros",
            ),
            check(
                E::Homoclinic {
                    background: 0,
                    radius: 0,
                    exists: true,
                },
                Immediate,
                "a single 1",
            ),
        ],
    });

    out.push(ZooEntry {
        name: "sunny-side-up",
        summary: "at most one 1 on Z",
        spec: sunny_side_up(zl),
        checks: vec![
            check(
                E::MemorySetFails {
                    problem: SpliceProblem::new(
                        interval(0, 0),
                        boxed(&zl, 5),
                        boxed(&zl, 7),
                        local(0),
                    )
                    .expect("nested"),
                },
                Theorem,
                "no memory set exists",
            ),
            check(
                E::Count {
                    window: boxed(&zl, 9),
                    level: local(0),
                    count: big(10),
                },
                Computed,
                "|F| + 1",
            ),
            check(
                E::RateAtMost {
                    window: boxed(&zl, 32),
                    level: local(0),
                    bound: 33f64.ln() / 32.0,
                },
                Computed,
                "ln(n+1)/n",
            ),
            check(
                E::IndependenceSize {
                    cylinders: binary_cylinders(&zl),
                    ambient: interval(0, 5),
                    level: local(0),
                    size: 1,
                },
                Computed,
                "two 1s never coexist",
            ),
        ],
    });

    out.push(ZooEntry {
        name: "five-dot-cross",
        summary: "sum over every g·B_1 is even, on F_2",
        spec: five_dot_cross(),
        checks: vec![
            check(
                E::Count {
                    window: ball(&f2, 1),
                    level: local(0),
                    count: big(16),
                },
                Computed,
                "GF(2) kernel of one equation",
            ),
            check(
                E::LocalEqualsGlobal {
                    window: ball(&f2, 1),
                    r_max: 2,
                },
                Theorem,
                "local equals global on connected sets",
            ),
            check(
                E::LocalEqualsGlobal {
                    window: ball(&f2, 2),
                    r_max: 2,
                },
                Theorem,
                "local equals global on connected sets",
            ),
            check(
                E::Pair {
                    inner: ball(&f2, 1),
                    window: ball(&f2, 3),
                    level: local(0),
                    exists: false,
                },
                Theorem,
                "no off-diagonal asymptotic pairs",
            ),
        ]
        .into_iter()
        .chain((0..=3).map(|n| {
            check(
                E::Homoclinic {
                    background: 0,
                    radius: n,
                    exists: false,
                },
                Computed,
                "zero kernel",
            )
        }))
        .chain([check(
            E::NaiveUpper {
                candidates: vec![ball(&f2, 1)],
                level: local(0),
                value: 16f64.ln() / 5.0,
                tol: 1e-12,
            },
            Computed,
            "ln 16 / 5",
        )])
        .collect(),
    });

    let pm = perfect_matchings();
    let pm_start = Pattern::from_pairs([
        (GroupElement::Word(vec![]), 0),
        (GroupElement::Word(vec![0]), 1),
    ])
    .expect("distinct");
    out.push(ZooEntry {
        name: "perfect-matchings",
        summary: "perfect matchings of the Cayley tree of F_2",
        spec: pm,
        checks: vec![
            check(
                E::Count {
                    window: ball(&f2, 1),
                    level: local(0),
                    count: big(108),
                },
                Computed,
                "brute force over 4^5",
            ),
            check(
                E::Pair {
                    inner: ball(&f2, 1),
                    window: ball(&f2, 2),
                    level: local(0),
                    exists: false,
                },
                Theorem,
                "no off-diagonal asymptotic pairs",
            ),
            check(
                E::Pair {
                    inner: ball(&f2, 1),
                    window: ball(&f2, 3),
                    level: local(0),
                    exists: false,
                },
                Theorem,
                "no off-diagonal asymptotic pairs",
            ),
            Check {
                min_budget: Some(100_000_000),
                ..check(
                    E::AllExtend {
                        fixed: pm_start,
                        window: ball(&f2, 2),
                        target: ball(&f2, 3),
                        level: local(0),
                    },
                    Computed,
                    "e and a matched to each other",
                )
            },
        ],
    });

    let mut ledrappier_checks: Vec<Check> = (1..=5u32)
        .map(|n| {
            check(
                E::Count {
                    window: boxed(&z2, n),
                    level: local(0),
                    count: BigUint::from(1u32) << (2 * n - 1),
                },
                Computed,
                "2^(2n-1) by GF(2) rank",
            )
        })
        .collect();
    ledrappier_checks.extend((0..=6).map(|n| {
        check(
            E::Homoclinic {
                background: 0,
                radius: n,
                exists: false,
            },
            Computed,
            "zero kernel",
        )
    }));
    ledrappier_checks.push(check(
        E::RateAtMost {
            window: boxed(&z2, 16),
            level: local(0),
            bound: 0.09,
        },
        Computed,
        "31 ln 2 / 256",
    ));
    out.push(ZooEntry {
        name: "ledrappier",
        summary: "x(g) + x(g+e1) + x(g+e2) = 0 over GF(2) on Z^2",
        spec: ledrappier(),
        checks: ledrappier_checks,
    });
    out
}

pub fn names() -> Vec<&'static str> {
    entries().into_iter().map(|e| e.name).collect()
}

pub fn get(name: &str) -> Option<ZooEntry> {
    entries().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_validate() {
        let z = GroupSpec::lattice(1).unwrap();
        assert!(hard_square(z, &z.ball(1).unwrap()).is_err());
        assert_eq!(golden_mean().rule_diameter(), Some(1));
        assert_eq!(ledrappier().rule_diameter(), Some(2));
        assert_eq!(five_dot_cross().rule_diameter(), Some(2));
        assert!(full_shift(z, 0).is_err());
        let f2 = GroupSpec::free(2).unwrap();
        let ab: FiniteSubset = ["a", "b"]
            .iter()
            .map(|s| f2.parse_element(s).unwrap())
            .collect();
        assert!(hard_square(f2, &ab).is_ok());
    }

    #[test]
    fn catalogue_names_are_unique() {
        let names = names();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert!(get("golden-mean").is_some());
        assert!(get("tom").is_none());
    }
}
