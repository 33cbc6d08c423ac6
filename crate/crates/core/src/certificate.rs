//! Self-contained JSON-lines certificates for counterexamples, pair and
//! homoclinic witnesses, and independence sets.
//!
//! A certificate embeds the canonical spec text, so it can be rechecked
//! without the original file. The `digest` is a SHA-256 over the kind, spec
//! hash, level and payload; [`Certificate::verify`] recomputes it and then
//! re-runs every semantic check.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::budget::SearchConfig;
use crate::entropy::{verify_independence, IndependenceReport};
use crate::error::{Error, Result};
use crate::format::{parse_spec, serialize_spec, sha256_hex, spec_hash};
use crate::group::{FiniteSubset, GroupSpec};
use crate::pattern::Pattern;
use crate::spec::{AdmissibilityLevel, SubshiftSpec};
use crate::tmp::{Counterexample, HomoclinicWitness, PairWitness};

pub const COUNTEREXAMPLE: &str = "counterexample";
pub const PAIR: &str = "pair";
pub const HOMOCLINIC: &str = "homoclinic";
pub const INDEPENDENCE: &str = "independence";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub kind: String,
    pub spec_hash: String,
    pub level: String,
    pub spec: String,
    pub payload: Value,
    pub digest: String,
}

type Pairs = Vec<(String, String)>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CounterexamplePayload {
    inner: Vec<String>,
    outer: Vec<String>,
    x: Pairs,
    y: Pairs,
    splice: Pairs,
    violation: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairPayload {
    inner: Vec<String>,
    p: Pairs,
    q: Pairs,
    context: Pairs,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomoclinicPayload {
    background: String,
    radius: u32,
    margin: u32,
    pattern: Pairs,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndependencePayload {
    cylinders: Vec<Pairs>,
    ambient: Vec<String>,
    best: Vec<String>,
}

fn set_out(s: &FiniteSubset) -> Vec<String> {
    s.iter().map(|g| g.to_string()).collect()
}

fn set_in(group: &GroupSpec, v: &[String]) -> Result<FiniteSubset> {
    v.iter().map(|g| group.parse_element(g)).collect()
}

fn pat_out(spec: &SubshiftSpec, p: &Pattern) -> Pairs {
    p.iter()
        .map(|(g, s)| (g.to_string(), spec.alphabet().name(s).to_string()))
        .collect()
}

fn pat_in(spec: &SubshiftSpec, v: &Pairs) -> Result<Pattern> {
    let mut pairs = Vec::with_capacity(v.len());
    for (g, s) in v {
        let sym = spec
            .alphabet()
            .symbol(s)
            .ok_or_else(|| Error::Rejected(format!("unknown symbol `{s}`")))?;
        pairs.push((spec.group().parse_element(g)?, sym));
    }
    let p = Pattern::from_pairs(pairs)?;
    if p.len() != v.len() {
        return Err(Error::Rejected("repeated site in a pattern".into()));
    }
    Ok(p)
}

fn digest_of(kind: &str, spec_hash: &str, level: &str, payload: &Value) -> String {
    let body = json!({
        "kind": kind,
        "spec_hash": spec_hash,
        "level": level,
        "payload": payload,
    });
    sha256_hex(body.to_string().as_bytes())
}

fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Rejected(msg.into()))
}

impl Certificate {
    fn seal(
        spec: &SubshiftSpec,
        kind: &str,
        level: AdmissibilityLevel,
        payload: impl Serialize,
    ) -> Self {
        let payload = serde_json::to_value(payload).expect("payload serializes");
        let hash = spec_hash(spec);
        let level = level.to_string();
        Self {
            digest: digest_of(kind, &hash, &level, &payload),
            kind: kind.to_string(),
            spec_hash: hash,
            level,
            spec: serialize_spec(spec),
            payload,
        }
    }

    pub fn counterexample(spec: &SubshiftSpec, c: &Counterexample) -> Self {
        let payload = CounterexamplePayload {
            inner: set_out(&c.inner),
            outer: set_out(&c.outer),
            x: pat_out(spec, &c.x),
            y: pat_out(spec, &c.y),
            splice: pat_out(spec, &c.splice),
            violation: c.violation.as_ref().map(set_out),
        };
        Self::seal(spec, COUNTEREXAMPLE, c.level, payload)
    }

    pub fn pair(spec: &SubshiftSpec, w: &PairWitness) -> Self {
        let payload = PairPayload {
            inner: set_out(&w.inner),
            p: pat_out(spec, &w.p),
            q: pat_out(spec, &w.q),
            context: pat_out(spec, &w.context),
        };
        Self::seal(spec, PAIR, w.level, payload)
    }

    /// Homoclinic witnesses are checked for local admissibility, recorded
    /// as `local:<margin>`.
    pub fn homoclinic(spec: &SubshiftSpec, w: &HomoclinicWitness) -> Self {
        let payload = HomoclinicPayload {
            background: spec.alphabet().name(w.background).to_string(),
            radius: w.radius,
            margin: w.margin,
            pattern: pat_out(spec, &w.pattern),
        };
        Self::seal(
            spec,
            HOMOCLINIC,
            AdmissibilityLevel::LocalMargin(w.margin),
            payload,
        )
    }

    pub fn independence(spec: &SubshiftSpec, r: &IndependenceReport) -> Self {
        let payload = IndependencePayload {
            cylinders: r.cylinders.iter().map(|c| pat_out(spec, c)).collect(),
            ambient: set_out(&r.ambient),
            best: set_out(&r.best),
        };
        Self::seal(spec, INDEPENDENCE, r.level, payload)
    }

    /// Recomputes the digest after fields were edited. The payload's claims
    /// are still checked by [`Certificate::verify`].
    pub fn reseal(&mut self) {
        self.digest = digest_of(&self.kind, &self.spec_hash, &self.level, &self.payload);
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_line(line: &str) -> Result<Self> {
        serde_json::from_str(line)
            .map_err(|e| Error::Rejected(format!("malformed certificate: {e}")))
    }

    /// Recomputes the spec hash and digest, then rechecks the payload's
    /// claims. Any failure is an [`Error::Rejected`].
    pub fn verify(&self, cfg: &SearchConfig) -> Result<()> {
        let spec = parse_spec(&self.spec).or_else(|e| reject(format!("embedded spec: {e}")))?;
        if serialize_spec(&spec) != self.spec {
            return reject("embedded spec is not in canonical form");
        }
        if spec_hash(&spec) != self.spec_hash {
            return reject("spec hash does not match the embedded spec");
        }
        if digest_of(&self.kind, &self.spec_hash, &self.level, &self.payload) != self.digest {
            return reject("digest mismatch");
        }
        let level: AdmissibilityLevel = self
            .level
            .parse()
            .or_else(|e: Error| reject(e.to_string()))?;
        let payload = self.payload.clone();
        let bad = |e: serde_json::Error| Error::Rejected(format!("malformed payload: {e}"));
        let group = spec.group();
        let ok = match self.kind.as_str() {
            COUNTEREXAMPLE => {
                let p: CounterexamplePayload = serde_json::from_value(payload).map_err(bad)?;
                let c = Counterexample {
                    inner: set_in(group, &p.inner)?,
                    outer: set_in(group, &p.outer)?,
                    level,
                    x: pat_in(&spec, &p.x)?,
                    y: pat_in(&spec, &p.y)?,
                    splice: pat_in(&spec, &p.splice)?,
                    violation: p
                        .violation
                        .as_deref()
                        .map(|v| set_in(group, v))
                        .transpose()?,
                };
                if let Some(v) = &c.violation {
                    let sites = c.splice.restrict(v);
                    if sites.len() != v.len() || !crate::csp::pattern_violates(&spec, &sites)? {
                        return reject("recorded violation does not occur in the splice");
                    }
                }
                c.validate(&spec, cfg)?
            }
            PAIR => {
                let p: PairPayload = serde_json::from_value(payload).map_err(bad)?;
                let w = PairWitness {
                    inner: set_in(group, &p.inner)?,
                    level,
                    p: pat_in(&spec, &p.p)?,
                    q: pat_in(&spec, &p.q)?,
                    context: pat_in(&spec, &p.context)?,
                };
                w.validate(&spec, cfg)?
            }
            HOMOCLINIC => {
                let p: HomoclinicPayload = serde_json::from_value(payload).map_err(bad)?;
                if level != AdmissibilityLevel::LocalMargin(p.margin) {
                    return reject("level does not match the margin");
                }
                let background = spec
                    .alphabet()
                    .symbol(&p.background)
                    .ok_or_else(|| Error::Rejected("unknown background symbol".into()))?;
                let w = HomoclinicWitness {
                    background,
                    radius: p.radius,
                    margin: p.margin,
                    pattern: pat_in(&spec, &p.pattern)?,
                };
                w.validate(&spec)?
            }
            INDEPENDENCE => {
                let p: IndependencePayload = serde_json::from_value(payload).map_err(bad)?;
                let ambient = set_in(group, &p.ambient)?;
                let best = set_in(group, &p.best)?;
                let report = IndependenceReport {
                    cylinders: p
                        .cylinders
                        .iter()
                        .map(|c| pat_in(&spec, c))
                        .collect::<Result<_>>()?,
                    density: best.len() as f64 / ambient.len().max(1) as f64,
                    ambient,
                    best,
                    level,
                    complete: true,
                };
                verify_independence(&spec, &report, cfg)?
            }
            other => return reject(format!("unknown certificate kind `{other}`")),
        };
        if ok {
            Ok(())
        } else {
            reject(format!("{} claims do not hold", self.kind))
        }
    }
}

/// Parses a JSON-lines document, skipping blank lines.
pub fn parse_certificates(text: &str) -> Result<Vec<Certificate>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(Certificate::from_line)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use crate::tmp::{
        check_memory_set, find_interchangeable_pair, homoclinic_search, HomoclinicOutcome,
        PairOutcome, SpliceProblem,
    };
    use crate::zoo;

    fn interval(a: i64, b: i64) -> FiniteSubset {
        (a..=b).map(|i| GroupElement::Lattice(vec![i])).collect()
    }

    fn sample() -> Vec<Certificate> {
        let cfg = SearchConfig::default();
        let sunny = zoo::sunny_side_up(GroupSpec::lattice(1).unwrap());
        let prob = SpliceProblem::new(
            interval(0, 0),
            interval(0, 3),
            interval(0, 5),
            AdmissibilityLevel::LocalMargin(0),
        )
        .unwrap();
        let v = check_memory_set(&sunny, &prob, &cfg).unwrap();
        let gm = zoo::golden_mean();
        let PairOutcome::Witness(pair) = find_interchangeable_pair(
            &gm,
            &interval(0, 0),
            &interval(-2, 2),
            AdmissibilityLevel::ExactZ,
            &cfg,
        )
        .unwrap() else {
            panic!()
        };
        let HomoclinicOutcome::Witness(h) = homoclinic_search(&gm, 0, 1, None, &cfg).unwrap()
        else {
            panic!()
        };
        vec![
            Certificate::counterexample(&sunny, v.counterexample().unwrap()),
            Certificate::pair(&gm, &pair),
            Certificate::homoclinic(&gm, &h),
        ]
    }

    #[test]
    fn emitted_certificates_verify() {
        let cfg = SearchConfig::default();
        let certs = sample();
        let text: String = certs.iter().map(|c| c.to_line() + "\n").collect();
        let parsed = parse_certificates(&text).unwrap();
        assert_eq!(parsed, certs);
        for c in &parsed {
            c.verify(&cfg).unwrap();
        }
    }

    #[test]
    fn tampering_is_rejected() {
        let cfg = SearchConfig::default();
        for c in sample() {
            let mut m = c.clone();
            m.level = "local:7".into();
            assert!(m.verify(&cfg).is_err());
            let mut m = c.clone();
            m.spec = m.spec.replace("Z", "Z^2");
            assert!(m.verify(&cfg).is_err());
            let mut m = c.clone();
            let line = m.to_line().replacen("\"1\"]", "\"0\"]", 1);
            m = Certificate::from_line(&line).unwrap();
            assert!(m.verify(&cfg).is_err());
        }
    }

    #[test]
    fn resealed_false_claims_are_rejected() {
        let cfg = SearchConfig::default();
        for c in sample() {
            let mut same = c.clone();
            same.reseal();
            assert_eq!(same, c);
            let mut m = c.clone();
            let line = serde_json::to_string(&m.payload)
                .unwrap()
                .replacen("\"1\"]", "\"0\"]", 1);
            m.payload = serde_json::from_str(&line).unwrap();
            m.reseal();
            assert_ne!(m.payload, c.payload);
            assert!(
                matches!(m.verify(&cfg), Err(Error::Rejected(_))),
                "{}",
                m.kind
            );
        }
    }
}
