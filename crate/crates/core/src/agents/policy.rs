//! Tabular policies and their text serialization.
//!
//! File layout: the header line, then one tab-separated record per info set
//! in key order:
//!
//! ```text
//! cardtable-policy v1
//! 0|h=J;p=-;b=;c=1,1	0,1,2	0.250000000000,0.500000000000,0.250000000000
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::argmax;
use crate::env::{Agent, InfoSetKey, Observation};
use crate::error::{Error, Result};
use crate::game::ActionId;
use crate::num::Scalar;
use crate::rng::Rng;

pub const POLICY_HEADER: &str = "cardtable-policy v1";

const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyEntry<F> {
    pub actions: Vec<ActionId>,
    pub probs: Vec<F>,
}

/// Probability vectors over the legal ids of each info set.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyTable<F> {
    entries: BTreeMap<InfoSetKey, PolicyEntry<F>>,
}

impl<F: Scalar> Default for PolicyTable<F> {
    fn default() -> Self {
        PolicyTable { entries: BTreeMap::new() }
    }
}

impl<F: Scalar> PolicyTable<F> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces an info set. Rejects vectors that are not a
    /// distribution over `actions`.
    pub fn insert(&mut self, key: InfoSetKey, actions: Vec<ActionId>, probs: Vec<F>) -> Result<()> {
        validate(&key, &actions, &probs)?;
        self.entries.insert(key, PolicyEntry { actions, probs });
        Ok(())
    }

    pub fn get(&self, key: &InfoSetKey) -> Option<&PolicyEntry<F>> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&InfoSetKey, &PolicyEntry<F>)> {
        self.entries.iter()
    }

    /// Probabilities aligned with `legal`. Unknown info sets, or ones stored
    /// with a different legal set, are played uniformly.
    pub fn probs(&self, key: &InfoSetKey, legal: &[ActionId]) -> Vec<F> {
        match self.entries.get(key) {
            Some(e) if e.actions == legal => e.probs.clone(),
            _ => vec![F::one() / F::count(legal.len()); legal.len()],
        }
    }

    pub fn to_f64(&self) -> PolicyTable<f64> {
        PolicyTable {
            entries: self
                .entries
                .iter()
                .map(|(k, e)| {
                    let probs = e.probs.iter().map(|p| p.as_f64()).collect();
                    (k.clone(), PolicyEntry { actions: e.actions.clone(), probs })
                })
                .collect(),
        }
    }

    /// Canonical text form; identical tables give identical bytes.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(64 * self.entries.len() + 32);
        out.push_str(POLICY_HEADER);
        out.push('\n');
        for (key, e) in &self.entries {
            out.push_str(key.as_str());
            out.push('\t');
            join(&mut out, e.actions.iter().map(|a| a.to_string()));
            out.push('\t');
            join(&mut out, e.probs.iter().map(|p| format!("{:.12}", p.as_f64())));
            out.push('\n');
        }
        out
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Parses the text form. `origin` names the source in error messages.
    pub fn read_from<R: Read>(input: R, origin: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            path: origin.to_owned(),
            line,
            message,
        };
        let mut table = PolicyTable::new();
        let mut lines = BufReader::new(input).lines();
        match lines.next() {
            Some(Ok(h)) if h == POLICY_HEADER => {}
            Some(Ok(h)) => return Err(err(1, format!("bad header `{h}`"))),
            Some(Err(e)) => return Err(err(1, e.to_string())),
            None => return Err(err(1, "empty file".into())),
        }
        for (i, line) in lines.enumerate() {
            let n = i + 2;
            let line = line.map_err(|e| err(n, e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(err(n, format!("expected 3 fields, found {}", fields.len())));
            }
            let actions = split_list(fields[1], |s| s.parse::<ActionId>().ok())
                .ok_or_else(|| err(n, format!("bad action list `{}`", fields[1])))?;
            let probs = split_list(fields[2], |s| s.parse::<f64>().ok().map(F::lit))
                .ok_or_else(|| err(n, format!("bad probability list `{}`", fields[2])))?;
            let key = InfoSetKey::from_string(fields[0].to_owned());
            table
                .insert(key, actions, probs)
                .map_err(|e| err(n, e.to_string()))?;
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        Self::read_from(file, &path.display().to_string())
    }
}

fn validate<F: Scalar>(key: &InfoSetKey, actions: &[ActionId], probs: &[F]) -> Result<()> {
    let bad = |why: &str| Err(Error::InvalidParam(format!("policy at `{key}`: {why}")));
    if actions.is_empty() || actions.len() != probs.len() {
        return bad("probabilities do not match the legal actions");
    }
    if actions.windows(2).any(|w| w[0] >= w[1]) {
        return bad("legal actions must be strictly increasing");
    }
    if probs.iter().any(|p| !p.is_finite() || *p < F::zero()) {
        return bad("negative or non-finite probability");
    }
    let sum: f64 = probs.iter().map(|p| p.as_f64()).sum();
    let tol = SUM_TOLERANCE.max(4.0 * probs.len() as f64 * F::epsilon().as_f64());
    if (sum - 1.0).abs() > tol {
        return bad("probabilities do not sum to 1");
    }
    Ok(())
}

fn join(out: &mut String, items: impl Iterator<Item = String>) {
    for (i, s) in items.enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{s}");
    }
}

fn split_list<T>(s: &str, parse: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    s.split(',').map(parse).collect()
}

/// Plays a frozen policy table.
///
/// `eval_step` takes the most probable action (lowest id on ties);
/// `sample_step` draws from the stored distribution.
#[derive(Debug, Clone)]
pub struct PolicyAgent<F> {
    table: std::sync::Arc<PolicyTable<F>>,
}

impl<F: Scalar> PolicyAgent<F> {
    pub fn new(table: PolicyTable<F>) -> Self {
        PolicyAgent { table: std::sync::Arc::new(table) }
    }

    pub fn table(&self) -> &PolicyTable<F> {
        &self.table
    }
}

impl<F: Scalar> Agent for PolicyAgent<F> {
    fn eval_step(&self, obs: &Observation, _rng: &mut Rng) -> ActionId {
        let probs = self.table.probs(&obs.info_key(), &obs.legal_actions);
        obs.legal_actions[argmax(&probs)]
    }

    fn sample_step(&self, obs: &Observation, rng: &mut Rng) -> ActionId {
        let probs: Vec<f64> = self
            .table
            .probs(&obs.info_key(), &obs.legal_actions)
            .into_iter()
            .map(Scalar::as_f64)
            .collect();
        obs.legal_actions[rng.weighted(&probs)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(s: &str) -> InfoSetKey {
        InfoSetKey::from_string(s.to_owned())
    }

    #[test]
    fn text_round_trip() {
        let mut t = PolicyTable::<f64>::new();
        t.insert(key("1|b"), vec![0, 2], vec![0.25, 0.75]).unwrap();
        t.insert(key("0|a"), vec![0, 1, 3], vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).unwrap();
        let text = t.to_text();
        assert!(text.starts_with("cardtable-policy v1\n0|a\t0,1,3\t0.333333333333,"));
        let back = PolicyTable::<f64>::read_from(text.as_bytes(), "mem").unwrap();
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn rejects_non_distributions() {
        let mut t = PolicyTable::<f64>::new();
        assert!(t.insert(key("k"), vec![0, 1], vec![0.5, 0.6]).is_err());
        assert!(t.insert(key("k"), vec![0, 1], vec![1.5, -0.5]).is_err());
        assert!(t.insert(key("k"), vec![1, 0], vec![0.5, 0.5]).is_err());
        assert!(t.insert(key("k"), vec![0], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "cardtable-policy v1\n0|a\t0,1\t0.5,0.5\n0|b\t0,x\t0.5,0.5\n";
        match PolicyTable::<f64>::read_from(text.as_bytes(), "p.txt") {
            Err(Error::Parse { path, line, .. }) => {
                assert_eq!(path, "p.txt");
                assert_eq!(line, 3);
            }
            other => panic!("{other:?}"),
        }
        assert!(PolicyTable::<f64>::read_from("nope\n".as_bytes(), "p").is_err());
    }

    #[test]
    fn unknown_info_sets_are_uniform() {
        let t = PolicyTable::<f32>::new();
        assert_eq!(t.probs(&key("x"), &[3, 4]), vec![0.5f32, 0.5]);
    }
}
