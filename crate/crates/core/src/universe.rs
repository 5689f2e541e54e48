//! Measurement model over a deterministic universe.
//!
//! Properties are Gödel numbers of names over a finite language. A
//! [`PropertyTable`] assigns each property a value rule, either a machine run
//! under the loop guard or a closed-form function of `(k, t)`. Codes that are
//! not in the table are not properties, and measuring them yields the
//! [`MeasurementResult::UndefinedHolds`] sentinel rather than a value, which
//! keeps the state relation total without giving up uniqueness of values.
//!
//! Measurement logs are chronological `(t, m)` records. β-based prediction
//! indexes a log positionally: record `i` is β position `i`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;
use num_bigint::BigUint;
use num_rational::Ratio;

use crate::godel::{beta_enumerate_consistent, decode_string, encode_string, Alphabet, CodecError, GodelNumber};
use crate::guard::guarded_run;
use crate::tm::{MachineSpec, RunOutcome, TmError};

/// Window used by [`classify_property`] when the caller has no preference.
pub const DEFAULT_WINDOW: usize = 4;

/// Largest natural that may be written to a tape in unary.
pub const MAX_UNARY_ARG: u64 = 1 << 20;

pub type ClosedForm = Arc<dyn Fn(&GodelNumber, u64) -> GodelNumber + Send + Sync>;

/// What a machine-backed property receives on its tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputEncoding {
    /// `unary(t)`
    Time,
    /// `unary(k) _ unary(t)`; only usable for small property codes.
    PropertyAndTime,
}

#[derive(Clone)]
pub enum ValueRule {
    Machine { spec: MachineSpec, encoding: InputEncoding },
    ClosedForm(ClosedForm),
}

impl ValueRule {
    pub fn closed_form(f: impl Fn(&GodelNumber, u64) -> GodelNumber + Send + Sync + 'static) -> Self {
        ValueRule::ClosedForm(Arc::new(f))
    }
}

impl fmt::Debug for ValueRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueRule::Machine { spec, encoding } => {
                f.debug_struct("Machine").field("spec", &spec.name()).field("encoding", encoding).finish()
            }
            ValueRule::ClosedForm(_) => f.write_str("ClosedForm(..)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UniverseError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Machine(#[from] TmError),
    #[error("property name is empty")]
    EmptyPropertyName,
    #[error("{0} is not the code of a property name")]
    NotAPropertyCode(GodelNumber),
    #[error("property {0} is already defined")]
    DuplicateProperty(String),
    #[error("measurement budget must be at least 1")]
    ZeroBudget,
    #[error("value {0} is too large for unary input")]
    InputTooLarge(GodelNumber),
    #[error("machine {machine} halted with a tape that is not a unary numeral")]
    MalformedOutput { machine: String },
    #[error("records are not strictly chronological at index {0}")]
    NotChronological(usize),
    #[error("both logs contain t = {0}")]
    TimestampCollision(u64),
    #[error("logs describe different particles or properties")]
    MixedSubject,
    #[error("classification window must be at least 2, got {0}")]
    WindowTooSmall(usize),
    #[error("measurement of t = {t} did not produce a value")]
    NoValue { t: u64 },
}

/// Finite map from property codes to value rules.
#[derive(Debug, Clone)]
pub struct PropertyTable {
    language: Alphabet,
    entries: BTreeMap<GodelNumber, (String, ValueRule)>,
}

impl PropertyTable {
    pub fn new(language: Alphabet) -> Self {
        PropertyTable { language, entries: BTreeMap::new() }
    }

    pub fn language(&self) -> &Alphabet {
        &self.language
    }

    /// Registers `name` and returns its code.
    pub fn insert(&mut self, name: &str, rule: ValueRule) -> Result<GodelNumber, UniverseError> {
        if name.is_empty() {
            return Err(UniverseError::EmptyPropertyName);
        }
        let k = encode_string(&self.language, name)?;
        if self.entries.contains_key(&k) {
            return Err(UniverseError::DuplicateProperty(name.into()));
        }
        self.entries.insert(k.clone(), (name.into(), rule));
        Ok(k)
    }

    pub fn insert_code(&mut self, k: GodelNumber, rule: ValueRule) -> Result<(), UniverseError> {
        match decode_string(&self.language, &k) {
            Some(name) if !name.is_empty() => self.insert(&name, rule).map(|_| ()),
            _ => Err(UniverseError::NotAPropertyCode(k)),
        }
    }

    pub fn code(&self, name: &str) -> Result<GodelNumber, UniverseError> {
        Ok(encode_string(&self.language, name)?)
    }

    pub fn get(&self, k: &GodelNumber) -> Option<(&str, &ValueRule)> {
        self.entries.get(k).map(|(n, r)| (n.as_str(), r))
    }

    pub fn properties(&self) -> impl Iterator<Item = (&GodelNumber, &str)> {
        self.entries.iter().map(|(k, (n, _))| (k, n.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasurementResult {
    Value(GodelNumber),
    /// `k` is not a property, or its machine provably loops; the state
    /// relation holds by convention.
    UndefinedHolds,
    /// The budget ran out before the machine halted or repeated.
    Unresolved { budget: u64 },
}

impl fmt::Display for MeasurementResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurementResult::Value(m) => write!(f, "VALUE m={m}"),
            MeasurementResult::UndefinedHolds => f.write_str("UNDEFINED-HOLDS"),
            MeasurementResult::Unresolved { budget } => write!(f, "UNRESOLVED budget={budget}"),
        }
    }
}

fn unary_arg(v: &GodelNumber) -> Result<u64, UniverseError> {
    u64::try_from(&v.0).ok().filter(|&v| v <= MAX_UNARY_ARG).ok_or_else(|| UniverseError::InputTooLarge(v.clone()))
}

pub fn measure(table: &PropertyTable, k: &GodelNumber, t: u64, budget: u64) -> Result<MeasurementResult, UniverseError> {
    if budget == 0 {
        return Err(UniverseError::ZeroBudget);
    }
    let Some((_, rule)) = table.get(k) else {
        return Ok(MeasurementResult::UndefinedHolds);
    };
    match rule {
        ValueRule::ClosedForm(f) => Ok(MeasurementResult::Value(f(k, t))),
        ValueRule::Machine { spec, encoding } => {
            let t_arg = unary_arg(&GodelNumber::from(t))?;
            let args = match encoding {
                InputEncoding::Time => alloc::vec![t_arg],
                InputEncoding::PropertyAndTime => alloc::vec![unary_arg(k)?, t_arg],
            };
            let input = spec.unary_input(&args)?;
            match guarded_run(spec, &input, budget)? {
                RunOutcome::Halted { last, .. } => spec
                    .unary_output(&last)
                    .map(|m| MeasurementResult::Value(GodelNumber::from(m)))
                    .ok_or_else(|| UniverseError::MalformedOutput { machine: spec.name().into() }),
                RunOutcome::SelfTerminated { .. } => Ok(MeasurementResult::UndefinedHolds),
                RunOutcome::BudgetExhausted { .. } => Ok(MeasurementResult::Unresolved { budget }),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Holds,
    Fails,
    Unresolved,
}

/// Whether the state relation holds for `(k, m)` at instant `t`. At most one
/// `m` can hold for a given property and instant, since [`measure`] is a
/// function of `(k, t)`.
pub fn state_relation(
    table: &PropertyTable,
    k: &GodelNumber,
    m: &GodelNumber,
    t: u64,
    budget: u64,
) -> Result<Relation, UniverseError> {
    Ok(match measure(table, k, t, budget)? {
        MeasurementResult::Value(v) if &v == m => Relation::Holds,
        MeasurementResult::Value(_) => Relation::Fails,
        MeasurementResult::UndefinedHolds => Relation::Holds,
        MeasurementResult::Unresolved { .. } => Relation::Unresolved,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub t: u64,
    pub m: BigUint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Measured,
    Merged,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementLog {
    pub particle: String,
    pub property: GodelNumber,
    records: Vec<Record>,
    pub provenance: Provenance,
}

impl MeasurementLog {
    pub fn new(
        particle: &str,
        property: GodelNumber,
        records: Vec<Record>,
        provenance: Provenance,
    ) -> Result<Self, UniverseError> {
        if let Some(i) = records.windows(2).position(|w| w[0].t >= w[1].t) {
            return Err(UniverseError::NotChronological(i + 1));
        }
        Ok(MeasurementLog { particle: particle.into(), property, records, provenance })
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn values(&self) -> Vec<BigUint> {
        self.records.iter().map(|r| r.m.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Measures `k` at `t = 0..count` into a log. Every measurement must yield a
/// value.
pub fn measure_series(
    table: &PropertyTable,
    particle: &str,
    k: &GodelNumber,
    count: u64,
    budget: u64,
) -> Result<MeasurementLog, UniverseError> {
    let mut records = Vec::new();
    for t in 0..count {
        match measure(table, k, t, budget)? {
            MeasurementResult::Value(m) => records.push(Record { t, m: m.0 }),
            _ => return Err(UniverseError::NoValue { t }),
        }
    }
    MeasurementLog::new(particle, k.clone(), records, Provenance::Measured)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Deterministic,
    Random,
    Insufficient,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Deterministic => "DETERMINISTIC",
            Classification::Random => "RANDOM",
            Classification::Insufficient => "INSUFFICIENT",
        })
    }
}

/// A Cauchy sequence of naturals is eventually constant, so the last
/// `window` values being equal is the finite test for a deterministic
/// property.
pub fn classify_property(log: &MeasurementLog, window: usize) -> Result<Classification, UniverseError> {
    if window < 2 {
        return Err(UniverseError::WindowTooSmall(window));
    }
    let records = log.records();
    if records.len() < window {
        return Ok(Classification::Insufficient);
    }
    let tail = &records[records.len() - window..];
    Ok(if tail.iter().all(|r| r.m == tail[0].m) { Classification::Deterministic } else { Classification::Random })
}

/// Chronological union of two logs of the same particle and property.
pub fn merge_logs(a: &MeasurementLog, b: &MeasurementLog) -> Result<MeasurementLog, UniverseError> {
    if a.particle != b.particle || a.property != b.property {
        return Err(UniverseError::MixedSubject);
    }
    let mut records: Vec<Record> = a.records.iter().chain(&b.records).cloned().collect();
    records.sort_by_key(|r| r.t);
    if let Some(w) = records.windows(2).find(|w| w[0].t == w[1].t) {
        return Err(UniverseError::TimestampCollision(w[0].t));
    }
    MeasurementLog::new(&a.particle, a.property.clone(), records, Provenance::Merged)
}

/// Next-value estimate from the β-functions within a bounded `(b, c)` box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    /// Number of consistent `(b, c)` pairs.
    pub consistent: u64,
    /// Predicted next value and how many consistent pairs predict it.
    pub counts: BTreeMap<u64, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Estimate {
    pub value: u64,
    pub count: u64,
    pub probability: Ratio<u64>,
}

impl Prediction {
    pub fn is_empty(&self) -> bool {
        self.consistent == 0
    }

    pub fn probability(&self, m: u64) -> Ratio<u64> {
        match self.counts.get(&m) {
            Some(&n) => Ratio::new(n, self.consistent),
            None => Ratio::new(0, 1),
        }
    }

    /// Estimates by descending probability, then ascending value.
    pub fn ranked(&self) -> Vec<Estimate> {
        let mut out: Vec<Estimate> = self
            .counts
            .iter()
            .map(|(&value, &count)| Estimate { value, count, probability: Ratio::new(count, self.consistent) })
            .collect();
        out.sort_by_key(|e| (Reverse(e.count), e.value));
        out
    }
}

/// Probability of each candidate next value, proportional to the number of
/// β-functions in `0..=bound × 1..=bound` that reproduce the log and predict
/// that value at the next position.
pub fn predict_next(log: &MeasurementLog, bound: u64) -> Prediction {
    let next = log.len() as u128;
    let mut counts = BTreeMap::new();
    let pairs = beta_enumerate_consistent(&log.values(), bound);
    for &(b, c) in &pairs {
        let v = (b as u128 % (1 + (next + 1) * c as u128)) as u64;
        *counts.entry(v).or_insert(0) += 1;
    }
    Prediction { consistent: pairs.len() as u64, counts }
}

/// Predictions for a superposed log alongside those of its two components.
/// No ordering between them is asserted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperpositionReport {
    pub merged: MeasurementLog,
    pub merged_prediction: Prediction,
    pub first: Prediction,
    pub second: Prediction,
}

pub fn compare_superposition(
    a: &MeasurementLog,
    b: &MeasurementLog,
    bound: u64,
) -> Result<SuperpositionReport, UniverseError> {
    let merged = merge_logs(a, b)?;
    Ok(SuperpositionReport {
        merged_prediction: predict_next(&merged, bound),
        first: predict_next(a, bound),
        second: predict_next(b, bound),
        merged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::samples;
    use crate::tm::{MachineBuilder, Move};
    use alloc::vec;
    use proptest::prelude::*;

    fn table() -> PropertyTable {
        PropertyTable::new(Alphabet::new("abcdefghijklmnopqrstuvwxyz").unwrap())
    }

    fn log(values: &[u64]) -> MeasurementLog {
        let records = values.iter().enumerate().map(|(t, &m)| Record { t: t as u64, m: m.into() }).collect();
        MeasurementLog::new("p", GodelNumber::from(2), records, Provenance::Measured).unwrap()
    }

    fn timed(pairs: &[(u64, u64)]) -> MeasurementLog {
        let records = pairs.iter().map(|&(t, m)| Record { t, m: m.into() }).collect();
        MeasurementLog::new("p", GodelNumber::from(2), records, Provenance::Measured).unwrap()
    }

    fn spin() -> MachineSpec {
        let mut b = MachineBuilder::new("SPIN", "_");
        b.symbol("1").unwrap();
        b.start("s").unwrap().halt("h").unwrap();
        b.rule("s", "1", "1", Move::Stay, "s").unwrap();
        b.build().unwrap()
    }

    #[test]
    fn absent_property_is_undefined_holds() {
        let t = table();
        let k = GodelNumber::from(5);
        assert_eq!(measure(&t, &k, 3, 10).unwrap(), MeasurementResult::UndefinedHolds);
        assert_eq!(state_relation(&t, &k, &GodelNumber::from(9), 3, 10).unwrap(), Relation::Holds);
    }

    #[test]
    fn closed_form_value_and_relation() {
        let mut t = table();
        let k = t.insert("mass", ValueRule::closed_form(|_, _| GodelNumber::from(42))).unwrap();
        assert_eq!(measure(&t, &k, 0, 1).unwrap(), MeasurementResult::Value(GodelNumber::from(42)));
        assert_eq!(state_relation(&t, &k, &GodelNumber::from(42), 0, 1).unwrap(), Relation::Holds);
        assert_eq!(state_relation(&t, &k, &GodelNumber::from(41), 0, 1).unwrap(), Relation::Fails);
    }

    #[test]
    fn machine_values() {
        let mut t = table();
        let k = t.insert("charge", ValueRule::Machine { spec: emit_after_input(8), encoding: InputEncoding::Time });
        let k = k.unwrap();
        assert_eq!(measure(&t, &k, 0, 1000).unwrap(), MeasurementResult::Value(GodelNumber::from(7)));
        assert_eq!(measure(&t, &k, 5, 1000).unwrap(), MeasurementResult::Value(GodelNumber::from(7)));

        // "a" has code 2, so the tape is left holding "111_1".
        let rule = ValueRule::Machine { spec: samples::halt0(), encoding: InputEncoding::PropertyAndTime };
        let k = t.insert("a", rule.clone()).unwrap();
        assert!(matches!(measure(&t, &k, 0, 10), Err(UniverseError::MalformedOutput { .. })));
        let k = t.insert("tag", rule).unwrap();
        assert!(matches!(measure(&t, &k, 0, 10), Err(UniverseError::InputTooLarge(_))));
    }

    // Erases the unary input, then writes `strokes` ones and halts.
    fn emit_after_input(strokes: usize) -> MachineSpec {
        let mut b = MachineBuilder::new("EMIT_AFTER", "_");
        b.start("e").unwrap().halt("h").unwrap();
        b.rule("e", "1", "_", Move::Right, "e").unwrap();
        b.rule("e", "_", "1", Move::Right, "w1").unwrap();
        for i in 1..strokes {
            let to = if i + 1 == strokes { String::from("h") } else { alloc::format!("w{}", i + 1) };
            b.rule(&alloc::format!("w{i}"), "_", "1", Move::Right, &to).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn looping_and_budgeted_machines() {
        let mut t = table();
        let k = t.insert("spin", ValueRule::Machine { spec: spin(), encoding: InputEncoding::Time }).unwrap();
        assert_eq!(measure(&t, &k, 2, 100).unwrap(), MeasurementResult::UndefinedHolds);

        let k2 = t.insert("grow", ValueRule::Machine { spec: samples::unary_counter(), encoding: InputEncoding::Time });
        let k2 = k2.unwrap();
        assert_eq!(measure(&t, &k2, 0, 50).unwrap(), MeasurementResult::Unresolved { budget: 50 });
        assert_eq!(state_relation(&t, &k2, &GodelNumber::from(0), 0, 50).unwrap(), Relation::Unresolved);
        assert_eq!(measure(&t, &k2, 0, 0), Err(UniverseError::ZeroBudget));
    }

    #[test]
    fn table_keys_must_decode() {
        let mut t = table();
        assert_eq!(
            t.insert_code(GodelNumber::from(5), ValueRule::closed_form(|_, _| GodelNumber::from(0))),
            Err(UniverseError::NotAPropertyCode(GodelNumber::from(5)))
        );
        assert_eq!(
            t.insert_code(GodelNumber::from(1), ValueRule::closed_form(|_, _| GodelNumber::from(0))),
            Err(UniverseError::NotAPropertyCode(GodelNumber::from(1)))
        );
        // "a" is code 2
        t.insert_code(GodelNumber::from(2), ValueRule::closed_form(|_, _| GodelNumber::from(0))).unwrap();
        assert_eq!(t.get(&GodelNumber::from(2)).unwrap().0, "a");
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_property(&log(&[5, 5, 5, 5]), 3).unwrap(), Classification::Deterministic);
        assert_eq!(classify_property(&log(&[1, 2, 1, 2, 1]), 3).unwrap(), Classification::Random);
        assert_eq!(classify_property(&log(&[9]), 2).unwrap(), Classification::Insufficient);
        assert_eq!(classify_property(&log(&[9]), 1), Err(UniverseError::WindowTooSmall(1)));
    }

    #[test]
    fn merge_examples() {
        let m = merge_logs(&timed(&[(0, 3)]), &timed(&[(1, 5)])).unwrap();
        assert_eq!(m.values(), vec![BigUint::from(3u32), BigUint::from(5u32)]);
        assert_eq!(m.provenance, Provenance::Merged);
        let m = merge_logs(&timed(&[(1, 3)]), &timed(&[(0, 5)])).unwrap();
        assert_eq!(m.records()[0], Record { t: 0, m: 5u32.into() });
        assert_eq!(merge_logs(&timed(&[(0, 3)]), &timed(&[(0, 5)])), Err(UniverseError::TimestampCollision(0)));
        let mut other = timed(&[(4, 1)]);
        other.particle = "q".into();
        assert_eq!(merge_logs(&timed(&[(0, 3)]), &other), Err(UniverseError::MixedSubject));
    }

    #[test]
    fn logs_must_be_chronological() {
        let r = vec![Record { t: 2, m: 0u32.into() }, Record { t: 2, m: 1u32.into() }];
        assert_eq!(
            MeasurementLog::new("p", GodelNumber::from(2), r, Provenance::Measured),
            Err(UniverseError::NotChronological(1))
        );
    }

    #[test]
    fn predict_single_zero() {
        let p = predict_next(&log(&[0]), 2);
        assert_eq!(p.consistent, 3);
        assert_eq!(p.probability(0), Ratio::new(2, 3));
        assert_eq!(p.probability(2), Ratio::new(1, 3));
        let ranked = p.ranked();
        assert_eq!((ranked[0].value, ranked[0].count), (0, 2));
        assert_eq!((ranked[1].value, ranked[1].count), (2, 1));
    }

    #[test]
    fn predict_empty_set() {
        let p = predict_next(&log(&[7]), 3);
        assert!(p.is_empty());
        assert!(p.ranked().is_empty());
    }

    proptest! {
        #[test]
        fn prediction_is_a_distribution(values in prop::collection::vec(0u64..5, 1..4), bound in 1u64..30) {
            let p = predict_next(&log(&values), bound);
            if !p.is_empty() {
                let total = p.ranked().iter().fold(Ratio::new(0u64, 1), |acc, e| acc + e.probability);
                prop_assert_eq!(total, Ratio::new(1, 1));
            }
        }

        #[test]
        fn appending_never_enlarges(values in prop::collection::vec(0u64..5, 1..4), x in 0u64..5, bound in 1u64..30) {
            let before = predict_next(&log(&values), bound).consistent;
            let mut ext = values.clone();
            ext.push(x);
            prop_assert!(predict_next(&log(&ext), bound).consistent <= before);
        }
    }
}
